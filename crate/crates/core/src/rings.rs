//! Exact arithmetic in ℤ, the real quadratic rings ℤ[√d], and the Gaussian
//! integers ℤ[i].
//!
//! Elements are stored as coefficient pairs `a + b·ω` with arbitrary-precision
//! components, where ω is √d or i depending on the ring. Conjugation and the
//! norm `N(x) = x·conj(x)` are first-class operations; every congruence
//! argument downstream relies on them being exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Errors from ring construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("invalid ring parameter d={0}: {1}")]
    InvalidRing(i64, String),
    #[error("element {0} does not belong to {1}")]
    InvalidElement(String, Ring),
}

/// Descriptor of a coefficient ring: ℤ, ℤ[√d] with d ≥ 2 square-free, or ℤ[i].
///
/// ℤ[i] behaves like the d = −1 case but keeps its own tag so that payloads
/// and error messages stay unambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    /// The rational integers ℤ.
    Int,
    /// ℤ[√d] for a square-free d ≥ 2.
    Quad(i64),
    /// The Gaussian integers ℤ[i].
    Gauss,
}

/// True iff no prime square divides `d`.
pub fn is_square_free(d: i64) -> bool {
    if d <= 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl Ring {
    /// Builds the ℤ[√d] descriptor, rejecting d < 2 and non-square-free d.
    pub fn quad(d: i64) -> Result<Ring, RingError> {
        if d < 2 {
            return Err(RingError::InvalidRing(
                d,
                "only d >= 2 is supported (use Ring::Gauss for d = -1)".into(),
            ));
        }
        if !is_square_free(d) {
            return Err(RingError::InvalidRing(d, "d must be square-free".into()));
        }
        Ok(Ring::Quad(d))
    }

    /// ω² as a rational integer: d for ℤ[√d], −1 for ℤ[i], 0 for ℤ.
    pub fn omega_squared(&self) -> i64 {
        match self {
            Ring::Int => 0,
            Ring::Quad(d) => *d,
            Ring::Gauss => -1,
        }
    }

    /// Element `a + b·ω` of this ring.
    pub fn element(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<RingElement, RingError> {
        let (a, b) = (a.into(), b.into());
        if *self == Ring::Int && !b.is_zero() {
            return Err(RingError::InvalidElement(format!("{a}+{b}w"), *self));
        }
        Ok(RingElement { a, b, ring: *self })
    }

    /// The rational integer `a` viewed in this ring.
    pub fn int(&self, a: impl Into<BigInt>) -> RingElement {
        RingElement {
            a: a.into(),
            b: BigInt::zero(),
            ring: *self,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.int(0)
    }

    pub fn one(&self) -> RingElement {
        self.int(1)
    }

    /// ω itself (√d or i). For ℤ this is 0·ω = 0, which callers should avoid.
    pub fn omega(&self) -> Result<RingElement, RingError> {
        self.element(0, 1)
    }

    fn expect_same(&self, other: &Ring) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::RingMismatch(*self, *other))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "Z"),
            Ring::Quad(d) => write!(f, "Z[sqrt {d}]"),
            Ring::Gauss => write!(f, "Z[i]"),
        }
    }
}

/// An exact element `a + b·ω` of a [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    a: BigInt,
    b: BigInt,
    ring: Ring,
}

impl RingElement {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Rational component.
    pub fn re(&self) -> &BigInt {
        &self.a
    }

    /// ω-component.
    pub fn om(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True iff the ω-component vanishes.
    pub fn is_rational_integer(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.ring.expect_same(&other.ring)?;
        Ok(RingElement {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            ring: self.ring,
        })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.ring.expect_same(&other.ring)?;
        Ok(RingElement {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            ring: self.ring,
        })
    }

    /// Product in the ring: (a+bω)(a′+b′ω) = aa′ + bb′ω² + (ab′+a′b)ω.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.ring.expect_same(&other.ring)?;
        let w2 = BigInt::from(self.ring.omega_squared());
        Ok(RingElement {
            a: &self.a * &other.a + &self.b * &other.b * w2,
            b: &self.a * &other.b + &self.b * &other.a,
            ring: self.ring,
        })
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            a: -&self.a,
            b: -&self.b,
            ring: self.ring,
        }
    }

    /// conj(a + bω) = a − bω; the identity on ℤ.
    pub fn conj(&self) -> RingElement {
        RingElement {
            a: self.a.clone(),
            b: -&self.b,
            ring: self.ring,
        }
    }

    /// N(x) = x·conj(x); always has zero ω-component.
    pub fn norm(&self) -> RingElement {
        let w2 = BigInt::from(self.ring.omega_squared());
        RingElement {
            a: &self.a * &self.a - &self.b * &self.b * w2,
            b: BigInt::zero(),
            ring: self.ring,
        }
    }

    /// (conj(x), norm(x)) as a pair.
    pub fn conj_norm(&self) -> (RingElement, RingElement) {
        (self.conj(), self.norm())
    }

    pub fn pow(&self, mut e: u64) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Exact division: the q with q·other = self, if it exists in the ring.
    ///
    /// Solves via the norm: q = self·conj(other) / N(other), requiring both
    /// components to divide exactly.
    pub fn checked_div(&self, other: &RingElement) -> Result<Option<RingElement>, RingError> {
        self.ring.expect_same(&other.ring)?;
        if other.is_zero() {
            return Ok(None);
        }
        let num = self.mul(&other.conj())?;
        let den = other.norm().a;
        let (qa, ra) = num_integer::div_rem(num.a, den.clone());
        let (qb, rb) = num_integer::div_rem(num.b, den);
        if ra.is_zero() && rb.is_zero() {
            Ok(Some(RingElement {
                a: qa,
                b: qb,
                ring: self.ring,
            }))
        } else {
            Ok(None)
        }
    }

    /// Component-wise lexicographic comparison, used for deterministic scans.
    pub fn cmp_lex(&self, other: &RingElement) -> std::cmp::Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }

    /// Both components as i64, when they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        use num_traits::ToPrimitive;
        Some((self.a.to_i64()?, self.b.to_i64()?))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let unit = match self.ring {
            Ring::Int => "w",
            Ring::Quad(d) => return fmt_with_unit(f, &self.a, &self.b, &format!("\u{221a}{d}")),
            Ring::Gauss => "i",
        };
        fmt_with_unit(f, &self.a, &self.b, unit)
    }
}

fn fmt_with_unit(f: &mut fmt::Formatter<'_>, a: &BigInt, b: &BigInt, unit: &str) -> fmt::Result {
    if a.is_zero() {
        if b.is_one() {
            return write!(f, "{unit}");
        }
        if (-b).is_one() {
            return write!(f, "-{unit}");
        }
        return write!(f, "{b}{unit}");
    }
    write!(f, "{a}")?;
    if b.is_one() {
        write!(f, "+{unit}")
    } else if (-b).is_one() {
        write!(f, "-{unit}")
    } else if b.is_negative() {
        write!(f, "{b}{unit}")
    } else {
        write!(f, "+{b}{unit}")
    }
}

// --- JSON forms -------------------------------------------------------------
//
// Rings serialize as "Z" | {"quad": d} | "gauss"; elements as two-integer
// tuples [a, b]. Components are emitted as genuine JSON integers via
// serde_json's arbitrary-precision numbers, so nothing is clipped at 2^53.

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ring::Int => s.serialize_str("Z"),
            Ring::Gauss => s.serialize_str("gauss"),
            Ring::Quad(d) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("quad", d)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Quad { quad: i64 },
        }
        match Repr::deserialize(d)? {
            Repr::Tag(t) if t == "Z" => Ok(Ring::Int),
            Repr::Tag(t) if t == "gauss" => Ok(Ring::Gauss),
            Repr::Tag(t) => Err(D::Error::custom(format!("unknown ring tag {t:?}"))),
            Repr::Quad { quad } => Ring::quad(quad).map_err(D::Error::custom),
        }
    }
}

pub(crate) fn bigint_to_json_number<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let n: serde_json::Number = x
        .to_string()
        .parse()
        .map_err(|e| serde::ser::Error::custom(format!("bigint to json: {e}")))?;
    n.serialize(s)
}

pub(crate) fn bigint_from_json_number<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let n = serde_json::Number::deserialize(d)?;
    n.to_string()
        .parse::<BigInt>()
        .map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
}

#[derive(Serialize, Deserialize)]
struct ElemRepr(
    #[serde(
        serialize_with = "bigint_to_json_number",
        deserialize_with = "bigint_from_json_number"
    )]
    BigInt,
    #[serde(
        serialize_with = "bigint_to_json_number",
        deserialize_with = "bigint_from_json_number"
    )]
    BigInt,
);

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElemRepr(self.a.clone(), self.b.clone()).serialize(s)
    }
}

/// Coefficient pair without a ring tag; callers attach the ring from context.
pub fn element_from_parts(ring: Ring, a: BigInt, b: BigInt) -> Result<RingElement, RingError> {
    ring.element(a, b)
}

impl RingElement {
    /// Deserializes an `[a, b]` pair into the given ring.
    pub fn deserialize_in_ring<'de, D: Deserializer<'de>>(
        ring: Ring,
        d: D,
    ) -> Result<RingElement, D::Error> {
        let ElemRepr(a, b) = ElemRepr::deserialize(d)?;
        ring.element(a, b).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> Ring {
        Ring::quad(2).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        assert!(Ring::quad(2).is_ok());
        assert!(Ring::quad(3).is_ok());
        assert!(Ring::quad(5).is_ok());
        assert!(Ring::quad(6).is_ok());
        assert!(Ring::quad(1).is_err());
        assert!(Ring::quad(0).is_err());
        assert!(Ring::quad(-1).is_err(), "gaussians carry their own tag");
        assert!(Ring::quad(4).is_err());
        assert!(Ring::quad(12).is_err());
        assert!(Ring::quad(18).is_err());
    }

    #[test]
    fn square_free_by_trial_division() {
        let free: Vec<i64> = (1..60).filter(|&d| is_square_free(d)).collect();
        // oracle: sieve by divisibility against all squares up to the bound
        let oracle: Vec<i64> = (1..60)
            .filter(|&d| (2..=7).all(|p: i64| d % (p * p) != 0))
            .collect();
        assert_eq!(free, oracle);
    }

    #[test]
    fn addition_examples() {
        let r = q2();
        let x = r.element(1, 1).unwrap();
        let y = r.element(2, 3).unwrap();
        assert_eq!(x.add(&y).unwrap(), r.element(3, 4).unwrap());

        let g = Ring::Gauss;
        let z = g.zero();
        let w = g.element(5, -2).unwrap();
        assert_eq!(z.add(&w).unwrap(), w);

        let i = Ring::Int;
        assert!(i.int(7).add(&i.int(-7)).unwrap().is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let r = q2();
        // (1+√2)(1−√2) = −1
        let p = r.element(1, 1).unwrap().mul(&r.element(1, -1).unwrap()).unwrap();
        assert_eq!(p, r.int(-1));
        // i² = −1
        let g = Ring::Gauss;
        let i2 = g.omega().unwrap().mul(&g.omega().unwrap()).unwrap();
        assert_eq!(i2, g.int(-1));
        // fundamental Pell unit for d = 2: (3+2√2)(3−2√2) = 9 − 2·4 = 1
        let u = r.element(3, 2).unwrap().mul(&r.element(3, -2).unwrap()).unwrap();
        assert_eq!(u, r.one());
    }

    #[test]
    fn conj_and_norm_examples() {
        let g = Ring::Gauss;
        let (c, n) = g.element(2, 3).unwrap().conj_norm();
        assert_eq!(c, g.element(2, -3).unwrap());
        assert_eq!(n, g.int(13));

        let r = q2();
        let (c, n) = r.element(3, 2).unwrap().conj_norm();
        assert_eq!(c, r.element(3, -2).unwrap());
        assert_eq!(n, r.one());

        let i = Ring::Int;
        let (c, n) = i.int(5).conj_norm();
        assert_eq!(c, i.int(5));
        assert_eq!(n, i.int(25));
    }

    #[test]
    fn rational_integer_predicate() {
        assert!(q2().element(7, 0).unwrap().is_rational_integer());
        assert!(!Ring::Gauss.element(0, 1).unwrap().is_rational_integer());
        assert!(Ring::quad(3).unwrap().zero().is_rational_integer());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let x = Ring::Int.int(1);
        let y = Ring::Gauss.int(1);
        assert!(matches!(x.add(&y), Err(RingError::RingMismatch(_, _))));
        assert!(matches!(x.mul(&y), Err(RingError::RingMismatch(_, _))));
        assert!(Ring::Int.element(1, 1).is_err());
    }

    #[test]
    fn exact_division() {
        let r = q2();
        let x = r.element(3, 2).unwrap();
        let y = r.element(1, 1).unwrap();
        let p = x.mul(&y).unwrap();
        assert_eq!(p.checked_div(&y).unwrap(), Some(x.clone()));
        assert_eq!(p.checked_div(&r.zero()).unwrap(), None);
        // 1+√2 does not divide 2+√2: norm(1+√2) = −1 divides everything,
        // so check an honest non-multiple instead: (2,1)/(0,2)
        let odd = r.element(1, 0).unwrap();
        let two_w = r.element(0, 2).unwrap();
        assert_eq!(odd.checked_div(&two_w).unwrap(), None);
    }

    #[test]
    fn json_round_trip() {
        let r = q2();
        let x = r.element(BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap(), -7).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[123456789012345678901234567890,-7]");
        assert_eq!(serde_json::to_string(&Ring::Int).unwrap(), "\"Z\"");
        assert_eq!(serde_json::to_string(&r).unwrap(), "{\"quad\":2}");
        assert_eq!(serde_json::to_string(&Ring::Gauss).unwrap(), "\"gauss\"");
        let back: Ring = serde_json::from_str("{\"quad\":2}").unwrap();
        assert_eq!(back, r);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_ring() -> impl Strategy<Value = Ring> {
            prop_oneof![
                Just(Ring::Int),
                Just(Ring::Gauss),
                proptest::sample::select(vec![2i64, 3, 5, 6, 7, 10]).prop_map(|d| Ring::Quad(d)),
            ]
        }

        fn arb_elem(ring: Ring) -> impl Strategy<Value = RingElement> {
            let b = if ring == Ring::Int { 0..=0i64 } else { -50..=50i64 };
            (-50..=50i64, b).prop_map(move |(a, b)| ring.element(a, b).unwrap())
        }

        fn triple() -> impl Strategy<Value = (RingElement, RingElement, RingElement)> {
            arb_ring().prop_flat_map(|r| (arb_elem(r), arb_elem(r), arb_elem(r)))
        }

        proptest! {
            #[test]
            fn ring_axioms((x, y, z) in triple()) {
                let assoc_l = x.add(&y).unwrap().add(&z).unwrap();
                let assoc_r = x.add(&y.add(&z).unwrap()).unwrap();
                prop_assert_eq!(assoc_l, assoc_r);
                let massoc_l = x.mul(&y).unwrap().mul(&z).unwrap();
                let massoc_r = x.mul(&y.mul(&z).unwrap()).unwrap();
                prop_assert_eq!(massoc_l, massoc_r);
                prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
                prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
                let dist_l = x.mul(&y.add(&z).unwrap()).unwrap();
                let dist_r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
                prop_assert_eq!(dist_l, dist_r);
                let ring = x.ring();
                prop_assert_eq!(x.add(&ring.zero()).unwrap(), x.clone());
                prop_assert_eq!(x.mul(&ring.one()).unwrap(), x.clone());
                prop_assert!(x.add(&x.neg()).unwrap().is_zero());
            }

            #[test]
            fn norm_is_multiplicative((x, y, _) in triple()) {
                let lhs = x.mul(&y).unwrap().norm();
                let rhs = x.norm().mul(&y.norm()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn conj_is_a_ring_homomorphism((x, y, _) in triple()) {
                prop_assert_eq!(x.add(&y).unwrap().conj(), x.conj().add(&y.conj()).unwrap());
                prop_assert_eq!(x.mul(&y).unwrap().conj(), x.conj().mul(&y.conj()).unwrap());
                prop_assert_eq!(x.conj().conj(), x.clone());
                prop_assert!(x.norm().is_rational_integer());
            }
        }
    }
}
