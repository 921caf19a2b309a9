//! Canonical sparse multivariate polynomials over a [`Ring`].
//!
//! Variables are positional (`x0..x(arity-1)`) and the arity is explicit:
//! a polynomial may quantify over variables it never mentions, which matters
//! when a defining equation fixes the number of bound variables. Terms are
//! kept sorted in descending graded-lex order with no zero coefficients and
//! no duplicate exponent vectors, so structural equality is mathematical
//! equality and printed forms are byte-stable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rings::{Ring, RingElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable map is not injective")]
    NonInjectiveMap,
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
}

/// One monomial: coefficient times a product of variable powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: RingElement,
    pub exps: Vec<u32>,
}

impl Term {
    fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }
}

/// Descending graded-lex key: higher total degree first, then lex on exponents.
fn term_order(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    arity: usize,
    terms: Vec<Term>,
}

/// A point to evaluate at: one ring element per variable index.
pub type Assignment = [RingElement];

impl Polynomial {
    pub fn zero(ring: Ring, arity: usize) -> Polynomial {
        Polynomial { ring, arity, terms: Vec::new() }
    }

    pub fn constant(ring: Ring, arity: usize, c: RingElement) -> Result<Polynomial, PolyError> {
        Polynomial::from_terms(ring, arity, vec![(c, vec![0; arity])])
    }

    pub fn int_constant(ring: Ring, arity: usize, c: impl Into<BigInt>) -> Polynomial {
        Polynomial::from_terms(ring, arity, vec![(ring.int(c), vec![0; arity])])
            .expect("constant is well-formed")
    }

    /// The variable `x{index}` as a polynomial of the given arity.
    pub fn var(ring: Ring, arity: usize, index: usize) -> Result<Polynomial, PolyError> {
        if index >= arity {
            return Err(PolyError::IndexOutOfRange { index, arity });
        }
        let mut exps = vec![0; arity];
        exps[index] = 1;
        Polynomial::from_terms(ring, arity, vec![(ring.one(), exps)])
    }

    /// Builds and canonicalizes: merges duplicate exponent vectors, drops
    /// zeros, sorts.
    pub fn from_terms(
        ring: Ring,
        arity: usize,
        terms: Vec<(RingElement, Vec<u32>)>,
    ) -> Result<Polynomial, PolyError> {
        let mut acc: BTreeMap<Vec<u32>, RingElement> = BTreeMap::new();
        for (c, e) in terms {
            if c.ring() != ring {
                return Err(RingError::RingMismatch(ring, c.ring()).into());
            }
            if e.len() != arity {
                return Err(PolyError::ArityMismatch { expected: arity, got: e.len() });
            }
            match acc.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().add(&c)?;
                    *o.get_mut() = sum;
                }
            }
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Term { coeff, exps })
            .collect();
        terms.sort_by(|a, b| term_order(&a.exps, &b.exps));
        Ok(Polynomial { ring, arity, terms })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.degree() == 0)
    }

    /// The constant value of a constant polynomial.
    pub fn constant_value(&self) -> Option<RingElement> {
        if self.is_zero() {
            Some(self.ring.zero())
        } else if self.is_constant() {
            Some(self.terms[0].coeff.clone())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.arity];
        for t in &self.terms {
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
    }

    /// Exact value at `a`; `a` must cover all variables with matching ring.
    pub fn eval(&self, a: &Assignment) -> Result<RingElement, PolyError> {
        if a.len() < self.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity, got: a.len() });
        }
        for v in a.iter().take(self.arity) {
            if v.ring() != self.ring {
                return Err(RingError::RingMismatch(self.ring, v.ring()).into());
            }
        }
        let mut acc = self.ring.zero();
        for t in &self.terms {
            let mut m = t.coeff.clone();
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    m = m.mul(&a[i].pow(e as u64))?;
                }
            }
            acc = acc.add(&m)?;
        }
        Ok(acc)
    }

    fn expect_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch(self.ring, other.ring).into());
        }
        Ok(())
    }

    /// Same polynomial viewed with at least `arity` variable slots.
    pub fn pad_arity(&self, arity: usize) -> Polynomial {
        if arity <= self.arity {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = t.exps.clone();
                e.resize(arity, 0);
                (t.coeff.clone(), e)
            })
            .collect();
        Polynomial::from_terms(self.ring, arity, terms).expect("padding keeps terms well-formed")
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.expect_ring(other)?;
        let arity = self.arity.max(other.arity);
        let a = self.pad_arity(arity);
        let b = other.pad_arity(arity);
        let mut terms: Vec<(RingElement, Vec<u32>)> =
            a.terms.into_iter().map(|t| (t.coeff, t.exps)).collect();
        terms.extend(b.terms.into_iter().map(|t| (t.coeff, t.exps)));
        Polynomial::from_terms(self.ring, arity, terms)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: t.coeff.neg(), exps: t.exps.clone() })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.expect_ring(other)?;
        let arity = self.arity.max(other.arity);
        let a = self.pad_arity(arity);
        let b = other.pad_arity(arity);
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for ta in &a.terms {
            for tb in &b.terms {
                let exps: Vec<u32> =
                    ta.exps.iter().zip(&tb.exps).map(|(x, y)| x + y).collect();
                terms.push((ta.coeff.mul(&tb.coeff)?, exps));
            }
        }
        Polynomial::from_terms(self.ring, arity, terms)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::int_constant(self.ring, self.arity, 1);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Relocates variables: old variable `i` becomes `map[i]`.
    ///
    /// For any assignment `a` of the new arity,
    /// `eval(result, a) = eval(self, a ∘ map)`.
    pub fn remap_variables(&self, map: &[usize], new_arity: usize) -> Result<Polynomial, PolyError> {
        if map.len() != self.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity, got: map.len() });
        }
        let mut seen = vec![false; new_arity];
        for &m in map {
            if m >= new_arity {
                return Err(PolyError::IndexOutOfRange { index: m, arity: new_arity });
            }
            if seen[m] {
                return Err(PolyError::NonInjectiveMap);
            }
            seen[m] = true;
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = vec![0u32; new_arity];
                for (i, &ex) in t.exps.iter().enumerate() {
                    e[map[i]] = ex;
                }
                (t.coeff.clone(), e)
            })
            .collect();
        Polynomial::from_terms(self.ring, new_arity, terms)
    }

    /// Pins variable `var` to `value`; the slot remains (with exponent 0) so
    /// surrounding variable indices stay stable.
    pub fn substitute_value(&self, var: usize, value: &RingElement) -> Result<Polynomial, PolyError> {
        if var >= self.arity {
            return Err(PolyError::IndexOutOfRange { index: var, arity: self.arity });
        }
        if value.ring() != self.ring {
            return Err(RingError::RingMismatch(self.ring, value.ring()).into());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let e = t.exps[var];
            let coeff = if e > 0 { t.coeff.mul(&value.pow(e as u64))? } else { t.coeff.clone() };
            let mut exps = t.exps.clone();
            exps[var] = 0;
            terms.push((coeff, exps));
        }
        Polynomial::from_terms(self.ring, self.arity, terms)
    }

    /// Replaces variable `var` by a whole polynomial of the same arity.
    pub fn substitute_poly(&self, var: usize, replacement: &Polynomial) -> Result<Polynomial, PolyError> {
        if var >= self.arity {
            return Err(PolyError::IndexOutOfRange { index: var, arity: self.arity });
        }
        self.expect_ring(replacement)?;
        let r = replacement.pad_arity(self.arity);
        let mut acc = Polynomial::zero(self.ring, self.arity);
        for t in &self.terms {
            let e = t.exps[var];
            let mut exps = t.exps.clone();
            exps[var] = 0;
            let mut piece = Polynomial::from_terms(self.ring, self.arity, vec![(t.coeff.clone(), exps)])?;
            if e > 0 {
                piece = piece.mul(&r.pow(e)?)?;
            }
            acc = acc.add(&piece)?;
        }
        Ok(acc)
    }

    /// Reinterprets the coefficients in another ring; each coefficient pair
    /// must be a legal element there (rational-integer coefficients always
    /// are).
    pub fn cast_to_ring(&self, ring: Ring) -> Result<Polynomial, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                ring.element(t.coeff.re().clone(), t.coeff.om().clone())
                    .map(|c| (c, t.exps.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Polynomial::from_terms(ring, self.arity, terms)
    }

    /// Multiset of coefficients, sorted; used by re-indexing invariants.
    pub fn coefficient_multiset(&self) -> Vec<RingElement> {
        let mut cs: Vec<RingElement> = self.terms.iter().map(|t| t.coeff.clone()).collect();
        cs.sort_by(|a, b| a.cmp_lex(b));
        cs
    }
}

// --- printing ---------------------------------------------------------------
//
// The printed form is exactly the grammar the syntax module parses, so
// `parse(print(p)) == p` holds structurally.

fn unit_symbol(ring: Ring) -> &'static str {
    match ring {
        Ring::Gauss => "i",
        _ => "sqrtd",
    }
}

/// Coefficient body without a leading sign; `sign_out` reports whether a
/// leading minus was factored out (only done for pure-component coefficients).
fn coeff_body(c: &RingElement, lead_unit: bool) -> (String, bool) {
    let unit = unit_symbol(c.ring());
    let (a, b) = (c.re(), c.om());
    if b.is_zero() {
        let s = a.magnitude().to_string();
        let body = if a.magnitude().is_one() && lead_unit { String::new() } else { s };
        (body, a.is_negative())
    } else if a.is_zero() {
        let mag = b.magnitude();
        let body = if mag.is_one() { unit.to_string() } else { format!("{mag}*{unit}") };
        (body, b.is_negative())
    } else {
        let op = if b.is_negative() { "-" } else { "+" };
        let mag = b.magnitude();
        let bpart = if mag.is_one() { unit.to_string() } else { format!("{mag}*{unit}") };
        (format!("({} {} {})", a, op, bpart), false)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let has_vars = t.exps.iter().any(|&e| e > 0);
            let (body, neg) = coeff_body(&t.coeff, has_vars);
            if k == 0 {
                if neg {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !body.is_empty() {
                factors.push(body);
            }
            for (i, &e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{e}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            out.push_str(&factors.join("*"));
        }
        write!(f, "{out}")
    }
}

// --- JSON form --------------------------------------------------------------
//
// {"ring": ..., "arity": n, "terms": [{"c": [a, b], "e": [e0, ...]}]}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct T<'a> {
            c: &'a RingElement,
            e: &'a [u32],
        }
        let mut st = s.serialize_struct("Polynomial", 3)?;
        st.serialize_field("ring", &self.ring)?;
        st.serialize_field("arity", &self.arity)?;
        let terms: Vec<T> = self.terms.iter().map(|t| T { c: &t.coeff, e: &t.exps }).collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct T {
            c: (serde_json::Number, serde_json::Number),
            e: Vec<u32>,
        }
        #[derive(Deserialize)]
        struct P {
            ring: Ring,
            arity: usize,
            terms: Vec<T>,
        }
        let p = P::deserialize(d)?;
        let mut terms = Vec::with_capacity(p.terms.len());
        for t in p.terms {
            let a: BigInt = t.c.0.to_string().parse().map_err(D::Error::custom)?;
            let b: BigInt = t.c.1.to_string().parse().map_err(D::Error::custom)?;
            let c = p.ring.element(a, b).map_err(D::Error::custom)?;
            terms.push((c, t.e));
        }
        Polynomial::from_terms(p.ring, p.arity, terms).map_err(D::Error::custom)
    }
}
