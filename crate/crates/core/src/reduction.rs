//! The headline reductions: ℕ as a Diophantine subset of ℤ[√d] via the Pell
//! system Σ, the single defining polynomial assembled from four Σ copies,
//! the transfer of any equation over ℕ into one over ℤ[√d], and the
//! α-recurrence construction showing ℤ is Diophantine in ℤ[i].
//!
//! Each constructive direction comes with an exact verifier, and negative
//! directions are supported only by bounded box scans reported as evidence,
//! never as proofs.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dioset::{d_prime, DiosetError};
use crate::numtheory::{
    alpha_signed, ext_gcd, find_odd_index, four_squares, pell_fundamental, pell_sequence,
    NumTheoryError,
};
use crate::poly::{PolyError, Polynomial};
use crate::rings::{Ring, RingElement, RingError};
use crate::search::SearchDomain;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Dioset(#[from] DiosetError),
    #[error(transparent)]
    Search(#[from] crate::search::SearchError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error("internal inconsistency (this is a bug): {0}")]
    InternalInconsistency(String),
}

// --- the Σ system over ℤ[√d] -------------------------------------------------

/// Variable order used throughout: (t, x, y, u, v, z, w, h, q, r, s).
pub const SIGMA_VARS: [&str; 11] = ["t", "x", "y", "u", "v", "z", "w", "h", "q", "r", "s"];

const T: usize = 0;
const X: usize = 1;
const Y: usize = 2;
const U: usize = 3;
const V: usize = 4;
const Z: usize = 5;
const W: usize = 6;
const H: usize = 7;
const Q: usize = 8;
const R: usize = 9;
const S: usize = 10;

/// The five defining polynomials of Σ in eleven unknowns, with
/// e = a² − 1 = b²·d for the fundamental solution (a, b) of a² − d·b² = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSystem {
    pub d: i64,
    pub a: BigInt,
    pub b: BigInt,
    pub e: BigInt,
    pub polys: [Polynomial; 5],
    ring: Ring,
}

fn var(ring: Ring, i: usize) -> Polynomial {
    Polynomial::var(ring, 11, i).expect("sigma variable")
}

/// Builds Σ: x²−ey²=1, u²−ev²=1, v²−y²t=zy⁴, t=w², y²−t=1+h²+q²+r²+s².
pub fn build_sigma(d: i64) -> Result<SigmaSystem, ReductionError> {
    let ring = Ring::quad(d).map_err(|e| ReductionError::Domain(e.to_string()))?;
    let (a, b) = pell_fundamental(d)?;
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let e: BigInt = &a * &a - 1;
    debug_assert_eq!(e, &b * &b * BigInt::from(d));

    let ec = Polynomial::constant(ring, 11, ring.int(e.clone()))?;
    let one = Polynomial::int_constant(ring, 11, 1);
    let sq = |i: usize| var(ring, i).pow(2).expect("square");

    let p1 = sq(X).sub(&ec.mul(&sq(Y))?)?.sub(&one)?;
    let p2 = sq(U).sub(&ec.mul(&sq(V))?)?.sub(&one)?;
    let p3 = sq(V)
        .sub(&sq(Y).mul(&var(ring, T))?)?
        .sub(&var(ring, Z).mul(&sq(Y).pow(2)?)?)?;
    let p4 = var(ring, T).sub(&sq(W))?;
    let p5 = sq(Y)
        .sub(&var(ring, T))?
        .sub(&one)?
        .sub(&sq(H))?
        .sub(&sq(Q))?
        .sub(&sq(R))?
        .sub(&sq(S))?;

    Ok(SigmaSystem { d, a, b, e, polys: [p1, p2, p3, p4, p5], ring })
}

impl SigmaSystem {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Residuals of the five equations at an 11-value assignment.
    pub fn residuals(&self, values: &[RingElement]) -> Result<Vec<RingElement>, ReductionError> {
        self.polys.iter().map(|p| Ok(p.eval(values)?)).collect()
    }

    pub fn holds(&self, values: &[RingElement]) -> Result<bool, ReductionError> {
        Ok(self.residuals(values)?.iter().all(RingElement::is_zero))
    }
}

/// A named solution of Σ, exact and re-verified on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaWitness {
    pub d: i64,
    pub values: Vec<RingElement>,
}

impl SigmaWitness {
    pub fn get(&self, name: &str) -> Option<&RingElement> {
        let i = SIGMA_VARS.iter().position(|v| *v == name)?;
        self.values.get(i)
    }

    pub fn t(&self) -> &RingElement {
        &self.values[T]
    }
}

impl Serialize for SigmaWitness {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        let mut st = s.serialize_struct("SigmaWitness", 12)?;
        st.serialize_field("d", &self.d)?;
        for (name, value) in SIGMA_VARS.iter().zip(&self.values) {
            st.serialize_field(name, value)?;
        }
        st.end()
    }
}

/// Builds the Σ solution with t = k²: n is minimal with y_n(a) > k, then
/// x = x_n, y = y_n, u = x_{nk}, v = y_{nk}, w = k, z = (v² − y²t)/y⁴
/// (an integer by the y_{nk} congruence), and (h, q, r, s) is a
/// four-square split of y² − t − 1. The degenerate k = 0 uses n = 1 and
/// the zeroth Pell pair (1, 0) for (u, v).
pub fn sigma_witness(d: i64, k: u64) -> Result<SigmaWitness, ReductionError> {
    let sys = build_sigma(d)?;
    let ring = sys.ring;
    let a: i64 = sys
        .a
        .to_i64()
        .ok_or_else(|| ReductionError::Domain(format!("fundamental a for d={d} exceeds i64")))?;

    let mut n = 1u64;
    while pell_sequence(a, n)?.y <= BigInt::from(k) {
        n += 1;
    }
    let xn = pell_sequence(a, n)?;
    let (u, v) = if k == 0 {
        (BigInt::one(), BigInt::zero())
    } else {
        let unk = pell_sequence(a, n * k)?;
        (unk.x, unk.y)
    };
    let t = BigInt::from(k) * k;
    let y2 = &xn.y * &xn.y;
    let y4 = &y2 * &y2;
    let z_num = &v * &v - &y2 * &t;
    if (&z_num % &y4) != BigInt::zero() {
        return Err(ReductionError::InternalInconsistency(format!(
            "z = (v^2 - y^2 t)/y^4 is not integral at d={d}, k={k}"
        )));
    }
    let z = z_num / y4;
    let target: BigInt = &y2 - &t - 1;
    let fs = four_squares(
        &target
            .to_biguint()
            .ok_or_else(|| ReductionError::InternalInconsistency("y^2 - t - 1 < 0".into()))?,
    );

    let mut values = vec![ring.zero(); 11];
    values[T] = ring.int(t);
    values[X] = ring.int(xn.x);
    values[Y] = ring.int(xn.y);
    values[U] = ring.int(u);
    values[V] = ring.int(v);
    values[Z] = ring.int(z);
    values[W] = ring.int(k as i64);
    for (slot, ki) in [H, Q, R, S].into_iter().zip(fs) {
        values[slot] = ring.int(BigInt::from(ki));
    }

    if !sys.holds(&values)? {
        return Err(ReductionError::InternalInconsistency(format!(
            "sigma witness fails its own system at d={d}, k={k}"
        )));
    }
    Ok(SigmaWitness { d, values })
}

// --- norm-form folds ----------------------------------------------------------

/// A polynomial presented as an iterated norm-form combination
/// `combine(p, q) = p² − d′·q²` of small constituents. The combination is a
/// single polynomial mathematically, but expanding a tower of twenty-odd
/// equations multiplies term counts at every level far beyond what any
/// sparse representation can hold, so evaluation and scanning walk the tree
/// instead; exactness is unaffected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoldNode {
    Leaf(Polynomial),
    Pair(Box<FoldNode>, Box<FoldNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormFold {
    ring: Ring,
    arity: usize,
    d_prime: i64,
    root: FoldNode,
}

impl NormFold {
    /// Left fold of the norm combination over a nonempty list of nodes.
    fn from_nodes(ring: Ring, arity: usize, nodes: Vec<FoldNode>) -> Result<NormFold, ReductionError> {
        let dp = d_prime(ring)
            .ok_or_else(|| ReductionError::Domain("norm folds need a quadratic or Gaussian ring".into()))?;
        let mut it = nodes.into_iter();
        let first = it
            .next()
            .ok_or_else(|| ReductionError::Domain("norm fold needs at least one part".into()))?;
        let root = it.fold(first, |acc, next| FoldNode::Pair(Box::new(acc), Box::new(next)));
        Ok(NormFold { ring, arity, d_prime: dp, root })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn d_prime(&self) -> i64 {
        self.d_prime
    }

    pub fn root(&self) -> &FoldNode {
        &self.root
    }

    pub fn leaves(&self) -> Vec<&Polynomial> {
        fn walk<'a>(n: &'a FoldNode, out: &mut Vec<&'a Polynomial>) {
            match n {
                FoldNode::Leaf(p) => out.push(p),
                FoldNode::Pair(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Exact value of the combined polynomial at an assignment.
    pub fn eval(&self, asg: &[RingElement]) -> Result<RingElement, ReductionError> {
        fn walk(
            n: &FoldNode,
            asg: &[RingElement],
            dp: &RingElement,
        ) -> Result<RingElement, ReductionError> {
            match n {
                FoldNode::Leaf(p) => Ok(p.eval(asg)?),
                FoldNode::Pair(l, r) => {
                    let lv = walk(l, asg, dp)?;
                    let rv = walk(r, asg, dp)?;
                    Ok(lv.mul(&lv)?.sub(&dp.mul(&rv.mul(&rv)?)?)?)
                }
            }
        }
        walk(&self.root, asg, &self.ring.int(self.d_prime))
    }

    /// True iff every constituent vanishes; by the norm-form lemma this is
    /// exactly `eval(asg) == 0`, and the tests cross-check the two routes.
    pub fn vanishes(&self, asg: &[RingElement]) -> Result<bool, ReductionError> {
        for leaf in self.leaves() {
            if !leaf.eval(asg)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Fully expands to one canonical sparse polynomial. Degrees and term
    /// counts double per combination level, so this is only usable on
    /// shallow folds; the big reduction towers must stay in tree form.
    pub fn expand(&self) -> Result<Polynomial, ReductionError> {
        fn walk(n: &FoldNode, ring: Ring, arity: usize, dp: i64) -> Result<Polynomial, ReductionError> {
            match n {
                FoldNode::Leaf(p) => Ok(p.pad_arity(arity)),
                FoldNode::Pair(l, r) => {
                    let lp = walk(l, ring, arity, dp)?;
                    let rp = walk(r, ring, arity, dp)?;
                    let rp2 = rp.mul(&rp)?.mul(&Polynomial::int_constant(ring, arity, dp))?;
                    Ok(lp.mul(&lp)?.sub(&rp2)?)
                }
            }
        }
        walk(&self.root, self.ring, self.arity, self.d_prime)
    }

    fn remap(&self, map: &[usize], new_arity: usize) -> Result<NormFold, ReductionError> {
        fn walk(n: &FoldNode, map: &[usize], new_arity: usize) -> Result<FoldNode, PolyError> {
            Ok(match n {
                FoldNode::Leaf(p) => FoldNode::Leaf(p.remap_variables(map, new_arity)?),
                FoldNode::Pair(l, r) => FoldNode::Pair(
                    Box::new(walk(l, map, new_arity)?),
                    Box::new(walk(r, map, new_arity)?),
                ),
            })
        }
        Ok(NormFold {
            ring: self.ring,
            arity: new_arity,
            d_prime: self.d_prime,
            root: walk(&self.root, map, new_arity)?,
        })
    }
}

impl Serialize for NormFold {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "snake_case")]
        enum Node<'a> {
            Leaf(&'a Polynomial),
            Pair(Box<Node<'a>>, Box<Node<'a>>),
        }
        fn conv(n: &FoldNode) -> Node<'_> {
            match n {
                FoldNode::Leaf(p) => Node::Leaf(p),
                FoldNode::Pair(l, r) => Node::Pair(Box::new(conv(l)), Box::new(conv(r))),
            }
        }
        let mut st = s.serialize_struct("NormFold", 4)?;
        st.serialize_field("ring", &self.ring)?;
        st.serialize_field("arity", &self.arity)?;
        st.serialize_field("d_prime", &self.d_prime)?;
        st.serialize_field("fold", &conv(&self.root))?;
        st.end()
    }
}

// --- ℕ as a Diophantine subset of ℤ[√d] ---------------------------------------

/// The single defining polynomial for ℕ inside ℤ[√d]: one parameter t,
/// four Σ copies with t substituted by k_i², and the four-square equation
/// t = k₁² + k₂² + k₃² + k₄², all combined by the norm form with the
/// ring's d′.
///
/// Variable layout (arity 45): slot 0 = t; copy i ∈ 0..4 occupies
/// 1+11i (= k_i) followed by its ten Σ unknowns x…s.
#[derive(Debug, Clone)]
pub struct NatDefinition {
    pub d: i64,
    sigma: SigmaSystem,
    fold: NormFold,
}

pub const NAT_DEF_ARITY: usize = 45;

pub fn nat_definition(d: i64) -> Result<NatDefinition, ReductionError> {
    let sigma = build_sigma(d)?;
    let ring = sigma.ring;
    let mut copy_trees = Vec::with_capacity(4);
    for i in 0..4 {
        let k_slot = 1 + 11 * i;
        let k_sq = Polynomial::var(ring, NAT_DEF_ARITY, k_slot)?.pow(2)?;
        let mut leaves = Vec::with_capacity(5);
        for p in &sigma.polys {
            // t stays at slot 0 until the substitution below removes it
            let mut map = vec![0usize; 11];
            for (j, m) in map.iter_mut().enumerate().skip(1) {
                *m = k_slot + j;
            }
            let relocated = p.remap_variables(&map, NAT_DEF_ARITY)?;
            leaves.push(FoldNode::Leaf(relocated.substitute_poly(0, &k_sq)?));
        }
        let tree = NormFold::from_nodes(ring, NAT_DEF_ARITY, leaves)?;
        copy_trees.push(tree.root);
    }
    let q1 = NormFold::from_nodes(ring, NAT_DEF_ARITY, copy_trees)?;

    let mut q2 = Polynomial::var(ring, NAT_DEF_ARITY, 0)?;
    for i in 0..4 {
        let k_sq = Polynomial::var(ring, NAT_DEF_ARITY, 1 + 11 * i)?.pow(2)?;
        q2 = q2.sub(&k_sq)?;
    }
    let fold = NormFold::from_nodes(ring, NAT_DEF_ARITY, vec![q1.root, FoldNode::Leaf(q2)])?;
    Ok(NatDefinition { d, sigma, fold })
}

impl NatDefinition {
    /// Exactly one free parameter slot (t); everything else is bound.
    pub fn params(&self) -> usize {
        1
    }

    pub fn bound_vars(&self) -> usize {
        NAT_DEF_ARITY - 1
    }

    pub fn fold(&self) -> &NormFold {
        &self.fold
    }

    pub fn sigma(&self) -> &SigmaSystem {
        &self.sigma
    }

    pub fn ring(&self) -> Ring {
        self.sigma.ring
    }

    /// A full 45-value assignment with parameter t = value, assembled from
    /// a four-square split of t and four Σ witnesses; verified exactly.
    pub fn witness_for(&self, t: u64) -> Result<Vec<RingElement>, ReductionError> {
        let ring = self.ring();
        let ks = four_squares(&BigUint::from(t));
        let mut asg = vec![ring.zero(); NAT_DEF_ARITY];
        asg[0] = ring.int(t as i64);
        for (i, k) in ks.iter().enumerate() {
            let k64 = k.to_u64().expect("desk-scale k");
            let sw = sigma_witness(self.d, k64)?;
            asg[1 + 11 * i] = ring.int(k64 as i64);
            asg[2 + 11 * i..2 + 11 * i + 10].clone_from_slice(&sw.values[1..11]);
        }
        let value = self.fold.eval(&asg)?;
        if !value.is_zero() {
            return Err(ReductionError::InternalInconsistency(format!(
                "assembled witness does not vanish for t={t}, d={}",
                self.d
            )));
        }
        Ok(asg)
    }

    /// Box-scan evidence: does the defining polynomial vanish for this t
    /// with all bound variables of absolute size ≤ radius? Complete over
    /// the box, by the system structure: k-quadruples with Σk² = t, then a
    /// Σ scan per copy with t pinned to k².
    pub fn solvable_in_box(&self, t: &RingElement, radius: u32) -> Result<bool, ReductionError> {
        let ring = self.ring();
        let scan = SigmaBoxScan::new(&self.sigma, radius)?;
        let boxd = SearchDomain::ring_box(ring, radius)?.values();
        // squares have non-negative rational part in ℤ[√d], so sort by it
        // and prune partial sums that already exceed t's rational part
        let mut squares: Vec<(RingElement, RingElement)> =
            boxd.iter().map(|k| (k.clone(), k.mul(k).expect("same ring"))).collect();
        squares.sort_by(|a, b| a.1.re().cmp(b.1.re()).then_with(|| a.1.cmp_lex(&b.1)));
        let mut copy_ok: HashMap<(BigInt, BigInt), bool> = HashMap::new();
        let mut check_copy = |k: &RingElement, ksq: &RingElement| -> Result<bool, ReductionError> {
            let key = (k.re().clone(), k.om().clone());
            if let Some(&b) = copy_ok.get(&key) {
                return Ok(b);
            }
            let ok = scan.solvable_with_t(ksq)?;
            copy_ok.insert(key, ok);
            Ok(ok)
        };
        let n = squares.len();
        for i1 in 0..n {
            if squares[i1].1.re() > t.re() {
                break;
            }
            for i2 in i1..n {
                let s2 = squares[i1].1.add(&squares[i2].1)?;
                if s2.re() > t.re() {
                    break;
                }
                for i3 in i2..n {
                    let s3 = s2.add(&squares[i3].1)?;
                    if s3.re() > t.re() {
                        break;
                    }
                    for i4 in i3..n {
                        let s4 = s3.add(&squares[i4].1)?;
                        if s4.re() > t.re() {
                            break;
                        }
                        if &s4 != t {
                            continue;
                        }
                        let mut all = true;
                        for idx in [i1, i2, i3, i4] {
                            let (k, ksq) = &squares[idx];
                            if !check_copy(k, ksq)? {
                                all = false;
                                break;
                            }
                        }
                        if all {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }
}

// --- bounded Σ scans ----------------------------------------------------------

/// Shared machinery for complete Σ scans over a coefficient box: the
/// solutions of x² − e·y² = 1 in the box, and a two-squares sum table for
/// resolving equation 5.
struct SigmaBoxScan<'a> {
    sys: &'a SigmaSystem,
    radius: u32,
    boxd: Vec<RingElement>,
    pell_pairs: Vec<(RingElement, RingElement)>,
    two_square_sums: HashMap<(BigInt, BigInt), (RingElement, RingElement)>,
}

impl<'a> SigmaBoxScan<'a> {
    fn new(sys: &'a SigmaSystem, radius: u32) -> Result<SigmaBoxScan<'a>, ReductionError> {
        let ring = sys.ring;
        let boxd = SearchDomain::ring_box(ring, radius)?.values();
        let e = ring.int(sys.e.clone());
        let one = ring.one();
        let mut pell_pairs = Vec::new();
        for x in &boxd {
            for y in &boxd {
                let lhs = x.mul(x)?.sub(&e.mul(&y.mul(y)?)?)?;
                if lhs == one {
                    pell_pairs.push((x.clone(), y.clone()));
                }
            }
        }
        let mut two_square_sums = HashMap::new();
        for h in &boxd {
            for q in &boxd {
                let sum = h.mul(h)?.add(&q.mul(q)?)?;
                two_square_sums
                    .entry((sum.re().clone(), sum.om().clone()))
                    .or_insert_with(|| (h.clone(), q.clone()));
            }
        }
        Ok(SigmaBoxScan { sys, radius, boxd, pell_pairs, two_square_sums })
    }

    fn in_box(&self, v: &RingElement) -> bool {
        let r = BigInt::from(self.radius);
        v.re().abs() <= r && v.om().abs() <= r
    }

    /// Lexicographically least (h, q, r, s) in the box with
    /// h² + q² + r² + s² = target, if any.
    fn four_square_split(
        &self,
        target: &RingElement,
    ) -> Result<Option<[RingElement; 4]>, ReductionError> {
        for h in &self.boxd {
            for q in &self.boxd {
                let part = h.mul(h)?.add(&q.mul(q)?)?;
                let rest = target.sub(&part)?;
                if let Some((r, s)) = self.two_square_sums.get(&(rest.re().clone(), rest.om().clone()))
                {
                    return Ok(Some([h.clone(), q.clone(), r.clone(), s.clone()]));
                }
            }
        }
        Ok(None)
    }

    /// Candidate z values satisfying v² − y²·t = z·y⁴ inside the box.
    fn z_candidates(
        &self,
        y: &RingElement,
        v: &RingElement,
        t: &RingElement,
    ) -> Result<Vec<RingElement>, ReductionError> {
        if y.is_zero() {
            // equation 3 collapses to v² = 0; z is then unconstrained
            if v.is_zero() {
                Ok(self.boxd.clone())
            } else {
                Ok(Vec::new())
            }
        } else {
            let y2 = y.mul(y)?;
            let y4 = y2.mul(&y2)?;
            let num = v.mul(v)?.sub(&y2.mul(t)?)?;
            match num.checked_div(&y4)? {
                Some(z) if self.in_box(&z) => Ok(vec![z]),
                _ => Ok(Vec::new()),
            }
        }
    }

    /// Is the ten-variable system Σ with t pinned to `t` solvable in the
    /// box? (t itself need not lie in the box.)
    fn solvable_with_t(&self, t: &RingElement) -> Result<bool, ReductionError> {
        let one = self.sys.ring.one();
        for w in &self.boxd {
            if &w.mul(w)? != t {
                continue;
            }
            for (x, y) in &self.pell_pairs {
                let _ = x;
                let y2 = y.mul(y)?;
                let target = y2.sub(t)?.sub(&one)?;
                if self.four_square_split(&target)?.is_none() {
                    continue;
                }
                for (_u, v) in &self.pell_pairs {
                    if !self.z_candidates(y, v, t)?.is_empty() {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// All Σ solutions with every unknown (t included) inside the coefficient
/// box of the given radius, each re-verified exactly. Deterministic order.
pub fn sigma_box_scan(d: i64, radius: u32) -> Result<Vec<SigmaWitness>, ReductionError> {
    let sys = build_sigma(d)?;
    let scan = SigmaBoxScan::new(&sys, radius)?;
    let mut out = Vec::new();
    for (x, y) in &scan.pell_pairs {
        for (u, v) in &scan.pell_pairs {
            for w in &scan.boxd {
                let t = w.mul(w)?;
                if !scan.in_box(&t) {
                    continue;
                }
                let one = sys.ring.one();
                let target = y.mul(y)?.sub(&t)?.sub(&one)?;
                let Some([h, q, r, s]) = scan.four_square_split(&target)? else {
                    continue;
                };
                for z in scan.z_candidates(y, v, &t)? {
                    let values = vec![
                        t.clone(),
                        x.clone(),
                        y.clone(),
                        u.clone(),
                        v.clone(),
                        z.clone(),
                        w.clone(),
                        h.clone(),
                        q.clone(),
                        r.clone(),
                        s.clone(),
                    ];
                    if !sys.holds(&values)? {
                        return Err(ReductionError::InternalInconsistency(
                            "box scan produced a non-solution".into(),
                        ));
                    }
                    out.push(SigmaWitness { d, values });
                }
            }
        }
    }
    Ok(out)
}

// --- transferring equations over ℕ into ℤ[√d] ---------------------------------

/// An equation P(ā) = 0 over ℕ rewritten as a single polynomial over
/// ℤ[√d]: the norm-form combination of P with one ℕ-definition copy per
/// variable. Solvable in ℤ[√d] exactly when the original is solvable in ℕ.
#[derive(Debug, Clone)]
pub struct ReducedEquation {
    pub d: i64,
    source: Polynomial,
    params: usize,
    fold: NormFold,
    nat: NatDefinition,
}

pub fn reduce_equation_quad(p: &Polynomial, d: i64) -> Result<ReducedEquation, ReductionError> {
    if p.ring() != Ring::Int {
        return Err(ReductionError::Domain("the source equation must be over Z (naturals)".into()));
    }
    if p.arity() == 0 {
        return Err(ReductionError::Domain("the source equation needs at least one variable".into()));
    }
    let nat = nat_definition(d)?;
    let ring = nat.ring();
    let n = p.arity();
    let arity = n + n * (NAT_DEF_ARITY - 1);
    let p_quad = p.cast_to_ring(ring)?.pad_arity(arity);

    let mut nodes = vec![FoldNode::Leaf(p_quad)];
    for i in 0..n {
        let mut map = vec![0usize; NAT_DEF_ARITY];
        map[0] = i; // t of this copy is the i-th source variable
        for (j, m) in map.iter_mut().enumerate().skip(1) {
            *m = n + i * (NAT_DEF_ARITY - 1) + (j - 1);
        }
        nodes.push(nat.fold().remap(&map, arity)?.root);
    }
    let fold = NormFold::from_nodes(ring, arity, nodes)?;
    Ok(ReducedEquation { d, source: p.clone(), params: n, fold, nat })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedScanReport {
    pub radius: u32,
    /// Parameter points where the source polynomial vanishes and every
    /// coordinate is ℕ-definable within the box.
    pub verified_roots: Vec<Vec<RingElement>>,
    /// Roots of the source polynomial alone that failed the ℕ-definability
    /// side within the box (evidence only).
    pub unconfirmed_roots: Vec<Vec<RingElement>>,
}

impl ReducedEquation {
    pub fn params(&self) -> usize {
        self.params
    }

    pub fn source(&self) -> &Polynomial {
        &self.source
    }

    pub fn fold(&self) -> &NormFold {
        &self.fold
    }

    pub fn nat(&self) -> &NatDefinition {
        &self.nat
    }

    /// A full assignment from an ℕ-solution of the source equation,
    /// verified to make the combined polynomial vanish exactly.
    pub fn assemble_witness(&self, solution: &[u64]) -> Result<Vec<RingElement>, ReductionError> {
        if solution.len() != self.params {
            return Err(ReductionError::Domain(format!(
                "expected {} solution values, got {}",
                self.params,
                solution.len()
            )));
        }
        let ring = self.nat.ring();
        let mut asg = vec![ring.zero(); self.fold.arity()];
        for (i, &v) in solution.iter().enumerate() {
            asg[i] = ring.int(v as i64);
            let w = self.nat.witness_for(v)?;
            let base = self.params + i * (NAT_DEF_ARITY - 1);
            asg[base..base + (NAT_DEF_ARITY - 1)].clone_from_slice(&w[1..]);
        }
        let value = self.fold.eval(&asg)?;
        if !value.is_zero() {
            return Err(ReductionError::InternalInconsistency(
                "assembled witness does not make the reduced polynomial vanish".into(),
            ));
        }
        Ok(asg)
    }

    /// Bounded search for roots of the reduced polynomial with every
    /// variable in the coefficient box. Reported as evidence; emptiness at
    /// a radius is never a proof of unsolvability.
    pub fn scan_box(&self, radius: u32) -> Result<ReducedScanReport, ReductionError> {
        let ring = self.nat.ring();
        let values = SearchDomain::ring_box(ring, radius)?.values();
        let p = self.source.cast_to_ring(ring)?;
        let roots = all_roots_in_box(&p, &values)?;
        let mut verified = Vec::new();
        let mut unconfirmed = Vec::new();
        for root in roots {
            let mut ok = true;
            for coord in &root {
                if !self.nat.solvable_in_box(coord, radius)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                verified.push(root);
            } else {
                unconfirmed.push(root);
            }
        }
        Ok(ReducedScanReport { radius, verified_roots: verified, unconfirmed_roots: unconfirmed })
    }
}

/// Every root of `p` (parameters only, no bound variables) in the box,
/// lexicographic order, by substitution descent.
fn all_roots_in_box(
    p: &Polynomial,
    values: &[RingElement],
) -> Result<Vec<Vec<RingElement>>, ReductionError> {
    fn rec(
        p: &Polynomial,
        next_var: usize,
        values: &[RingElement],
        acc: &mut Vec<RingElement>,
        out: &mut Vec<Vec<RingElement>>,
    ) -> Result<(), ReductionError> {
        if next_var == p.arity() {
            if p.constant_value().map(|c| c.is_zero()).unwrap_or(false) {
                out.push(acc.clone());
            }
            return Ok(());
        }
        if let Some(c) = p.constant_value() {
            if !c.is_zero() {
                return Ok(());
            }
        }
        for v in values {
            let pinned = p.substitute_value(next_var, v)?;
            acc.push(v.clone());
            rec(&pinned, next_var + 1, values, acc, out)?;
            acc.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(p, 0, values, &mut Vec::new(), &mut out)?;
    Ok(out)
}

// --- ℤ as a Diophantine subset of ℤ[i] -----------------------------------------

pub const GAUSS_VARS: [&str; 12] = ["a", "p", "r", "x", "t", "s", "w", "q", "z", "y", "v", "u"];

/// A named solution of the seven-equation Gaussian system, all components
/// rational integers by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussWitness {
    pub a: RingElement,
    pub p: RingElement,
    pub r: RingElement,
    pub x: RingElement,
    pub t: RingElement,
    pub s: RingElement,
    pub w: RingElement,
    pub q: RingElement,
    pub z: RingElement,
    pub y: RingElement,
    pub v: RingElement,
    pub u: RingElement,
}

impl GaussWitness {
    pub fn fields(&self) -> [(&'static str, &RingElement); 12] {
        [
            ("a", &self.a),
            ("p", &self.p),
            ("r", &self.r),
            ("x", &self.x),
            ("t", &self.t),
            ("s", &self.s),
            ("w", &self.w),
            ("q", &self.q),
            ("z", &self.z),
            ("y", &self.y),
            ("v", &self.v),
            ("u", &self.u),
        ]
    }
}

impl Serialize for GaussWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GaussWitness", 12)?;
        for (name, v) in self.fields() {
            st.serialize_field(name, v)?;
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for GaussWitness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            a: (serde_json::Number, serde_json::Number),
            p: (serde_json::Number, serde_json::Number),
            r: (serde_json::Number, serde_json::Number),
            x: (serde_json::Number, serde_json::Number),
            t: (serde_json::Number, serde_json::Number),
            s: (serde_json::Number, serde_json::Number),
            w: (serde_json::Number, serde_json::Number),
            q: (serde_json::Number, serde_json::Number),
            z: (serde_json::Number, serde_json::Number),
            y: (serde_json::Number, serde_json::Number),
            v: (serde_json::Number, serde_json::Number),
            u: (serde_json::Number, serde_json::Number),
        }
        let r = Repr::deserialize(d)?;
        let g = Ring::Gauss;
        let elem = |p: &(serde_json::Number, serde_json::Number)| -> Result<RingElement, D::Error> {
            let a: BigInt = p.0.to_string().parse().map_err(D::Error::custom)?;
            let b: BigInt = p.1.to_string().parse().map_err(D::Error::custom)?;
            g.element(a, b).map_err(D::Error::custom)
        };
        Ok(GaussWitness {
            a: elem(&r.a)?,
            p: elem(&r.p)?,
            r: elem(&r.r)?,
            x: elem(&r.x)?,
            t: elem(&r.t)?,
            s: elem(&r.s)?,
            w: elem(&r.w)?,
            q: elem(&r.q)?,
            z: elem(&r.z)?,
            y: elem(&r.y)?,
            v: elem(&r.v)?,
            u: elem(&r.u)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub label: String,
    pub residual: RingElement,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaussReport {
    pub equations: Vec<EquationCheck>,
    pub all_hold: bool,
}

/// Evaluates the seven equations exactly (the two quadratic-form equations
/// with right-hand side 1, which is the value the recurrence preserves from
/// its seed pair (1, 0)).
pub fn gauss_verify(w: &GaussWitness) -> GaussReport {
    let g = Ring::Gauss;
    let one = g.one();
    let four = g.int(4);
    let three = g.int(3);
    let eight = g.int(8);
    let two = g.int(2);

    let m = |a: &RingElement, b: &RingElement| a.mul(b).expect("gauss");
    let quad_form = |x: &RingElement, y: &RingElement| {
        // x² − 4xy + y² − 1
        m(x, x)
            .sub(&m(&four, &m(x, y)))
            .expect("gauss")
            .add(&m(y, y))
            .expect("gauss")
            .sub(&one)
            .expect("gauss")
    };
    let checks = vec![
        ("2a+1 = p", m(&two, &w.a).add(&one).expect("gauss").sub(&w.p).expect("gauss")),
        (
            "rx + t(8s+3) = 1",
            m(&w.r, &w.x)
                .add(&m(&w.t, &m(&eight, &w.s).add(&three).expect("gauss")))
                .expect("gauss")
                .sub(&one)
                .expect("gauss"),
        ),
        (
            "x = 4(3p^2+1)w",
            w.x.sub(&m(&four, &m(&m(&three, &m(&w.p, &w.p)).add(&one).expect("gauss"), &w.w)))
                .expect("gauss"),
        ),
        ("p = q + zy", w.p.sub(&w.q).expect("gauss").sub(&m(&w.z, &w.y)).expect("gauss")),
        ("v = qy", w.v.sub(&m(&w.q, &w.y)).expect("gauss")),
        ("u^2 - 4uv + v^2 = 1", quad_form(&w.u, &w.v)),
        ("x^2 - 4xy + y^2 = 1", quad_form(&w.x, &w.y)),
    ];
    let equations: Vec<EquationCheck> = checks
        .into_iter()
        .map(|(label, residual)| EquationCheck {
            label: label.to_string(),
            holds: residual.is_zero(),
            residual,
        })
        .collect();
    let all_hold = equations.iter().all(|e| e.holds);
    GaussReport { equations, all_hold }
}

/// Constructs the solution of the seven-equation system for a given
/// rational integer a: p = 2a+1, n the least odd index > 3 with
/// α(n−1) ≡ 0 mod 4(3p²+1), then x = α(n−1), y = α(n), u = α(pn+1),
/// v = α(pn), w = x/(4(3p²+1)), q = v/y, z = (p−q)/y, and (r, t) a Bézout
/// certificate for the least s ≥ 0 with gcd(x, 8s+3) = 1.
pub fn gauss_witness(a: i64) -> Result<GaussWitness, ReductionError> {
    let g = Ring::Gauss;
    let p = BigInt::from(2 * a + 1);
    let n = find_odd_index(&p)?;
    let modulus = BigInt::from(4) * (BigInt::from(3) * &p * &p + 1);

    let x = alpha_signed(n as i64 - 1);
    let y = alpha_signed(n as i64);
    let pn: i64 = p
        .to_i64()
        .and_then(|pi| pi.checked_mul(n as i64))
        .ok_or_else(|| ReductionError::Domain("p*n exceeds i64".into()))?;
    let u = alpha_signed(pn + 1);
    let v = alpha_signed(pn);

    let exact = |num: &BigInt, den: &BigInt, what: &str| -> Result<BigInt, ReductionError> {
        if den.is_zero() || (num % den) != BigInt::zero() {
            return Err(ReductionError::InternalInconsistency(format!(
                "{what} is not an exact integer quotient"
            )));
        }
        Ok(num / den)
    };
    let w = exact(&x, &modulus, "w = x / 4(3p^2+1)")?;
    let q = exact(&v, &y, "q = v / y")?;
    let z = exact(&(&p - &q), &y, "z = (p - q) / y")?;

    let mut s = BigInt::zero();
    let (r, t) = loop {
        let m = BigInt::from(8) * &s + 3;
        let (gcd, r, t) = ext_gcd(&x, &m)?;
        if gcd.is_one() {
            break (r, t);
        }
        s += 1;
    };

    let witness = GaussWitness {
        a: g.int(a),
        p: g.int(p),
        r: g.int(r),
        x: g.int(x),
        t: g.int(t),
        s: g.int(s),
        w: g.int(w),
        q: g.int(q),
        z: g.int(z),
        y: g.int(y),
        v: g.int(v),
        u: g.int(u),
    };
    let report = gauss_verify(&witness);
    if !report.all_hold {
        let bad: Vec<String> = report
            .equations
            .iter()
            .filter(|e| !e.holds)
            .map(|e| e.label.clone())
            .collect();
        return Err(ReductionError::InternalInconsistency(format!(
            "gauss witness fails {:?} at a={a}",
            bad
        )));
    }
    Ok(witness)
}

/// All Gaussian pairs with components of absolute size ≤ bound satisfying
/// x² − 4xy + y² = 1, by direct box scan; lexicographic order.
pub fn alpha_equation_solutions(bound: u32) -> Vec<(RingElement, RingElement)> {
    let g = Ring::Gauss;
    let b = bound as i64;
    let mut out = Vec::new();
    for xa in -b..=b {
        for xb in -b..=b {
            for ya in -b..=b {
                for yb in -b..=b {
                    // x² − 4xy + y² over ℤ[i] in components
                    let re = xa * xa - xb * xb - 4 * (xa * ya - xb * yb) + ya * ya - yb * yb;
                    let im = 2 * xa * xb - 4 * (xa * yb + xb * ya) + 2 * ya * yb;
                    if re == 1 && im == 0 {
                        out.push((
                            g.element(xa, xb).expect("gauss"),
                            g.element(ya, yb).expect("gauss"),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Is (x, y) one of the four α-families (±(α(n+1), α(n)) in either order)?
pub fn in_alpha_families(x: &RingElement, y: &RingElement) -> bool {
    if !x.is_rational_integer() || !y.is_rational_integer() {
        return false;
    }
    let (xv, yv) = (x.re().clone(), y.re().clone());
    let bound = xv.abs().max(yv.abs());
    let mut n = 0i64;
    loop {
        let lo = alpha_signed(n);
        let hi = alpha_signed(n + 1);
        for (p, q) in [
            (hi.clone(), lo.clone()),
            (lo.clone(), hi.clone()),
            (-hi.clone(), -lo.clone()),
            (-lo.clone(), -hi.clone()),
        ] {
            if p == xv && q == yv {
                return true;
            }
        }
        if lo > bound {
            return false;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn sigma_system_parameters() {
        let s = build_sigma(2).unwrap();
        assert_eq!(s.a, BigInt::from(3));
        assert_eq!(s.e, BigInt::from(8)); // e = 9 − 1 = 8 = 4·2
        let s = build_sigma(3).unwrap();
        assert_eq!((s.a.clone(), s.b.clone()), (BigInt::from(2), BigInt::from(1)));
        assert_eq!(s.e, BigInt::from(3));
        // equation 1 is x² − 8y² − 1 for d = 2
        let s2 = build_sigma(2).unwrap();
        let r = s2.ring();
        let mut asg = vec![r.zero(); 11];
        asg[X] = r.int(3);
        asg[Y] = r.int(1);
        assert!(s2.polys[0].eval(&asg).unwrap().is_zero());
        for p in &s2.polys {
            assert!(p.arity() == 11);
        }
        assert!(build_sigma(4).is_err());
    }

    #[test]
    fn sigma_witness_worked_example() {
        // d = 2, k = 1: a = 3, n = 2, so (x, y) = (17, 6), u = x_2, v = y_2
        let w = sigma_witness(2, 1).unwrap();
        let q2 = Ring::quad(2).unwrap();
        assert_eq!(w.get("x").unwrap(), &q2.int(17));
        assert_eq!(w.get("y").unwrap(), &q2.int(6));
        assert_eq!(w.get("u").unwrap(), &q2.int(17));
        assert_eq!(w.get("v").unwrap(), &q2.int(6));
        assert_eq!(w.get("w").unwrap(), &q2.int(1));
        assert_eq!(w.get("t").unwrap(), &q2.int(1));
        assert_eq!(w.get("z").unwrap(), &q2.int(0));
        // 34 = 25 + 9 + 0 + 0
        assert_eq!(w.get("h").unwrap(), &q2.int(5));
        assert_eq!(w.get("q").unwrap(), &q2.int(3));
    }

    #[test]
    fn sigma_witness_round_trip() {
        for d in [2i64, 3, 5] {
            let sys = build_sigma(d).unwrap();
            for k in 0..=5u64 {
                let w = sigma_witness(d, k).unwrap();
                assert!(sys.holds(&w.values).unwrap(), "d={d}, k={k}");
                assert_eq!(w.t(), &sys.ring().int((k * k) as i64), "t = k²");
            }
        }
    }

    #[test]
    fn sigma_witness_conjugation_symmetry() {
        // conjugating every value of a verified witness solves the system
        // again, since all coefficients are rational integers
        let sys = build_sigma(2).unwrap();
        let w = sigma_witness(2, 3).unwrap();
        let conj: Vec<RingElement> = w.values.iter().map(RingElement::conj).collect();
        assert!(sys.holds(&conj).unwrap());
    }

    #[test]
    fn sigma_box_scan_radius_3() {
        let sols = sigma_box_scan(2, 3).unwrap();
        assert!(!sols.is_empty());
        for sol in &sols {
            let t = sol.t();
            assert!(t.is_rational_integer(), "t must land in ℤ: {t}");
            assert!(!t.re().is_negative());
            let root = t.re().sqrt();
            assert_eq!(&(&root * &root), t.re(), "t must be a perfect square: {t}");
        }
        // every box solution here has t = 0 (t = 1 needs y with y² ≥ 2 + 1)
        assert!(sols.iter().all(|s| s.t().is_zero()));
    }

    #[test]
    fn nat_definition_structure_and_witnesses() {
        let nat = nat_definition(2).unwrap();
        assert_eq!(nat.params(), 1);
        assert_eq!(nat.bound_vars(), 44);
        assert_eq!(nat.fold().arity(), NAT_DEF_ARITY);
        assert_eq!(nat.fold().leaves().len(), 21);
        assert_eq!(nat.fold().d_prime(), 3); // d = 2 uses d′ = 3

        // t = 2 with k-squares 1 + 1 + 0 + 0 assembles to an exact root
        let asg = nat.witness_for(2).unwrap();
        assert!(nat.fold().eval(&asg).unwrap().is_zero());
        assert!(nat.fold().vanishes(&asg).unwrap());
        // both routes agree on a perturbed assignment too
        let mut bad = asg.clone();
        bad[3] = nat.ring().int(99);
        assert_eq!(
            nat.fold().vanishes(&bad).unwrap(),
            nat.fold().eval(&bad).unwrap().is_zero()
        );
    }

    #[test]
    fn nat_definition_rejects_sqrt2_in_small_box() {
        let nat = nat_definition(2).unwrap();
        let r = nat.ring();
        let sqrt2 = r.element(0, 1).unwrap();
        assert!(!nat.solvable_in_box(&sqrt2, 2).unwrap());
        // honest naturals are box-solvable at tiny radius when their Σ
        // witnesses are small: t = 0 works with everything tiny
        assert!(nat.solvable_in_box(&r.int(0), 3).unwrap());
    }

    #[test]
    fn norm_fold_expand_matches_eval_on_small_fold() {
        let r = Ring::quad(2).unwrap();
        let p = Polynomial::var(r, 2, 0).unwrap();
        let q = Polynomial::var(r, 2, 1).unwrap();
        let fold =
            NormFold::from_nodes(r, 2, vec![FoldNode::Leaf(p), FoldNode::Leaf(q)]).unwrap();
        let expanded = fold.expand().unwrap();
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                let asg = vec![r.int(a), r.int(b)];
                assert_eq!(fold.eval(&asg).unwrap(), expanded.eval(&asg).unwrap());
            }
        }
    }

    #[test]
    fn reduce_equation_solvable_case() {
        // a₀ − 2 = 0 over ℕ: solvable with a₀ = 2
        let p = crate::syntax::parse_polynomial("x0 - 2", Ring::Int).unwrap();
        let red = reduce_equation_quad(&p, 2).unwrap();
        assert_eq!(red.params(), 1);
        let asg = red.assemble_witness(&[2]).unwrap();
        assert!(red.fold().eval(&asg).unwrap().is_zero());
        // zero polynomial: everything satisfiable, trivial witnesses work
        let zp = crate::syntax::parse_polynomial("x0 + x1 - x0 - x1", Ring::Int).unwrap();
        let red0 = reduce_equation_quad(&zp, 2).unwrap();
        let asg0 = red0.assemble_witness(&[0, 0]).unwrap();
        assert!(red0.fold().eval(&asg0).unwrap().is_zero());
    }

    #[test]
    fn reduce_equation_unsolvable_evidence() {
        // a₀² − 2 has no ℕ solution; the box scan at radius 2 finds no
        // verified root (the ring roots ±√2 fail ℕ-definability)
        let p = crate::syntax::parse_polynomial("x0^2 - 2", Ring::Int).unwrap();
        let red = reduce_equation_quad(&p, 2).unwrap();
        let report = red.scan_box(2).unwrap();
        assert!(report.verified_roots.is_empty());
        assert_eq!(report.unconfirmed_roots.len(), 2); // ±√2 in the box
    }

    #[test]
    fn gauss_witness_worked_instance() {
        let g = Ring::Gauss;
        let w = gauss_witness(0).unwrap();
        assert_eq!(w.p, g.int(1));
        assert_eq!(w.x, g.int(10864));
        assert_eq!(w.y, g.int(40545));
        assert_eq!(w.w, g.int(679));
        assert_eq!(w.q, g.int(1));
        assert_eq!(w.z, g.int(0));
        assert_eq!(w.s, g.int(0));
        assert_eq!(w.r, g.int(1));
        assert_eq!(w.t, g.int(-3621));
        assert!(gauss_verify(&w).all_hold);
    }

    #[test]
    fn gauss_witness_range_and_realness() {
        for a in -3..=3i64 {
            let w = gauss_witness(a).unwrap();
            let rep = gauss_verify(&w);
            assert!(rep.all_hold, "a = {a}");
            for (name, v) in w.fields() {
                assert!(v.is_rational_integer(), "component {name} must be real at a={a}");
            }
        }
    }

    #[test]
    fn gauss_verify_detects_breakage() {
        let mut w = gauss_witness(0).unwrap();
        w.y = w.y.add(&Ring::Gauss.one()).unwrap();
        let rep = gauss_verify(&w);
        assert!(!rep.all_hold);
        assert!(rep.equations.iter().any(|e| !e.holds));

        // the all-zero assignment fails rx + t(8s+3) = 1
        let zero = Ring::Gauss.zero();
        let all_zero = GaussWitness {
            a: zero.clone(),
            p: zero.clone(),
            r: zero.clone(),
            x: zero.clone(),
            t: zero.clone(),
            s: zero.clone(),
            w: zero.clone(),
            q: zero.clone(),
            z: zero.clone(),
            y: zero.clone(),
            v: zero.clone(),
            u: zero.clone(),
        };
        let rep = gauss_verify(&all_zero);
        assert!(!rep.all_hold);
        let eq2 = &rep.equations[1];
        assert!(!eq2.holds);
    }

    #[test]
    fn gauss_witness_json_round_trip() {
        let w = gauss_witness(1).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        let back: GaussWitness = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn alpha_solutions_small_bound() {
        let g = Ring::Gauss;
        let sols = alpha_equation_solutions(5);
        let expect_in = [
            (g.int(1), g.int(0)),
            (g.int(0), g.int(1)),
            (g.int(4), g.int(1)),
            (g.int(1), g.int(4)),
            (g.int(-1), g.int(0)),
            (g.int(-4), g.int(-1)),
        ];
        for pair in &expect_in {
            assert!(sols.contains(pair), "missing {pair:?}");
        }
        for (x, y) in &sols {
            assert!(x.is_rational_integer() && y.is_rational_integer());
            assert!(in_alpha_families(x, y), "({x}, {y}) outside the α-families");
            // spot arithmetic: (4, 1) gives 16 − 16 + 1 = 1
        }
        let four_one = (g.int(4), g.int(1));
        assert!(sols.contains(&four_one));
    }

    #[test]
    fn alpha_family_membership_is_tight() {
        let g = Ring::Gauss;
        assert!(in_alpha_families(&g.int(15), &g.int(4)));
        assert!(in_alpha_families(&g.int(-15), &g.int(-56)));
        assert!(!in_alpha_families(&g.int(15), &g.int(-4)));
        assert!(!in_alpha_families(&g.element(4, 1).unwrap(), &g.int(1)));
        assert!(!in_alpha_families(&g.int(2), &g.int(3)));
    }

    #[test]
    fn sigma_witness_json_shape() {
        let w = sigma_witness(2, 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(v["d"], 2);
        assert_eq!(v["x"][0].as_i64(), Some(17));
        assert_eq!(v["x"][1].as_i64(), Some(0));
    }

    #[test]
    fn u64_conversion_guard() {
        // four_squares splits stay within u64 for desk-scale t
        let nat = nat_definition(3).unwrap();
        for t in 0..=6u64 {
            let asg = nat.witness_for(t).unwrap();
            assert_eq!(asg[0].re().to_u64(), Some(t));
        }
    }
}
