//! The algebra of Diophantine sets: singletons, products, intersections,
//! projection graphs, projections, preimages and composition, parametric in
//! the coefficient ring.
//!
//! A set is carried by one defining polynomial `Q` of arity `params + aux`
//! with semantics `x̄ ∈ S ⟺ ∃ȳ Q(x̄, ȳ) = 0`. Combining two defining
//! equations into one uses the norm-form conjunction `p² − d′q²` over the
//! quadratic rings (vanishing forces both arguments to vanish because √d′
//! lies outside the ring's fraction field) and `p² + q²` over ℤ. Note the
//! product `p·q` would define the union, not the intersection, in an
//! integral domain, so it is never used here.

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::{PolyError, Polynomial};
use crate::rings::{Ring, RingElement, RingError};
use crate::search::{solve_bounded, SearchDomain, SearchError, SearchSpace, TriState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiosetError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("bad index set: {0}")]
    BadIndexSet(String),
    #[error("search-space mismatch: {0}")]
    SpaceMismatch(String),
}

/// A set of positions `1 ≤ s₁ < … < s_l ≤ n`, 1-based as in π^n_S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    n: usize,
    s: Vec<usize>,
}

impl IndexSet {
    pub fn new(n: usize, s: Vec<usize>) -> Result<IndexSet, DiosetError> {
        if s.is_empty() {
            return Err(DiosetError::BadIndexSet("index set must be nonempty".into()));
        }
        for w in s.windows(2) {
            if w[0] >= w[1] {
                return Err(DiosetError::BadIndexSet("indices must be strictly increasing".into()));
            }
        }
        if s[0] < 1 || *s.last().unwrap() > n {
            return Err(DiosetError::BadIndexSet(format!("indices must lie in 1..={n}")));
        }
        Ok(IndexSet { n, s })
    }

    pub fn full(n: usize) -> IndexSet {
        IndexSet { n, s: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// π^n_S applied to a tuple.
    pub fn apply<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        self.s.iter().map(|&i| xs[i - 1].clone()).collect()
    }
}

/// The square-free d′ used by the norm-form conjunction, when the ring
/// needs one: the smallest square-free positive integer different from d.
pub fn d_prime(ring: Ring) -> Option<i64> {
    match ring {
        Ring::Int => None,
        Ring::Quad(2) => Some(3),
        Ring::Quad(_) => Some(2),
        Ring::Gauss => Some(2),
    }
}

/// Fault-injection hooks for exercising the self-check harness; never set
/// in normal operation. Thread-local so a harness run cannot perturb work
/// on other threads.
pub mod faults {
    use std::cell::Cell;

    thread_local! {
        /// When set, [`super::conjoin`] degrades to the plain product
        /// `p·q`, which defines the union instead of the intersection. The
        /// Lemma-1 soundness check must then fail.
        static CONJOIN_AS_PRODUCT: Cell<bool> = const { Cell::new(false) };
    }

    pub fn conjoin_as_product() -> bool {
        CONJOIN_AS_PRODUCT.with(Cell::get)
    }

    pub fn set_conjoin_as_product(on: bool) {
        CONJOIN_AS_PRODUCT.with(|c| c.set(on));
    }
}

/// One polynomial that vanishes exactly where both inputs vanish:
/// `p² + q²` over ℤ, `p² − d′q²` over the quadratic and Gaussian rings.
pub fn conjoin(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, DiosetError> {
    if p.ring() != q.ring() {
        return Err(RingError::RingMismatch(p.ring(), q.ring()).into());
    }
    if faults::conjoin_as_product() {
        let arity = p.arity().max(q.arity());
        return Ok(p.pad_arity(arity).mul(&q.pad_arity(arity))?);
    }
    // 0 is the neutral fixture: conjoin(0, q) vanishes iff q does
    if p.is_zero() {
        return Ok(q.clone());
    }
    if q.is_zero() {
        return Ok(p.clone());
    }
    let arity = p.arity().max(q.arity());
    let p = p.pad_arity(arity);
    let q = q.pad_arity(arity);
    let p2 = p.mul(&p)?;
    let q2 = q.mul(&q)?;
    match d_prime(p.ring()) {
        None => Ok(p2.add(&q2)?),
        Some(d) => {
            let dq2 = q2.mul(&Polynomial::int_constant(q.ring(), arity, d))?;
            Ok(p2.sub(&dq2)?)
        }
    }
}

/// Left fold of [`conjoin`] over a nonempty list.
pub fn conjoin_all(polys: &[Polynomial]) -> Result<Polynomial, DiosetError> {
    let (first, rest) = polys
        .split_first()
        .ok_or_else(|| DiosetError::ArityMismatch("conjoin_all needs at least one polynomial".into()))?;
    let mut acc = first.clone();
    for p in rest {
        acc = conjoin(&acc, p)?;
    }
    Ok(acc)
}

/// `{x̄ : ∃ȳ Q(x̄, ȳ) = 0}` over a ring, with the search space the bounded
/// oracle uses for its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSet {
    ring: Ring,
    space: SearchSpace,
    params: usize,
    aux: usize,
    q: Polynomial,
}

impl DiophantineSet {
    pub fn new(
        ring: Ring,
        space: SearchSpace,
        params: usize,
        aux: usize,
        q: Polynomial,
    ) -> Result<DiophantineSet, DiosetError> {
        if params == 0 {
            return Err(DiosetError::ArityMismatch("a set needs at least one parameter".into()));
        }
        if q.arity() != params + aux {
            return Err(DiosetError::ArityMismatch(format!(
                "defining polynomial has arity {}, expected params {} + aux {}",
                q.arity(),
                params,
                aux
            )));
        }
        if q.ring() != ring {
            return Err(RingError::RingMismatch(ring, q.ring()).into());
        }
        // reuse the oracle's validation of ring/space compatibility
        SearchDomain::new(ring, space, 0)?;
        Ok(DiophantineSet { ring, space, params, aux, q })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn space(&self) -> SearchSpace {
        self.space
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn aux(&self) -> usize {
        self.aux
    }

    pub fn q(&self) -> &Polynomial {
        &self.q
    }

    pub fn domain(&self, radius: u32) -> SearchDomain {
        SearchDomain::new(self.ring, self.space, radius).expect("validated at construction")
    }

    /// Bounded-oracle membership of a parameter point.
    pub fn membership(&self, point: &[RingElement], witness_radius: u32) -> Result<TriState, DiosetError> {
        if point.len() != self.params {
            return Err(DiosetError::ArityMismatch(format!(
                "point has {} coordinates, set has {} parameters",
                point.len(),
                self.params
            )));
        }
        Ok(solve_bounded(&self.q, &self.domain(witness_radius), point)?)
    }

    fn expect_compatible(&self, other: &DiophantineSet) -> Result<(), DiosetError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch(self.ring, other.ring).into());
        }
        if self.space != other.space {
            return Err(DiosetError::SpaceMismatch(format!("{:?} vs {:?}", self.space, other.space)));
        }
        Ok(())
    }

    /// The full set with `r` parameters (zero polynomial).
    pub fn full(ring: Ring, space: SearchSpace, r: usize) -> Result<DiophantineSet, DiosetError> {
        DiophantineSet::new(ring, space, r, 0, Polynomial::zero(ring, r))
    }

    /// The singleton `{c}`, via the conjunction of the factors `v_k − c_k`.
    pub fn singleton(space: SearchSpace, c: &[RingElement]) -> Result<DiophantineSet, DiosetError> {
        let Some(first) = c.first() else {
            return Err(DiosetError::ArityMismatch("singleton needs a nonempty tuple".into()));
        };
        let ring = first.ring();
        let n = c.len();
        let mut factors = Vec::with_capacity(n);
        for (k, ck) in c.iter().enumerate() {
            if ck.ring() != ring {
                return Err(RingError::RingMismatch(ring, ck.ring()).into());
            }
            let vk = Polynomial::var(ring, n, k)?;
            factors.push(vk.sub(&Polynomial::constant(ring, n, ck.clone())?)?);
        }
        DiophantineSet::new(ring, space, n, 0, conjoin_all(&factors)?)
    }

    /// A × B, with the two witness blocks kept disjoint.
    pub fn product(&self, other: &DiophantineSet) -> Result<DiophantineSet, DiosetError> {
        self.expect_compatible(other)?;
        let (ra, ma) = (self.params, self.aux);
        let (rb, mb) = (other.params, other.aux);
        let arity = ra + rb + ma + mb;
        let map_a: Vec<usize> = (0..ra).chain((0..ma).map(|j| ra + rb + j)).collect();
        let map_b: Vec<usize> = (0..rb).map(|i| ra + i).chain((0..mb).map(|j| ra + rb + ma + j)).collect();
        let qa = self.q.remap_variables(&map_a, arity)?;
        let qb = other.q.remap_variables(&map_b, arity)?;
        DiophantineSet::new(self.ring, self.space, ra + rb, ma + mb, conjoin(&qa, &qb)?)
    }

    /// A ∩ B for sets on the same parameter tuple.
    pub fn intersect(&self, other: &DiophantineSet) -> Result<DiophantineSet, DiosetError> {
        self.expect_compatible(other)?;
        if self.params != other.params {
            return Err(DiosetError::ArityMismatch(format!(
                "intersect needs equal parameter counts, got {} and {}",
                self.params, other.params
            )));
        }
        let r = self.params;
        let (ma, mb) = (self.aux, other.aux);
        let arity = r + ma + mb;
        let map_a: Vec<usize> = (0..r + ma).collect();
        let map_b: Vec<usize> = (0..r).chain((0..mb).map(|j| r + ma + j)).collect();
        let qa = self.q.remap_variables(&map_a, arity)?;
        let qb = other.q.remap_variables(&map_b, arity)?;
        DiophantineSet::new(self.ring, self.space, r, ma + mb, conjoin(&qa, &qb)?)
    }

    /// π^n_S(A): kept coordinates become the parameters, dropped ones join
    /// the witness block.
    pub fn project(&self, keep: &IndexSet) -> Result<DiophantineSet, DiosetError> {
        if keep.n() != self.params {
            return Err(DiosetError::BadIndexSet(format!(
                "index set is over n={}, set has {} parameters",
                keep.n(),
                self.params
            )));
        }
        let r = self.params;
        let l = keep.len();
        let dropped: Vec<usize> = (1..=r).filter(|i| !keep.indices().contains(i)).collect();
        let mut map = vec![0usize; r + self.aux];
        for (rank, &i) in keep.indices().iter().enumerate() {
            map[i - 1] = rank;
        }
        for (rank, &i) in dropped.iter().enumerate() {
            map[i - 1] = l + rank;
        }
        for j in 0..self.aux {
            map[r + j] = r + j;
        }
        let q = self.q.remap_variables(&map, r + self.aux)?;
        DiophantineSet::new(self.ring, self.space, l, self.aux + (r - l), q)
    }

    /// The graph of π^n_S: tuples (x̄, π_S(x̄)), defined by the conjunction
    /// of the factors x_{s_k} − x_{n+k}.
    pub fn projection_graph(
        ring: Ring,
        space: SearchSpace,
        n: usize,
        s: &IndexSet,
    ) -> Result<DiophantineSet, DiosetError> {
        if s.n() != n {
            return Err(DiosetError::BadIndexSet(format!("index set over {} used with n={}", s.n(), n)));
        }
        let l = s.len();
        let arity = n + l;
        let mut factors = Vec::with_capacity(l);
        for (k, &sk) in s.indices().iter().enumerate() {
            let lhs = Polynomial::var(ring, arity, sk - 1)?;
            let rhs = Polynomial::var(ring, arity, n + k)?;
            factors.push(lhs.sub(&rhs)?);
        }
        DiophantineSet::new(ring, space, arity, 0, conjoin_all(&factors)?)
    }

    /// f⁻¹(V) = π^{r+s}_{1..r}( f ∩ (R^r × V) ), for a relation f with
    /// r + s parameters and V with s.
    pub fn preimage(&self, v: &DiophantineSet) -> Result<DiophantineSet, DiosetError> {
        self.expect_compatible(v)?;
        let s = v.params;
        if self.params <= s {
            return Err(DiosetError::ArityMismatch(format!(
                "relation has {} parameters, image set has {}",
                self.params, s
            )));
        }
        let r = self.params - s;
        let cylinder = DiophantineSet::full(self.ring, self.space, r)?.product(v)?;
        let met = self.intersect(&cylinder)?;
        met.project(&IndexSet::new(r + s, (1..=r).collect())?)
    }

    /// The relation of g(h₁, …, hₙ), assembled from products, preimages
    /// under projection graphs, intersections and one final projection.
    ///
    /// Each hᵢ is a relation with k + 1 parameters (k inputs, one value),
    /// g has n + s parameters.
    pub fn compose(g: &DiophantineSet, hs: &[DiophantineSet]) -> Result<DiophantineSet, DiosetError> {
        let n = hs.len();
        let Some(first) = hs.first() else {
            return Err(DiosetError::ArityMismatch("compose needs at least one inner relation".into()));
        };
        g.expect_compatible(first)?;
        if first.params < 2 {
            return Err(DiosetError::ArityMismatch("inner relations need k + 1 parameters, k >= 1".into()));
        }
        let k = first.params - 1;
        for h in hs {
            g.expect_compatible(h)?;
            if h.params != k + 1 {
                return Err(DiosetError::ArityMismatch(format!(
                    "inner relations must share the input arity: expected {} parameters, got {}",
                    k + 1,
                    h.params
                )));
            }
        }
        if g.params <= n {
            return Err(DiosetError::ArityMismatch(format!(
                "outer relation has {} parameters but there are {} inner relations",
                g.params, n
            )));
        }
        let s = g.params - n;
        let ambient = k + n + s;

        // tuples (x̄, t₁, …, tₙ, ȳ): constrain (x̄, tᵢ) ∈ hᵢ and (t̄, ȳ) ∈ g
        let mut pieces: Vec<DiophantineSet> = Vec::with_capacity(n + 1);
        pieces.push(DiophantineSet::full(g.ring, g.space, k)?.product(g)?);
        pieces.push(hs[0].product(&DiophantineSet::full(g.ring, g.space, n - 1 + s)?)?);
        for (i, h) in hs.iter().enumerate().skip(1) {
            let mut keep: Vec<usize> = (1..=k).collect();
            keep.push(k + i + 1);
            let graph = DiophantineSet::projection_graph(
                g.ring,
                g.space,
                ambient,
                &IndexSet::new(ambient, keep)?,
            )?;
            pieces.push(graph.preimage(h)?);
        }
        let mut met = pieces[0].clone();
        for p in &pieces[1..] {
            met = met.intersect(p)?;
        }
        let keep: Vec<usize> = (1..=k).chain(k + n + 1..=k + n + s).collect();
        met.project(&IndexSet::new(ambient, keep)?)
    }

    /// Re-expresses a set over ℕ as a set over ℤ with the same members,
    /// pinning every variable to a sum of four squares.
    pub fn to_integer_space(&self) -> Result<DiophantineSet, DiosetError> {
        if self.ring != Ring::Int || self.space != SearchSpace::Naturals {
            return Err(DiosetError::SpaceMismatch(
                "four-squares conversion applies to sets over the naturals".into(),
            ));
        }
        let (r, m) = (self.params, self.aux);
        let vars = r + m;
        let arity = vars + 4 * vars;
        let mut parts = Vec::with_capacity(vars + 1);
        parts.push(self.q.pad_arity(arity));
        for t in 0..vars {
            let mut sum = Polynomial::var(Ring::Int, arity, t)?;
            for j in 0..4 {
                let sq = Polynomial::var(Ring::Int, arity, vars + 4 * t + j)?.pow(2)?;
                sum = sum.sub(&sq)?;
            }
            parts.push(sum);
        }
        DiophantineSet::new(Ring::Int, SearchSpace::Integers, r, m + 4 * vars, conjoin_all(&parts)?)
    }
}

// --- JSON form --------------------------------------------------------------
//
// {"ring": ..., "domain": "N"|"Z"|"ring", "params": r, "aux": m, "q": {...}}

fn space_tag(space: SearchSpace) -> &'static str {
    match space {
        SearchSpace::Naturals => "N",
        SearchSpace::Integers => "Z",
        SearchSpace::RingBox => "ring",
    }
}

impl Serialize for DiophantineSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiophantineSet", 5)?;
        st.serialize_field("ring", &self.ring)?;
        st.serialize_field("domain", space_tag(self.space))?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("aux", &self.aux)?;
        st.serialize_field("q", &self.q)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for DiophantineSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ring: Ring,
            domain: String,
            params: usize,
            aux: usize,
            q: Polynomial,
        }
        let r = Repr::deserialize(d)?;
        let space = match r.domain.as_str() {
            "N" => SearchSpace::Naturals,
            "Z" => SearchSpace::Integers,
            "ring" => SearchSpace::RingBox,
            other => return Err(D::Error::custom(format!("unknown domain tag {other:?}"))),
        };
        DiophantineSet::new(r.ring, space, r.params, r.aux, r.q).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::enumerate_members;

    fn zz() -> Ring {
        Ring::Int
    }

    fn nat(v: i64) -> RingElement {
        zz().int(v)
    }

    /// Even naturals: x0 = 2·y0.
    fn evens() -> DiophantineSet {
        let q = Polynomial::from_terms(
            zz(),
            2,
            vec![(zz().int(1), vec![1, 0]), (zz().int(-2), vec![0, 1])],
        )
        .unwrap();
        DiophantineSet::new(zz(), SearchSpace::Naturals, 1, 1, q).unwrap()
    }

    fn multiples_of_3() -> DiophantineSet {
        let q = Polynomial::from_terms(
            zz(),
            2,
            vec![(zz().int(1), vec![1, 0]), (zz().int(-3), vec![0, 1])],
        )
        .unwrap();
        DiophantineSet::new(zz(), SearchSpace::Naturals, 1, 1, q).unwrap()
    }

    fn member_params(set: &DiophantineSet, pr: u32, wr: u32) -> Vec<Vec<i64>> {
        enumerate_members(set, &set.domain(wr), pr)
            .unwrap()
            .into_iter()
            .map(|(p, _)| p.iter().map(|e| e.to_i64_pair().unwrap().0).collect())
            .collect()
    }

    #[test]
    fn conjoin_examples() {
        // over ℤ the combined polynomial vanishes exactly at (1, 2)
        let p = Polynomial::from_terms(zz(), 2, vec![(nat(1), vec![1, 0]), (nat(-1), vec![0, 0])]).unwrap();
        let q = Polynomial::from_terms(zz(), 2, vec![(nat(1), vec![0, 1]), (nat(-2), vec![0, 0])]).unwrap();
        let c = conjoin(&p, &q).unwrap();
        for a in -5..=5i64 {
            for b in -5..=5i64 {
                let v = c.eval(&[nat(a), nat(b)]).unwrap();
                assert_eq!(v.is_zero(), a == 1 && b == 2, "at ({a},{b})");
            }
        }
        // conjoin(0, 0) = 0 everywhere
        let z = Polynomial::zero(zz(), 1);
        assert!(conjoin(&z, &z).unwrap().is_zero());
        // over ℤ[√2] with d′ = 3: x² − 3y² at (1, 1) is −2, not 0
        let r2 = Ring::quad(2).unwrap();
        assert_eq!(d_prime(r2), Some(3));
        let x = Polynomial::var(r2, 2, 0).unwrap();
        let y = Polynomial::var(r2, 2, 1).unwrap();
        let c = conjoin(&x, &y).unwrap();
        let v = c.eval(&[r2.one(), r2.one()]).unwrap();
        assert_eq!(v, r2.int(-2));
    }

    #[test]
    fn singleton_examples() {
        let s = DiophantineSet::singleton(SearchSpace::Integers, &[nat(3)]).unwrap();
        assert_eq!(member_params(&s, 10, 1), vec![vec![3]]);

        let origin = DiophantineSet::singleton(SearchSpace::Integers, &[nat(0), nat(0)]).unwrap();
        assert_eq!(member_params(&origin, 4, 1), vec![vec![0, 0]]);

        let g = Ring::Gauss;
        let gs = DiophantineSet::singleton(SearchSpace::RingBox, &[g.element(1, 1).unwrap()]).unwrap();
        let members = enumerate_members(&gs, &gs.domain(1), 3).unwrap();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].0, vec![g.element(1, 1).unwrap()]);
    }

    #[test]
    fn product_examples() {
        let three = DiophantineSet::singleton(SearchSpace::Naturals, &[nat(3)]).unwrap();
        let p = evens().product(&three).unwrap();
        assert_eq!(p.params(), 2);
        assert!(p.membership(&[nat(4), nat(3)], 10).unwrap().is_member());
        assert!(!p.membership(&[nat(3), nat(3)], 10).unwrap().is_member());
        // A × full ignores the second coordinate
        let af = evens().product(&DiophantineSet::full(zz(), SearchSpace::Naturals, 1).unwrap()).unwrap();
        assert!(af.membership(&[nat(2), nat(7)], 10).unwrap().is_member());
        assert!(!af.membership(&[nat(1), nat(7)], 10).unwrap().is_member());
        // {0} × {0}
        let z = DiophantineSet::singleton(SearchSpace::Naturals, &[nat(0)]).unwrap();
        let zz2 = z.product(&z).unwrap();
        assert_eq!(member_params(&zz2, 3, 1), vec![vec![0, 0]]);
    }

    #[test]
    fn intersect_examples() {
        let i = evens().intersect(&multiples_of_3()).unwrap();
        assert_eq!(member_params(&i, 10, 10), vec![vec![0], vec![6]]);
        // A ∩ A behaves like A on the box
        let aa = evens().intersect(&evens()).unwrap();
        assert_eq!(member_params(&aa, 10, 10), member_params(&evens(), 10, 10));
        // A ∩ ∅ is empty on the box
        let empty = DiophantineSet::new(
            zz(),
            SearchSpace::Naturals,
            1,
            0,
            Polynomial::int_constant(zz(), 1, 1),
        )
        .unwrap();
        assert!(member_params(&evens().intersect(&empty).unwrap(), 10, 10).is_empty());
    }

    #[test]
    fn project_examples() {
        // graph of v1 = v0² over ℕ, projected to the value coordinate
        let graph = DiophantineSet::new(
            zz(),
            SearchSpace::Naturals,
            2,
            0,
            Polynomial::from_terms(zz(), 2, vec![(nat(1), vec![0, 1]), (nat(-1), vec![2, 0])]).unwrap(),
        )
        .unwrap();
        let squares = graph.project(&IndexSet::new(2, vec![2]).unwrap()).unwrap();
        let got = member_params(&squares, 20, 5);
        assert_eq!(got, vec![vec![0], vec![1], vec![4], vec![9], vec![16]]);
        assert!(squares.membership(&[nat(4)], 5).unwrap().is_member());
        assert!(!squares.membership(&[nat(5)], 5).unwrap().is_member());
        // identity projection keeps the semantics
        let same = graph.project(&IndexSet::full(2)).unwrap();
        assert!(same.membership(&[nat(3), nat(9)], 3).unwrap().is_member());
        assert!(!same.membership(&[nat(3), nat(8)], 3).unwrap().is_member());
        // projecting a singleton
        let s = DiophantineSet::singleton(SearchSpace::Naturals, &[nat(3), nat(5)]).unwrap();
        let first = s.project(&IndexSet::new(2, vec![1]).unwrap()).unwrap();
        assert_eq!(member_params(&first, 8, 8), vec![vec![3]]);
    }

    #[test]
    fn projection_graph_examples() {
        let g = DiophantineSet::projection_graph(
            zz(),
            SearchSpace::Naturals,
            2,
            &IndexSet::new(2, vec![1]).unwrap(),
        )
        .unwrap();
        assert!(g.membership(&[nat(1), nat(2), nat(1)], 1).unwrap().is_member());
        assert_eq!(g.membership(&[nat(1), nat(2), nat(2)], 1).unwrap(), TriState::NonMemberResolved);
        // diagonal pairs
        let d = DiophantineSet::projection_graph(
            zz(),
            SearchSpace::Naturals,
            1,
            &IndexSet::new(1, vec![1]).unwrap(),
        )
        .unwrap();
        assert!(d.membership(&[nat(4), nat(4)], 1).unwrap().is_member());
        assert!(!d.membership(&[nat(4), nat(5)], 1).unwrap().is_member());
        // n = 3, S = {1, 3}: pattern (a, b, c, a, c)
        let g2 = DiophantineSet::projection_graph(
            zz(),
            SearchSpace::Naturals,
            3,
            &IndexSet::new(3, vec![1, 3]).unwrap(),
        )
        .unwrap();
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    let good = g2
                        .membership(&[nat(a), nat(b), nat(c), nat(a), nat(c)], 1)
                        .unwrap()
                        .is_member();
                    assert!(good, "({a},{b},{c},{a},{c}) should be in the graph");
                    let bad = g2
                        .membership(&[nat(a), nat(b), nat(c), nat(a + 1), nat(c)], 1)
                        .unwrap()
                        .is_member();
                    assert!(!bad);
                }
            }
        }
    }

    #[test]
    fn preimage_examples() {
        // f = graph of v1 = v0 + 1; f⁻¹(evens) = odds
        let succ = DiophantineSet::new(
            zz(),
            SearchSpace::Naturals,
            2,
            0,
            Polynomial::from_terms(
                zz(),
                2,
                vec![(nat(1), vec![1, 0]), (nat(1), vec![0, 0]), (nat(-1), vec![0, 1])],
            )
            .unwrap(),
        )
        .unwrap();
        let odds = succ.preimage(&evens()).unwrap();
        assert!(odds.membership(&[nat(3)], 10).unwrap().is_member());
        assert!(!odds.membership(&[nat(4)], 10).unwrap().is_member());
        assert_eq!(member_params(&odds, 9, 10), vec![vec![1], vec![3], vec![5], vec![7], vec![9]]);
        // preimage of the full set is full on the box
        let full1 = DiophantineSet::full(zz(), SearchSpace::Naturals, 1).unwrap();
        let all = succ.preimage(&full1).unwrap();
        assert_eq!(member_params(&all, 5, 10).len(), 6);
        // identity relation pulls back to the set itself
        let ident = DiophantineSet::projection_graph(
            zz(),
            SearchSpace::Naturals,
            1,
            &IndexSet::new(1, vec![1]).unwrap(),
        )
        .unwrap();
        let back = ident.preimage(&evens()).unwrap();
        assert_eq!(member_params(&back, 10, 12), member_params(&evens(), 10, 12));
    }

    #[test]
    fn compose_examples() {
        let plus = DiophantineSet::new(
            zz(),
            SearchSpace::Naturals,
            3,
            0,
            Polynomial::from_terms(
                zz(),
                3,
                vec![
                    (nat(1), vec![1, 0, 0]),
                    (nat(1), vec![0, 1, 0]),
                    (nat(-1), vec![0, 0, 1]),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let times = DiophantineSet::new(
            zz(),
            SearchSpace::Naturals,
            3,
            0,
            Polynomial::from_terms(
                zz(),
                3,
                vec![(nat(1), vec![1, 1, 0]), (nat(-1), vec![0, 0, 1])],
            )
            .unwrap(),
        )
        .unwrap();
        let ident = DiophantineSet::projection_graph(
            zz(),
            SearchSpace::Naturals,
            1,
            &IndexSet::new(1, vec![1]).unwrap(),
        )
        .unwrap();

        // doubling = +(id, id)
        let doubling = DiophantineSet::compose(&plus, &[ident.clone(), ident.clone()]).unwrap();
        assert_eq!(doubling.params(), 2);
        assert!(doubling.membership(&[nat(3), nat(6)], 6).unwrap().is_member());
        assert!(!doubling.membership(&[nat(3), nat(5)], 6).unwrap().is_member());

        // identity ∘ h keeps h's semantics
        let idh = DiophantineSet::compose(&ident, &[doubling.clone()]).unwrap();
        assert!(idh.membership(&[nat(3), nat(6)], 6).unwrap().is_member());
        assert!(!idh.membership(&[nat(3), nat(5)], 6).unwrap().is_member());

        // squaring = ·(id, id)
        let squaring = DiophantineSet::compose(&times, &[ident.clone(), ident]).unwrap();
        assert!(squaring.membership(&[nat(3), nat(9)], 9).unwrap().is_member());
        assert!(!squaring.membership(&[nat(3), nat(8)], 9).unwrap().is_member());
    }

    #[test]
    fn integer_space_conversion() {
        // aux-free case first: {3} over ℕ keeps exactly the member 3 over ℤ
        let three = DiophantineSet::singleton(SearchSpace::Naturals, &[nat(3)]).unwrap();
        let t = three.to_integer_space().unwrap();
        assert_eq!(t.space(), SearchSpace::Integers);
        assert_eq!(member_params(&t, 5, 2), vec![vec![3]]);

        // evens: members survive, negatives never become members
        let e = evens().to_integer_space().unwrap();
        assert!(e.membership(&[nat(0)], 1).unwrap().is_member());
        assert!(e.membership(&[nat(2)], 1).unwrap().is_member());
        for bad in [-2i64, -1, 1] {
            assert!(!e.membership(&[nat(bad)], 1).unwrap().is_member());
        }
    }

    #[test]
    fn projection_embeds_product_factors() {
        // project(A × B, first block) ⊇ A on resolved points, with equality
        // when B has members in the box
        let three = DiophantineSet::singleton(SearchSpace::Naturals, &[nat(3)]).unwrap();
        let proj = evens()
            .product(&three)
            .unwrap()
            .project(&IndexSet::new(2, vec![1]).unwrap())
            .unwrap();
        assert_eq!(member_params(&proj, 10, 10), member_params(&evens(), 10, 10));

        // with an empty B the projection must lose every member
        let empty = DiophantineSet::new(
            zz(),
            SearchSpace::Naturals,
            1,
            0,
            Polynomial::int_constant(zz(), 1, 1),
        )
        .unwrap();
        let proj_empty = evens()
            .product(&empty)
            .unwrap()
            .project(&IndexSet::new(2, vec![1]).unwrap())
            .unwrap();
        assert!(member_params(&proj_empty, 10, 10).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let s = evens();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"domain\":\"N\""));
        let back: DiophantineSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn constructor_validation() {
        assert!(DiophantineSet::new(zz(), SearchSpace::Naturals, 0, 0, Polynomial::zero(zz(), 0)).is_err());
        assert!(DiophantineSet::new(zz(), SearchSpace::Naturals, 1, 1, Polynomial::zero(zz(), 1)).is_err());
        assert!(IndexSet::new(3, vec![2, 2]).is_err());
        assert!(IndexSet::new(3, vec![0]).is_err());
        assert!(IndexSet::new(3, vec![4]).is_err());
        assert!(IndexSet::new(3, vec![]).is_err());
        assert!(evens().intersect(&evens().product(&evens()).unwrap()).is_err());
    }
}
