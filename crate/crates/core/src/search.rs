//! The bounded brute-force oracle: deterministic box scans that either
//! produce a re-verifiable witness, resolve emptiness for trivially
//! unsatisfiable polynomials, or honestly report `Unknown`.
//!
//! Membership in a Diophantine set is only semidecidable, so a finite scan
//! must never claim non-membership from an exhausted budget alone. The scan
//! order is fixed (ascending, lexicographic) and pruning never changes which
//! witness is found first, so results are reproducible byte for byte.

use serde::Serialize;

use crate::poly::{PolyError, Polynomial};
use crate::rings::{Ring, RingElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("invalid search domain: {0}")]
    BadDomain(String),
}

/// Which points a variable ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// 0, 1, …, radius (ring ℤ only).
    Naturals,
    /// −radius, …, radius (ring ℤ only).
    Integers,
    /// a + bω with a, b ∈ [−radius, radius], lexicographic on (a, b).
    RingBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchDomain {
    ring: Ring,
    space: SearchSpace,
    radius: u32,
}

impl SearchDomain {
    pub fn new(ring: Ring, space: SearchSpace, radius: u32) -> Result<SearchDomain, SearchError> {
        match (ring, space) {
            (Ring::Int, SearchSpace::Naturals | SearchSpace::Integers) => {}
            (Ring::Int, SearchSpace::RingBox) => {
                return Err(SearchError::BadDomain(
                    "ring-box scans apply to quadratic and Gaussian rings".into(),
                ))
            }
            (_, SearchSpace::RingBox) => {}
            (r, s) => {
                return Err(SearchError::BadDomain(format!(
                    "space {s:?} requires ring Z, got {r}"
                )))
            }
        }
        Ok(SearchDomain { ring, space, radius })
    }

    pub fn naturals(radius: u32) -> SearchDomain {
        SearchDomain { ring: Ring::Int, space: SearchSpace::Naturals, radius }
    }

    pub fn integers(radius: u32) -> SearchDomain {
        SearchDomain { ring: Ring::Int, space: SearchSpace::Integers, radius }
    }

    pub fn ring_box(ring: Ring, radius: u32) -> Result<SearchDomain, SearchError> {
        SearchDomain::new(ring, SearchSpace::RingBox, radius)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn space(&self) -> SearchSpace {
        self.space
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn with_radius(&self, radius: u32) -> SearchDomain {
        SearchDomain { radius, ..*self }
    }

    /// All values of one variable, in scan order.
    pub fn values(&self) -> Vec<RingElement> {
        let r = self.radius as i64;
        match self.space {
            SearchSpace::Naturals => (0..=r).map(|v| self.ring.int(v)).collect(),
            SearchSpace::Integers => (-r..=r).map(|v| self.ring.int(v)).collect(),
            SearchSpace::RingBox => {
                let mut out = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
                for a in -r..=r {
                    for b in -r..=r {
                        out.push(self.ring.element(a, b).expect("box element"));
                    }
                }
                out
            }
        }
    }
}

/// Outcome of a bounded membership question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriState {
    /// A witness was found; it re-verifies by exact evaluation.
    Member(Vec<RingElement>),
    /// Emptiness certified (constant nonzero polynomial or, where a caller
    /// supplies one, a sign/parity certificate) — never from budget exhaustion.
    NonMemberResolved,
    /// The box at this radius was exhausted without a verdict.
    Unknown(u32),
}

impl TriState {
    pub fn is_member(&self) -> bool {
        matches!(self, TriState::Member(_))
    }

    pub fn witness(&self) -> Option<&[RingElement]> {
        match self {
            TriState::Member(w) => Some(w),
            _ => None,
        }
    }
}

/// Depth-first lexicographic root search over `vars` (in the given order),
/// substituting values as it descends so subtrees prune early.
///
/// `min_index_from`: when `Some(k)`, only accept points where at least one
/// scanned coordinate has value-index ≥ k (shell scans use this to skip
/// points already covered by a smaller box).
pub(crate) fn first_root_over(
    poly: &Polynomial,
    vars: &[usize],
    values: &[RingElement],
    min_index_from: Option<usize>,
) -> Result<Option<Vec<(usize, RingElement)>>, PolyError> {
    fn rec(
        poly: &Polynomial,
        vars: &[usize],
        values: &[RingElement],
        need: Option<usize>,
        acc: &mut Vec<(usize, RingElement)>,
    ) -> Result<bool, PolyError> {
        if let Some(c) = poly.constant_value() {
            if !c.is_zero() {
                return Ok(false);
            }
            // whole subtree vanishes: lex-least completion, honoring the
            // shell constraint if still unmet
            match need {
                None => {
                    for &v in vars {
                        acc.push((v, values[0].clone()));
                    }
                    return Ok(true);
                }
                Some(k) => {
                    if k >= values.len() || vars.is_empty() {
                        return Ok(false);
                    }
                    // lex-least point with some coordinate index ≥ k: keep
                    // every coordinate at the first value except the last,
                    // which takes index k
                    for &v in &vars[..vars.len() - 1] {
                        acc.push((v, values[0].clone()));
                    }
                    acc.push((vars[vars.len() - 1], values[k].clone()));
                    return Ok(true);
                }
            }
        }
        let Some((&v, rest)) = vars.split_first() else {
            return Ok(false); // non-constant poly with no vars left cannot occur
        };
        for (idx, val) in values.iter().enumerate() {
            let next = poly.substitute_value(v, val)?;
            let need_next = match need {
                Some(k) if idx < k => Some(k),
                _ => None,
            };
            acc.push((v, val.clone()));
            if rec(&next, rest, values, need_next, acc)? {
                return Ok(true);
            }
            acc.pop();
        }
        Ok(false)
    }

    // the spec order is the nested loop over all free variables; branching
    // only on the support is a pure pruning step (other coordinates cannot
    // affect the value), except that the shell constraint must then be
    // checked against support coordinates only, which is equivalent because
    // a root with off-support coordinates pinned to the first value appears
    // in the earliest shell that contains its support coordinates
    let mut acc = Vec::new();
    if rec(poly, vars, values, min_index_from, &mut acc)? {
        Ok(Some(acc))
    } else {
        Ok(None)
    }
}

/// Bounded root search for `q` with the first `fixed.len()` variables pinned.
///
/// Returns `Member` with the values of the remaining free variables (scan
/// order: ascending per variable, lexicographic overall), `NonMemberResolved`
/// only when the pinned polynomial is a nonzero constant, else `Unknown`.
pub fn solve_bounded(
    q: &Polynomial,
    dom: &SearchDomain,
    fixed: &[RingElement],
) -> Result<TriState, SearchError> {
    if fixed.len() > q.arity() {
        return Err(SearchError::ArityMismatch(format!(
            "{} fixed values for arity {}",
            fixed.len(),
            q.arity()
        )));
    }
    if dom.ring() != q.ring() {
        return Err(RingError::RingMismatch(q.ring(), dom.ring()).into());
    }
    let mut pinned = q.clone();
    for (i, v) in fixed.iter().enumerate() {
        pinned = pinned.substitute_value(i, v)?;
    }
    let free: Vec<usize> = (fixed.len()..q.arity()).collect();

    if let Some(c) = pinned.constant_value() {
        if c.is_zero() {
            let values = dom.values();
            return Ok(TriState::Member(vec![values[0].clone(); free.len()]));
        }
        return Ok(TriState::NonMemberResolved);
    }

    let values = dom.values();
    let support: Vec<usize> = pinned.support().into_iter().filter(|v| *v >= fixed.len()).collect();
    match first_root_over(&pinned, &support, &values, None)? {
        Some(partial) => {
            let mut witness = vec![values[0].clone(); free.len()];
            for (v, val) in partial {
                witness[v - fixed.len()] = val;
            }
            Ok(TriState::Member(witness))
        }
        None => Ok(TriState::Unknown(dom.radius())),
    }
}

/// All points of the parameter box whose membership resolves as `Member`
/// at the witness radius, lexicographically sorted, with witnesses.
pub fn enumerate_members(
    set: &crate::dioset::DiophantineSet,
    witness_dom: &SearchDomain,
    param_radius: u32,
) -> Result<Vec<(Vec<RingElement>, Vec<RingElement>)>, SearchError> {
    let param_dom = witness_dom.with_radius(param_radius);
    let values = param_dom.values();
    let mut out = Vec::new();
    let mut point = Vec::with_capacity(set.params());
    enumerate_rec(set, witness_dom, &values, &mut point, &mut out)?;
    Ok(out)
}

fn enumerate_rec(
    set: &crate::dioset::DiophantineSet,
    witness_dom: &SearchDomain,
    values: &[RingElement],
    point: &mut Vec<RingElement>,
    out: &mut Vec<(Vec<RingElement>, Vec<RingElement>)>,
) -> Result<(), SearchError> {
    if point.len() == set.params() {
        if let TriState::Member(w) = solve_bounded(set.q(), witness_dom, point)? {
            out.push((point.clone(), w));
        }
        return Ok(());
    }
    for v in values {
        point.push(v.clone());
        enumerate_rec(set, witness_dom, values, point, out)?;
        point.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn zz() -> Ring {
        Ring::Int
    }

    #[test]
    fn first_root_is_deterministic() {
        // v0² − 9 over integers radius 5: scan order −5..5, first root −3
        let p = Polynomial::from_terms(
            zz(),
            1,
            vec![(zz().int(1), vec![2]), (zz().int(-9), vec![0])],
        )
        .unwrap();
        let dom = SearchDomain::integers(5);
        let got = solve_bounded(&p, &dom, &[]).unwrap();
        assert_eq!(got, TriState::Member(vec![zz().int(-3)]));
    }

    #[test]
    fn constant_short_circuits() {
        let one = Polynomial::int_constant(zz(), 1, 1);
        let dom = SearchDomain::naturals(5);
        assert_eq!(solve_bounded(&one, &dom, &[]).unwrap(), TriState::NonMemberResolved);
        let zero = Polynomial::zero(zz(), 2);
        assert_eq!(
            solve_bounded(&zero, &dom, &[]).unwrap(),
            TriState::Member(vec![zz().int(0), zz().int(0)])
        );
    }

    #[test]
    fn out_of_box_root_is_unknown() {
        let p = Polynomial::from_terms(
            zz(),
            1,
            vec![(zz().int(1), vec![1]), (zz().int(-10), vec![0])],
        )
        .unwrap();
        let dom = SearchDomain::integers(5);
        assert_eq!(solve_bounded(&p, &dom, &[]).unwrap(), TriState::Unknown(5));
    }

    #[test]
    fn witnesses_reverify() {
        let p = Polynomial::from_terms(
            zz(),
            3,
            vec![
                (zz().int(1), vec![1, 0, 0]),
                (zz().int(2), vec![0, 1, 0]),
                (zz().int(-1), vec![0, 0, 2]),
            ],
        )
        .unwrap();
        let dom = SearchDomain::naturals(6);
        for fixed in [vec![zz().int(1)], vec![zz().int(4)]] {
            if let TriState::Member(w) = solve_bounded(&p, &dom, &fixed).unwrap() {
                let mut full = fixed.clone();
                full.extend(w);
                assert!(p.eval(&full).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn radius_is_monotone() {
        // v0 − 7 over naturals
        let p = Polynomial::from_terms(
            zz(),
            1,
            vec![(zz().int(1), vec![1]), (zz().int(-7), vec![0])],
        )
        .unwrap();
        assert!(!solve_bounded(&p, &SearchDomain::naturals(5), &[]).unwrap().is_member());
        for r in 7..12 {
            assert!(solve_bounded(&p, &SearchDomain::naturals(r), &[]).unwrap().is_member());
        }
    }

    #[test]
    fn gaussian_box_scan() {
        // v0² + 1 = 0 has the Gaussian roots ±i; lex-least in box is (0, -1)
        let g = Ring::Gauss;
        let p = Polynomial::from_terms(
            g,
            1,
            vec![(g.int(1), vec![2]), (g.int(1), vec![0])],
        )
        .unwrap();
        let dom = SearchDomain::ring_box(g, 2).unwrap();
        let got = solve_bounded(&p, &dom, &[]).unwrap();
        assert_eq!(got, TriState::Member(vec![g.element(0, -1).unwrap()]));
    }

    #[test]
    fn domain_validation() {
        assert!(SearchDomain::new(Ring::Int, SearchSpace::RingBox, 3).is_err());
        assert!(SearchDomain::new(Ring::Gauss, SearchSpace::Naturals, 3).is_err());
        assert!(SearchDomain::new(Ring::Gauss, SearchSpace::RingBox, 3).is_ok());
    }
}
