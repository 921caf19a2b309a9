//! The universal enumeration machinery: a Diophantine pairing scheme on
//! positive integers, the recursive enumeration P_n of all polynomials with
//! positive coefficients, the one-parameter universal sets D_n it induces,
//! and a bounded diagonal demonstrator for the set V = {n : n ∉ D_n}.
//!
//! The pairing scheme is Cantor's diagonal order on ℕ⁺×ℕ⁺:
//! pair(x, y) = (x+y−2)(x+y−1)/2 + x, with left/right recovered by
//! inverting the triangular-number index. It satisfies left(z) ≤ z and
//! right(z) ≤ z, which keeps the P_n recursion well-founded. Any scheme
//! with these properties would do; this one is verified by brute force in
//! the tests before anything downstream relies on it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::dioset::{DiosetError, DiophantineSet};
use crate::poly::{PolyError, Polynomial};
use crate::rings::{Ring, RingElement};
use crate::search::{first_root_over, SearchSpace, TriState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Dioset(#[from] DiosetError),
}

fn triangle(s: u64) -> u64 {
    s * (s + 1) / 2
}

/// pair(x, y) = (x+y−2)(x+y−1)/2 + x on ℕ⁺.
pub fn pair(x: u64, y: u64) -> Result<u64, EnumError> {
    if x == 0 || y == 0 {
        return Err(EnumError::Domain("pairing is defined on positive integers".into()));
    }
    Ok(triangle(x + y - 2) + x)
}

fn split(z: u64) -> Result<(u64, u64), EnumError> {
    if z == 0 {
        return Err(EnumError::Domain("pairing is defined on positive integers".into()));
    }
    // largest s with s(s+1)/2 < z
    let mut s = (((8 * z + 1) as f64).sqrt() as u64 + 1) / 2;
    while triangle(s) >= z {
        s -= 1;
    }
    while triangle(s + 1) < z {
        s += 1;
    }
    let x = z - triangle(s);
    let y = s + 2 - x;
    Ok((x, y))
}

pub fn left(z: u64) -> Result<u64, EnumError> {
    Ok(split(z)?.0)
}

pub fn right(z: u64) -> Result<u64, EnumError> {
    Ok(split(z)?.1)
}

/// The enumeration P_1 = 1, P_{3i−1} = x_{i−1}, P_{3i} = P_{L(i)} + P_{R(i)},
/// P_{3i+1} = P_{L(i)} · P_{R(i)}, memoized.
///
/// The memo table is the one shared mutable structure: fills are idempotent
/// (the recursion is a pure function of n) and the lock is never held while
/// computing, so concurrent readers see either absence or the final value.
#[derive(Default)]
pub struct PolynomialEnumeration {
    memo: Mutex<HashMap<u64, Arc<Polynomial>>>,
}

impl PolynomialEnumeration {
    pub fn new() -> Self {
        Self::default()
    }

    /// The n-th polynomial of the enumeration, over ℤ with all coefficients
    /// positive; n ≥ 1.
    pub fn nth(&self, n: u64) -> Result<Arc<Polynomial>, EnumError> {
        if n == 0 {
            return Err(EnumError::Domain("index must be >= 1".into()));
        }
        if let Some(p) = self.memo.lock().expect("memo lock").get(&n) {
            return Ok(Arc::clone(p));
        }
        let value = match n % 3 {
            1 if n == 1 => Polynomial::int_constant(Ring::Int, 0, 1),
            2 => {
                // n = 3i − 1 ⇒ the variable x_{i−1}
                let i = (n + 1) / 3;
                Polynomial::var(Ring::Int, i as usize, (i - 1) as usize)?
            }
            0 => {
                let i = n / 3;
                let l = self.nth(left(i)?)?;
                let r = self.nth(right(i)?)?;
                l.add(&r)?
            }
            _ => {
                let i = (n - 1) / 3;
                let l = self.nth(left(i)?)?;
                let r = self.nth(right(i)?)?;
                l.mul(&r)?
            }
        };
        let arc = Arc::new(value);
        self.memo
            .lock()
            .expect("memo lock")
            .entry(n)
            .or_insert_with(|| Arc::clone(&arc));
        Ok(arc)
    }

    /// D_n = {x₀ : ∃x₁…xₙ [P_{L(n)}(x₀,…,xₙ) = P_{R(n)}(x₀,…,xₙ)]}
    /// over ℕ, with exactly n bound variables regardless of how many the
    /// two sides mention.
    pub fn universal_set(&self, n: u64) -> Result<DiophantineSet, EnumError> {
        if n == 0 {
            return Err(EnumError::Domain("index must be >= 1".into()));
        }
        let l = self.nth(left(n)?)?;
        let r = self.nth(right(n)?)?;
        let q = l.sub(&r)?.pad_arity(n as usize + 1);
        Ok(DiophantineSet::new(Ring::Int, SearchSpace::Naturals, 1, n as usize, q)?)
    }

    /// Bounded membership of n in D_n: growing boxes [0, b]^n for
    /// b = 1, …, budget over the bound variables (lexicographic within each
    /// box, already-scanned points skipped), with emptiness certificates
    /// where a sound one applies.
    pub fn diagonal_membership(&self, n: u64, budget: u32) -> Result<TriState, EnumError> {
        let set = self.universal_set(n)?;
        self.membership_with_certificates(&set, &Ring::Int.int(n as i64), budget)
    }

    /// Membership of a point in a one-parameter set over ℕ, by growing-box
    /// witness search plus certificates. `NonMemberResolved` is only emitted
    /// on a certificate (constant nonzero value, strictly-signed polynomial,
    /// or odd-parity polynomial); exhausting the budget yields `Unknown`.
    pub fn membership_with_certificates(
        &self,
        set: &DiophantineSet,
        x0: &RingElement,
        budget: u32,
    ) -> Result<TriState, EnumError> {
        let pinned = set.q().substitute_value(0, x0)?;
        let aux = set.aux();
        if let Some(c) = pinned.constant_value() {
            return Ok(if c.is_zero() {
                TriState::Member(vec![Ring::Int.int(0); aux])
            } else {
                TriState::NonMemberResolved
            });
        }
        if has_emptiness_certificate(&pinned) {
            return Ok(TriState::NonMemberResolved);
        }
        let support: Vec<usize> = pinned.support().into_iter().filter(|&v| v >= 1).collect();
        for b in 1..=budget {
            let values: Vec<RingElement> = (0..=b as i64).map(|v| Ring::Int.int(v)).collect();
            let skip_old = if b == 1 { None } else { Some(b as usize) };
            if let Some(found) = first_root_over(&pinned, &support, &values, skip_old)? {
                let mut witness = vec![Ring::Int.int(0); aux];
                for (var, val) in found {
                    witness[var - 1] = val;
                }
                return Ok(TriState::Member(witness));
            }
        }
        Ok(TriState::Unknown(budget))
    }

    /// The table behind the diagonal argument: for every n ≤ max the
    /// tri-state of n ∈ D_n, and on resolved rows the characteristic values
    /// χ_{D_n}(n) and χ_V(n) = 1 − χ_{D_n}(n).
    pub fn diagonal_report(&self, max: u64, budget: u32) -> Result<DiagonalReport, EnumError> {
        if max == 0 {
            return Err(EnumError::Domain("need at least one row".into()));
        }
        let mut rows = Vec::with_capacity(max as usize);
        for n in 1..=max {
            let state = self.diagonal_membership(n, budget)?;
            let chi_dn = match &state {
                TriState::Member(_) => Some(1u8),
                TriState::NonMemberResolved => Some(0),
                TriState::Unknown(_) => None,
            };
            rows.push(DiagonalRow { n, chi_dn, chi_v: chi_dn.map(|c| 1 - c), state });
        }
        Ok(DiagonalReport { budget, rows })
    }
}

/// Sound reasons a polynomial has no root over ℕ: every monomial takes a
/// non-negative value there, so a polynomial whose coefficients are all
/// strictly positive (or all strictly negative) with a nonzero constant
/// term never vanishes; and a polynomial that is odd mod 2 never vanishes.
fn has_emptiness_certificate(q: &Polynomial) -> bool {
    let constant = q
        .terms()
        .iter()
        .find(|t| t.exps.iter().all(|&e| e == 0))
        .map(|t| t.coeff.re().clone())
        .unwrap_or_else(BigInt::zero);
    if !constant.is_zero() {
        let all_pos = q.terms().iter().all(|t| t.coeff.re().is_positive());
        let all_neg = q.terms().iter().all(|t| t.coeff.re().is_negative());
        if all_pos || all_neg {
            return true;
        }
        let const_odd = constant.is_odd();
        let rest_even = q
            .terms()
            .iter()
            .filter(|t| t.exps.iter().any(|&e| e > 0))
            .all(|t| t.coeff.re().is_even());
        if const_odd && rest_even {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalRow {
    pub n: u64,
    pub state: TriState,
    pub chi_dn: Option<u8>,
    pub chi_v: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalReport {
    pub budget: u32,
    pub rows: Vec<DiagonalRow>,
}

impl Serialize for DiagonalRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiagonalRow", 4)?;
        st.serialize_field("n", &self.n)?;
        let (tag, witness) = match &self.state {
            TriState::Member(w) => ("member", Some(w)),
            TriState::NonMemberResolved => ("nonmember", None),
            TriState::Unknown(_) => ("unknown", None),
        };
        st.serialize_field("state", tag)?;
        match witness {
            Some(w) => st.serialize_field("witness", w)?,
            None => st.skip_field("witness")?,
        }
        st.serialize_field("chi_v", &self.chi_v)?;
        st.end()
    }
}

impl Serialize for DiagonalReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}
