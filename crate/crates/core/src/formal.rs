//! Finite-scale self-reference machinery: the diagonal construction over
//! finite function tables, abstract formal systems with naming and
//! substitution, representability, the Liar and generalized Liar theorems,
//! logical-system audits, and a quine builder over a toy quoting language.
//!
//! Everything here is finite and exhaustively checkable. The point is not
//! to prove impossibility theorems at run time but to make their
//! constructions executable: every diagonal object is built explicitly and
//! verified against the table it escapes from.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormalError {
    #[error("invalid finite function: {0}")]
    BadTable(String),
    #[error("invalid formal system: {0}")]
    BadSystem(String),
    #[error("exhaustion budget exceeded: checked {checked} of {total} functions")]
    ExhaustionBudgetExceeded { checked: u64, total: u64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),
    #[error("malformed template: {0}")]
    MalformedTemplate(String),
}

// --- the diagonal schema ------------------------------------------------------

/// A finite g : T × T → Y, with T = {0..t_size} and Y = {0..y_size};
/// `table[s][t]` is g(s, t). Column t is the function g(−, t).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFunction2 {
    pub t_size: usize,
    pub y_size: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteFunction2 {
    pub fn new(t_size: usize, y_size: usize, table: Vec<Vec<usize>>) -> Result<Self, FormalError> {
        if table.len() != t_size || table.iter().any(|row| row.len() != t_size) {
            return Err(FormalError::BadTable(format!("table must be {t_size}×{t_size}")));
        }
        if table.iter().flatten().any(|&v| v >= y_size) {
            return Err(FormalError::BadTable(format!("values must lie below {y_size}")));
        }
        Ok(FiniteFunction2 { t_size, y_size, table })
    }

    pub fn at(&self, s: usize, t: usize) -> usize {
        self.table[s][t]
    }

    /// Is f (as a value vector over T) equal to some column g(−, t)?
    pub fn represents(&self, f: &[usize]) -> Option<usize> {
        (0..self.t_size).find(|&t| (0..self.t_size).all(|s| self.at(s, t) == f[s]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DiagonalCertificate {
    /// alpha has no fixed point: for every column t, the point s where
    /// f(s) ≠ g(s, t). The diagonal point s = t always works.
    EscapesEveryColumn { differs_at: Vec<usize> },
    /// alpha has fixed points; f may or may not be represented.
    FixedPoints { fixed_points: Vec<usize>, matching_columns: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalOutcome {
    /// f(s) = alpha(g(s, s)).
    pub f: Vec<usize>,
    pub certificate: DiagonalCertificate,
}

/// The diagonal construction f = α ∘ g ∘ Δ, with a per-column certificate
/// that f escapes the table whenever α is fixed-point-free.
pub fn diagonal_construct(g: &FiniteFunction2, alpha: &[usize]) -> Result<DiagonalOutcome, FormalError> {
    if alpha.len() != g.y_size || alpha.iter().any(|&v| v >= g.y_size) {
        return Err(FormalError::BadTable("alpha must map Y into Y".into()));
    }
    let f: Vec<usize> = (0..g.t_size).map(|s| alpha[g.at(s, s)]).collect();
    let fixed: Vec<usize> = (0..g.y_size).filter(|&y| alpha[y] == y).collect();
    let certificate = if fixed.is_empty() {
        let differs_at = (0..g.t_size)
            .map(|t| {
                debug_assert_ne!(f[t], g.at(t, t));
                t
            })
            .collect();
        DiagonalCertificate::EscapesEveryColumn { differs_at }
    } else {
        let matching = (0..g.t_size).filter(|&t| g.represents(&f) == Some(t)).collect();
        DiagonalCertificate::FixedPoints { fixed_points: fixed, matching_columns: matching }
    };
    Ok(DiagonalOutcome { f, certificate })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    /// Whether every f : T → Y appears as a column of g.
    pub all_representable: bool,
    pub non_representable: Option<Vec<usize>>,
    /// When all functions are representable: every α : Y → Y has a fixed
    /// point (checked by exhaustion).
    pub every_alpha_has_fixed_point: Option<bool>,
    pub functions_checked: u64,
    pub exhaustive: bool,
}

/// Checks the contrapositive schema on a finite table: if every function
/// T → Y is a column of g, then every α : Y → Y has a fixed point.
/// Enumeration of the |Y|^|T| functions is capped by `budget`.
pub fn fixed_point_check(g: &FiniteFunction2, budget: u64) -> Result<FixedPointReport, FormalError> {
    let total = (g.y_size as u64).checked_pow(g.t_size as u32).unwrap_or(u64::MAX);
    let mut f = vec![0usize; g.t_size];
    let mut checked = 0u64;
    let mut non_representable = None;
    loop {
        if checked >= budget {
            return Err(FormalError::ExhaustionBudgetExceeded { checked, total });
        }
        checked += 1;
        if g.represents(&f).is_none() {
            non_representable = Some(f.clone());
            break;
        }
        // next function in lexicographic order
        let mut i = 0;
        loop {
            if i == g.t_size {
                break;
            }
            f[i] += 1;
            if f[i] < g.y_size {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == g.t_size {
            break;
        }
    }
    let all_representable = non_representable.is_none();
    let every_alpha_has_fixed_point = if all_representable {
        Some(all_alphas_have_fixed_points(g.y_size))
    } else {
        None
    };
    Ok(FixedPointReport {
        all_representable,
        non_representable,
        every_alpha_has_fixed_point,
        functions_checked: checked,
        exhaustive: true,
    })
}

fn all_alphas_have_fixed_points(y_size: usize) -> bool {
    if y_size == 0 {
        return true;
    }
    let mut alpha = vec![0usize; y_size];
    loop {
        if (0..y_size).all(|y| alpha[y] != y) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == y_size {
                return true;
            }
            alpha[i] += 1;
            if alpha[i] < y_size {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

// --- abstract formal systems ---------------------------------------------------

/// (E, S, F, N, naming, subst) with S ⊆ F ⊆ E, F ∩ N = ∅ (names live in
/// their own index space), naming injective F → N, and subst total
/// F × N → S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSystem {
    pub e_size: usize,
    /// formulas[e] — is expression e a formula?
    pub formulas: Vec<bool>,
    /// sentences[e] — is expression e a sentence? implies formula.
    pub sentences: Vec<bool>,
    pub n_size: usize,
    /// naming[e] = Some(n) for formulas, None otherwise; injective.
    pub naming: Vec<Option<usize>>,
    /// subst[e][n] = Some(sentence) for formulas, None otherwise.
    pub subst: Vec<Vec<Option<usize>>>,
}

impl FormalSystem {
    pub fn new(
        e_size: usize,
        formulas: Vec<bool>,
        sentences: Vec<bool>,
        n_size: usize,
        naming: Vec<Option<usize>>,
        subst: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, FormalError> {
        let sys = FormalSystem { e_size, formulas, sentences, n_size, naming, subst };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<(), FormalError> {
        let bad = |m: String| Err(FormalError::BadSystem(m));
        if self.formulas.len() != self.e_size
            || self.sentences.len() != self.e_size
            || self.naming.len() != self.e_size
            || self.subst.len() != self.e_size
        {
            return bad("table lengths must match the expression count".into());
        }
        if !self.sentences.iter().any(|&s| s) {
            return bad("S must be nonempty".into());
        }
        let mut used_names = BTreeSet::new();
        for e in 0..self.e_size {
            if self.sentences[e] && !self.formulas[e] {
                return bad(format!("sentence {e} is not a formula"));
            }
            match (self.formulas[e], self.naming[e]) {
                (true, Some(n)) => {
                    if n >= self.n_size {
                        return bad(format!("name of formula {e} out of range"));
                    }
                    if !used_names.insert(n) {
                        return bad("naming must be injective".into());
                    }
                }
                (true, None) => return bad(format!("formula {e} has no name")),
                (false, Some(_)) => return bad(format!("non-formula {e} has a name")),
                (false, None) => {}
            }
            if self.formulas[e] {
                if self.subst[e].len() != self.n_size {
                    return bad(format!("subst row of formula {e} must cover all names"));
                }
                for n in 0..self.n_size {
                    match self.subst[e][n] {
                        Some(s) if s < self.e_size && self.sentences[s] => {}
                        _ => return bad(format!("subst({e}, {n}) must be a sentence")),
                    }
                }
            } else if self.subst[e].iter().any(|v| v.is_some()) {
                return bad(format!("non-formula {e} has substitution entries"));
            }
        }
        Ok(())
    }

    pub fn formula_indices(&self) -> Vec<usize> {
        (0..self.e_size).filter(|&e| self.formulas[e]).collect()
    }

    pub fn sentence_indices(&self) -> Vec<usize> {
        (0..self.e_size).filter(|&e| self.sentences[e]).collect()
    }

    /// φ[n], defined for formulas.
    pub fn substitute(&self, phi: usize, n: usize) -> Option<usize> {
        self.subst.get(phi)?.get(n).copied().flatten()
    }

    /// g(φ), the name of a formula.
    pub fn name_of(&self, phi: usize) -> Option<usize> {
        self.naming.get(phi).copied().flatten()
    }

    /// g⁻¹(n): the formula named n, if n names one.
    pub fn named_formula(&self, n: usize) -> Option<usize> {
        (0..self.e_size).find(|&e| self.naming[e] == Some(n))
    }

    /// The first formula (in index order) that A-represents X ⊆ N:
    /// φ[n] ∈ A ⇔ n ∈ X for every name n.
    pub fn representable(&self, a: &BTreeSet<usize>, x: &BTreeSet<usize>) -> Option<usize> {
        self.formula_indices().into_iter().find(|&phi| {
            (0..self.n_size).all(|n| {
                let hit = self.substitute(phi, n).map(|s| a.contains(&s)).unwrap_or(false);
                hit == x.contains(&n)
            })
        })
    }

    /// The anti-diagonal set {n ∈ g(F) : g⁻¹(n)[n] ∉ T}.
    pub fn anti_diagonal(&self, t: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for phi in self.formula_indices() {
            let n = self.name_of(phi).expect("formulas are named");
            let diag = self.substitute(phi, n).expect("subst total on formulas");
            if !t.contains(&diag) {
                out.insert(n);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiarVerdict {
    pub anti_diagonal: BTreeSet<usize>,
    /// A formula representing the anti-diagonal would refute the theorem;
    /// it is always absent, and the field documents what was searched for.
    pub representing_formula: Option<usize>,
    pub holds: bool,
}

/// Checks the Liar theorem on one instance: the anti-diagonal set over T is
/// never T-representable.
pub fn liar_check(sys: &FormalSystem, t: &BTreeSet<usize>) -> LiarVerdict {
    let anti = sys.anti_diagonal(t);
    let rep = sys.representable(t, &anti);
    LiarVerdict { anti_diagonal: anti, representing_formula: rep, holds: rep.is_none() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizedLiarOutcome {
    /// The representing formula π for {n : g(g⁻¹(n)[n]) ∉ g(A)}.
    pub pi: usize,
    /// λ = π[g(π)].
    pub lambda: usize,
    pub lambda_in_b: bool,
    pub lambda_in_a: bool,
}

/// The generalized Liar construction: given A ⊆ F and B ⊆ S with the
/// system self-referential for the needed set (checked constructively by
/// finding π) and ∼g(A) B-representable, produces λ ∈ S with
/// λ ∈ B ⇔ λ ∉ A.
pub fn generalized_liar(
    sys: &FormalSystem,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    pi_hint: Option<usize>,
) -> Result<GeneralizedLiarOutcome, FormalError> {
    // hypothesis: ∼𝐀 (complement of the names of A) is B-representable
    let names_of_a: BTreeSet<usize> =
        a.iter().filter_map(|&phi| sys.name_of(phi)).collect();
    let co_names: BTreeSet<usize> = (0..sys.n_size).filter(|n| !names_of_a.contains(n)).collect();
    if sys.representable(b, &co_names).is_none() {
        return Err(FormalError::HypothesisFailure(
            "the complement of A's names is not B-representable".into(),
        ));
    }

    // the needed set: {n ∈ g(F) : g( g⁻¹(n)[n] ) ∉ g(A)}, which is what
    // self-referentiality applied to ∼𝐀 must represent
    let mut needed = BTreeSet::new();
    for phi in sys.formula_indices() {
        let n = sys.name_of(phi).expect("named");
        let diag = sys.substitute(phi, n).expect("total");
        let diag_name = sys.name_of(diag);
        let in_named_a = diag_name.map(|dn| names_of_a.contains(&dn)).unwrap_or(false);
        if !in_named_a {
            needed.insert(n);
        }
    }

    let pi = match pi_hint {
        Some(phi) => {
            let represents = (0..sys.n_size).all(|n| {
                let hit = sys.substitute(phi, n).map(|s| b.contains(&s)).unwrap_or(false);
                hit == needed.contains(&n)
            });
            if !represents {
                return Err(FormalError::HypothesisFailure(
                    "the supplied formula does not represent the self-reference set".into(),
                ));
            }
            phi
        }
        None => sys.representable(b, &needed).ok_or_else(|| {
            FormalError::HypothesisFailure(
                "the system is not self-referential for the needed set (no representing π)".into(),
            )
        })?,
    };

    let m = sys.name_of(pi).expect("named");
    let lambda = sys.substitute(pi, m).expect("total");
    let lambda_in_b = b.contains(&lambda);
    let lambda_in_a = a.contains(&lambda);
    debug_assert_eq!(lambda_in_b, !lambda_in_a, "the fixed point must split B from A");
    Ok(GeneralizedLiarOutcome { pi, lambda, lambda_in_b, lambda_in_a })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiarSweepReport {
    pub systems: u64,
    pub checks: u64,
    pub counterexamples: u64,
}

/// Exhaustive Liar check over every formal system with E = F = S of size
/// ≤ `k_max`, name spaces up to `n_max`, all injective namings, all
/// substitution tables, and all truth sets T ⊆ S.
pub fn liar_sweep(k_max: usize, n_max: usize) -> LiarSweepReport {
    fn injections(k: usize, m: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for n in 0..m {
            if !acc.contains(&n) {
                acc.push(n);
                injections(k, m, acc, out);
                acc.pop();
            }
        }
    }
    let mut report = LiarSweepReport { systems: 0, checks: 0, counterexamples: 0 };
    for k in 1..=k_max {
        for m in k..=n_max {
            let mut namings = Vec::new();
            injections(k, m, &mut Vec::new(), &mut namings);
            let subst_space = (k as u64).pow((k * m) as u32);
            for naming in &namings {
                for code in 0..subst_space {
                    let mut c = code;
                    let mut subst = vec![vec![None; m]; k];
                    for row in subst.iter_mut() {
                        for cell in row.iter_mut() {
                            *cell = Some((c % k as u64) as usize);
                            c /= k as u64;
                        }
                    }
                    let sys = FormalSystem::new(
                        k,
                        vec![true; k],
                        vec![true; k],
                        m,
                        naming.iter().map(|&n| Some(n)).collect(),
                        subst,
                    )
                    .expect("enumerated systems are valid");
                    report.systems += 1;
                    for t_bits in 0..(1u64 << k) {
                        let t: BTreeSet<usize> =
                            (0..k).filter(|&s| t_bits & (1 << s) != 0).collect();
                        report.checks += 1;
                        if !liar_check(&sys, &t).holds {
                            report.counterexamples += 1;
                        }
                    }
                }
            }
        }
    }
    report
}

// --- logical systems -----------------------------------------------------------

/// A formal system with provability P, truth T and a negation map on
/// formulas, subject to the truth-functional constraints on sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalSystem {
    pub base: FormalSystem,
    pub provable: BTreeSet<usize>,
    pub truth: BTreeSet<usize>,
    /// neg[e] for formulas.
    pub neg: Vec<Option<usize>>,
}

impl LogicalSystem {
    pub fn new(
        base: FormalSystem,
        provable: BTreeSet<usize>,
        truth: BTreeSet<usize>,
        neg: Vec<Option<usize>>,
    ) -> Result<Self, FormalError> {
        let bad = |m: String| Err(FormalError::BadSystem(m));
        if neg.len() != base.e_size {
            return bad("negation table length mismatch".into());
        }
        for e in 0..base.e_size {
            match (base.formulas[e], neg[e]) {
                (true, Some(ne)) => {
                    if ne >= base.e_size || !base.formulas[ne] {
                        return bad(format!("negation of {e} is not a formula"));
                    }
                    if base.sentences[e] != base.sentences[ne] {
                        return bad(format!("{e} and its negation must both be sentences or neither"));
                    }
                    if base.sentences[e] && (truth.contains(&e) == truth.contains(&ne)) {
                        return bad(format!("exactly one of {e} and its negation may be true"));
                    }
                    for n in 0..base.n_size {
                        let s1 = base.subst[e][n].expect("total");
                        let s2 = base.subst[ne][n].expect("total");
                        if truth.contains(&s1) == truth.contains(&s2) {
                            return bad(format!(
                                "substitution must anticommute with negation at ({e}, {n})"
                            ));
                        }
                    }
                }
                (true, None) => return bad(format!("formula {e} has no negation")),
                (false, Some(_)) => return bad(format!("non-formula {e} has a negation")),
                (false, None) => {}
            }
        }
        for &p in &provable {
            if p >= base.e_size || !base.sentences[p] {
                return bad("provable sentences must be sentences".into());
            }
        }
        for &t in &truth {
            if t >= base.e_size || !base.sentences[t] {
                return bad("true sentences must be sentences".into());
            }
        }
        Ok(LogicalSystem { base, provable, truth, neg })
    }

    fn negated_provable(&self) -> BTreeSet<usize> {
        self.provable.iter().filter_map(|&p| self.neg[p]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub consistent: bool,
    pub complete: bool,
    pub sound: bool,
}

/// consistent: P ∩ P′ = ∅; complete: P ∪ P′ = S; sound: P ⊆ T.
pub fn logical_system_audit(l: &LogicalSystem) -> AuditReport {
    let p_neg = l.negated_provable();
    let consistent = l.provable.is_disjoint(&p_neg);
    let complete = l
        .base
        .sentence_indices()
        .iter()
        .all(|s| l.provable.contains(s) || p_neg.contains(s));
    let sound = l.provable.is_subset(&l.truth);
    AuditReport { consistent, complete, sound }
}

// --- the toy quoting language ---------------------------------------------------

pub const HOLE: &str = "\u{27e8}hole\u{27e9}"; // ⟨hole⟩
const QUOTE_L: char = '\u{27e6}'; // ⟦
const QUOTE_R: char = '\u{27e7}'; // ⟧

/// ⟦s⟧ — naming is quotation.
pub fn quote(s: &str) -> String {
    format!("{QUOTE_L}{s}{QUOTE_R}")
}

/// Splices `filler` into the unique hole of `template`.
pub fn splice(template: &str, filler: &str) -> Result<String, FormalError> {
    match template.matches(HOLE).count() {
        1 => Ok(template.replacen(HOLE, filler, 1)),
        n => Err(FormalError::MalformedTemplate(format!("expected exactly one hole, found {n}"))),
    }
}

/// The self-application fixed point σ = template⟨⟦template⟧⟩: splicing the
/// template's own quotation into its hole. σ quotes the very template
/// whose splice reproduces σ, which is the quotation-based sentence that
/// speaks about itself.
pub fn quine_sentence(template: &str) -> Result<String, FormalError> {
    if template.contains(QUOTE_L) || template.contains(QUOTE_R) {
        return Err(FormalError::MalformedTemplate(
            "template must not contain quotation brackets".into(),
        ));
    }
    splice(template, &quote(template))
}

/// Verifies the fixed-point property by parsing: extract the quoted
/// template embedded in σ, re-apply the construction, and compare for
/// exact string equality.
pub fn quine_check(sigma: &str) -> Result<bool, FormalError> {
    let start = sigma
        .find(QUOTE_L)
        .ok_or_else(|| FormalError::MalformedTemplate("no quotation in sentence".into()))?;
    let end = sigma
        .rfind(QUOTE_R)
        .ok_or_else(|| FormalError::MalformedTemplate("unterminated quotation".into()))?;
    if end < start {
        return Err(FormalError::MalformedTemplate("mismatched quotation brackets".into()));
    }
    let inner = &sigma[start + QUOTE_L.len_utf8()..end];
    Ok(quine_sentence(inner)? == sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_2x2_identity_first() -> FiniteFunction2 {
        // g(s, t) = s
        FiniteFunction2::new(2, 2, vec![vec![0, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn diagonal_escapes_with_swap() {
        let g = g_2x2_identity_first();
        let out = diagonal_construct(&g, &[1, 0]).unwrap();
        // f(s) = swap(g(s,s)) = 1 − s
        assert_eq!(out.f, vec![1, 0]);
        match out.certificate {
            DiagonalCertificate::EscapesEveryColumn { ref differs_at } => {
                for &t in differs_at {
                    assert_ne!(out.f[t], g.at(t, t));
                }
                // and indeed no column equals f
                assert_eq!(g.represents(&out.f), None);
            }
            _ => panic!("swap has no fixed points"),
        }
    }

    #[test]
    fn identity_alpha_reports_fixed_points() {
        let g = g_2x2_identity_first();
        let out = diagonal_construct(&g, &[0, 1]).unwrap();
        match out.certificate {
            DiagonalCertificate::FixedPoints { fixed_points, .. } => {
                assert_eq!(fixed_points, vec![0, 1]);
            }
            _ => panic!("identity has every point fixed"),
        }
    }

    #[test]
    fn three_cycle_escapes_all_tables() {
        // α a 3-cycle on Y = {0,1,2}: any g is escaped by f
        let alpha = vec![1usize, 2, 0];
        let tables = [
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]],
            vec![vec![2, 1, 0], vec![0, 2, 1], vec![1, 0, 2]],
        ];
        for t in tables {
            let g = FiniteFunction2::new(3, 3, t).unwrap();
            let out = diagonal_construct(&g, &alpha).unwrap();
            assert_eq!(g.represents(&out.f), None);
        }
    }

    #[test]
    fn fixed_point_check_counting() {
        // |T| = 2, |Y| = 2: four functions, only two columns — some f is
        // always missing
        let g = g_2x2_identity_first();
        let rep = fixed_point_check(&g, 1000).unwrap();
        assert!(!rep.all_representable);
        assert!(rep.non_representable.is_some());

        // |Y| = 1: all functions representable and every alpha fixes 0
        let g1 = FiniteFunction2::new(2, 1, vec![vec![0, 0], vec![0, 0]]).unwrap();
        let rep = fixed_point_check(&g1, 1000).unwrap();
        assert!(rep.all_representable);
        assert_eq!(rep.every_alpha_has_fixed_point, Some(true));

        // budget exhaustion is reported, not silently sampled
        let g3 = FiniteFunction2::new(3, 3, vec![vec![0; 3]; 3]).unwrap();
        assert!(matches!(
            fixed_point_check(&g3, 1),
            Err(FormalError::ExhaustionBudgetExceeded { .. })
        ));
    }

    /// A 2-formula, 2-name system: subst tables chosen by the tests.
    fn tiny_system(subst: [[usize; 2]; 2]) -> FormalSystem {
        FormalSystem::new(
            2,
            vec![true, true],
            vec![true, true],
            2,
            vec![Some(0), Some(1)],
            vec![
                vec![Some(subst[0][0]), Some(subst[0][1])],
                vec![Some(subst[1][0]), Some(subst[1][1])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn representability_examples() {
        let sys = tiny_system([[0, 1], [1, 0]]);
        let a: BTreeSet<usize> = [0].into_iter().collect();
        // X = {n : φ0[n] ∈ A} = {0}; φ0 represents it
        let x: BTreeSet<usize> = [0].into_iter().collect();
        assert_eq!(sys.representable(&a, &x), Some(0));
        // A = ∅ with X nonempty: nothing lands in the empty set
        let empty = BTreeSet::new();
        let full: BTreeSet<usize> = [0, 1].into_iter().collect();
        assert_eq!(sys.representable(&empty, &full), None);
        // brute-force agreement on the 2×2 system: check both formulas
        for xa in [false, true] {
            for xb in [false, true] {
                let x: BTreeSet<usize> =
                    [(0, xa), (1, xb)].into_iter().filter(|(_, b)| *b).map(|(n, _)| n).collect();
                let got = sys.representable(&a, &x);
                let brute = (0..2).find(|&phi| {
                    (0..2).all(|n| {
                        let s = sys.substitute(phi, n).unwrap();
                        a.contains(&s) == x.contains(&n)
                    })
                });
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn liar_holds_on_small_systems() {
        let sys = tiny_system([[0, 1], [1, 0]]);
        for t_bits in 0..4u32 {
            let t: BTreeSet<usize> =
                (0..2).filter(|&s| t_bits & (1 << s) != 0).collect();
            let verdict = liar_check(&sys, &t);
            assert!(verdict.holds, "T = {t:?}");
        }
    }

    #[test]
    fn liar_with_partial_naming() {
        // names cover only formula 0; the anti-diagonal is a subset of g(F)
        let sys = FormalSystem::new(
            2,
            vec![true, false],
            vec![true, false],
            3,
            vec![Some(2), None],
            vec![vec![Some(0), Some(0), Some(0)], vec![None, None, None]],
        )
        .unwrap();
        let t: BTreeSet<usize> = BTreeSet::new();
        let anti = sys.anti_diagonal(&t);
        assert!(anti.iter().all(|n| sys.named_formula(*n).is_some()));
        assert_eq!(anti.len(), 1);
        assert!(liar_check(&sys, &t).holds);
    }

    /// Three formulas named by themselves, with subst(0, ·) = [0, 1, 2]
    /// and constant rows for the other two. With A = {0} and B = {1, 2},
    /// the complement of A's names is represented by formula 0, the needed
    /// self-reference set is {1, 2} and is represented by formula 0 too,
    /// so π = 0 and λ = 0[g(0)] = 0 with λ ∈ A and λ ∉ B.
    fn liar_ready_system() -> FormalSystem {
        FormalSystem::new(
            3,
            vec![true; 3],
            vec![true; 3],
            3,
            vec![Some(0), Some(1), Some(2)],
            vec![
                vec![Some(0), Some(1), Some(2)],
                vec![Some(1), Some(1), Some(1)],
                vec![Some(2), Some(2), Some(2)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn generalized_liar_produces_lambda() {
        let sys = liar_ready_system();
        let a: BTreeSet<usize> = [0].into_iter().collect();
        let b: BTreeSet<usize> = [1, 2].into_iter().collect();
        let out = generalized_liar(&sys, &a, &b, None).unwrap();
        assert_eq!(out.pi, 0);
        assert_eq!(out.lambda, 0);
        assert!(sys.sentences[out.lambda]);
        assert_eq!(out.lambda_in_b, !out.lambda_in_a);
        // a correct hint is accepted, a wrong one refused
        assert!(generalized_liar(&sys, &a, &b, Some(0)).is_ok());
        assert!(matches!(
            generalized_liar(&sys, &a, &b, Some(1)),
            Err(FormalError::HypothesisFailure(_))
        ));
    }

    #[test]
    fn generalized_liar_hypothesis_gate() {
        let sys = tiny_system([[0, 0], [0, 0]]);
        // B = ∅ can represent only the empty set; with A = ∅ the needed
        // set is all names, so self-referentiality fails
        let a = BTreeSet::new();
        let b = BTreeSet::new();
        let err = generalized_liar(&sys, &a, &b, None).unwrap_err();
        assert!(matches!(err, FormalError::HypothesisFailure(_)));
        // a wrong hint is rejected
        let a2: BTreeSet<usize> = [0].into_iter().collect();
        let b2: BTreeSet<usize> = [0, 1].into_iter().collect();
        let full_b_needed = generalized_liar(&sys, &a2, &b2, Some(1));
        if let Err(e) = full_b_needed {
            assert!(matches!(e, FormalError::HypothesisFailure(_)));
        }
    }

    /// A 2-sentence logical system with negation swapping them.
    fn tiny_logical(provable: &[usize]) -> LogicalSystem {
        let base = tiny_system([[0, 0], [1, 1]]);
        LogicalSystem::new(
            base,
            provable.iter().copied().collect(),
            [0].into_iter().collect(), // truth = {0}
            vec![Some(1), Some(0)],
        )
        .unwrap()
    }

    #[test]
    fn audit_examples() {
        // P = ∅: consistent and sound, never complete (S nonempty)
        let l = tiny_logical(&[]);
        let a = logical_system_audit(&l);
        assert!(a.consistent && a.sound && !a.complete);

        // P = T = {0}: sound and consistent, complete (0 ∪ neg(0) covers S)
        let l = tiny_logical(&[0]);
        let a = logical_system_audit(&l);
        assert!(a.consistent && a.sound && a.complete);

        // P = {1}: consistent, complete, but unsound (1 ∉ T)
        let l = tiny_logical(&[1]);
        let a = logical_system_audit(&l);
        assert!(a.consistent && !a.sound && a.complete);

        // P = S: complete but inconsistent
        let l = tiny_logical(&[0, 1]);
        let a = logical_system_audit(&l);
        assert!(!a.consistent && a.complete);
    }

    #[test]
    fn audit_agrees_with_brute_force() {
        for bits in 0..4u32 {
            let p: Vec<usize> = (0..2).filter(|&s| bits & (1 << s) != 0).collect();
            let l = tiny_logical(&p);
            let a = logical_system_audit(&l);
            let pn: BTreeSet<usize> = p.iter().map(|&s| 1 - s).collect();
            let pset: BTreeSet<usize> = p.iter().copied().collect();
            assert_eq!(a.consistent, pset.is_disjoint(&pn));
            assert_eq!(a.complete, pset.union(&pn).count() == 2);
            assert_eq!(a.sound, pset.is_subset(&[0].into_iter().collect()));
        }
    }

    #[test]
    fn logical_system_validation() {
        let base = tiny_system([[0, 0], [1, 1]]);
        // negation must flip truth on sentences
        let bad = LogicalSystem::new(
            base,
            BTreeSet::new(),
            [0, 1].into_iter().collect(),
            vec![Some(1), Some(0)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn quine_fixed_points() {
        let t = format!("yields falsehood when appended to its own quotation: {HOLE}");
        let sigma = quine_sentence(&t).unwrap();
        assert!(sigma.contains("⟦"));
        assert!(quine_check(&sigma).unwrap());

        // pure self-application
        let sigma = quine_sentence(HOLE).unwrap();
        assert_eq!(sigma, quote(HOLE));
        assert!(quine_check(&sigma).unwrap());

        // two holes are malformed
        let bad = format!("{HOLE} and {HOLE}");
        assert!(matches!(quine_sentence(&bad), Err(FormalError::MalformedTemplate(_))));
        // so is a quotation bracket inside the template
        assert!(quine_sentence("⟦x⟧").is_err());
        // tampering with σ breaks the check
        let t = format!("says: {HOLE}");
        let mut sigma = quine_sentence(&t).unwrap();
        sigma.push('!');
        assert!(!quine_check(&sigma).unwrap());
    }
}
