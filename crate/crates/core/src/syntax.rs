//! Text forms: a recursive-descent parser for polynomial expressions and
//! positive-existential formulas, and the compiler from formulas to
//! Diophantine sets.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := '-'? term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('^' nat)?
//! atom    := nat | 'x' nat | 'sqrtd' | 'i' | '(' expr ')'
//! formula := conjunct (('and' | 'or') conjunct)*
//! conjunct := ('exists' | 'forall') var '(' formula ')' | 'not' conjunct
//!           | expr '=' expr
//! ```
//!
//! `or`, `not` and `forall` parse but are rejected by the compiler: the
//! positive-existential fragment is all that Diophantine sets support, since
//! they are not closed under complement.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};

use crate::dioset::{DiophantineSet, DiosetError, IndexSet};
use crate::poly::{PolyError, Polynomial};
use crate::rings::{Ring, RingError};
use crate::search::{SearchDomain, SearchSpace};

// --- errors -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxErrorKind {
    /// Malformed input at the token level or against the grammar.
    Parse(String),
    /// An identifier that is neither a keyword nor `x<digits>`.
    UnknownVariable(String),
    /// `sqrtd` or `i` used in a ring that has no such element.
    RingLiteral(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub kind: SyntaxErrorKind,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match &self.kind {
            SyntaxErrorKind::Parse(m) => m.clone(),
            SyntaxErrorKind::UnknownVariable(v) => format!("unknown variable or keyword `{v}`"),
            SyntaxErrorKind::RingLiteral(m) => m.clone(),
        };
        write!(f, "line {}, col {}: {}", self.line, self.col, msg)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error(
        "unsupported connective `{0}`: Diophantine sets are closed under ∧ and ∃ but not under \
         complement, so ¬, ∨ and ∀ have no compilation"
    )]
    UnsupportedConnective(String),
    #[error("formula has no free variables, so it defines no parameterized set")]
    ClosedFormula,
    #[error(transparent)]
    Dioset(#[from] DiosetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

// --- tokens -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Nat(BigUint),
    Var(usize),
    SqrtD,
    ImagUnit,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    KwExists,
    KwForall,
    KwAnd,
    KwOr,
    KwNot,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '+' => {
                bump(&mut chars);
                Tok::Plus
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '^' => {
                bump(&mut chars);
                Tok::Caret
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '=' => {
                bump(&mut chars);
                Tok::Eq
            }
            d if d.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Nat(s.parse().expect("digits"))
            }
            a if a.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                match s.as_str() {
                    "sqrtd" => Tok::SqrtD,
                    "i" => Tok::ImagUnit,
                    "exists" => Tok::KwExists,
                    "forall" => Tok::KwForall,
                    "and" => Tok::KwAnd,
                    "or" => Tok::KwOr,
                    "not" => Tok::KwNot,
                    _ => {
                        if let Some(num) = s.strip_prefix('x') {
                            if !num.is_empty() && num.bytes().all(|b| b.is_ascii_digit()) {
                                let idx: usize = num.parse().map_err(|_| SyntaxError {
                                    line: tl,
                                    col: tc,
                                    kind: SyntaxErrorKind::Parse(format!("variable index too large in `{s}`")),
                                })?;
                                out.push(Spanned { tok: Tok::Var(idx), line: tl, col: tc });
                                continue;
                            }
                        }
                        return Err(SyntaxError {
                            line: tl,
                            col: tc,
                            kind: SyntaxErrorKind::UnknownVariable(s),
                        });
                    }
                }
            }
            other => {
                return Err(SyntaxError {
                    line: tl,
                    col: tc,
                    kind: SyntaxErrorKind::Parse(format!("unexpected character `{other}`")),
                })
            }
        };
        out.push(Spanned { tok, line: tl, col: tc });
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

// --- ASTs -------------------------------------------------------------------

/// Raw arithmetic expression, before a ring is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Nat(BigUint),
    Var(usize),
    SqrtD,
    ImagUnit,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Formula AST. Only `Eq`, `And` and `Exists` compile; the others are kept
/// so the compiler can refuse them with a useful message.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Eq(Expr, Expr),
    And(Box<Formula>, Box<Formula>),
    Exists(usize, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Forall(usize, Box<Formula>),
}

impl Expr {
    fn vars_into(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.vars_into(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        self.vars_into(&mut s);
        s
    }
}

impl Formula {
    /// Free variables (binders remove their variable).
    pub fn free_vars(&self) -> BTreeSet<usize> {
        match self {
            Formula::Eq(a, b) => {
                let mut s = a.vars();
                s.extend(b.vars());
                s
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Formula::Not(f) => f.free_vars(),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut s = f.free_vars();
                s.remove(v);
                s
            }
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Formula::Eq(a, b) => a.vars().into_iter().chain(b.vars()).max(),
            Formula::And(a, b) | Formula::Or(a, b) => a.max_var().max(b.max_var()),
            Formula::Not(f) => f.max_var(),
            Formula::Exists(v, f) | Formula::Forall(v, f) => f.max_var().max(Some(*v)),
        }
    }

    fn rename_var(&self, from: usize, to: usize) -> Formula {
        fn in_expr(e: &Expr, from: usize, to: usize) -> Expr {
            match e {
                Expr::Var(v) if *v == from => Expr::Var(to),
                Expr::Neg(x) => Expr::Neg(Box::new(in_expr(x, from, to))),
                Expr::Pow(x, k) => Expr::Pow(Box::new(in_expr(x, from, to)), *k),
                Expr::Add(a, b) => Expr::Add(Box::new(in_expr(a, from, to)), Box::new(in_expr(b, from, to))),
                Expr::Sub(a, b) => Expr::Sub(Box::new(in_expr(a, from, to)), Box::new(in_expr(b, from, to))),
                Expr::Mul(a, b) => Expr::Mul(Box::new(in_expr(a, from, to)), Box::new(in_expr(b, from, to))),
                other => other.clone(),
            }
        }
        match self {
            Formula::Eq(a, b) => Formula::Eq(in_expr(a, from, to), in_expr(b, from, to)),
            Formula::And(a, b) => Formula::And(
                Box::new(a.rename_var(from, to)),
                Box::new(b.rename_var(from, to)),
            ),
            Formula::Or(a, b) => Formula::Or(
                Box::new(a.rename_var(from, to)),
                Box::new(b.rename_var(from, to)),
            ),
            Formula::Not(f) => Formula::Not(Box::new(f.rename_var(from, to))),
            Formula::Exists(v, f) if *v == from => Formula::Exists(*v, f.clone()),
            Formula::Forall(v, f) if *v == from => Formula::Forall(*v, f.clone()),
            Formula::Exists(v, f) => Formula::Exists(*v, Box::new(f.rename_var(from, to))),
            Formula::Forall(v, f) => Formula::Forall(*v, Box::new(f.rename_var(from, to))),
        }
    }

    /// Gives every binder a fresh variable index, so free and bound variable
    /// sets are disjoint and binders never shadow each other.
    fn alpha_rename(self, next: &mut usize) -> Formula {
        match self {
            Formula::Exists(v, f) => {
                let fresh = *next;
                *next += 1;
                let renamed = f.rename_var(v, fresh).alpha_rename(next);
                Formula::Exists(fresh, Box::new(renamed))
            }
            Formula::Forall(v, f) => {
                let fresh = *next;
                *next += 1;
                let renamed = f.rename_var(v, fresh).alpha_rename(next);
                Formula::Forall(fresh, Box::new(renamed))
            }
            Formula::And(a, b) => {
                Formula::And(Box::new(a.alpha_rename(next)), Box::new(b.alpha_rename(next)))
            }
            Formula::Or(a, b) => {
                Formula::Or(Box::new(a.alpha_rename(next)), Box::new(b.alpha_rename(next)))
            }
            Formula::Not(f) => Formula::Not(Box::new(f.alpha_rename(next))),
            atom => atom,
        }
    }
}

// --- parser -----------------------------------------------------------------

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let t = self.peek();
        SyntaxError { line: t.line, col: t.col, kind: SyntaxErrorKind::Parse(msg.into()) }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = if self.peek().tok == Tok::Minus {
            self.next();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.next();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.next();
            match self.next().tok {
                Tok::Nat(n) => {
                    let e: u32 = n.to_string().parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(self.err("expected a natural-number exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().tok.clone() {
            Tok::Nat(n) => {
                self.next();
                Ok(Expr::Nat(n))
            }
            Tok::Var(v) => {
                self.next();
                Ok(Expr::Var(v))
            }
            Tok::SqrtD => {
                self.next();
                Ok(Expr::SqrtD)
            }
            Tok::ImagUnit => {
                self.next();
                Ok(Expr::ImagUnit)
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable, `sqrtd`, `i` or `(`")),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.conjunct()?;
        loop {
            match self.peek().tok {
                Tok::KwAnd => {
                    self.next();
                    acc = Formula::And(Box::new(acc), Box::new(self.conjunct()?));
                }
                Tok::KwOr => {
                    self.next();
                    acc = Formula::Or(Box::new(acc), Box::new(self.conjunct()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn conjunct(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().tok {
            Tok::KwExists | Tok::KwForall => {
                let universal = self.peek().tok == Tok::KwForall;
                self.next();
                let v = match self.next().tok {
                    Tok::Var(v) => v,
                    _ => return Err(self.err("expected a variable after the quantifier")),
                };
                self.expect(Tok::LParen, "`(` after the quantified variable")?;
                let body = self.formula()?;
                self.expect(Tok::RParen, "`)` closing the quantifier body")?;
                Ok(if universal {
                    Formula::Forall(v, Box::new(body))
                } else {
                    Formula::Exists(v, Box::new(body))
                })
            }
            Tok::KwNot => {
                self.next();
                Ok(Formula::Not(Box::new(self.conjunct()?)))
            }
            _ => {
                let lhs = self.expr()?;
                self.expect(Tok::Eq, "`=` between the two sides of an equation")?;
                let rhs = self.expr()?;
                Ok(Formula::Eq(lhs, rhs))
            }
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        if self.peek().tok == Tok::End {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

/// Parses an expression into a raw AST.
pub fn parse_expression(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a formula; binders are alpha-renamed to fresh indices so free and
/// bound variables never collide.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    p.finish()?;
    let mut next = f.max_var().map_or(0, |m| m + 1);
    Ok(f.alpha_rename(&mut next))
}

// --- expression → polynomial -------------------------------------------------

fn expr_to_poly(
    e: &Expr,
    ring: Ring,
    arity: usize,
    var_slot: &dyn Fn(usize) -> usize,
) -> Result<Polynomial, SyntaxError> {
    let ring_lit = |what: &str| SyntaxError {
        line: 1,
        col: 1,
        kind: SyntaxErrorKind::RingLiteral(format!("`{what}` is not an element of {ring}")),
    };
    Ok(match e {
        Expr::Nat(n) => Polynomial::int_constant(ring, arity, BigInt::from(n.clone())),
        Expr::Var(v) => Polynomial::var(ring, arity, var_slot(*v)).expect("slot in range"),
        Expr::SqrtD => match ring {
            Ring::Quad(_) => {
                Polynomial::constant(ring, arity, ring.omega().expect("quad unit")).expect("const")
            }
            _ => return Err(ring_lit("sqrtd")),
        },
        Expr::ImagUnit => match ring {
            Ring::Gauss => {
                Polynomial::constant(ring, arity, ring.omega().expect("gauss unit")).expect("const")
            }
            _ => return Err(ring_lit("i")),
        },
        Expr::Neg(x) => expr_to_poly(x, ring, arity, var_slot)?.neg(),
        Expr::Add(a, b) => expr_to_poly(a, ring, arity, var_slot)?
            .add(&expr_to_poly(b, ring, arity, var_slot)?)
            .expect("same ring and arity"),
        Expr::Sub(a, b) => expr_to_poly(a, ring, arity, var_slot)?
            .sub(&expr_to_poly(b, ring, arity, var_slot)?)
            .expect("same ring and arity"),
        Expr::Mul(a, b) => expr_to_poly(a, ring, arity, var_slot)?
            .mul(&expr_to_poly(b, ring, arity, var_slot)?)
            .expect("same ring and arity"),
        Expr::Pow(x, k) => expr_to_poly(x, ring, arity, var_slot)?.pow(*k).expect("same ring"),
    })
}

/// Parses a polynomial over the given ring. The arity is `max index + 1`
/// over the variables mentioned, so `x0^2 - 2*x1^2 - 1` has arity 2.
pub fn parse_polynomial(text: &str, ring: Ring) -> Result<Polynomial, SyntaxError> {
    let e = parse_expression(text)?;
    let arity = e.vars().into_iter().max().map_or(0, |m| m + 1);
    expr_to_poly(&e, ring, arity, &|v| v)
}

// --- formula → set ----------------------------------------------------------

/// A compiled formula: the set plus the source indices of its parameters
/// (the formula's free variables, ascending).
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    pub set: DiophantineSet,
    pub free_vars: Vec<usize>,
}

/// Compiles a positive-existential formula to a Diophantine set by
/// structural induction: equations become defining polynomials, ∧ goes
/// through the conjunction combiner, ∃ through projection.
pub fn compile_formula(
    f: &Formula,
    ring: Ring,
    space: SearchSpace,
) -> Result<CompiledFormula, CompileError> {
    let compiled = compile_rec(f, ring, space)?;
    match compiled {
        Some(c) => Ok(c),
        None => Err(CompileError::ClosedFormula),
    }
}

fn lift(
    c: &CompiledFormula,
    target_vars: &[usize],
    ring: Ring,
    space: SearchSpace,
) -> Result<DiophantineSet, CompileError> {
    let r = target_vars.len();
    let m = c.set.aux();
    let mut map = Vec::with_capacity(c.set.params() + m);
    for v in &c.free_vars {
        let slot = target_vars.iter().position(|t| t == v).expect("free var in union");
        map.push(slot);
    }
    for j in 0..m {
        map.push(r + j);
    }
    let q = c.set.q().remap_variables(&map, r + m)?;
    Ok(DiophantineSet::new(ring, space, r, m, q)?)
}

fn compile_rec(
    f: &Formula,
    ring: Ring,
    space: SearchSpace,
) -> Result<Option<CompiledFormula>, CompileError> {
    match f {
        Formula::Eq(lhs, rhs) => {
            let mut vars: BTreeSet<usize> = lhs.vars();
            vars.extend(rhs.vars());
            let free: Vec<usize> = vars.into_iter().collect();
            if free.is_empty() {
                return Ok(None);
            }
            let slot_of = |v: usize| free.binary_search(&v).expect("var is free");
            let arity = free.len();
            let l = expr_to_poly(lhs, ring, arity, &slot_of).map_err(syntax_to_compile)?;
            let r = expr_to_poly(rhs, ring, arity, &slot_of).map_err(syntax_to_compile)?;
            let q = l.sub(&r)?;
            let set = DiophantineSet::new(ring, space, arity, 0, q)?;
            Ok(Some(CompiledFormula { set, free_vars: free }))
        }
        Formula::And(a, b) => {
            let ca = compile_rec(a, ring, space)?;
            let cb = compile_rec(b, ring, space)?;
            match (ca, cb) {
                (Some(ca), Some(cb)) => {
                    let mut union: BTreeSet<usize> = ca.free_vars.iter().copied().collect();
                    union.extend(cb.free_vars.iter().copied());
                    let union: Vec<usize> = union.into_iter().collect();
                    let la = lift(&ca, &union, ring, space)?;
                    let lb = lift(&cb, &union, ring, space)?;
                    Ok(Some(CompiledFormula { set: la.intersect(&lb)?, free_vars: union }))
                }
                // a variable-free side contributes nothing the oracle can
                // parameterize; conjunction with it is not representable here
                _ => Err(CompileError::ClosedFormula),
            }
        }
        Formula::Exists(v, body) => {
            let Some(c) = compile_rec(body, ring, space)? else {
                return Ok(None);
            };
            let Some(pos) = c.free_vars.iter().position(|fv| fv == v) else {
                // the bound variable does not occur: ∃v φ ≡ φ
                return Ok(Some(c));
            };
            if c.free_vars.len() == 1 {
                return Ok(None);
            }
            let keep: Vec<usize> =
                (1..=c.free_vars.len()).filter(|k| *k != pos + 1).collect();
            let set = c.set.project(&IndexSet::new(c.free_vars.len(), keep)?)?;
            let mut free = c.free_vars;
            free.remove(pos);
            Ok(Some(CompiledFormula { set, free_vars: free }))
        }
        Formula::Or(_, _) => Err(CompileError::UnsupportedConnective("or".into())),
        Formula::Not(_) => Err(CompileError::UnsupportedConnective("not".into())),
        Formula::Forall(_, _) => Err(CompileError::UnsupportedConnective("forall".into())),
    }
}

fn syntax_to_compile(e: SyntaxError) -> CompileError {
    CompileError::UnsupportedConnective(e.to_string())
}

/// Direct bounded evaluation of a formula at an assignment of its free
/// variables: quantifiers search the same value box the oracle uses. The
/// compiler soundness tests compare this against compiled-set membership.
pub fn bounded_truth(
    f: &Formula,
    asg: &std::collections::BTreeMap<usize, crate::rings::RingElement>,
    dom: &SearchDomain,
) -> Result<bool, CompileError> {
    match f {
        Formula::Eq(l, r) => {
            let mut vars: Vec<usize> = l.vars().into_iter().chain(r.vars()).collect();
            vars.sort_unstable();
            vars.dedup();
            let arity = vars.len();
            let slot_of = |v: usize| vars.binary_search(&v).expect("var present");
            let lp = expr_to_poly(l, dom.ring(), arity, &slot_of).map_err(syntax_to_compile)?;
            let rp = expr_to_poly(r, dom.ring(), arity, &slot_of).map_err(syntax_to_compile)?;
            let point: Vec<_> = vars
                .iter()
                .map(|v| asg.get(v).cloned().unwrap_or_else(|| dom.ring().zero()))
                .collect();
            Ok(lp.eval(&point)? == rp.eval(&point)?)
        }
        Formula::And(a, b) => Ok(bounded_truth(a, asg, dom)? && bounded_truth(b, asg, dom)?),
        Formula::Exists(v, body) => {
            for val in dom.values() {
                let mut inner = asg.clone();
                inner.insert(*v, val);
                if bounded_truth(body, &inner, dom)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Or(_, _) => Err(CompileError::UnsupportedConnective("or".into())),
        Formula::Not(_) => Err(CompileError::UnsupportedConnective("not".into())),
        Formula::Forall(_, _) => Err(CompileError::UnsupportedConnective("forall".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::TriState;
    use std::collections::BTreeMap;

    fn zz() -> Ring {
        Ring::Int
    }

    #[test]
    fn parse_simple_polynomials() {
        let p = parse_polynomial("x0^2 - 2*x1^2 - 1", zz()).unwrap();
        assert_eq!(p.arity(), 2);
        assert_eq!(p.terms().len(), 3);
        assert_eq!(p.to_string(), "x0^2 - 2*x1^2 - 1");

        // manual expansion oracle: (x0 + x1)² = x0² + 2x0x1 + x1²
        let q = parse_polynomial("(x0 + x1)^2", zz()).unwrap();
        let expected = parse_polynomial("x0^2 + 2*x0*x1 + x1^2", zz()).unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_polynomial("x0 -", zz()).unwrap_err();
        assert!(matches!(e.kind, SyntaxErrorKind::Parse(_)));
        assert_eq!((e.line, e.col), (1, 5));

        let e = parse_polynomial("x0 + y", zz()).unwrap_err();
        assert!(matches!(e.kind, SyntaxErrorKind::UnknownVariable(ref v) if v == "y"));

        let e = parse_polynomial("sqrtd * x0", zz()).unwrap_err();
        assert!(matches!(e.kind, SyntaxErrorKind::RingLiteral(_)));
        let e = parse_polynomial("i * x0", Ring::quad(2).unwrap()).unwrap_err();
        assert!(matches!(e.kind, SyntaxErrorKind::RingLiteral(_)));
        assert!(parse_polynomial("i*x0", Ring::Gauss).is_ok());
        assert!(parse_polynomial("sqrtd*x0", Ring::quad(2).unwrap()).is_ok());
    }

    #[test]
    fn ring_literals_evaluate() {
        let r = Ring::quad(2).unwrap();
        let p = parse_polynomial("(3 + 2*sqrtd)*x0 - 1", r).unwrap();
        let v = p.eval(&[r.one()]).unwrap();
        assert_eq!(v, r.element(2, 2).unwrap());
    }

    #[test]
    fn print_parse_round_trip_corpus() {
        // a deterministic corpus of > 50 expressions in printed normal form
        let mut corpus: Vec<String> = vec![
            "0".into(),
            "5".into(),
            "- 7".into(),
            "x0".into(),
            "x3^4 - x0*x1 + 9".into(),
        ];
        for a in 1..5i64 {
            for b in [1i64, 3, 5] {
                for e in 1..4u32 {
                    corpus.push(format!("{a}*x0^{e} + {b}*x1 - {}", a * b));
                    corpus.push(format!("- {a}*x0^{e} - {b}*x1 + {}", a + b));
                }
            }
        }
        assert!(corpus.len() > 50);
        for text in &corpus {
            let p = parse_polynomial(text, zz()).unwrap();
            let reparsed = parse_polynomial(&p.to_string(), zz()).unwrap();
            assert_eq!(reparsed, p, "round trip failed for {text}");
        }
        // gaussian coefficients round-trip through the parenthesized form
        let g = Ring::Gauss;
        for text in ["(1 + 2*i)*x0 - i", "3*i*x1^2 + (4 - i)", "- i*x0 + 2"] {
            let p = parse_polynomial(text, g).unwrap();
            let reparsed = parse_polynomial(&p.to_string(), g).unwrap();
            assert_eq!(reparsed, p);
        }
    }

    #[test]
    fn compile_even_numbers() {
        let f = parse_formula("exists x1 (x0 = 2*x1)").unwrap();
        let c = compile_formula(&f, zz(), SearchSpace::Naturals).unwrap();
        assert_eq!(c.free_vars, vec![0]);
        let members: Vec<i64> = (0..=10)
            .filter(|&n| c.set.membership(&[zz().int(n)], 10).unwrap().is_member())
            .collect();
        assert_eq!(members, vec![0, 2, 4, 6, 8, 10]);
    }

    #[test]
    fn compile_tautology_and_contradiction() {
        let f = parse_formula("x0 = x0").unwrap();
        let c = compile_formula(&f, zz(), SearchSpace::Naturals).unwrap();
        assert!(c.set.q().is_zero(), "x0 = x0 compiles to the zero polynomial");
        for n in 0..=10 {
            assert!(c.set.membership(&[zz().int(n)], 0).unwrap().is_member());
        }

        let f = parse_formula("x0 = 1 and x0 = 2").unwrap();
        let c = compile_formula(&f, zz(), SearchSpace::Naturals).unwrap();
        for n in 0..=100 {
            assert!(!c.set.membership(&[zz().int(n)], 1).unwrap().is_member());
        }
    }

    #[test]
    fn compiler_rejects_non_positive_connectives() {
        for text in ["not x0 = 1", "x0 = 1 or x0 = 2", "forall x1 (x0 = x1)"] {
            let f = parse_formula(text).unwrap();
            let err = compile_formula(&f, zz(), SearchSpace::Naturals).unwrap_err();
            assert!(
                matches!(err, CompileError::UnsupportedConnective(_)),
                "{text} should be refused, got {err:?}"
            );
            assert!(err.to_string().contains("complement"));
        }
        let closed = parse_formula("exists x0 (x0 = 1)").unwrap();
        assert!(matches!(
            compile_formula(&closed, zz(), SearchSpace::Naturals),
            Err(CompileError::ClosedFormula)
        ));
    }

    #[test]
    fn alpha_renaming_keeps_free_and_bound_apart() {
        // the binder reuses x0, which also occurs free
        let f = parse_formula("x0 = 1 and exists x0 (x1 = 2*x0)").unwrap();
        let c = compile_formula(&f, zz(), SearchSpace::Naturals).unwrap();
        assert_eq!(c.free_vars, vec![0, 1]);
        assert!(c.set.membership(&[zz().int(1), zz().int(4)], 5).unwrap().is_member());
        assert!(!c.set.membership(&[zz().int(1), zz().int(3)], 5).unwrap().is_member());
        assert!(!c.set.membership(&[zz().int(2), zz().int(4)], 5).unwrap().is_member());
    }

    #[test]
    fn compiler_agrees_with_direct_evaluation() {
        let fixtures = [
            "exists x1 (x0 = 2*x1)",
            "exists x2 (x0 = x2 + x2 and x1 = x2 + 1)",
            "x0 = x1 and exists x2 (x1 = 2*x2)",
            "exists x1 (exists x2 (x0 = 2*x1 + 3*x2))",
        ];
        let bound = 8u32;
        for text in fixtures {
            let f = parse_formula(text).unwrap();
            let c = compile_formula(&f, zz(), SearchSpace::Naturals).unwrap();
            let dom = SearchDomain::naturals(bound);
            let r = c.free_vars.len();
            let points = cartesian(bound as i64, r);
            for pt in points {
                let asg: BTreeMap<usize, _> = c
                    .free_vars
                    .iter()
                    .zip(pt.iter())
                    .map(|(v, n)| (*v, zz().int(*n)))
                    .collect();
                let direct = bounded_truth(&f, &asg, &dom).unwrap();
                let pt_elems: Vec<_> = pt.iter().map(|n| zz().int(*n)).collect();
                let oracle = c.set.membership(&pt_elems, bound).unwrap();
                match oracle {
                    TriState::Member(_) => assert!(direct, "{text} at {pt:?}"),
                    TriState::NonMemberResolved => assert!(!direct, "{text} at {pt:?}"),
                    TriState::Unknown(_) => {
                        assert!(!direct, "{text} at {pt:?}: direct truth must be oracle-visible")
                    }
                }
            }
        }
    }

    fn cartesian(bound: i64, dims: usize) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..dims {
            let mut next = Vec::new();
            for p in &out {
                for v in 0..=bound {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
}
