//! Command-line front end: number theory queries, the polynomial
//! enumeration and diagonal report, formula compilation, bounded set
//! search, the quadratic and Gaussian reductions, finite formal-system
//! demonstrations, and a cross-module self-check.
//!
//! Exit codes: 0 success, 1 domain/validation error, 2 parse error,
//! 3 internal inconsistency (a verified construction failed — a bug).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use dioph_core::dioset::{self, DiophantineSet};
use dioph_core::enumeration::PolynomialEnumeration;
use dioph_core::formal::{
    diagonal_construct, liar_sweep, quine_check, quine_sentence, FiniteFunction2,
};
use dioph_core::numtheory::{
    alpha, alpha_mod, check_lemma5, four_squares, pell_fundamental, pell_sequence,
};
use dioph_core::reduction::{
    alpha_equation_solutions, gauss_verify, gauss_witness, in_alpha_families, reduce_equation_quad,
    ReductionError,
};
use dioph_core::rings::Ring;
use dioph_core::search::{enumerate_members, SearchDomain, SearchSpace};
use dioph_core::syntax::{compile_formula, parse_formula, parse_polynomial};

#[derive(Parser)]
#[command(name = "dioph", version, about = "Diophantine sets, Pell reductions and diagonal arguments, exactly")]
struct Cli {
    /// Output format for structured results
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Number-theoretic building blocks
    #[command(subcommand)]
    Nt(NtCmd),
    /// The universal polynomial enumeration and its diagonal
    #[command(subcommand, name = "enum")]
    Enumeration(EnumCmd),
    /// Compile positive-existential formulas into Diophantine sets
    #[command(subcommand)]
    Set(SetCmd),
    /// Bounded membership scan of a serialized set
    Search(SearchArgs),
    /// The quadratic-ring and Gaussian reductions
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Finite formal systems, diagonal tables and quines
    #[command(subcommand)]
    Formal(FormalCmd),
    /// Run the reduced cross-module invariant suite
    Selfcheck(SelfcheckArgs),
}

#[derive(Subcommand)]
enum NtCmd {
    /// The Pell pair (x_n(a), y_n(a))
    Pell {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        n: u64,
    },
    /// Check (y_nk)^2 = (y_n)^2 k^2 mod (y_n)^4
    Lemma5 {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// A four-square decomposition
    Foursquares { n: u64 },
    /// Minimal solution of a^2 - d b^2 = 1
    Pellfund { d: i64 },
    /// alpha(n), optionally modulo m
    Alpha {
        #[arg(long)]
        n: u64,
        #[arg(long = "mod")]
        modulus: Option<i64>,
    },
}

#[derive(Subcommand)]
enum EnumCmd {
    /// Print the n-th polynomial of the enumeration
    Poly { n: u64 },
    /// Print the universal set D_n
    Set { n: u64 },
    /// The diagonal membership table for n <= max
    Diag {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        budget: u32,
    },
}

#[derive(Args)]
struct FormulaArgs {
    /// File containing the formula text
    #[arg(long)]
    formula: PathBuf,
    /// Coefficient ring: Z, quad:D or gauss
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Search space for variables: N, Z or ring
    #[arg(long, default_value = "N")]
    domain: String,
}

#[derive(Subcommand)]
enum SetCmd {
    /// Compile a formula file to a set (JSON on stdout or --out)
    Compile {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile and enumerate bounded members
    Members {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, default_value_t = 10)]
        radius: u32,
        #[arg(long, default_value_t = 10)]
        witness_radius: u32,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Serialized DiophantineSet JSON
    #[arg(long)]
    set: PathBuf,
    /// Parameter box radius
    #[arg(long)]
    radius: u32,
    /// Witness box radius
    #[arg(long)]
    witness_radius: u32,
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Transfer an equation over N into one over Z[sqrt d]
    Quad {
        #[arg(long)]
        d: i64,
        /// Polynomial over Z whose variables range over N
        #[arg(long)]
        equation: PathBuf,
        /// Comma-separated N-solution; assembles and verifies a witness
        #[arg(long)]
        emit_witness: Option<String>,
        /// Box-scan the reduced polynomial at this radius (evidence only)
        #[arg(long)]
        scan_radius: Option<u32>,
    },
    /// The Gaussian witness for a rational integer a
    Gauss {
        #[arg(long)]
        a: i64,
    },
    /// Verify a Gaussian witness file against the seven equations
    GaussVerify { file: PathBuf },
    /// Solutions of x^2 - 4xy + y^2 = 1 in a Gaussian box
    AlphaSolutions {
        #[arg(long)]
        bound: u32,
    },
}

#[derive(Subcommand)]
enum FormalCmd {
    /// Exhaustive Liar check over systems of size <= size
    Liar {
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Diagonalize a finite table against an alpha
    Diag {
        /// FiniteFunction2 JSON
        #[arg(long)]
        file: PathBuf,
        /// swap | identity | cycle | comma-separated values
        #[arg(long)]
        alpha: String,
    },
    /// Build the self-applying sentence of a one-hole template
    Quine {
        #[arg(long)]
        template: PathBuf,
    },
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Seed for the sampled checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inject a deliberate fault to prove the harness catches it
    #[arg(long, value_enum)]
    inject_fault: Option<Fault>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    ConjoinProduct,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(msg: impl Into<String>) -> Failure {
        Failure { code: 1, message: msg.into() }
    }

    fn parse(msg: impl Into<String>) -> Failure {
        Failure { code: 2, message: msg.into() }
    }

    fn internal(msg: impl Into<String>) -> Failure {
        Failure { code: 3, message: msg.into() }
    }
}

macro_rules! impl_validation_failure {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Failure {
                Failure::validation(e.to_string())
            }
        }
    )*};
}

impl_validation_failure!(
    dioph_core::rings::RingError,
    dioph_core::poly::PolyError,
    dioph_core::dioset::DiosetError,
    dioph_core::search::SearchError,
    dioph_core::enumeration::EnumError,
    dioph_core::numtheory::NumTheoryError,
    dioph_core::formal::FormalError
);

impl From<dioph_core::syntax::SyntaxError> for Failure {
    fn from(e: dioph_core::syntax::SyntaxError) -> Failure {
        Failure::parse(e.to_string())
    }
}

impl From<dioph_core::syntax::CompileError> for Failure {
    fn from(e: dioph_core::syntax::CompileError) -> Failure {
        Failure::validation(e.to_string())
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Failure {
        match e {
            ReductionError::InternalInconsistency(_) => Failure::internal(e.to_string()),
            other => Failure::validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::validation(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::parse(format!("json: {e}"))
    }
}

fn parse_ring(s: &str) -> Result<Ring, Failure> {
    match s {
        "Z" | "z" => Ok(Ring::Int),
        "gauss" | "Zi" | "Z[i]" => Ok(Ring::Gauss),
        other => {
            if let Some(d) = other.strip_prefix("quad:") {
                let d: i64 = d.parse().map_err(|_| Failure::parse(format!("bad ring `{other}`")))?;
                Ok(Ring::quad(d)?)
            } else {
                Err(Failure::parse(format!("unknown ring `{other}`; use Z, quad:D or gauss")))
            }
        }
    }
}

fn parse_space(s: &str, ring: Ring) -> Result<SearchSpace, Failure> {
    let space = match s {
        "N" | "n" => SearchSpace::Naturals,
        "Z" | "z" => SearchSpace::Integers,
        "ring" => SearchSpace::RingBox,
        other => return Err(Failure::parse(format!("unknown domain `{other}`; use N, Z or ring"))),
    };
    SearchDomain::new(ring, space, 0)?;
    Ok(space)
}

fn emit<T: serde::Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) -> Result<(), Failure> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Table => println!("{}", table()),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Nt(cmd) => run_nt(cli.format, cmd),
        Command::Enumeration(cmd) => run_enum(cli.format, cmd),
        Command::Set(cmd) => run_set(cli.format, cmd),
        Command::Search(args) => run_search(cli.format, args),
        Command::Reduce(cmd) => run_reduce(cli.format, cmd),
        Command::Formal(cmd) => run_formal(cli.format, cmd),
        Command::Selfcheck(args) => run_selfcheck(args),
    }
}

fn run_nt(format: Format, cmd: NtCmd) -> Result<(), Failure> {
    match cmd {
        NtCmd::Pell { a, n } => {
            let p = pell_sequence(a, n)?;
            emit(format, &serde_json::json!({"a": a, "n": n, "x": p.x.to_string(), "y": p.y.to_string()}), || {
                format!("({}, {})", p.x, p.y)
            })
        }
        NtCmd::Lemma5 { a, n, k } => {
            let r = check_lemma5(a, n, k)?;
            emit(
                format,
                &serde_json::json!({
                    "holds": r.holds,
                    "modulus": r.modulus.to_string(),
                    "lhs_residue": r.lhs_residue.to_string(),
                    "rhs_residue": r.rhs_residue.to_string(),
                }),
                || {
                    format!(
                        "{} (mod {}): lhs {} rhs {}",
                        if r.holds { "holds" } else { "FAILS" },
                        r.modulus,
                        r.lhs_residue,
                        r.rhs_residue
                    )
                },
            )
        }
        NtCmd::Foursquares { n } => {
            let d = four_squares(&n.into());
            emit(format, &d.iter().map(|k| k.to_string()).collect::<Vec<_>>(), || {
                format!("{} = {}^2 + {}^2 + {}^2 + {}^2", n, d[0], d[1], d[2], d[3])
            })
        }
        NtCmd::Pellfund { d } => {
            let (a, b) = pell_fundamental(d)?;
            emit(format, &serde_json::json!({"a": a.to_string(), "b": b.to_string()}), || {
                format!("({a}, {b})")
            })
        }
        NtCmd::Alpha { n, modulus } => {
            let v = match modulus {
                None => alpha(n),
                Some(m) => alpha_mod(n, &BigInt::from(m))?,
            };
            emit(format, &v.to_string(), || v.to_string())
        }
    }
}

fn run_enum(format: Format, cmd: EnumCmd) -> Result<(), Failure> {
    let e = PolynomialEnumeration::new();
    match cmd {
        EnumCmd::Poly { n } => {
            let p = e.nth(n)?;
            emit(format, &*p, || p.to_string())
        }
        EnumCmd::Set { n } => {
            let s = e.universal_set(n)?;
            emit(format, &s, || {
                format!(
                    "D_{n}: one parameter, {} bound variables, defining polynomial {}",
                    s.aux(),
                    s.q()
                )
            })
        }
        EnumCmd::Diag { max, budget } => {
            let report = e.diagonal_report(max, budget)?;
            emit(format, &report, || {
                let mut out = String::from("  n  state      chi_Dn  chi_V\n");
                for row in &report.rows {
                    let state = match &row.state {
                        dioph_core::search::TriState::Member(_) => "member",
                        dioph_core::search::TriState::NonMemberResolved => "nonmember",
                        dioph_core::search::TriState::Unknown(_) => "unknown",
                    };
                    let chi = |v: Option<u8>| v.map_or("-".to_string(), |x| x.to_string());
                    let _ = writeln!(
                        out,
                        "{:>3}  {:<9}  {:>5}  {:>5}",
                        row.n,
                        state,
                        chi(row.chi_dn),
                        chi(row.chi_v)
                    );
                }
                out
            })
        }
    }
}

fn compile_from_args(args: &FormulaArgs) -> Result<(DiophantineSet, Vec<usize>), Failure> {
    let text = std::fs::read_to_string(&args.formula)?;
    let ring = parse_ring(&args.ring)?;
    let space = parse_space(&args.domain, ring)?;
    let formula = parse_formula(text.trim())?;
    let compiled = compile_formula(&formula, ring, space)?;
    Ok((compiled.set, compiled.free_vars))
}

fn run_set(format: Format, cmd: SetCmd) -> Result<(), Failure> {
    match cmd {
        SetCmd::Compile { formula, out } => {
            let (set, free) = compile_from_args(&formula)?;
            let json = serde_json::to_string_pretty(&set)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &json)?;
                    println!(
                        "wrote set with parameters {free:?} ({} aux) to {}",
                        set.aux(),
                        path.display()
                    );
                }
                None => emit(format, &set, || json.clone())?,
            }
            Ok(())
        }
        SetCmd::Members { formula, radius, witness_radius } => {
            let (set, _) = compile_from_args(&formula)?;
            let members = enumerate_members(&set, &set.domain(witness_radius), radius)?;
            emit_members(format, &members)
        }
    }
}

fn emit_members(
    format: Format,
    members: &[(Vec<dioph_core::rings::RingElement>, Vec<dioph_core::rings::RingElement>)],
) -> Result<(), Failure> {
    #[derive(serde::Serialize)]
    struct Row<'a> {
        point: &'a [dioph_core::rings::RingElement],
        witness: &'a [dioph_core::rings::RingElement],
    }
    let rows: Vec<Row> = members.iter().map(|(p, w)| Row { point: p, witness: w }).collect();
    emit(format, &rows, || {
        let mut out = String::new();
        for (p, w) in members {
            let ps: Vec<String> = p.iter().map(|e| e.to_string()).collect();
            let ws: Vec<String> = w.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "({})  witness ({})", ps.join(", "), ws.join(", "));
        }
        if members.is_empty() {
            out.push_str("no members resolved in the box\n");
        }
        out
    })
}

fn run_search(format: Format, args: SearchArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.set)?;
    let set: DiophantineSet = serde_json::from_str(&text)?;
    let members = enumerate_members(&set, &set.domain(args.witness_radius), args.radius)?;
    emit_members(format, &members)
}

fn run_reduce(format: Format, cmd: ReduceCmd) -> Result<(), Failure> {
    match cmd {
        ReduceCmd::Quad { d, equation, emit_witness, scan_radius } => {
            let text = std::fs::read_to_string(&equation)?;
            let p = parse_polynomial(text.trim(), Ring::Int)?;
            let red = reduce_equation_quad(&p, d)?;
            if let Some(sol) = emit_witness {
                let values: Result<Vec<u64>, _> =
                    sol.split(',').map(|s| s.trim().parse::<u64>()).collect();
                let values = values.map_err(|_| Failure::parse(format!("bad solution list `{sol}`")))?;
                let witness = red.assemble_witness(&values)?;
                emit(format, &witness, || {
                    format!(
                        "witness with {} values assembled and verified: reduced polynomial vanishes",
                        witness.len()
                    )
                })?;
                return Ok(());
            }
            if let Some(radius) = scan_radius {
                let report = red.scan_box(radius)?;
                emit(format, &report, || {
                    format!(
                        "radius {}: {} verified roots, {} unconfirmed source roots (evidence only, not a proof)",
                        report.radius,
                        report.verified_roots.len(),
                        report.unconfirmed_roots.len()
                    )
                })?;
                return Ok(());
            }
            emit(format, red.fold(), || {
                format!(
                    "reduced {} over Z[sqrt {}]: {} parameters, {} variables, {} constituent equations, d' = {}",
                    p,
                    d,
                    red.params(),
                    red.fold().arity(),
                    red.fold().leaves().len(),
                    red.fold().d_prime()
                )
            })
        }
        ReduceCmd::Gauss { a } => {
            let w = gauss_witness(a)?;
            emit(format, &w, || {
                let mut out = String::new();
                for (name, v) in w.fields() {
                    let _ = writeln!(out, "{name} = {v}");
                }
                out
            })
        }
        ReduceCmd::GaussVerify { file } => {
            let text = std::fs::read_to_string(&file)?;
            let w: dioph_core::reduction::GaussWitness = serde_json::from_str(&text)?;
            let report = gauss_verify(&w);
            emit(format, &report, || {
                let mut out = String::new();
                for eq in &report.equations {
                    let _ = writeln!(
                        out,
                        "{}  {}",
                        if eq.holds { "ok  " } else { "FAIL" },
                        eq.label
                    );
                }
                let _ = writeln!(out, "all hold: {}", report.all_hold);
                out
            })
        }
        ReduceCmd::AlphaSolutions { bound } => {
            if bound == 0 {
                return Err(Failure::validation("bound must be >= 1"));
            }
            let sols = alpha_equation_solutions(bound);
            #[derive(serde::Serialize)]
            struct Row {
                x: dioph_core::rings::RingElement,
                y: dioph_core::rings::RingElement,
                in_alpha_families: bool,
            }
            let rows: Vec<Row> = sols
                .into_iter()
                .map(|(x, y)| Row { in_alpha_families: in_alpha_families(&x, &y), x, y })
                .collect();
            emit(format, &rows, || {
                let mut out = String::new();
                for r in &rows {
                    let _ = writeln!(out, "({}, {})  alpha-family: {}", r.x, r.y, r.in_alpha_families);
                }
                out
            })
        }
    }
}

fn run_formal(format: Format, cmd: FormalCmd) -> Result<(), Failure> {
    match cmd {
        FormalCmd::Liar { size } => {
            if size == 0 || size > 3 {
                return Err(Failure::validation("size must be between 1 and 3"));
            }
            let report = liar_sweep(size, size);
            emit(format, &report, || {
                format!(
                    "{} systems, {} checks, {} counterexamples",
                    report.systems, report.checks, report.counterexamples
                )
            })?;
            if report.counterexamples > 0 {
                return Err(Failure::internal("the Liar sweep found a representable anti-diagonal"));
            }
            Ok(())
        }
        FormalCmd::Diag { file, alpha } => {
            let text = std::fs::read_to_string(&file)?;
            let g: FiniteFunction2 = serde_json::from_str(&text)?;
            let alpha = parse_alpha(&alpha, g.y_size)?;
            let out = diagonal_construct(&g, &alpha)?;
            emit(format, &out, || format!("{out:?}"))
        }
        FormalCmd::Quine { template } => {
            let text = std::fs::read_to_string(&template)?;
            let template = text.trim_end_matches('\n');
            let sigma = quine_sentence(template)?;
            let ok = quine_check(&sigma)?;
            emit(
                format,
                &serde_json::json!({"sentence": sigma, "fixed_point": ok}),
                || format!("{sigma}\nfixed point verified: {ok}"),
            )?;
            if !ok {
                return Err(Failure::internal("quine construction failed its own check"));
            }
            Ok(())
        }
    }
}

fn parse_alpha(spec: &str, y_size: usize) -> Result<Vec<usize>, Failure> {
    match spec {
        "swap" => {
            if y_size != 2 {
                return Err(Failure::validation("swap needs |Y| = 2"));
            }
            Ok(vec![1, 0])
        }
        "identity" => Ok((0..y_size).collect()),
        "cycle" => Ok((0..y_size).map(|y| (y + 1) % y_size).collect()),
        list => {
            let vals: Result<Vec<usize>, _> = list.split(',').map(|s| s.trim().parse()).collect();
            let vals = vals.map_err(|_| Failure::parse(format!("bad alpha `{list}`")))?;
            if vals.len() != y_size {
                return Err(Failure::validation(format!("alpha must list {y_size} values")));
            }
            Ok(vals)
        }
    }
}

fn run_selfcheck(args: SelfcheckArgs) -> Result<(), Failure> {
    if let Some(Fault::ConjoinProduct) = args.inject_fault {
        dioset::faults::set_conjoin_as_product(true);
        println!("fault injected: conjoin degraded to the plain product");
    }
    let checks = dioph_core::selfcheck::run(args.seed);
    let mut by_module: BTreeSet<&str> = BTreeSet::new();
    let mut failures = 0;
    for c in &checks {
        by_module.insert(c.module);
        println!(
            "[{}] {:<12} {:<28} {} cases{}",
            if c.passed { "ok " } else { "FAIL" },
            c.module,
            c.name,
            c.cases,
            if c.passed { String::new() } else { format!("  ({})", c.detail) }
        );
        if !c.passed {
            failures += 1;
        }
    }
    for m in by_module {
        let (done, total): (u64, usize) = checks
            .iter()
            .filter(|c| c.module == m)
            .fold((0, 0), |(d, t), c| (d + c.cases, t + 1));
        println!("module {m}: {total} checks, {done} cases");
    }
    if failures > 0 {
        return Err(Failure::internal(format!("{failures} self-checks failed")));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
