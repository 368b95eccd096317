//! `bmv`: generate, certify, verify and search sum-of-Hermitian-squares
//! certificates for S_{m,k}(X², Y²).
//!
//! Exit codes: 0 success, 1 negative result (verification or feasibility),
//! 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use bmv_sohs::certificate::{self, Certificate, Parity};
use bmv_sohs::cyclic::{class_decomposition, class_residuals, commutator_witness};
use bmv_sohs::gram::{
    self, BasisFilter, GramProblemFile, GramSolution, SolverOptions, Status,
};
use bmv_sohs::ncpoly::{s_poly, Polynomial};
use bmv_sohs::verifier;

#[derive(Parser)]
#[command(name = "bmv", version, about = "Hermitian-square certificates for S_{m,k}(X^2, Y^2)")]
struct Cli {
    /// Worker threads for parallel trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print S_{m,k}, optionally with X, Y replaced by X², Y².
    Gen {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        squared: bool,
        #[arg(long)]
        text: bool,
    },
    /// Build the certificate m·Σ f_k*f_k for S_{m,4}(X², Y²).
    Cert {
        #[arg(short)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Form::Default)]
        form: Form,
        #[arg(long)]
        text: bool,
    },
    /// Exact check of a built certificate (-m) or a certificate file.
    Verify(VerifyArgs),
    /// Compare brute-forced counts with the closed forms.
    Count {
        #[arg(short)]
        m: usize,
    },
    /// Seeded random-matrix trace check of S_{m,k}.
    Eval {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        k: usize,
        #[arg(short, default_value_t = 4)]
        d: usize,
        #[arg(short, default_value_t = 100)]
        n: usize,
        #[arg(short, long = "seed", default_value_t = 0)]
        s: u64,
    },
    /// Numerical Gram feasibility search for S_{m,k}(X², Y²).
    Search(SearchArgs),
    /// Commutator witness for p ∼cyc q, or a class where they differ.
    Witness {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        text: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Default,
    V2,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    #[arg(short)]
    m: Option<usize>,
    /// Certificate JSON as written by `bmv cert`.
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Full,
    V01,
    V2,
}

impl From<BasisArg> for BasisFilter {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Full => BasisFilter::Full,
            BasisArg::V01 => BasisFilter::V01,
            BasisArg::V2 => BasisFilter::V2,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(short)]
    m: usize,
    #[arg(short, default_value_t = 4)]
    k: usize,
    #[arg(long, value_enum, default_value_t = BasisArg::V01)]
    basis: BasisArg,
    #[arg(long, default_value_t = 1e-9)]
    eps_psd: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps_aff: f64,
    #[arg(long, default_value_t = 50_000)]
    max_iter: usize,
    #[arg(long)]
    dykstra: bool,
    /// Random starting matrix; the zero matrix when omitted.
    #[arg(short, long = "seed")]
    s: Option<u64>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct GenOutput {
    m: usize,
    k: usize,
    squared: bool,
    terms: usize,
    polynomial: String,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct CountOutput {
    m: usize,
    parity: Parity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff_sum: Option<u64>,
    formula: u64,
    word_counts: bool,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct WitnessOutput {
    equivalent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    separating_class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    difference: Option<String>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct SearchOutput {
    m: usize,
    k: usize,
    basis: BasisFilter,
    problem: GramProblemFile,
    solution: GramSolution,
    /// Number of squares extracted from a feasible G.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reexpansion_residual: Option<f64>,
}

struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

/// Text to print and whether the result is positive.
type Outcome = Result<(String, bool), Fail>;

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serialises") + "\n"
}

fn read_poly(path: &Path) -> Result<Polynomial, Fail> {
    let s = std::fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    let joined = s.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join(" ");
    joined.parse().map_err(|e| Fail(format!("{}: {e}", path.display())))
}

fn cert_text(c: &Certificate) -> String {
    let mut out = format!("{} * sum f_k^* f_k, m = {}\n", c.multiplier(), c.m());
    for (k, f) in c.generators().iter().enumerate() {
        out += &format!("f{k} = {f}\n");
    }
    out
}

fn gen(m: usize, k: usize, squared: bool, text: bool) -> Outcome {
    let mut p = s_poly(m, k)?;
    if squared {
        p = p.substitute_squares();
    }
    if text {
        return Ok((format!("{p}\n"), true));
    }
    Ok((json(&GenOutput { m, k, squared, terms: p.len(), polynomial: p.to_string() }), true))
}

fn cert(m: usize, form: Form, text: bool) -> Outcome {
    let c = match form {
        Form::Default => certificate::build(m)?,
        Form::V2 if m % 2 == 0 => {
            return Err(Fail(format!("no V2-form certificate is constructed for even m (m = {m})")))
        }
        Form::V2 => certificate::to_v2_form(&certificate::build_odd(m)?)?,
    };
    Ok((if text { cert_text(&c) } else { c.to_json() }, true))
}

fn verify(args: &VerifyArgs) -> Outcome {
    let c = match (&args.m, &args.file) {
        (Some(m), _) => certificate::build(*m)?,
        (None, Some(path)) => {
            let s = std::fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
            Certificate::from_json(&s).map_err(|e| Fail(format!("{}: {e}", path.display())))?
        }
        (None, None) => unreachable!("clap requires one of -m or FILE"),
    };
    let r = verifier::verify_symbolic(&c);
    Ok((r.to_json(), r.passed))
}

fn to_u64(r: &impl std::fmt::Display) -> Result<u64, Fail> {
    r.to_string().parse().map_err(|_| Fail(format!("count {r} is not a nonnegative integer")))
}

fn count(m: usize) -> Outcome {
    let c = certificate::build(m)?;
    let words_ok = certificate::word_count_check(&c).passed;
    let formula = to_u64(&certificate::expected_class_count(m))?;
    let out = match c.parity() {
        Parity::Odd => {
            let classes = class_decomposition(&s_poly(m, 4)?).len() as u64;
            CountOutput { m, parity: Parity::Odd, classes: Some(classes), coeff_sum: None, formula, word_counts: words_ok }
        }
        Parity::Even => {
            let sum = to_u64(&c.expand().coefficient_sum())?;
            CountOutput { m, parity: Parity::Even, classes: None, coeff_sum: Some(sum), formula, word_counts: words_ok }
        }
    };
    let ok = out.classes.or(out.coeff_sum) == Some(formula) && words_ok;
    Ok((json(&out), ok))
}

fn eval(m: usize, k: usize, d: usize, n: usize, seed: u64) -> Outcome {
    eprintln!("# bmv eval -m {m} -k {k} -d {d} -n {n} -s {seed}");
    let r = verifier::numeric_spotcheck(m, k, n, d, seed)?;
    Ok((r.to_json(), r.passed))
}

fn search(a: &SearchArgs) -> Outcome {
    if !(a.eps_psd > 0.0 && a.eps_aff > 0.0) {
        return Err(Fail("tolerances must be positive".into()));
    }
    let seed = a.s.map(|s| format!(" -s {s}")).unwrap_or_default();
    eprintln!(
        "# bmv search -m {} -k {} --basis {} --eps-psd {:e} --eps-aff {:e} --max-iter {}{}{seed}",
        a.m,
        a.k,
        a.basis.to_possible_value().expect("plain variant").get_name(),
        a.eps_psd,
        a.eps_aff,
        a.max_iter,
        if a.dykstra { " --dykstra" } else { "" },
    );
    let target = s_poly(a.m, a.k)?.substitute_squares();
    let basis = gram::default_basis(a.m, a.k, a.basis.into())?;
    let prob = gram::assemble(&target, &basis)?;
    let opts = SolverOptions { eps_psd: a.eps_psd, eps_aff: a.eps_aff, max_iter: a.max_iter, dykstra: a.dykstra, seed: a.s };
    let sol = gram::solve_feasibility(&prob, &opts);
    let (rank, residual) = if sol.status == Status::Feasible {
        let tol = a.eps_psd.max(1e-9 * sol.g.norm());
        let gs = gram::extract_sohs(&sol, &basis, tol)?;
        (Some(gs.len()), Some(gram::reexpansion_residual(&gs, &target)))
    } else {
        (None, None)
    };
    let feasible = sol.status == Status::Feasible;
    let out = SearchOutput {
        m: a.m,
        k: a.k,
        basis: a.basis.into(),
        problem: prob.to_file(),
        solution: sol,
        rank,
        reexpansion_residual: residual,
    };
    Ok((json(&out), feasible))
}

fn witness(p: &Path, q: &Path, text: bool) -> Outcome {
    let (p, q) = (read_poly(p)?, read_poly(q)?);
    let out = match commutator_witness(&p, &q) {
        Ok(pairs) => WitnessOutput {
            equivalent: true,
            pairs: Some(pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
            separating_class: None,
            difference: None,
        },
        Err(_) => {
            let (class, diff) = class_residuals(&p, &q).into_iter().next().expect("inequivalent inputs differ on a class");
            WitnessOutput {
                equivalent: false,
                pairs: None,
                separating_class: Some(class.canonical().to_string()),
                difference: Some(diff.to_string()),
            }
        }
    };
    if text {
        let body = match (&out.pairs, &out.separating_class) {
            (Some(pairs), _) => pairs.iter().map(|(a, b)| format!("[{a}, {b}]\n")).collect(),
            (None, Some(c)) => format!("not equivalent: class of {c} differs by {}\n", out.difference.as_deref().unwrap_or("?")),
            _ => String::new(),
        };
        return Ok((body, out.equivalent));
    }
    let eq = out.equivalent;
    Ok((json(&out), eq))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.cmd {
        Cmd::Gen { m, k, squared, text } => gen(*m, *k, *squared, *text),
        Cmd::Cert { m, form, text } => cert(*m, *form, *text),
        Cmd::Verify(args) => verify(args),
        Cmd::Count { m } => count(*m),
        Cmd::Eval { m, k, d, n, s } => eval(*m, *k, *d, *n, *s),
        Cmd::Search(args) => search(args),
        Cmd::Witness { p, q, text } => witness(p, q, *text),
    };
    match outcome {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
