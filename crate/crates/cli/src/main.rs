use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use convchain::bd::{bd_rates, build_k_bd, build_l, kappa_bd, tune_weights};
use convchain::chains::{
    build_dual, build_multiple, build_semi_infinite, commuting_family, kappa_closed, parse_signs, resolve_lambda,
    CaseId, ChainSpec, Params, Sign, SignPattern, TransitionMatrix,
};
use convchain::families::Family;
use convchain::io::{matrix_to_csv, vector_to_csv, Cell, Check, LambdaDoc, SpectrumDoc};
use convchain::numerics::{format_rational, parse_rational, rat, Rational, Scalar};
use convchain::spectral::{
    eigendecompose, evolve_direct, evolve_spectral, sample_paths, same_multiset, symmetrize, total_variation,
    PolySpectrum,
};
use convchain::tolerance;
use convchain::verify::{bd_check, finite_spectrum, multiple_chain_check, run_suite, semi_infinite_checks, Suite};
use convchain::Error;

#[derive(Parser)]
#[command(name = "convchain", version, about = "Markov chains from convolutions of orthogonality measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition matrix as CSV
    Build(ChainArgs),
    /// Eigenvalues and checks as JSON
    Spectrum(ChainArgs),
    /// Distribution after l steps, by matrix powers and by the spectral sum
    Evolve {
        #[command(flatten)]
        chain: ChainArgs,
        /// `delta:x` or a comma separated list of probabilities
        #[arg(long, default_value = "delta:0")]
        p0: String,
        #[arg(long)]
        l: usize,
    },
    /// Empirical distribution of sampled trajectories
    Sample {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "delta:0")]
        p0: String,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs a verification suite over a parameter grid
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The dual chain K(N-x, N-y)
    Dual(ChainArgs),
    /// Banded birth and death chain
    Bd {
        /// krawtchouk or hahn
        #[arg(long)]
        family: String,
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        m: usize,
        /// overrides the tuned time scale
        #[arg(long)]
        t_s: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Backend {
    Exact,
    Float,
}

#[derive(Args, Clone)]
struct ChainArgs {
    /// JSON document with the same keys; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    /// name=value pairs, values as num/den or decimals
    #[arg(long, num_args = 1..)]
    params: Vec<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    trunc_tol: Option<f64>,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    /// sign pattern such as +-+ for multiple convolutions
    #[arg(long)]
    pattern: Option<String>,
    /// deformation parameter of a commuting family
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ChainConfig {
    case: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, Value>,
    #[serde(rename = "N")]
    n: Option<usize>,
    trunc_tol: Option<f64>,
    backend: Option<Backend>,
    pattern: Option<String>,
    t: Option<Value>,
}

enum Target {
    Case(CaseId),
    Multi(Vec<Sign>),
}

struct Resolved {
    target: Target,
    params: Params<Rational>,
    n: Option<usize>,
    trunc_tol: f64,
    backend: Backend,
    out: Option<PathBuf>,
}

/// Failure modes of a command, mapped to exit codes 2 and 1.
enum Failure {
    Usage(Error),
    Check(Error),
    Checks(Vec<Check>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Domain(_) | Error::Case(_) | Error::Pattern(_) | Error::Transcendental(_) => {
                Failure::Usage(e)
            }
            other => Failure::Check(other),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(Error::Parse(msg.into()))
}

fn value_to_rational(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("not a number: {other}"))),
    }
}

fn resolve(args: &ChainArgs) -> Result<Resolved, Failure> {
    let cfg: ChainConfig = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => ChainConfig::default(),
    };
    let mut params: Vec<(String, Rational)> = Vec::new();
    let mut set = |k: &str, v: Rational| match params.iter_mut().find(|(n, _)| n == k) {
        Some(slot) => slot.1 = v,
        None => params.push((k.to_string(), v)),
    };
    for (k, v) in &cfg.params {
        set(k, value_to_rational(v)?);
    }
    for pair in &args.params {
        let (k, v) = pair.split_once('=').ok_or_else(|| usage(format!("expected name=value, got {pair:?}")))?;
        set(k.trim(), parse_rational(v)?);
    }
    let pattern = args.pattern.clone().or(cfg.pattern);
    let case = args.case.clone().or(cfg.case);
    let target = match (case.as_deref(), pattern) {
        (Some("MULTI") | None, Some(p)) => Target::Multi(parse_signs(&p)?),
        (Some(c), None) => Target::Case(c.parse()?),
        (Some(c), Some(_)) => return Err(usage(format!("--pattern applies to MULTI, not {c}"))),
        (None, None) => return Err(usage("missing --case")),
    };
    let mut params = Params::new(params);
    let t = match (&args.t, &cfg.t) {
        (Some(s), _) => Some(parse_rational(s)?),
        (None, Some(v)) => Some(value_to_rational(v)?),
        (None, None) => None,
    };
    if let Some(t) = t {
        match &target {
            Target::Case(c) => params = commuting_family(*c, &params, &t)?,
            Target::Multi(_) => return Err(usage("--t applies to a registered case")),
        }
    }
    Ok(Resolved {
        target,
        params,
        n: args.n.or(cfg.n),
        trunc_tol: args.trunc_tol.or(cfg.trunc_tol).unwrap_or(tolerance::TAIL),
        backend: args.backend.or(cfg.backend).unwrap_or(Backend::Exact),
        out: args.out.clone(),
    })
}

impl Resolved {
    fn size(&self) -> Result<usize, Failure> {
        match self.n {
            Some(0) => Err(usage("N must be at least 1")),
            Some(n) => Ok(n),
            None => Err(usage("missing --N")),
        }
    }

    fn pattern(&self, signs: &[Sign]) -> Result<SignPattern<Rational>, Failure> {
        let p = (1..=signs.len())
            .map(|j| self.params.get(&format!("p{j}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SignPattern::new(signs.to_vec(), p)?)
    }

    fn finite_case(&self) -> Result<CaseId, Failure> {
        match self.target {
            Target::Case(c) if !c.is_semi_infinite() => Ok(c),
            Target::Case(c) => Err(usage(format!("{c} is semi-infinite; use build or spectrum"))),
            Target::Multi(_) => Err(usage("this command needs a registered finite case")),
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn matrix_csv<S: Cell>(m: &TransitionMatrix<S>) -> Result<String, Failure> {
    Ok(matrix_to_csv(m)?)
}

fn cmd_build(r: &Resolved) -> CmdResult {
    let text = match &r.target {
        Target::Multi(signs) => {
            let pat = r.pattern(signs)?;
            let n = r.size()?;
            match r.backend {
                Backend::Exact => matrix_csv(&build_multiple(&pat, n)?.matrix)?,
                Backend::Float => matrix_csv(&build_multiple(&pat.to_f64(), n)?.matrix)?,
            }
        }
        Target::Case(c) if c.is_semi_infinite() => {
            if r.backend == Backend::Exact && r.n.is_some() {
                return Err(usage(format!("{c} is semi-infinite; drop --N and use --trunc-tol")));
            }
            matrix_csv(&build_semi_infinite(*c, &r.params, r.trunc_tol)?.matrix)?
        }
        Target::Case(c) => {
            let n = r.size()?;
            match r.backend {
                Backend::Exact => matrix_csv(&ChainSpec::finite(*c, &r.params, n)?.matrix()?)?,
                Backend::Float => matrix_csv(&ChainSpec::finite(*c, &r.params.to_f64(), n)?.matrix()?)?,
            }
        }
    };
    emit(&r.out, &text)
}

fn cmd_dual(r: &Resolved) -> CmdResult {
    let c = r.finite_case()?;
    let n = r.size()?;
    let text = match r.backend {
        Backend::Exact => matrix_csv(&build_dual(c, &r.params, n)?)?,
        Backend::Float => matrix_csv(&build_dual(c, &r.params.to_f64(), n)?)?,
    };
    emit(&r.out, &text)
}

fn params_map(p: &Params<Rational>) -> BTreeMap<String, String> {
    p.entries().iter().map(|(k, v)| (k.clone(), format_rational(v))).collect()
}

fn finish_doc(r: &Resolved, doc: SpectrumDoc) -> CmdResult {
    let failed: Vec<Check> = doc.checks.iter().filter(|c| !c.passed).cloned().collect();
    emit(&r.out, &(doc.to_json()? + "\n"))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn cmd_spectrum(r: &Resolved) -> CmdResult {
    let doc = match &r.target {
        Target::Multi(signs) => {
            let pat = r.pattern(signs)?;
            let n = r.size()?;
            let chain = build_multiple(&pat, n)?;
            let ok = multiple_chain_check(&pat, n)?;
            SpectrumDoc {
                case: "MULTI".into(),
                params: params_map(&r.params),
                lambda: LambdaDoc::from_family(&chain.lambda),
                kappa: (0..=n).map(|j| format_rational(&pat.kappa(j))).collect(),
                provenance: "closed-form".into(),
                checks: vec![Check::new(format!("pattern {pat} N={n}"), ok, "")],
            }
        }
        Target::Case(c) if c.is_semi_infinite() => {
            let lambda = resolve_lambda(*c, &r.params)?;
            let kappa = (0..=10).map(|j| kappa_closed(*c, &r.params, j)).collect::<Result<Vec<_>, _>>()?;
            SpectrumDoc {
                case: c.token().into(),
                params: params_map(&r.params),
                lambda: LambdaDoc::from_family(&lambda),
                kappa: kappa.iter().map(format_rational).collect(),
                provenance: "closed-form".into(),
                checks: semi_infinite_checks(*c, &r.params),
            }
        }
        Target::Case(c) => {
            let n = r.size()?;
            let lambda = resolve_lambda(*c, &r.params)?;
            let (kappa, checks) = match r.backend {
                Backend::Exact => {
                    let s = finite_spectrum(*c, &r.params, n)?;
                    (s.kappa.iter().map(format_rational).collect(), s.checks)
                }
                Backend::Float => float_spectrum(*c, &r.params.to_f64(), n)?,
            };
            SpectrumDoc {
                case: c.token().into(),
                params: params_map(&r.params),
                lambda: LambdaDoc::from_family(&lambda),
                kappa,
                provenance: "closed-form".into(),
                checks,
            }
        }
    };
    finish_doc(r, doc)
}

fn float_spectrum(c: CaseId, p: &Params<f64>, n: usize) -> Result<(Vec<String>, Vec<Check>), Error> {
    let spec = ChainSpec::finite(c, p, n)?;
    let k = spec.matrix()?;
    let pi = spec.measure()?.values;
    let kappa = spec.kappas()?;
    let numeric = eigendecompose(&symmetrize(&k, &pi)?, Some(&kappa))?.kappa;
    let checks = vec![
        Check::new("stochastic", k.is_nonnegative() && k.is_stochastic(tolerance::RELATIVE), ""),
        Check::new("detailed balance", k.balance_violation(&pi, tolerance::RELATIVE).is_none(), ""),
        Check::new("kappa matches eigensolver", same_multiset(&kappa, &numeric, tolerance::EIGENVALUE), ""),
    ];
    Ok((kappa.iter().map(|v| v.format_cell()).collect(), checks))
}

fn parse_p0(s: &str, dim: usize) -> Result<Vec<Rational>, Failure> {
    if let Some(x) = s.strip_prefix("delta:") {
        let x: usize = x.trim().parse().map_err(|_| usage(format!("bad delta point {x:?}")))?;
        if x >= dim {
            return Err(usage(format!("delta point {x} outside 0..{dim}")));
        }
        return Ok((0..dim).map(|i| if i == x { rat(1, 1) } else { rat(0, 1) }).collect());
    }
    let v = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if v.len() != dim {
        return Err(usage(format!("p0 has {} entries, lattice has {dim}", v.len())));
    }
    let total = v.iter().fold(rat(0, 1), |a, b| a + b.clone());
    if total != rat(1, 1) || v.iter().any(|p| *p < rat(0, 1)) {
        return Err(usage("p0 must be a probability vector"));
    }
    Ok(v)
}

fn evolve_generic<S: Scalar + Cell>(spec: &ChainSpec<S>, p0: &[S], l: usize) -> Result<(Vec<S>, bool), Error> {
    let k = spec.matrix()?;
    let direct = evolve_direct(&k, p0, l)?;
    let ps = PolySpectrum::new(&spec.lambda, spec.lattice, spec.kappas()?)?;
    let spectral = evolve_spectral(&ps, p0, l)?.distribution;
    let agree = direct.iter().zip(&spectral).all(|(a, b)| a.close(b, 1e-12));
    Ok((direct, agree))
}

fn cmd_evolve(r: &Resolved, p0: &str, l: usize) -> CmdResult {
    let c = r.finite_case()?;
    let n = r.size()?;
    let p0 = parse_p0(p0, n + 1)?;
    let (text, agree) = match r.backend {
        Backend::Exact => {
            let (d, ok) = evolve_generic(&ChainSpec::finite(c, &r.params, n)?, &p0, l)?;
            (vector_to_csv(&d)?, ok)
        }
        Backend::Float => {
            let p0: Vec<f64> = p0.iter().map(Scalar::to_f64).collect();
            let (d, ok) = evolve_generic(&ChainSpec::finite(c, &r.params.to_f64(), n)?, &p0, l)?;
            (vector_to_csv(&d)?, ok)
        }
    };
    emit(&r.out, &text)?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Checks(vec![Check::new("spectral evolution equals matrix powers", false, "")]))
    }
}

fn cmd_sample(r: &Resolved, p0: &str, l: usize, count: usize, seed: u64) -> CmdResult {
    let c = r.finite_case()?;
    let n = r.size()?;
    let p0: Vec<f64> = parse_p0(p0, n + 1)?.iter().map(Scalar::to_f64).collect();
    let k = ChainSpec::finite(c, &r.params.to_f64(), n)?.matrix()?;
    let exact = evolve_direct(&k, &p0, l)?;
    let sampled = sample_paths(&k, &p0, l, count, seed)?;
    let mut w = String::from("x,empirical,exact\n");
    for x in 0..=n {
        w.push_str(&format!("{x},{:?},{:?}\n", sampled.distribution[x], exact[x]));
    }
    emit(&r.out, &w)?;
    eprintln!("total variation {:e}", total_variation(&sampled.distribution, &exact));
    Ok(())
}

fn cmd_verify(suite: &str, grid: usize, out: &Option<PathBuf>) -> CmdResult {
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite, grid);
    let failed: Vec<Check> = checks.iter().filter(|c| !c.passed).cloned().collect();
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&checks).map_err(|e| usage(e.to_string()))?;
        fs::write(p, text + "\n").map_err(|e| usage(format!("{}: {e}", p.display())))?;
    }
    println!("{suite}: {} checks, {} failed", checks.len(), failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn cmd_bd(family: &str, params: &[String], n: usize, m: usize, t_s: &Option<String>, out: &Option<PathBuf>) -> CmdResult {
    let p = Params::parse(params.iter().map(String::as_str))?;
    let fam = match family {
        "krawtchouk" => Family::Krawtchouk { p: p.get("p")? },
        "hahn" => Family::Hahn { a: p.get("a")?, b: p.get("b")? },
        other => return Err(usage(format!("no birth and death rates for family {other:?}"))),
    };
    let rates = bd_rates(&fam, n)?;
    let l = build_l(&rates);
    let mut w = tune_weights(&l, m)?;
    if let Some(t) = t_s {
        w = w.with_time_scale(parse_rational(t)?);
    }
    let k = build_k_bd(&l, &w)?;
    emit(out, &matrix_csv(&k)?)?;
    let kappa: Vec<String> = rates.eigen.iter().map(|e| format_rational(&kappa_bd(&w, e))).collect();
    eprintln!("kappa {}", kappa.join(" "));
    if t_s.is_none() && !bd_check(&fam, m, n)? {
        return Err(Failure::Checks(vec![Check::new(format!("{family} m={m} N={n}"), false, "")]));
    }
    Ok(())
}

fn report(f: &Failure, context: &str) -> ExitCode {
    let (code, body) = match f {
        Failure::Usage(e) => (2, serde_json::json!({"error": e.kind(), "message": e.to_string(), "context": context})),
        Failure::Check(e) => (1, serde_json::json!({"error": e.kind(), "message": e.to_string(), "context": context})),
        Failure::Checks(c) => (1, serde_json::json!({"error": "check", "context": context, "failed": c})),
    };
    eprintln!("{body}");
    ExitCode::from(code)
}

fn context(r: &ChainArgs) -> String {
    let case = r.case.clone().or_else(|| r.pattern.clone()).unwrap_or_default();
    format!("{case} {}", r.params.join(" ")).trim().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, ctx) = match &cli.command {
        Command::Build(a) => (resolve(a).and_then(|r| cmd_build(&r)), context(a)),
        Command::Spectrum(a) => (resolve(a).and_then(|r| cmd_spectrum(&r)), context(a)),
        Command::Dual(a) => (resolve(a).and_then(|r| cmd_dual(&r)), context(a)),
        Command::Evolve { chain, p0, l } => (resolve(chain).and_then(|r| cmd_evolve(&r, p0, *l)), context(chain)),
        Command::Sample { chain, p0, l, count, seed } => {
            (resolve(chain).and_then(|r| cmd_sample(&r, p0, *l, *count, *seed)), context(chain))
        }
        Command::Verify { suite, grid, out } => (cmd_verify(suite, *grid, out), format!("verify {suite}")),
        Command::Bd { family, params, n, m, t_s, out } => {
            (cmd_bd(family, params, *n, *m, t_s, out), format!("bd {family} {}", params.join(" ")))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(&f, &ctx),
    }
}
