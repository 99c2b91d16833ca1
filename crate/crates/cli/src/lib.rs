//! Command-line front end: argument handling, subcommand dispatch and
//! report rendering. The binary is a thin wrapper around [`run`].

pub mod parse;
pub mod report;

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use qmason::casorati::{casorati, casorati_shift_form, independence_report, printed_normalizer, CasoratiInput};
use qmason::qcore::{jackson_iter, q_binomial, q_number};
use qmason::radical::{
    classical_rad, decompose_operand, gcd_tower_dense, q_weight, rad_q_operand, rad_q_trunc_operand,
    relatively_q_prime_operands, ChainDecomposition,
};
use qmason::theorems::{
    fermat_search, verify_fermat_instance, verify_fermat_multi_bound, verify_mason_classical, verify_mason_extended,
    verify_mason_q, FermatCertificate, FermatMode, FermatSearchParams, Verdict,
};
use qmason::{DensePoly, Error, GaussianRational, Operand, QContext, Result};
use serde_json::{json, Value};

pub use parse::{parse_expr, parse_poly, PolyExpr};
pub use report::{DocVerdict, PremiseDoc, ReportDocument};

type Gr = GaussianRational;

pub const THREADS_ENV: &str = "QMASON_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qmason", version, about = "Exact q-difference polynomial calculus and theorem verifiers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Value of q, in canonical form such as 2, 1/2 or 2+i
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,

    /// Emit JSON (the default)
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Emit plain text
    #[arg(long, global = true)]
    text: bool,

    /// Truncation level for radicals
    #[arg(long, global = true)]
    mu: Option<usize>,

    /// Exponent or iteration count
    #[arg(long, global = true)]
    n: Option<u32>,

    /// Number of summands for multi-term Fermat search
    #[arg(long, global = true)]
    m: Option<usize>,

    /// Degree bound for search-fermat
    #[arg(long = "max-deg", global = true)]
    max_deg: Option<usize>,

    /// Coefficient set: an integer range lo..hi or a comma list
    #[arg(long, global = true, allow_hyphen_values = true)]
    coeff: Option<String>,

    /// Worker threads for search-fermat (default: $QMASON_THREADS or all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Examine at most this many search candidates
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// q-number [N]_q
    Qnum { index: u32 },
    /// Gaussian binomial [K J]_q
    Qbinom { k: u32, j: u32 },
    /// Expand an expression to canonical dense form
    Expand {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Jackson q-derivative, iterated --n times (default 1)
    Dq {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// q-weight of the zero Z0
    Weight {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(allow_hyphen_values = true)]
        z0: String,
    },
    /// Chain decomposition and q-difference radical
    Radical {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Pairwise relative q-primeness
    Qprime {
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// q-Casorati determinant and independence signals
    Casorati {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Check a + b = c against the q-difference Stothers-Mason inequality
    VerifyMason {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// Use the classical radical and coprimality instead
        #[arg(long)]
        classical: bool,
    },
    /// Check f_1 + ... + f_m = f_{m+1} against the extended inequality
    VerifyExtended {
        #[arg(required = true, num_args = 3.., allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Check [f_1]^n + ... + [f_m]^n = [f_{m+1}]^n against the q-Fermat theorems
    VerifyFermat {
        #[arg(required = true, num_args = 3.., allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Exhaustive search for q-Fermat solutions with a replayable certificate
    SearchFermat,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Qnum { .. } => "qnum",
            Command::Qbinom { .. } => "qbinom",
            Command::Expand { .. } => "expand",
            Command::Dq { .. } => "dq",
            Command::Weight { .. } => "weight",
            Command::Radical { .. } => "radical",
            Command::Qprime { .. } => "qprime",
            Command::Casorati { .. } => "casorati",
            Command::VerifyMason { .. } => "verify-mason",
            Command::VerifyExtended { .. } => "verify-extended",
            Command::VerifyFermat { .. } => "verify-fermat",
            Command::SearchFermat => "search-fermat",
        }
    }

    fn arguments(&self) -> Vec<String> {
        match self {
            Command::Qnum { index } => vec![index.to_string()],
            Command::Qbinom { k, j } => vec![k.to_string(), j.to_string()],
            Command::Expand { expr } | Command::Dq { expr } | Command::Radical { expr } => vec![expr.clone()],
            Command::Weight { expr, z0 } => vec![expr.clone(), z0.clone()],
            Command::Qprime { exprs }
            | Command::Casorati { exprs }
            | Command::VerifyExtended { exprs }
            | Command::VerifyFermat { exprs } => exprs.clone(),
            Command::VerifyMason { a, b, c, .. } => vec![a.clone(), b.clone(), c.clone()],
            Command::SearchFermat => Vec::new(),
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses the command line, runs the command and renders the report.
/// Exit code 0: success or verdict holds; 1: counterexample or premise
/// not applicable; 2: usage, parse or hypothesis error.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(&cli) {
        Ok(doc) => Outcome {
            code: doc.verdict.exit_code(),
            stdout: if cli.text { doc.to_text() } else { doc.to_json() + "\n" },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

const VALUE_FLAGS: &[&str] = &["--q", "--mu", "--n", "--m", "--max-deg", "--coeff", "--threads", "--budget"];
const SWITCHES: &[&str] = &["--json", "--text", "--classical", "--help", "-h", "--version", "-V"];

/// Reorders the command line as `prog subcommand flags... -- positionals...`
/// so that polynomial arguments such as `-qb(-1;2)` are never taken for
/// flags and flags may still follow them.
fn normalize_args<I, T>(args: I) -> Vec<OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut iter = args.into_iter().map(Into::into);
    let Some(prog) = iter.next() else {
        return Vec::new();
    };
    let mut flags = Vec::new();
    let mut positionals = Vec::new();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        let name = text.split_once('=').map_or(&*text, |(n, _)| n);
        if text == "--" {
            positionals.extend(iter.by_ref());
        } else if VALUE_FLAGS.contains(&name) {
            let has_value = text.contains('=');
            flags.push(arg);
            if !has_value {
                flags.extend(iter.next());
            }
        } else if SWITCHES.contains(&name) {
            flags.push(arg);
        } else {
            positionals.push(arg);
        }
    }
    let mut out = vec![prog];
    let mut positionals = positionals.into_iter();
    out.extend(positionals.next());
    out.extend(flags);
    out.push("--".into());
    out.extend(positionals);
    out
}

fn q_context(cli: &Cli) -> Result<Option<QContext>> {
    cli.q.as_deref().map(|s| QContext::new(s.parse::<Gr>()?)).transpose()
}

fn require_q(ctx: &Option<QContext>) -> Result<&QContext> {
    ctx.as_ref()
        .ok_or_else(|| Error::InvalidArgument("this command needs --q".into()))
}

/// Parses an expression into a nonzero operand, splitting it over Q(i)
/// when possible.
fn operand(text: &str, ctx: Option<&QContext>) -> Result<Operand> {
    match parse_poly(text, ctx)? {
        Operand::Dense(p) if p.is_zero() => Err(Error::ZeroPolynomial),
        Operand::Dense(p) => Operand::from_dense(p),
        op => Ok(op),
    }
}

fn dense(text: &str, ctx: Option<&QContext>) -> Result<DensePoly> {
    Ok(parse_poly(text, ctx)?.dense())
}

fn chains_json(dec: &ChainDecomposition) -> Value {
    dec.chains
        .iter()
        .map(|c| json!({ "head": c.head.to_string(), "length": c.length.to_string() }))
        .collect()
}

fn threads(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok())
        .or_else(|| std::thread::available_parallelism().ok().map(usize::from))
        .unwrap_or(1)
        .max(1)
}

/// `lo..hi` (integers, inclusive) or a comma list of canonical numbers.
pub fn parse_coeff_set(text: &str) -> Result<Vec<Gr>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let bound = |s: &str| s.parse::<i64>().map_err(|_| Error::ParseNumber(s.to_string()));
        let (lo, hi) = (bound(lo)?, bound(hi)?);
        if hi.saturating_sub(lo) > 1_000 {
            return Err(Error::InvalidArgument(format!("coefficient range {text} is too wide")));
        }
        return Ok((lo..=hi).map(Gr::from_int).collect());
    }
    text.split(',').filter(|s| !s.is_empty()).map(str::parse).collect()
}

fn execute(cli: &Cli) -> Result<ReportDocument> {
    let ctx = q_context(cli)?;
    let ctx_ref = ctx.as_ref();
    let mut doc = ReportDocument::new(cli.command.name(), &cli.command.arguments(), ctx.as_ref().map(|c| c.q().to_string()));
    match &cli.command {
        Command::Qnum { index } => {
            doc.quantity("value", q_number(*index, require_q(&ctx)?));
        }
        Command::Qbinom { k, j } => {
            doc.quantity("value", q_binomial(*k, *j, require_q(&ctx)?)?);
        }
        Command::Expand { expr } => {
            let op = parse_poly(expr, ctx_ref)?;
            let p = op.dense();
            doc.quantity("poly", &p);
            if let Some(d) = p.degree() {
                doc.quantity("degree", d);
            }
            if let Some(f) = op.factored() {
                doc.quantity("factored", f);
            }
        }
        Command::Dq { expr } => {
            let ctx = require_q(&ctx)?;
            let p = dense(expr, Some(ctx))?;
            let k = cli.n.unwrap_or(1);
            doc.quantity("poly", &p).quantity("order", k);
            doc.quantity("result", jackson_iter(&p, k as usize, ctx)?);
        }
        Command::Weight { expr, z0 } => {
            let ctx = require_q(&ctx)?;
            let p = dense(expr, Some(ctx))?;
            let z0: Gr = z0.parse()?;
            doc.quantity("poly", &p).quantity("z0", &z0);
            doc.quantity("weight", q_weight(&p, &z0, ctx)?.0);
        }
        Command::Radical { expr } => radical(&mut doc, expr, cli.mu, require_q(&ctx)?)?,
        Command::Qprime { exprs } => {
            let ctx = require_q(&ctx)?;
            let ops = exprs.iter().map(|e| operand(e, Some(ctx))).collect::<Result<Vec<_>>>()?;
            let report = relatively_q_prime_operands(&ops, ctx)?;
            doc.flag("relatively_q_prime", report.holds);
            if let Some(w) = &report.witness {
                doc.quantity("pair", format!("{},{}", w.first + 1, w.second + 1));
                doc.quantity("common_q_divisor", &w.divisor);
            }
        }
        Command::Casorati { exprs } => {
            let ctx = require_q(&ctx)?;
            let polys = exprs.iter().map(|e| dense(e, Some(ctx))).collect::<Result<Vec<_>>>()?;
            let input = CasoratiInput::new(polys, ctx.clone())?;
            let (shift_det, normalizer) = casorati_shift_form(&input)?;
            let indep = independence_report(&input)?;
            doc.quantity("casorati", casorati(&input)?)
                .quantity("shift_determinant", shift_det)
                .quantity("shift_normalizer", normalizer)
                .quantity("printed_normalizer", printed_normalizer(input.len(), ctx))
                .flag("casorati_nonzero", indep.casorati_nonzero)
                .flag("coefficient_rank_full", indep.coefficient_rank_full)
                .flag("signals_agree", indep.agree);
        }
        Command::VerifyMason { a, b, c, classical } => {
            let ctx = require_q(&ctx)?;
            let report = if *classical {
                let [a, b, c] = [a, b, c].map(|e| dense(e, Some(ctx)));
                verify_mason_classical(&a?, &b?, &c?)?
            } else {
                let [a, b, c] = [a, b, c].map(|e| operand(e, Some(ctx)));
                verify_mason_q(&a?, &b?, &c?, ctx)?
            };
            doc.premises(&report.premises)
                .quantity("max_deg", report.max_deg)
                .quantity("rad_deg", report.rad_deg)
                .quantity("radical", &report.radical)
                .flag("inequality_holds", report.inequality_holds)
                .flag("sharp", report.sharp);
            if let Some(chains) = &report.chains {
                let dec = ChainDecomposition { lead: Gr::one(), chains: chains.clone() };
                doc.payload = json!({ "chains": chains_json(&dec) });
            }
            doc.verdict = report.verdict.into();
        }
        Command::VerifyExtended { exprs } => {
            let ctx = require_q(&ctx)?;
            let ops = exprs.iter().map(|e| operand(e, Some(ctx))).collect::<Result<Vec<_>>>()?;
            let r = verify_mason_extended(&ops, ctx)?;
            doc.premises(&r.premises)
                .quantity("m", r.m)
                .quantity("lhs", r.lhs)
                .quantity("trunc_rad_deg", r.trunc_rad_deg)
                .quantity("rad_deg", r.rad_deg)
                .quantity("rhs_trunc", r.rhs_trunc)
                .quantity("rhs_rad", r.rhs_rad)
                .flag("trunc_holds", r.trunc_holds)
                .flag("rad_holds", r.rad_holds)
                .flag("both_hold", r.both_hold)
                .flag("sharp", r.sharp)
                .flag("casorati_nonzero", r.independence.casorati_nonzero)
                .flag("coefficient_rank_full", r.independence.coefficient_rank_full);
            doc.verdict = r.verdict.into();
        }
        Command::VerifyFermat { exprs } => {
            let ctx = require_q(&ctx)?;
            let n = cli.n.ok_or_else(|| Error::InvalidArgument("verify-fermat needs --n".into()))?;
            let ops = exprs.iter().map(|e| operand(e, Some(ctx))).collect::<Result<Vec<_>>>()?;
            doc.quantity("n", n);
            if let [a, b, c] = &ops[..] {
                let r = verify_fermat_instance(a, b, c, n, ctx)?;
                for (k, p) in r.powered.iter().enumerate() {
                    doc.quantity(&format!("powered_{}", k + 1), p.dense());
                }
                doc.premises(&r.premises)
                    .quantity("residual", &r.residual)
                    .flag("equation_holds", r.equation_holds)
                    .flag("consistent", r.consistent);
                doc.verdict = r.verdict.into();
            } else {
                let r = verify_fermat_multi_bound(&ops, n, ctx)?;
                doc.premises(&r.premises)
                    .quantity("m", r.m)
                    .quantity("max_deg", r.max_deg)
                    .flag("bound_holds", r.bound_holds);
                if let Some(b) = &r.bound {
                    doc.quantity("bound", b);
                }
                doc.verdict = r.verdict.into();
            }
        }
        Command::SearchFermat => search(&mut doc, cli, require_q(&ctx)?)?,
    }
    Ok(doc)
}

fn radical(doc: &mut ReportDocument, expr: &str, mu: Option<usize>, ctx: &QContext) -> Result<()> {
    let op = operand(expr, Some(ctx))?;
    let rad = rad_q_operand(&op, ctx)?;
    doc.quantity("poly", op.dense())
        .quantity("rad_q", &rad)
        .quantity("rad_q_degree", rad.deg())
        .quantity("classical_rad", classical_rad(&op.dense())?);
    if let Some(mu) = mu {
        let trunc = rad_q_trunc_operand(&op, mu, ctx)?;
        doc.quantity("mu", mu)
            .quantity("rad_q_trunc", &trunc)
            .quantity("rad_q_trunc_degree", trunc.deg())
            .quantity("gcd_tower", gcd_tower_dense(&op.dense(), mu, ctx)?);
    }
    let dec = decompose_operand(&op, ctx)?;
    doc.flag("splits", dec.is_some());
    if let Some(dec) = dec {
        doc.quantity("lead", &dec.lead);
        doc.payload = json!({ "chains": chains_json(&dec) });
    }
    Ok(())
}

fn search(doc: &mut ReportDocument, cli: &Cli, ctx: &QContext) -> Result<()> {
    let n = cli.n.ok_or_else(|| Error::InvalidArgument("search-fermat needs --n".into()))?;
    let mode = match cli.m {
        Some(m) => FermatMode::MultiTerm { m },
        None => FermatMode::TwoTerm,
    };
    let coeffs = parse_coeff_set(cli.coeff.as_deref().unwrap_or("-2..2"))?;
    let params = FermatSearchParams::new(n, mode, cli.max_deg.unwrap_or(1), coeffs, cli.budget)?;
    let cert = fermat_search(&params, ctx, threads(cli))?;
    doc.quantity("n", n)
        .quantity("total", cert.total)
        .quantity("examined", cert.examined)
        .quantity("premise_passing", cert.premise_passing)
        .quantity("solutions", cert.solutions.len())
        .flag("complete", cert.complete)
        .flag("solutions_found", !cert.solutions.is_empty());
    doc.verdict = if cert.counterexample().is_some() { Verdict::Violated } else { Verdict::Holds }.into();
    doc.payload = json!({ "certificate": certificate_json(&cert) });
    Ok(())
}

/// Certificate as JSON with every number rendered as a string.
pub fn certificate_json(cert: &FermatCertificate) -> Value {
    let p = &cert.params;
    let (mode, m) = match p.mode {
        FermatMode::TwoTerm => ("two-term", 2),
        FermatMode::MultiTerm { m } => ("multi-term", m),
    };
    json!({
        "q": cert.q.to_string(),
        "n": p.n.to_string(),
        "mode": mode,
        "m": m.to_string(),
        "max_deg": p.max_deg.to_string(),
        "coeffs": p.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "budget": p.budget.map(|b| b.to_string()),
        "total": cert.total.to_string(),
        "examined": cert.examined.to_string(),
        "filtered": cert.filtered.iter().map(|f| json!({
            "premise": f.premise,
            "rejected": f.rejected.to_string(),
        })).collect::<Vec<_>>(),
        "premise_passing": cert.premise_passing.to_string(),
        "equation_only": cert.equation_only.to_string(),
        "complete": cert.complete,
        "outcome": if cert.solutions.is_empty() { "none-found" } else { "solutions-found" },
        "solutions": cert.solutions.iter().map(|s| json!({
            "index": s.index.to_string(),
            "polys": s.polys.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "consistent": s.consistent,
        })).collect::<Vec<_>>(),
    })
}
