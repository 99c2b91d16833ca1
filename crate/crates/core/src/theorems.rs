//! Premise-checking verifiers for the q-difference Stothers-Mason theorem,
//! its `m + 1` term extension and the q-Fermat nonexistence results, plus
//! an exhaustive certificate-producing search for q-Fermat solutions.
//!
//! A failed premise never raises an error: the report is still fully
//! populated and its verdict is [`Verdict::NotApplicable`], so callers can
//! tell a vacuous instance from a verified one.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::casorati::{coefficient_rank_full, independence_report, CasoratiInput, IndependenceReport};
use crate::error::{Error, Result};
use crate::field::{GaussianRational, Rational};
use crate::poly::{euclid_gcd, DensePoly, FactoredPoly, Operand};
use crate::qcore::QContext;
use crate::radical::{
    classical_rad, common_q_divisor_operands, decompose_operand, rad_q_operand, rad_q_trunc_operand,
    relatively_q_prime_operands, QChain, QPrimeReport,
};

type Gr = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Premises hold and so does the conclusion.
    Holds,
    /// Premises hold and the conclusion fails: a counterexample.
    Violated,
    /// Some premise fails; nothing is asserted.
    NotApplicable,
}

impl Verdict {
    fn from_parts(premises: &[Premise], conclusion: bool) -> Self {
        match (premises.iter().all(|p| p.holds), conclusion) {
            (true, true) => Verdict::Holds,
            (true, false) => Verdict::Violated,
            (false, _) => Verdict::NotApplicable,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premise {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

impl Premise {
    fn new(name: &'static str, holds: bool) -> Self {
        Premise { name, holds, witness: None }
    }

    fn with_witness(name: &'static str, holds: bool, witness: impl FnOnce() -> String) -> Self {
        Premise { name, holds, witness: (!holds).then(witness) }
    }
}

fn q_prime_premise(name: &'static str, report: &QPrimeReport) -> Premise {
    Premise {
        name,
        holds: report.holds,
        witness: report
            .witness
            .as_ref()
            .map(|w| format!("polynomials {} and {} share q-divisor {}", w.first + 1, w.second + 1, w.divisor)),
    }
}

fn sum_premise(lhs: &DensePoly, rhs: &DensePoly) -> Premise {
    Premise::with_witness("sum-identity", lhs == rhs, || format!("left - right = {}", lhs - rhs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasonReport {
    pub premises: Vec<Premise>,
    pub max_deg: usize,
    pub rad_deg: usize,
    /// `max_deg <= rad_deg - 1`, evaluated whether or not premises hold.
    pub inequality_holds: bool,
    pub sharp: bool,
    pub verdict: Verdict,
    /// The radical of `abc` (q-difference or classical).
    pub radical: DensePoly,
    /// Chain decomposition of `abc` when it splits over Q(i).
    pub chains: Option<Vec<QChain>>,
}

fn mason_inequality(max_deg: usize, rad_deg: usize) -> (bool, bool) {
    (max_deg < rad_deg, max_deg + 1 == rad_deg)
}

/// q-difference Stothers-Mason check for `a + b = c`.
pub fn verify_mason_q(a: &Operand, b: &Operand, c: &Operand, ctx: &QContext) -> Result<MasonReport> {
    ctx.require_admissible()?;
    let ops = [a.clone(), b.clone(), c.clone()];
    let qprime = relatively_q_prime_operands(&ops, ctx)?;
    let premises = vec![
        Premise::new("q-admissible", true),
        sum_premise(&(&a.dense() + &b.dense()), &c.dense()),
        q_prime_premise("relatively-q-prime", &qprime),
        Premise::new("not-all-constant", ops.iter().any(|p| !p.is_constant())),
    ];
    let product = Operand::product(&ops);
    let radical = rad_q_operand(&product, ctx)?;
    let chains = decompose_operand(&product, ctx)?.map(|d| d.chains);
    let max_deg = ops.iter().map(Operand::degree).max().unwrap_or(0);
    let rad_deg = radical.deg();
    let (inequality_holds, sharp) = mason_inequality(max_deg, rad_deg);
    Ok(MasonReport {
        verdict: Verdict::from_parts(&premises, inequality_holds),
        premises,
        max_deg,
        rad_deg,
        inequality_holds,
        sharp,
        radical,
        chains,
    })
}

/// Classical Stothers-Mason check, for comparison with [`verify_mason_q`].
pub fn verify_mason_classical(a: &DensePoly, b: &DensePoly, c: &DensePoly) -> Result<MasonReport> {
    let polys = [a, b, c];
    let nonzero = polys.iter().all(|p| !p.is_zero());
    let mut coprime = Premise::new("coprime", nonzero);
    if nonzero {
        'pairs: for i in 0..3 {
            for j in i + 1..3 {
                let g = euclid_gcd(polys[i], polys[j])?;
                if !g.is_constant() {
                    coprime = Premise {
                        name: "coprime",
                        holds: false,
                        witness: Some(format!("polynomials {} and {} share factor {g}", i + 1, j + 1)),
                    };
                    break 'pairs;
                }
            }
        }
    }
    let premises = vec![
        Premise::new("nonzero", nonzero),
        sum_premise(&(a + b), c),
        coprime,
        Premise::new("not-all-constant", polys.iter().any(|p| !p.is_constant())),
    ];
    let product = &(a * b) * c;
    let radical = if product.is_constant() { DensePoly::one() } else { classical_rad(&product)? };
    let max_deg = polys.iter().map(|p| p.deg()).max().unwrap_or(0);
    let rad_deg = radical.deg();
    let (inequality_holds, sharp) = mason_inequality(max_deg, rad_deg);
    Ok(MasonReport {
        verdict: Verdict::from_parts(&premises, inequality_holds),
        premises,
        max_deg,
        rad_deg,
        inequality_holds,
        sharp,
        radical,
        chains: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedReport {
    pub m: usize,
    pub premises: Vec<Premise>,
    pub independence: IndependenceReport,
    /// `max deg f_i`.
    pub lhs: usize,
    /// `deg rad_q^{m-1}(f_1 ... f_{m+1})`.
    pub trunc_rad_deg: usize,
    /// `deg rad_q(f_1 ... f_{m+1})`.
    pub rad_deg: usize,
    pub rhs_trunc: i64,
    pub rhs_rad: i64,
    pub trunc_holds: bool,
    pub rad_holds: bool,
    pub both_hold: bool,
    /// `lhs == rhs_trunc`.
    pub sharp: bool,
    pub verdict: Verdict,
}

/// Check of the `m + 1` term inequality for `f_1 + ... + f_m = f_{m+1}`.
pub fn verify_mason_extended(fs: &[Operand], ctx: &QContext) -> Result<ExtendedReport> {
    ctx.require_admissible()?;
    if fs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "the extended theorem needs at least 3 polynomials, got {}",
            fs.len()
        )));
    }
    let m = fs.len() - 1;
    let dense: Vec<DensePoly> = fs.iter().map(Operand::dense).collect();
    let sum = dense[..m].iter().fold(DensePoly::zero(), |acc, p| &acc + p);
    let min_deg = fs.iter().map(Operand::degree).min().unwrap_or(0);
    let independence = independence_report(&CasoratiInput::new(dense[..m].to_vec(), ctx.clone())?)?;
    let qprime = relatively_q_prime_operands(fs, ctx)?;
    let premises = vec![
        Premise::new("q-admissible", true),
        sum_premise(&sum, &dense[m]),
        q_prime_premise("pairwise-relatively-q-prime", &qprime),
        Premise::with_witness("min-degree", min_deg + 1 >= m, || {
            format!("min degree {min_deg} < m - 1 = {}", m - 1)
        }),
        Premise::with_witness("linearly-independent", independence.coefficient_rank_full, || {
            format!("f_1..f_{m} are linearly dependent over the constants")
        }),
    ];

    let product = Operand::product(fs);
    let trunc_rad_deg = rad_q_trunc_operand(&product, m - 1, ctx)?.deg();
    let rad_deg = rad_q_operand(&product, ctx)?.deg();
    let correction = (m * (m - 1) / 2) as i64;
    let lhs = fs.iter().map(Operand::degree).max().unwrap_or(0);
    let rhs_trunc = trunc_rad_deg as i64 - correction;
    let rhs_rad = (m as i64 - 1) * rad_deg as i64 - correction;
    let trunc_holds = lhs as i64 <= rhs_trunc;
    let rad_holds = lhs as i64 <= rhs_rad;
    let both_hold = trunc_holds && rad_holds;
    Ok(ExtendedReport {
        m,
        verdict: Verdict::from_parts(&premises, both_hold),
        premises,
        independence,
        lhs,
        trunc_rad_deg,
        rad_deg,
        rhs_trunc,
        rhs_rad,
        trunc_holds,
        rad_holds,
        both_hold,
        sharp: lhs as i64 == rhs_trunc,
    })
}

/// `[p]_q^n = p(z) p(qz) ... p(q^{n-1} z)`.
pub fn q_fermat_power(p: &DensePoly, n: u32, ctx: &QContext) -> Result<DensePoly> {
    require_positive(n)?;
    (0..n).try_fold(DensePoly::one(), |acc, i| Ok(&acc * &p.scale_arg(&ctx.q_pow(i64::from(i)))?))
}

/// Factored `[f]_q^n`: the roots of `f(q^i z)` are `q^{-i}` times those of `f`.
pub fn q_fermat_power_factored(f: &FactoredPoly, n: u32, ctx: &QContext) -> Result<FactoredPoly> {
    require_positive(n)?;
    (0..n).try_fold(FactoredPoly::one(), |acc, i| Ok(&acc * &f.scale_arg(&ctx.q_pow(i64::from(i)))?))
}

pub fn q_fermat_power_operand(op: &Operand, n: u32, ctx: &QContext) -> Result<Operand> {
    Ok(match op {
        Operand::Factored(f) => Operand::Factored(q_fermat_power_factored(f, n, ctx)?),
        Operand::Dense(p) => Operand::Dense(q_fermat_power(p, n, ctx)?),
    })
}

fn require_positive(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("the q-Fermat power needs n >= 1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatReport {
    pub n: u32,
    pub premises: Vec<Premise>,
    pub powered: Vec<Operand>,
    /// `lhs - rhs` of the functional equation; zero when it holds.
    pub residual: DensePoly,
    pub equation_holds: bool,
    /// Whether the instance agrees with the theorem's conclusion.
    pub consistent: bool,
    pub verdict: Verdict,
}

/// Conclusion of the two-term q-Fermat theorem for exponent `n` given
/// whether one of `a, b, c` is constant.
pub fn fermat_conclusion(n: u32, some_constant: bool) -> bool {
    n <= 2 && (!some_constant || n == 1)
}

/// Checks `[a]_q^n + [b]_q^n = [c]_q^n` against the two-term theorem.
pub fn verify_fermat_instance(a: &Operand, b: &Operand, c: &Operand, n: u32, ctx: &QContext) -> Result<FermatReport> {
    ctx.require_admissible()?;
    let bases = [a, b, c];
    let powered = bases
        .iter()
        .map(|op| q_fermat_power_operand(op, n, ctx))
        .collect::<Result<Vec<_>>>()?;
    let residual = &(&powered[0].dense() + &powered[1].dense()) - &powered[2].dense();
    let qprime = relatively_q_prime_operands(&powered, ctx)?;
    let premises = vec![
        Premise::new("q-admissible", true),
        Premise::new("not-all-constant", bases.iter().any(|p| !p.is_constant())),
        q_prime_premise("powered-relatively-q-prime", &qprime),
        Premise::with_witness("equation", residual.is_zero(), || format!("left - right = {residual}")),
    ];
    let consistent = fermat_conclusion(n, bases.iter().any(|p| p.is_constant()));
    Ok(FermatReport {
        n,
        verdict: Verdict::from_parts(&premises, consistent),
        equation_holds: residual.is_zero(),
        premises,
        powered,
        residual,
        consistent,
    })
}

/// `m^2 - 1 - m(m-1) / (2 max_deg)`, exactly.
pub fn multi_fermat_bound(m: usize, max_deg: usize) -> Result<Rational> {
    if max_deg == 0 {
        return Err(Error::InvalidArgument("the multi-term bound needs a nonconstant polynomial".into()));
    }
    let m = BigInt::from(m);
    let whole = Rational::from_integer(&m * &m - 1);
    let sub = Rational::new(&m * (&m - 1), BigInt::from(2 * max_deg));
    Ok(whole - sub)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFermatReport {
    pub m: usize,
    pub n: u32,
    pub premises: Vec<Premise>,
    pub max_deg: usize,
    /// `None` when every polynomial is constant.
    pub bound: Option<Rational>,
    pub bound_holds: bool,
    pub verdict: Verdict,
}

/// Checks `[f_1]^n + ... + [f_m]^n = [f_{m+1}]^n` against the bound
/// `n <= m^2 - 1 - m(m-1)/(2 max deg f_i)`.
pub fn verify_fermat_multi_bound(fs: &[Operand], n: u32, ctx: &QContext) -> Result<MultiFermatReport> {
    ctx.require_admissible()?;
    if fs.len() < 3 {
        return Err(Error::InvalidArgument(format!("the multi-term theorem needs at least 3 polynomials, got {}", fs.len())));
    }
    let m = fs.len() - 1;
    let powered = fs
        .iter()
        .map(|op| q_fermat_power_operand(op, n, ctx))
        .collect::<Result<Vec<_>>>()?;
    let dense: Vec<DensePoly> = powered.iter().map(Operand::dense).collect();
    let sum = dense[..m].iter().fold(DensePoly::zero(), |acc, p| &acc + p);
    let qprime = relatively_q_prime_operands(&powered, ctx)?;
    let premises = vec![
        Premise::new("q-admissible", true),
        Premise::new("nonconstant", fs.iter().all(|p| !p.is_constant())),
        Premise::with_witness("equation", sum == dense[m], || format!("left - right = {}", &sum - &dense[m])),
        q_prime_premise("powered-pairwise-relatively-q-prime", &qprime),
        Premise::new("powered-linearly-independent", coefficient_rank_full(&dense[..m])),
    ];
    let max_deg = fs.iter().map(Operand::degree).max().unwrap_or(0);
    let bound = multi_fermat_bound(m, max_deg).ok();
    let bound_holds = bound.as_ref().is_some_and(|b| Rational::from_integer(n.into()) <= *b);
    Ok(MultiFermatReport {
        m,
        n,
        verdict: Verdict::from_parts(&premises, bound_holds),
        premises,
        max_deg,
        bound,
        bound_holds,
    })
}

/// Which functional equation the search enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FermatMode {
    /// `[a]^n + [b]^n = [c]^n` with the two-term premises.
    TwoTerm,
    /// `[f_1]^n + ... + [f_m]^n = [f_{m+1}]^n` with the multi-term premises.
    MultiTerm { m: usize },
}

impl FermatMode {
    pub fn arity(self) -> usize {
        match self {
            FermatMode::TwoTerm => 3,
            FermatMode::MultiTerm { m } => m + 1,
        }
    }

    fn premise_names(self) -> &'static [&'static str] {
        match self {
            FermatMode::TwoTerm => &["nonzero", "not-all-constant", "powered-relatively-q-prime"],
            FermatMode::MultiTerm { .. } => &[
                "nonzero",
                "nonconstant",
                "powered-pairwise-relatively-q-prime",
                "powered-linearly-independent",
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatSearchParams {
    pub n: u32,
    pub mode: FermatMode,
    pub max_deg: usize,
    /// Sorted and deduplicated by [`FermatSearchParams::new`].
    pub coeffs: Vec<Gr>,
    /// Examine at most this many candidates, in enumeration order.
    pub budget: Option<u64>,
}

impl FermatSearchParams {
    pub fn new(n: u32, mode: FermatMode, max_deg: usize, mut coeffs: Vec<Gr>, budget: Option<u64>) -> Result<Self> {
        require_positive(n)?;
        if let FermatMode::MultiTerm { m } = mode {
            if m < 2 {
                return Err(Error::InvalidArgument(format!("multi-term search needs m >= 2, got {m}")));
            }
        }
        coeffs.sort();
        coeffs.dedup();
        Ok(FermatSearchParams { n, mode, max_deg, coeffs, budget })
    }

    /// Number of polynomials per slot: `|coeffs|^(max_deg + 1)`.
    pub fn poly_count(&self) -> Result<u64> {
        u32::try_from(self.max_deg + 1)
            .ok()
            .and_then(|e| (self.coeffs.len() as u64).checked_pow(e))
            .ok_or_else(|| Error::InvalidArgument("search space too large".into()))
    }

    pub fn candidate_count(&self) -> Result<u64> {
        self.poly_count()?
            .checked_pow(self.mode.arity() as u32)
            .ok_or_else(|| Error::InvalidArgument("search space too large".into()))
    }

    /// Polynomial number `idx`: coefficient vectors `(c_0, ..., c_d)` in
    /// lexicographic order over the sorted coefficient set.
    pub fn poly_at(&self, mut idx: u64) -> DensePoly {
        let base = self.coeffs.len() as u64;
        let mut coeffs = vec![Gr::zero(); self.max_deg + 1];
        for slot in coeffs.iter_mut().rev() {
            *slot = self.coeffs[(idx % base) as usize].clone();
            idx /= base;
        }
        DensePoly::new(coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterCount {
    pub premise: &'static str,
    pub rejected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatSolution {
    /// Position in the enumeration order.
    pub index: u64,
    pub polys: Vec<DensePoly>,
    /// Whether the solution agrees with the theorem for this mode.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FermatOutcome {
    SolutionsFound,
    NoneFound,
}

/// Replayable record of an exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatCertificate {
    pub params: FermatSearchParams,
    pub q: Gr,
    pub total: u64,
    pub examined: u64,
    /// Candidates rejected at each premise, in the order premises are applied.
    pub filtered: Vec<FilterCount>,
    pub premise_passing: u64,
    /// Candidates that satisfy the equation but fail some premise.
    pub equation_only: u64,
    pub solutions: Vec<FermatSolution>,
    pub complete: bool,
}

impl FermatCertificate {
    pub fn outcome(&self) -> FermatOutcome {
        if self.solutions.is_empty() {
            FermatOutcome::NoneFound
        } else {
            FermatOutcome::SolutionsFound
        }
    }

    /// A solution that contradicts the theorem, if any.
    pub fn counterexample(&self) -> Option<&FermatSolution> {
        self.solutions.iter().find(|s| !s.consistent)
    }

    /// Re-runs the search and compares.
    pub fn replay(&self, threads: usize) -> Result<bool> {
        let ctx = QContext::new(self.q.clone())?;
        Ok(fermat_search(&self.params, &ctx, threads)? == *self)
    }
}

struct Candidate {
    dense: DensePoly,
    powered_dense: DensePoly,
    powered: Option<Operand>,
}

struct SearchTables<'a> {
    params: &'a FermatSearchParams,
    ctx: &'a QContext,
    polys: Vec<Candidate>,
    qprime: Vec<OnceLock<bool>>,
}

impl SearchTables<'_> {
    fn q_prime(&self, i: usize, j: usize) -> Result<bool> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let cell = &self.qprime[i * self.polys.len() + j];
        if let Some(&v) = cell.get() {
            return Ok(v);
        }
        let (Some(a), Some(b)) = (&self.polys[i].powered, &self.polys[j].powered) else {
            return Ok(false);
        };
        let v = common_q_divisor_operands(a, b, self.ctx)?.is_none();
        Ok(*cell.get_or_init(|| v))
    }

    /// Index of the first failing premise, or `None` when all pass.
    fn first_failure(&self, idx: &[usize]) -> Result<Option<usize>> {
        let polys: Vec<&Candidate> = idx.iter().map(|&i| &self.polys[i]).collect();
        if polys.iter().any(|p| p.dense.is_zero()) {
            return Ok(Some(0));
        }
        let constant = |p: &&Candidate| p.dense.is_constant();
        let degree_ok = match self.params.mode {
            FermatMode::TwoTerm => !polys.iter().all(constant),
            FermatMode::MultiTerm { .. } => !polys.iter().any(constant),
        };
        if !degree_ok {
            return Ok(Some(1));
        }
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                if !self.q_prime(idx[a], idx[b])? {
                    return Ok(Some(2));
                }
            }
        }
        if let FermatMode::MultiTerm { m } = self.params.mode {
            let powered: Vec<DensePoly> = polys[..m].iter().map(|p| p.powered_dense.clone()).collect();
            if !coefficient_rank_full(&powered) {
                return Ok(Some(3));
            }
        }
        Ok(None)
    }

    fn equation_holds(&self, idx: &[usize]) -> bool {
        let (last, rest) = idx.split_last().expect("nonempty tuple");
        let sum = rest
            .iter()
            .fold(DensePoly::zero(), |acc, &i| &acc + &self.polys[i].powered_dense);
        sum == self.polys[*last].powered_dense
    }

    fn consistent(&self, idx: &[usize]) -> bool {
        let n = self.params.n;
        match self.params.mode {
            FermatMode::TwoTerm => {
                fermat_conclusion(n, idx.iter().any(|&i| self.polys[i].dense.is_constant()))
            }
            FermatMode::MultiTerm { m } => {
                let max_deg = idx.iter().map(|&i| self.polys[i].dense.deg()).max().unwrap_or(0);
                multi_fermat_bound(m, max_deg)
                    .map(|b| Rational::from_integer(n.into()) <= b)
                    .unwrap_or(false)
            }
        }
    }
}

#[derive(Default)]
struct BlockTally {
    examined: u64,
    filtered: Vec<u64>,
    premise_passing: u64,
    equation_only: u64,
    solutions: Vec<FermatSolution>,
}

fn decode(mut index: u64, base: u64, arity: usize) -> Vec<usize> {
    let mut idx = vec![0usize; arity];
    for slot in idx.iter_mut().rev() {
        *slot = (index % base) as usize;
        index /= base;
    }
    idx
}

fn run_block(tables: &SearchTables<'_>, range: std::ops::Range<u64>, base: u64) -> Result<BlockTally> {
    let arity = tables.params.mode.arity();
    let mut tally = BlockTally { filtered: vec![0; tables.params.mode.premise_names().len()], ..Default::default() };
    for index in range {
        tally.examined += 1;
        let idx = decode(index, base, arity);
        let failure = tables.first_failure(&idx)?;
        let nonzero = failure != Some(0);
        let equation = nonzero && tables.equation_holds(&idx);
        match failure {
            Some(k) => {
                tally.filtered[k] += 1;
                if equation {
                    tally.equation_only += 1;
                }
            }
            None => {
                tally.premise_passing += 1;
                if equation {
                    tally.solutions.push(FermatSolution {
                        index,
                        polys: idx.iter().map(|&i| tables.polys[i].dense.clone()).collect(),
                        consistent: tables.consistent(&idx),
                    });
                }
            }
        }
    }
    Ok(tally)
}

/// Exhaustive search over tuples of polynomials with degree at most
/// `max_deg` and coefficients from the given set.
///
/// Tuples are enumerated lexicographically by polynomial index (see
/// [`FermatSearchParams::poly_at`]), first slot most significant. The
/// space is cut into blocks by the first slot; blocks run on up to
/// `threads` workers and are merged in block order, so the certificate
/// does not depend on `threads`. A budget keeps only a prefix of the
/// enumeration and marks the certificate incomplete.
pub fn fermat_search(params: &FermatSearchParams, ctx: &QContext, threads: usize) -> Result<FermatCertificate> {
    ctx.require_admissible()?;
    let base = params.poly_count()?;
    let total = params.candidate_count()?;
    let examined = params.budget.map_or(total, |b| b.min(total));
    if base > 4096 {
        return Err(Error::InvalidArgument(format!("{base} polynomials per slot is beyond desk scale")));
    }

    let polys = (0..base)
        .map(|i| {
            let dense = params.poly_at(i);
            let (powered_dense, powered) = if dense.is_zero() {
                (DensePoly::zero(), None)
            } else {
                let op = q_fermat_power_operand(&Operand::from_dense(dense.clone())?, params.n, ctx)?;
                (op.dense(), Some(op))
            };
            Ok(Candidate { dense, powered_dense, powered })
        })
        .collect::<Result<Vec<_>>>()?;
    let tables = SearchTables {
        params,
        ctx,
        qprime: (0..base * base).map(|_| OnceLock::new()).collect(),
        polys,
    };

    let block = total / base.max(1);
    let blocks: Vec<std::ops::Range<u64>> = (0..base)
        .map(|b| (b * block).min(examined)..((b + 1) * block).min(examined))
        .filter(|r| !r.is_empty())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let tallies: Vec<BlockTally> = pool.install(|| {
        blocks
            .par_iter()
            .map(|r| run_block(&tables, r.clone(), base))
            .collect::<Result<Vec<_>>>()
    })?;

    let names = params.mode.premise_names();
    let mut cert = FermatCertificate {
        params: params.clone(),
        q: ctx.q().clone(),
        total,
        examined: 0,
        filtered: names.iter().map(|&premise| FilterCount { premise, rejected: 0 }).collect(),
        premise_passing: 0,
        equation_only: 0,
        solutions: Vec::new(),
        complete: examined == total,
    };
    for t in tallies {
        cert.examined += t.examined;
        for (slot, n) in cert.filtered.iter_mut().zip(t.filtered) {
            slot.rejected += n;
        }
        cert.premise_passing += t.premise_passing;
        cert.equation_only += t.equation_only;
        cert.solutions.extend(t.solutions);
    }
    debug_assert_eq!(cert.examined, examined);
    Ok(cert)
}

/// True when `r` is an integer.
pub fn is_integral(r: &Rational) -> bool {
    r.is_integer() && !r.denom().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{q_binomial, q_number, q_pow_factor};

    fn g(s: &str) -> Gr {
        s.parse().unwrap()
    }

    fn ctx(s: &str) -> QContext {
        QContext::new(g(s)).unwrap()
    }

    fn fac(lead: &str, roots: &[&str]) -> Operand {
        Operand::Factored(FactoredPoly::new(g(lead), roots.iter().map(|r| g(r)).collect()).unwrap())
    }

    #[test]
    fn fermat_powers() {
        let two = ctx("2");
        assert_eq!(q_fermat_power(&DensePoly::z(), 3, &two).unwrap(), DensePoly::monomial(g("8"), 3));
        let p = DensePoly::from_ints(&[4, -1, 3]);
        assert_eq!(q_fermat_power(&p, 1, &two).unwrap(), p);
        assert_eq!(q_fermat_power(&DensePoly::from_ints(&[-1, 1]), 2, &two).unwrap(), DensePoly::from_ints(&[1, -3, 2]));
        assert!(q_fermat_power(&p, 0, &two).is_err());
        let f = FactoredPoly::monic_from_roots(vec![g("2")]);
        let pf = q_fermat_power_factored(&f, 2, &two).unwrap();
        assert_eq!(pf.roots(), &[g("1"), g("2")]);
        assert_eq!(pf.expand(), q_fermat_power(&f.expand(), 2, &two).unwrap());
    }

    #[test]
    fn mason_sharp_example() {
        let two = ctx("2");
        let a = fac("1", &["1", "2"]);
        let b = fac("-1", &["-1", "-2"]);
        let c = fac("-6", &["0"]);
        let r = verify_mason_q(&a, &b, &c, &two).unwrap();
        assert!(r.premises.iter().all(|p| p.holds), "{:?}", r.premises);
        assert_eq!((r.max_deg, r.rad_deg, r.inequality_holds, r.sharp), (2, 3, true, true));
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.radical, DensePoly::from_ints(&[0, -1, 0, 1]));
    }

    #[test]
    fn mason_shared_root_example() {
        let two = ctx("2");
        let a = fac("1", &["1"]);
        let c = fac("2", &["1"]);
        let r = verify_mason_q(&a, &a, &c, &two).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!((r.max_deg, r.rad_deg, r.sharp), (1, 3, false));
    }

    #[test]
    fn mason_constants_and_bad_sum() {
        let two = ctx("2");
        let r = verify_mason_q(&fac("1", &[]), &fac("2", &[]), &fac("3", &[]), &two).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(!r.premises.iter().find(|p| p.name == "not-all-constant").unwrap().holds);
        let r = verify_mason_q(&fac("1", &["1"]), &fac("1", &["3"]), &fac("1", &["5"]), &two).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(verify_mason_q(&fac("1", &["1"]), &fac("1", &["3"]), &fac("1", &["5"]), &ctx("-1")).is_err());
    }

    #[test]
    fn classical_mason() {
        let a = DensePoly::from_ints(&[1, -2, 1]);
        let b = DensePoly::from_ints(&[0, 4]);
        let c = DensePoly::from_ints(&[1, 2, 1]);
        let r = verify_mason_classical(&a, &b, &c).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!((r.max_deg, r.rad_deg, r.sharp), (2, 3, true));
        let f = DensePoly::from_ints(&[-1, 1]);
        let r = verify_mason_classical(&f, &f, &f.scale(&g("2"))).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        let one = DensePoly::one();
        let r = verify_mason_classical(&one, &one, &one.scale(&g("2"))).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    fn section4_tuple(q: &QContext) -> Vec<Operand> {
        let f1 = q_pow_factor(&g("1"), 5, q);
        let f2 = -&q_pow_factor(&g("-1"), 5, q);
        let f3 = FactoredPoly::new(q_number(5, q) * g("2"), vec![g("0"); 4]).unwrap();
        let f4 = &(&f1.expand() + &f2.expand()) + &f3.expand();
        vec![f1.into(), f2.into(), f3.into(), Operand::from_dense(f4).unwrap()]
    }

    #[test]
    fn extended_example() {
        let two = ctx("2");
        let fs = section4_tuple(&two);
        assert_eq!(fs[3].dense(), DensePoly::from_ints(&[-2048, 0, -2480]));
        let r = verify_mason_extended(&fs, &two).unwrap();
        assert!(r.premises.iter().all(|p| p.holds), "{:?}", r.premises);
        assert_eq!((r.m, r.lhs, r.trunc_rad_deg, r.rhs_trunc), (3, 5, 8, 5));
        assert_eq!((r.rad_deg, r.rhs_rad), (5, 7));
        assert!(r.both_hold && r.sharp);
        assert_eq!(r.verdict, Verdict::Holds);
        // closed form -2 q^3 [5 2]_q z^2 - 2 q^10 for other q
        for q in ["3", "1/2", "2+i"] {
            let q = ctx(q);
            let fs = section4_tuple(&q);
            let expected = DensePoly::new(vec![
                -(g("2") * q.q_pow(10)),
                g("0"),
                -(g("2") * q.q_pow(3) * q_binomial(5, 2, &q).unwrap()),
            ]);
            assert_eq!(fs[3].dense(), expected);
        }
    }

    #[test]
    fn extended_premise_failures() {
        let two = ctx("2");
        let f = fac("1", &["1", "3"]);
        let scaled = |c: &str| Operand::Factored(f.factored().unwrap().scale(&g(c)).unwrap());
        let r = verify_mason_extended(&[f.clone(), scaled("2"), scaled("3"), scaled("6")], &two).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(!r.premises.iter().find(|p| p.name == "linearly-independent").unwrap().holds);
        // m = 3 needs degrees >= 2; z - 1, z - 3, ...
        let r = verify_mason_extended(
            &[fac("1", &["1"]), fac("1", &["3"]), fac("-1", &["5"]), fac("1", &["-1"])],
            &two,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(!r.premises.iter().find(|p| p.name == "min-degree").unwrap().holds);
        assert!(verify_mason_extended(&[fac("1", &["1"]), fac("1", &["2"])], &two).is_err());
    }

    #[test]
    fn fermat_instances() {
        let two = ctx("2");
        let r = verify_fermat_instance(&fac("1", &["0"]), &fac("1", &[]), &fac("1", &["-1"]), 1, &two).unwrap();
        assert!(r.premises.iter().all(|p| p.holds), "{:?}", r.premises);
        assert_eq!(r.verdict, Verdict::Holds);
        let r = verify_fermat_instance(&fac("1", &["0"]), &fac("1", &[]), &fac("1", &["-1"]), 3, &two).unwrap();
        assert!(!r.equation_holds);
        assert!(!r.residual.is_zero());
        assert_eq!(r.verdict, Verdict::NotApplicable);
        let r = verify_fermat_instance(&fac("1", &["2"]), &fac("1", &[]), &fac("1", &["-1"]), 2, &two).unwrap();
        assert_eq!(r.powered[0].factored().unwrap().roots(), &[g("1"), g("2")]);
    }

    #[test]
    fn multi_bound() {
        assert_eq!(multi_fermat_bound(2, 1).unwrap(), Rational::from_integer(2.into()));
        assert_eq!(multi_fermat_bound(3, 2).unwrap(), Rational::new(13.into(), 2.into()));
        let mut prev = multi_fermat_bound(4, 1).unwrap();
        for d in 2..20 {
            let b = multi_fermat_bound(4, d).unwrap();
            assert!(b > prev && b < Rational::from_integer(15.into()));
            prev = b;
        }
        assert!(multi_fermat_bound(2, 0).is_err());
        let two = ctx("2");
        let r = verify_fermat_multi_bound(&[fac("1", &["1"]), fac("1", &[]), fac("1", &["0"])], 1, &two).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(!r.premises.iter().find(|p| p.name == "nonconstant").unwrap().holds);
        // z + (z + 1) ... n = 1 instance: (z - 1) + (z + 1) - ... pick f1 = z + 1, f2 = z - 3, f3 = 2z - 2
        let r = verify_fermat_multi_bound(&[fac("1", &["-1"]), fac("1", &["3"]), fac("2", &["1"])], 1, &two).unwrap();
        assert!(r.premises.iter().all(|p| p.holds), "{:?}", r.premises);
        assert_eq!(r.bound, Some(Rational::from_integer(2.into())));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    fn grid(lo: i64, hi: i64) -> Vec<Gr> {
        (lo..=hi).map(Gr::from_int).collect()
    }

    #[test]
    fn search_small_grids() {
        let two = ctx("2");
        let p = FermatSearchParams::new(1, FermatMode::TwoTerm, 1, grid(-1, 1), None).unwrap();
        let cert = fermat_search(&p, &two, 2).unwrap();
        assert_eq!(cert.outcome(), FermatOutcome::SolutionsFound);
        assert!(cert.complete);
        assert_eq!(cert.examined, 729);
        let z = DensePoly::z();
        let want = vec![z.clone(), DensePoly::one(), &z + &DensePoly::one()];
        assert!(cert.solutions.iter().any(|s| s.polys == want));
        assert!(cert.counterexample().is_none());

        let empty = FermatSearchParams::new(3, FermatMode::TwoTerm, 1, vec![], None).unwrap();
        let cert = fermat_search(&empty, &two, 1).unwrap();
        assert_eq!((cert.outcome(), cert.examined), (FermatOutcome::NoneFound, 0));
    }

    #[test]
    fn search_budget_and_determinism() {
        let two = ctx("2");
        let p = FermatSearchParams::new(1, FermatMode::TwoTerm, 1, grid(-1, 1), Some(300)).unwrap();
        let a = fermat_search(&p, &two, 1).unwrap();
        let b = fermat_search(&p, &two, 3).unwrap();
        assert_eq!(a, b);
        assert!(!a.complete);
        assert_eq!(a.examined, 300);
        assert!(a.solutions.iter().all(|s| s.index < 300));
        assert!(a.replay(2).unwrap());
    }

    #[test]
    fn search_multi_term() {
        let two = ctx("2");
        let p = FermatSearchParams::new(1, FermatMode::MultiTerm { m: 2 }, 1, grid(-1, 1), None).unwrap();
        let cert = fermat_search(&p, &two, 2).unwrap();
        assert_eq!(cert.filtered.len(), 4);
        assert!(cert.solutions.iter().all(|s| s.consistent));
        assert!(FermatSearchParams::new(1, FermatMode::MultiTerm { m: 1 }, 1, grid(-1, 1), None).is_err());
    }

    #[test]
    fn degenerate_branch() {
        // b = lambda a, c = (1 + lambda) a: q-prime exactly when every chain of a has length 1
        let two = ctx("2");
        for (roots, simple) in [(&["1", "3"][..], true), (&["1", "2"][..], false), (&["1", "1", "5"][..], true), (&["-1", "-2", "7"][..], false)] {
            let a = FactoredPoly::monic_from_roots(roots.iter().map(|r| g(r)).collect());
            let b = a.scale(&g("3")).unwrap();
            let c = a.scale(&g("4")).unwrap();
            let r = verify_mason_q(&a.into(), &b.into(), &c.into(), &two).unwrap();
            assert_eq!(r.verdict == Verdict::Holds, simple, "roots {roots:?}");
            assert!(r.inequality_holds);
            if simple {
                assert_eq!(r.rad_deg, 3 * roots.len());
            }
        }
    }
}
