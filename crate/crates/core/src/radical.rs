//! q-weights of zeros, q-geometric chain decomposition and the
//! q-difference radical.
//!
//! A polynomial `P = A * prod [z - z_j]_q^{n_j}` is split into chains
//! `(z_j, n_j)`: maximal runs `z_j, q z_j, ..., q^{n_j - 1} z_j` of roots
//! whose head `z_j` has no predecessor `z_j / q` left among the roots.
//! The q-difference radical keeps one linear factor per chain; the
//! truncated radical of level `mu` keeps the first `min(n_j, mu)` roots of
//! every chain.
//!
//! Two routes are provided. The root route works on [`FactoredPoly`] and
//! peels chains off the root multiset. The algebraic route works on any
//! [`DensePoly`], including ones that do not split over Q(i), using gcds
//! of argument-scaled copies `P(q^k z)`: a root `w` with multiplicity
//! `c(w)` lies in the truncated radical of level `mu` with multiplicity
//! `c(w) - min(c(w), c(w/q), ..., c(w/q^mu))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::GaussianRational;
use crate::poly::{euclid_gcd, gcd_all, lcm, DensePoly, FactoredPoly, Operand};
use crate::qcore::QContext;

type Gr = GaussianRational;

/// One factor `[z - head]_q^length` of a chain decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QChain {
    pub head: Gr,
    pub length: usize,
}

impl QChain {
    pub fn roots(&self, ctx: &QContext) -> Vec<Gr> {
        self.prefix(self.length, ctx)
    }

    /// The first `n` roots `head, q*head, ...` of the chain.
    fn prefix(&self, n: usize, ctx: &QContext) -> Vec<Gr> {
        let mut out = Vec::with_capacity(n);
        let mut x = self.head.clone();
        for _ in 0..n.min(self.length) {
            out.push(x.clone());
            x = &x * ctx.q();
        }
        out
    }
}

impl fmt::Display for QChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.head, self.length)
    }
}

/// `lead * prod [z - head_j]_q^{length_j}`, chains ordered by head then by
/// length descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub lead: Gr,
    pub chains: Vec<QChain>,
}

impl ChainDecomposition {
    pub fn degree(&self) -> usize {
        self.chains.iter().map(|c| c.length).sum()
    }

    /// Expands every chain back into roots.
    pub fn reconstruct(&self, ctx: &QContext) -> FactoredPoly {
        let roots = self.chains.iter().flat_map(|c| c.roots(ctx)).collect();
        FactoredPoly::new(self.lead.clone(), roots).expect("nonzero lead")
    }

    /// Chains as a sorted multiset of `(head, length)` pairs.
    pub fn chain_multiset(&self) -> Vec<(Gr, usize)> {
        let mut v: Vec<_> = self.chains.iter().map(|c| (c.head.clone(), c.length)).collect();
        v.sort();
        v
    }

    pub fn radical_degree(&self) -> usize {
        self.chains.len()
    }

    pub fn truncated_degree(&self, mu: usize) -> usize {
        self.chains.iter().map(|c| c.length.min(mu)).sum()
    }
}

/// q-weight of a point: length of the vanishing run `z0, q z0, ...`
/// (multiplicity at `z0 = 0` or `q = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QWeight(pub usize);

fn require_weight_q(ctx: &QContext) -> Result<()> {
    if ctx.on_unit_circle() && !ctx.q().is_one() {
        return ctx.require_admissible();
    }
    Ok(())
}

pub fn q_weight(p: &DensePoly, z0: &Gr, ctx: &QContext) -> Result<QWeight> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    require_weight_q(ctx)?;
    if z0.is_zero() || ctx.q().is_one() {
        return Ok(QWeight(p.root_multiplicity(z0)));
    }
    let mut n = 0;
    let mut x = z0.clone();
    while p.eval(&x).is_zero() {
        n += 1;
        x = &x * ctx.q();
    }
    Ok(QWeight(n))
}

/// q-weight of `z0` as an `a`-point, i.e. as a zero of `p - a`.
pub fn q_weight_at_value(p: &DensePoly, a: &Gr, z0: &Gr, ctx: &QContext) -> Result<QWeight> {
    q_weight(&(p - &DensePoly::constant(a.clone())), z0, ctx)
}

type RootCounts = BTreeMap<Gr, usize>;

fn root_counts(roots: &[Gr]) -> RootCounts {
    let mut counts = RootCounts::new();
    for r in roots {
        *counts.entry(r.clone()).or_default() += 1;
    }
    counts
}

/// Length of the run `u, qu, ...` present in `counts`; the multiplicity
/// when `u = 0`.
fn run_length(counts: &RootCounts, u: &Gr, ctx: &QContext) -> usize {
    if u.is_zero() {
        return counts.get(u).copied().unwrap_or(0);
    }
    let mut n = 0;
    let mut x = u.clone();
    while counts.get(&x).is_some_and(|&c| c > 0) {
        n += 1;
        x = &x * ctx.q();
    }
    n
}

fn current_heads(counts: &RootCounts, q_inv: &Gr) -> Vec<Gr> {
    counts
        .keys()
        .filter(|u| !counts.contains_key(&(*u * q_inv)))
        .cloned()
        .collect()
}

fn take_run(counts: &mut RootCounts, head: &Gr, ctx: &QContext) -> QChain {
    let length = run_length(counts, head, ctx);
    let mut x = head.clone();
    for _ in 0..length {
        let c = counts.get_mut(&x).expect("run element present");
        *c -= 1;
        if *c == 0 {
            counts.remove(&x);
        }
        x = &x * ctx.q();
    }
    QChain { head: head.clone(), length }
}

fn finish(lead: Gr, mut chains: Vec<QChain>) -> ChainDecomposition {
    chains.sort_by(|a, b| a.head.cmp(&b.head).then(b.length.cmp(&a.length)));
    ChainDecomposition { lead, chains }
}

fn split_zero_chain(f: &FactoredPoly) -> (RootCounts, Vec<QChain>) {
    let mut counts = root_counts(f.roots());
    let mut chains = Vec::new();
    if let Some(m) = counts.remove(&Gr::zero()) {
        chains.push(QChain { head: Gr::zero(), length: m });
    }
    (counts, chains)
}

/// Greedy chain decomposition: each round collects the current heads
/// (roots `u` with `u/q` absent), visits them in canonical order and
/// removes the longest run starting at each. Roots at zero form one chain.
pub fn chain_decompose(f: &FactoredPoly, ctx: &QContext) -> Result<ChainDecomposition> {
    ctx.require_admissible()?;
    let (mut counts, mut chains) = split_zero_chain(f);
    let q_inv = ctx.q_pow(-1);
    while !counts.is_empty() {
        let heads = current_heads(&counts, &q_inv);
        debug_assert!(!heads.is_empty(), "|q| != 1 guarantees a head");
        for head in heads {
            chains.push(take_run(&mut counts, &head, ctx));
        }
    }
    Ok(finish(f.lead().clone(), chains))
}

/// Chain decomposition extracting one chain at a time, with `pick`
/// choosing which of the current heads (given in canonical order) goes
/// next.
pub fn chain_decompose_by(
    f: &FactoredPoly,
    ctx: &QContext,
    mut pick: impl FnMut(&[Gr]) -> usize,
) -> Result<ChainDecomposition> {
    ctx.require_admissible()?;
    let (mut counts, mut chains) = split_zero_chain(f);
    let q_inv = ctx.q_pow(-1);
    while !counts.is_empty() {
        let heads = current_heads(&counts, &q_inv);
        let idx = pick(&heads);
        let head = heads
            .get(idx)
            .ok_or_else(|| Error::InvalidArgument(format!("head index {idx} out of range")))?;
        chains.push(take_run(&mut counts, head, ctx));
    }
    Ok(finish(f.lead().clone(), chains))
}

/// Monic product of `z - head` over all chains.
pub fn rad_q(f: &FactoredPoly, ctx: &QContext) -> Result<FactoredPoly> {
    let dec = chain_decompose(f, ctx)?;
    Ok(FactoredPoly::monic_from_roots(dec.chains.iter().map(|c| c.head.clone()).collect()))
}

/// Monic `prod [z - head_j]_q^{min(n_j, mu)}`; `mu = 1` is [`rad_q`] and
/// `mu = 0` gives the constant one.
pub fn rad_q_trunc(f: &FactoredPoly, mu: usize, ctx: &QContext) -> Result<FactoredPoly> {
    let dec = chain_decompose(f, ctx)?;
    Ok(FactoredPoly::monic_from_roots(dec.chains.iter().flat_map(|c| c.prefix(mu, ctx)).collect()))
}

/// Closed form of `gcd(f, D_q f, ..., D_q^n f)`:
/// `prod [z - head_j]_q^{[n_j - n]^+}`, monic.
pub fn gcd_tower(f: &FactoredPoly, n: usize, ctx: &QContext) -> Result<FactoredPoly> {
    let dec = chain_decompose(f, ctx)?;
    Ok(FactoredPoly::monic_from_roots(
        dec.chains
            .iter()
            .flat_map(|c| c.prefix(c.length.saturating_sub(n), ctx))
            .collect(),
    ))
}

/// All `z0` such that a run of one polynomial starting at `z0` runs into a
/// zero of the other: `z0` is a zero of `f` of q-weight `w` and
/// `g(q^k z0) = 0` for some `1 <= k <= w`, or the same with `f`, `g`
/// swapped.
pub fn common_q_divisors(f: &FactoredPoly, g: &FactoredPoly, ctx: &QContext) -> Result<BTreeSet<Gr>> {
    ctx.require_admissible()?;
    let fc = root_counts(f.roots());
    let gc = root_counts(g.roots());
    let mut out = BTreeSet::new();
    for (a, b) in [(&fc, &gc), (&gc, &fc)] {
        for z0 in a.keys() {
            let weight = run_length(a, z0, ctx);
            let mut x = z0.clone();
            for _ in 0..weight {
                x = &x * ctx.q();
                if b.contains_key(&x) {
                    out.insert(z0.clone());
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// A pair that fails to be relatively q-prime, and a monic polynomial
/// whose roots are common q-divisor points of the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPrimeWitness {
    pub first: usize,
    pub second: usize,
    pub divisor: DensePoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPrimeReport {
    pub holds: bool,
    pub witness: Option<QPrimeWitness>,
}

fn pairwise_report(
    n: usize,
    mut divisor_of: impl FnMut(usize, usize) -> Result<Option<DensePoly>>,
) -> Result<QPrimeReport> {
    for i in 0..n {
        for j in i + 1..n {
            if let Some(divisor) = divisor_of(i, j)? {
                return Ok(QPrimeReport {
                    holds: false,
                    witness: Some(QPrimeWitness { first: i, second: j, divisor }),
                });
            }
        }
    }
    Ok(QPrimeReport { holds: true, witness: None })
}

/// Pairwise relative q-primeness of factored polynomials. The witness
/// divisor is `z - z0` for the smallest common q-divisor point `z0`.
pub fn relatively_q_prime(fs: &[FactoredPoly], ctx: &QContext) -> Result<QPrimeReport> {
    ctx.require_admissible()?;
    pairwise_report(fs.len(), |i, j| {
        let set = common_q_divisors(&fs[i], &fs[j], ctx)?;
        Ok(set.first().map(DensePoly::linear))
    })
}

/// Squarefree part `p / gcd(p, p')`, monic.
pub fn classical_rad(p: &DensePoly) -> Result<DensePoly> {
    if p.is_constant() {
        return Err(Error::InvalidArgument("classical radical of a constant".into()));
    }
    let g = euclid_gcd(p, &p.derivative())?;
    Ok(p.div_exact(&g)?.monic())
}

/// Multiplicity of the root at zero and the cofactor with that root removed.
fn split_zero_root(p: &DensePoly) -> (usize, DensePoly) {
    let m = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    (m, DensePoly::new(p.coeffs()[m..].to_vec()))
}

/// `gcd(p(q^e z) : e in exps)`, monic.
fn scaled_gcd(p: &DensePoly, exps: impl IntoIterator<Item = i64>, ctx: &QContext) -> Result<DensePoly> {
    let scaled: Vec<DensePoly> = exps
        .into_iter()
        .map(|e| p.scale_arg(&ctx.q_pow(e)))
        .collect::<Result<_>>()?;
    gcd_all(&scaled)
}

fn z_power(k: usize) -> DensePoly {
    DensePoly::monomial(Gr::one(), k)
}

/// Truncated q-radical of a dense polynomial by the algebraic route.
pub fn rad_q_trunc_dense(p: &DensePoly, mu: usize, ctx: &QContext) -> Result<DensePoly> {
    ctx.require_admissible()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (zero_mult, rest) = split_zero_root(p);
    let overlap = scaled_gcd(&rest, (0..=mu as i64).map(|e| -e), ctx)?;
    let part = rest.div_exact(&overlap)?.monic();
    Ok(&part * &z_power(zero_mult.min(mu)))
}

pub fn rad_q_dense(p: &DensePoly, ctx: &QContext) -> Result<DensePoly> {
    rad_q_trunc_dense(p, 1, ctx)
}

/// `gcd(p(z), p(qz), ..., p(q^n z))` times the surviving power of `z`;
/// agrees with [`gcd_tower`] on split polynomials.
pub fn gcd_tower_dense(p: &DensePoly, n: usize, ctx: &QContext) -> Result<DensePoly> {
    ctx.require_admissible()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (zero_mult, rest) = split_zero_root(p);
    let overlap = scaled_gcd(&rest, 0..=n as i64, ctx)?;
    Ok(&overlap * &z_power(zero_mult.saturating_sub(n)))
}

/// Monic polynomial whose roots are exactly the common q-divisor points of
/// `f` and `g`, computed without factoring: for each `k`, the points with
/// `f(z0) = ... = f(q^{k-1} z0) = 0 = g(q^k z0)` are the roots of
/// `gcd(f(z), ..., f(q^{k-1} z), g(q^k z))`.
pub fn common_q_divisor_poly(f: &DensePoly, g: &DensePoly, ctx: &QContext) -> Result<DensePoly> {
    ctx.require_admissible()?;
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut acc = DensePoly::one();
    for (a, b) in [(f, g), (g, f)] {
        let mut run = a.monic();
        for k in 1..=a.deg() {
            if run.is_constant() {
                break;
            }
            let hit = euclid_gcd(&run, &b.scale_arg(&ctx.q_pow(k as i64))?)?;
            if !hit.is_constant() {
                acc = lcm(&acc, &classical_rad(&hit)?)?;
            }
            run = euclid_gcd(&run, &a.scale_arg(&ctx.q_pow(k as i64))?)?;
        }
    }
    Ok(acc)
}

/// Chain decomposition when the operand is factored.
pub fn decompose_operand(op: &Operand, ctx: &QContext) -> Result<Option<ChainDecomposition>> {
    op.factored().map(|f| chain_decompose(f, ctx)).transpose()
}

/// Monic q-radical of an operand, truncated at `mu`.
pub fn rad_q_trunc_operand(op: &Operand, mu: usize, ctx: &QContext) -> Result<DensePoly> {
    match op {
        Operand::Factored(f) => Ok(rad_q_trunc(f, mu, ctx)?.expand()),
        Operand::Dense(p) => rad_q_trunc_dense(p, mu, ctx),
    }
}

pub fn rad_q_operand(op: &Operand, ctx: &QContext) -> Result<DensePoly> {
    rad_q_trunc_operand(op, 1, ctx)
}

/// Common q-divisor polynomial of two operands, `None` when they are
/// relatively q-prime.
pub fn common_q_divisor_operands(a: &Operand, b: &Operand, ctx: &QContext) -> Result<Option<DensePoly>> {
    let poly = match (a, b) {
        (Operand::Factored(f), Operand::Factored(g)) => {
            let set = common_q_divisors(f, g, ctx)?;
            FactoredPoly::monic_from_roots(set.into_iter().collect()).expand()
        }
        _ => common_q_divisor_poly(&a.dense(), &b.dense(), ctx)?,
    };
    Ok((!poly.is_constant()).then_some(poly))
}

/// Pairwise relative q-primeness for operands in either form.
pub fn relatively_q_prime_operands(ops: &[Operand], ctx: &QContext) -> Result<QPrimeReport> {
    ctx.require_admissible()?;
    pairwise_report(ops.len(), |i, j| common_q_divisor_operands(&ops[i], &ops[j], ctx))
}
