//! q-combinatorics and the Jackson q-difference operator.

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::GaussianRational;
use crate::poly::{DensePoly, FactoredPoly};

type Gr = GaussianRational;

/// A concrete, nonzero value of `q` shared by every q-dependent operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QContext {
    q: Gr,
}

impl QContext {
    pub fn new(q: Gr) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InadmissibleQ { q: q.to_string(), reason: "q must be nonzero" });
        }
        Ok(QContext { q })
    }

    pub fn q(&self) -> &Gr {
        &self.q
    }

    /// `|q| = 1`, including `q = 1`.
    pub fn on_unit_circle(&self) -> bool {
        self.q.norm().is_one()
    }

    /// The Jackson operator needs `q != 1`.
    pub fn require_jackson(&self) -> Result<()> {
        if self.q.is_one() {
            return Err(Error::InadmissibleQ {
                q: self.q.to_string(),
                reason: "the Jackson operator needs q ≠ 1",
            });
        }
        Ok(())
    }

    /// Chain, radical and theorem operations need `|q| ≠ 1`.
    pub fn require_admissible(&self) -> Result<()> {
        if self.on_unit_circle() {
            return Err(Error::InadmissibleQ { q: self.q.to_string(), reason: "requires |q| ≠ 1" });
        }
        Ok(())
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(&self, k: i64) -> Gr {
        self.q.powi(k).expect("q is nonzero")
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`; equals `n` at `q = 1`.
pub fn q_number(n: u32, ctx: &QContext) -> Gr {
    let mut acc = Gr::zero();
    let mut pow = Gr::one();
    for _ in 0..n {
        acc += &pow;
        pow = &pow * ctx.q();
    }
    acc
}

pub fn q_factorial(n: u32, ctx: &QContext) -> Gr {
    (1..=n).fold(Gr::one(), |acc, k| acc * q_number(k, ctx))
}

/// Gaussian binomial `[k j]_q`, computed through the q-Pascal recurrence
/// so that it stays well defined when some `[n]_q` vanish.
pub fn q_binomial(k: u32, j: u32, ctx: &QContext) -> Result<Gr> {
    if j > k {
        return Err(Error::InvalidArgument(format!("q-binomial needs j <= k, got k={k}, j={j}")));
    }
    // row[j] = [n j]_q; [n+1 j] = [n j-1] + q^j [n j]
    let mut row = vec![Gr::one()];
    for n in 0..k {
        let mut next = vec![Gr::one(); n as usize + 2];
        for jj in 1..=n as usize {
            next[jj] = &row[jj - 1] + &(ctx.q_pow(jj as i64) * &row[jj]);
        }
        row = next;
    }
    Ok(row[j as usize].clone())
}

/// `[z - a]_q^n = (z - a)(z - aq)...(z - aq^(n-1))`.
pub fn q_pow_factor(a: &Gr, n: u32, ctx: &QContext) -> FactoredPoly {
    let roots = (0..n).map(|i| a * &ctx.q_pow(i as i64)).collect();
    FactoredPoly::monic_from_roots(roots)
}

/// `D_q p = (p(qz) - p(z)) / (qz - z)`, realised as the coefficient map
/// `c_k z^k -> [k]_q c_k z^(k-1)`.
pub fn jackson(p: &DensePoly, ctx: &QContext) -> Result<DensePoly> {
    ctx.require_jackson()?;
    let mut out = Vec::with_capacity(p.coeffs().len().saturating_sub(1));
    let mut qnum = Gr::one(); // [1]_q
    let mut pow = ctx.q().clone();
    for c in p.coeffs().iter().skip(1) {
        out.push(c * &qnum);
        qnum += &pow;
        pow = &pow * ctx.q();
    }
    Ok(DensePoly::new(out))
}

pub fn jackson_iter(p: &DensePoly, k: usize, ctx: &QContext) -> Result<DensePoly> {
    if k > 0 {
        ctx.require_jackson()?;
    }
    let mut cur = p.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = jackson(&cur, ctx)?;
    }
    Ok(cur)
}

fn tri(n: u32) -> i64 {
    i64::from(n) * (i64::from(n) - 1) / 2
}

/// `sum_j q^(j(j-1)/2) (qz - z)^j [k j]_q D_q^j p(z)` at `z0`, which equals
/// `p(q^k z0)`.
pub fn shift_from_derivatives(p: &DensePoly, k: u32, z0: &Gr, ctx: &QContext) -> Result<Gr> {
    ctx.require_jackson()?;
    let step = &(ctx.q() - &Gr::one()) * z0;
    let mut acc = Gr::zero();
    let mut deriv = p.clone();
    for j in 0..=k {
        let term = ctx.q_pow(tri(j)) * step.pow(j) * q_binomial(k, j, ctx)? * deriv.eval(z0);
        acc += &term;
        deriv = jackson(&deriv, ctx)?;
    }
    Ok(acc)
}

/// `D_q^k p(z0)` from the shifted values `p(q^j z0)` by the alternating
/// inverse sum; singular at `z0 = 0`.
pub fn derivative_from_shifts(p: &DensePoly, k: u32, z0: &Gr, ctx: &QContext) -> Result<Gr> {
    ctx.require_jackson()?;
    if z0.is_zero() {
        return Err(Error::InvalidArgument("the shift form of D_q^k is singular at z = 0".into()));
    }
    let mut sum = Gr::zero();
    for j in 0..=k {
        let sign = if (k - j).is_multiple_of(2) { Gr::one() } else { -Gr::one() };
        let term = sign
            * ctx.q_pow(tri(k - j))
            * q_binomial(k, j, ctx)?
            * p.eval(&(z0 * &ctx.q_pow(i64::from(j))));
        sum += &term;
    }
    let step = &(ctx.q() - &Gr::one()) * z0;
    let denom = ctx.q_pow(tri(k)) * step.pow(k);
    sum.checked_div(&denom)
}
