//! Univariate polynomials over Q(i).
//!
//! Two representations are kept side by side. [`DensePoly`] is a
//! coefficient vector and carries the ring operations, Euclidean division
//! and gcd. [`FactoredPoly`] is a leading constant plus a root multiset and
//! is what the chain/radical code consumes. [`Operand`] holds either one so
//! that verifiers can accept polynomials that do not split over Q(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{GaussianRational, Rational};

type Gr = GaussianRational;

/// Coefficient vector, index `k` holding the coefficient of `z^k`.
/// Trailing zeros are always stripped; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DensePoly {
    coeffs: Vec<Gr>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<Gr>) -> Self {
        while coeffs.last().is_some_and(Gr::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Gr::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Gr::one())
    }

    pub fn constant(c: Gr) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![Gr::zero(), Gr::one()])
    }

    /// `z - root`.
    pub fn linear(root: &Gr) -> Self {
        Self::new(vec![-root, Gr::one()])
    }

    /// `c * z^k`.
    pub fn monomial(c: Gr, k: usize) -> Self {
        let mut coeffs = vec![Gr::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Gr] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Gr {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Gr> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Gr) -> Gr {
        let mut acc = Gr::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc += c;
        }
        acc
    }

    pub fn scale(&self, c: &Gr) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// The polynomial `z -> p(c z)`.
    pub fn scale_arg(&self, c: &Gr) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("argument scale must be nonzero".into()));
        }
        let mut pow = Gr::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow = &pow * c;
        }
        Ok(Self::new(out))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Classical derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Gr::from_int(k as i64))
                .collect(),
        )
    }

    /// Quotient and remainder with `self = q*d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Gr::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        matches!(other.divrem(self), Ok((_, r)) if r.is_zero())
    }

    /// Number of times `z - root` divides `self` (0 for the zero polynomial).
    pub fn root_multiplicity(&self, root: &Gr) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear(root);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.divrem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    fn common_denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            acc.lcm(c.re().denom()).lcm(c.im().denom())
        })
    }
}

/// Monic greatest common divisor.
pub fn euclid_gcd(p: &DensePoly, r: &DensePoly) -> Result<DensePoly> {
    if p.is_zero() && r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (p.monic(), r.monic());
    while !b.is_zero() {
        let (_, rem) = a.divrem(&b)?;
        a = b;
        b = rem.monic();
    }
    Ok(a.monic())
}

/// Monic gcd of every polynomial in `ps`, skipping zeros.
pub fn gcd_all<'a>(ps: impl IntoIterator<Item = &'a DensePoly>) -> Result<DensePoly> {
    let mut acc = DensePoly::zero();
    for p in ps {
        if acc.is_one() {
            break;
        }
        if !p.is_zero() {
            acc = euclid_gcd(&acc, p)?;
        }
    }
    if acc.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(acc)
}

/// Monic least common multiple.
pub fn lcm(p: &DensePoly, r: &DensePoly) -> Result<DensePoly> {
    if p.is_zero() || r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = euclid_gcd(p, r)?;
    Ok((p * &r.div_exact(&g)?).monic())
}

impl DensePoly {
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![Gr::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        DensePoly::new(out)
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_poly_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for DensePoly {
            type Output = DensePoly;
            fn $m(self, rhs: DensePoly) -> DensePoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_poly_owned!(Add add, Sub sub, Mul mul);

impl Neg for DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        -&self
    }
}

/// Sign and magnitude of a coefficient for printing. General complex
/// values keep their sign inside parentheses.
fn split_sign(c: &Gr) -> (bool, Gr) {
    if c.is_real() {
        (c.re().is_negative(), Gr::real(c.re().abs()))
    } else if c.re().is_zero() {
        (c.im().is_negative(), Gr::new(Rational::zero(), c.im().abs()))
    } else {
        (false, c.clone())
    }
}

impl fmt::Display for DensePoly {
    /// Canonical form: descending powers, explicit signs, exact
    /// coefficients, e.g. `z^3 - z`, `2*z^2 - 3*z + 1`, `(1+2i)*z - i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, mag) = split_sign(c);
            let sign = match (first, negative) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let mag_text = if mag.is_real() || mag.re().is_zero() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let body = match (k, mag.is_one()) {
                (0, _) => mag_text,
                (_, true) => var,
                _ => format!("{mag_text}*{var}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePoly({self})")
    }
}

/// `lead * prod (z - r)` over a root multiset. Roots are kept sorted by
/// the canonical order so equal multisets compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactoredPoly {
    lead: Gr,
    roots: Vec<Gr>,
}

impl FactoredPoly {
    pub fn new(lead: Gr, mut roots: Vec<Gr>) -> Result<Self> {
        if lead.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        roots.sort();
        Ok(FactoredPoly { lead, roots })
    }

    pub fn monic_from_roots(roots: Vec<Gr>) -> Self {
        Self::new(Gr::one(), roots).expect("unit lead")
    }

    pub fn constant(lead: Gr) -> Result<Self> {
        Self::new(lead, Vec::new())
    }

    pub fn one() -> Self {
        Self::monic_from_roots(Vec::new())
    }

    pub fn lead(&self) -> &Gr {
        &self.lead
    }

    pub fn roots(&self) -> &[Gr] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn is_constant(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn expand(&self) -> DensePoly {
        let mut coeffs = vec![self.lead.clone()];
        for r in &self.roots {
            // multiply by (z - r) in place
            coeffs.push(Gr::zero());
            for k in (0..coeffs.len()).rev() {
                let shifted = if k > 0 { coeffs[k - 1].clone() } else { Gr::zero() };
                let cur = std::mem::take(&mut coeffs[k]);
                coeffs[k] = shifted - &(cur * r);
            }
        }
        DensePoly::new(coeffs)
    }

    pub fn monic(&self) -> Self {
        FactoredPoly { lead: Gr::one(), roots: self.roots.clone() }
    }

    pub fn scale(&self, c: &Gr) -> Result<Self> {
        Self::new(&self.lead * c, self.roots.clone())
    }

    /// Roots of `p(c z)` are the roots of `p` divided by `c`.
    pub fn scale_arg(&self, c: &Gr) -> Result<Self> {
        let c_inv = c.inv().map_err(|_| Error::InvalidArgument("argument scale must be nonzero".into()))?;
        let lead = &self.lead * &c.pow(self.degree() as u32);
        Self::new(lead, self.roots.iter().map(|r| r * &c_inv).collect())
    }

    pub fn eval(&self, x: &Gr) -> Gr {
        self.roots.iter().fold(self.lead.clone(), |acc, r| acc * (x - r))
    }

    pub fn multiplicity(&self, x: &Gr) -> usize {
        self.roots.iter().filter(|r| *r == x).count()
    }
}

impl Mul for &FactoredPoly {
    type Output = FactoredPoly;
    fn mul(self, rhs: &FactoredPoly) -> FactoredPoly {
        let mut roots = self.roots.clone();
        roots.extend(rhs.roots.iter().cloned());
        FactoredPoly::new(&self.lead * &rhs.lead, roots).expect("product of nonzero leads")
    }
}

impl Neg for &FactoredPoly {
    type Output = FactoredPoly;
    fn neg(self) -> FactoredPoly {
        FactoredPoly { lead: -&self.lead, roots: self.roots.clone() }
    }
}

impl fmt::Display for FactoredPoly {
    /// `lead*(z - r1)*(z - r2)...`, with the lead omitted when it is one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .roots
            .iter()
            .map(|r| format!("({})", DensePoly::linear(r)))
            .collect();
        if factors.is_empty() {
            return write!(f, "{}", DensePoly::constant(self.lead.clone()));
        }
        let lead = if self.lead.is_one() {
            String::new()
        } else if self.lead == -Gr::one() {
            "-".to_string()
        } else {
            format!("{}*", DensePoly::constant(self.lead.clone()))
        };
        write!(f, "{lead}{}", factors.join("*"))
    }
}

impl fmt::Debug for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredPoly({self})")
    }
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational candidates for a root of an integer polynomial with nonzero
/// constant term `c0` and leading term `cn`.
fn rational_root_candidates(c0: &BigInt, cn: &BigInt) -> Vec<Gr> {
    let nums = positive_divisors(c0);
    let dens = positive_divisors(cn);
    let mut out = Vec::new();
    for p in &nums {
        for q in &dens {
            let r = Rational::new(p.clone(), q.clone());
            out.push(Gr::real(-r.clone()));
            out.push(Gr::real(r));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Splits `p` into linear factors with rational roots.
///
/// Rational roots of a polynomial with Gaussian-rational coefficients are
/// the common rational roots of its real and imaginary parts; those are
/// found with the rational root theorem on a cleared-denominator integer
/// polynomial and removed by repeated deflation. Anything left over is
/// reported as [`Error::DoesNotSplit`].
pub fn extract_rational_roots(p: &DensePoly) -> Result<FactoredPoly> {
    let lead = p.leading().cloned().ok_or(Error::ZeroPolynomial)?;
    let mut residual = p.monic();
    let mut roots = Vec::new();

    let zero_mult = residual.coeffs.iter().take_while(|c| c.is_zero()).count();
    roots.extend(std::iter::repeat_n(Gr::zero(), zero_mult));
    residual = DensePoly::new(residual.coeffs[zero_mult..].to_vec());

    if !residual.is_constant() {
        let re_part = DensePoly::new(residual.coeffs.iter().map(|c| Gr::real(c.re().clone())).collect());
        let im_part = DensePoly::new(residual.coeffs.iter().map(|c| Gr::real(c.im().clone())).collect());
        let real_factor = if im_part.is_zero() { re_part } else { euclid_gcd(&re_part, &im_part)? };
        if !real_factor.is_constant() {
            let denom = real_factor.common_denominator();
            let scaled = real_factor.scale(&Gr::real(Rational::from_integer(denom)));
            let ints: Vec<BigInt> = scaled.coeffs.iter().map(|c| c.re().to_integer()).collect();
            let c0 = ints.first().expect("nonconstant");
            let cn = ints.last().expect("nonconstant");
            for cand in rational_root_candidates(c0, cn) {
                if residual.is_constant() {
                    break;
                }
                let lin = DensePoly::linear(&cand);
                loop {
                    let (q, r) = residual.divrem(&lin)?;
                    if !r.is_zero() {
                        break;
                    }
                    roots.push(cand.clone());
                    residual = q;
                }
            }
        }
    }
    if !residual.is_constant() {
        return Err(Error::DoesNotSplit { residual });
    }
    FactoredPoly::new(lead, roots)
}

/// A polynomial in whichever form is available: split into roots over
/// Q(i), or dense when it does not split (or was never factored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Factored(FactoredPoly),
    Dense(DensePoly),
}

impl Operand {
    /// Factored form when the polynomial splits over Q, or is linear;
    /// dense otherwise.
    pub fn from_dense(p: DensePoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if p.deg() == 1 {
            let root = (-&p.coeff(0)).checked_div(&p.coeff(1))?;
            return Ok(Operand::Factored(FactoredPoly::new(p.coeff(1), vec![root])?));
        }
        match extract_rational_roots(&p) {
            Ok(f) => Ok(Operand::Factored(f)),
            Err(Error::DoesNotSplit { .. }) => Ok(Operand::Dense(p)),
            Err(e) => Err(e),
        }
    }

    pub fn dense(&self) -> DensePoly {
        match self {
            Operand::Factored(f) => f.expand(),
            Operand::Dense(p) => p.clone(),
        }
    }

    pub fn factored(&self) -> Option<&FactoredPoly> {
        match self {
            Operand::Factored(f) => Some(f),
            Operand::Dense(_) => None,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Operand::Factored(f) => f.degree(),
            Operand::Dense(p) => p.deg(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn eval(&self, x: &Gr) -> Gr {
        match self {
            Operand::Factored(f) => f.eval(x),
            Operand::Dense(p) => p.eval(x),
        }
    }

    pub fn scale_arg(&self, c: &Gr) -> Result<Self> {
        Ok(match self {
            Operand::Factored(f) => Operand::Factored(f.scale_arg(c)?),
            Operand::Dense(p) => Operand::Dense(p.scale_arg(c)?),
        })
    }

    /// Product; stays factored only when every input is.
    pub fn product<'a>(ops: impl IntoIterator<Item = &'a Operand>) -> Operand {
        let mut fac = FactoredPoly::one();
        let mut dense: Option<DensePoly> = None;
        for op in ops {
            match (op, &mut dense) {
                (Operand::Factored(f), None) => fac = &fac * f,
                (op, d) => {
                    let cur = d.take().unwrap_or_else(|| fac.expand());
                    *d = Some(&cur * &op.dense());
                }
            }
        }
        match dense {
            Some(p) => Operand::Dense(p),
            None => Operand::Factored(fac),
        }
    }
}

impl From<FactoredPoly> for Operand {
    fn from(f: FactoredPoly) -> Self {
        Operand::Factored(f)
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Factored(p) => write!(f, "{p}"),
            Operand::Dense(p) => write!(f, "{p}"),
        }
    }
}
