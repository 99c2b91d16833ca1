//! q-Casorati determinants of polynomial tuples.
//!
//! The primary determinant has rows `D_q^i f_j` for `0 <= i < m`. The
//! shift form `det[f_j(q^i z)]` equals it times
//! `q^{sum_k k(k-1)/2} (qz - z)^{m(m-1)/2}`: row `i` of the shift matrix is
//! a triangular combination of the derivative rows whose diagonal entry is
//! `q^{i(i-1)/2} (qz - z)^i`. For `m <= 2` this agrees with the commonly
//! printed normalizer `(qz - z)^{m-1}`; from `m = 3` on it does not.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::GaussianRational;
use crate::poly::DensePoly;
use crate::qcore::{jackson_iter, QContext};

type Gr = GaussianRational;

#[derive(Clone, Debug)]
pub struct CasoratiInput {
    pub polys: Vec<DensePoly>,
    pub ctx: QContext,
}

impl CasoratiInput {
    pub fn new(polys: Vec<DensePoly>, ctx: QContext) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidArgument("q-Casorati determinant of an empty tuple".into()));
        }
        ctx.require_jackson()?;
        Ok(CasoratiInput { polys, ctx })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// Both independence signals, kept side by side even when they disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub casorati_nonzero: bool,
    pub coefficient_rank_full: bool,
    pub agree: bool,
}

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along rows, memoised on the set of columns still available. Uses ring
/// operations only.
pub fn poly_det(matrix: &[Vec<DensePoly>]) -> DensePoly {
    let m = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == m), "square matrix");
    assert!(m < usize::BITS as usize, "matrix too large");
    let mut memo: HashMap<usize, DensePoly> = HashMap::new();
    minor(matrix, 0, (1usize << m) - 1, &mut memo)
}

fn minor(matrix: &[Vec<DensePoly>], row: usize, cols: usize, memo: &mut HashMap<usize, DensePoly>) -> DensePoly {
    if row == matrix.len() {
        return DensePoly::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = DensePoly::zero();
    let mut sign_positive = true;
    for c in 0..matrix.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &matrix[row][c];
        if !entry.is_zero() {
            let sub = minor(matrix, row + 1, cols & !(1 << c), memo);
            let term = entry * &sub;
            acc = if sign_positive { &acc + &term } else { &acc - &term };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// `det[D_q^i f_j]`, `0 <= i, j < m`.
pub fn casorati(input: &CasoratiInput) -> Result<DensePoly> {
    let m = input.len();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        rows.push(
            input
                .polys
                .iter()
                .map(|f| jackson_iter(f, i, &input.ctx))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(poly_det(&rows))
}

/// `q^{sum_{k<m} k(k-1)/2} (qz - z)^{m(m-1)/2}`.
pub fn shift_normalizer(m: usize, ctx: &QContext) -> DensePoly {
    let q_exp: i64 = (0..m as i64).map(|k| k * (k - 1) / 2).sum();
    let step = DensePoly::monomial(ctx.q() - &Gr::one(), 1);
    step.pow((m * m.saturating_sub(1) / 2) as u32).scale(&ctx.q_pow(q_exp))
}

/// The normalizer `(qz - z)^{m-1}` as usually printed; exact for `m <= 2`.
pub fn printed_normalizer(m: usize, ctx: &QContext) -> DensePoly {
    DensePoly::monomial(ctx.q() - &Gr::one(), 1).pow(m.saturating_sub(1) as u32)
}

/// `(det[f_j(q^i z)], normalizer)`; the first equals the second times
/// [`casorati`].
pub fn casorati_shift_form(input: &CasoratiInput) -> Result<(DensePoly, DensePoly)> {
    let m = input.len();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let scale = input.ctx.q_pow(i as i64);
        rows.push(input.polys.iter().map(|f| f.scale_arg(&scale)).collect::<Result<Vec<_>>>()?);
    }
    Ok((poly_det(&rows), shift_normalizer(m, &input.ctx)))
}

/// Rank of a matrix over Q(i) by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Gr>>) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut rows {
        row.resize(ncols, Gr::zero());
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            let pivot_row = rows[rank].clone();
            for (x, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &(&factor * p);
            }
        }
        rank += 1;
    }
    rank
}

/// Linear independence over constants, from the coefficient matrix.
pub fn coefficient_rank_full(polys: &[DensePoly]) -> bool {
    let rows = polys.iter().map(|p| p.coeffs().to_vec()).collect();
    rank(rows) == polys.len()
}

pub fn independence_report(input: &CasoratiInput) -> Result<IndependenceReport> {
    let casorati_nonzero = !casorati(input)?.is_zero();
    let coefficient_rank_full = coefficient_rank_full(&input.polys);
    Ok(IndependenceReport {
        casorati_nonzero,
        coefficient_rank_full,
        agree: casorati_nonzero == coefficient_rank_full,
    })
}
