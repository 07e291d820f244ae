//! Real Iwasawa decomposition `M = N A K` with `K` orthogonal. The axions
//! (entries of N) and the squared dilatons are rational in the entries of M
//! and are computed exactly as epsilon-products of the row vectors; only
//! the square roots inside A and the entries of K are floating point.

use num::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::matrix::{epsilon_product, RatMatrix};
use crate::scalar::{rational_to_string, Rational};

/// Max-norm tolerance for `K K^T - I` and for the relative reconstruction
/// residual of the floating realization.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RealIwasawa {
    /// Unit upper triangular, exact.
    pub n: RatMatrix,
    /// `y_1^2 .. y_{n-1}^2`, exact and positive.
    pub dilatons_squared: Vec<Rational>,
    /// Diagonal of A: `sqrt(y_mu^2 / y_{mu-1}^2)` in binary64.
    pub a_diag: Vec<f64>,
    /// The orthogonal part in binary64.
    pub k: Vec<Vec<f64>>,
    /// `max |K K^T - I|`.
    pub orthogonality_residual: f64,
    /// `max |N A K - M|`, absolute.
    pub reconstruction_residual: f64,
}

fn ensure_special_linear(m: &RatMatrix) -> Result<usize> {
    let n = m.ensure_square()?;
    let det = m.det()?;
    if !det.is_one() {
        return Err(Error::NotSpecialLinear {
            det: rational_to_string(&det),
        });
    }
    Ok(n)
}

/// Exact closed forms: `y_mu^-2` is the Gram determinant of the last
/// `n - mu` rows, and `x_{mu nu} = y_{nu-1}^2 eps(V_mu, V_{nu+1}, ..., V_n;
/// V_nu, V_{nu+1}, ..., V_n)`. Returns the unit upper triangular N and the
/// squared dilatons `y_1^2 .. y_{n-1}^2`.
pub fn real_axions_dilatons(m: &RatMatrix) -> Result<(RatMatrix, Vec<Rational>)> {
    let n = ensure_special_linear(m)?;
    let row = |i: usize| m.row(i - 1); // 1-based

    // y_mu^2 for mu = 0..n with the boundary convention y_0 = y_n = 1
    let mut y_squared = vec![Rational::one(); n + 1];
    for mu in 1..n {
        let tail: Vec<&[Rational]> = (mu + 1..=n).map(row).collect();
        let gram = epsilon_product(&tail, &tail)?;
        debug_assert!(gram.is_positive(), "Gram determinant of independent rows");
        y_squared[mu] = gram.recip();
    }

    let mut n_mat = RatMatrix::identity(n);
    for nu in 2..=n {
        for mu in 1..nu {
            let mut a_list: Vec<&[Rational]> = vec![row(mu)];
            a_list.extend((nu + 1..=n).map(row));
            let mut b_list: Vec<&[Rational]> = vec![row(nu)];
            b_list.extend((nu + 1..=n).map(row));
            let eps = epsilon_product(&a_list, &b_list)?;
            n_mat.set(mu - 1, nu - 1, &y_squared[nu - 1] * eps);
        }
    }
    Ok((n_mat, y_squared[1..n].to_vec()))
}

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Full decomposition: exact N and squared dilatons, floating A and K with
/// `K = A^-1 N^-1 M` (the inverse of N applied exactly, one float
/// conversion at the end). Fails with `PrecisionLoss` if the orthogonality
/// or reconstruction residual exceeds [`REAL_TOLERANCE`] (the latter
/// relative to the largest entry of M).
pub fn real_decompose(m: &RatMatrix) -> Result<RealIwasawa> {
    let (n_mat, dilatons_squared) = real_axions_dilatons(m)?;
    let n = m.rows();

    let mut a_diag = Vec::with_capacity(n);
    let mut prev = Rational::one();
    for mu in 1..=n {
        let y2 = if mu < n {
            dilatons_squared[mu - 1].clone()
        } else {
            Rational::one()
        };
        a_diag.push(to_f64(&(&y2 / &prev)).sqrt());
        prev = y2;
    }

    // exact N^-1 M, then divide row mu by the float a_mu
    let c = n_mat.invert_unit_upper().mul(m)?;
    let k: Vec<Vec<f64>> = (0..n)
        .map(|i| c.row(i).iter().map(|x| to_f64(x) / a_diag[i]).collect())
        .collect();

    let orthogonality_residual = orthogonality_residual(&k);
    let reconstruction_residual = reconstruction_residual(&n_mat, &a_diag, &k, m);
    let scale = m.max_abs_f64().max(1.0);
    // NaN residuals must fail too, so compare through the passing side
    let within = |residual: f64, tol: f64| residual.is_finite() && residual <= tol;
    if !within(orthogonality_residual, REAL_TOLERANCE) {
        return Err(Error::PrecisionLoss {
            residual: orthogonality_residual,
            tolerance: REAL_TOLERANCE,
        });
    }
    if !within(reconstruction_residual, REAL_TOLERANCE * scale) {
        return Err(Error::PrecisionLoss {
            residual: reconstruction_residual,
            tolerance: REAL_TOLERANCE * scale,
        });
    }
    Ok(RealIwasawa {
        n: n_mat,
        dilatons_squared,
        a_diag,
        k,
        orthogonality_residual,
        reconstruction_residual,
    })
}

pub(crate) fn orthogonality_residual(k: &[Vec<f64>]) -> f64 {
    let n = k.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|q| k[i][q] * k[j][q]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

pub(crate) fn reconstruction_residual(
    n_mat: &RatMatrix,
    a_diag: &[f64],
    k: &[Vec<f64>],
    m: &RatMatrix,
) -> f64 {
    let n = a_diag.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0f64;
            for q in 0..n {
                acc += to_f64(n_mat.at(i, q)) * a_diag[q] * k[q][j];
            }
            worst = worst.max((acc - to_f64(m.at(i, j))).abs());
        }
    }
    worst
}
