//! p-adic Iwasawa decomposition `M = N A K` of determinant-one rational
//! matrices: N unit upper triangular (axions above the diagonal), A diagonal
//! with determinant one (dilatons), K in SL(n, Z_p).
//!
//! The decomposition is computed by iterating the strong UL-decomposition:
//! at each stage the bottom-row entry of largest p-adic norm is moved to the
//! rightmost column, the bottom row of the unit lower factor splits off into
//! the compact part, and the remaining diagonal block recurses. The
//! decomposition is not unique, but the norms of the dilatons are; they are
//! also available in closed form from the anti-leading minors
//! ([`dilaton_valuations`]) without decomposing at all.

use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{k_subsets_lex, RatMatrix};
use crate::scalar::{
    ensure_prime, is_padic_integer, is_padic_unit, padic_valuation_unchecked, rational_to_string,
    Rational, Valuation,
};
use crate::triangular::strong_ul_decompose;

/// One Iwasawa decomposition of `matrix` at `prime`, with the dilaton data
/// cached: `dilatons[k-1]` is `y_k`, the product of the first k diagonal
/// entries of A, and `dilaton_valuations[k-1]` its p-adic valuation.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicIwasawa {
    pub prime: u64,
    pub matrix: RatMatrix,
    pub n: RatMatrix,
    pub a: RatMatrix,
    pub k: RatMatrix,
    pub dilatons: Vec<Rational>,
    pub dilaton_valuations: Vec<Valuation>,
}

impl PadicIwasawa {
    pub(crate) fn assemble(
        prime: u64,
        matrix: RatMatrix,
        n: RatMatrix,
        a: RatMatrix,
        k: RatMatrix,
    ) -> PadicIwasawa {
        let dilatons = dilatons_from_cartan(&a);
        let dilaton_valuations = dilatons
            .iter()
            .map(|y| padic_valuation_unchecked(y, prime))
            .collect();
        PadicIwasawa {
            prime,
            matrix,
            n,
            a,
            k,
            dilatons,
            dilaton_valuations,
        }
    }
}

/// `y_k` = product of the first k diagonal entries, k = 1..n-1.
pub(crate) fn dilatons_from_cartan(a: &RatMatrix) -> Vec<Rational> {
    let diag = a.diagonal();
    let mut run = Rational::one();
    diag.iter()
        .take(diag.len().saturating_sub(1))
        .map(|d| {
            run *= d;
            run.clone()
        })
        .collect()
}

fn ensure_special_linear(m: &RatMatrix) -> Result<usize> {
    let n = m.ensure_square()?;
    let det = m.det()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if !det.is_one() {
        return Err(Error::NotSpecialLinear {
            det: rational_to_string(&det),
        });
    }
    Ok(n)
}

/// Computes one Iwasawa decomposition of a determinant-one matrix at `p`.
pub fn decompose_padic(m: &RatMatrix, p: u64) -> Result<PadicIwasawa> {
    ensure_prime(p)?;
    ensure_special_linear(m)?;
    let (n_mat, a_mat, k_mat) = decompose_rec(m, p)?;
    Ok(PadicIwasawa::assemble(p, m.clone(), n_mat, a_mat, k_mat))
}

/// Recursive step over general nonsingular matrices; the extracted diagonal
/// block is not determinant-one, so A absorbs whatever determinant the
/// input carries. At the top level det M = 1 forces det A = 1.
fn decompose_rec(m: &RatMatrix, p: u64) -> Result<(RatMatrix, RatMatrix, RatMatrix)> {
    let n = m.rows();
    if n == 1 {
        return Ok((
            RatMatrix::identity(1),
            m.clone(),
            RatMatrix::identity(1),
        ));
    }

    // Bottom-row pivot: largest p-adic norm = smallest valuation, ties
    // broken toward the smallest column index.
    let mut best: Option<(Valuation, usize)> = None;
    for c in 0..n {
        let v = padic_valuation_unchecked(m.at(n - 1, c), p);
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, c));
        }
    }
    let (pivot_valuation, a) = best.expect("n >= 1");
    if pivot_valuation.is_infinite() {
        return Err(Error::SingularMatrix);
    }

    let ul = strong_ul_decompose(m, a + 1)?;

    // Split Lambda = Lambda' * R where R carries the bottom row. Because
    // M[n][a] has maximal norm on the bottom row, R has p-adic integer
    // entries and lands in the compact part together with Pi^-1.
    let mut r_mat = RatMatrix::identity(n);
    for c in 0..n - 1 {
        r_mat.set(n - 1, c, ul.lambda.at(n - 1, c).clone());
    }

    // Remaining block: the top-left (n-1) x (n-1) part of Delta * Lambda'.
    let mut inner = RatMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..=i {
            inner.set(i, j, ul.delta.at(i, i) * ul.lambda.at(i, j));
        }
    }

    let (n_inner, a_inner, k_inner) = decompose_rec(&inner, p)?;

    let n_mat = ul
        .v
        .mul(&n_inner.embed_top_left())
        .expect("square factors");
    let mut a_mat = a_inner.embed_top_left();
    a_mat.set(n - 1, n - 1, ul.delta.at(n - 1, n - 1).clone());
    let k_mat = ul.pi.apply_inverse(
        &k_inner
            .embed_top_left()
            .mul(&r_mat)
            .expect("square factors"),
    );
    Ok((n_mat, a_mat, k_mat))
}

/// Closed form for the dilaton valuations: `v_p(y_{n-k})` is minus the
/// minimum valuation over all order-k anti-leading minors, i.e. the norm of
/// `y_{n-k}` is the reciprocal of the largest minor norm. Returns the
/// valuations ordered `y_1 .. y_{n-1}`. Each minor is evaluated directly,
/// independently of the decomposition path and of the Pluecker enumeration.
pub fn dilaton_valuations(m: &RatMatrix, p: u64) -> Result<Vec<Valuation>> {
    ensure_prime(p)?;
    let n = ensure_special_linear(m)?;
    let mut out = vec![Valuation::Finite(0); n.saturating_sub(1)];
    for k in 1..n {
        let rows: Vec<usize> = (n - k + 1..=n).collect();
        let mut min_v = Valuation::Infinite;
        for subset in k_subsets_lex(n, k) {
            let minor = m.minor(&rows, subset.indices())?;
            min_v = min_v.min(padic_valuation_unchecked(&minor, p));
        }
        // nonsingular: the last k rows have full rank, so some minor is
        // nonzero and the minimum is finite
        out[n - k - 1] = min_v.neg();
    }
    Ok(out)
}

/// Parameters of the non-uniqueness family: X unit upper triangular with
/// p-adic integer entries, Y diagonal with p-adic unit entries and
/// determinant one.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    pub x: RatMatrix,
    pub y: RatMatrix,
}

impl FamilyParams {
    pub fn validate(&self, n: usize, p: u64) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidFamilyParams(msg));
        if self.x.rows() != n || !self.x.is_square() {
            return fail(format!("X must be {n}x{n}"));
        }
        if self.y.rows() != n || !self.y.is_square() {
            return fail(format!("Y must be {n}x{n}"));
        }
        if !self.x.is_unit_upper_triangular() {
            return fail("X must be unit upper triangular".into());
        }
        for i in 0..n {
            for j in i + 1..n {
                if !is_padic_integer(self.x.at(i, j), p) {
                    return fail(format!(
                        "X[{}][{}] = {} is not a {p}-adic integer",
                        i + 1,
                        j + 1,
                        rational_to_string(self.x.at(i, j))
                    ));
                }
            }
        }
        if !self.y.is_diagonal() {
            return fail("Y must be diagonal".into());
        }
        for (i, d) in self.y.diagonal().iter().enumerate() {
            if !is_padic_unit(d, p) {
                return fail(format!(
                    "Y[{i}][{i}] = {} is not a {p}-adic unit",
                    rational_to_string(d)
                ));
            }
        }
        if !self.y.det()?.is_one() {
            return fail("Y must have determinant 1".into());
        }
        Ok(())
    }
}

/// Moves a decomposition along the non-uniqueness family:
/// `N' = N A X A^-1`, `A' = A Y`, `K' = (X Y)^-1 K`. The product and the
/// dilaton valuations are unchanged.
pub fn apply_family(dec: &PadicIwasawa, params: &FamilyParams) -> Result<PadicIwasawa> {
    let n = dec.matrix.rows();
    let p = dec.prime;
    params.validate(n, p)?;

    // A X A^-1 entrywise: a_i * x_ij / a_j stays unit upper triangular.
    let a_diag = dec.a.diagonal();
    if a_diag.iter().any(Zero::is_zero) {
        return Err(Error::SingularMatrix);
    }
    let mut conj = RatMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            conj.set(i, j, &a_diag[i] * params.x.at(i, j) / &a_diag[j]);
        }
    }
    let n_new = dec.n.mul(&conj)?;
    let a_new = dec.a.mul(&params.y)?;
    let y_inv = RatMatrix::from_diagonal(params.y.diagonal().iter().map(|d| d.recip()).collect());
    let k_new = y_inv.mul(&params.x.invert_unit_upper())?.mul(&dec.k)?;
    Ok(PadicIwasawa::assemble(
        p,
        dec.matrix.clone(),
        n_new,
        a_new,
        k_new,
    ))
}

/// Itemized membership check of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    /// N is unit upper triangular.
    pub n_unit_upper: bool,
    /// A is diagonal with determinant exactly one.
    pub a_diagonal_det_one: bool,
    /// Every entry of K has valuation >= 0.
    pub k_integral: bool,
    /// det K = 1 exactly.
    pub k_det_one: bool,
    /// N * A * K equals the recorded matrix.
    pub reconstructs: bool,
    pub pass: bool,
}

pub fn verify_membership(dec: &PadicIwasawa) -> MembershipReport {
    let p = dec.prime;
    let n_unit_upper = dec.n.is_unit_upper_triangular();
    let a_diagonal_det_one = dec.a.is_diagonal()
        && dec.a.det().map(|d| d.is_one()).unwrap_or(false);
    let k_integral = dec.k.is_square()
        && (0..dec.k.rows())
            .all(|i| (0..dec.k.cols()).all(|j| is_padic_integer(dec.k.at(i, j), p)));
    let k_det_one = dec.k.det().map(|d| d.is_one()).unwrap_or(false);
    let reconstructs = dec
        .n
        .mul(&dec.a)
        .and_then(|na| na.mul(&dec.k))
        .map(|prod| prod == dec.matrix)
        .unwrap_or(false);
    let pass = n_unit_upper && a_diagonal_det_one && k_integral && k_det_one && reconstructs;
    MembershipReport {
        n_unit_upper,
        a_diagonal_det_one,
        k_integral,
        k_det_one,
        reconstructs,
        pass,
    }
}
