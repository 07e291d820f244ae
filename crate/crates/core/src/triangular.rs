//! Exact LU- and UL-factorizations of nonsingular matrices.
//!
//! `lu_decompose` produces `M = L D U P^-1` with the leading principal
//! minors of `M P` all nonzero; `strong_ul_decompose` produces
//! `M = V Delta Lambda Pi_a^-1` where the caller chooses which column ends
//! up rightmost (its bottom entry must be nonzero) and every anti-leading
//! principal minor of `M Pi_a` is nonzero. Unpivoted variants are provided
//! for matrices that are already arranged.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{RatMatrix, SignedPermutation};
use crate::scalar::Rational;

/// `M = L D U P^-1`: unit lower L, diagonal D, unit upper U, and a signed
/// column permutation with determinant +1.
#[derive(Debug, Clone, PartialEq)]
pub struct LUResult {
    pub l: RatMatrix,
    pub d: RatMatrix,
    pub u: RatMatrix,
    pub p: SignedPermutation,
}

impl LUResult {
    /// Cumulative diagonal products: `ys()[p-1]` is the order-p leading
    /// principal minor of `M P`.
    pub fn ys(&self) -> Vec<Rational> {
        cumulative_products(&self.d.diagonal())
    }

    pub fn reconstruct(&self) -> RatMatrix {
        let ldu = self
            .l
            .mul(&self.d)
            .and_then(|ld| ld.mul(&self.u))
            .expect("factor dimensions agree");
        self.p.apply_inverse(&ldu)
    }
}

/// `M = V Delta Lambda Pi^-1`: unit upper V, diagonal Delta, unit lower
/// Lambda. `etas[p-1]` is the reciprocal of the order-(n-p) anti-leading
/// principal minor of `M Pi`, so for det-1 input the Delta diagonal reads
/// `(eta_1, eta_2/eta_1, ..., 1/eta_{n-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ULResult {
    pub v: RatMatrix,
    pub delta: RatMatrix,
    pub lambda: RatMatrix,
    pub pi: SignedPermutation,
    pub etas: Vec<Rational>,
}

impl ULResult {
    pub fn reconstruct(&self) -> RatMatrix {
        let vdl = self
            .v
            .mul(&self.delta)
            .and_then(|vd| vd.mul(&self.lambda))
            .expect("factor dimensions agree");
        self.pi.apply_inverse(&vdl)
    }
}

fn cumulative_products(diag: &[Rational]) -> Vec<Rational> {
    let mut run = Rational::one();
    diag.iter()
        .map(|d| {
            run *= d;
            run.clone()
        })
        .collect()
}

/// eta_p = (product of the first p Delta entries) / det, for p = 1..n-1.
fn etas_from_delta(delta: &RatMatrix) -> Vec<Rational> {
    let diag = delta.diagonal();
    let det: Rational = diag.iter().product();
    let mut etas = Vec::with_capacity(diag.len().saturating_sub(1));
    let mut run = Rational::one();
    for d in &diag[..diag.len() - 1] {
        run *= d;
        etas.push(&run / &det);
    }
    etas
}

/// Finds a signed column permutation P such that every leading principal
/// minor of `M P` is nonzero, by forward elimination choosing the
/// smallest-index usable column at each step.
pub fn find_leading_permutation(m: &RatMatrix) -> Result<SignedPermutation> {
    let n = m.ensure_square()?;
    let mut b = m.clone();
    let mut used = vec![false; n];
    let mut source = vec![0usize; n];
    for pos in 0..n {
        let Some(c) = (0..n).find(|&c| !used[c] && !b.at(pos, c).is_zero()) else {
            return Err(Error::SingularMatrix);
        };
        source[pos] = c;
        used[c] = true;
        let pivot = b.at(pos, c).clone();
        for r in pos + 1..n {
            let factor = b.at(r, c) / &pivot;
            if factor.is_zero() {
                continue;
            }
            for cc in 0..n {
                if used[cc] {
                    continue;
                }
                let delta = &factor * b.at(pos, cc);
                let cur = b.at(r, cc).clone();
                b.set(r, cc, cur - delta);
            }
        }
    }
    SignedPermutation::with_determinant_fix(source)
}

/// Finds a signed permutation Pi_a moving column `a` (1-based) to the
/// rightmost position such that every anti-leading principal minor of
/// `M Pi_a` is nonzero. Builds Pi by elimination from the bottom row
/// upward, at each step taking the smallest-index usable column among those
/// keeping column `a` rightmost.
pub fn find_anti_leading_permutation(m: &RatMatrix, a: usize) -> Result<SignedPermutation> {
    let n = m.ensure_square()?;
    if a == 0 || a > n {
        return Err(Error::IndexOutOfRange(format!(
            "pivot column {a} outside 1..={n}"
        )));
    }
    if m.at(n - 1, a - 1).is_zero() {
        return Err(Error::ZeroPivot { row: n, col: a });
    }
    let mut b = m.clone();
    let mut used = vec![false; n];
    let mut source = vec![0usize; n];
    for pos in (0..n).rev() {
        let c = if pos == n - 1 {
            a - 1
        } else {
            match (0..n).find(|&c| !used[c] && !b.at(pos, c).is_zero()) {
                Some(c) => c,
                None => return Err(Error::SingularMatrix),
            }
        };
        source[pos] = c;
        used[c] = true;
        let pivot = b.at(pos, c).clone();
        for r in 0..pos {
            let factor = b.at(r, c) / &pivot;
            if factor.is_zero() {
                continue;
            }
            for cc in 0..n {
                if used[cc] {
                    continue;
                }
                let delta = &factor * b.at(pos, cc);
                let cur = b.at(r, cc).clone();
                b.set(r, cc, cur - delta);
            }
        }
    }
    SignedPermutation::with_determinant_fix(source)
}

/// Doolittle elimination into L, D, U; fails with `ZeroPivot` when a leading
/// principal minor vanishes.
fn lu_core(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix, RatMatrix)> {
    let n = m.ensure_square()?;
    let mut b = m.clone();
    let mut l = RatMatrix::identity(n);
    let mut u = RatMatrix::identity(n);
    let mut d = RatMatrix::zeros(n, n);
    for k in 0..n {
        let pivot = b.at(k, k).clone();
        if pivot.is_zero() {
            return Err(Error::ZeroPivot { row: k + 1, col: k + 1 });
        }
        for j in k + 1..n {
            u.set(k, j, b.at(k, j) / &pivot);
        }
        for i in k + 1..n {
            l.set(i, k, b.at(i, k) / &pivot);
        }
        for i in k + 1..n {
            if l.at(i, k).is_zero() {
                continue;
            }
            for j in k + 1..n {
                let delta = l.at(i, k) * b.at(k, j);
                if delta.is_zero() {
                    continue;
                }
                let cur = b.at(i, j).clone();
                b.set(i, j, cur - delta);
            }
        }
        d.set(k, k, pivot);
    }
    Ok((l, d, u))
}

/// Backward elimination into V, Delta, Lambda; fails with `ZeroPivot` when
/// an anti-leading principal minor vanishes.
fn ul_core(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix, RatMatrix)> {
    let n = m.ensure_square()?;
    let mut b = m.clone();
    let mut v = RatMatrix::identity(n);
    let mut delta = RatMatrix::zeros(n, n);
    for k in (0..n).rev() {
        let pivot = b.at(k, k).clone();
        if pivot.is_zero() {
            return Err(Error::ZeroPivot { row: k + 1, col: k + 1 });
        }
        for p in 0..k {
            v.set(p, k, b.at(p, k) / &pivot);
        }
        for p in 0..k {
            if v.at(p, k).is_zero() {
                continue;
            }
            for c in 0..k {
                let upd = v.at(p, k) * b.at(k, c);
                if upd.is_zero() {
                    continue;
                }
                let cur = b.at(p, c).clone();
                b.set(p, c, cur - upd);
            }
        }
        delta.set(k, k, pivot);
    }
    let mut lambda = RatMatrix::identity(n);
    for i in 0..n {
        for q in 0..i {
            lambda.set(i, q, b.at(i, q) / delta.at(i, i));
        }
    }
    Ok((v, delta, lambda))
}

/// LU-decomposition with an internally chosen signed column permutation:
/// `M = L D U P^-1` for any nonsingular square `M`.
pub fn lu_decompose(m: &RatMatrix) -> Result<LUResult> {
    let p = find_leading_permutation(m)?;
    let (l, d, u) = lu_core(&p.apply(m))?;
    Ok(LUResult { l, d, u, p })
}

/// LU-decomposition of a matrix whose leading principal minors are already
/// all nonzero; the permutation in the result is the identity.
pub fn lu_decompose_unpivoted(m: &RatMatrix) -> Result<LUResult> {
    let n = m.ensure_square()?;
    let (l, d, u) = lu_core(m)?;
    Ok(LUResult {
        l,
        d,
        u,
        p: SignedPermutation::identity(n),
    })
}

/// Strong UL-decomposition `M = V Delta Lambda Pi_a^-1` with column `a`
/// (1-based) forced rightmost. Requires `M` nonsingular and `M[n][a] != 0`.
pub fn strong_ul_decompose(m: &RatMatrix, a: usize) -> Result<ULResult> {
    let pi = find_anti_leading_permutation(m, a)?;
    let (v, delta, lambda) = ul_core(&pi.apply(m))?;
    let etas = etas_from_delta(&delta);
    Ok(ULResult {
        v,
        delta,
        lambda,
        pi,
        etas,
    })
}

/// UL-decomposition of a matrix whose anti-leading principal minors are
/// already all nonzero; the permutation in the result is the identity.
pub fn ul_decompose_unpivoted(m: &RatMatrix) -> Result<ULResult> {
    let n = m.ensure_square()?;
    let (v, delta, lambda) = ul_core(m)?;
    let etas = etas_from_delta(&delta);
    Ok(ULResult {
        v,
        delta,
        lambda,
        pi: SignedPermutation::identity(n),
        etas,
    })
}
