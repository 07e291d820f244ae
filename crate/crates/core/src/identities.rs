//! Exact checkers for the minor identities underpinning the decomposition
//! formulas: the product-of-minors expansion (lemma 1 and its principal-row
//! specialization), the determinant-of-minors factorization (lemma 2), and
//! the telescope identity for epsilon-products in its divisionless
//! cross-multiplied form. Each checker evaluates both sides independently
//! and reports exact equality.

use num::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{epsilon_product, RatMatrix};
use crate::sample::{rand_matrix, seeded_rng};
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Lemma1,
    SpecialLemma1,
    Lemma2,
    Telescope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: IdentityKind,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

impl IdentityReport {
    fn new(identity: IdentityKind, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs == rhs;
        IdentityReport {
            identity,
            lhs,
            rhs,
            pass,
        }
    }
}

fn check_rows(m: &RatMatrix, idx: &[usize]) -> Result<()> {
    for &r in idx {
        if r == 0 || r > m.rows() {
            return Err(Error::IndexOutOfRange(format!(
                "row index {r} outside 1..={}",
                m.rows()
            )));
        }
    }
    Ok(())
}

fn check_cols(m: &RatMatrix, idx: &[usize]) -> Result<()> {
    for &c in idx {
        if c == 0 || c > m.cols() {
            return Err(Error::IndexOutOfRange(format!(
                "column index {c} outside 1..={}",
                m.cols()
            )));
        }
    }
    Ok(())
}

/// Product-of-minors expansion: with |r| = |c| = k and |d| = k-1,
///
/// `M(r; c) * M(r_2..r_k; d)` equals the alternating sum over `a` of
/// `M(r; c_a, d) * M(r_2..r_k; c with c_a removed)`.
pub fn lemma1_check(
    m: &RatMatrix,
    r: &[usize],
    c: &[usize],
    d: &[usize],
) -> Result<IdentityReport> {
    lemma1_inner(m, r, c, d, IdentityKind::Lemma1)
}

fn lemma1_inner(
    m: &RatMatrix,
    r: &[usize],
    c: &[usize],
    d: &[usize],
    kind: IdentityKind,
) -> Result<IdentityReport> {
    let k = r.len();
    if k == 0 || c.len() != k || d.len() != k - 1 {
        return Err(Error::DimensionMismatch(format!(
            "lemma 1 needs |r| = |c| = k >= 1 and |d| = k-1, got {}, {}, {}",
            r.len(),
            c.len(),
            d.len()
        )));
    }
    check_rows(m, r)?;
    check_cols(m, c)?;
    check_cols(m, d)?;

    let lhs = m.minor(r, c)? * m.minor(&r[1..], d)?;
    let mut rhs = Rational::zero();
    for a in 0..k {
        let mut first_cols = vec![c[a]];
        first_cols.extend_from_slice(d);
        let rest_cols: Vec<usize> = c
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != a)
            .map(|(_, &x)| x)
            .collect();
        let term = m.minor(r, &first_cols)? * m.minor(&r[1..], &rest_cols)?;
        if a % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    Ok(IdentityReport::new(kind, lhs, rhs))
}

/// The specialization of lemma 1 that drives lemma 2: rows `r_1..r_{k+1}`,
/// columns `c_1..c_k` and a shared trailing index `r_{k+1}`, with the
/// d-list set to `r_2..r_{k+1}`.
pub fn speciallemma1_check(m: &RatMatrix, r: &[usize], c: &[usize]) -> Result<IdentityReport> {
    if r.len() < 2 || c.len() + 1 != r.len() {
        return Err(Error::DimensionMismatch(format!(
            "the specialization needs |r| = k+1 >= 2 and |c| = k, got {} and {}",
            r.len(),
            c.len()
        )));
    }
    let mut cols = c.to_vec();
    cols.push(r[r.len() - 1]);
    lemma1_inner(m, r, &cols, &r[1..], IdentityKind::SpecialLemma1)
}

/// Determinant-of-minors factorization: with |r| = k+1 and |c| = k, the
/// k x k determinant with entry (i, j) = `M(r_i, r_{i+1..k+1}; c_j,
/// r_{i+1..k+1})` equals `M(r; c, r_{k+1})` times the product of the
/// principal minors `M(r_i..r_{k+1}; r_i..r_{k+1})` for i = 2..k.
pub fn lemma2_check(m: &RatMatrix, r: &[usize], c: &[usize]) -> Result<IdentityReport> {
    let k = c.len();
    if k == 0 || r.len() != k + 1 {
        return Err(Error::DimensionMismatch(format!(
            "lemma 2 needs |r| = k+1 and |c| = k >= 1, got {} and {}",
            r.len(),
            c.len()
        )));
    }
    check_rows(m, r)?;
    check_cols(m, c)?;
    check_cols(m, &r[1..])?; // r's reused as column indices on both sides

    let mut entries = Vec::with_capacity(k * k);
    for i in 1..=k {
        let mut rows = vec![r[i - 1]];
        rows.extend_from_slice(&r[i..]);
        for j in 1..=k {
            let mut cols = vec![c[j - 1]];
            cols.extend_from_slice(&r[i..]);
            entries.push(m.minor(&rows, &cols)?);
        }
    }
    let lhs = RatMatrix::new(k, k, entries)?.det()?;

    let mut full_cols = c.to_vec();
    full_cols.push(r[k]);
    let mut rhs = m.minor(r, &full_cols)?;
    for i in 2..=k {
        rhs *= m.minor(&r[i - 1..], &r[i - 1..])?;
    }
    Ok(IdentityReport::new(IdentityKind::Lemma2, lhs, rhs))
}

/// Telescope identity in cross-multiplied form, valid even when the
/// quotient denominators vanish. With rows `V_i` of M and
/// `mu < nu <= r <= n`:
///
/// ```text
/// X = eps(V_mu, V_r.., V_n; V_nu, V_r.., V_n) * eps(V_{r+1}..; V_{r+1}..)
/// Y = eps(V_mu, V_{r+1}..; V_nu, V_{r+1}..)   * eps(V_r..; V_r..)
/// Z = eps(V_mu, V_{r+1}..; V_r..) * eps(V_nu, V_{r+1}..; V_r..)
/// ```
///
/// passes iff `X = Y - Z`. When both Gram denominators are nonzero the
/// quotient form is verified as well and folded into the result.
pub fn telescope_check(m: &RatMatrix, mu: usize, nu: usize, r: usize) -> Result<IdentityReport> {
    let n = m.ensure_square()?;
    if !(mu >= 1 && mu < nu && nu <= r && r <= n) {
        return Err(Error::IndexOutOfRange(format!(
            "telescope needs 1 <= mu < nu <= r <= {n}, got ({mu}, {nu}, {r})"
        )));
    }
    let row = |i: usize| m.row(i - 1);
    let with_tail = |head: usize, from: usize| -> Vec<&[Rational]> {
        let mut v = vec![row(head)];
        v.extend((from..=n).map(row));
        v
    };
    let tail = |from: usize| -> Vec<&[Rational]> { (from..=n).map(row).collect() };

    let x = epsilon_product(&with_tail(mu, r), &with_tail(nu, r))?
        * epsilon_product(&tail(r + 1), &tail(r + 1))?;
    let y = epsilon_product(&with_tail(mu, r + 1), &with_tail(nu, r + 1))?
        * epsilon_product(&tail(r), &tail(r))?;
    let z = epsilon_product(&with_tail(mu, r + 1), &tail(r))?
        * epsilon_product(&with_tail(nu, r + 1), &tail(r))?;
    let rhs = y - z;
    let mut report = IdentityReport::new(IdentityKind::Telescope, x, rhs);

    // Quotient form of the same identity, defined when both Gram
    // determinants are nonzero and nu < r (so the axion factors exist).
    if nu < r {
        let g_r = epsilon_product(&tail(r), &tail(r))?;
        let g_r1 = epsilon_product(&tail(r + 1), &tail(r + 1))?;
        if !g_r.is_zero() && !g_r1.is_zero() {
            let x_mu = epsilon_product(&with_tail(mu, r + 1), &with_tail(r, r + 1))? / &g_r;
            let x_nu = epsilon_product(&with_tail(nu, r + 1), &with_tail(r, r + 1))? / &g_r;
            let lhs_q = epsilon_product(&with_tail(mu, r + 1), &with_tail(nu, r + 1))? / &g_r1
                - (&g_r / &g_r1) * x_mu * x_nu;
            let rhs_q = epsilon_product(&with_tail(mu, r), &with_tail(nu, r))? / &g_r;
            report.pass = report.pass && lhs_q == rhs_q;
        }
    }
    Ok(report)
}

/// Pass/fail tally for one identity across a fuzz run.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct IdentityCounts {
    pub checks: usize,
    pub failures: usize,
}

impl IdentityCounts {
    fn record(&mut self, report: &IdentityReport) {
        self.checks += 1;
        if !report.pass {
            self.failures += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub trials_per_size: usize,
    pub tuple_cap: usize,
    pub lemma1: IdentityCounts,
    pub speciallemma1: IdentityCounts,
    pub lemma2: IdentityCounts,
    pub telescope: IdentityCounts,
    pub pass: bool,
}

/// Runs all identity checkers over `trials` random rational matrices per
/// size. Index tuples are enumerated exhaustively (over increasing index
/// lists) for n <= 4 and sampled up to `tuple_cap` per matrix for larger n.
pub fn run_identity_suite(
    sizes: &[usize],
    trials: usize,
    tuple_cap: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport {
        seed,
        sizes: sizes.to_vec(),
        trials_per_size: trials,
        tuple_cap,
        lemma1: IdentityCounts::default(),
        speciallemma1: IdentityCounts::default(),
        lemma2: IdentityCounts::default(),
        telescope: IdentityCounts::default(),
        pass: false,
    };
    for &n in sizes {
        if n < 2 {
            return Err(Error::DimensionMismatch(
                "identity suite needs sizes >= 2".into(),
            ));
        }
        for _ in 0..trials {
            let m = rand_matrix(&mut rng, n, n, 5, 3);
            let exhaustive = n <= 4;

            for (r, c, d) in lemma1_tuples(n, exhaustive, tuple_cap, &mut rng) {
                report.lemma1.record(&lemma1_check(&m, &r, &c, &d)?);
            }
            for (r, c) in lemma2_tuples(n, exhaustive, tuple_cap, &mut rng) {
                report.speciallemma1.record(&speciallemma1_check(&m, &r, &c)?);
                report.lemma2.record(&lemma2_check(&m, &r, &c)?);
            }
            for mu in 1..n {
                for nu in mu + 1..=n {
                    for r in nu..=n {
                        report.telescope.record(&telescope_check(&m, mu, nu, r)?);
                    }
                }
            }
        }
    }
    report.pass = report.lemma1.failures == 0
        && report.speciallemma1.failures == 0
        && report.lemma2.failures == 0
        && report.telescope.failures == 0;
    Ok(report)
}

fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::matrix::k_subsets_lex(n, k)
        .into_iter()
        .map(|s| s.indices().to_vec())
        .collect()
}

fn rand_increasing<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (1..=n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

type Lemma1Tuple = (Vec<usize>, Vec<usize>, Vec<usize>);

fn lemma1_tuples<R: Rng>(
    n: usize,
    exhaustive: bool,
    cap: usize,
    rng: &mut R,
) -> Vec<Lemma1Tuple> {
    let mut out = Vec::new();
    if exhaustive {
        for k in 1..=n {
            for r in increasing_subsets(n, k) {
                for c in increasing_subsets(n, k) {
                    for d in increasing_subsets(n, k - 1) {
                        out.push((r.clone(), c.clone(), d));
                    }
                }
            }
        }
    } else {
        for _ in 0..cap {
            let k = rng.random_range(1..=n);
            out.push((
                rand_increasing(rng, n, k),
                rand_increasing(rng, n, k),
                rand_increasing(rng, n, k - 1),
            ));
        }
    }
    out
}

fn lemma2_tuples<R: Rng>(
    n: usize,
    exhaustive: bool,
    cap: usize,
    rng: &mut R,
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    if exhaustive {
        for k in 1..n {
            for r in increasing_subsets(n, k + 1) {
                for c in increasing_subsets(n, k) {
                    out.push((r.clone(), c));
                }
            }
        }
    } else {
        for _ in 0..cap {
            let k = rng.random_range(1..n);
            out.push((rand_increasing(rng, n, k + 1), rand_increasing(rng, n, k)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{rand_special_linear, seeded_rng};
    use crate::scalar::rat_int;

    fn sample_matrix() -> RatMatrix {
        let mut rng = seeded_rng(89);
        rand_matrix(&mut rng, 5, 5, 5, 3)
    }

    #[test]
    fn lemma1_base_case() {
        let m = sample_matrix();
        let report = lemma1_check(&m, &[2], &[3], &[]).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, *m.at(1, 2));
    }

    #[test]
    fn lemma1_repeated_columns_vanish() {
        let m = sample_matrix();
        let report = lemma1_check(&m, &[1, 2, 3], &[2, 2, 4], &[1, 5]).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, rat_int(0));
        assert_eq!(report.rhs, rat_int(0));
    }

    #[test]
    fn lemma1_random_tuples() {
        let m = sample_matrix();
        let mut rng = seeded_rng(97);
        for _ in 0..100 {
            let k = rng.random_range(1usize..=5);
            let r = rand_increasing(&mut rng, 5, k);
            let c = rand_increasing(&mut rng, 5, k);
            let d = rand_increasing(&mut rng, 5, k - 1);
            let report = lemma1_check(&m, &r, &c, &d).unwrap();
            assert!(report.pass, "r={r:?} c={c:?} d={d:?}");
        }
    }

    #[test]
    fn lemma1_validation() {
        let m = sample_matrix();
        assert!(matches!(
            lemma1_check(&m, &[1, 2], &[1], &[2]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            lemma1_check(&m, &[1, 9], &[1, 2], &[3]),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn speciallemma1_matches_direct_sides() {
        let m = sample_matrix();
        let r = [1usize, 3, 5];
        let c = [2usize, 4];
        let report = speciallemma1_check(&m, &r, &c).unwrap();
        assert!(report.pass);
        let lhs = m.minor(&[1, 3, 5], &[2, 4, 5]).unwrap() * m.minor(&[3, 5], &[3, 5]).unwrap();
        assert_eq!(report.lhs, lhs);
    }

    #[test]
    fn lemma2_base_case() {
        let m = sample_matrix();
        let report = lemma2_check(&m, &[2, 4], &[1]).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, m.minor(&[2, 4], &[1, 4]).unwrap());
    }

    #[test]
    fn lemma2_mid_orders() {
        let m = sample_matrix();
        for (r, c) in [
            (vec![1usize, 2, 3], vec![2usize, 4]),
            (vec![1, 3, 4], vec![1, 5]),
            (vec![2, 3, 4, 5], vec![1, 2, 3]),
            (vec![1, 2, 3, 4, 5], vec![1, 2, 4, 5]),
        ] {
            let report = lemma2_check(&m, &r, &c).unwrap();
            assert!(report.pass, "r={r:?} c={c:?}");
        }
    }

    #[test]
    fn telescope_on_identity_matrix() {
        let id = RatMatrix::identity(4);
        for mu in 1..4 {
            for nu in mu + 1..=4 {
                for r in nu..=4 {
                    assert!(telescope_check(&id, mu, nu, r).unwrap().pass);
                }
            }
        }
    }

    #[test]
    fn telescope_boundary_r_equals_n() {
        let m = sample_matrix();
        let report = telescope_check(&m, 1, 3, 5).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn telescope_on_special_linear() {
        let mut rng = seeded_rng(101);
        let m = rand_special_linear(&mut rng, 5, 3, 3, 2);
        for mu in 1..5 {
            for nu in mu + 1..=5 {
                for r in nu..=5 {
                    let report = telescope_check(&m, mu, nu, r).unwrap();
                    assert!(report.pass, "({mu}, {nu}, {r})");
                }
            }
        }
    }

    #[test]
    fn telescope_index_validation() {
        let m = sample_matrix();
        assert!(telescope_check(&m, 2, 2, 3).is_err());
        assert!(telescope_check(&m, 1, 2, 6).is_err());
        assert!(telescope_check(&m, 0, 1, 2).is_err());
    }

    #[test]
    fn suite_runs_clean() {
        let report = run_identity_suite(&[2, 3], 5, 50, 123).unwrap();
        assert!(report.pass);
        assert!(report.lemma1.checks > 0);
        assert!(report.speciallemma1.checks > 0);
        assert!(report.lemma2.checks > 0);
        assert!(report.telescope.checks > 0);
    }
}
