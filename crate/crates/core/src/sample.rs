//! Seeded random generation of matrices and decompositions for the
//! verification suites: determinant-one products of unipotent factors,
//! p-adic integral/unit scalars, and non-uniqueness family parameters.

use num::{One, Zero};
use rand::Rng;

use crate::matrix::{RatMatrix, SignedPermutation};
use crate::padic::FamilyParams;
use crate::scalar::{is_padic_unit, rat, Rational};

/// Deterministic RNG used by the CLI and test suites.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}

/// Random rational with numerator in `[-num_bound, num_bound]` and
/// denominator in `[1, max_den]`.
pub fn rand_rational<R: Rng>(rng: &mut R, num_bound: i64, max_den: i64) -> Rational {
    rat(
        rng.random_range(-num_bound..=num_bound),
        rng.random_range(1..=max_den.max(1)),
    )
}

pub fn rand_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    num_bound: i64,
    max_den: i64,
) -> RatMatrix {
    let data = (0..rows * cols)
        .map(|_| rand_rational(rng, num_bound, max_den))
        .collect();
    RatMatrix::new(rows, cols, data).expect("consistent dimensions")
}

/// Unit upper triangular with random entries above the diagonal.
pub fn rand_unit_upper<R: Rng>(rng: &mut R, n: usize, num_bound: i64, max_den: i64) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, rand_rational(rng, num_bound, max_den));
        }
    }
    m
}

pub fn rand_unit_lower<R: Rng>(rng: &mut R, n: usize, num_bound: i64, max_den: i64) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, rand_rational(rng, num_bound, max_den));
        }
    }
    m
}

/// Uniform random permutation with the sign fix applied, so the matrix form
/// always has determinant +1.
pub fn rand_signed_permutation<R: Rng>(rng: &mut R, n: usize) -> SignedPermutation {
    let mut source: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        source.swap(i, j);
    }
    SignedPermutation::with_determinant_fix(source).expect("valid permutation")
}

/// Random element of SL(n, Q) built as a product of `rounds` triples
/// (unit upper) * (unit lower) * (signed permutation). With `max_den = 1`
/// the entries stay integral, giving an element of SL(n, Z).
pub fn rand_special_linear<R: Rng>(
    rng: &mut R,
    n: usize,
    rounds: usize,
    num_bound: i64,
    max_den: i64,
) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    for _ in 0..rounds.max(1) {
        let upper = rand_unit_upper(rng, n, num_bound, max_den);
        let lower = rand_unit_lower(rng, n, num_bound, max_den);
        m = m.mul(&upper).and_then(|x| x.mul(&lower)).expect("square factors");
        m = rand_signed_permutation(rng, n).apply(&m);
    }
    m
}

/// Random element of SL(n, Z); its entries are p-adic integers at every
/// prime and its determinant is exactly one.
pub fn rand_unimodular<R: Rng>(rng: &mut R, n: usize, rounds: usize, num_bound: i64) -> RatMatrix {
    rand_special_linear(rng, n, rounds, num_bound, 1)
}

/// Random nonsingular matrix with bounded entries, by rejection.
pub fn rand_nonsingular<R: Rng>(rng: &mut R, n: usize, num_bound: i64, max_den: i64) -> RatMatrix {
    loop {
        let m = rand_matrix(rng, n, n, num_bound, max_den);
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// Random p-adic integer: a rational whose denominator is coprime to p.
pub fn rand_padic_integer<R: Rng>(rng: &mut R, p: u64, num_bound: i64) -> Rational {
    let num = rng.random_range(-num_bound..=num_bound);
    let den = loop {
        let d = rng.random_range(1..=num_bound.max(2));
        if d % p as i64 != 0 {
            break d;
        }
    };
    rat(num, den)
}

/// Random p-adic unit: valuation exactly zero.
pub fn rand_padic_unit<R: Rng>(rng: &mut R, p: u64, num_bound: i64) -> Rational {
    loop {
        let x = rand_padic_integer(rng, p, num_bound);
        if !x.is_zero() && is_padic_unit(&x, p) {
            return x;
        }
    }
}

/// Random non-uniqueness family parameters at prime p: X unit upper
/// triangular with p-adic integer entries, Y diagonal with p-adic units of
/// product one.
pub fn rand_family_params<R: Rng>(rng: &mut R, n: usize, p: u64, num_bound: i64) -> FamilyParams {
    let mut x = RatMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            x.set(i, j, rand_padic_integer(rng, p, num_bound));
        }
    }
    let mut diag = Vec::with_capacity(n);
    let mut product = Rational::one();
    for _ in 0..n.saturating_sub(1) {
        let u = rand_padic_unit(rng, p, num_bound);
        product *= &u;
        diag.push(u);
    }
    diag.push(product.recip());
    FamilyParams {
        x,
        y: RatMatrix::from_diagonal(diag),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{is_padic_integer, rat_int};

    #[test]
    fn special_linear_has_det_one() {
        let mut rng = seeded_rng(1);
        for n in 1..=5 {
            let m = rand_special_linear(&mut rng, n, 3, 3, 3);
            assert_eq!(m.det().unwrap(), rat_int(1));
        }
    }

    #[test]
    fn unimodular_is_integral() {
        let mut rng = seeded_rng(2);
        let m = rand_unimodular(&mut rng, 4, 3, 3);
        assert_eq!(m.det().unwrap(), rat_int(1));
        for i in 0..4 {
            for j in 0..4 {
                assert!(m.at(i, j).denom().is_one());
            }
        }
    }

    #[test]
    fn family_params_satisfy_invariants() {
        let mut rng = seeded_rng(3);
        for p in [2u64, 3, 5, 7] {
            let params = rand_family_params(&mut rng, 4, p, 9);
            assert!(params.x.is_unit_upper_triangular());
            for i in 0..4 {
                for j in 0..4 {
                    assert!(is_padic_integer(params.x.at(i, j), p));
                }
            }
            assert!(params.y.is_diagonal());
            assert_eq!(params.y.det().unwrap(), rat_int(1));
            for (i, d) in params.y.diagonal().iter().enumerate() {
                assert!(is_padic_unit(d, p), "slot {i} at p={p}");
            }
        }
    }

    #[test]
    fn seeded_rng_is_deterministic() {
        let a = rand_matrix(&mut seeded_rng(7), 3, 3, 5, 3);
        let b = rand_matrix(&mut seeded_rng(7), 3, 3, 5, 3);
        assert_eq!(a, b);
    }
}
