//! Generalized Pluecker coordinates and the per-place norms that make the
//! dilaton-norm formula uniform across finite and infinite places: at a
//! finite prime the norm of `y_k` is the reciprocal of the max-norm of the
//! order-(n-k) coordinate vector, at the real place `y_k^2` is the
//! reciprocal of its squared Euclidean norm.

use num::Zero;

use crate::error::{Error, Result};
use crate::matrix::{IndexSubset, RatMatrix};
use crate::scalar::{padic_valuation_unchecked, rational_to_string, Place, Rational, Valuation};

/// The order-k Pluecker coordinate vector of a matrix: all order-k
/// anti-leading minors, one component per column subset in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlueckerVector {
    pub order: usize,
    pub components: Vec<(IndexSubset, Rational)>,
}

impl PlueckerVector {
    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.components.iter().map(|(_, v)| v)
    }
}

/// Computes the k-th generalized Pluecker coordinate vector, `1 <= k <= n-1`.
pub fn pluecker(m: &RatMatrix, k: usize) -> Result<PlueckerVector> {
    let n = m.ensure_square()?;
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange(format!(
            "Pluecker order {k} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    Ok(PlueckerVector {
        order: k,
        components: m.anti_leading_minors(k)?,
    })
}

/// Norm descriptor of a coordinate vector at one place, kept exact: the
/// finite-place max norm is encoded by the minimal valuation across
/// components, the real norm by the exact sum of squared components.
#[derive(Debug, Clone, PartialEq)]
pub enum PlaceNorm {
    Finite { min_valuation: Valuation },
    Infinite { squared: Rational },
}

pub fn place_norm(v: &PlueckerVector, place: Place) -> Result<PlaceNorm> {
    if v.values().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    Ok(match place {
        Place::Finite(p) => PlaceNorm::Finite {
            min_valuation: v
                .values()
                .map(|x| padic_valuation_unchecked(x, p))
                .min()
                .expect("nonempty vector"),
        },
        Place::Infinite => PlaceNorm::Infinite {
            squared: v.values().map(|x| x * x).sum(),
        },
    })
}

/// Norm descriptor of the dilaton `y_k` at one place.
#[derive(Debug, Clone, PartialEq)]
pub enum DilatonNorm {
    /// `v_p(y_k)`; the norm itself is `p^(-valuation)`.
    Finite { valuation: Valuation },
    /// `y_k^2`, exact.
    Infinite { y_squared: Rational },
}

/// The place-uniform dilaton norm formula: `|y_k| = 1 / ||p_{n-k}(M)||` at
/// every place. Finite places report the valuation of `y_k`; the real place
/// reports `y_k^2` exactly.
pub fn dilaton_norm_unified(m: &RatMatrix, k: usize, place: Place) -> Result<DilatonNorm> {
    let n = m.ensure_square()?;
    let det = m.det()?;
    if !num::One::is_one(&det) {
        return Err(Error::NotSpecialLinear {
            det: rational_to_string(&det),
        });
    }
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange(format!(
            "dilaton index {k} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    let coords = pluecker(m, n - k)?;
    Ok(match place_norm(&coords, place)? {
        PlaceNorm::Finite { min_valuation } => DilatonNorm::Finite {
            valuation: min_valuation.neg(),
        },
        PlaceNorm::Infinite { squared } => DilatonNorm::Infinite {
            y_squared: squared.recip(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::epsilon_product;
    use crate::sample::{rand_matrix, rand_special_linear, rand_unimodular, seeded_rng};
    use crate::scalar::{rat, rat_int};
    use rand::Rng;

    #[test]
    fn pluecker_of_identity() {
        let id = RatMatrix::identity(4);
        for k in 1..4 {
            let v = pluecker(&id, k).unwrap();
            let nonzero: Vec<_> = v
                .components
                .iter()
                .filter(|(_, x)| !x.is_zero())
                .collect();
            assert_eq!(nonzero.len(), 1);
            assert_eq!(nonzero[0].1, rat_int(1));
            let last: Vec<usize> = (4 - k + 1..=4).collect();
            assert_eq!(nonzero[0].0.indices(), last.as_slice());
        }
    }

    #[test]
    fn pluecker_bottom_row_readoff() {
        let m = RatMatrix::from_str_rows(&[&["1", "0"], &["1/5", "1"]]).unwrap();
        let v = pluecker(&m, 1).unwrap();
        let values: Vec<Rational> = v.values().cloned().collect();
        assert_eq!(values, vec![rat(1, 5), rat_int(1)]);
    }

    #[test]
    fn pluecker_matches_direct_minors() {
        let mut rng = seeded_rng(61);
        let m = rand_matrix(&mut rng, 5, 5, 5, 3);
        for k in 1..5 {
            let v = pluecker(&m, k).unwrap();
            let rows: Vec<usize> = (5 - k + 1..=5).collect();
            for (subset, value) in &v.components {
                assert_eq!(m.minor(&rows, subset.indices()).unwrap(), *value);
            }
        }
    }

    #[test]
    fn pluecker_order_bounds() {
        let id = RatMatrix::identity(3);
        assert!(pluecker(&id, 0).is_err());
        assert!(pluecker(&id, 3).is_err());
    }

    #[test]
    fn place_norm_examples() {
        let unit = PlueckerVector {
            order: 1,
            components: vec![
                (IndexSubset::new(vec![1], 3).unwrap(), rat_int(1)),
                (IndexSubset::new(vec![2], 3).unwrap(), rat_int(0)),
                (IndexSubset::new(vec![3], 3).unwrap(), rat_int(0)),
            ],
        };
        assert_eq!(
            place_norm(&unit, Place::finite(7).unwrap()).unwrap(),
            PlaceNorm::Finite {
                min_valuation: Valuation::Finite(0)
            }
        );

        let v = PlueckerVector {
            order: 1,
            components: vec![
                (IndexSubset::new(vec![1], 2).unwrap(), rat(1, 5)),
                (IndexSubset::new(vec![2], 2).unwrap(), rat_int(1)),
            ],
        };
        assert_eq!(
            place_norm(&v, Place::finite(5).unwrap()).unwrap(),
            PlaceNorm::Finite {
                min_valuation: Valuation::Finite(-1)
            }
        );

        let w = PlueckerVector {
            order: 1,
            components: vec![
                (IndexSubset::new(vec![1], 2).unwrap(), rat_int(3)),
                (IndexSubset::new(vec![2], 2).unwrap(), rat_int(4)),
            ],
        };
        assert_eq!(
            place_norm(&w, Place::Infinite).unwrap(),
            PlaceNorm::Infinite {
                squared: rat_int(25)
            }
        );

        let zero = PlueckerVector {
            order: 1,
            components: vec![(IndexSubset::new(vec![1], 1).unwrap(), rat_int(0))],
        };
        assert_eq!(place_norm(&zero, Place::Infinite), Err(Error::ZeroVector));
    }

    #[test]
    fn unified_norm_examples() {
        let id = RatMatrix::identity(3);
        for k in 1..3 {
            assert_eq!(
                dilaton_norm_unified(&id, k, Place::finite(5).unwrap()).unwrap(),
                DilatonNorm::Finite {
                    valuation: Valuation::Finite(0)
                }
            );
            assert_eq!(
                dilaton_norm_unified(&id, k, Place::Infinite).unwrap(),
                DilatonNorm::Infinite {
                    y_squared: rat_int(1)
                }
            );
        }

        let m = RatMatrix::from_str_rows(&[&["1", "0"], &["1/5", "1"]]).unwrap();
        assert_eq!(
            dilaton_norm_unified(&m, 1, Place::finite(5).unwrap()).unwrap(),
            DilatonNorm::Finite {
                valuation: Valuation::Finite(1)
            }
        );

        let d = RatMatrix::from_str_rows(&[&["2", "0"], &["0", "1/2"]]).unwrap();
        assert_eq!(
            dilaton_norm_unified(&d, 1, Place::Infinite).unwrap(),
            DilatonNorm::Infinite {
                y_squared: rat_int(4)
            }
        );
    }

    /// The squared real norm of the order-(n-k) coordinate vector equals
    /// the Gram determinant of the last n-k rows (Cauchy-Binet).
    #[test]
    fn cauchy_binet_identity() {
        let mut rng = seeded_rng(67);
        for _ in 0..10 {
            let n = rng.random_range(2usize..=6);
            let m = rand_matrix(&mut rng, n, n, 4, 2);
            for k in 1..n {
                let rows: Vec<&[Rational]> = (k..n).map(|i| m.row(i)).collect();
                let gram = epsilon_product(&rows, &rows).unwrap();
                let sum_of_squares: Rational = m
                    .anti_leading_minors(n - k)
                    .unwrap()
                    .iter()
                    .map(|(_, v)| v * v)
                    .sum();
                assert_eq!(gram, sum_of_squares, "n={n} k={k}");
            }
        }
    }

    /// Finite places are insensitive to right multiplication by SL(n, Z)
    /// elements; the real place to signed permutations.
    #[test]
    fn compact_invariance() {
        let mut rng = seeded_rng(71);
        for _ in 0..10 {
            let n = rng.random_range(2usize..=4);
            let m = rand_special_linear(&mut rng, n, 3, 3, 2);
            let k_elt = rand_unimodular(&mut rng, n, 2, 3);
            let mk = m.mul(&k_elt).unwrap();
            for k in 1..n {
                for p in [2u64, 3, 5] {
                    let place = Place::finite(p).unwrap();
                    assert_eq!(
                        dilaton_norm_unified(&m, k, place).unwrap(),
                        dilaton_norm_unified(&mk, k, place).unwrap()
                    );
                }
            }
            let perm = crate::sample::rand_signed_permutation(&mut rng, n);
            let mp = perm.apply(&m);
            for k in 1..n {
                assert_eq!(
                    dilaton_norm_unified(&m, k, Place::Infinite).unwrap(),
                    dilaton_norm_unified(&mp, k, Place::Infinite).unwrap()
                );
            }
        }
    }

    #[test]
    fn unified_rejects_non_special_linear() {
        let m = RatMatrix::from_str_rows(&[&["2", "0"], &["0", "1"]]).unwrap();
        assert!(matches!(
            dilaton_norm_unified(&m, 1, Place::Infinite),
            Err(Error::NotSpecialLinear { .. })
        ));
    }
}
