//! Dense exact matrices over the rationals: minors of arbitrary row/column
//! selections, bulk anti-leading minor enumeration, ordered-subset
//! combinatorics, epsilon-products realized as Gram determinants, and
//! signed column permutations.
//!
//! Index conventions: raw entry access (`at`, `set`) is 0-based storage
//! indexing; everything math-facing (minor row/column lists, subsets,
//! pivot columns) is 1-based, matching the usual notation for minors.

use num::bigint::BigInt;
use num::{Integer, One, Zero};
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rational_to_string, Rational};

/// Row-major dense matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        RatMatrix::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from `"num"`/`"num/den"` literals.
    pub fn from_str_rows(rows: &[&[&str]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Entry at 0-based `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    /// 0-based row as a slice.
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for q in 0..self.cols {
                    let a = self.at(i, q);
                    if !a.is_zero() {
                        acc += a * other.at(q, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> Result<Rational> {
        self.ensure_square()?;
        let rows: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        Ok(det_of_rational_rows(rows))
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.at(i, i).is_one() && (0..i).all(|j| self.at(i, j).is_zero())
            })
    }

    pub fn is_unit_lower_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.at(i, i).is_one() && (i + 1..self.cols).all(|j| self.at(i, j).is_zero())
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.at(i, j).is_zero()))
    }

    /// Diagonal entries of a square matrix.
    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols))
            .map(|i| self.at(i, i).clone())
            .collect()
    }

    pub fn from_diagonal(diag: Vec<Rational>) -> RatMatrix {
        let n = diag.len();
        let mut m = RatMatrix::zeros(n, n);
        for (i, v) in diag.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Inverse of a unit upper triangular matrix, by back substitution.
    /// Panics if the matrix is not unit upper triangular.
    pub fn invert_unit_upper(&self) -> RatMatrix {
        assert!(self.is_unit_upper_triangular());
        let n = self.rows;
        let mut inv = RatMatrix::identity(n);
        for i in (0..n).rev() {
            for j in 0..n {
                let mut acc = if i == j { Rational::one() } else { Rational::zero() };
                for q in i + 1..n {
                    let u = self.at(i, q);
                    if !u.is_zero() {
                        acc -= u * inv.at(q, j);
                    }
                }
                inv.set(i, j, acc);
            }
        }
        inv
    }

    /// Embeds this n x n matrix as the top-left block of an (n+1) x (n+1)
    /// identity-padded matrix.
    pub fn embed_top_left(&self) -> RatMatrix {
        let n = self.rows;
        let mut out = RatMatrix::identity(n + 1);
        for i in 0..n {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        out
    }

    /// Conjugation by the reversal matrix: reverses both the row and the
    /// column order (a half-turn rotation of the entries).
    pub fn reversed(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(self.rows - 1 - i, self.cols - 1 - j, self.at(i, j).clone());
            }
        }
        out
    }

    fn check_indices(&self, rows: &[usize], cols: &[usize]) -> Result<()> {
        if rows.len() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "minor needs equally many rows and columns, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        if rows.len() > self.rows.min(self.cols) {
            return Err(Error::IndexOutOfRange(format!(
                "minor order {} exceeds matrix size {}x{}",
                rows.len(),
                self.rows,
                self.cols
            )));
        }
        for &r in rows {
            if r == 0 || r > self.rows {
                return Err(Error::IndexOutOfRange(format!(
                    "row index {r} outside 1..={}",
                    self.rows
                )));
            }
        }
        for &c in cols {
            if c == 0 || c > self.cols {
                return Err(Error::IndexOutOfRange(format!(
                    "column index {c} outside 1..={}",
                    self.cols
                )));
            }
        }
        Ok(())
    }

    /// Minor of order `k`: the determinant of the submatrix selected by the
    /// 1-based `rows` and `cols`, taken in the given order with no extra
    /// sign. Repeated indices are allowed (the minor then vanishes). The
    /// empty selection gives 1.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        self.check_indices(rows, cols)?;
        let sub: Vec<Vec<Rational>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.at(r - 1, c - 1).clone()).collect())
            .collect();
        Ok(det_of_rational_rows(sub))
    }

    /// All order-`k` anti-leading minors: rows fixed to the last `k` rows in
    /// order, column subsets enumerated lexicographically. Values are shared
    /// through a memoized Laplace expansion along the top row of each block,
    /// so the whole family costs O(n * 2^n) ring operations rather than
    /// C(n,k) independent determinants.
    pub fn anti_leading_minors(&self, k: usize) -> Result<Vec<(IndexSubset, Rational)>> {
        let n = self.ensure_square()?;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange(format!(
                "anti-leading minor order {k} outside 1..={n}"
            )));
        }
        if n > 64 {
            return Err(Error::IndexOutOfRange(
                "anti-leading minor enumeration supports n <= 64".into(),
            ));
        }
        // prev maps a column bitmask of size j-1 to the minor over the last
        // j-1 rows; level j expands along row n-j (0-based).
        let mut prev: HashMap<u64, Rational> = HashMap::new();
        prev.insert(0, Rational::one());
        for level in 1..=k {
            let row = n - level;
            let mut cur: HashMap<u64, Rational> =
                HashMap::with_capacity(binomial(n, level));
            for combo in Combinations::new(n, level) {
                let mask = combo.iter().fold(0u64, |m, &c| m | (1 << c));
                let mut acc = Rational::zero();
                for (t, &c) in combo.iter().enumerate() {
                    let top = self.at(row, c);
                    if top.is_zero() {
                        continue;
                    }
                    let sub = &prev[&(mask & !(1 << c))];
                    if sub.is_zero() {
                        continue;
                    }
                    let term = top * sub;
                    if t % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                cur.insert(mask, acc);
            }
            prev = cur;
        }
        let mut out = Vec::with_capacity(binomial(n, k));
        for combo in Combinations::new(n, k) {
            let mask = combo.iter().fold(0u64, |m, &c| m | (1 << c));
            let subset = IndexSubset::new(combo.iter().map(|&c| c + 1).collect(), n)?;
            out.push((subset, prev[&mask].clone()));
        }
        Ok(out)
    }

    /// Max-norm of the entries after conversion to binary64.
    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|x| num::ToPrimitive::to_f64(x).map_or(f64::INFINITY, f64::abs))
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(rational_to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Strictly increasing 1-based column positions; the sigma of the ordered
/// subset enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    indices: Vec<usize>,
}

impl IndexSubset {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::IndexOutOfRange(format!(
                    "subset {indices:?} is not strictly increasing"
                )));
            }
        }
        if let Some(&first) = indices.first() {
            if first == 0 {
                return Err(Error::IndexOutOfRange("subset indices are 1-based".into()));
            }
        }
        if let Some(&last) = indices.last() {
            if last > n {
                return Err(Error::IndexOutOfRange(format!(
                    "subset index {last} exceeds {n}"
                )));
            }
        }
        Ok(IndexSubset { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// All k-subsets of {1..n} in lexicographic order.
pub fn k_subsets_lex(n: usize, k: usize) -> Vec<IndexSubset> {
    Combinations::new(n, k)
        .map(|c| IndexSubset {
            indices: c.iter().map(|&x| x + 1).collect(),
        })
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Iterator over 0-based k-combinations of {0..n-1} in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, k, state }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.state.clone()?;
        // advance
        let next = {
            let mut s = cur.clone();
            let mut i = self.k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if s[i] < self.n - (self.k - i) {
                    s[i] += 1;
                    for j in i + 1..self.k {
                        s[j] = s[j - 1] + 1;
                    }
                    break Some(s);
                }
            }
        };
        self.state = next;
        Some(cur)
    }
}

/// Fraction-free Bareiss determinant over the integers, with row swaps when
/// a pivot vanishes.
fn bareiss_det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev; // exact by the Bareiss identity
            }
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[n - 1][n - 1]);
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant of rational rows: denominators are cleared per row, the
/// integer Bareiss kernel runs, and the scale is divided back out.
pub(crate) fn det_of_rational_rows(rows: Vec<Vec<Rational>>) -> Rational {
    if rows.is_empty() {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    Rational::new(bareiss_det_int(int_rows), scale)
}

/// Totally antisymmetric product of two equally long lists of n-vectors,
/// realized as the determinant of their pairwise dot-product (Gram) matrix.
/// Empty lists give 1.
pub fn epsilon_product(a: &[&[Rational]], b: &[&[Rational]]) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "epsilon product needs equally many vectors on both sides, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let m = a.len();
    if m == 0 {
        return Ok(Rational::one());
    }
    let dim = a[0].len();
    if a.iter().chain(b.iter()).any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(
            "epsilon product vectors must share one dimension".into(),
        ));
    }
    if m > dim {
        return Err(Error::DimensionMismatch(format!(
            "epsilon product of {m} vectors of dimension {dim} vanishes identically"
        )));
    }
    let gram: Vec<Vec<Rational>> = a
        .iter()
        .map(|ai| b.iter().map(|bj| dot(ai, bj)).collect())
        .collect();
    Ok(det_of_rational_rows(gram))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// A column permutation with an optional -1 scaling of the leftmost column
/// of the permuted result, used to repair the determinant of odd
/// permutations. `source[j]` is the 0-based original column placed at
/// position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    source: Vec<usize>,
    negate_first: bool,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            source: (0..n).collect(),
            negate_first: false,
        }
    }

    pub fn new(source: Vec<usize>, negate_first: bool) -> Result<Self> {
        let n = source.len();
        let mut seen = vec![false; n];
        for &c in &source {
            if c >= n || seen[c] {
                return Err(Error::IndexOutOfRange(format!(
                    "{source:?} is not a bijection on 0..{n}"
                )));
            }
            seen[c] = true;
        }
        Ok(SignedPermutation { source, negate_first })
    }

    /// Builds the permutation and sets the -1 scaling exactly when the
    /// permutation is odd, so the matrix form has determinant +1.
    pub fn with_determinant_fix(source: Vec<usize>) -> Result<Self> {
        let mut p = SignedPermutation::new(source, false)?;
        p.negate_first = p.is_odd();
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.source.len()
    }

    /// 0-based source column for each target position.
    pub fn source_columns(&self) -> &[usize] {
        &self.source
    }

    pub fn negate_first(&self) -> bool {
        self.negate_first
    }

    pub fn is_identity(&self) -> bool {
        !self.negate_first && self.source.iter().enumerate().all(|(j, &c)| j == c)
    }

    /// Parity of the underlying permutation.
    pub fn is_odd(&self) -> bool {
        let n = self.source.len();
        let mut inversions = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.source[i] > self.source[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    /// Determinant of the matrix form: +1 iff the sign fix matches parity.
    pub fn determinant_is_one(&self) -> bool {
        self.negate_first == self.is_odd()
    }

    /// Computes `M * P` for this signed permutation `P`: column `j` of the
    /// result is the source column, and the leftmost result column is
    /// negated when the sign fix is active.
    pub fn apply(&self, m: &RatMatrix) -> RatMatrix {
        assert_eq!(m.cols(), self.n());
        let mut out = RatMatrix::zeros(m.rows(), m.cols());
        for j in 0..self.n() {
            let c = self.source[j];
            for i in 0..m.rows() {
                let v = m.at(i, c).clone();
                out.set(i, j, if self.negate_first && j == 0 { -v } else { v });
            }
        }
        out
    }

    /// Computes `M * P^-1`.
    pub fn apply_inverse(&self, m: &RatMatrix) -> RatMatrix {
        assert_eq!(m.cols(), self.n());
        let mut out = RatMatrix::zeros(m.rows(), m.cols());
        for j in 0..self.n() {
            let c = self.source[j];
            for i in 0..m.rows() {
                let v = m.at(i, j).clone();
                out.set(i, c, if self.negate_first && j == 0 { -v } else { v });
            }
        }
        out
    }

    /// Matrix form: `M * P == self.apply(&M)` for every `M`.
    pub fn as_matrix(&self) -> RatMatrix {
        let n = self.n();
        let mut out = RatMatrix::zeros(n, n);
        for j in 0..n {
            let sign = if self.negate_first && j == 0 {
                -Rational::one()
            } else {
                Rational::one()
            };
            out.set(self.source[j], j, sign);
        }
        out
    }
}
