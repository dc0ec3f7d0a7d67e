//! Exact integer linear algebra: Smith normal form, fraction-free determinants
//! and ranks, and the direct-summand test used to validate characteristic
//! functions.
//!
//! Everything here works over arbitrary precision integers. Matrices coming
//! from polytope data are tiny, but elimination intermediates are not bounded
//! by machine words.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is empty ({rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("entry count {found} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("vector {index} has length {found}, expected {expected}")]
    VectorLength { index: usize, expected: usize, found: usize },
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::EntryCount { rows, cols, found: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from a slice of rows. All rows must have equal length.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self, LatticeError>
    where
        T: Clone + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LatticeError::Ragged { row: i, expected: cols, found: row.len() });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::Shape(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn to_grid(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SnfResult {
    /// True when every invariant factor is 1.
    pub fn is_unimodular_diagonal(&self) -> bool {
        self.diagonal.iter().all(One::is_one)
    }

    pub fn product(&self) -> BigInt {
        self.diagonal.iter().product()
    }
}

/// Smith normal form diagonal of `m`. Transform matrices are not tracked.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SnfResult, LatticeError> {
    if m.rows == 0 || m.cols == 0 {
        return Err(LatticeError::Empty { rows: m.rows, cols: m.cols });
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.to_grid();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&a, t, rows, cols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                let pivot_row = a[t].clone();
                for (x, p) in a[i].iter_mut().zip(pivot_row.iter()).skip(t) {
                    *x -= &q * p;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let p = row[t].clone();
                    row[j] -= &q * p;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // A remainder smaller than the pivot survived; promote it.
                let (bi, bj) = smallest_in_cross(&a, t, rows, cols);
                a.swap(t, bi);
                swap_cols(&mut a, t, bj);
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t]))
            });
            match offender {
                Some(i) => {
                    let row = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(row.iter()).skip(t) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..t).map(|i| a[i][i].abs()).collect();
    Ok(SnfResult { rank: diagonal.len(), diagonal })
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}

fn min_abs_nonzero(a: &[Vec<BigInt>], t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(a: &[Vec<BigInt>], t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cross = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
    for (i, j) in cross {
        if !a[i][j].is_zero() && a[i][j].abs() < a[best.0][best.1].abs() {
            best = (i, j);
        }
    }
    best
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt, LatticeError> {
    if !m.is_square() {
        return Err(LatticeError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_grid();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Exact by Sylvester's identity.
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Rank over the rationals, by fraction-free row elimination with content
/// removal.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.to_grid();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let piv = a[r][col].clone();
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(pivot_row.iter()).skip(col) {
                *x = &*x * &piv - &f * y;
            }
            let content = a[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !content.is_zero() && !content.is_one() {
                for x in a[i].iter_mut() {
                    *x /= &content;
                }
            }
        }
        r += 1;
    }
    r
}

/// True iff `vectors` (each of length `ambient`) span an `l`-dimensional
/// direct summand of `Z^ambient`, where `l` is the number of vectors.
///
/// Two steps: rational rank must equal `l`, then every invariant factor of
/// the `l x ambient` matrix must be 1.
pub fn is_direct_summand<V: AsRef<[i64]>>(vectors: &[V], ambient: usize) -> Result<bool, LatticeError> {
    for (index, v) in vectors.iter().enumerate() {
        let found = v.as_ref().len();
        if found != ambient {
            return Err(LatticeError::VectorLength { index, expected: ambient, found });
        }
    }
    let l = vectors.len();
    if l == 0 {
        return Ok(true);
    }
    if l > ambient {
        return Ok(false);
    }
    let rows: Vec<Vec<i64>> = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
    let m = IntMatrix::from_rows(&rows)?;
    if rank(&m) != l {
        return Ok(false);
    }
    let snf = smith_normal_form(&m)?;
    Ok(snf.rank == l && snf.is_unimodular_diagonal())
}

/// Determinant of the square matrix whose rows are `vectors`.
pub fn det_of_rows<V: AsRef<[i64]>>(vectors: &[V]) -> Result<BigInt, LatticeError> {
    let rows: Vec<Vec<i64>> = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
    det(&IntMatrix::from_rows(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Cofactor expansion; independent of Bareiss.
    fn cofactor_det(a: &[Vec<i64>]) -> i128 {
        let n = a.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return a[0][0] as i128;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    fn gcd_i128(a: i128, b: i128) -> i128 {
        if b == 0 { a.abs() } else { gcd_i128(b, a % b) }
    }

    /// Invariant factors from determinantal divisors: d_1...d_k = gcd of k x k minors.
    fn determinantal_oracle(a: &[Vec<i64>]) -> Vec<i128> {
        let (r, c) = (a.len(), a[0].len());
        let mut divisors = vec![1i128];
        for k in 1..=r.min(c) {
            let mut g = 0i128;
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<i64>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                    g = gcd_i128(g, cofactor_det(&minor));
                }
            }
            if g == 0 {
                break;
            }
            divisors.push(g);
        }
        divisors.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Breadth-first search over elementary row/column operations on a 2x2
    /// matrix with entries bounded by `bound`, looking for a diagonal matrix
    /// diag(a, b) with 0 <= a, a | b. The first hit in BFS order is returned.
    fn elementary_ops_oracle_2x2(start: [i64; 4], bound: i64) -> Option<(i64, i64)> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        let mut hits = Vec::new();
        while let Some(m) = queue.pop_front() {
            let [a, b, c, d] = m;
            if b == 0 && c == 0 {
                let (x, y) = (a.abs(), d.abs());
                if (x == 0 && y == 0) || (x != 0 && y % x == 0) {
                    hits.push((x, y));
                }
            }
            let next = [
                [c, d, a, b],
                [b, a, d, c],
                [-a, -b, c, d],
                [a, -b, c, -d],
                [a + c, b + d, c, d],
                [a - c, b - d, c, d],
                [a, b, c + a, d + b],
                [a, b, c - a, d - b],
                [a + b, b, c + d, d],
                [a - b, b, c - d, d],
                [a, b + a, c, d + c],
                [a, b - a, c, d - c],
            ];
            for n in next {
                if n.iter().all(|x| x.abs() <= bound) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        // Every reachable diagonal divisibility form must agree.
        let first = *hits.first()?;
        assert!(hits.iter().all(|h| *h == first), "inconsistent forms {hits:?}");
        Some(first)
    }

    #[test]
    fn snf_identity() {
        let r = smith_normal_form(&IntMatrix::identity(2)).unwrap();
        assert_eq!(r.diagonal, big(&[1, 1]));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn snf_two_four_six_eight() {
        let data = [[2i64, 4], [6, 8]];
        let oracle = elementary_ops_oracle_2x2([2, 4, 6, 8], 12).unwrap();
        assert_eq!(oracle, (2, 4));
        let rows: Vec<Vec<i64>> = data.iter().map(|r| r.to_vec()).collect();
        assert_eq!(determinantal_oracle(&rows), vec![2, 4]);

        let r = smith_normal_form(&mat(&[&[2, 4], &[6, 8]])).unwrap();
        assert_eq!(r.diagonal, big(&[2, 4]));
    }

    #[test]
    fn snf_zero_matrix() {
        let r = smith_normal_form(&IntMatrix::zeros(3, 3)).unwrap();
        assert!(r.diagonal.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn snf_empty_is_error() {
        assert!(matches!(smith_normal_form(&IntMatrix::zeros(0, 3)), Err(LatticeError::Empty { .. })));
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2, 3) is already diagonal but not in Smith form.
        let r = smith_normal_form(&mat(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(r.diagonal, big(&[1, 6]));
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IntMatrix::identity(4)).unwrap(), BigInt::one());
        assert_eq!(det(&mat(&[&[1, 0], &[1, 2]])).unwrap(), BigInt::from(2));
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert!(matches!(det(&mat(&[&[1, 2, 3]])), Err(LatticeError::NotSquare { .. })));
    }

    #[test]
    fn det_large_intermediates() {
        let m = mat(&[
            &[i64::MAX, 3, 5],
            &[7, i64::MAX, 11],
            &[13, 17, i64::MAX],
        ]);
        let p = BigInt::from(i64::MAX);
        // Cofactor expansion in BigInt.
        let expect = &p * (&p * &p - BigInt::from(11 * 17))
            - BigInt::from(3) * (BigInt::from(7) * &p - BigInt::from(11 * 13))
            + BigInt::from(5) * (BigInt::from(7 * 17) - BigInt::from(13) * &p);
        assert_eq!(det(&m).unwrap(), expect);
    }

    #[test]
    fn summand_examples() {
        assert!(is_direct_summand(&[[1, 0], [0, 1]], 2).unwrap());
        assert!(!is_direct_summand(&[[1, 0], [0, 2]], 2).unwrap());
        assert!(!is_direct_summand(&[[1, 0], [1, 2]], 2).unwrap());
        assert!(is_direct_summand::<[i64; 2]>(&[], 2).unwrap());
        assert!(is_direct_summand(&[[1, 1, 0]], 3).unwrap());
        assert!(!is_direct_summand(&[[2, 2, 0]], 3).unwrap());
        assert!(!is_direct_summand(&[[1, 2], [2, 4]], 2).unwrap());
        assert!(matches!(
            is_direct_summand(&[vec![1, 0], vec![1]], 2),
            Err(LatticeError::VectorLength { index: 1, .. })
        ));
    }

    /// Oracle for {e1, 2 e2}: (0, 1) is in the Z-span iff some small integer
    /// combination hits it.
    #[test]
    fn summand_enumeration_oracle() {
        let hit = (-20i64..=20).any(|a| (-20i64..=20).any(|b| a == 0 && 2 * b == 1));
        assert!(!hit);
        assert!(!is_direct_summand(&[[1, 0], [0, 2]], 2).unwrap());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
        })
    }

    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for &(i, j, f) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            for c in 0..n {
                let v = m.get(i, c) + BigInt::from(f) * m.get(j, c);
                m.set(i, c, v);
            }
        }
        m
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors(a in small_matrix()) {
            prop_assume!(a.len() <= 3 && a[0].len() <= 3);
            let r = smith_normal_form(&IntMatrix::from_rows(&a).unwrap()).unwrap();
            let got: Vec<i128> = r.diagonal.iter().map(|d| i128::try_from(d).unwrap()).collect();
            prop_assert_eq!(got, determinantal_oracle(&a));
        }

        #[test]
        fn snf_divisibility_and_unimodular_invariance(
            a in small_matrix(),
            left in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..6),
            right in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..6),
        ) {
            let m = IntMatrix::from_rows(&a).unwrap();
            let r = smith_normal_form(&m).unwrap();
            for w in r.diagonal.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(r.diagonal.iter().all(|d| d.is_positive()));
            prop_assert_eq!(r.rank, rank(&m));
            let u = unimodular(m.rows(), &left);
            let v = unimodular(m.cols(), &right);
            let moved = u.mul(&m).unwrap().mul(&v).unwrap();
            prop_assert_eq!(smith_normal_form(&moved).unwrap(), r);
        }

        #[test]
        fn det_matches_cofactor_and_snf(n in 1usize..=4, seed in proptest::collection::vec(-9i64..=9, 16)) {
            let a: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..i * n + n].to_vec()).collect();
            let m = IntMatrix::from_rows(&a).unwrap();
            let d = det(&m).unwrap();
            prop_assert_eq!(i128::try_from(&d).unwrap(), cofactor_det(&a));
            if !d.is_zero() {
                prop_assert_eq!(smith_normal_form(&m).unwrap().product(), d.abs());
            }
        }

        #[test]
        fn summand_order_and_sign_invariant(
            vs in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 0..=3),
            signs in proptest::collection::vec(any::<bool>(), 3),
            rot in 0usize..3,
        ) {
            let base = is_direct_summand(&vs, 3).unwrap();
            let mut moved: Vec<Vec<i64>> = vs.iter().zip(&signs)
                .map(|(v, &s)| if s { v.iter().map(|x| -x).collect() } else { v.clone() })
                .collect();
            if !moved.is_empty() {
                let k = rot % moved.len();
                moved.rotate_left(k);
            }
            prop_assert_eq!(is_direct_summand(&moved, 3).unwrap(), base);
        }
    }
}
