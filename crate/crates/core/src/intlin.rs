//! Exact integer linear algebra.
//!
//! Small dense integer matrices with overflow-checked arithmetic, a
//! deterministic Smith normal form, and presentations of finite-index (or
//! partially free) quotients `Z^n / L Z^n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntLinError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("integer overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, IntLinError>;

pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(IntLinError::Overflow)
}

pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(IntLinError::Overflow)
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(IntLinError::Overflow)
}

/// Dense integer matrix stored in row-major order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(IntLinError::BadShape { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(IntLinError::BadShape { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.data[i * n + i] = d;
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

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == i64::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn shape(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    pub fn mul(&self, rhs: &IntMat) -> Result<IntMat> {
        mat_mul(self, rhs)
    }

    pub fn sub(&self, rhs: &IntMat) -> Result<IntMat> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(IntLinError::DimensionMismatch { left: self.shape(), right: rhs.shape() });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| sub(a, b)).collect::<Result<Vec<_>>>()?;
        Ok(IntMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Result<IntMat> {
        let data =
            self.data.iter().map(|&a| a.checked_neg().ok_or(IntLinError::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(IntMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(IntLinError::DimensionMismatch {
                left: self.shape(),
                right: format!("vector of length {}", v.len()),
            });
        }
        (0..self.rows).map(|i| self.row(i).iter().zip(v).try_fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)?))).collect()
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, mut k: u64) -> Result<IntMat> {
        if !self.is_square() {
            return Err(IntLinError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut base = self.clone();
        let mut acc = IntMat::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(IntLinError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| i128::from(x)).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(IntLinError::Overflow)?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| IntLinError::Overflow)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = add(self.get(dst, j), mul(q, self.get(src, j))?)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = add(self.get(i, dst), mul(q, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMat {
    type Error = IntLinError;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMat::from_rows(&rows)
    }
}

impl From<IntMat> for Vec<Vec<i64>> {
    fn from(m: IntMat) -> Self {
        m.to_rows()
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Exact matrix product.
pub fn mat_mul(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    if a.cols != b.rows {
        return Err(IntLinError::DimensionMismatch { left: a.shape(), right: b.shape() });
    }
    let mut out = IntMat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = 0i64;
            for k in 0..a.cols {
                acc = add(acc, mul(a.get(i, k), b.get(k, j))?)?;
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain of non-negative entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
    /// Inverse of `u`, tracked alongside the row operations.
    pub u_inv: IntMat,
}

impl SnfDecomposition {
    /// Diagonal entries of `d`, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

/// Smith normal form.
///
/// Pivot rule: at each stage the non-zero entry of smallest absolute value in
/// the trailing submatrix, first in row-major order on ties. The only failure
/// mode is an overflow of the unimodular transforms.
pub fn snf(a: &IntMat) -> Result<SnfDecomposition> {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMat::identity(r);
    let mut u_inv = IntMat::identity(r);
    let mut v = IntMat::identity(c);

    for t in 0..r.min(c) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if x != 0 && pivot.is_none_or(|(pi, pj)| x.unsigned_abs() < d.get(pi, pj).unsigned_abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Ok(SnfDecomposition { u, d, v, u_inv });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let q = d.get(i, t) / p;
                if q != 0 {
                    d.add_row(i, t, -q)?;
                    u.add_row(i, t, -q)?;
                    u_inv.add_col(t, i, q)?;
                }
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..c {
                let q = d.get(t, j) / p;
                if q != 0 {
                    d.add_col(j, t, -q)?;
                    v.add_col(j, t, -q)?;
                }
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| d.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    d.add_row(t, i, 1)?;
                    u.add_row(t, i, 1)?;
                    u_inv.add_col(i, t, -1)?;
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    Ok(SnfDecomposition { u, d, v, u_inv })
}

/// Presentation of `Z^n / im(L)` for a square `L`.
///
/// Quotient coordinates of `x` are the entries of `U x` at the positions of
/// non-unit invariant factors, each reduced into `[0, d)` when `d != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianQuotient {
    /// Non-unit invariant factors in divisibility order; `0` is a free `Z`.
    pub invariant_factors: Vec<i64>,
    /// Columns map quotient coordinates back to `Z^n`.
    pub lift_basis: IntMat,
    u: IntMat,
    positions: Vec<usize>,
}

/// Quotient `Z^n / im(l)`.
pub fn quotient(l: &IntMat) -> Result<AbelianQuotient> {
    if !l.is_square() {
        return Err(IntLinError::NotSquare { rows: l.rows(), cols: l.cols() });
    }
    let n = l.rows();
    let s = snf(l)?;
    let diag = s.diagonal();
    let positions: Vec<usize> = (0..n).filter(|&i| diag[i] != 1).collect();
    let invariant_factors = positions.iter().map(|&i| diag[i]).collect();
    let mut lift_basis = IntMat::zeros(n, positions.len());
    for (k, &i) in positions.iter().enumerate() {
        for row in 0..n {
            lift_basis.set(row, k, s.u_inv.get(row, i));
        }
    }
    Ok(AbelianQuotient { invariant_factors, lift_basis, u: s.u, positions })
}

impl AbelianQuotient {
    pub fn ambient_dim(&self) -> usize {
        self.u.rows()
    }

    /// Number of cosets, `None` when a free factor is present.
    pub fn coset_count(&self) -> Option<u64> {
        self.invariant_factors.iter().try_fold(1u64, |acc, &d| if d == 0 { None } else { acc.checked_mul(d as u64) })
    }

    pub fn is_finite(&self) -> bool {
        self.invariant_factors.iter().all(|&d| d != 0)
    }

    /// Largest invariant factor (the exponent) for a finite quotient.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_finite() {
            Some(self.invariant_factors.last().copied().unwrap_or(1))
        } else {
            None
        }
    }

    /// Quotient coordinates of `x`.
    pub fn reduce(&self, x: &[i64]) -> Result<Vec<i64>> {
        let ux = self.u.mul_vec(x)?;
        Ok(self
            .positions
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&i, &d)| if d == 0 { ux[i] } else { ux[i].rem_euclid(d) })
            .collect())
    }

    /// A vector of `Z^n` whose coset has the given coordinates.
    pub fn lift(&self, q: &[i64]) -> Result<Vec<i64>> {
        self.lift_basis.mul_vec(q)
    }

    /// Whether `x` lies in `im(L)`.
    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(|&c| c == 0))
    }

    /// Coset representatives `lift(q)` for `q` in the box `prod [0, d_i)`,
    /// listed in lexicographic order of `q`. `None` for infinite quotients.
    pub fn coset_representatives(&self) -> Option<Result<Vec<Vec<i64>>>> {
        if !self.is_finite() {
            return None;
        }
        let mut coords = vec![Vec::new()];
        for &d in &self.invariant_factors {
            coords = coords
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        Some(coords.iter().map(|q| self.lift(q)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[i64; 2]]) -> IntMat {
        IntMat::from_rows(rows).unwrap()
    }

    fn check_snf(a: &IntMat) -> SnfDecomposition {
        let s = snf(a).unwrap();
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMat::identity(a.rows()));
        assert_eq!(s.u.det().unwrap().abs(), 1);
        assert_eq!(s.v.det().unwrap().abs(), 1);
        s
    }

    #[test]
    fn identity_times_matrix() {
        let hex = m(&[[1, 1], [-1, 0]]);
        assert_eq!(mat_mul(&IntMat::identity(2), &hex).unwrap(), hex);
    }

    #[test]
    fn hexagonal_square() {
        let hex = m(&[[1, 1], [-1, 0]]);
        assert_eq!(hex.mul(&hex).unwrap(), m(&[[0, 1], [-1, -1]]));
        let l = IntMat::identity(2).sub(&hex.pow(2).unwrap()).unwrap();
        assert_eq!(l, m(&[[1, -1], [1, 2]]));
    }

    #[test]
    fn square_fourth_power_is_identity() {
        let sq = m(&[[0, 1], [-1, 0]]);
        assert!(sq.pow(4).unwrap().is_identity());
        assert!(!sq.pow(2).unwrap().is_identity());
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMat::zeros(2, 3);
        assert!(matches!(mat_mul(&a, &a), Err(IntLinError::DimensionMismatch { .. })));
    }

    #[test]
    fn overflow_is_detected() {
        let big = m(&[[i64::MAX, 1], [1, 1]]);
        assert_eq!(big.mul(&big), Err(IntLinError::Overflow));
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[[1, -1], [1, 2]]).det().unwrap(), 3);
        assert_eq!(IntMat::from_rows(&[[2, 0, 1], [1, 3, 2], [1, 1, 2]]).unwrap().det().unwrap(), 6);
        assert_eq!(IntMat::from_rows(&[[0, 1, 2], [0, 3, 4], [0, 5, 6]]).unwrap().det().unwrap(), 0);
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMat::identity(2)).diagonal(), vec![1, 1]);
        assert_eq!(check_snf(&m(&[[1, -1], [1, 1]])).diagonal(), vec![1, 2]);
        assert_eq!(check_snf(&m(&[[1, -1], [1, 2]])).diagonal(), vec![1, 3]);
        assert_eq!(check_snf(&m(&[[2, 4], [6, 8]])).diagonal(), vec![2, 4]);
        assert_eq!(check_snf(&m(&[[0, 0], [0, 0]])).diagonal(), vec![0, 0]);
        assert_eq!(check_snf(&m(&[[0, 2], [0, 0]])).diagonal(), vec![2, 0]);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2, 3) is not in Smith form; the chain must become (1, 6)
        assert_eq!(check_snf(&m(&[[2, 0], [0, 3]])).diagonal(), vec![1, 6]);
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMat::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap();
        assert_eq!(check_snf(&a).diagonal(), vec![2, 6, 12]);
        let b = IntMat::from_rows(&[[1, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!(check_snf(&b).diagonal(), vec![1, 3]);
    }

    #[test]
    fn quotient_of_zero_map_is_free() {
        let q = quotient(&IntMat::zeros(2, 2)).unwrap();
        assert_eq!(q.invariant_factors, vec![0, 0]);
        assert_eq!(q.coset_count(), None);
        assert!(q.coset_representatives().is_none());
        assert_eq!(q.reduce(&[3, -7]).unwrap(), vec![3, -7]);
    }

    #[test]
    fn quotient_by_two() {
        let q = quotient(&IntMat::diagonal(&[2, 2])).unwrap();
        assert_eq!(q.invariant_factors, vec![2, 2]);
        let reps = q.coset_representatives().unwrap().unwrap();
        assert_eq!(reps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn quotient_index_two() {
        let q = quotient(&m(&[[1, -1], [1, 1]])).unwrap();
        assert_eq!(q.invariant_factors, vec![2]);
        assert_eq!(q.coset_count(), Some(2));
        let reps = q.coset_representatives().unwrap().unwrap();
        assert_eq!(reps.len(), 2);
        assert!(q.contains(&[1, 1]).unwrap());
        assert!(!q.contains(&[1, 0]).unwrap());
        assert_eq!(q.reduce(&[1, 0]).unwrap(), q.reduce(&[0, 1]).unwrap());
    }

    #[test]
    fn quotient_partially_free() {
        // im = 2Z x 0
        let q = quotient(&m(&[[2, 0], [0, 0]])).unwrap();
        assert_eq!(q.invariant_factors, vec![2, 0]);
        assert!(!q.is_finite());
        assert_eq!(q.reduce(&[5, 4]).unwrap(), q.reduce(&[1, 4]).unwrap());
        assert_ne!(q.reduce(&[5, 4]).unwrap(), q.reduce(&[5, 3]).unwrap());
    }
}
