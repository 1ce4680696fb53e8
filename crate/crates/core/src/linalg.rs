//! Dense exact linear algebra over a field: row reduction, rank, kernels,
//! inverses and span comparisons.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field scalar.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "division by zero");
        self.recip()
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<F: Scalar> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Scalar> {
    pub mat: Mat<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], nrows: usize) -> Self {
        Self::from_fn(nrows, cols.len(), |i, j| cols[j][i].clone())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(F::zero(), |acc, (a, b)| if a.is_zero() { acc } else { acc.add(&a.mul(b)) }))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn scale(&self, k: &F) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(k))
    }

    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pj = m.get(r, j);
                    if !pj.is_zero() {
                        let v = m.get(i, j).sub(&f.mul(pj));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : A x = 0}`, as columns.
    pub fn kernel(&self) -> Mat<F> {
        let Rref { mat, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, F::one());
            for (r, &p) in pivots.iter().enumerate() {
                k.set(p, t, mat.get(r, f).neg());
            }
        }
        k
    }

    /// A basis of the column span, chosen among the columns.
    pub fn column_basis(&self) -> Mat<F> {
        let piv = self.rref().pivots;
        Self::from_fn(self.rows, piv.len(), |i, j| self.get(i, piv[j]).clone())
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let Rref { mat, pivots } = self.hcat(&Mat::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| mat.get(i, n + j).clone()))
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return F::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<F> {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

/// Whether two matrices with the same row count span the same column space.
pub fn same_span<F: Scalar>(a: &Mat<F>, b: &Mat<F>) -> bool {
    let ra = a.rank();
    ra == b.rank() && a.hcat(b).rank() == ra
}

/// Basis (as columns) of the intersection of two column spans.
pub fn span_intersection<F: Scalar>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let a = a.column_basis();
    let b = b.column_basis();
    let k = a.hcat(&b.scale(&F::one().neg())).kernel();
    // x = a·k_top, independent because a has full column rank
    let top = Mat::from_fn(a.cols, k.cols, |i, j| k.get(i, j).clone());
    a.mul(&top).column_basis()
}

impl<F: Scalar> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Leading principal minors.
pub fn leading_minors(m: &Mat<BigRational>) -> Vec<BigRational> {
    (1..=m.rows)
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            m.submatrix(&idx, &idx).determinant()
        })
        .collect()
}

pub fn all_positive(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_positive())
}

const KERNEL_PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % KERNEL_PRIME as u128) as u64
}

fn invmod(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a, KERNEL_PRIME - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

fn to_mod(x: i64) -> u64 {
    x.rem_euclid(KERNEL_PRIME as i64) as u64
}

/// Rational `a/b ≡ x (mod p)` with `|a|, b ≤ √(p/2)`, if one exists.
fn rational_reconstruct(x: u64) -> Option<BigRational> {
    let bound = ((KERNEL_PRIME / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (KERNEL_PRIME as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(BigInt::from(r1), BigInt::from(t1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelError {
    pub free_columns: usize,
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "modular kernel of dimension {} did not lift to ℚ", self.free_columns)
    }
}

impl std::error::Error for KernelError {}

/// Kernel over ℚ of a sparse integer system `Σ_j a_ij x_j = 0`.
///
/// Echelon form modulo a 61-bit prime bounds the dimension from above;
/// each modular basis vector is lifted by rational reconstruction and
/// checked exactly, which bounds it from below. Returns the lifted basis,
/// one vector per free column.
pub fn sparse_kernel(ncols: usize, rows: &[Vec<(usize, i64)>]) -> Result<Vec<Vec<BigRational>>, KernelError> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| rows[i].len());
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; ncols];
    for &i in &order {
        let mut acc: std::collections::BTreeMap<usize, u64> = std::collections::BTreeMap::new();
        for &(c, v) in &rows[i] {
            let e = acc.entry(c).or_insert(0);
            *e = (*e + to_mod(v)) % KERNEL_PRIME;
        }
        acc.retain(|_, v| *v != 0);
        while let Some((&c, &v)) = acc.iter().next() {
            match &pivots[c] {
                Some(prow) => {
                    for &(j, w) in prow {
                        let e = acc.entry(j).or_insert(0);
                        *e = (*e + KERNEL_PRIME - mulmod(v, w)) % KERNEL_PRIME;
                        if *e == 0 {
                            acc.remove(&j);
                        }
                    }
                }
                None => {
                    let inv = invmod(v);
                    pivots[c] = Some(acc.iter().map(|(&j, &w)| (j, mulmod(w, inv))).collect());
                    break;
                }
            }
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| pivots[c].is_none()).collect();
    let err = KernelError { free_columns: free.len() };
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![0u64; ncols];
        x[f] = 1;
        for c in (0..ncols).rev() {
            if let Some(prow) = &pivots[c] {
                let s = prow.iter().skip(1).fold(0u64, |acc, &(j, w)| (acc + mulmod(w, x[j])) % KERNEL_PRIME);
                x[c] = (KERNEL_PRIME - s) % KERNEL_PRIME;
            }
        }
        let lifted: Vec<BigRational> = x.iter().map(|&v| rational_reconstruct(v)).collect::<Option<_>>().ok_or(err.clone())?;
        let ok = rows.iter().all(|r| {
            Zero::is_zero(&r.iter().fold(<BigRational as Zero>::zero(), |acc, &(c, v)| acc + &lifted[c] * BigInt::from(v)))
        });
        if !ok {
            return Err(err);
        }
        basis.push(lifted);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    #[test]
    fn rank_kernel_inverse() {
        let m: Mat<Q> = Mat::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols, 1);
        assert!(m.mul(&k).is_zero());
        assert!(m.inverse().is_none());
        let n: Mat<Q> = Mat::from_int_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(n.mul(&n.inverse().unwrap()), Mat::identity(2));
        assert_eq!(n.determinant(), rat(1));
    }

    #[test]
    fn spans() {
        let a: Mat<Q> = Mat::from_int_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let b: Mat<Q> = Mat::from_int_rows(&[vec![1, 1], vec![1, -1], vec![0, 0]]);
        assert!(same_span(&a, &b));
        let c: Mat<Q> = Mat::from_int_rows(&[vec![0], vec![1], vec![1]]);
        assert_eq!(span_intersection(&a, &c).cols, 0);
        let d: Mat<Q> = Mat::from_int_rows(&[vec![1, 0], vec![0, 0], vec![0, 1]]);
        assert_eq!(span_intersection(&a, &d).cols, 1);
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let rows = vec![vec![(0, 1), (1, 2), (2, 3)], vec![(0, 2), (1, 4), (2, 6)], vec![(0, 1), (2, 1)]];
        let k = sparse_kernel(3, &rows).unwrap();
        assert_eq!(k.len(), 1);
        let m: Mat<Q> = Mat::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert!(m.mul_vec(&k[0]).iter().all(|x| Zero::is_zero(x)));
        // fractional kernel entries lift
        let k = sparse_kernel(2, &[vec![(0, 3), (1, -7)]]).unwrap();
        assert_eq!(k[0][0], BigRational::new(BigInt::from(7), BigInt::from(3)));
        assert_eq!(sparse_kernel(2, &[vec![(0, 1)], vec![(1, 5)]]).unwrap().len(), 0);
    }
}
