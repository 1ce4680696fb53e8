//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels, abelian invariants (dense and sparse), characteristic
//! polynomials and rational column-span comparison.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use rayon::prelude::*;

use crate::fpcore::Presentation;

#[derive(Debug, Error)]
pub enum ZlatError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed matrix text: {0}")]
    Format(String),
    #[error("Smith form verification failed")]
    Verification,
}

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        IntMat { rows, cols, data: vals.iter().map(|&v| BigInt::from(v)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64().expect("entry fits i64")).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    /// Matrix text format: `rows cols` header then row-major integers.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<IntMat, ZlatError> {
        let mut it = text.split_whitespace();
        let mut num = |what: &str| -> Result<BigInt, ZlatError> {
            it.next()
                .ok_or_else(|| ZlatError::Format(format!("missing {what}")))?
                .parse::<BigInt>()
                .map_err(|e| ZlatError::Format(e.to_string()))
        };
        let r = num("rows")?.to_usize().ok_or_else(|| ZlatError::Format("rows".into()))?;
        let c = num("cols")?.to_usize().ok_or_else(|| ZlatError::Format("cols".into()))?;
        let mut data = Vec::with_capacity(r * c);
        for _ in 0..r * c {
            data.push(num("entry")?);
        }
        if it.next().is_some() {
            return Err(ZlatError::Format("trailing entries".into()));
        }
        Ok(IntMat { rows: r, cols: c, data })
    }

    /// Determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    /// Rank over ℚ by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, rank);
            for i in rank + 1..m.rows {
                for j in col + 1..m.cols {
                    let v = (m.get(i, j) * m.get(rank, col) - m.get(i, col) * m.get(rank, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, col, BigInt::zero());
            }
            prev = m.get(rank, col).clone();
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Row Hermite normal form: upper echelon, positive pivots, entries above a
/// pivot reduced into `[0, pivot)`. Also returns the unimodular `U` with
/// `U·A = H`.
pub fn hnf_with_transform(a: &IntMat) -> (IntMat, IntMat) {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below pivot_row
            let best = (pivot_row..h.rows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&x, &y| h.get(x, col).abs().cmp(&h.get(y, col).abs()));
            let Some(p) = best else { break };
            h.swap_rows(p, pivot_row);
            u.swap_rows(p, pivot_row);
            let mut done = true;
            for i in pivot_row + 1..h.rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = -floor_div(h.get(i, col), h.get(pivot_row, col));
                h.add_row_multiple(i, pivot_row, &q);
                u.add_row_multiple(i, pivot_row, &q);
                if !h.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < h.rows && !h.get(pivot_row, col).is_zero() {
            if h.get(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    for &(r, c) in &pivots {
        for i in 0..r {
            let q = -floor_div(h.get(i, c), h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
    }
    (h, u)
}

/// Row HNF of `a` together with a basis of the integer right kernel
/// `{x : a·x = 0}` (rows of the returned kernel matrix, in HNF).
pub fn hnf_kernel(a: &IntMat) -> (IntMat, IntMat) {
    let (h, _) = hnf_with_transform(a);
    let rank = (0..h.rows).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let h_trim = IntMat { rows: rank, cols: h.cols, data: h.data[..rank * h.cols].to_vec() };
    let kernel = left_kernel(&a.transpose());
    (h_trim, kernel)
}

/// Integer left kernel `{c : c·a = 0}` as HNF rows (saturated lattice).
pub fn left_kernel(a: &IntMat) -> IntMat {
    let (h, u) = hnf_with_transform(a);
    let zero_rows: Vec<usize> = (0..h.rows).filter(|&i| h.row(i).iter().all(Zero::is_zero)).collect();
    let mut k = IntMat::zeros(zero_rows.len(), a.rows);
    for (r, &i) in zero_rows.iter().enumerate() {
        for j in 0..a.rows {
            k.set(r, j, u.get(i, j).clone());
        }
    }
    if k.rows == 0 {
        return k;
    }
    let (kh, _) = hnf_with_transform(&k);
    kh
}

/// Smith normal form `U·A·V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order (each divides the next).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Re-check `U·A·V = D`, unimodularity and the divisibility chain.
    pub fn verify(&self, a: &IntMat) -> bool {
        if self.u.mul(a).mul(&self.v) != self.d {
            return false;
        }
        if !self.u.determinant().abs().is_one() || !self.v.determinant().abs().is_one() {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let f = self.invariant_factors();
        let n = self.d.rows.min(self.d.cols);
        // zeros must trail
        if (0..f.len()).any(|i| self.d.get(i, i).is_zero()) || (f.len()..n).any(|i| !self.d.get(i, i).is_zero()) {
            return false;
        }
        f.iter().all(|x| x.is_positive()) && f.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

/// Smith normal form with transforms; the result is verified before return.
pub fn smith_form(a: &IntMat) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // pivot: nonzero entry of least absolute value
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = -floor_div(d.get(i, t), d.get(t, t));
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = -floor_div(d.get(t, j), d.get(t, t));
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = d.get(i, t);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = d.get(t, j);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the remaining block
            let p = d.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(d.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let sf = SmithForm { d, u, v };
    // the determinant checks in `verify` are cubic in bignums; keep debug builds usable
    debug_assert!(a.rows * a.cols > 2500 || sf.verify(a), "Smith form failed verification");
    sf
}

/// Torsion coefficients (> 1) and free rank of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn invariants_from_factors(ncols: usize, factors: &[BigInt]) -> AbelianInvariants {
    AbelianInvariants {
        torsion: factors
            .iter()
            .filter(|x| !x.is_one())
            .map(|x| x.to_u64().expect("torsion coefficient fits u64"))
            .collect(),
        free_rank: ncols - factors.len(),
    }
}

/// Invariants of `ℤ^cols / rowspan(a)`.
pub fn cokernel_invariants(a: &IntMat) -> AbelianInvariants {
    let sf = smith_form(a);
    invariants_from_factors(a.cols, &sf.invariant_factors())
}

/// Exponent-sum matrix (relators × generators).
pub fn relation_matrix(p: &Presentation) -> IntMat {
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| r.exponent_sums(p.ngens())).collect();
    if rows.is_empty() {
        return IntMat::zeros(0, p.ngens());
    }
    IntMat::from_rows(&rows)
}

/// Abelianization of a presented group.
pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let rows: Vec<SparseRow> = p
        .relators
        .iter()
        .map(|r| {
            let mut m: BTreeMap<u32, i64> = BTreeMap::new();
            for &l in r.letters() {
                *m.entry(crate::fpcore::gen_of(l) as u32).or_default() += l.signum() as i64;
            }
            m.into_iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k, BigInt::from(v))).collect()
        })
        .collect();
    sparse_invariants(p.ngens(), rows)
}

/// A sparse integer row: sorted `(column, nonzero value)` pairs.
pub type SparseRow = Vec<(u32, BigInt)>;

fn sparse_axpy(dst: &SparseRow, k: &BigInt, src: &SparseRow) -> SparseRow {
    // dst + k*src
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j == src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i == dst.len() || src[j].0 < dst[i].0 {
            out.push((src[j].0, k * &src[j].1));
            j += 1;
        } else {
            let v = &dst[i].1 + k * &src[j].1;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sparse_get(row: &SparseRow, col: u32) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Invariants of `ℤ^ncols / rowspan(rows)` for large relation matrices.
/// Tall matrices over few columns go through [`modular_invariants`];
/// otherwise unit pivots are eliminated first (Markowitz order, each
/// elimination drops one generator and one relation) and the dense
/// remainder goes through a Smith form.
pub fn sparse_invariants(ncols: usize, rows: Vec<SparseRow>) -> AbelianInvariants {
    if ncols <= 2000 && rows.len() > 2 * ncols {
        if let Some(inv) = modular_invariants(ncols, &rows) {
            return inv;
        }
    }
    let (live_cols, rest) = eliminate_unit_pivots(ncols, rows);
    if rest.is_empty() {
        return AbelianInvariants { torsion: vec![], free_rank: live_cols.len() };
    }
    let pos: BTreeMap<u32, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense = IntMat::zeros(rest.len(), live_cols.len());
    for (i, r) in rest.iter().enumerate() {
        for (c, v) in r {
            dense.set(i, pos[c], v.clone());
        }
    }
    let factors = dense_invariant_factors(dense);
    invariants_from_factors(live_cols.len(), &factors)
}

/// Diagonal of the Smith form, without transforms (nonzero entries only).
pub fn dense_invariant_factors(a: IntMat) -> Vec<BigInt> {
    // many rows: shrink to an echelon basis first
    let h = if a.rows > 2 * a.cols { echelon_basis(a.cols, (0..a.rows).map(|i| a.row_vec(i))) } else { a };
    let mut d = h.transpose();
    // Smith on the transpose without tracking transforms
    let (m, n) = (d.rows, d.cols);
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        d.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = -floor_div(d.get(i, t), d.get(t, t));
                    d.add_row_multiple(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = -floor_div(d.get(t, j), d.get(t, t));
                    d.add_col_multiple(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = d.get(i, t);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = d.get(t, j);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                d.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                continue;
            }
            let p = d.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(d.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => d.add_row_multiple(t, i, &BigInt::one()),
                None => break,
            }
        }
        t += 1;
    }
    (0..m.min(n)).map(|i| d.get(i, i).abs()).filter(|x| !x.is_zero()).collect()
}

// below 2^31, so products fit in a u64
const RANK_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn det_mod_p(m: &[Vec<i64>], p: u64) -> u64 {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if piv != k {
            a.swap(piv, k);
            det = (p - det) % p;
        }
        det = mulmod(det, a[k][k], p);
        let inv = powmod(a[k][k], p - 2, p);
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            if row[k] == 0 {
                continue;
            }
            let f = mulmod(row[k], inv, p);
            for j in k..n {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + p - mulmod(f, pivot_row[j], p)) % p;
                }
            }
        }
    }
    det
}

/// Exact determinant by Chinese remaindering over 62-bit primes, using the
/// Hadamard bound.
fn det_crt(m: &[Vec<i64>]) -> BigInt {
    let bits: f64 = m
        .iter()
        .map(|r| r.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt().max(1.0).log2())
        .sum();
    let needed = bits as u64 + 2;
    let mut primes = Vec::new();
    let mut p: u64 = (1 << 62) - 1;
    while 61 * primes.len() as u64 <= needed {
        while !is_prime_u64(p) {
            p -= 2;
        }
        primes.push(p);
        p -= 2;
    }
    let residues: Vec<u64> = primes.par_iter().map(|&p| det_mod_p(m, p)).collect();
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    for (&p, &r) in primes.iter().zip(&residues) {
        // value ≡ old mod modulus, ≡ r mod p
        let pm = BigInt::from(p);
        let old = value.mod_floor(&pm).to_u64().unwrap();
        let minv = powmod(modulus.mod_floor(&pm).to_u64().unwrap(), p - 2, p);
        let t = mulmod((r + p - old) % p, minv, p);
        value += &modulus * BigInt::from(t);
        modulus *= &pm;
    }
    let half = &modulus / 2;
    if value > half {
        value - modulus
    } else {
        value
    }
}

/// Incremental echelon form mod a prime `p`, inserting rows in `order`.
/// Returns the indices of the rows that were independent and their pivot columns.
fn independent_rows_mod_p(a: &[Vec<i64>], ncols: usize, p: u64, order: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; ncols];
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    for &i in order {
        let mut r: Vec<u64> = a[i].iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
        for c in 0..ncols {
            if r[c] == 0 {
                continue;
            }
            match &basis[c] {
                Some(b) => {
                    let k = r[c];
                    for (x, &y) in r.iter_mut().zip(b).skip(c) {
                        if y != 0 {
                            *x = (*x + p * p - k * y) % p;
                        }
                    }
                }
                None => {
                    let inv = powmod(r[c], p - 2, p);
                    r.iter_mut().for_each(|x| *x = mulmod(*x, inv, p));
                    basis[c] = Some(r);
                    rows.push(i);
                    cols.push(c);
                    break;
                }
            }
        }
        if rows.len() == ncols {
            break;
        }
    }
    (rows, cols)
}

/// Invariant factors of a direct sum of cyclic groups of the given orders.
fn invariants_from_cyclic(orders: &[u64]) -> Vec<u64> {
    // split into prime powers, then recombine largest with largest
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders {
        let mut n = o;
        let mut q = 2;
        while q * q <= n {
            if n % q == 0 {
                let mut pk = 1;
                while n % q == 0 {
                    n /= q;
                    pk *= q;
                }
                by_prime.entry(q).or_default().push(pk);
            }
            q += 1;
        }
        if n > 1 {
            by_prime.entry(n).or_default().push(n);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for v in by_prime.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &pk) in v.iter().enumerate() {
            out[i] *= pk;
        }
    }
    out.sort_unstable();
    out
}

/// Invariants of `ℤ^ncols / rowspan(rows)` computed modulo a multiple of
/// the torsion exponent. The rank `r` comes from elimination modulo two
/// large primes; nonsingular `r×r` minors certify rank ≥ r and the gcd `g`
/// of their determinants is a multiple of the product of the invariant
/// factors; for each prime `p^e ∥ g` a Smith form over `ℤ/p^(e+1)` reads
/// off the `p`-torsion, and its number of zero diagonal entries must equal
/// `ncols − r`. The rank is probabilistic only in that both primes would
/// have to drop it. Returns `None` when entries or `g` do not fit machine
/// words or a count check fails.
pub fn modular_invariants(ncols: usize, rows: &[SparseRow]) -> Option<AbelianInvariants> {
    let mut a: Vec<Vec<i64>> = Vec::with_capacity(rows.len());
    for r in rows {
        let mut d = vec![0i64; ncols];
        for (c, v) in r {
            d[*c as usize] = v.to_i64().filter(|x| x.abs() < 1 << 40)?;
        }
        a.push(d);
    }
    let n = a.len();
    let forward: Vec<usize> = (0..n).collect();
    let backward: Vec<usize> = (0..n).rev().collect();
    let mut shuffled = forward.clone();
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    for i in (1..n).rev() {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        shuffled.swap(i, (seed >> 33) as usize % (i + 1));
    }
    let runs = [(RANK_PRIMES[0], &forward), (RANK_PRIMES[1], &backward), (RANK_PRIMES[0], &shuffled)];
    let found: Vec<(Vec<usize>, Vec<usize>)> = runs.par_iter().map(|&(p, o)| independent_rows_mod_p(&a, ncols, p, o)).collect();
    let r = found.iter().map(|f| f.0.len()).max().unwrap();
    if r == 0 {
        return Some(AbelianInvariants { torsion: vec![], free_rank: ncols });
    }
    let mut g = BigInt::zero();
    for (ri, ci) in &found {
        if ri.len() != r {
            continue;
        }
        let minor: Vec<Vec<i64>> = ri.iter().map(|&i| ci.iter().map(|&c| a[i][c]).collect()).collect();
        g = g.gcd(&det_crt(&minor));
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return None;
    }
    let g = g.abs().to_u64()?;
    let mut cyclic = Vec::new();
    for (p, e) in factor_u64(g)? {
        // one extra power so that free directions show up as zeros
        let k = e + 1;
        if p.checked_pow(k).map_or(true, |q| q >= 1 << 62) {
            return None;
        }
        let (vals, zeros) = local_smith(&a, ncols, p, k);
        if zeros != ncols - r {
            return None;
        }
        cyclic.extend(vals.into_iter().filter(|&v| v > 0).map(|v| p.pow(v)));
    }
    Some(AbelianInvariants { torsion: invariants_from_cyclic(&cyclic), free_rank: ncols - r })
}

/// Trial division; gives up on factors above `2^32`.
fn factor_u64(mut n: u64) -> Option<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            let mut k = 0;
            while n % q == 0 {
                n /= q;
                k += 1;
            }
            out.push((q, k));
        }
        q += 1;
        if q > 1 << 32 {
            return None;
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    Some(out)
}

/// Smith form over `ℤ/p^k`: valuations of the nonzero diagonal entries and
/// the number of zero ones.
fn local_smith(a: &[Vec<i64>], ncols: usize, p: u64, k: u32) -> (Vec<u32>, usize) {
    let q = p.pow(k);
    let val = |x: u64| -> u32 {
        if x == 0 {
            return k;
        }
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect::<Vec<u64>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut cols: Vec<usize> = (0..ncols).collect();
    let mut vals = Vec::new();
    while !m.is_empty() && !cols.is_empty() {
        let mut best = (k, 0, 0);
        'search: for (i, r) in m.iter().enumerate() {
            for (jj, &c) in cols.iter().enumerate() {
                let v = val(r[c]);
                if v < best.0 {
                    best = (v, i, jj);
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (v, pi, pj) = best;
        if v == k {
            break;
        }
        let piv = m.swap_remove(pi);
        let c = cols.swap_remove(pj);
        let pv = p.pow(v);
        let unit_inv = inverse_mod(piv[c] / pv, q);
        m.par_iter_mut().for_each(|row| {
            if row[c] == 0 {
                return;
            }
            let f = mulmod(row[c] / pv, unit_inv, q);
            for &j in cols.iter().chain(std::iter::once(&c)) {
                if piv[j] != 0 {
                    row[j] = (row[j] + q - mulmod(f, piv[j], q)) % q;
                }
            }
        });
        m.retain(|r| cols.iter().any(|&j| r[j] != 0));
        vals.push(v);
    }
    let zeros = ncols - vals.len();
    (vals, zeros)
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (g, s, _) = egcd_i128(a as i128, m as i128);
    debug_assert_eq!(g, 1);
    s.rem_euclid(m as i128) as u64
}

fn egcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row echelon basis of the lattice spanned by `rows`, built one row at a
/// time with 2×2 unimodular (extended gcd) steps; never holds more than
/// `ncols` rows.
pub fn echelon_basis(ncols: usize, rows: impl IntoIterator<Item = Vec<BigInt>>) -> IntMat {
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; ncols];
    for mut r in rows {
        assert_eq!(r.len(), ncols);
        let mut c = 0;
        while c < ncols {
            if r[c].is_zero() {
                c += 1;
                continue;
            }
            match basis[c].take() {
                None => {
                    if r[c].is_negative() {
                        r.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    basis[c] = Some(r);
                    break;
                }
                Some(b) => {
                    let (x, y) = (&b[c], &r[c]);
                    let eg = x.extended_gcd(y);
                    let (xg, yg) = (x / &eg.gcd, y / &eg.gcd);
                    // [s t; -y/g x/g] has determinant 1
                    let mut piv: Vec<BigInt> = b.iter().zip(&r).map(|(bi, ri)| &eg.x * bi + &eg.y * ri).collect();
                    let rest: Vec<BigInt> = b.iter().zip(&r).map(|(bi, ri)| &xg * ri - &yg * bi).collect();
                    if piv[c].is_negative() {
                        piv.iter_mut().for_each(|v| *v = -std::mem::take(v));
                    }
                    debug_assert!(rest[c].is_zero());
                    basis[c] = Some(piv);
                    r = rest;
                    c += 1;
                }
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = basis.into_iter().flatten().collect();
    if rows.is_empty() {
        return IntMat::zeros(0, ncols);
    }
    // keep entries small: reduce above each pivot
    let mut m = IntMat::from_rows(&rows);
    for i in 0..m.rows {
        let c = (0..ncols).find(|&c| !m.get(i, c).is_zero()).unwrap();
        for k in 0..i {
            let q = -floor_div(m.get(k, c), m.get(i, c));
            m.add_row_multiple(k, i, &q);
        }
    }
    m
}

/// Repeatedly eliminate ±1 pivots. Returns the surviving columns (sorted)
/// and the surviving rows (restricted to those columns, zero rows dropped).
pub fn eliminate_unit_pivots(ncols: usize, rows: Vec<SparseRow>) -> (Vec<u32>, Vec<SparseRow>) {
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().filter(|r| !r.is_empty()).map(Some).collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r.as_ref().unwrap() {
            col_rows[*c as usize].push(i as u32);
        }
    }
    let mut col_dead = vec![false; ncols];
    // process rows by increasing length; lengths change, so use a heap with lazy keys
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<(usize, u32)>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| std::cmp::Reverse((r.as_ref().unwrap().len(), i as u32)))
        .collect();
    while let Some(std::cmp::Reverse((len, ri))) = heap.pop() {
        let ri = ri as usize;
        let Some(row) = rows[ri].as_ref() else { continue };
        if row.len() != len {
            heap.push(std::cmp::Reverse((row.len(), ri as u32)));
            continue;
        }
        // pick a unit entry with the fewest other rows in its column
        let mut best: Option<(usize, u32)> = None;
        for (c, v) in row {
            if v.abs().is_one() {
                let cnt = col_rows[*c as usize].len();
                if best.map_or(true, |(bc, _)| cnt < bc) {
                    best = Some((cnt, *c));
                }
            }
        }
        let Some((_, pc)) = best else { continue };
        let prow = rows[ri].take().unwrap();
        let pval = sparse_get(&prow, pc).unwrap().clone();
        let others = std::mem::take(&mut col_rows[pc as usize]);
        for oi in others {
            let oi = oi as usize;
            if oi == ri {
                continue;
            }
            let Some(orow) = rows[oi].as_ref() else { continue };
            let Some(ov) = sparse_get(orow, pc) else { continue };
            // orow - (ov/pval) prow, pval = ±1
            let k = -(ov * &pval);
            let new = sparse_axpy(orow, &k, &prow);
            for (c, _) in &new {
                if sparse_get(orow, *c).is_none() {
                    col_rows[*c as usize].push(oi as u32);
                }
            }
            if new.is_empty() {
                rows[oi] = None;
            } else {
                heap.push(std::cmp::Reverse((new.len(), oi as u32)));
                rows[oi] = Some(new);
            }
        }
        col_dead[pc as usize] = true;
    }
    let live: Vec<u32> = (0..ncols as u32).filter(|&c| !col_dead[c as usize]).collect();
    let rest: Vec<SparseRow> = rows.into_iter().flatten().filter(|r| !r.is_empty()).collect();
    (live, rest)
}

/// Intersection of the row lattice with the coordinate subspace where the
/// columns `< split` vanish, by unimodular row echelon on those columns.
/// Returned rows are shifted so that column `split` becomes column 0.
pub fn lattice_project(rows: Vec<SparseRow>, split: u32) -> Vec<SparseRow> {
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().filter(|r| !r.is_empty()).map(Some).collect();
    let ncols_front = split as usize;
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols_front];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r.as_ref().unwrap() {
            if (*c as usize) < ncols_front {
                col_rows[*c as usize].push(i as u32);
            }
        }
    }
    // column order: fewest rows first (recomputed lazily)
    let mut order: Vec<usize> = (0..ncols_front).collect();
    order.sort_by_key(|&c| col_rows[c].len());
    for &c in &order {
        let c32 = c as u32;
        loop {
            let mut live: Vec<usize> = col_rows[c]
                .iter()
                .map(|&i| i as usize)
                .filter(|&i| rows[i].as_ref().map_or(false, |r| sparse_get(r, c32).is_some()))
                .collect();
            live.sort_unstable();
            live.dedup();
            col_rows[c] = live.iter().map(|&i| i as u32).collect();
            if live.is_empty() {
                break;
            }
            if live.len() == 1 {
                rows[live[0]] = None;
                col_rows[c].clear();
                break;
            }
            let p = *live
                .iter()
                .min_by(|&&a, &&b| {
                    let ra = rows[a].as_ref().unwrap();
                    let rb = rows[b].as_ref().unwrap();
                    let va = sparse_get(ra, c32).unwrap().abs();
                    let vb = sparse_get(rb, c32).unwrap().abs();
                    va.cmp(&vb).then(ra.len().cmp(&rb.len()))
                })
                .unwrap();
            let prow = rows[p].clone().unwrap();
            let pv = sparse_get(&prow, c32).unwrap().clone();
            for &i in &live {
                if i == p {
                    continue;
                }
                let r = rows[i].as_ref().unwrap();
                let v = sparse_get(r, c32).unwrap();
                let q = -(v.div_floor(&pv));
                let new = sparse_axpy(r, &q, &prow);
                for (cc, _) in &new {
                    if (*cc as usize) < ncols_front && sparse_get(r, *cc).is_none() {
                        col_rows[*cc as usize].push(i as u32);
                    }
                }
                rows[i] = if new.is_empty() { None } else { Some(new) };
            }
        }
    }
    rows.into_iter()
        .flatten()
        .map(|r| {
            debug_assert!(r.iter().all(|(c, _)| *c >= split));
            r.into_iter().map(|(c, v)| (c - split, v)).collect::<SparseRow>()
        })
        .filter(|r: &SparseRow| !r.is_empty())
        .collect()
}

/// Integer polynomial, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        let mut p = IntPoly(c.iter().map(|&x| BigInt::from(x)).collect());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().map_or(false, Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return IntPoly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = IntPoly(out);
        p.trim();
        p
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::from_i64(&[1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if a.is_one() && d > 0 { String::new() } else { a.to_string() };
            match d {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI − A)` by the division-free Berkowitz
/// algorithm.
pub fn charpoly(a: &IntMat) -> IntPoly {
    assert_eq!(a.rows, a.cols, "charpoly of non-square matrix");
    let n = a.rows;
    if n == 0 {
        return IntPoly::from_i64(&[1]);
    }
    // vect holds coefficients from highest degree down
    let mut vect: Vec<BigInt> = vec![BigInt::one(), -a.get(0, 0).clone()];
    for r in 1..n {
        // R = row r, columns 0..r ; C = column r, rows 0..r ; A_r = leading r×r block
        let row: Vec<BigInt> = (0..r).map(|j| a.get(r, j).clone()).collect();
        let mut col: Vec<BigInt> = (0..r).map(|i| a.get(i, r).clone()).collect();
        // Toeplitz column: [1, -a_rr, -R C, -R A C, -R A^2 C, ...]
        let mut t = vec![BigInt::one(), -a.get(r, r).clone()];
        for _ in 0..r {
            let rc: BigInt = row.iter().zip(&col).map(|(x, y)| x * y).sum();
            t.push(-rc);
            let next: Vec<BigInt> = (0..r).map(|i| (0..r).map(|j| a.get(i, j) * &col[j]).sum()).collect();
            col = next;
        }
        // new vect = T (lower triangular Toeplitz (r+2)×(r+1)) * vect
        let mut nv = vec![BigInt::zero(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot += &t[i - j] * v;
                }
            }
        }
        vect = nv;
    }
    vect.reverse();
    let mut p = IntPoly(vect);
    p.trim();
    p
}

/// Whether two integer matrices (same row count) have the same column span over ℚ.
pub fn same_column_span(a: &IntMat, b: &IntMat) -> Result<bool, ZlatError> {
    if a.rows != b.rows {
        return Err(ZlatError::Dimension(format!("{} vs {} rows", a.rows, b.rows)));
    }
    let ra = a.rank();
    let rb = b.rank();
    Ok(ra == rb && a.hcat(b).rank() == ra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::parse_presentation;

    fn m(rows: &[Vec<i64>]) -> IntMat {
        IntMat::from_rows(rows)
    }

    #[test]
    fn hnf_kernel_examples() {
        let (h, k) = hnf_kernel(&IntMat::identity(3));
        assert_eq!(h, IntMat::identity(3));
        assert_eq!(k.rows(), 0);
        let (h, k) = hnf_kernel(&m(&[vec![2, 4]]));
        assert_eq!(h, m(&[vec![2, 4]]));
        assert_eq!(k.rows(), 1);
        let kv = k.row_vec(0);
        assert!(kv == vec![BigInt::from(2), BigInt::from(-1)] || kv == vec![BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn smith_examples() {
        let sf = smith_form(&m(&[vec![2, 0], vec![0, 3]]));
        assert!(sf.verify(&m(&[vec![2, 0], vec![0, 3]])));
        assert_eq!(sf.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let sf = smith_form(&a);
        assert!(sf.verify(&a));
        assert_eq!(sf.invariant_factors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn abelianization_examples() {
        let p = parse_presentation("<x | x^4>").unwrap();
        assert_eq!(abelian_invariants(&p), AbelianInvariants { torsion: vec![4], free_rank: 0 });
        let p = parse_presentation("<x, y | x^2*y^4, x^-2*y^2>").unwrap();
        assert_eq!(abelian_invariants(&p), cokernel_invariants(&relation_matrix(&p)));
    }

    #[test]
    fn lambda_abelianization_has_z3() {
        let p = crate::fpcore::lambda_presentation();
        let inv = abelian_invariants(&p);
        // Hand SNF of the 10×4 exponent matrix: the quotient surjects onto ℤ/3.
        assert_eq!(inv.free_rank, 0);
        assert!(inv.torsion.iter().product::<u64>() % 3 == 0, "{inv}");
        assert_eq!(inv, cokernel_invariants(&relation_matrix(&p)));
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly(&IntMat::identity(2)), IntPoly::from_i64(&[1, -2, 1]));
        let comp = m(&[vec![0, -1], vec![1, -1]]);
        assert_eq!(charpoly(&comp), IntPoly::from_i64(&[1, 1, 1]));
        assert_eq!(IntPoly::from_i64(&[1, 1, 1]).to_string(), "x^2 + x + 1");
    }

    #[test]
    fn column_spans() {
        let a = m(&[vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert!(same_column_span(&a, &a).unwrap());
        let b = a.hcat(&m(&[vec![2], vec![6], vec![10]]));
        assert!(same_column_span(&a, &b).unwrap());
        let c = m(&[vec![1, 0], vec![0, 1], vec![0, 0]]);
        assert!(!same_column_span(&a, &c).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let a = m(&[vec![1, -2], vec![30, 4]]);
        assert_eq!(IntMat::from_text(&a.to_text()).unwrap(), a);
        assert!(IntMat::from_text("2 2 1 2 3").is_err());
    }

    #[test]
    fn projection_intersection() {
        // rows (1,0 | 5), (2,0 | 7): intersection with first column zero is (0|7-10)=(0|-3)
        let rows = vec![
            vec![(0u32, BigInt::from(1)), (2, BigInt::from(5))],
            vec![(0u32, BigInt::from(2)), (2, BigInt::from(7))],
        ];
        let out = lattice_project(rows, 2);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], vec![(0u32, BigInt::from(-3))]);
    }
}
