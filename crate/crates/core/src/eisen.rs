//! Arithmetic in ℚ(α), α² + α + 1 = 0, and free ℤ[α]-bases of lattices
//! carrying an order-3 fixed-point-free automorphism.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{rat, Mat, Scalar};
use crate::zlat::{charpoly, cokernel_invariants, IntMat, IntPoly};

/// `a + b·α` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EisScalar {
    pub a: BigRational,
    pub b: BigRational,
}

impl EisScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        EisScalar { a, b }
    }

    pub fn int(a: i64, b: i64) -> Self {
        EisScalar { a: rat(a), b: rat(b) }
    }

    pub fn alpha() -> Self {
        Self::int(0, 1)
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// `a + b·α² = (a − b) − b·α`.
    pub fn conj(&self) -> Self {
        EisScalar { a: &self.a - &self.b, b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Nearest element of ℤ[α] to `self / d` (coordinate-wise rounding),
    /// for integral `self` and `d ≠ 0`.
    fn round_div(&self, d: &EisScalar) -> EisScalar {
        let n = d.norm();
        let num = self.mul(&d.conj());
        let r = |x: &BigRational| (x / &n).round();
        EisScalar { a: r(&num.a), b: r(&num.b) }
    }
}

impl Scalar for EisScalar {
    fn zero() -> Self {
        Self::int(0, 0)
    }
    fn one() -> Self {
        Self::int(1, 0)
    }
    fn from_int(n: i64) -> Self {
        Self::int(n, 0)
    }
    fn from_rational(q: &BigRational) -> Self {
        EisScalar { a: q.clone(), b: Zero::zero() }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, o: &Self) -> Self {
        EisScalar { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn sub(&self, o: &Self) -> Self {
        EisScalar { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    fn mul(&self, o: &Self) -> Self {
        // (a+bα)(c+dα) = (ac − bd) + (ad + bc − bd)α
        let bd = &self.b * &o.b;
        EisScalar { a: &self.a * &o.a - &bd, b: &self.a * &o.b + &self.b * &o.a - bd }
    }
    fn neg(&self) -> Self {
        EisScalar { a: -&self.a, b: -&self.b }
    }
    fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!Zero::is_zero(&n), "division by zero");
        let c = self.conj();
        EisScalar { a: c.a / &n, b: c.b / n }
    }
}

impl fmt::Display for EisScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EisError {
    #[error("cannot parse `{0}` as a+b*w")]
    Parse(String),
    #[error("J² + J + I ≠ 0")]
    NotOrderThree,
    #[error("characteristic polynomial is {0}, not a power of x^2 + x + 1")]
    CharPoly(String),
    #[error("matrix is {0}x{1}, expected square of even size")]
    Shape(usize, usize),
    #[error("no free ℤ[α]-basis found")]
    NoBasis,
}

impl FromStr for EisScalar {
    type Err = EisError;

    /// Accepts `a+b*w`, `a-b*w`, `a`, `b*w` with rational `a`, `b`.
    fn from_str(s: &str) -> Result<Self, EisError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || EisError::Parse(s.to_string());
        let q = |x: &str| -> Result<BigRational, EisError> {
            match x {
                "" | "+" => Ok(One::one()),
                "-" => Ok(-<BigRational as One>::one()),
                _ => x.trim_start_matches('+').parse::<BigRational>().map_err(|_| err()),
            }
        };
        let Some(body) = t.strip_suffix('w') else { return Ok(EisScalar { a: q(&t)?, b: Zero::zero() }) };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not the leading one and not inside a fraction
        let cut = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (a, b) = match cut {
            Some(i) => (q(&body[..i])?, q(&body[i..])?),
            None => (Zero::zero(), q(body)?),
        };
        Ok(EisScalar { a, b })
    }
}

/// Free ℤ[α]-basis certificate for `ℤ^n` with α acting as `x ↦ xJ` on row
/// vectors.
#[derive(Clone, Debug)]
pub struct AlbaneseModule {
    pub j: IntMat,
    pub basis_pairs: Vec<Vec<BigInt>>,
    /// Rows `v₁, v₁J, …, v_m, v_mJ`.
    pub change_of_basis: IntMat,
    pub determinant: BigInt,
    /// Whether the greedy search or the Hermite fallback produced the basis.
    pub method: &'static str,
}

fn row_times(v: &[BigInt], j: &IntMat) -> Vec<BigInt> {
    (0..j.cols()).map(|c| v.iter().enumerate().fold(BigInt::zero(), |acc, (i, x)| acc + x * j.get(i, c))).collect()
}

fn x2x1_power(k: u32) -> IntPoly {
    IntPoly::from_i64(&[1, 1, 1]).pow(k)
}

fn pairs_matrix(vs: &[Vec<BigInt>], j: &IntMat) -> IntMat {
    let mut rows = Vec::new();
    for v in vs {
        rows.push(v.clone());
        rows.push(row_times(v, j));
    }
    IntMat::from_rows(&rows)
}

/// Whether the rows span a saturated sublattice of full row rank.
fn saturated(m: &IntMat) -> bool {
    m.rank() == m.rows() && cokernel_invariants(m).torsion.is_empty()
}

/// Checks that `J` defines a ℤ[α]-module structure and returns a free basis.
pub fn module_structure(j: &IntMat) -> Result<AlbaneseModule, EisError> {
    let n = j.rows();
    if n != j.cols() || n % 2 == 1 {
        return Err(EisError::Shape(n, j.cols()));
    }
    if !j.mul(j).add(j).add(&IntMat::identity(n)).is_zero() {
        return Err(EisError::NotOrderThree);
    }
    let cp = charpoly(j);
    if cp != x2x1_power(n as u32 / 2) {
        return Err(EisError::CharPoly(cp.to_string()));
    }
    if let Some(vs) = greedy_basis(j) {
        return Ok(certificate(j, vs, "greedy"));
    }
    let vs = hermite_basis(j).ok_or(EisError::NoBasis)?;
    Ok(certificate(j, vs, "hermite"))
}

fn certificate(j: &IntMat, vs: Vec<Vec<BigInt>>, method: &'static str) -> AlbaneseModule {
    let m = pairs_matrix(&vs, j);
    let determinant = m.determinant();
    AlbaneseModule { j: j.clone(), basis_pairs: vs, change_of_basis: m, determinant, method }
}

fn candidates(n: usize) -> Vec<Vec<BigInt>> {
    let unit = |i: usize| -> Vec<BigInt> { (0..n).map(|k| BigInt::from((k == i) as i64)).collect() };
    let mut out: Vec<Vec<BigInt>> = (0..n).map(unit).collect();
    for i in 0..n {
        for k in i + 1..n {
            for s in [1, -1] {
                let mut v = unit(i);
                v[k] = BigInt::from(s);
                out.push(v);
            }
        }
    }
    out
}

/// Pick `v` among small vectors whenever `{…, v, vJ}` stays saturated.
pub fn greedy_basis(j: &IntMat) -> Option<Vec<Vec<BigInt>>> {
    let n = j.rows();
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    for v in candidates(n) {
        if chosen.len() * 2 == n {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(v);
        if saturated(&pairs_matrix(&trial, j)) {
            chosen = trial;
        }
    }
    (chosen.len() * 2 == n).then_some(chosen)
}

/// Hermite reduction over the Euclidean ring ℤ[α]: coordinates of the
/// standard basis relative to a ℚ(α)-basis are cleared of denominators,
/// echelonized with norm-decreasing division, and mapped back.
pub fn hermite_basis(j: &IntMat) -> Option<Vec<Vec<BigInt>>> {
    let n = j.rows();
    let m = n / 2;
    let to_q = |v: &[BigInt]| -> Vec<BigRational> { v.iter().map(|x| BigRational::from_integer(x.clone())).collect() };
    // ℚ(α)-basis b₁..b_m among the unit vectors
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for v in candidates(n).into_iter().take(n) {
        let mut trial = basis.clone();
        trial.push(v);
        if pairs_matrix(&trial, j).rank() == 2 * trial.len() {
            basis = trial;
        }
        if basis.len() == m {
            break;
        }
    }
    if basis.len() != m {
        return None;
    }
    let p = pairs_matrix(&basis, j);
    let p_q: Mat<BigRational> = Mat::from_fn(n, n, |r, c| BigRational::from_integer(p.get(r, c).clone()));
    let p_inv = p_q.inverse()?;
    // e_k = row k of P⁻¹ · P, so row k of P⁻¹ holds ℚ-coordinates
    let mut rows: Vec<Vec<EisScalar>> = (0..n)
        .map(|k| (0..m).map(|i| EisScalar::new(p_inv.get(k, 2 * i).clone(), p_inv.get(k, 2 * i + 1).clone())).collect())
        .collect();
    let denom = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.a.denom()).lcm(x.b.denom()));
    let d = EisScalar::from_rational(&BigRational::from_integer(denom.clone()));
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = x.mul(&d);
        }
    }
    let echelon = eisenstein_echelon(rows, m);
    if echelon.len() != m {
        return None;
    }
    let inv_d = d.inv();
    let mut out = Vec::new();
    for y in echelon {
        let mut u = vec![<BigRational as Zero>::zero(); n];
        for (i, yi) in y.iter().enumerate() {
            let c = yi.mul(&inv_d);
            let b0 = to_q(&basis[i]);
            let b1 = to_q(&row_times(&basis[i], j));
            for k in 0..n {
                u[k] += &c.a * &b0[k] + &c.b * &b1[k];
            }
        }
        if u.iter().any(|x| !x.is_integer()) {
            return None;
        }
        out.push(u.into_iter().map(|x| x.to_integer()).collect());
    }
    saturated(&pairs_matrix(&out, j)).then_some(out)
}

/// Row echelon form over ℤ[α] of integral rows; returns the nonzero rows.
pub fn eisenstein_echelon(mut rows: Vec<Vec<EisScalar>>, ncols: usize) -> Vec<Vec<EisScalar>> {
    let mut out = Vec::new();
    for c in 0..ncols {
        loop {
            let live: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][c].is_zero()).collect();
            let Some(&p) = live.iter().min_by(|&&x, &&y| rows[x][c].norm().cmp(&rows[y][c].norm())) else { break };
            if live.len() == 1 {
                out.push(rows.swap_remove(p));
                break;
            }
            let piv = rows[p].clone();
            for &r in &live {
                if r == p {
                    continue;
                }
                let q = rows[r][c].round_div(&piv[c]);
                for k in c..ncols {
                    rows[r][k] = rows[r][k].sub(&q.mul(&piv[k]));
                }
            }
        }
    }
    out
}

/// Numerical value of `N(x)` when it fits, for reports.
pub fn norm_f64(x: &EisScalar) -> f64 {
    x.norm().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> EisScalar {
        EisScalar::int(a, b)
    }

    #[test]
    fn norms() {
        assert_eq!(EisScalar::alpha().norm(), rat(1));
        assert_eq!(e(10, 8).norm(), rat(84));
        let x = e(3, -5);
        assert_eq!(x.mul(&x.conj()), EisScalar::from_rational(&x.norm()));
        // α³ = 1
        let a = EisScalar::alpha();
        assert_eq!(a.mul(&a).mul(&a), EisScalar::one());
        assert_eq!(a.mul(&a).add(&a).add(&EisScalar::one()), EisScalar::zero());
    }

    #[test]
    fn text_form() {
        for s in ["10+8*w", "1/2-3*w", "-7+0*w", "0+1*w"] {
            let x: EisScalar = s.parse().unwrap();
            assert_eq!(x.to_string().parse::<EisScalar>().unwrap(), x);
        }
        assert_eq!("w".parse::<EisScalar>().unwrap(), EisScalar::alpha());
        assert_eq!("-w".parse::<EisScalar>().unwrap(), e(0, -1));
        assert_eq!("5".parse::<EisScalar>().unwrap(), e(5, 0));
        assert!("x+1".parse::<EisScalar>().is_err());
    }

    fn companion_blocks(k: usize) -> IntMat {
        let mut j = IntMat::zeros(2 * k, 2 * k);
        for b in 0..k {
            // e ↦ f, f ↦ −e − f on rows
            j.set(2 * b, 2 * b + 1, BigInt::from(1));
            j.set(2 * b + 1, 2 * b, BigInt::from(-1));
            j.set(2 * b + 1, 2 * b + 1, BigInt::from(-1));
        }
        j
    }

    #[test]
    fn companion_single_pair() {
        let j = companion_blocks(1);
        let m = module_structure(&j).unwrap();
        assert_eq!(m.basis_pairs.len(), 1);
        assert_eq!(m.determinant.abs(), BigInt::from(1));
    }

    #[test]
    fn identity_rejected() {
        assert_eq!(module_structure(&IntMat::identity(2)).unwrap_err(), EisError::NotOrderThree);
    }

    #[test]
    fn conjugated_blocks_and_hermite_fallback() {
        // conjugate a block-diagonal J by a unimodular matrix
        let k = 3;
        let j0 = companion_blocks(k);
        let mut u = IntMat::identity(2 * k);
        for i in 0..2 * k - 1 {
            u.set(i, i + 1, BigInt::from(i as i64 % 3 - 1));
        }
        u.set(2 * k - 1, 0, BigInt::from(2));
        assert_eq!(u.determinant().abs(), BigInt::from(1));
        let uq: Mat<BigRational> = Mat::from_fn(2 * k, 2 * k, |r, c| BigRational::from_integer(u.get(r, c).clone()));
        let ui = uq.inverse().unwrap();
        let ui = IntMat::from_rows(&(0..2 * k).map(|r| (0..2 * k).map(|c| ui.get(r, c).to_integer()).collect()).collect::<Vec<_>>());
        let j = u.mul(&j0).mul(&ui);
        let m = module_structure(&j).unwrap();
        assert_eq!(m.determinant.abs(), BigInt::from(1));
        let h = hermite_basis(&j).unwrap();
        assert_eq!(pairs_matrix(&h, &j).determinant().abs(), BigInt::from(1));
    }

    #[test]
    fn euclidean_echelon_gcd() {
        // gcd of 3 and 1 − α (3 = −α²(1−α)²) is 1 − α up to units
        let rows = vec![vec![e(3, 0)], vec![e(1, -1)]];
        let ech = eisenstein_echelon(rows, 1);
        assert_eq!(ech.len(), 1);
        assert_eq!(ech[0][0].norm(), rat(3));
    }
}
