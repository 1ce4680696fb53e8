//! Exterior-square geometry of the 7-dimensional representation: the kernel
//! subspace K ⊂ ∧²ℚ⁷, skew coefficient matrices, sub-Pfaffians, the
//! invariant quadric and the subspace/Lagrangian checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::eisen::EisScalar;
use crate::linalg::{leading_minors, same_span, span_intersection, Mat, Scalar};
use crate::polyring::{exact_divide, groebner, primitive_integral, Fp, GroebnerError, MonomialOrder, Poly};
use crate::repchar::{isotypic_projector, ClassData, Cyclo, IMat, MatGroup, MatRep};

#[derive(Debug, Error)]
pub enum WedgeError {
    #[error("isotypic projector has rank {0}, expected 7")]
    ProjectorRank(usize),
    #[error("sub-Pfaffians share no invariant quadratic factor")]
    NoQuadric,
    #[error("{0} is not in the kernel span")]
    NotInKernel(String),
    #[error(transparent)]
    Rep(#[from] crate::repchar::RepError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn pair_position(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// `∧²m`: row `(i,j)`, column `(k,l)` holds `m_ik·m_jl − m_il·m_jk`.
pub fn wedge_matrix(m: &IMat) -> IMat {
    let pairs = wedge_pairs(m.n);
    let d = pairs.len();
    let mut e = vec![0i64; d * d];
    for (r, &(i, j)) in pairs.iter().enumerate() {
        for (c, &(k, l)) in pairs.iter().enumerate() {
            e[r * d + c] = m.get(i, k) * m.get(j, l) - m.get(i, l) * m.get(j, k);
        }
    }
    IMat { n: d, e }
}

pub fn wedge_square(rep: &MatRep) -> MatRep {
    rep.derive(&format!("wedge2({})", rep.name), wedge_matrix)
}

pub const N_ROWS: [[i64; 14]; 7] = [
    [0, 0, 2, -2, -2, -2, 0, 2, 2, -2, 2, 2, 2, 2],
    [-1, 0, 0, 2, 4, 0, 1, -3, -3, 1, -3, -4, -2, -4],
    [0, -2, 0, -2, -2, 0, -2, 2, 2, 0, 0, 2, 2, 2],
    [-1, -2, 2, 0, -2, 0, -1, 1, 3, 1, 1, 0, 0, 2],
    [-1, 1, -1, 3, 1, 3, 0, -4, -2, 2, 0, -4, -2, -2],
    [0, 3, -3, 1, -1, 1, 1, -3, -3, -1, 1, 0, -2, -2],
    [1, 1, 1, 3, 3, 1, 2, -2, 0, 0, 0, -2, 0, -2],
];

pub const Q_ROWS: [[i64; 7]; 7] = [
    [7, 3, 3, 1, -3, -3, -5],
    [3, 7, 3, 3, 1, -3, -3],
    [3, 3, 7, 3, 3, 1, -3],
    [1, 3, 3, 7, 3, 3, 1],
    [-3, 1, 3, 3, 7, 3, 3],
    [-3, -3, 1, 3, 3, 7, 3],
    [-5, -3, -3, 1, 3, 3, 7],
];

/// `M = ᵗ(N | 2I₇)`, 21×7; its columns span K.
pub fn reference_kernel<F: Scalar>() -> Mat<F> {
    Mat::from_fn(21, 7, |r, c| if r < 14 { F::from_int(N_ROWS[c][r]) } else { F::from_int(if r - 14 == c { 2 } else { 0 }) })
}

pub fn reference_quadric<F: Scalar>() -> Mat<F> {
    Mat::from_fn(7, 7, |i, j| F::from_int(Q_ROWS[i][j]))
}

/// `(10+8α, −7, 0, 0, 7, 0, 0)`.
pub fn seed_point() -> Vec<EisScalar> {
    let mut v = vec![EisScalar::int(0, 0); 7];
    v[0] = EisScalar::int(10, 8);
    v[1] = EisScalar::int(-7, 0);
    v[4] = EisScalar::int(7, 0);
    v
}

/// Action on 2-vectors built from row vectors: `x ↦ x·ρ(g)`, written on
/// wedge coordinates as the column action of `∧²ρ(g)ᵀ`.
pub fn row_wedge(m: &IMat) -> IMat {
    wedge_matrix(&m.transpose())
}

/// Columns spanning the χ-isotypic part of ∧² of the row action, with an
/// invariance check. χ must be real-valued.
pub fn kernel_subspace(g: &MatGroup, cd: &ClassData, chi: &[Cyclo], degree: i64) -> Result<Mat<BigRational>, WedgeError> {
    let p = isotypic_projector(g, cd, chi, degree, &row_wedge)?;
    let k = p.column_basis();
    if k.cols != 7 {
        return Err(WedgeError::ProjectorRank(k.cols));
    }
    for m in &g.rep.gens {
        let w: Mat<BigRational> = row_wedge(m).to_mat();
        if !same_span(&w.mul(&k), &k) {
            return Err(WedgeError::ProjectorRank(0));
        }
    }
    Ok(k)
}

/// `R` with `w·K = K·R`, i.e. the action on kernel coordinates.
pub fn induced_action<F: Scalar>(w: &Mat<F>, k: &Mat<F>) -> Option<Mat<F>> {
    solve_columns(k, &w.mul(k))
}

/// `X` with `A·X = B`, for `A` of full column rank.
pub fn solve_columns<F: Scalar>(a: &Mat<F>, b: &Mat<F>) -> Option<Mat<F>> {
    let r = a.hcat(b).rref();
    if r.pivots.len() != a.cols || r.pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    Some(Mat::from_fn(a.cols, b.cols, |i, j| r.mat.get(i, a.cols + j).clone()))
}

/// 7×7 skew matrix of a 2-vector in wedge coordinates.
pub fn skew_of<F: Scalar>(w: &[F]) -> Mat<F> {
    let n = ((1.0 + (1.0 + 8.0 * w.len() as f64).sqrt()) / 2.0).round() as usize;
    let mut a = Mat::zeros(n, n);
    for (idx, (i, j)) in wedge_pairs(n).into_iter().enumerate() {
        a.set(i, j, w[idx].clone());
        a.set(j, i, w[idx].neg());
    }
    a
}

/// Half the rank of the skew matrix.
pub fn vector_rank<F: Scalar>(w: &[F]) -> usize {
    skew_of(w).rank() / 2
}

/// Pfaffian of a principal skew submatrix by expansion along the first row.
pub fn pfaffian<F: Scalar>(a: &Mat<F>, idx: &[usize]) -> F {
    if idx.is_empty() {
        return F::one();
    }
    if idx.len() % 2 == 1 {
        return F::zero();
    }
    let mut s = F::zero();
    for t in 1..idx.len() {
        let x = a.get(idx[0], idx[t]);
        if x.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(u, _)| u + 1 != t).map(|(_, &v)| v).collect();
        let term = x.mul(&pfaffian(a, &rest));
        s = if t % 2 == 1 { s.add(&term) } else { s.sub(&term) };
    }
    s
}

pub type QPoly = Poly<BigRational>;

/// Skew matrix of `w = K·a` with entries linear forms in `a₁..a_m`.
pub fn symbolic_skew(k: &Mat<BigRational>) -> Vec<Vec<QPoly>> {
    let n = ((1.0 + (1.0 + 8.0 * k.rows as f64).sqrt()) / 2.0).round() as usize;
    let m = k.cols;
    let ord = MonomialOrder::DegRevLex;
    let mut a = vec![vec![QPoly::zero(m, ord); n]; n];
    for (idx, (i, j)) in wedge_pairs(n).into_iter().enumerate() {
        let terms = (0..m)
            .map(|c| {
                let mut e = vec![0u16; m];
                e[c] = 1;
                (e, k.get(idx, c).clone())
            })
            .collect();
        let f = QPoly::from_terms(m, ord, terms);
        a[j][i] = f.neg();
        a[i][j] = f;
    }
    a
}

fn symbolic_pfaffian(a: &[Vec<QPoly>], idx: &[usize], nvars: usize) -> QPoly {
    let ord = MonomialOrder::DegRevLex;
    if idx.is_empty() {
        return QPoly::constant(nvars, ord, BigRational::from_integer(1.into()));
    }
    let mut s = QPoly::zero(nvars, ord);
    for t in 1..idx.len() {
        let x = &a[idx[0]][idx[t]];
        if x.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(u, _)| u + 1 != t).map(|(_, &v)| v).collect();
        let term = x.mul(&symbolic_pfaffian(a, &rest, nvars));
        s = if t % 2 == 1 { s.add(&term) } else { s.sub(&term) };
    }
    s
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

/// All principal sub-Pfaffians of the given even size, in subset order.
pub fn principal_pfaffians(a: &[Vec<QPoly>], size: usize, nvars: usize) -> Vec<QPoly> {
    assert!(size % 2 == 0, "Pfaffians need even size");
    subsets(a.len(), size).par_iter().map(|s| symbolic_pfaffian(a, s, nvars)).collect()
}

/// `aᵀ·Q·a` as a polynomial.
pub fn quadratic_form_poly(q: &Mat<BigRational>) -> QPoly {
    let n = q.rows;
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut e = vec![0u16; n];
            e[i] += 1;
            e[j] += 1;
            terms.push((e, q.get(i, j).clone()));
        }
    }
    QPoly::from_terms(n, MonomialOrder::DegRevLex, terms)
}

/// Symmetric matrix of a homogeneous quadric.
pub fn quadric_matrix(q: &QPoly) -> Mat<BigRational> {
    let n = q.nvars;
    let half = BigRational::new(1.into(), 2.into());
    let mut m = Mat::zeros(n, n);
    for (e, c) in q.terms() {
        let vars: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat(i).take(e[i] as usize)).collect();
        if let [i, j] = vars[..] {
            if i == j {
                m.set(i, i, c.clone());
            } else {
                m.set(i, j, c * &half);
                m.set(j, i, c * &half);
            }
        }
    }
    m
}

/// Symmetric `Q` with `Rᵀ·Q·R = Q` for all given `R` (column action).
pub fn invariant_symmetric_forms(actions: &[Mat<BigRational>]) -> Mat<BigRational> {
    let n = actions[0].rows;
    let vars: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let var_of = |i: usize, j: usize| vars.iter().position(|&v| v == (i.min(j), i.max(j))).unwrap();
    let mut rows = Vec::new();
    for r in actions {
        for a in 0..n {
            for b in a..n {
                // Σ_ij R_ia Q_ij R_jb − Q_ab
                let mut row = vec![<BigRational as Zero>::zero(); vars.len()];
                for i in 0..n {
                    for j in 0..n {
                        let c = r.get(i, a) * r.get(j, b);
                        if !Zero::is_zero(&c) {
                            row[var_of(i, j)] += c;
                        }
                    }
                }
                row[var_of(a, b)] -= BigRational::from_integer(1.into());
                rows.push(row);
            }
        }
    }
    let ker = Mat::from_rows(rows).kernel();
    // each kernel column as a flattened 7×7 symmetric matrix (column-major in `vars`)
    Mat::from_fn(n * n, ker.cols, |ij, c| ker.get(var_of(ij / n, ij % n), c).clone())
}

#[derive(Clone, Debug)]
pub struct QuadricRecord {
    pub q: Mat<BigRational>,
    pub poly: QPoly,
    pub cubics: Vec<QPoly>,
    pub cofactors: Vec<QPoly>,
    pub cofactor_rank: usize,
    pub matches_reference: bool,
    pub leading_minors: Vec<BigRational>,
    /// Which action convention produced the divisor: "column" or "row".
    pub convention: &'static str,
}

/// Coefficient matrix of linear forms.
fn linear_rank(forms: &[QPoly], nvars: usize) -> usize {
    let rows: Vec<Vec<BigRational>> = forms
        .iter()
        .map(|f| {
            (0..nvars)
                .map(|i| {
                    let mut e = vec![0u16; nvars];
                    e[i] = 1;
                    f.coeff(&e)
                })
                .collect()
        })
        .collect();
    Mat::from_rows(rows).rank()
}

fn normalize_symmetric(q: &Mat<BigRational>) -> Mat<BigRational> {
    let poly = primitive_integral(&quadratic_form_poly(q));
    let mut m = quadric_matrix(&poly);
    // content over the matrix entries, positive (1,1)
    let den = (0..49).fold(BigInt::from(1), |acc, t| num_integer::Integer::lcm(&acc, m.get(t / 7, t % 7).denom()));
    let ints: Vec<BigInt> = (0..49).map(|t| (m.get(t / 7, t % 7) * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let sign = if m.get(0, 0).is_negative() { -1 } else { 1 };
    let s = BigRational::new(den * sign, g);
    m = m.scale(&s);
    m
}

/// The 6×6 sub-Pfaffian cubics on K, divided exactly by the invariant quadric.
pub fn extract_quadric(k: &Mat<BigRational>, generators: &[IMat]) -> Result<QuadricRecord, WedgeError> {
    let a = symbolic_skew(k);
    let cubics = principal_pfaffians(&a, 6, k.cols);
    let actions: Vec<Mat<BigRational>> = generators
        .iter()
        .map(|g| induced_action(&row_wedge(g).to_mat(), k).ok_or_else(|| WedgeError::NotInKernel("∧²ρ(g)·K".into())))
        .collect::<Result<_, _>>()?;
    let transposed: Vec<Mat<BigRational>> = actions.iter().map(Mat::transpose).collect();
    for (convention, acts) in [("column", &actions), ("row", &transposed)] {
        let forms = invariant_symmetric_forms(acts);
        if forms.cols != 1 {
            continue;
        }
        let q = normalize_symmetric(&Mat::from_fn(7, 7, |i, j| forms.get(i * 7 + j, 0).clone()));
        let poly = quadratic_form_poly(&q);
        let Some(cofactors) = cubics.iter().map(|c| exact_divide(c, &poly)).collect::<Option<Vec<_>>>() else { continue };
        if cubics.iter().all(|c| c.is_zero()) {
            return Err(WedgeError::NoQuadric);
        }
        let cofactor_rank = linear_rank(&cofactors, k.cols);
        let matches_reference = q == reference_quadric();
        let leading_minors = leading_minors(&q);
        return Ok(QuadricRecord { q, poly, cubics, cofactors, cofactor_rank, matches_reference, leading_minors, convention });
    }
    Err(WedgeError::NoQuadric)
}

/// `a·Q·aᵀ` over ℚ(α).
pub fn eval_quadric(q: &Mat<BigRational>, a: &[EisScalar]) -> EisScalar {
    let qe: Mat<EisScalar> = q.map(EisScalar::from_rational);
    let qa = qe.mul_vec(a);
    a.iter().zip(&qa).fold(<EisScalar as Scalar>::zero(), |s, (x, y)| s.add(&x.mul(y)))
}

fn bilinear(q: &Mat<BigRational>, a: &[EisScalar], b: &[EisScalar]) -> EisScalar {
    let qe: Mat<EisScalar> = q.map(EisScalar::from_rational);
    let qb = qe.mul_vec(b);
    a.iter().zip(&qb).fold(<EisScalar as Scalar>::zero(), |s, (x, y)| s.add(&x.mul(y)))
}

#[derive(Clone, Debug)]
pub struct DecomposableCertificate {
    pub nvars: usize,
    pub generators: usize,
    pub basis_size: usize,
    pub pairs_processed: usize,
    /// Least `k` with `a_i^k` in the ideal, per variable.
    pub powers: Vec<Option<u32>>,
}

impl DecomposableCertificate {
    pub fn certified(&self) -> bool {
        self.powers.iter().all(Option::is_some)
    }
}

/// Certifies that `span(K)` has no nonzero decomposable vector: every
/// coordinate has a power in the ideal of 4×4 sub-Pfaffians.
pub fn no_decomposables_certificate(k: &Mat<BigRational>, max_pairs: usize, max_power: u32) -> Result<DecomposableCertificate, WedgeError> {
    let a = symbolic_skew(k);
    let quads: Vec<QPoly> = principal_pfaffians(&a, 4, k.cols).into_iter().filter(|p| !p.is_zero()).collect();
    let gb = groebner(&quads, MonomialOrder::DegRevLex, max_pairs)?;
    let powers = (0..k.cols).map(|i| gb.variable_power_membership(i, max_power)).collect();
    Ok(DecomposableCertificate {
        nvars: k.cols,
        generators: quads.len(),
        basis_size: gb.gens.len(),
        pairs_processed: gb.pairs_processed,
        powers,
    })
}

pub type F31 = Fp<31>;

/// Random nonzero 𝔽₃₁-points of `q = 0`; returns (points sampled, points
/// where every 4×4 sub-Pfaffian also vanishes).
pub fn finite_field_precheck(k: &Mat<BigRational>, q: &Mat<BigRational>, samples: usize, rng: &mut impl Rng) -> (usize, usize) {
    let a = symbolic_skew(k);
    let quads: Vec<Poly<F31>> = principal_pfaffians(&a, 4, k.cols).iter().map(|p| p.map(F31::from_rational)).collect();
    let qp = quadratic_form_poly(q).map(F31::from_rational);
    let n = k.cols;
    let (mut found, mut bad) = (0, 0);
    let mut tries = 0;
    while found < samples && tries < samples * 1000 {
        tries += 1;
        let mut x: Vec<F31> = (0..n - 1).map(|_| F31::new(rng.gen_range(0..31))).collect();
        x.push(F31::new(0));
        // q(x', t) = c₂t² + c₁t + c₀ in the last coordinate
        let c0 = qp.eval(&x);
        let mut x1 = x.clone();
        x1[n - 1] = F31::new(1);
        let mut xm = x.clone();
        xm[n - 1] = F31::new(-1);
        let (p1, pm) = (qp.eval(&x1), qp.eval(&xm));
        let inv2 = F31::new(2).inv();
        let c2 = p1.add(&pm).sub(&c0).sub(&c0).mul(&inv2);
        let c1 = p1.sub(&pm).mul(&inv2);
        let Some(t) = (0..31).map(F31::new).find(|t| c2.mul(t).mul(t).add(&c1.mul(t)).add(&c0).is_zero()) else { continue };
        x[n - 1] = t;
        if x.iter().all(|v| v.is_zero()) {
            continue;
        }
        found += 1;
        if quads.iter().all(|f| f.eval(&x).is_zero()) {
            bad += 1;
        }
    }
    (found, bad)
}

/// An isotropic vector `x + α·s·e_i` with integer `x` of small support:
/// `q(x) = s²Q_ii` and `2(Qx)_i = s·Q_ii` make both ℚ-parts of `q` vanish.
pub fn find_eisenstein_point(q: &Mat<BigRational>, bound: i64, max_support: usize) -> Option<Vec<EisScalar>> {
    let n = q.rows;
    let qi: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| as_i64(q.get(i, j)).expect("integral quadric")).collect()).collect();
    let mut found = None;
    let mut x = vec![0i64; n];
    fn rec(
        pos: usize,
        used: usize,
        x: &mut Vec<i64>,
        qi: &[Vec<i64>],
        bound: i64,
        max_support: usize,
        out: &mut Option<(Vec<i64>, usize, i64)>,
    ) {
        if out.is_some() {
            return;
        }
        let n = x.len();
        if pos == n {
            if used == 0 {
                return;
            }
            let qx: Vec<i64> = (0..n).map(|i| (0..n).map(|j| qi[i][j] * x[j]).sum()).collect();
            let val: i64 = (0..n).map(|i| x[i] * qx[i]).sum();
            for i in 0..n {
                let d = qi[i][i];
                if (2 * qx[i]) % d != 0 {
                    continue;
                }
                let s = 2 * qx[i] / d;
                if s != 0 && val == s * s * d {
                    *out = Some((x.clone(), i, s));
                    return;
                }
            }
            return;
        }
        rec(pos + 1, used, x, qi, bound, max_support, out);
        if used < max_support {
            for v in (-bound..=bound).filter(|&v| v != 0) {
                x[pos] = v;
                rec(pos + 1, used + 1, x, qi, bound, max_support, out);
            }
            x[pos] = 0;
        }
    }
    rec(0, 0, &mut x, &qi, bound, max_support, &mut found);
    let (x, i, s) = found?;
    let mut p: Vec<EisScalar> = x.iter().map(|&v| EisScalar::int(v, 0)).collect();
    p[i] = p[i].add(&EisScalar::int(0, s));
    debug_assert!(Scalar::is_zero(&eval_quadric(q, &p)));
    Some(p)
}

/// Projectively distinct points on `q = 0` over ℚ(α), from chords through the seed.
pub fn quadric_points(q: &Mat<BigRational>, seed: &[EisScalar], count: usize) -> Vec<Vec<EisScalar>> {
    let n = seed.len();
    let mut out: Vec<Vec<EisScalar>> = Vec::new();
    let directions = (0..n)
        .map(|i| (0..n).map(|t| (t == i) as i64).collect::<Vec<_>>())
        .chain((0..n).flat_map(|i| (i + 1..n).flat_map(move |j| [1i64, -1].map(|s| (0..n).map(|t| if t == i { 1 } else if t == j { s } else { 0 }).collect()))));
    for v in directions {
        if out.len() == count {
            break;
        }
        let v: Vec<EisScalar> = v.into_iter().map(|x| EisScalar::int(x, 0)).collect();
        let b = bilinear(q, seed, &v);
        let qv = eval_quadric(q, &v);
        if Scalar::is_zero(&b) || Scalar::is_zero(&qv) {
            continue;
        }
        let t = b.mul(&EisScalar::int(-2, 0)).div(&qv);
        let p: Vec<EisScalar> = seed.iter().zip(&v).map(|(s, d)| s.add(&t.mul(d))).collect();
        let distinct = out.iter().chain(std::iter::once(&seed.to_vec())).all(|o| Mat::from_cols(&[o.clone(), p.clone()], n).rank() == 2);
        if distinct {
            out.push(p);
        }
    }
    out
}

/// `w = K·a` over ℚ(α).
pub fn point_to_wedge(k: &Mat<BigRational>, a: &[EisScalar]) -> Vec<EisScalar> {
    k.map(EisScalar::from_rational).mul_vec(a)
}

/// Column span of `A_w`: the smallest subspace whose ∧² contains `w`.
pub fn support(w: &[EisScalar]) -> Mat<EisScalar> {
    skew_of(w).column_basis()
}

/// Basis of `∧²W ∩ span(K)` in wedge coordinates.
pub fn subspace_wedge_intersection<F: Scalar>(w: &Mat<F>, k: &Mat<F>) -> Mat<F> {
    let n = w.rows;
    let cols: Vec<Vec<F>> = wedge_pairs(w.cols)
        .into_iter()
        .map(|(s, t)| {
            wedge_pairs(n).into_iter().map(|(i, j)| w.get(i, s).mul(w.get(j, t)).sub(&w.get(j, s).mul(w.get(i, t)))).collect()
        })
        .collect();
    if cols.is_empty() {
        return Mat::zeros(k.rows, 0);
    }
    span_intersection(&Mat::from_cols(&cols, k.rows), k)
}

/// Idempotent with image `span(W)`, complementing by coordinate vectors.
pub fn produce_projection<F: Scalar>(w: &Mat<F>) -> Mat<F> {
    let n = w.rows;
    let w = w.column_basis();
    let full = w.hcat(&Mat::identity(n)).column_basis();
    let p_inv = full.inverse().expect("basis extension is invertible");
    let d = Mat::from_fn(n, n, |i, j| if i == j && i < w.cols { F::one() } else { F::zero() });
    full.mul(&d).mul(&p_inv)
}

/// Image of `ρ(σ) − I`.
pub fn image_minus_identity(m: &IMat) -> Mat<BigRational> {
    m.sub_identity().to_mat::<BigRational>().column_basis()
}

/// Exact integer value, if any.
pub fn as_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn wedge_basics() {
        assert_eq!(wedge_matrix(&IMat::identity(7)), IMat::identity(21));
        let mut d = IMat::identity(7);
        d.e[0] = 2;
        assert_eq!(wedge_matrix(&d).trace(), 2 * 6 + 15);
        assert_eq!(pair_position(7, 0, 1), 0);
        assert_eq!(pair_position(7, 5, 6), 20);
        assert_eq!(pair_position(7, 1, 2), 6);
    }

    #[test]
    fn skew_ranks() {
        let mut w = vec![rat(0); 21];
        w[pair_position(7, 0, 1)] = rat(1);
        assert_eq!(vector_rank(&w), 1);
        w[pair_position(7, 2, 3)] = rat(1);
        assert_eq!(vector_rank(&w), 2);
        let a = skew_of(&w);
        assert_eq!(*a.get(1, 0), rat(-1));
    }

    #[test]
    fn pfaffian_counts_and_coordinate_vector() {
        let id: Mat<BigRational> = Mat::identity(21);
        let a = symbolic_skew(&id);
        assert_eq!(principal_pfaffians(&a, 6, 21).len(), 7);
        assert_eq!(principal_pfaffians(&a, 4, 21).len(), 35);
        // e₁∧e₂ is decomposable: all 4×4 sub-Pfaffians vanish there
        let mut x = vec![rat(0); 21];
        x[0] = rat(1);
        assert!(principal_pfaffians(&a, 4, 21).iter().all(|p| Zero::is_zero(&p.eval(&x))));
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let w: Vec<BigRational> = (0..15).map(|i| rat((i * 7 % 11) - 5)).collect();
        let a = skew_of(&w);
        let idx: Vec<usize> = (0..6).collect();
        let pf = pfaffian(&a, &idx);
        assert_eq!(pf.mul(&pf), a.determinant());
    }

    #[test]
    fn projections() {
        let w: Mat<BigRational> = Mat::from_fn(7, 4, |i, j| rat((i == j) as i64));
        let p = produce_projection(&w);
        assert_eq!(p, Mat::from_fn(7, 7, |i, j| rat((i == j && i < 4) as i64)));
        let w2: Mat<BigRational> = Mat::from_fn(7, 3, |i, j| rat(((i + 2 * j) % 5) as i64 - 1));
        let p2 = produce_projection(&w2);
        assert_eq!(p2.mul(&p2), p2);
        assert!(same_span(&p2, &w2));
    }

    #[test]
    fn full_space_intersection_is_k() {
        let k: Mat<BigRational> = reference_kernel();
        let full: Mat<BigRational> = Mat::identity(7);
        assert_eq!(subspace_wedge_intersection(&full, &k).cols, 7);
    }

    #[test]
    fn reference_quadric_data() {
        let q: Mat<BigRational> = reference_quadric();
        assert_eq!(eval_quadric(&q, &seed_point()), <EisScalar as Scalar>::zero());
        assert!(crate::linalg::all_positive(&leading_minors(&q)));
        let poly = quadratic_form_poly(&q);
        assert_eq!(quadric_matrix(&poly), q);
    }
}
