//! Integer matrix representations of a finite group, conjugacy classes,
//! exact cyclotomic characters, the Dixon character table, commutants and
//! isotypic projectors.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{sparse_kernel, KernelError, Mat, Scalar};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("group enumeration exceeded {0} elements")]
    TooLarge(usize),
    #[error("generator matrices have inconsistent sizes")]
    Shape,
    #[error("no prime p ≡ 1 mod {exponent} below {cap}")]
    NoPrime { exponent: u64, cap: u64 },
    #[error("class algebra eigenspaces did not split: {0}")]
    NoSplit(String),
    #[error("character is not rational-valued")]
    Irrational,
    #[error("orthogonality fails: {0}")]
    Orthogonality(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Square integer matrix, hashable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IMat {
    pub n: usize,
    pub e: Vec<i64>,
}

impl IMat {
    pub fn identity(n: usize) -> IMat {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        IMat { n, e }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IMat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IMat { n, e: rows.concat() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.n + j]
    }

    pub fn mul(&self, o: &IMat) -> IMat {
        let n = self.n;
        let mut e = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        e[i * n + j] += a * o.e[k * n + j];
                    }
                }
            }
        }
        IMat { n, e }
    }

    pub fn transpose(&self) -> IMat {
        let n = self.n;
        IMat { n, e: (0..n * n).map(|t| self.get(t % n, t / n)).collect() }
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn sub_identity(&self) -> IMat {
        let mut m = self.clone();
        for i in 0..self.n {
            m.e[i * self.n + i] -= 1;
        }
        m
    }

    pub fn to_mat<F: Scalar>(&self) -> Mat<F> {
        Mat::from_fn(self.n, self.n, |i, j| F::from_int(self.get(i, j)))
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &IMat) -> IMat {
        let (n, m) = (self.n, o.n);
        let mut e = vec![0i64; n * n * m * m];
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        e[(i * m + k) * n * m + j * m + l] = a * o.get(k, l);
                    }
                }
            }
        }
        IMat { n: n * m, e }
    }
}

/// A representation given by integer generator matrices.
#[derive(Clone, Debug)]
pub struct MatRep {
    pub name: String,
    pub dim: usize,
    pub gens: Vec<IMat>,
    pub labels: Vec<String>,
}

impl MatRep {
    pub fn new(name: &str, labels: &[&str], gens: Vec<IMat>) -> Result<MatRep, RepError> {
        let dim = gens.first().map_or(0, |g| g.n);
        if gens.iter().any(|g| g.n != dim) || labels.len() != gens.len() {
            return Err(RepError::Shape);
        }
        Ok(MatRep { name: name.to_string(), dim, gens, labels: labels.iter().map(|s| s.to_string()).collect() })
    }

    /// Image under an entrywise-functorial construction (∧², ⊗, …).
    pub fn derive(&self, name: &str, f: impl Fn(&IMat) -> IMat) -> MatRep {
        let gens: Vec<IMat> = self.gens.iter().map(&f).collect();
        MatRep { name: name.to_string(), dim: gens.first().map_or(0, |g| g.n), gens, labels: self.labels.clone() }
    }
}

pub const A_ROWS: [[i64; 7]; 7] = [
    [-1, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0],
    [-1, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 0],
    [0, 1, 1, 0, 0, 0, 0],
    [-1, 0, 0, 1, 0, 0, 0],
];

pub const B_ROWS: [[i64; 7]; 7] = [
    [0, -1, 0, 0, 0, -1, 0],
    [0, 1, 1, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1],
    [0, 0, 0, -1, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 1],
];

/// The 7-dimensional integral representation of U₃(3) generated by A, B.
pub fn rho3() -> MatRep {
    let m = |r: &[[i64; 7]; 7]| IMat::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>());
    MatRep::new("rho3", &["A", "B"], vec![m(&A_ROWS), m(&B_ROWS)]).expect("7x7 generators")
}

/// Fully enumerated matrix group with a word for every element.
#[derive(Clone, Debug)]
pub struct MatGroup {
    pub rep: MatRep,
    pub elements: Vec<IMat>,
    index: HashMap<IMat, usize>,
    /// BFS parent: (element, generator) with `elements[i] = elements[parent]·gen`.
    parent: Vec<Option<(usize, usize)>>,
    pub inverse: Vec<usize>,
}

impl MatGroup {
    pub fn enumerate(rep: &MatRep, cap: usize) -> Result<MatGroup, RepError> {
        let id = IMat::identity(rep.dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut parent = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (g, m) in rep.gens.iter().enumerate() {
                let h = elements[i].mul(m);
                if !index.contains_key(&h) {
                    if elements.len() >= cap {
                        return Err(RepError::TooLarge(cap));
                    }
                    index.insert(h.clone(), elements.len());
                    parent.push(Some((i, g)));
                    queue.push_back(elements.len());
                    elements.push(h);
                }
            }
        }
        // inverses: g⁻¹ = g^(ord−1)
        let mut inverse = vec![usize::MAX; elements.len()];
        for i in 0..elements.len() {
            if inverse[i] != usize::MAX {
                continue;
            }
            let mut prev = 0usize;
            let mut x = elements[i].clone();
            let mut k = index[&x];
            while k != 0 {
                prev = k;
                x = x.mul(&elements[i]);
                k = index[&x];
            }
            inverse[i] = prev;
            inverse[prev] = i;
        }
        Ok(MatGroup { rep: rep.clone(), elements, index, parent, inverse })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &IMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].mul(&self.elements[b])]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Generator word of an element, e.g. `A*B*B`.
    pub fn word(&self, i: usize) -> String {
        let mut letters = Vec::new();
        let mut c = i;
        while let Some((p, g)) = self.parent[c] {
            letters.push(self.rep.labels[g].clone());
            c = p;
        }
        letters.reverse();
        if letters.is_empty() {
            "1".to_string()
        } else {
            letters.join("*")
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjClass {
    pub rep: usize,
    pub size: usize,
    pub order: usize,
    #[serde(skip)]
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ClassData {
    pub classes: Vec<ConjClass>,
    pub class_of: Vec<usize>,
    /// `power_map[k][t]` = class of `g^t` for `g` in class `k`, `0 ≤ t < order`.
    pub power_map: Vec<Vec<usize>>,
    /// Class of inverses.
    pub inverse_class: Vec<usize>,
}

impl ClassData {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// Partition into conjugacy classes; class order follows the least member
/// in enumeration order (so class 0 is the identity).
pub fn conjugacy_classes(g: &MatGroup) -> ClassData {
    let n = g.order();
    let gen_idx: Vec<usize> = g.rep.gens.iter().map(|m| g.index_of(m).unwrap()).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let c = classes.len();
        class_of[start] = c;
        let mut members = vec![start];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for &s in &gen_idx {
                let y = g.mul(g.mul(g.inverse[s], x), s);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        classes.push(ConjClass { rep: start, size: members.len(), order: g.element_order(start), members });
    }
    let power_map = classes
        .iter()
        .map(|cl| {
            let mut out = vec![0usize; cl.order];
            let mut x = 0usize;
            for slot in out.iter_mut() {
                *slot = class_of[x];
                x = g.mul(x, cl.rep);
            }
            out
        })
        .collect();
    let inverse_class = classes.iter().map(|cl| class_of[g.inverse[cl.rep]]).collect();
    ClassData { classes, class_of, power_map, inverse_class }
}

// ---------------------------------------------------------------- cyclotomics

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// The `n`-th cyclotomic polynomial, coefficients in increasing degree.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd] / den[dd];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// `Σ c[k]·ζ_n^k`, ζ_n = exp(2πi/n).
#[derive(Clone, Debug)]
pub struct Cyclo {
    pub n: usize,
    pub c: Vec<i64>,
}

impl Cyclo {
    pub fn int(v: i64) -> Cyclo {
        Cyclo { n: 1, c: vec![v] }
    }

    /// `Σ_l m[l]·ζ_n^l` (eigenvalue multiplicities).
    pub fn from_multiplicities(n: usize, m: Vec<i64>) -> Cyclo {
        assert_eq!(m.len(), n);
        Cyclo { n, c: m }
    }

    pub fn root(n: usize, k: usize) -> Cyclo {
        let mut c = vec![0; n];
        c[k % n] = 1;
        Cyclo { n, c }
    }

    fn lift(&self, m: usize) -> Cyclo {
        debug_assert_eq!(m % self.n, 0);
        let s = m / self.n;
        let mut c = vec![0i64; m];
        for (k, &v) in self.c.iter().enumerate() {
            c[k * s] += v;
        }
        Cyclo { n: m, c }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        let m = lcm(self.n, o.n);
        let (mut a, b) = (self.lift(m), o.lift(m));
        a.c.iter_mut().zip(&b.c).for_each(|(x, y)| *x += y);
        a
    }

    pub fn scale(&self, k: i64) -> Cyclo {
        Cyclo { n: self.n, c: self.c.iter().map(|x| x * k).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        let m = lcm(self.n, o.n);
        let (a, b) = (self.lift(m), o.lift(m));
        let mut c = vec![0i64; m];
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != 0 {
                    c[(i + j) % m] += x * y;
                }
            }
        }
        Cyclo { n: m, c }
    }

    /// Complex conjugate: ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Cyclo {
        let mut c = vec![0i64; self.n];
        for (k, &v) in self.c.iter().enumerate() {
            c[(self.n - k) % self.n] += v;
        }
        Cyclo { n: self.n, c }
    }

    /// Coordinates in the power basis of ℚ(ζ_n) modulo Φ_n.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.n);
        let d = phi.len() - 1;
        let mut r = self.c.clone();
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c != 0 {
                for (j, &p) in phi.iter().enumerate() {
                    r[i - d + j] -= c * p;
                }
            }
        }
        r.truncate(d);
        r
    }

    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        r.iter().skip(1).all(|&x| x == 0).then(|| r.first().copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&x| x == 0)
    }

    /// Multiplication by α^s = ζ₃^s.
    pub fn twist(&self, s: usize) -> Cyclo {
        self.mul(&Cyclo::root(3, s % 3))
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Cyclo) -> bool {
        self.add(&o.scale(-1)).is_zero()
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let terms: Vec<String> =
            self.c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(k, v)| format!("{v}*z{}^{k}", self.n)).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A class function, one value per class.
pub type ClassFunction = Vec<Cyclo>;

/// Character of a representation derived from the enumerated one by `f`.
pub fn character_of(g: &MatGroup, cd: &ClassData, f: impl Fn(&IMat) -> IMat) -> ClassFunction {
    cd.classes.iter().map(|cl| Cyclo::int(f(&g.elements[cl.rep]).trace())).collect()
}

/// `⟨χ, ψ⟩ = |G|⁻¹ Σ_k |C_k| χ_k conj(ψ_k)`, which must be rational.
pub fn inner_product(cd: &ClassData, chi: &[Cyclo], psi: &[Cyclo]) -> Option<BigRational> {
    let order: usize = cd.classes.iter().map(|c| c.size).sum();
    let mut s = Cyclo::int(0);
    for (k, cl) in cd.classes.iter().enumerate() {
        s = s.add(&chi[k].mul(&psi[k].conj()).scale(cl.size as i64));
    }
    s.as_integer().map(|v| BigRational::new(BigInt::from(v), BigInt::from(order)))
}

pub fn product(chi: &[Cyclo], psi: &[Cyclo]) -> ClassFunction {
    chi.iter().zip(psi).map(|(a, b)| a.mul(b)).collect()
}

// ---------------------------------------------------------------- Dixon

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_root(p: u64) -> u64 {
    let fs = prime_factors(p - 1);
    (2..p).find(|&r| fs.iter().all(|&q| powmod(r, (p - 1) / q, p) != 1)).unwrap()
}

/// Kernel of an `r×c` matrix mod `p`, as column vectors.
fn kernel_mod(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = powmod(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                let row_r = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&row_r) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[ri][f]) % p;
            }
            v
        })
        .collect()
}

/// Character table with values as eigenvalue multiplicity vectors.
#[derive(Clone, Debug)]
pub struct CharTable {
    pub prime: u64,
    pub degrees: Vec<i64>,
    /// `values[i][k]` = χ_i on class k.
    pub values: Vec<ClassFunction>,
}

/// Smallest prime `p ≡ 1 (mod e)` with `p > 2√|G|`, below `cap`.
pub fn dixon_prime(exponent: u64, order: u64, cap: u64) -> Result<u64, RepError> {
    let lo = 2.0 * (order as f64).sqrt();
    (1..)
        .map(|k| k * exponent + 1)
        .take_while(|&p| p < cap)
        .find(|&p| p as f64 > lo && is_prime(p))
        .ok_or(RepError::NoPrime { exponent, cap })
}

/// Burnside–Dixon: common eigenvectors of the class matrices over 𝔽_p,
/// lifted to cyclotomic integers through eigenvalue multiplicities.
pub fn dixon_character_table(g: &MatGroup, cd: &ClassData, prime_cap: u64) -> Result<CharTable, RepError> {
    let h = cd.count();
    let order = g.order() as u64;
    let exponent = cd.classes.iter().fold(1usize, |acc, c| lcm(acc, c.order)) as u64;
    let p = dixon_prime(exponent, order, prime_cap)?;
    // a[i][j][k] = #{x ∈ C_i : x⁻¹ z_k ∈ C_j}
    let a: Vec<Vec<Vec<u64>>> = (0..h)
        .into_par_iter()
        .map(|i| {
            let mut m = vec![vec![0u64; h]; h];
            for &x in &cd.classes[i].members {
                let xi = g.inverse[x];
                for (k, cl) in cd.classes.iter().enumerate() {
                    m[cd.class_of[g.mul(xi, cl.rep)]][k] += 1;
                }
            }
            m
        })
        .collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..h).map(|i| (0..h).map(|j| (i == j) as u64).collect()).collect()];
    for ai in &a {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for v in spaces {
            if v.len() == 1 {
                next.push(v);
                continue;
            }
            // (A_i − λ)·V for each λ
            let av: Vec<Vec<u64>> = v.iter().map(|col| (0..h).map(|r| (0..h).map(|k| ai[r][k] * col[k] % p).sum::<u64>() % p).collect()).collect();
            let mut found = 0;
            for lambda in 0..p {
                let rows: Vec<Vec<u64>> =
                    (0..h).map(|r| (0..v.len()).map(|c| (av[c][r] + p * p - lambda * v[c][r]) % p).collect()).collect();
                let ker = kernel_mod(&rows, v.len(), p);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| (0..h).map(|r| (0..v.len()).map(|t| c[t] * v[t][r] % p).sum::<u64>() % p).collect())
                    .collect();
                next.push(sub);
            }
            if found != v.len() {
                return Err(RepError::NoSplit(format!("eigenspaces of dimension {found} in a space of dimension {}", v.len())));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(RepError::NoSplit("common eigenspaces are not one-dimensional".into()));
    }
    let root = primitive_root(p);
    let z_e = powmod(root, (p - 1) / exponent, p);
    let inv = |x: u64| powmod(x, p - 2, p);
    let mut degrees = Vec::new();
    let mut values = Vec::new();
    for s in &spaces {
        let w0 = &s[0];
        let scale = inv(w0[0]);
        let w: Vec<u64> = w0.iter().map(|x| x * scale % p).collect();
        let mut denom = 0u64;
        for k in 0..h {
            denom = (denom + w[k] * w[cd.inverse_class[k]] % p * inv(cd.classes[k].size as u64 % p)) % p;
        }
        let d2 = order % p * inv(denom) % p;
        let d = (1..=(order as f64).sqrt() as u64)
            .find(|&d| d * d % p == d2 && order % d == 0)
            .ok_or_else(|| RepError::NoSplit("degree does not lift".into()))?;
        let chi_mod: Vec<u64> = (0..h).map(|k| w[k] * d % p * inv(cd.classes[k].size as u64 % p) % p).collect();
        let mut row = Vec::with_capacity(h);
        for (k, cl) in cd.classes.iter().enumerate() {
            let n = cl.order as u64;
            let z = powmod(z_e, exponent / n, p);
            let n_inv = inv(n % p);
            let mut mult = Vec::with_capacity(cl.order);
            for l in 0..n {
                let mut acc = 0u64;
                for t in 0..n {
                    let val = chi_mod[cd.power_map[k][t as usize]];
                    acc = (acc + val * powmod(z, (n - (l * t) % n) % n, p)) % p;
                }
                let m = acc * n_inv % p;
                if m > d {
                    return Err(RepError::NoSplit(format!("eigenvalue multiplicity {m} exceeds degree {d}")));
                }
                mult.push(m as i64);
            }
            row.push(Cyclo::from_multiplicities(cl.order, mult));
        }
        degrees.push(d as i64);
        values.push(row);
    }
    let mut idx: Vec<usize> = (0..h).collect();
    let common = values.iter().flatten().fold(168, |acc, v| lcm(acc, v.n));
    idx.sort_by(|&x, &y| {
        degrees[x].cmp(&degrees[y]).then_with(|| canonical_key(&values[x], common).cmp(&canonical_key(&values[y], common)))
    });
    let table = CharTable {
        prime: p,
        degrees: idx.iter().map(|&i| degrees[i]).collect(),
        values: idx.iter().map(|&i| values[i].clone()).collect(),
    };
    verify_orthogonality(cd, &table)?;
    Ok(table)
}

fn canonical_key(chi: &[Cyclo], common: usize) -> Vec<Vec<i64>> {
    // rational characters first, then by reduced coordinates
    let rational = chi.iter().all(|v| v.as_integer().is_some());
    let mut key = vec![vec![!rational as i64]];
    key.extend(chi.iter().map(|v| v.lift(common).reduced()));
    key
}

/// First and second orthogonality relations, exactly.
pub fn verify_orthogonality(cd: &ClassData, t: &CharTable) -> Result<(), RepError> {
    let h = cd.count();
    let order: i64 = cd.classes.iter().map(|c| c.size as i64).sum();
    let rows: Vec<(usize, usize)> = (0..h).flat_map(|i| (i..h).map(move |j| (i, j))).collect();
    let bad_row = rows.par_iter().find_any(|&&(i, j)| {
        let ip = inner_product(cd, &t.values[i], &t.values[j]);
        ip != Some(BigRational::from_integer(BigInt::from((i == j) as i64)))
    });
    if let Some((i, j)) = bad_row {
        return Err(RepError::Orthogonality(format!("rows {i}, {j}")));
    }
    for k in 0..h {
        for l in k..h {
            let mut s = Cyclo::int(0);
            for chi in &t.values {
                s = s.add(&chi[k].mul(&chi[l].conj()));
            }
            let want = if k == l { order / cd.classes[k].size as i64 } else { 0 };
            if s.as_integer() != Some(want) {
                return Err(RepError::Orthogonality(format!("columns {k}, {l}")));
            }
        }
    }
    Ok(())
}

/// Multiplicities of the irreducibles in a class function.
pub fn decompose(cd: &ClassData, t: &CharTable, psi: &[Cyclo]) -> Vec<BigRational> {
    t.values.iter().map(|chi| inner_product(cd, psi, chi).expect("rational inner product")).collect()
}

// ---------------------------------------------------------------- commutants, projectors

/// `dim {X : X·ρ(g) = ρ(g)·X for all generators}`, by an exact sparse kernel.
pub fn commutant_dimension(rep: &MatRep) -> Result<usize, RepError> {
    let n = rep.dim;
    let mut rows = Vec::with_capacity(rep.gens.len() * n * n);
    for r in &rep.gens {
        for i in 0..n {
            for j in 0..n {
                // (XR − RX)_ij = Σ_k X_ik R_kj − Σ_k R_ik X_kj
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for k in 0..n {
                    if r.get(k, j) != 0 {
                        *acc.entry(i * n + k).or_default() += r.get(k, j);
                    }
                    if r.get(i, k) != 0 {
                        *acc.entry(k * n + j).or_default() -= r.get(i, k);
                    }
                }
                let mut row: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
                row.sort_unstable();
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    Ok(sparse_kernel(n * n, &rows)?.len())
}

/// `π = (d/|G|)·Σ_g χ(g⁻¹)·ρ(g)` for a rational-valued χ, with ρ = f∘(enumerated rep).
pub fn isotypic_projector(
    g: &MatGroup,
    cd: &ClassData,
    chi: &[Cyclo],
    degree: i64,
    f: &(dyn Fn(&IMat) -> IMat + Sync),
) -> Result<Mat<BigRational>, RepError> {
    let vals: Vec<i64> = chi.iter().map(|v| v.as_integer().ok_or(RepError::Irrational)).collect::<Result<_, _>>()?;
    let dim = f(&g.elements[0]).n;
    let sum = (0..g.order())
        .into_par_iter()
        .fold(
            || vec![0i64; dim * dim],
            |mut acc, i| {
                let c = vals[cd.class_of[g.inverse[i]]];
                if c != 0 {
                    let m = f(&g.elements[i]);
                    acc.iter_mut().zip(&m.e).for_each(|(a, x)| *a += c * x);
                }
                acc
            },
        )
        .reduce(|| vec![0i64; dim * dim], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let scale = BigRational::new(BigInt::from(degree), BigInt::from(g.order()));
    Ok(Mat::from_fn(dim, dim, |i, j| BigRational::from_integer(BigInt::from(sum[i * dim + j])) * &scale))
}

/// Rank over ℚ of the span of `{ρ(g)}` inside `M_n(ℚ)`.
pub fn algebra_span_rank(g: &MatGroup, f: &dyn Fn(&IMat) -> IMat) -> usize {
    let dim = f(&g.elements[0]).n;
    let full = dim * dim;
    // incremental echelon basis over ℚ, stopping once the span is everything
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for m in &g.elements {
        let mut v: Vec<BigRational> = f(m).e.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        for (c, b) in &basis {
            if !Zero::is_zero(&v[*c]) {
                let k = v[*c].clone();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= &k * y);
            }
        }
        if let Some(c) = v.iter().position(|x| !Zero::is_zero(x)) {
            let k = v[c].clone();
            v.iter_mut().for_each(|x| *x /= &k);
            for (_, b) in basis.iter_mut() {
                if !Zero::is_zero(&b[c]) {
                    let t = b[c].clone();
                    b.iter_mut().zip(&v).for_each(|(x, y)| *x -= &t * y);
                }
            }
            basis.push((c, v));
            if basis.len() == full {
                break;
            }
        }
    }
    basis.len()
}

/// Labels χ₁…χ₁₄ in degree order: χ₃ is the given rational 7-dimensional
/// character, χ₄/χ₅ the other two of degree 7, χ₇ the degree-21
/// constituent of χ₄χ₅. Returns a permutation of table rows.
pub fn label_characters(cd: &ClassData, t: &CharTable, chi3: &[Cyclo]) -> Option<Vec<usize>> {
    let by_degree = |d: i64| -> Vec<usize> { (0..t.degrees.len()).filter(|&i| t.degrees[i] == d).collect() };
    let i3 = (0..t.values.len()).find(|&i| t.values[i].iter().zip(chi3).all(|(a, b)| a == b))?;
    let sevens: Vec<usize> = by_degree(7).into_iter().filter(|&i| i != i3).collect();
    if sevens.len() != 2 {
        return None;
    }
    let prod = product(&t.values[sevens[0]], &t.values[sevens[1]]);
    let twentyones = by_degree(21);
    let i7 = twentyones.iter().copied().find(|&i| inner_product(cd, &prod, &t.values[i]).is_some_and(|m| !Zero::is_zero(&m)));
    let mut order = Vec::new();
    for i in 0..t.values.len() {
        if order.contains(&i) {
            continue;
        }
        match t.degrees[i] {
            7 => {
                order.push(i3);
                order.extend(&sevens);
            }
            21 => {
                let first = i7.unwrap_or(twentyones[0]);
                order.push(first);
                order.extend(twentyones.iter().filter(|&&x| x != first));
            }
            _ => order.push(i),
        }
    }
    Some(order)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharTableJson {
    pub prime: u64,
    pub classes: Vec<ClassJson>,
    pub characters: Vec<CharJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassJson {
    pub representative: String,
    pub order: usize,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharJson {
    pub label: String,
    pub degree: i64,
    /// `(root_of_unity_order, coefficients)` per class.
    pub values: Vec<(usize, Vec<i64>)>,
}

pub fn table_json(g: &MatGroup, cd: &ClassData, t: &CharTable, order: &[usize]) -> CharTableJson {
    CharTableJson {
        prime: t.prime,
        classes: cd.classes.iter().map(|c| ClassJson { representative: g.word(c.rep), order: c.order, size: c.size }).collect(),
        characters: order
            .iter()
            .enumerate()
            .map(|(pos, &i)| CharJson {
                label: format!("chi{}", pos + 1),
                degree: t.degrees[i],
                values: t.values[i].iter().map(|v| (v.n, v.c.clone())).collect(),
            })
            .collect(),
    }
}

/// Integer value of a rational-valued character at a class.
pub fn int_value(v: &Cyclo) -> Option<i64> {
    v.as_integer()
}

pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_matrix(p: &[usize]) -> IMat {
        let n = p.len();
        let mut e = vec![0; n * n];
        for (i, &j) in p.iter().enumerate() {
            e[j * n + i] = 1;
        }
        IMat { n, e }
    }

    fn s3() -> MatRep {
        MatRep::new("S3", &["s", "t"], vec![perm_matrix(&[1, 0, 2]), perm_matrix(&[1, 2, 0])]).unwrap()
    }

    #[test]
    fn s3_classes_and_table() {
        let g = MatGroup::enumerate(&s3(), 100).unwrap();
        assert_eq!(g.order(), 6);
        let cd = conjugacy_classes(&g);
        let mut sizes: Vec<usize> = cd.classes.iter().map(|c| c.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let t = dixon_character_table(&g, &cd, 10_000).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2]);
        // permutation character = trivial + standard
        let perm = character_of(&g, &cd, |m| m.clone());
        let mult = decompose(&cd, &t, &perm);
        assert_eq!(mult.iter().filter(|m| !Zero::is_zero(*m)).count(), 2);
    }

    #[test]
    fn trivial_group() {
        let rep = MatRep::new("1", &["e"], vec![IMat::identity(1)]).unwrap();
        let g = MatGroup::enumerate(&rep, 10).unwrap();
        let cd = conjugacy_classes(&g);
        assert_eq!(cd.count(), 1);
        assert_eq!(algebra_span_rank(&g, &|m| m.clone()), 1);
    }

    #[test]
    fn cyclic_group_table_has_roots_of_unity() {
        // ℤ/4 via a 2×2 rotation
        let rep = MatRep::new("C4", &["r"], vec![IMat::from_rows(&[vec![0, -1], vec![1, 0]])]).unwrap();
        let g = MatGroup::enumerate(&rep, 10).unwrap();
        let cd = conjugacy_classes(&g);
        let t = dixon_character_table(&g, &cd, 10_000).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1]);
        let irrational = t.values.iter().filter(|r| r.iter().any(|v| v.as_integer().is_none())).count();
        assert_eq!(irrational, 2);
        // the rotation's character is i + (−i) = 0
        let chi = character_of(&g, &cd, |m| m.clone());
        assert_eq!(decompose(&cd, &t, &chi).iter().filter(|m| !Zero::is_zero(*m)).count(), 2);
    }

    #[test]
    fn regular_rep_of_z2_spans_two() {
        let rep = MatRep::new("reg", &["s"], vec![perm_matrix(&[1, 0])]).unwrap();
        let g = MatGroup::enumerate(&rep, 10).unwrap();
        assert_eq!(algebra_span_rank(&g, &|m| m.clone()), 2);
        assert_eq!(commutant_dimension(&rep).unwrap(), 2);
    }

    #[test]
    fn cyclotomic_identities() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(168).len() - 1, 48);
        // 1 + ζ₃ + ζ₃² = 0
        let s = Cyclo::root(3, 0).add(&Cyclo::root(3, 1)).add(&Cyclo::root(3, 2));
        assert!(s.is_zero());
        // ζ₄ · conj(ζ₄) = 1
        assert_eq!(Cyclo::root(4, 1).mul(&Cyclo::root(4, 1).conj()).as_integer(), Some(1));
        assert_eq!(Cyclo::int(2).twist(3), Cyclo::int(2));
    }

    #[test]
    fn s3_projectors() {
        let g = MatGroup::enumerate(&s3(), 100).unwrap();
        let cd = conjugacy_classes(&g);
        let t = dixon_character_table(&g, &cd, 10_000).unwrap();
        let f = |m: &IMat| m.clone();
        let mut total = 0;
        for (chi, &d) in t.values.iter().zip(&t.degrees) {
            let p = isotypic_projector(&g, &cd, chi, d, &f).unwrap();
            assert_eq!(p.mul(&p), p);
            total += p.rank();
        }
        assert_eq!(total, 3);
        assert_eq!(commutant_dimension(&s3()).unwrap(), 2);
    }
}
