//! Sparse multivariate polynomials over an exact field, Buchberger's
//! algorithm, normal forms, radical membership and exact division.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
}

pub type Monomial = Vec<u16>;

impl MonomialOrder {
    pub fn cmp(self, a: &[u16], b: &[u16]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let (da, db) = (degree(a), degree(b));
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

fn degree(m: &[u16]) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_mul(a: &[u16], b: &[u16]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mono_div(a: &[u16], b: &[u16]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_lcm(a: &[u16], b: &[u16]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Polynomial with terms sorted by decreasing monomial under `order`.
#[derive(Clone, Debug)]
pub struct Poly<F> {
    pub nvars: usize,
    pub order: MonomialOrder,
    terms: Vec<(Monomial, F)>,
}

impl<F: Scalar> PartialEq for Poly<F> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms.len() == o.terms.len() && self.terms.iter().zip(&o.terms).all(|(a, b)| a == b)
    }
}

impl<F: Scalar> Poly<F> {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Poly { nvars, order, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: F) -> Self {
        Self::from_terms(nvars, order, vec![(vec![0; nvars], c)])
    }

    pub fn var(nvars: usize, order: MonomialOrder, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_terms(nvars, order, vec![(m, F::one())])
    }

    /// Collects like terms and drops zeros.
    pub fn from_terms(nvars: usize, order: MonomialOrder, terms: Vec<(Monomial, F)>) -> Self {
        let mut acc: HashMap<Monomial, F> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            let e = acc.entry(m).or_insert_with(F::zero);
            *e = e.add(&c);
        }
        let mut terms: Vec<(Monomial, F)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { nvars, order, terms }
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| degree(m) == 0)
    }

    pub fn leading(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| degree(m)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.iter().all(|(m, _)| degree(m) == d)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        Self::from_terms(self.nvars, order, self.terms.clone())
    }

    /// Embeds into a ring with `extra` additional trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.iter().copied().chain(std::iter::repeat(0).take(extra)).collect(), c.clone())).collect();
        Self::from_terms(self.nvars + extra, self.order, terms)
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Poly { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect() }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.axpy(&F::one(), &vec![0; self.nvars], o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.axpy(&F::one().neg(), &vec![0; self.nvars], o)
    }

    /// `self + k·x^m·o`, by a sorted merge.
    pub fn axpy(&self, k: &F, m: &[u16], o: &Self) -> Self {
        debug_assert_eq!(self.order, o.order);
        let ord = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |j: usize| (mono_mul(&o.terms[j].0, m), o.terms[j].1.mul(k));
        let mut next_o = if o.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < self.terms.len() || next_o.is_some() {
            match (self.terms.get(i), &next_o) {
                (Some(a), Some(b)) => match ord.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(next_o.take().unwrap());
                        j += 1;
                        next_o = (j < o.terms.len()).then(|| shifted(j));
                    }
                    Ordering::Equal => {
                        let c = a.1.add(&b.1);
                        if !c.is_zero() {
                            out.push((a.0.clone(), c));
                        }
                        i += 1;
                        j += 1;
                        next_o = (j < o.terms.len()).then(|| shifted(j));
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(next_o.take().unwrap());
                    j += 1;
                    next_o = (j < o.terms.len()).then(|| shifted(j));
                }
                (None, None) => unreachable!(),
            }
        }
        Poly { nvars: self.nvars, order: ord, terms: out }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Monomial, F> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = acc.entry(mono_mul(ma, mb)).or_insert_with(F::zero);
                *e = e.add(&ca.mul(cb));
            }
        }
        Self::from_terms(self.nvars, self.order, acc.into_iter().collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.nvars, self.order, F::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &[F]) -> F {
        let mut s = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                for _ in 0..e {
                    t = t.mul(xi);
                }
            }
            s = s.add(&t);
        }
        s
    }

    /// Replaces each coefficient through `f` (e.g. ℚ → 𝔽_p).
    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.nvars, self.order, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &[u16]) -> F {
        self.terms.iter().find(|(x, _)| x.as_slice() == m).map_or_else(F::zero, |(_, c)| c.clone())
    }

    /// Canonical text `c*a1^2*a3 + ...` with variables named `{prefix}{i+1}`.
    pub fn to_text(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{e}", i + 1) })
                    .collect();
                let cs = c.to_string();
                let cs = if cs[1..].contains(['+', '-']) { format!("({cs})") } else { cs };
                if vars.is_empty() {
                    cs
                } else {
                    format!("{cs}*{}", vars.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("a"))
    }
}

/// Parses the canonical text form over ℚ; `prefix` names the variables.
pub fn parse_poly(s: &str, nvars: usize, order: MonomialOrder, prefix: &str) -> Option<Poly<BigRational>> {
    let s = s.trim();
    if s == "0" {
        return Some(Poly::zero(nvars, order));
    }
    let mut terms = Vec::new();
    for part in s.split(" + ") {
        let mut c = <BigRational as One>::one();
        let mut m = vec![0u16; nvars];
        for factor in part.split('*') {
            if let Some(v) = factor.strip_prefix(prefix) {
                let (idx, e) = match v.split_once('^') {
                    Some((i, e)) => (i.parse::<usize>().ok()?, e.parse::<u16>().ok()?),
                    None => (v.parse::<usize>().ok()?, 1),
                };
                if idx == 0 || idx > nvars {
                    return None;
                }
                m[idx - 1] += e;
            } else {
                c *= factor.parse::<BigRational>().ok()?;
            }
        }
        terms.push((m, c));
    }
    Some(Poly::from_terms(nvars, order, terms))
}

/// Integral, content-free multiple with positive leading coefficient.
pub fn primitive_integral(p: &Poly<BigRational>) -> Poly<BigRational> {
    if p.is_zero() {
        return p.clone();
    }
    let den = p.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let nums: Vec<BigInt> = p.terms.iter().map(|(_, c)| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if nums[0].is_negative() { -BigInt::one() } else { BigInt::one() };
    p.scale(&BigRational::new(den * sign, g))
}

// ---------------------------------------------------------------- prime fields

/// Element of 𝔽_P.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(x: i64) -> Self {
        Fp(x.rem_euclid(P as i64) as u64)
    }

    fn pow(self, mut e: u64) -> Self {
        let (mut b, mut r) = (self.0 as u128, 1u128);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P as u128;
            }
            b = b * b % P as u128;
            e >>= 1;
        }
        Fp(r as u64)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_int(n: i64) -> Self {
        Fp::new(n)
    }
    fn from_rational(q: &BigRational) -> Self {
        let p = BigInt::from(P);
        let n = (q.numer() % &p + &p) % &p;
        let d = (q.denom() % &p + &p) % &p;
        Fp(n.to_u64().unwrap()).mul(&Fp(d.to_u64().unwrap()).inv())
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp((self.0 as u128 * o.0 as u128 % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F_p");
        self.pow(P - 2)
    }
}

// ---------------------------------------------------------------- Gröbner bases

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("Gröbner effort cap of {0} pairs exceeded")]
    EffortCap(usize),
    #[error("generators live in different rings")]
    Mismatch,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis<F> {
    pub order: MonomialOrder,
    pub nvars: usize,
    /// Reduced, monic, sorted by increasing leading monomial.
    pub gens: Vec<Poly<F>>,
    pub pairs_processed: usize,
}

/// Division of `f` by a list; returns quotients and the remainder.
pub fn divide<F: Scalar>(f: &Poly<F>, gens: &[Poly<F>]) -> (Vec<Poly<F>>, Poly<F>) {
    let (nv, ord) = (f.nvars, f.order);
    let mut q: Vec<Poly<F>> = gens.iter().map(|_| Poly::zero(nv, ord)).collect();
    let mut p = f.clone();
    let mut rem = Vec::new();
    'outer: while let Some((m, c)) = p.leading().cloned() {
        for (i, g) in gens.iter().enumerate() {
            let (gm, gc) = g.leading().expect("nonzero divisor");
            if divides(gm, &m) {
                let t = mono_div(&m, gm);
                let k = c.div(gc);
                q[i] = q[i].axpy(&k, &t, &Poly::constant(nv, ord, F::one()));
                p = p.axpy(&k.neg(), &t, g);
                continue 'outer;
            }
        }
        rem.push((m, c));
        p.terms.remove(0);
    }
    let r = Poly { nvars: nv, order: ord, terms: rem };
    if cfg!(debug_assertions) {
        let mut back = r.clone();
        for (qi, gi) in q.iter().zip(gens) {
            back = back.add(&qi.mul(gi));
        }
        assert!(back == *f, "division identity failed");
    }
    (q, r)
}

/// Full reduction of `f` modulo a list, without tracking quotients.
fn reduce<F: Scalar>(f: &Poly<F>, gens: &[&Poly<F>]) -> Poly<F> {
    let mut p = f.clone();
    let mut rem = Vec::new();
    'outer: while let Some((m, c)) = p.leading().cloned() {
        for g in gens {
            let (gm, gc) = g.leading().unwrap();
            if divides(gm, &m) {
                p = p.axpy(&c.div(gc).neg(), &mono_div(&m, gm), g);
                continue 'outer;
            }
        }
        rem.push((m, c));
        p.terms.remove(0);
    }
    Poly { nvars: f.nvars, order: f.order, terms: rem }
}

fn s_poly<F: Scalar>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = mono_lcm(fm, gm);
    let zero = Poly::zero(f.nvars, f.order);
    zero.axpy(&fc.inv(), &mono_div(&l, fm), f).axpy(&gc.inv().neg(), &mono_div(&l, gm), g)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Reduced Gröbner basis by Buchberger's algorithm with the
/// Gebauer–Möller criteria and the sugar/normal selection strategy.
/// `max_pairs` bounds the number of S-polynomials reduced.
pub fn groebner<F: Scalar>(input: &[Poly<F>], order: MonomialOrder, max_pairs: usize) -> Result<GroebnerBasis<F>, GroebnerError> {
    let nvars = input.first().map_or(0, |p| p.nvars);
    if input.iter().any(|p| p.nvars != nvars) {
        return Err(GroebnerError::Mismatch);
    }
    let mut store: Vec<Poly<F>> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    let mut queue: Vec<Poly<F>> = input.iter().map(|p| p.with_order(order)).filter(|p| !p.is_zero()).collect();
    queue.sort_by(|a, b| order.cmp(&b.leading().unwrap().0, &a.leading().unwrap().0));
    let mut pending: Vec<(Poly<F>, u32)> = queue.into_iter().map(|p| (p.clone(), p.total_degree())).collect();

    loop {
        // insert pending polynomials, reduced against the current basis
        while let Some((p, s)) = pending.pop() {
            let basis: Vec<&Poly<F>> = active.iter().map(|&i| &store[i]).collect();
            let h = reduce(&p, &basis).monic();
            if h.is_zero() {
                continue;
            }
            if h.is_constant() {
                let one = Poly::constant(nvars, order, F::one());
                return Ok(GroebnerBasis { order, nvars, gens: vec![one], pairs_processed: processed });
            }
            let k = store.len();
            store.push(h);
            sugar.push(s);
            update(&store, &sugar, &mut active, &mut pairs, k);
        }
        if pairs.is_empty() {
            break;
        }
        let best = (0..pairs.len())
            .min_by(|&a, &b| pairs[a].sugar.cmp(&pairs[b].sugar).then_with(|| order.cmp(&pairs[a].lcm, &pairs[b].lcm)))
            .unwrap();
        let pr = pairs.swap_remove(best);
        processed += 1;
        if processed > max_pairs {
            return Err(GroebnerError::EffortCap(max_pairs));
        }
        let s = s_poly(&store[pr.i], &store[pr.j]);
        let basis: Vec<&Poly<F>> = active.iter().map(|&i| &store[i]).collect();
        let h = reduce(&s, &basis);
        if !h.is_zero() {
            pending.push((h, pr.sugar));
        }
    }

    // interreduce the minimal basis
    let mut gens: Vec<Poly<F>> = active.iter().map(|&i| store[i].clone()).collect();
    gens.sort_by(|a, b| order.cmp(&a.leading().unwrap().0, &b.leading().unwrap().0));
    let mut reduced = Vec::with_capacity(gens.len());
    for i in 0..gens.len() {
        let others: Vec<&Poly<F>> = gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g).collect();
        reduced.push(reduce_tail(&gens[i], &others).monic());
    }
    Ok(GroebnerBasis { order, nvars, gens: reduced, pairs_processed: processed })
}

fn reduce_tail<F: Scalar>(g: &Poly<F>, others: &[&Poly<F>]) -> Poly<F> {
    let (m, c) = g.leading().unwrap().clone();
    let tail = Poly { nvars: g.nvars, order: g.order, terms: g.terms[1..].to_vec() };
    let r = reduce(&tail, others);
    let mut terms = vec![(m, c)];
    terms.extend(r.terms);
    Poly { nvars: g.nvars, order: g.order, terms }
}

fn update<F: Scalar>(store: &[Poly<F>], sugar: &[u32], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lt = |i: usize| &store[i].leading().unwrap().0;
    let lh = lt(h).clone();
    let new_sugar = |g: usize, l: &Monomial| {
        let sh = sugar[h] + degree(l) - degree(&lh);
        let sg = sugar[g] + degree(l) - degree(lt(g));
        sh.max(sg)
    };
    let cands: Vec<(usize, Monomial)> = active.iter().map(|&g| (g, mono_lcm(&lh, lt(g)))).collect();
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    for (idx, (g, l)) in cands.iter().enumerate() {
        let cop = coprime(&lh, lt(*g));
        let dominated = cands[idx + 1..].iter().chain(kept.iter()).any(|(_, l2)| divides(l2, l));
        if cop || !dominated {
            kept.push((*g, l.clone()));
        }
    }
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|(g, _)| !coprime(&lh, lt(*g)))
        .map(|(g, l)| Pair { i: g, j: h, sugar: new_sugar(g, &l), lcm: l })
        .collect();
    pairs.retain(|p| {
        !(divides(&lh, &p.lcm) && mono_lcm(lt(p.i), &lh) != p.lcm && mono_lcm(lt(p.j), &lh) != p.lcm)
    });
    pairs.extend(new_pairs);
    active.retain(|&g| !divides(&lh, lt(g)));
    active.push(h);
}

impl<F: Scalar> GroebnerBasis<F> {
    pub fn normal_form(&self, f: &Poly<F>) -> Poly<F> {
        let f = if f.order == self.order { f.clone() } else { f.with_order(self.order) };
        divide(&f, &self.gens).1
    }

    pub fn contains(&self, f: &Poly<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant()
    }

    /// Every S-polynomial reduces to zero.
    pub fn verify(&self) -> bool {
        let refs: Vec<&Poly<F>> = self.gens.iter().collect();
        (0..self.gens.len())
            .all(|i| (i + 1..self.gens.len()).all(|j| reduce(&s_poly(&self.gens[i], &self.gens[j]), &refs).is_zero()))
    }

    /// Smallest `k ≤ max_k` with `x_i^k` in the ideal.
    pub fn variable_power_membership(&self, i: usize, max_k: u32) -> Option<u32> {
        let x = Poly::var(self.nvars, self.order, i);
        let mut p = x.clone();
        for k in 1..=max_k {
            if self.contains(&p) {
                return Some(k);
            }
            p = p.mul(&x);
        }
        None
    }
}

/// `f ∈ Rad(I)` iff `1 ∈ I + (1 − t·f)` (Rabinowitsch).
pub fn radical_membership<F: Scalar>(f: &Poly<F>, ideal: &[Poly<F>], max_pairs: usize) -> Result<bool, GroebnerError> {
    let nv = f.nvars;
    let ord = f.order;
    let mut gens: Vec<Poly<F>> = ideal.iter().map(|g| g.extend_vars(1)).collect();
    let t = Poly::var(nv + 1, ord, nv);
    gens.push(Poly::constant(nv + 1, ord, F::one()).sub(&t.mul(&f.extend_vars(1))));
    Ok(groebner(&gens, ord, max_pairs)?.is_unit_ideal())
}

/// `f / g` when `g` divides `f` exactly.
pub fn exact_divide<F: Scalar>(f: &Poly<F>, g: &Poly<F>) -> Option<Poly<F>> {
    assert!(!g.is_zero(), "division by zero polynomial");
    let g = g.with_order(f.order);
    let (q, r) = divide(f, std::slice::from_ref(&g));
    r.is_zero().then(|| q.into_iter().next().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    type P = Poly<BigRational>;

    fn p(s: &str, n: usize, o: MonomialOrder) -> P {
        parse_poly(s, n, o, "x").unwrap()
    }

    #[test]
    fn orders() {
        use MonomialOrder::*;
        assert_eq!(Lex.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        assert_eq!(DegRevLex.cmp(&[1, 0], &[0, 5]), Ordering::Less);
        // x₁x₃ < x₂² in degrevlex
        assert_eq!(DegRevLex.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn trivial_bases() {
        let o = MonomialOrder::DegRevLex;
        let g = groebner(&[p("1*x1", 2, o), p("1*x2", 2, o)], o, 100).unwrap();
        assert_eq!(g.gens.len(), 2);
        assert!(g.contains(&p("1*x1*x2", 2, o)));
        assert_eq!(g.normal_form(&P::constant(2, o, rat(1))), P::constant(2, o, rat(1)));
    }

    #[test]
    fn elimination() {
        let o = MonomialOrder::Lex;
        let g = groebner(&[p("1*x1^2 + -1", 2, o), p("1*x1*x2 + -1", 2, o)], o, 100).unwrap();
        assert!(g.verify());
        assert!(g.gens.contains(&p("1*x2^2 + -1", 2, o)));
    }

    #[test]
    fn unit_ideal_and_cap() {
        let o = MonomialOrder::DegRevLex;
        let g = groebner(&[p("1*x1", 1, o), p("1*x1 + 1", 1, o)], o, 100).unwrap();
        assert!(g.is_unit_ideal());
        let twisted = [p("1*x1^2 + -1*x2", 2, o), p("1*x1*x2 + -1", 2, o)];
        let full = groebner(&twisted, o, 1000).unwrap();
        assert!(full.verify() && full.pairs_processed >= 1);
        assert_eq!(groebner(&twisted, o, 0).unwrap_err(), GroebnerError::EffortCap(0));
    }

    #[test]
    fn radicals() {
        let o = MonomialOrder::DegRevLex;
        assert!(radical_membership(&p("1*x1", 2, o), &[p("1*x1^2", 2, o)], 1000).unwrap());
        assert!(!radical_membership(&p("1*x2", 2, o), &[p("1*x1", 2, o)], 1000).unwrap());
    }

    #[test]
    fn division() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(exact_divide(&p("1*x1^2 + -1*x2^2", 2, o), &p("1*x1 + -1*x2", 2, o)), Some(p("1*x1 + 1*x2", 2, o)));
        assert_eq!(exact_divide(&p("1*x1^2 + 1*x2^2", 2, o), &p("1*x1 + -1*x2", 2, o)), None);
    }

    #[test]
    fn text_round_trip() {
        let o = MonomialOrder::DegRevLex;
        let f = p("3/2*x1^2*x3 + -7*x2 + 5", 3, o);
        assert_eq!(f.to_text("x"), "3/2*x1^2*x3 + -7*x2 + 5");
        assert_eq!(primitive_integral(&f).to_text("x"), "3*x1^2*x3 + -14*x2 + 10");
    }

    #[test]
    fn prime_field() {
        type F = Fp<31>;
        assert_eq!(F::new(3).mul(&F::new(3).inv()), F::one());
        assert_eq!(F::from_rational(&BigRational::new(1.into(), 2.into())), F::new(16));
        let o = MonomialOrder::DegRevLex;
        let f = p("1*x1^2 + 1", 1, o).map(F::from_rational);
        assert!(f.eval(&[F::new(0)]).is_one());
    }
}
