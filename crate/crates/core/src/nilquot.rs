//! Class-2 nilpotent quotients: words in the free class-2 nilpotent group
//! `F/γ₃F` and the invariants of `γ₂/γ₃` of a finitely presented group.

use num_bigint::BigInt;
use thiserror::Error;

use crate::cosetrw::{tietze_simplify, SubgroupPresentation, TietzeOptions};
use crate::fpcore::{gen_of, Presentation, Word};
use crate::zlat::{abelian_invariants, sparse_invariants, AbelianInvariants, IntMat, SparseRow};

/// Largest `∧²ℤⁿ` handled.
pub const WEDGE_DIM_CAP: usize = 5000;

#[derive(Debug, Error)]
pub enum NilError {
    #[error("{n} generators give a wedge dimension of {dim}, above the cap {cap}; simplify the presentation first")]
    TooLarge { n: usize, dim: usize, cap: usize },
    #[error("quotient still has {remaining} generators after simplification: not cyclic, use todd_coxeter")]
    NotCyclic { remaining: usize },
    #[error("class-2 coordinate overflow")]
    Overflow,
}

pub fn wedge_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Coordinate of `eᵢ∧eⱼ`, `i < j`, in lexicographic order of pairs.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// `a ∧ a′ = Σ_{i<j} (aᵢa′ⱼ − aⱼa′ᵢ) eᵢ∧eⱼ`.
pub fn wedge(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0; wedge_dim(n)];
    for i in 0..n {
        for j in i + 1..n {
            out[pair_index(n, i, j)] = a[i] * b[j] - a[j] * b[i];
        }
    }
    out
}

/// Element of `F/γ₃F` in normal form `x₁^{a₁}…xₙ^{aₙ} · Π_{i<j} [xᵢ,xⱼ]^{b_ij}`.
///
/// Product: `(a,b)(a′,b′) = (a+a′, b+b′ − Σ_{i<j} aⱼa′ᵢ eᵢ∧eⱼ)`, so that
/// `[x₁,x₂] = x₁⁻¹x₂⁻¹x₁x₂ ↦ (0, e₁∧e₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class2Elem {
    pub lin: Vec<i64>,
    pub wed: Vec<i64>,
}

fn add(x: i64, y: i64) -> i64 {
    x.checked_add(y).expect("class-2 coordinate overflow")
}

fn mul(x: i64, y: i64) -> i64 {
    x.checked_mul(y).expect("class-2 coordinate overflow")
}

impl Class2Elem {
    pub fn identity(n: usize) -> Self {
        Class2Elem { lin: vec![0; n], wed: vec![0; wedge_dim(n)] }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = Self::identity(n);
        e.lin[i] = 1;
        e
    }

    pub fn n(&self) -> usize {
        self.lin.len()
    }

    /// The cross term `−Σ_{i<j} aⱼa′ᵢ eᵢ∧eⱼ`.
    fn cross(a: &[i64], b: &[i64], out: &mut [i64]) {
        let n = a.len();
        for i in 0..n {
            if b[i] == 0 {
                continue;
            }
            for j in i + 1..n {
                if a[j] != 0 {
                    let k = pair_index(n, i, j);
                    out[k] = add(out[k], -mul(a[j], b[i]));
                }
            }
        }
    }

    pub fn mul(&self, o: &Class2Elem) -> Class2Elem {
        let lin: Vec<i64> = self.lin.iter().zip(&o.lin).map(|(&x, &y)| add(x, y)).collect();
        let mut wed: Vec<i64> = self.wed.iter().zip(&o.wed).map(|(&x, &y)| add(x, y)).collect();
        Self::cross(&self.lin, &o.lin, &mut wed);
        Class2Elem { lin, wed }
    }

    pub fn inverse(&self) -> Class2Elem {
        // (a,b)⁻¹ = (−a, −b + B(a,a)) with B the cross term
        let lin: Vec<i64> = self.lin.iter().map(|&x| -x).collect();
        let mut wed: Vec<i64> = self.wed.iter().map(|&x| -x).collect();
        let mut bb = vec![0; wed.len()];
        Self::cross(&self.lin, &self.lin, &mut bb);
        for (w, x) in wed.iter_mut().zip(bb) {
            *w = add(*w, x);
        }
        Class2Elem { lin, wed }
    }

    /// `(a,b)^q = (qa, qb + C(q,2)·B(a,a))`, for any integer `q`.
    pub fn pow(&self, q: i64) -> Class2Elem {
        let lin: Vec<i64> = self.lin.iter().map(|&x| mul(q, x)).collect();
        let mut bb = vec![0; self.wed.len()];
        Self::cross(&self.lin, &self.lin, &mut bb);
        let c = mul(q, q - 1) / 2;
        let wed = self.wed.iter().zip(bb).map(|(&w, x)| add(mul(q, w), mul(c, x))).collect();
        Class2Elem { lin, wed }
    }

    pub fn is_central(&self) -> bool {
        self.lin.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_central() && self.wed.iter().all(|&x| x == 0)
    }
}

/// Image of a word on generators `0..n` in `F/γ₃F`, one letter at a time.
pub fn eval_class2(w: &Word, n: usize) -> Class2Elem {
    let mut e = Class2Elem::identity(n);
    for &l in w.letters() {
        let i = gen_of(l);
        assert!(i < n, "word uses generator {i} outside 0..{n}");
        // right multiplication by x_i^{±1}: the cross term is ∓Σ_{j>i} a_j e_i∧e_j
        let s = l.signum() as i64;
        for j in i + 1..n {
            let a = e.lin[j];
            if a != 0 {
                let k = pair_index(n, i, j);
                e.wed[k] = add(e.wed[k], -s * a);
            }
        }
        e.lin[i] += s;
    }
    e
}

/// Images of the relators together with the closure rows `ρₖ∧eⱼ` (taken
/// over an echelon basis of the `ρ` lattice, which spans the same rows).
#[derive(Clone, Debug)]
pub struct RelationLattice {
    pub rho: IntMat,
    pub sigma: IntMat,
    pub closure_rows: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma2Result {
    pub invariants: AbelianInvariants,
    pub ngens: usize,
    /// Central elements produced by the echelon reduction.
    pub central_rows: usize,
}

fn check_cap(n: usize) -> Result<(), NilError> {
    let dim = wedge_dim(n);
    if dim > WEDGE_DIM_CAP {
        return Err(NilError::TooLarge { n, dim, cap: WEDGE_DIM_CAP });
    }
    Ok(())
}

pub fn relation_lattice(p: &Presentation) -> Result<RelationLattice, NilError> {
    let n = p.ngens();
    check_cap(n)?;
    let elems: Vec<Class2Elem> = {
        use rayon::prelude::*;
        p.relators.par_iter().map(|r| eval_class2(r, n)).collect()
    };
    let rho = IntMat::from_rows(&elems.iter().map(|e| e.lin.clone()).collect::<Vec<_>>());
    let sigma = IntMat::from_rows(&elems.iter().map(|e| e.wed.clone()).collect::<Vec<_>>());
    let (pivots, _) = echelon(elems, n);
    let closure_rows = closure(&pivots, n);
    Ok(RelationLattice { rho, sigma, closure_rows })
}

/// Unimodular row reduction of the linear parts, performed by group
/// multiplication so that the generated subgroup is unchanged. Returns the
/// pivot elements (independent linear parts) and the central remainder.
fn echelon(mut elems: Vec<Class2Elem>, n: usize) -> (Vec<Class2Elem>, Vec<Class2Elem>) {
    elems.retain(|e| !e.is_identity());
    let mut pivots = Vec::new();
    for c in 0..n {
        loop {
            let live: Vec<usize> = (0..elems.len()).filter(|&i| elems[i].lin[c] != 0).collect();
            if live.is_empty() {
                break;
            }
            let p = *live.iter().min_by_key(|&&i| (elems[i].lin[c].abs(), i)).unwrap();
            if live.len() == 1 {
                pivots.push(elems.swap_remove(p));
                break;
            }
            let pv = elems[p].lin[c];
            let piv = elems[p].clone();
            let mut cache: Vec<(i64, Class2Elem)> = Vec::new();
            for &i in &live {
                if i == p {
                    continue;
                }
                let q = elems[i].lin[c].div_euclid(pv);
                if q == 0 {
                    continue;
                }
                let f = match cache.iter().find(|(k, _)| *k == q) {
                    Some((_, f)) => f.clone(),
                    None => {
                        let f = piv.pow(-q);
                        cache.push((q, f.clone()));
                        f
                    }
                };
                elems[i] = elems[i].mul(&f);
            }
            elems.retain(|e| !e.is_identity());
        }
    }
    (pivots, elems)
}

fn closure(pivots: &[Class2Elem], n: usize) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for p in pivots {
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let w = wedge(&p.lin, &e);
            if w.iter().any(|&x| x != 0) {
                rows.push(w);
            }
        }
    }
    rows
}

fn sparse(row: &[i64]) -> SparseRow {
    row.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i as u32, BigInt::from(v))).collect()
}

/// Invariants of `γ₂G/γ₃G` for `G = ⟨X | R⟩`: the image of the normal
/// closure of `R` in `F/γ₃F`, intersected with `γ₂F/γ₃F = ∧²ℤⁿ`, is spanned
/// by the central elements left after echelon reduction of the relator
/// images plus the closure rows; the answer is the quotient of `∧²ℤⁿ` by it.
pub fn gamma2_over_gamma3(p: &Presentation) -> Result<Gamma2Result, NilError> {
    let n = p.ngens();
    check_cap(n)?;
    let elems: Vec<Class2Elem> = {
        use rayon::prelude::*;
        p.relators.par_iter().map(|r| eval_class2(r, n)).collect()
    };
    let (pivots, central) = echelon(elems, n);
    let mut rows: Vec<SparseRow> = central.iter().map(|e| sparse(&e.wed)).collect();
    rows.extend(closure(&pivots, n).iter().map(|r| sparse(r)));
    rows.retain(|r| !r.is_empty());
    rows.sort();
    rows.dedup();
    let invariants = sparse_invariants(wedge_dim(n), rows);
    let h1 = abelian_invariants(p);
    // γ₂/γ₃ is a quotient of ∧²(G^ab)
    assert!(invariants.free_rank <= wedge_dim(h1.free_rank));
    Ok(Gamma2Result { invariants, ngens: n, central_rows: central.len() })
}

/// Whether `⟨X | R, killed⟩` has trivial abelianization, provided it
/// simplifies to at most one generator (so that it is cyclic).
pub fn cyclic_quotient_trivial(p: &Presentation, killed: &[Word]) -> Result<bool, NilError> {
    let q = p.add_relators(&format!("{}/killed", p.name), killed.iter().cloned());
    let sub = SubgroupPresentation { gen_words: (0..q.ngens()).map(Word::gen).collect(), ambient: q.name.clone(), pres: q };
    let opts = TietzeOptions { target_gens: 1, check_invariants: false, ..TietzeOptions::default() };
    let s = tietze_simplify(&sub, &opts);
    let remaining = s.result.pres.ngens();
    if remaining > 1 {
        return Err(NilError::NotCyclic { remaining });
    }
    Ok(abelian_invariants(&s.result.pres).is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::parse_presentation;

    #[test]
    fn commutator_and_square() {
        let p = parse_presentation("<x1, x2 | >").unwrap();
        let c = eval_class2(&p.word("[x1,x2]").unwrap(), 2);
        assert_eq!(c, Class2Elem { lin: vec![0, 0], wed: vec![1] });
        let s = eval_class2(&p.word("x1^2").unwrap(), 2);
        assert_eq!(s, Class2Elem { lin: vec![2, 0], wed: vec![0] });
        let ab = eval_class2(&p.word("x1*x2").unwrap(), 2);
        let ba = eval_class2(&p.word("x2*x1").unwrap(), 2);
        assert_eq!(ba, ab.mul(&Class2Elem { lin: vec![0, 0], wed: vec![-1] }));
    }

    #[test]
    fn inverse_and_power_agree_with_products() {
        let p = parse_presentation("<a, b, c | >").unwrap();
        let w = p.word("a*b^-1*c*a*a*b").unwrap();
        let e = eval_class2(&w, 3);
        assert!(e.mul(&e.inverse()).is_identity());
        assert_eq!(e.pow(3), e.mul(&e).mul(&e));
        assert_eq!(e.pow(-2), e.inverse().mul(&e.inverse()));
        assert_eq!(eval_class2(&w.pow(-2), 3), e.pow(-2));
    }

    #[test]
    fn free_and_surface_groups() {
        let f2 = parse_presentation("<a, b | >").unwrap();
        assert_eq!(gamma2_over_gamma3(&f2).unwrap().invariants, AbelianInvariants { torsion: vec![], free_rank: 1 });
        let s2 = parse_presentation("<a1, b1, a2, b2 | [a1,b1]*[a2,b2]>").unwrap();
        assert_eq!(gamma2_over_gamma3(&s2).unwrap().invariants, AbelianInvariants { torsion: vec![], free_rank: 5 });
    }

    #[test]
    fn abelian_and_heisenberg_quotients() {
        // ℤ²: γ₂ trivial
        let z2 = parse_presentation("<a, b | [a,b]>").unwrap();
        assert!(gamma2_over_gamma3(&z2).unwrap().invariants.is_trivial());
        // ⟨a,b | [a,b]^4⟩: γ₂/γ₃ = ℤ/4
        let h = parse_presentation("<a, b | [a,b]^4>").unwrap();
        assert_eq!(gamma2_over_gamma3(&h).unwrap().invariants.torsion, vec![4]);
        // ⟨a,b | a^2⟩: [a,b]^2 = [a^2,b] mod γ₃, so γ₂/γ₃ = ℤ/2
        let t = parse_presentation("<a, b | a^2>").unwrap();
        assert_eq!(gamma2_over_gamma3(&t).unwrap().invariants.torsion, vec![2]);
    }

    #[test]
    fn non_linear_relator_combination() {
        // ⟨x,y,z | zxy⟩ is free on x, y: γ₂/γ₃ = ℤ
        let p = parse_presentation("<x, y, z | z*x*y>").unwrap();
        assert_eq!(gamma2_over_gamma3(&p).unwrap().invariants, AbelianInvariants { torsion: vec![], free_rank: 1 });
    }

    #[test]
    fn cap_is_enforced() {
        let labels: Vec<String> = (0..101).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let p = Presentation::new("big", &refs, vec![]);
        assert!(matches!(gamma2_over_gamma3(&p), Err(NilError::TooLarge { .. })));
    }

    #[test]
    fn cyclic_quotients() {
        let p = parse_presentation("<x, y | y^3, x*y*x^-1*y^-1, x^2*y>").unwrap();
        assert!(!cyclic_quotient_trivial(&p, &[Word::gen(1)]).unwrap());
        assert!(cyclic_quotient_trivial(&p, &[Word::gen(0), Word::gen(1)]).unwrap());
        assert!(cyclic_quotient_trivial(&p, &[p.word("x*y").unwrap()]).unwrap());
        let f = parse_presentation("<x, y, z | >").unwrap();
        assert!(matches!(cyclic_quotient_trivial(&f, &[Word::gen(0)]), Err(NilError::NotCyclic { remaining: 2 })));
    }
}
