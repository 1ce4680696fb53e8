//! Rewriting ambient words through a chain of subgroups, and the induced
//! conjugation action on the free part of a subgroup abelianization.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{CosetError, SchreierRewriter, Simplified, SubgroupPresentation};
use crate::fpcore::{gen_of, Word};
use crate::zlat::{hnf_with_transform, relation_matrix, smith_form, IntMat};

/// Coordinates on `ℤ^m / relators`, adapted to its Smith form: an element
/// `x` (row vector of exponent sums) has free coordinates `(x·V)[rank..]`.
#[derive(Clone, Debug)]
pub struct AbelianCoordinates {
    pub ngens: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    v: IntMat,
    v_inv: IntMat,
}

impl AbelianCoordinates {
    pub fn new(p: &crate::fpcore::Presentation) -> AbelianCoordinates {
        let m = p.ngens();
        let a = relation_matrix(p);
        let (v, factors) = if a.rows() == 0 {
            (IntMat::identity(m), vec![])
        } else {
            let sf = smith_form(&a);
            (sf.v.clone(), sf.invariant_factors())
        };
        let (h, v_inv) = hnf_with_transform(&v);
        debug_assert_eq!(h, IntMat::identity(m));
        let torsion = factors.iter().filter(|x| *x != &BigInt::from(1)).cloned().collect();
        AbelianCoordinates { ngens: m, rank: factors.len(), torsion, v, v_inv }
    }

    pub fn free_rank(&self) -> usize {
        self.ngens - self.rank
    }

    /// Free-part coordinates of an exponent vector.
    pub fn free_coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        (self.rank..self.ngens)
            .map(|j| x.iter().enumerate().fold(BigInt::zero(), |acc, (i, xi)| acc + xi * self.v.get(i, j)))
            .collect()
    }

    /// An exponent vector representing the `k`-th free basis element.
    pub fn free_basis_preimage(&self, k: usize) -> Vec<BigInt> {
        self.v_inv.row_vec(self.rank + k)
    }
}

/// Rewrites words of a top-level group through nested subgroups:
/// intermediate levels map into the next simplified presentation by word
/// expansions, the last level lands in the abelianization.
#[derive(Clone, Debug)]
pub struct ChainRewriter {
    word_levels: Vec<(SchreierRewriter, Vec<Word>)>,
    last: SchreierRewriter,
    abelian: Vec<Vec<BigInt>>,
}

impl ChainRewriter {
    /// `word_levels[i]` is a Schreier rewriter of level `i` together with the
    /// expansions of its raw generators in the simplified generators that the
    /// next level's table is built on.
    pub fn new(word_levels: Vec<(SchreierRewriter, Vec<Word>)>, last: SchreierRewriter, last_simplified: &Simplified) -> Self {
        let abelian = last_simplified.abelian_expansions();
        assert_eq!(abelian.len(), last.num_generators());
        ChainRewriter { word_levels, last, abelian }
    }

    pub fn target_rank(&self) -> usize {
        self.abelian.first().map_or(0, Vec::len)
    }

    /// Rewrite down to a word over the last level's ambient generators.
    pub fn descend(&self, w: &Word) -> Result<Word, CosetError> {
        let mut w = w.clone();
        for (rw, exp) in &self.word_levels {
            w = rw.rewrite(&w)?.substitute(exp);
        }
        Ok(w)
    }

    /// Image in `ℤ^m`, `m` the generator count of the final simplified presentation.
    pub fn abelianize(&self, w: &Word) -> Result<Vec<BigInt>, CosetError> {
        let w = self.descend(w)?;
        let raw = self.last.rewrite(&w)?;
        let mut v = vec![BigInt::zero(); self.target_rank()];
        for &l in raw.letters() {
            for (a, b) in v.iter_mut().zip(&self.abelian[gen_of(l)]) {
                if l > 0 {
                    *a += b;
                } else {
                    *a -= b;
                }
            }
        }
        Ok(v)
    }
}

/// Matrix of `x ↦ t⁻¹xt` on the free part of the abelianization of `sub`,
/// acting on row vectors; `J(t₁t₂) = J(t₁)·J(t₂)`.
pub fn induced_abelian_action(
    sub: &SubgroupPresentation,
    chain: &ChainRewriter,
    coords: &AbelianCoordinates,
    t: &Word,
) -> Result<IntMat, CosetError> {
    let labels = sub.pres.labels();
    let mut images = Vec::with_capacity(sub.pres.ngens());
    for (i, gw) in sub.gen_words.iter().enumerate() {
        let conj = gw.conjugate_by(t);
        let v = chain.abelianize(&conj).map_err(|_| CosetError::NotNormalizing {
            gen: labels[i].clone(),
            word: format!("{:?}", t.letters()),
        })?;
        images.push(coords.free_coords(&v));
    }
    let r = coords.free_rank();
    let mut j = IntMat::zeros(r, r);
    for k in 0..r {
        let pre = coords.free_basis_preimage(k);
        for col in 0..r {
            let s = pre.iter().zip(&images).fold(BigInt::zero(), |acc, (p, img)| acc + p * &img[col]);
            j.set(k, col, s);
        }
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosetrw::{rewrite_kernel_presentation, tietze_simplify, CosetTable, TietzeOptions};
    use crate::fpcore::parse_presentation;

    /// ℤ² = ⟨a, b | [a,b]⟩ with the index-2 subgroup ⟨a, b²⟩; conjugation by
    /// anything is trivial on an abelian group.
    #[test]
    fn abelian_ambient_gives_identity() {
        let p = parse_presentation("<a, b | [a,b]>").unwrap();
        let t = CosetTable::from_actions(&[vec![0, 1], vec![1, 0]], "<a,b^2>");
        let sub = rewrite_kernel_presentation(&t, &p, "H");
        let simp = tietze_simplify(&sub, &TietzeOptions::default());
        let chain = ChainRewriter::new(vec![], SchreierRewriter::new(&t), &simp);
        let coords = AbelianCoordinates::new(&simp.result.pres);
        assert_eq!(coords.free_rank(), 2);
        for tw in ["b", "a", "a*b^3"] {
            let j = induced_abelian_action(&simp.result, &chain, &coords, &p.word(tw).unwrap()).unwrap();
            assert_eq!(j, IntMat::identity(2));
        }
    }

    /// Free group F(a,b), subgroup ⟨a, b², b a b⁻¹⟩ of index 2: conjugation by
    /// b swaps a and bab⁻¹ and fixes b², so J has order 2 and trace 1.
    #[test]
    fn swap_action_on_free_subgroup() {
        let p = parse_presentation("<a, b | >").unwrap();
        let t = CosetTable::from_actions(&[vec![0, 1], vec![1, 0]], "index 2");
        let sub = rewrite_kernel_presentation(&t, &p, "H");
        let simp = tietze_simplify(&sub, &TietzeOptions::default());
        let chain = ChainRewriter::new(vec![], SchreierRewriter::new(&t), &simp);
        let coords = AbelianCoordinates::new(&simp.result.pres);
        assert_eq!(coords.free_rank(), 3);
        let b = p.word("b").unwrap();
        let j = induced_abelian_action(&simp.result, &chain, &coords, &b).unwrap();
        assert_eq!(j.mul(&j), IntMat::identity(3));
        let tr: BigInt = (0..3).map(|i| j.get(i, i).clone()).sum();
        assert_eq!(tr, BigInt::from(1));
        // inner (b² lies in the subgroup) acts trivially
        let j2 = induced_abelian_action(&simp.result, &chain, &coords, &b.pow(2)).unwrap();
        assert_eq!(j2, IntMat::identity(3));
    }

    #[test]
    fn non_normalizing_element_is_reported() {
        // ⟨a⟩ in F(a,b) is not normal: S3-style table of index 3 for a non-normal subgroup
        let p = parse_presentation("<x, y | x^2, y^2, (x*y)^3>").unwrap();
        let t = crate::cosetrw::todd_coxeter(&p, &[p.word("x").unwrap()], 100);
        let crate::cosetrw::EnumerationResult::Complete(t) = t else { panic!() };
        let sub = rewrite_kernel_presentation(&t, &p, "H");
        let simp = tietze_simplify(&sub, &TietzeOptions::default());
        let chain = ChainRewriter::new(vec![], SchreierRewriter::new(&t), &simp);
        let coords = AbelianCoordinates::new(&simp.result.pres);
        let err = induced_abelian_action(&simp.result, &chain, &coords, &p.word("y").unwrap());
        assert!(matches!(err, Err(CosetError::NotNormalizing { .. })));
    }
}
