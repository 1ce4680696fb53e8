//! Coset tables, low-index subgroups, Todd–Coxeter enumeration,
//! Reidemeister–Schreier rewriting, Tietze simplification and induced
//! actions on subgroup abelianizations.

mod action;
mod enumerate;
mod lowindex;
mod rewrite;
mod tietze;

pub use action::{induced_abelian_action, AbelianCoordinates, ChainRewriter};
pub use enumerate::{todd_coxeter, EnumerationResult};
pub use lowindex::low_index_subgroups;
pub use rewrite::{rewrite_kernel_presentation, SchreierRewriter, SubgroupPresentation};
pub use tietze::{tietze_simplify, Simplified, TietzeOptions};

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::fpcore::{gen_of, GroupElement, Letter, Presentation, Word};
use crate::permgrp::{group_closure, GElem, GroupMap, DEFAULT_CLOSURE_CAP};

#[derive(Debug, Error)]
pub enum CosetError {
    #[error("coset table text is malformed: {0}")]
    Format(String),
    #[error("element {word} does not normalize the subgroup (generator {gen})")]
    NotNormalizing { gen: String, word: String },
    #[error("word does not lie in the subgroup (ends at coset {0})")]
    NotInSubgroup(usize),
    #[error(transparent)]
    Perm(#[from] crate::permgrp::PermError),
}

const UNDEF: u32 = u32::MAX;

/// Complete right-coset action table. Coset 0 is the subgroup itself.
/// Column `2g` is generator `g`, column `2g+1` its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct CosetTable {
    pub n: usize,
    pub ngens: usize,
    pub subgroup_tag: String,
    data: Vec<u32>,
}

#[inline]
pub(crate) fn col_of(l: Letter) -> usize {
    let g = gen_of(l);
    if l > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

impl CosetTable {
    /// Build from the forward action of each generator (0-based images).
    pub fn from_actions(actions: &[Vec<u32>], tag: &str) -> CosetTable {
        let ngens = actions.len();
        let n = actions.first().map_or(1, Vec::len);
        let mut data = vec![UNDEF; n * 2 * ngens];
        for (g, act) in actions.iter().enumerate() {
            assert_eq!(act.len(), n);
            for (c, &d) in act.iter().enumerate() {
                data[c * 2 * ngens + 2 * g] = d;
                data[d as usize * 2 * ngens + 2 * g + 1] = c as u32;
            }
        }
        assert!(data.iter().all(|&x| x != UNDEF), "generator actions must be permutations");
        CosetTable { n, ngens, subgroup_tag: tag.to_string(), data }
    }

    #[inline]
    pub fn act(&self, coset: usize, gen: usize) -> usize {
        self.data[coset * 2 * self.ngens + 2 * gen] as usize
    }

    #[inline]
    pub fn act_inv(&self, coset: usize, gen: usize) -> usize {
        self.data[coset * 2 * self.ngens + 2 * gen + 1] as usize
    }

    #[inline]
    pub fn act_letter(&self, coset: usize, l: Letter) -> usize {
        self.data[coset * 2 * self.ngens + col_of(l)] as usize
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act_letter(c, l))
    }

    /// Every relator traced from every coset returns to that coset.
    pub fn is_consistent(&self, p: &Presentation) -> bool {
        p.ngens() == self.ngens
            && (0..self.n).all(|c| p.relators.iter().all(|r| self.trace(c, r) == c))
            && self.is_permutation_table()
    }

    fn is_permutation_table(&self) -> bool {
        (0..self.ngens).all(|g| (0..self.n).all(|c| self.act_inv(self.act(c, g), g) == c))
    }

    /// Whether a word lies in the subgroup (fixes coset 0).
    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == 0
    }

    pub fn forward_actions(&self) -> Vec<Vec<u32>> {
        (0..self.ngens).map(|g| (0..self.n).map(|c| self.act(c, g) as u32).collect()).collect()
    }

    /// Cache text: `cosets=<n> gens=<k>` then one line of 1-based images per generator.
    pub fn to_text(&self) -> String {
        let mut s = format!("cosets={} gens={}\n", self.n, self.ngens);
        for g in 0..self.ngens {
            let line: Vec<String> = (0..self.n).map(|c| (self.act(c, g) + 1).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, tag: &str) -> Result<CosetTable, CosetError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| CosetError::Format("empty".into()))?;
        let mut n = None;
        let mut k = None;
        for part in header.split_whitespace() {
            if let Some(v) = part.strip_prefix("cosets=") {
                n = v.parse::<usize>().ok();
            } else if let Some(v) = part.strip_prefix("gens=") {
                k = v.parse::<usize>().ok();
            }
        }
        let (n, k) = n.zip(k).ok_or_else(|| CosetError::Format(format!("bad header '{header}'")))?;
        let mut actions = Vec::with_capacity(k);
        for g in 0..k {
            let line = lines.next().ok_or_else(|| CosetError::Format(format!("missing line for generator {g}")))?;
            let act: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| CosetError::Format(e.to_string())))
                .collect::<Result<_, _>>()?;
            if act.len() != n || act.iter().any(|&x| x == 0 || x as usize > n) {
                return Err(CosetError::Format(format!("bad images for generator {g}")));
            }
            let mut seen = vec![false; n];
            for &x in &act {
                if std::mem::replace(&mut seen[x as usize - 1], true) {
                    return Err(CosetError::Format(format!("generator {g} is not a permutation")));
                }
            }
            actions.push(act.into_iter().map(|x| x - 1).collect());
        }
        Ok(CosetTable::from_actions(&actions, tag))
    }

    /// Renumber cosets in breadth-first order from coset 0 (column order).
    pub fn standardize(&self) -> CosetTable {
        let mut map = vec![UNDEF; self.n];
        let mut order = Vec::with_capacity(self.n);
        map[0] = 0;
        order.push(0usize);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in 0..2 * self.ngens {
                let d = self.data[c * 2 * self.ngens + col] as usize;
                if map[d] == UNDEF {
                    map[d] = order.len() as u32;
                    order.push(d);
                }
            }
            i += 1;
        }
        let actions: Vec<Vec<u32>> = (0..self.ngens)
            .map(|g| order.iter().map(|&c| map[self.act(c, g)]).collect())
            .collect();
        CosetTable::from_actions(&actions, &self.subgroup_tag)
    }
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CosetTable[{}; n={}, gens={}]", self.subgroup_tag, self.n, self.ngens)
    }
}

/// Right cosets of `φ⁻¹(H)` in the source of `φ`, where `H` is the subgroup of
/// the finite image generated by `h_gens`. Generator `x` acts by right
/// multiplication by `φ(x)` on the cosets `H·g`.
pub fn coset_table_from_map(phi: &GroupMap, h_gens: &[GElem], tag: &str) -> Result<CosetTable, CosetError> {
    let id = phi.images[0].identity_like();
    let image = group_closure(&phi.images, &id, DEFAULT_CLOSURE_CAP)?;
    let h = group_closure(h_gens, &id, DEFAULT_CLOSURE_CAP)?;
    let mut coset_of: HashMap<GElem, u32> = HashMap::with_capacity(image.order());
    let mut reps: Vec<GElem> = Vec::new();
    let assign = |g: &GElem, coset_of: &mut HashMap<GElem, u32>, reps: &mut Vec<GElem>| -> u32 {
        if let Some(&c) = coset_of.get(g) {
            return c;
        }
        let c = reps.len() as u32;
        for x in &h.elements {
            coset_of.insert(x.compose(g), c);
        }
        reps.push(g.clone());
        c
    };
    assign(&id, &mut coset_of, &mut reps);
    let k = phi.images.len();
    let mut actions: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut queue = VecDeque::from([0usize]);
    let mut visited = vec![true];
    while let Some(c) = queue.pop_front() {
        let rep = reps[c].clone();
        for (g, img) in phi.images.iter().enumerate() {
            let d = assign(&rep.compose(img), &mut coset_of, &mut reps) as usize;
            if actions[g].len() <= c {
                actions[g].resize(c + 1, UNDEF);
            }
            actions[g][c] = d as u32;
            if d >= visited.len() {
                visited.resize(d + 1, false);
            }
            if !visited[d] {
                visited[d] = true;
                queue.push_back(d);
            }
        }
    }
    let n = reps.len();
    for a in &mut actions {
        a.resize(n, UNDEF);
    }
    Ok(CosetTable::from_actions(&actions, tag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_and_errors() {
        let t = CosetTable::from_actions(&[vec![1, 2, 0], vec![0, 2, 1]], "S3/C");
        let s = t.to_text();
        assert!(s.starts_with("cosets=3 gens=2\n2 3 1\n"));
        assert_eq!(CosetTable::from_text(&s, "S3/C").unwrap(), t);
        assert!(CosetTable::from_text("cosets=2 gens=1\n1 1\n", "x").is_err());
        assert!(CosetTable::from_text("cosets=2 gens=1\n", "x").is_err());
    }
}
