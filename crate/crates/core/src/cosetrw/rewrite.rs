//! Reidemeister–Schreier rewriting with a breadth-first Schreier transversal.

use rayon::prelude::*;

use super::{CosetError, CosetTable};
use crate::fpcore::{gen_of, letter, Gen, Letter, Presentation, Word};

/// A presentation of a subgroup together with each generator written as a
/// word in the ambient generators.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub pres: Presentation,
    pub ambient: String,
    pub gen_words: Vec<Word>,
}

impl SubgroupPresentation {
    /// Cache text: the presentation followed by `# genword` comment lines.
    pub fn to_text(&self, ambient_labels: &[String]) -> String {
        let mut s = format!("# subgroup {} of {}\n{}\n", self.pres.name, self.ambient, self.pres);
        for (g, w) in self.pres.gens.iter().zip(&self.gen_words) {
            s.push_str(&format!("# genword {} = {}\n", g.label, w.display(ambient_labels)));
        }
        s
    }

    pub fn from_text(text: &str, name: &str, ambient: &Presentation) -> Result<SubgroupPresentation, CosetError> {
        let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n");
        let pres = crate::fpcore::parse_named_presentation(&body, name)
            .map_err(|e| CosetError::Format(e.to_string()))?;
        let mut gen_words = vec![None; pres.ngens()];
        for line in text.lines() {
            if let Some(rest) = line.trim_start().strip_prefix("# genword ") {
                let (lab, w) = rest.split_once('=').ok_or_else(|| CosetError::Format(line.to_string()))?;
                let g = pres.gen_index(lab.trim()).ok_or_else(|| CosetError::Format(line.to_string()))?;
                gen_words[g] = Some(ambient.word(w.trim()).map_err(|e| CosetError::Format(e.to_string()))?);
            }
        }
        let gen_words = gen_words
            .into_iter()
            .enumerate()
            .map(|(g, w)| w.ok_or_else(|| CosetError::Format(format!("no genword for generator {g}"))))
            .collect::<Result<_, _>>()?;
        Ok(SubgroupPresentation { pres, ambient: ambient.name.clone(), gen_words })
    }
}

/// Transversal and Schreier generator numbering for a complete coset table.
#[derive(Clone, Debug)]
pub struct SchreierRewriter {
    pub table: CosetTable,
    /// Schreier generator for edge (coset, generator), if not a tree edge.
    edge_gen: Vec<Option<u32>>,
    /// Transversal word of each coset.
    pub reps: Vec<Word>,
    /// (coset, generator) of each Schreier generator.
    pub edges: Vec<(usize, usize)>,
}

impl SchreierRewriter {
    /// Breadth-first transversal from coset 0 in column order (gen, inverse, …).
    pub fn new(table: &CosetTable) -> SchreierRewriter {
        let (n, k) = (table.n, table.ngens);
        let mut reps: Vec<Option<Word>> = vec![None; n];
        let mut tree = vec![false; n * k];
        reps[0] = Some(Word::identity());
        let mut order = vec![0usize];
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for g in 0..k {
                for inv in [false, true] {
                    let d = if inv { table.act_inv(c, g) } else { table.act(c, g) };
                    if reps[d].is_none() {
                        let l = letter(g, inv);
                        reps[d] = Some(reps[c].as_ref().unwrap().mul(&Word::from_letters([l])));
                        // the underlying forward edge is (c, g) or (d, g)
                        if inv {
                            tree[d * k + g] = true;
                        } else {
                            tree[c * k + g] = true;
                        }
                        order.push(d);
                    }
                }
            }
        }
        let reps: Vec<Word> = reps.into_iter().map(|r| r.expect("coset table must be connected")).collect();
        let mut edge_gen = vec![None; n * k];
        let mut edges = Vec::new();
        for c in 0..n {
            for g in 0..k {
                if !tree[c * k + g] {
                    edge_gen[c * k + g] = Some(edges.len() as u32);
                    edges.push((c, g));
                }
            }
        }
        SchreierRewriter { table: table.clone(), edge_gen, reps, edges }
    }

    pub fn num_generators(&self) -> usize {
        self.edges.len()
    }

    /// Rewrite a word starting at `start`; returns the Schreier word and the end coset.
    pub fn rewrite_from(&self, start: usize, w: &Word) -> (Word, usize) {
        let k = self.table.ngens;
        let mut out: Vec<Letter> = Vec::new();
        let mut c = start;
        for &l in w.letters() {
            let g = gen_of(l);
            if l > 0 {
                if let Some(s) = self.edge_gen[c * k + g] {
                    out.push(s as Letter + 1);
                }
                c = self.table.act(c, g);
            } else {
                let d = self.table.act_inv(c, g);
                if let Some(s) = self.edge_gen[d * k + g] {
                    out.push(-(s as Letter + 1));
                }
                c = d;
            }
        }
        (Word::from_letters(out), c)
    }

    /// Rewrite an element of the subgroup.
    pub fn rewrite(&self, w: &Word) -> Result<Word, CosetError> {
        let (r, end) = self.rewrite_from(0, w);
        if end != 0 {
            return Err(CosetError::NotInSubgroup(end));
        }
        Ok(r)
    }

    /// `rep(c) · g · rep(c·g)⁻¹` in the ambient generators.
    pub fn gen_word(&self, s: usize) -> Word {
        let (c, g) = self.edges[s];
        let d = self.table.act(c, g);
        self.reps[c].mul(&Word::gen(g)).mul(&self.reps[d].inverse())
    }
}

/// Reidemeister–Schreier presentation of the stabilizer of coset 0.
pub fn rewrite_kernel_presentation(t: &CosetTable, p: &Presentation, name: &str) -> SubgroupPresentation {
    assert_eq!(t.ngens, p.ngens(), "table and presentation disagree on generators");
    let rw = SchreierRewriter::new(t);
    let gens: Vec<Gen> = rw
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(c, g))| Gen { index: i, label: format!("s{}_{}", c + 1, g + 1) })
        .collect();
    let relators: Vec<Word> = (0..t.n)
        .into_par_iter()
        .flat_map_iter(|c| {
            let rw = &rw;
            p.relators.iter().filter_map(move |r| {
                let (w, end) = rw.rewrite_from(c, r);
                debug_assert_eq!(end, c);
                let w = w.cyclically_reduced();
                (!w.is_empty()).then_some(w)
            })
        })
        .collect();
    let gen_words = (0..rw.num_generators()).map(|s| rw.gen_word(s)).collect();
    SubgroupPresentation {
        pres: Presentation { name: name.to_string(), gens, relators },
        ambient: p.name.clone(),
        gen_words,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::parse_presentation;
    use crate::zlat::abelian_invariants;

    #[test]
    fn kernel_of_free_cyclic_onto_z2() {
        let p = parse_presentation("<a | >").unwrap();
        let t = CosetTable::from_actions(&[vec![1, 0]], "a^2");
        let s = rewrite_kernel_presentation(&t, &p, "K");
        assert_eq!(s.pres.ngens(), 1);
        assert!(s.pres.relators.is_empty());
        assert_eq!(s.gen_words[0], p.word("a^2").unwrap());
    }

    #[test]
    fn schreier_rank_formula_and_genwords() {
        // S3 regular action: kernel of the presentation map is trivial
        let p = parse_presentation("<x, y | x^2, y^2, (x*y)^3>").unwrap();
        let t = match crate::cosetrw::todd_coxeter(&p, &[], 100) {
            crate::cosetrw::EnumerationResult::Complete(t) => t,
            _ => unreachable!(),
        };
        let s = rewrite_kernel_presentation(&t, &p, "K");
        assert_eq!(s.pres.ngens(), 6 * (2 - 1) + 1);
        for w in &s.gen_words {
            assert!(t.contains(w));
        }
        assert!(abelian_invariants(&s.pres).is_trivial());
    }
}
