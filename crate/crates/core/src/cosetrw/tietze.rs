//! Tietze simplification: greedy elimination of generators that occur once
//! in some relator, with relators kept cyclically reduced and deduplicated
//! up to rotation and inversion.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use num_bigint::BigInt;

use super::SubgroupPresentation;
use crate::fpcore::{free_reduce, gen_of, Gen, Letter, Presentation, Word};
use crate::zlat::{abelian_invariants, AbelianInvariants};

#[derive(Clone, Debug)]
pub struct TietzeOptions {
    /// Maximum number of relator letters rewritten before giving up.
    pub budget: u64,
    /// Eliminations that lengthen the presentation stop once the total
    /// relator length would exceed this.
    pub length_limit: usize,
    /// Stop as soon as the generator count reaches this.
    pub target_gens: usize,
    /// Compare abelian invariants before and after.
    pub check_invariants: bool,
}

impl Default for TietzeOptions {
    fn default() -> Self {
        TietzeOptions { budget: 500_000_000, length_limit: 0, target_gens: 0, check_invariants: true }
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub result: SubgroupPresentation,
    /// Original index of each surviving generator.
    pub survivors: Vec<usize>,
    /// In order: (original generator, its value as a word in original indices).
    pub eliminations: Vec<(usize, Word)>,
    pub original_gens: usize,
    pub budget_exhausted: bool,
    pub letters_processed: u64,
    /// Abelian invariants before and after, when checked.
    pub invariants: Option<AbelianInvariants>,
}

impl Simplified {
    /// Image of every original generator in ℤ^(survivors).
    pub fn abelian_expansions(&self) -> Vec<Vec<BigInt>> {
        let m = self.survivors.len();
        let mut exp: Vec<Option<Vec<BigInt>>> = vec![None; self.original_gens];
        for (i, &g) in self.survivors.iter().enumerate() {
            let mut v = vec![BigInt::from(0); m];
            v[i] = BigInt::from(1);
            exp[g] = Some(v);
        }
        for (g, w) in self.eliminations.iter().rev() {
            let mut v = vec![BigInt::from(0); m];
            for &l in w.letters() {
                let src = exp[gen_of(l)].as_ref().expect("elimination order");
                for (a, b) in v.iter_mut().zip(src) {
                    if l > 0 {
                        *a += b;
                    } else {
                        *a -= b;
                    }
                }
            }
            exp[*g] = Some(v);
        }
        exp.into_iter().map(|v| v.expect("every generator survives or is eliminated")).collect()
    }

    /// Every original generator as a word in the surviving generators, or
    /// `None` if some expansion exceeds `max_len` letters.
    pub fn word_expansions(&self, max_len: usize) -> Option<Vec<Word>> {
        let mut exp: Vec<Option<Word>> = vec![None; self.original_gens];
        for (i, &g) in self.survivors.iter().enumerate() {
            exp[g] = Some(Word::gen(i));
        }
        for (g, w) in self.eliminations.iter().rev() {
            let mut out: Vec<Letter> = Vec::new();
            for &l in w.letters() {
                let src = exp[gen_of(l)].as_ref().expect("elimination order");
                if l > 0 {
                    out.extend_from_slice(src.letters());
                } else {
                    out.extend(src.letters().iter().rev().map(|&x| -x));
                }
                if out.len() > 4 * max_len {
                    out = free_reduce(out).into_letters();
                }
            }
            let word = free_reduce(out);
            if word.len() > max_len {
                return None;
            }
            exp[*g] = Some(word);
        }
        Some(exp.into_iter().map(|w| w.unwrap()).collect())
    }
}

impl Simplified {
    /// Cache text: the simplified subgroup presentation, then the elimination
    /// record with letters as signed 1-based original generator numbers.
    pub fn to_text(&self, ambient_labels: &[String]) -> String {
        let mut s = self.result.to_text(ambient_labels);
        s.push_str(&format!("# original {}\n", self.original_gens));
        let surv: Vec<String> = self.survivors.iter().map(usize::to_string).collect();
        s.push_str(&format!("# survivors {}\n", surv.join(" ")));
        for (g, w) in &self.eliminations {
            let ls: Vec<String> = w.letters().iter().map(i32::to_string).collect();
            s.push_str(&format!("# elim {g} : {}\n", ls.join(" ")));
        }
        s
    }

    pub fn from_text(text: &str, name: &str, ambient: &Presentation) -> Result<Simplified, super::CosetError> {
        use super::CosetError::Format;
        let result = SubgroupPresentation::from_text(text, name, ambient)?;
        let mut original = None;
        let mut survivors = None;
        let mut eliminations = Vec::new();
        let num = |t: &str| t.parse::<i64>().map_err(|e| Format(format!("{t}: {e}")));
        for line in text.lines() {
            if let Some(r) = line.strip_prefix("# original ") {
                original = Some(num(r.trim())? as usize);
            } else if let Some(r) = line.strip_prefix("# survivors") {
                survivors = Some(r.split_whitespace().map(|t| num(t).map(|x| x as usize)).collect::<Result<Vec<_>, _>>()?);
            } else if let Some(r) = line.strip_prefix("# elim ") {
                let (g, w) = r.split_once(':').ok_or_else(|| Format(line.to_string()))?;
                let letters = w.split_whitespace().map(|t| num(t).map(|x| x as Letter)).collect::<Result<Vec<_>, _>>()?;
                eliminations.push((num(g.trim())? as usize, Word::from_letters(letters)));
            }
        }
        let original_gens = original.ok_or_else(|| Format("missing '# original'".into()))?;
        let survivors = survivors.ok_or_else(|| Format("missing '# survivors'".into()))?;
        if survivors.len() != result.pres.ngens() || survivors.len() + eliminations.len() != original_gens {
            return Err(Format("elimination record does not match generator counts".into()));
        }
        Ok(Simplified {
            result,
            survivors,
            eliminations,
            original_gens,
            budget_exhausted: false,
            letters_processed: 0,
            invariants: None,
        })
    }
}

/// Start of the lexicographically least rotation.
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let (a, b) = (s[(i + k) % n], s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

fn rotated(s: &[Letter], start: usize) -> Vec<Letter> {
    s[start..].iter().chain(&s[..start]).copied().collect()
}

/// Normal form up to cyclic permutation and inversion.
fn canonical(r: &[Letter]) -> Vec<Letter> {
    let a = rotated(r, least_rotation(r));
    let inv: Vec<Letter> = r.iter().rev().map(|&x| -x).collect();
    let b = rotated(&inv, least_rotation(&inv));
    a.min(b)
}

fn cyclic_reduce(letters: Vec<Letter>) -> Vec<Letter> {
    let w = free_reduce(letters);
    w.cyclically_reduced().into_letters()
}

struct State {
    rels: Vec<Option<Vec<Letter>>>,
    version: Vec<u32>,
    keys: HashMap<Vec<Letter>, u32>,
    /// Relators containing each generator.
    occ: Vec<BTreeSet<u32>>,
    /// Total number of letters of each generator across relators.
    count: Vec<usize>,
    total: usize,
    heap: BinaryHeap<Reverse<(i64, u32, u32, u32)>>,
}

fn gen_counts(r: &[Letter]) -> Vec<(usize, usize)> {
    let mut v: Vec<usize> = r.iter().map(|&l| gen_of(l)).collect();
    v.sort_unstable();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for g in v {
        match out.last_mut() {
            Some((h, c)) if *h == g => *c += 1,
            _ => out.push((g, 1)),
        }
    }
    out
}

impl State {
    fn cost(&self, g: usize, len: usize) -> i64 {
        (self.count[g] as i64 - 1) * (len as i64 - 2) - len as i64
    }

    fn remove(&mut self, i: usize) {
        if let Some(r) = self.rels[i].take() {
            for (g, c) in gen_counts(&r) {
                self.occ[g].remove(&(i as u32));
                self.count[g] -= c;
            }
            self.total -= r.len();
            let key = canonical(&r);
            if self.keys.get(&key) == Some(&(i as u32)) {
                self.keys.remove(&key);
            }
            self.version[i] += 1;
        }
    }

    /// Install a cyclically reduced relator at slot `i` (slot must be empty).
    fn install(&mut self, i: usize, r: Vec<Letter>) {
        if r.is_empty() {
            return;
        }
        let key = canonical(&r);
        if self.keys.contains_key(&key) {
            return;
        }
        self.keys.insert(key, i as u32);
        let counts = gen_counts(&r);
        for &(g, c) in &counts {
            self.occ[g].insert(i as u32);
            self.count[g] += c;
        }
        self.total += r.len();
        self.version[i] += 1;
        let len = r.len();
        self.rels[i] = Some(r);
        for (g, c) in counts {
            if c == 1 {
                let cost = self.cost(g, len);
                self.heap.push(Reverse((cost, g as u32, i as u32, self.version[i])));
            }
        }
    }
}

/// Simplify by Tietze moves. Generator words of survivors are kept; the
/// elimination record lets callers map old generators to new ones.
pub fn tietze_simplify(s: &SubgroupPresentation, opts: &TietzeOptions) -> Simplified {
    let n = s.pres.ngens();
    let before = opts.check_invariants.then(|| abelian_invariants(&s.pres));
    let mut st = State {
        rels: vec![None; s.pres.relators.len()],
        version: vec![0; s.pres.relators.len()],
        keys: HashMap::new(),
        occ: vec![BTreeSet::new(); n],
        count: vec![0; n],
        total: 0,
        heap: BinaryHeap::new(),
    };
    for (i, r) in s.pres.relators.iter().enumerate() {
        st.install(i, cyclic_reduce(r.letters().to_vec()));
    }
    let length_limit = if opts.length_limit == 0 { (2 * st.total).max(100_000) } else { opts.length_limit };
    let mut alive = vec![true; n];
    let mut ngens = n;
    let mut eliminations = Vec::new();
    let mut processed: u64 = 0;
    let mut exhausted = false;
    while ngens > opts.target_gens {
        let Some(Reverse((cost, g, ri, ver))) = st.heap.pop() else { break };
        let (g, ri) = (g as usize, ri as usize);
        if !alive[g] || st.version[ri] != ver || st.rels[ri].is_none() {
            continue;
        }
        let len = st.rels[ri].as_ref().unwrap().len();
        let now = st.cost(g, len);
        if now > cost {
            st.heap.push(Reverse((now, g as u32, ri as u32, ver)));
            continue;
        }
        if now > 0 && st.total as i64 + now > length_limit as i64 {
            // cheapest move is too expensive; nothing cheaper remains
            break;
        }
        let r = st.rels[ri].clone().unwrap();
        let pos = r.iter().position(|&l| gen_of(l) == g).unwrap();
        let rot = rotated(&r, pos);
        // rot = g^e · C
        let rest: Vec<Letter> = rot[1..].to_vec();
        let value: Vec<Letter> = if rot[0] > 0 { rest.iter().rev().map(|&x| -x).collect() } else { rest };
        let inv_value: Vec<Letter> = value.iter().rev().map(|&x| -x).collect();
        st.remove(ri);
        let targets: Vec<u32> = st.occ[g].iter().copied().collect();
        for t in targets {
            let t = t as usize;
            let old = st.rels[t].clone().unwrap();
            processed += old.len() as u64;
            let mut new = Vec::with_capacity(old.len() + len);
            for &l in &old {
                if gen_of(l) == g {
                    new.extend_from_slice(if l > 0 { &value } else { &inv_value });
                } else {
                    new.push(l);
                }
            }
            st.remove(t);
            st.install(t, cyclic_reduce(new));
        }
        debug_assert!(st.occ[g].is_empty());
        alive[g] = false;
        ngens -= 1;
        eliminations.push((g, Word::from_letters(value)));
        if processed > opts.budget {
            exhausted = true;
            break;
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
    let mut newidx = vec![usize::MAX; n];
    for (i, &g) in survivors.iter().enumerate() {
        newidx[g] = i;
    }
    let mut rels: Vec<Vec<Letter>> = st.rels.into_iter().flatten().collect();
    rels.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let relators: Vec<Word> = rels
        .into_iter()
        .map(|r| {
            Word::from_letters(r.into_iter().map(|l| {
                let k = newidx[gen_of(l)] as Letter + 1;
                if l > 0 {
                    k
                } else {
                    -k
                }
            }))
        })
        .collect();
    let gens: Vec<Gen> = survivors
        .iter()
        .enumerate()
        .map(|(i, &g)| Gen { index: i, label: s.pres.gens[g].label.clone() })
        .collect();
    let pres = Presentation { name: s.pres.name.clone(), gens, relators };
    let invariants = before.map(|b| {
        let after = abelian_invariants(&pres);
        assert_eq!(b, after, "Tietze moves changed the abelian invariants");
        after
    });
    let result = SubgroupPresentation {
        pres,
        ambient: s.ambient.clone(),
        gen_words: survivors.iter().map(|&g| s.gen_words[g].clone()).collect(),
    };
    log::info!(
        "tietze {}: {} -> {} generators, {} relators, length {}{}",
        s.pres.name,
        n,
        result.pres.ngens(),
        result.pres.relators.len(),
        result.pres.total_length(),
        if exhausted { " (budget exhausted)" } else { "" }
    );
    Simplified {
        result,
        survivors,
        eliminations,
        original_gens: n,
        budget_exhausted: exhausted,
        letters_processed: processed,
        invariants,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::parse_presentation;

    fn plain(p: Presentation) -> SubgroupPresentation {
        let gen_words = (0..p.ngens()).map(Word::gen).collect();
        SubgroupPresentation { ambient: p.name.clone(), pres: p, gen_words }
    }

    #[test]
    fn minimal_presentation_unchanged() {
        let p = parse_presentation("<x | x^2>").unwrap();
        let s = tietze_simplify(&plain(p.clone()), &TietzeOptions::default());
        assert_eq!(s.result.pres.ngens(), 1);
        assert_eq!(s.result.pres.relators, p.relators);
        assert!(s.eliminations.is_empty());
    }

    #[test]
    fn least_rotation_and_canonical() {
        assert_eq!(least_rotation(&[3, 1, 2]), 1);
        assert_eq!(least_rotation(&[1, 1, 1]), 0);
        assert_eq!(canonical(&[2, 1]), canonical(&[-1, -2]));
        assert_eq!(canonical(&[1, 2, -1, -2]), canonical(&[2, -1, -2, 1]));
    }

    #[test]
    fn eliminates_defined_generators() {
        // z = x*y, w = z^2: reduces to the free group on x, y
        let p = parse_presentation("<x, y, z, w | z^-1*x*y, w^-1*z^2>").unwrap();
        let s = tietze_simplify(&plain(p.clone()), &TietzeOptions::default());
        assert_eq!(s.result.pres.ngens(), 2);
        assert!(s.result.pres.relators.is_empty());
        let exp = s.word_expansions(100).unwrap();
        // the old relators become trivial in the free group on the survivors
        for r in &p.relators {
            assert!(r.substitute(&exp).is_empty());
        }
        let ab = s.abelian_expansions();
        let total: BigInt = ab[3].iter().sum();
        assert_eq!(total, BigInt::from(2));
    }

    #[test]
    fn expansions_respect_relations() {
        // S3 presented redundantly; every expansion must satisfy the old relators
        let p = parse_presentation("<a, b, c | a^2, b^2, c^-1*a*b, c^3, a*b*a*b^-1*a^-1*b^-1>").unwrap();
        let s = tietze_simplify(&plain(p.clone()), &TietzeOptions::default());
        assert!(s.result.pres.ngens() <= 2);
        let exp = s.word_expansions(1000).unwrap();
        let t = crate::cosetrw::todd_coxeter(&s.result.pres, &[], 1000);
        let crate::cosetrw::EnumerationResult::Complete(t) = t else { panic!() };
        assert_eq!(t.n, 6);
        for r in &p.relators {
            let w = r.substitute(&exp);
            assert!((0..t.n).all(|c| t.trace(c, &w) == c));
        }
    }

    #[test]
    fn text_round_trip() {
        let p = parse_presentation("<x, y, z, w | z^-1*x*y, w^-1*z^2, x^3>").unwrap();
        let s = tietze_simplify(&plain(p.clone()), &TietzeOptions::default());
        let back = Simplified::from_text(&s.to_text(&p.labels()), &s.result.pres.name, &p).unwrap();
        assert_eq!(back.result.pres.relators, s.result.pres.relators);
        assert_eq!(back.result.gen_words, s.result.gen_words);
        assert_eq!(back.abelian_expansions(), s.abelian_expansions());
        assert_eq!(back.word_expansions(100), s.word_expansions(100));
    }
}
