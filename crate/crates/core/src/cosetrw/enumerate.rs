//! HLT-style Todd–Coxeter coset enumeration with coincidence processing.

use super::{col_of, CosetTable, UNDEF};
use crate::fpcore::{Presentation, Word};

#[derive(Clone, Debug)]
pub enum EnumerationResult {
    Complete(CosetTable),
    /// The coset bound was hit before the table closed; says nothing about the index.
    Inconclusive { defined: usize },
}

impl EnumerationResult {
    pub fn index(&self) -> Option<usize> {
        match self {
            EnumerationResult::Complete(t) => Some(t.n),
            EnumerationResult::Inconclusive { .. } => None,
        }
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    max: usize,
}

struct Overflow;

impl Enumerator {
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.cols + col]
    }

    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.cols + col] = d;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let nx = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = nx;
        }
        r
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, Overflow> {
        let d = self.parent.len();
        if d >= self.max {
            return Err(Overflow);
        }
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat(UNDEF).take(self.cols));
        let d = d as u32;
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(d)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for col in 0..self.cols {
                let f = self.get(e, col);
                if f == UNDEF {
                    continue;
                }
                if self.get(f, col ^ 1) == e {
                    self.set(f, col ^ 1, UNDEF);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let x = self.get(e1, col);
                if x != UNDEF {
                    let x1 = self.rep(x);
                    self.merge(f1, x1, &mut queue);
                } else {
                    let y = self.get(f1, col ^ 1);
                    if y != UNDEF {
                        let y1 = self.rep(y);
                        self.merge(e1, y1, &mut queue);
                    } else {
                        self.set(e1, col, f1);
                        self.set(f1, col ^ 1, e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<(), Overflow> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() - 1);
        loop {
            while i <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
                if i > j {
                    break;
                }
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, w[j] ^ 1) != UNDEF {
                b = self.get(b, w[j] ^ 1);
                if j == i {
                    // whole word scanned from both ends
                    if f != b {
                        self.coincidence(f, b);
                    }
                    return Ok(());
                }
                j -= 1;
            }
            if j == i {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerate the cosets of the subgroup generated by `subgroup_gens`.
pub fn todd_coxeter(p: &Presentation, subgroup_gens: &[Word], max_cosets: usize) -> EnumerationResult {
    let cols = 2 * p.ngens();
    let mut e = Enumerator { cols, table: vec![UNDEF; cols], parent: vec![0], max: max_cosets.max(1) };
    let conv = |w: &Word| -> Vec<usize> { w.letters().iter().map(|&l| col_of(l)).collect() };
    let rels: Vec<Vec<usize>> = p.relators.iter().map(conv).collect();
    let hgens: Vec<Vec<usize>> = subgroup_gens.iter().map(conv).collect();
    let run = |e: &mut Enumerator| -> Result<(), Overflow> {
        for w in &hgens {
            e.scan_and_fill(0, w)?;
        }
        let mut c = 0u32;
        while (c as usize) < e.parent.len() {
            for r in &rels {
                if !e.alive(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            if e.alive(c) {
                for col in 0..cols {
                    if !e.alive(c) {
                        break;
                    }
                    if e.get(c, col) == UNDEF {
                        e.define(c, col)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    };
    if run(&mut e).is_err() {
        let defined = (0..e.parent.len() as u32).filter(|&c| e.alive(c)).count();
        return EnumerationResult::Inconclusive { defined };
    }
    let live: Vec<u32> = (0..e.parent.len() as u32).filter(|&c| e.alive(c)).collect();
    let mut idx = vec![UNDEF; e.parent.len()];
    for (i, &c) in live.iter().enumerate() {
        idx[c as usize] = i as u32;
    }
    let actions: Vec<Vec<u32>> = (0..p.ngens())
        .map(|g| live.iter().map(|&c| idx[e.get(c, 2 * g) as usize]).collect())
        .collect();
    let t = CosetTable::from_actions(&actions, "todd-coxeter").standardize();
    EnumerationResult::Complete(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::parse_presentation;

    #[test]
    fn cyclic_three() {
        let p = parse_presentation("<x | x^3>").unwrap();
        assert_eq!(todd_coxeter(&p, &[], 100).index(), Some(3));
    }

    #[test]
    fn s3_on_cosets_of_x() {
        let p = parse_presentation("<x, y | x^2, y^2, (x*y)^3>").unwrap();
        let r = todd_coxeter(&p, &[p.word("x").unwrap()], 100);
        match r {
            EnumerationResult::Complete(t) => {
                assert_eq!(t.n, 3);
                assert!(t.is_consistent(&p));
            }
            _ => panic!("should close"),
        }
        assert_eq!(todd_coxeter(&p, &[], 100).index(), Some(6));
    }

    #[test]
    fn coincidences_collapse() {
        // ⟨a,b | a^3, b^2, (ab)^2, a b a^-1 b^-1⟩ is abelian of order ... a^3, b^2, ab=ba, (ab)^2 → a^2=1 → a=1: order 2
        let p = parse_presentation("<a, b | a^3, b^2, (a*b)^2, [a,b]>").unwrap();
        assert_eq!(todd_coxeter(&p, &[], 1000).index(), Some(2));
        let q = parse_presentation("<a, b | a*b*a^-1*b^-2, b*a*b^-1*a^-2>").unwrap();
        assert_eq!(todd_coxeter(&q, &[], 1000).index(), Some(1));
    }

    #[test]
    fn overflow_is_inconclusive() {
        let p = parse_presentation("<a, b | >").unwrap();
        assert!(matches!(todd_coxeter(&p, &[], 50), EnumerationResult::Inconclusive { .. }));
    }
}
