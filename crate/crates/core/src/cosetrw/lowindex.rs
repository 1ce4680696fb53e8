//! Sims' backtrack search for subgroups of small index, one per conjugacy class.

use super::{col_of, CosetTable, UNDEF};
use crate::fpcore::Presentation;

struct Partial {
    n: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Partial {
    fn get(&self, c: usize, col: usize) -> u32 {
        self.data[c * self.cols + col]
    }

    fn set(&mut self, c: usize, col: usize, d: u32) {
        self.data[c * self.cols + col] = d;
    }

    fn add_coset(&mut self) -> usize {
        self.data.extend(std::iter::repeat(UNDEF).take(self.cols));
        self.n += 1;
        self.n - 1
    }

    /// Fill forced entries by scanning every relator from every coset.
    /// Returns false on a contradiction.
    fn deduce(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.n {
                for r in rels {
                    let len = r.len();
                    let (mut f, mut i) = (c as u32, 0usize);
                    while i < len {
                        let nx = self.get(f as usize, r[i]);
                        if nx == UNDEF {
                            break;
                        }
                        f = nx;
                        i += 1;
                    }
                    if i == len {
                        if f as usize != c {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c as u32, len);
                    while j > i {
                        let nx = self.get(b as usize, r[j - 1] ^ 1);
                        if nx == UNDEF {
                            break;
                        }
                        b = nx;
                        j -= 1;
                    }
                    if j == i {
                        if f != b {
                            return false;
                        }
                    } else if j == i + 1 {
                        let col = r[i];
                        if self.get(b as usize, col ^ 1) != UNDEF {
                            return false;
                        }
                        self.set(f as usize, col, b);
                        self.set(b as usize, col ^ 1, f);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        let pos = self.data.iter().position(|&x| x == UNDEF)?;
        Some((pos / self.cols, pos % self.cols))
    }

    /// The complete table is the least among its renumberings from every
    /// coset (so it represents its conjugacy class exactly once).
    fn is_canonical(&self) -> bool {
        for start in 1..self.n {
            let mut map = vec![UNDEF; self.n];
            let mut order = vec![start];
            map[start] = 0;
            let mut k = 0;
            'rows: while k < order.len() {
                let o = order[k];
                for col in 0..self.cols {
                    let t = self.get(o, col) as usize;
                    if map[t] == UNDEF {
                        map[t] = order.len() as u32;
                        order.push(t);
                    }
                    let renumbered = map[t];
                    let original = self.get(k, col);
                    if renumbered < original {
                        return false;
                    }
                    if renumbered > original {
                        break 'rows;
                    }
                }
                k += 1;
            }
        }
        true
    }
}

/// All subgroups of index ≤ `max_index`, one table per conjugacy class,
/// including the whole group (index 1).
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Vec<CosetTable> {
    assert!(max_index >= 1);
    let cols = 2 * p.ngens();
    let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| r.letters().iter().map(|&l| col_of(l)).collect()).collect();
    let mut out = Vec::new();
    let mut root = Partial { n: 0, cols, data: Vec::new() };
    root.add_coset();
    if cols == 0 {
        return vec![CosetTable::from_actions(&[], "index 1")];
    }
    if root.deduce(&rels) {
        search(root, &rels, max_index, &mut out);
    }
    out.into_iter()
        .map(|t: Partial| {
            let actions: Vec<Vec<u32>> =
                (0..p.ngens()).map(|g| (0..t.n).map(|c| t.get(c, 2 * g)).collect()).collect();
            CosetTable::from_actions(&actions, &format!("index {}", t.n))
        })
        .collect()
}

fn search(t: Partial, rels: &[Vec<usize>], max_index: usize, out: &mut Vec<Partial>) {
    let Some((c, col)) = t.first_undefined() else {
        if t.is_canonical() {
            out.push(t);
        }
        return;
    };
    for d in 0..t.n {
        if t.get(d, col ^ 1) != UNDEF {
            continue;
        }
        let mut next = Partial { n: t.n, cols: t.cols, data: t.data.clone() };
        next.set(c, col, d as u32);
        next.set(d, col ^ 1, c as u32);
        if next.deduce(rels) {
            search(next, rels, max_index, out);
        }
    }
    if t.n < max_index {
        let mut next = Partial { n: t.n, cols: t.cols, data: t.data.clone() };
        let d = next.add_coset();
        next.set(c, col, d as u32);
        next.set(d, col ^ 1, c as u32);
        if next.deduce(rels) {
            search(next, rels, max_index, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::parse_presentation;

    #[test]
    fn free_cyclic() {
        let p = parse_presentation("<a | >").unwrap();
        let ts = low_index_subgroups(&p, 2);
        let mut idx: Vec<usize> = ts.iter().map(|t| t.n).collect();
        idx.sort();
        assert_eq!(idx, vec![1, 2]);
    }

    #[test]
    fn cyclic_of_order_three() {
        let p = parse_presentation("<x | x^3>").unwrap();
        let ts = low_index_subgroups(&p, 3);
        let mut idx: Vec<usize> = ts.iter().map(|t| t.n).collect();
        idx.sort();
        assert_eq!(idx, vec![1, 3]);
        assert!(ts.iter().all(|t| t.is_consistent(&p)));
    }

    #[test]
    fn s3_classes() {
        // S3: subgroups up to conjugacy of index ≤ 6: S3, A3, C2, 1
        let p = parse_presentation("<x, y | x^2, y^2, (x*y)^3>").unwrap();
        let ts = low_index_subgroups(&p, 6);
        let mut idx: Vec<usize> = ts.iter().map(|t| t.n).collect();
        idx.sort();
        assert_eq!(idx, vec![1, 2, 3, 6]);
    }

    #[test]
    fn free_group_rank_two_index_two() {
        // F2 has 3 subgroups of index 2 (all normal) plus F2 itself
        let p = parse_presentation("<a, b | >").unwrap();
        assert_eq!(low_index_subgroups(&p, 2).len(), 4);
    }
}
