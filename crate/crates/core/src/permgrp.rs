//! Permutations, brute-force closure of small finite groups, homomorphism
//! verification, and the search that extends the degree-28 map on Γ to Λ.
//!
//! Permutations act on the right: `p.compose(q)` applies `p` first.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::cosetrw::CosetTable;
use crate::fpcore::{evaluate_word, GroupElement, Presentation, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("bad cycle notation: {0}")]
    Syntax(String),
    #[error("point {0} out of range for degree {1}")]
    OutOfRange(usize, usize),
    #[error("point {0} repeated")]
    Repeated(usize),
    #[error("group closure exceeded cap of {cap} elements (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("relator {index} ({word}) does not map to the identity")]
    RelatorFails { index: usize, word: String },
    #[error("no extension of the given images satisfies all relators of {0}")]
    NoExtension(String),
    #[error("generator '{0}' missing from presentation")]
    MissingGenerator(String),
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u16).collect() }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u16>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n {
                return Err(PermError::OutOfRange(i + 1, n));
            }
            if seen[i] {
                return Err(PermError::Repeated(i + 1));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Parse 1-based cycle notation such as `(3,8,23,20)(4,24,6,12)`.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut touched = vec![false; degree];
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(PermError::Syntax(rest.to_string()));
            }
            let close = rest.find(')').ok_or_else(|| PermError::Syntax(rest.to_string()))?;
            let body = &rest[1..close];
            rest = &rest[close + 1..];
            let pts: Vec<usize> = body
                .split(',')
                .map(|t| t.parse::<usize>().map_err(|_| PermError::Syntax(body.to_string())))
                .collect::<Result<_, _>>()?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(PermError::OutOfRange(p, degree));
                }
                if touched[p - 1] {
                    return Err(PermError::Repeated(p));
                }
                touched[p - 1] = true;
            }
            for k in 0..pts.len() {
                images[pts[k] - 1] = (pts[(k + 1) % pts.len()] - 1) as u16;
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of a 0-based point.
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cyc.push(p);
                p = self.image(p);
            }
            out.push(cyc);
        }
        out
    }

    /// Swap the images of two 1-based points (used to build corrupted inputs).
    pub fn with_swapped_points(&self, a: usize, b: usize) -> Perm {
        let t = Perm::from_cycles(&format!("({a},{b})"), self.degree()).unwrap();
        self.compose(&t)
    }
}

impl GroupElement for Perm {
    fn compose(&self, other: &Self) -> Self {
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Perm { images: inv }
    }

    fn identity_like(&self) -> Self {
        Perm::identity(self.degree())
    }

    fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles() {
            if c.len() < 2 {
                continue;
            }
            any = true;
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of a permutation: lcm of its cycle lengths.
pub fn element_order(g: &Perm) -> u64 {
    g.cycles().iter().fold(1u64, |acc, c| {
        let l = c.len() as u64;
        acc / gcd(acc, l) * l
    })
}

/// Order of an arbitrary group element by repeated multiplication.
pub fn order_by_powers<T: GroupElement>(g: &T) -> u64 {
    let mut k = 1;
    let mut x = g.clone();
    while !x.is_identity() {
        x = x.compose(g);
        k += 1;
    }
    k
}

/// Element of U₃(3) × ℤ/3: a permutation of the 28 points together with a twist.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElem {
    pub perm: Perm,
    pub twist: u8,
}

impl GElem {
    pub fn new(perm: Perm, twist: u8) -> Self {
        GElem { perm, twist: twist % 3 }
    }
}

impl GroupElement for GElem {
    fn compose(&self, other: &Self) -> Self {
        GElem { perm: self.perm.compose(&other.perm), twist: (self.twist + other.twist) % 3 }
    }

    fn inverse(&self) -> Self {
        GElem { perm: self.perm.inverse(), twist: (3 - self.twist) % 3 }
    }

    fn identity_like(&self) -> Self {
        GElem { perm: self.perm.identity_like(), twist: 0 }
    }

    fn is_identity(&self) -> bool {
        self.twist == 0 && self.perm.is_identity()
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [twist {}]", self.perm, self.twist)
    }
}

/// A fully enumerated finite group.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup<T: GroupElement> {
    pub elements: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: GroupElement> EnumeratedGroup<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &T) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &T) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn identity(&self) -> &T {
        &self.elements[0]
    }
}

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Breadth-first closure of `gens` under right multiplication. The identity
/// is element 0; the order of the list is deterministic.
pub fn group_closure<T: GroupElement>(gens: &[T], identity: &T, cap: usize) -> Result<EnumeratedGroup<T>, PermError> {
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity.clone(), 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = elements[i].compose(g);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(PermError::CapExceeded { cap, reached: elements.len() });
                }
                index.insert(h.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
    }
    Ok(EnumeratedGroup { elements, index })
}

/// A homomorphism from a finitely presented group into U₃(3) × ℤ/3.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: Presentation,
    pub images: Vec<GElem>,
    pub verified: bool,
    pub image_order: usize,
}

impl GroupMap {
    pub fn image_of(&self, w: &Word) -> GElem {
        let id = self.images[0].identity_like();
        evaluate_word(w, &self.images, &id).expect("images cover all generators")
    }

    pub fn is_surjective(&self) -> bool {
        self.image_order == G_ORDER
    }
}

/// |U₃(3) × ℤ/3| = 2⁵·3⁴·7.
pub const G_ORDER: usize = 18144;
/// |U₃(3)|.
pub const U33_ORDER: usize = 6048;

/// Check every relator and compute the order of the image.
pub fn verify_homomorphism(p: &Presentation, images: Vec<GElem>) -> Result<GroupMap, PermError> {
    assert_eq!(images.len(), p.ngens(), "one image per generator");
    let id = images[0].identity_like();
    let labels = p.labels();
    for (index, r) in p.relators.iter().enumerate() {
        let v = evaluate_word(r, &images, &id).expect("images cover all generators");
        if !v.is_identity() {
            return Err(PermError::RelatorFails { index, word: r.display(&labels).to_string() });
        }
    }
    let image_order = group_closure(&images, &id, DEFAULT_CLOSURE_CAP)?.order();
    Ok(GroupMap { source: p.clone(), images, verified: true, image_order })
}

/// The degree-28 images of u, jb, bj from the primitive action of U₃(3).
pub const PHI_U: &str = "(3,8,23,20)(4,24,6,12)(7,9,14,22)(10,19,11,13)(15,16,21,18)(17,26,27,25)";
pub const PHI_JB: &str = "(1,9,20,12,19,23,6,16)(2,27,14,17,13,26,15,25)(3,24)(4,5,10,21,7,11,28,8)";
pub const PHI_BJ: &str = "(1,13,20,15,19,2,6,14)(4,9,10,12,7,23,28,16)(5,27,21,17,11,26,8,25)(22,24)";

pub fn gamma_images() -> [Perm; 3] {
    [
        Perm::from_cycles(PHI_U, 28).unwrap(),
        Perm::from_cycles(PHI_JB, 28).unwrap(),
        Perm::from_cycles(PHI_BJ, 28).unwrap(),
    ]
}

#[derive(Clone, Debug)]
pub struct ExtensionSolution {
    pub map: GroupMap,
    /// Number of candidates for φ(j) (over all of U₃(3)) passing every relator.
    pub solutions_found: usize,
}

/// Extend the images of u, jb, bj to all of Λ = ⟨j,u,v,b⟩.
///
/// Brute force over the U₃(3)-component x of φ(j): then φ(b) = x⁻¹·φ(jb),
/// which must also satisfy φ(b)·x = φ(bj), and φ(v) = φ(bj)²·φ(u)⁻² from the
/// relator (bj)²(vu²)⁻¹. The ℤ/3-components come from the action of Λ on the
/// three cosets of Γ. Solutions are compared by the perm images of (j,u,v,b)
/// and the least is returned.
pub fn solve_extension(
    lambda: &Presentation,
    u: &Perm,
    jb: &Perm,
    bj: &Perm,
    gamma_table: &CosetTable,
) -> Result<ExtensionSolution, PermError> {
    let idx = |l: &str| lambda.gen_index(l).ok_or_else(|| PermError::MissingGenerator(l.to_string()));
    let (gj, gu, gv, gb) = (idx("j")?, idx("u")?, idx("v")?, idx("b")?);
    let id = u.identity_like();
    let u3 = group_closure(&[u.clone(), jb.clone(), bj.clone()], &id, DEFAULT_CLOSURE_CAP)?;
    let twists = quotient_twists(gamma_table);
    let u_inv2 = u.inverse().pow(2);
    let v = bj.compose(bj).compose(&u_inv2);

    let mut solutions: Vec<Vec<GElem>> = Vec::new();
    for x in &u3.elements {
        let b = x.inverse().compose(jb);
        if b.compose(x) != *bj {
            continue;
        }
        let mut images = vec![GElem::new(id.clone(), 0); lambda.ngens()];
        images[gj] = GElem::new(x.clone(), twists[gj]);
        images[gu] = GElem::new(u.clone(), twists[gu]);
        images[gv] = GElem::new(v.clone(), twists[gv]);
        images[gb] = GElem::new(b, twists[gb]);
        let gid = images[0].identity_like();
        let ok = lambda
            .relators
            .iter()
            .all(|r| evaluate_word(r, &images, &gid).map(|e| e.is_identity()).unwrap_or(false));
        if ok {
            solutions.push(images);
        }
    }
    let found = solutions.len();
    let best = solutions
        .into_iter()
        .min_by(|a, b| {
            let ka: Vec<&Perm> = a.iter().map(|e| &e.perm).collect();
            let kb: Vec<&Perm> = b.iter().map(|e| &e.perm).collect();
            ka.cmp(&kb)
        })
        .ok_or_else(|| PermError::NoExtension(lambda.name.clone()))?;
    let map = verify_homomorphism(lambda, best)?;
    Ok(ExtensionSolution { map, solutions_found: found })
}

/// ℤ/3 labels of the generators for a normal index-3 subgroup: the first
/// generator moving coset 0 gets twist 1 and the others are read off from
/// the regular action of the quotient on the cosets.
pub fn quotient_twists(table: &CosetTable) -> Vec<u8> {
    assert_eq!(table.n, 3, "expects an index-3 coset table");
    let k = table.ngens;
    let mut twists = vec![0u8; k];
    let Some(t) = (0..k).find(|&g| table.act(0, g) != 0) else {
        return twists;
    };
    // Powers of t enumerate the cosets: coset (0·t^m) ↔ m.
    let mut label = [0u8; 3];
    let mut c = 0;
    for m in 0..3u8 {
        label[c] = m;
        c = table.act(c, t);
    }
    for (g, tw) in twists.iter_mut().enumerate() {
        *tw = label[table.act(0, g)];
    }
    twists
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let p = Perm::from_cycles(PHI_U, 28).unwrap();
        assert_eq!(p.to_string(), PHI_U);
        assert_eq!(Perm::identity(5).to_string(), "()");
        assert!(Perm::from_cycles("(1,2)(2,3)", 4).is_err());
        assert!(Perm::from_cycles("(1,9)", 4).is_err());
    }

    #[test]
    fn orders_of_paper_images() {
        let [u, jb, bj] = gamma_images();
        assert_eq!(element_order(&u), 4);
        assert_eq!(element_order(&jb), 8);
        assert_eq!(element_order(&bj), 8);
        assert_eq!(element_order(&Perm::identity(28)), 1);
        assert_eq!(order_by_powers(&jb), 8);
    }

    #[test]
    fn closure_small() {
        let id = Perm::identity(3);
        let g = group_closure(&[id.clone()], &id, 10).unwrap();
        assert_eq!(g.order(), 1);
        let t = Perm::from_cycles("(1,2)", 3).unwrap();
        let c = Perm::from_cycles("(1,2,3)", 3).unwrap();
        let s3 = group_closure(&[t, c], &id, 10).unwrap();
        assert_eq!(s3.order(), 6);
        let s4 = [Perm::from_cycles("(1,2)", 4).unwrap(), Perm::from_cycles("(1,2,3,4)", 4).unwrap()];
        assert!(matches!(
            group_closure(&s4, &Perm::identity(4), 10),
            Err(PermError::CapExceeded { cap: 10, .. })
        ));
    }

    #[test]
    fn closure_u33() {
        let [u, jb, bj] = gamma_images();
        let g = group_closure(&[u, jb, bj], &Perm::identity(28), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.order(), U33_ORDER);
        let a = &g.elements[17];
        let b = &g.elements[4000];
        assert!(g.contains(&a.compose(b)));
        assert!(g.contains(&a.inverse()));
    }
}
