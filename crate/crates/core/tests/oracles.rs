//! Library results checked against brute-force computations on small
//! finite groups, where everything can be enumerated directly.

use std::collections::HashSet;

use num_bigint::BigInt;
use stover::cosetrw::{rewrite_kernel_presentation, todd_coxeter, tietze_simplify, TietzeOptions};
use stover::eisen::module_structure;
use stover::fpcore::{parse_presentation, GroupElement, Word};
use stover::nilquot::gamma2_over_gamma3;
use stover::permgrp::{group_closure, Perm, DEFAULT_CLOSURE_CAP};
use stover::repchar::{conjugacy_classes, dixon_character_table, IMat, MatGroup, MatRep};
use stover::zlat::{abelian_invariants, IntMat};

fn perm(cycles: &str, degree: usize) -> Perm {
    Perm::from_cycles(cycles, degree).unwrap()
}

fn images(f: impl Fn(usize) -> usize, degree: usize) -> Perm {
    Perm::from_images((0..degree).map(|i| f(i) as u16).collect()).unwrap()
}

struct Example {
    presentation: &'static str,
    gens: Vec<Perm>,
    order: usize,
}

fn examples() -> Vec<Example> {
    vec![
        Example { presentation: "<a, b | a^2, b^3, (a*b)^5>", gens: vec![perm("(1,2)(3,4)", 5), perm("(1,3,5)", 5)], order: 60 },
        Example { presentation: "<a, b | a^2, b^3, (a*b)^4>", gens: vec![perm("(1,2)", 4), perm("(2,3,4)", 4)], order: 24 },
        Example {
            presentation: "<r, s | r^8, s^2, (s*r)^2>",
            gens: vec![images(|i| (i + 1) % 8, 8), images(|i| (8 - i) % 8, 8)],
            order: 16,
        },
        // Heisenberg group mod 3 acting affinely on 𝔽₃²
        Example {
            presentation: "<x, y | x^3, y^3, [x,y]^3, [[x,y],x], [[x,y],y]>",
            gens: vec![images(|i| (i / 3 + 1) % 3 * 3 + i % 3, 9), images(|i| i / 3 * 3 + (i % 3 + i / 3) % 3, 9)],
            order: 27,
        },
    ]
}

fn commutator(a: &Perm, b: &Perm) -> Perm {
    a.inverse().compose(&b.inverse()).compose(a).compose(b)
}

/// Subgroup generated by all `[a, b]`, `a ∈ xs`, `b ∈ ys`.
fn commutator_subgroup(xs: &[Perm], ys: &[Perm]) -> Vec<Perm> {
    let id = Perm::identity(xs[0].degree());
    let mut gens: Vec<Perm> = xs.iter().flat_map(|a| ys.iter().map(move |b| commutator(a, b))).collect();
    gens.sort();
    gens.dedup();
    group_closure(&gens, &id, DEFAULT_CLOSURE_CAP).unwrap().elements
}

#[test]
fn coset_enumeration_matches_closure_order() {
    for ex in examples() {
        let p = parse_presentation(ex.presentation).unwrap();
        let id = Perm::identity(ex.gens[0].degree());
        let closure = group_closure(&ex.gens, &id, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(closure.order(), ex.order, "{}", ex.presentation);
        let t = todd_coxeter(&p, &[], 100_000);
        assert_eq!(t.index(), Some(ex.order), "{}", ex.presentation);
        // index of ⟨first generator⟩ is order / element order
        let a_order = stover::permgrp::element_order(&ex.gens[0]) as usize;
        assert_eq!(todd_coxeter(&p, &[Word::gen(0)], 100_000).index(), Some(ex.order / a_order));
    }
}

#[test]
fn gamma2_over_gamma3_matches_lower_central_series() {
    for ex in examples() {
        let p = parse_presentation(ex.presentation).unwrap();
        let id = Perm::identity(ex.gens[0].degree());
        let g = group_closure(&ex.gens, &id, DEFAULT_CLOSURE_CAP).unwrap().elements;
        let g2 = commutator_subgroup(&g, &g);
        let g3 = commutator_subgroup(&g2, &g);
        let inv = gamma2_over_gamma3(&p).unwrap().invariants;
        assert_eq!(inv.free_rank, 0);
        let product: u64 = inv.torsion.iter().product();
        assert_eq!(product as usize, g2.len() / g3.len(), "{}", ex.presentation);
        // H₁ = G/γ₂ as well
        let h1 = abelian_invariants(&p);
        assert_eq!(h1.torsion.iter().product::<u64>() as usize, ex.order / g2.len(), "{}", ex.presentation);
    }
}

#[test]
fn schreier_generator_count() {
    // kernel of a surjection onto a group of order k: k(n−1)+1 free generators
    for ex in examples().into_iter().take(3) {
        let p = parse_presentation(ex.presentation).unwrap();
        let table = todd_coxeter(&p, &[], 100_000);
        let stover::cosetrw::EnumerationResult::Complete(t) = table else { panic!("incomplete") };
        let free = parse_presentation("<a, b | >").unwrap();
        let sub = rewrite_kernel_presentation(&t, &free, "K");
        assert_eq!(sub.pres.ngens(), ex.order * (2 - 1) + 1);
        assert!(sub.pres.relators.is_empty());
    }
    // ⟨b⟩ ≤ A₅ has index 20; rewriting plus Tietze must recover ℤ/3
    let p = parse_presentation("<a, b | a^2, b^3, (a*b)^5>").unwrap();
    let t = match todd_coxeter(&p, &[Word::gen(1)], 1000) {
        stover::cosetrw::EnumerationResult::Complete(t) => t,
        _ => panic!("incomplete"),
    };
    assert_eq!(t.n, 20);
    let sub = rewrite_kernel_presentation(&t, &p, "H");
    assert_eq!(sub.pres.ngens(), 20 * (2 - 1) + 1);
    let s = tietze_simplify(&sub, &TietzeOptions::default());
    // the stabilizer of a coset is cyclic of order 3
    let h1 = abelian_invariants(&s.result.pres);
    assert_eq!((h1.torsion, h1.free_rank), (vec![3], 0));
}

fn perm_matrix(p: &Perm) -> IMat {
    let n = p.degree();
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (p.image(j) == i) as i64).collect()).collect();
    IMat::from_rows(&rows)
}

#[test]
fn character_table_of_small_groups() {
    for ex in examples() {
        let id = Perm::identity(ex.gens[0].degree());
        let g = group_closure(&ex.gens, &id, DEFAULT_CLOSURE_CAP).unwrap().elements;
        let mut seen = HashSet::new();
        let mut classes = 0;
        for x in &g {
            if seen.insert(x.clone()) {
                classes += 1;
                for y in &g {
                    seen.insert(y.inverse().compose(x).compose(y));
                }
            }
        }

        let mats: Vec<IMat> = ex.gens.iter().map(perm_matrix).collect();
        let labels: Vec<String> = (0..mats.len()).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let rep = MatRep::new("G", &refs, mats).unwrap();
        let mg = MatGroup::enumerate(&rep, 10_000).unwrap();
        assert_eq!(mg.order(), ex.order);
        let cd = conjugacy_classes(&mg);
        assert_eq!(cd.count(), classes, "{}", ex.presentation);
        let t = dixon_character_table(&mg, &cd, 1_000_000).unwrap();
        assert_eq!(t.degrees.iter().map(|d| d * d).sum::<i64>() as usize, ex.order);
        assert_eq!(t.degrees.iter().filter(|&&d| d == 1).count(), ex.order / commutator_subgroup(&g, &g).len());
    }
}

fn companion_blocks(m: usize) -> IntMat {
    let n = 2 * m;
    let mut j = IntMat::zeros(n, n);
    for b in 0..m {
        j.set(2 * b, 2 * b + 1, BigInt::from(1));
        j.set(2 * b + 1, 2 * b, BigInt::from(-1));
        j.set(2 * b + 1, 2 * b + 1, BigInt::from(-1));
    }
    j
}

#[test]
fn module_structure_of_conjugated_companion_blocks() {
    let m = 4;
    let n = 2 * m;
    let j0 = companion_blocks(m);
    let mut p = IntMat::identity(n);
    let mut q = IntMat::identity(n);
    for (i, k, c) in [(0, 3, 2), (5, 1, -1), (7, 2, 3), (2, 6, 1), (4, 0, -2), (1, 7, 1)] {
        let mut e = IntMat::identity(n);
        e.set(i, k, BigInt::from(c));
        let mut ei = IntMat::identity(n);
        ei.set(i, k, BigInt::from(-c));
        p = p.mul(&e);
        q = ei.mul(&q);
    }
    assert_eq!(p.mul(&q), IntMat::identity(n));
    let j = p.mul(&j0).mul(&q);
    let module = module_structure(&j).unwrap();
    assert!(module.determinant == BigInt::from(1) || module.determinant == BigInt::from(-1));
    let c = &module.change_of_basis;
    // in the new basis J acts as the same companion blocks
    assert_eq!(c.mul(&j), j0.mul(c));

    // −J has order 6 and is rejected
    assert!(module_structure(&j.scale(&BigInt::from(-1))).is_err());
}
