//! Randomized property suites, shared by `properties.rs` (standalone) and
//! `acceptance.rs`. Each suite runs `cases` random cases and reports the
//! first failure.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use stover::cosetrw::{tietze_simplify, SubgroupPresentation, TietzeOptions};
use stover::fpcore::{free_reduce, letter, parse_presentation, Presentation, Word};
use stover::linalg::Mat;
use stover::polyring::{groebner, Fp, GroebnerError, MonomialOrder, Poly};
use stover::repchar::{
    conjugacy_classes, dixon_character_table, isotypic_projector, IMat, MatGroup, MatRep,
};
use stover::wedgegeo::{pfaffian, wedge_matrix};
use stover::zlat::{abelian_invariants, smith_form, IntMat};

pub type SuiteResult = Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> SuiteResult {
    r.map_err(|e| e.to_string())
}

fn word_strategy(ngens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..ngens, any::<bool>()), 1..=max_len)
        .prop_map(|ls| free_reduce(ls.into_iter().map(|(g, inv)| letter(g, inv))))
}

fn presentation_strategy(max_gens: usize, max_rels: usize, max_len: usize) -> impl Strategy<Value = Presentation> {
    (1..=max_gens).prop_flat_map(move |n| {
        prop::collection::vec(word_strategy(n, max_len), 0..=max_rels).prop_map(move |rels| {
            let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            Presentation::new("P", &refs, rels.into_iter().filter(|w| !w.is_empty()).collect())
        })
    })
}

pub fn parser_round_trip(cases: u32) -> SuiteResult {
    finish(runner(cases).run(&presentation_strategy(5, 6, 12), |p| {
        let text = p.to_string();
        let back = parse_presentation(&text).map_err(|e| TestCaseError::fail(format!("{e}: {text}")))?;
        prop_assert_eq!(back.labels(), p.labels());
        prop_assert_eq!(&back.relators, &p.relators);
        Ok(())
    }))
}

/// Product of the first `k` invariant factors equals the gcd of all `k×k`
/// minors (determinantal divisors), computed independently here.
fn determinantal_divisor(a: &IntMat, k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n)
            .flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            }))
            .collect()
    }
    let mut g = BigInt::from(0);
    for rs in subsets(a.rows(), k) {
        for cs in subsets(a.cols(), k) {
            let rows: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect()).collect();
            g = num_integer::Integer::gcd(&g, &IntMat::from_rows(&rows).determinant());
        }
    }
    g
}

pub fn smith_verification(cases: u32) -> SuiteResult {
    let strat = (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r));
    finish(runner(cases).run(&strat, |rows| {
        let a = IntMat::from_rows(&rows);
        let sf = smith_form(&a);
        prop_assert!(sf.verify(&a), "U·A·V ≠ D for {:?}", rows);
        let f = sf.invariant_factors();
        let mut prod = BigInt::from(1);
        for k in 1..=a.rows().min(a.cols()) {
            let dk = determinantal_divisor(&a, k);
            if k <= f.len() {
                prod *= &f[k - 1];
                prop_assert_eq!(prod.clone(), dk, "d_{} for {:?}", k, rows);
            } else {
                prop_assert_eq!(dk, BigInt::from(0));
            }
        }
        Ok(())
    }))
}

fn perm_matrix(images: &[usize]) -> IMat {
    let n = images.len();
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (images[j] == i) as i64).collect()).collect();
    IMat::from_rows(&rows)
}

/// `P` and `P⁻¹` for a product of integral elementary matrices.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (IMat, IMat) {
    let mut p = IMat::identity(n);
    let mut q = IMat::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IMat::identity(n);
        e.e[i * n + j] = k;
        let mut ei = IMat::identity(n);
        ei.e[i * n + j] = -k;
        p = p.mul(&e);
        q = ei.mul(&q);
    }
    (p, q)
}

/// Isotypic projectors of a randomly conjugated S₄-representation:
/// idempotent, equivariant, with ranks summing to the dimension.
pub fn projector_idempotence(cases: u32) -> SuiteResult {
    let strat = (0usize..3, prop::collection::vec((0usize..16, 0usize..16, -2i64..=2), 0..6));
    finish(runner(cases).run(&strat, |(kind, ops)| {
        let perm = [perm_matrix(&[1, 0, 2, 3]), perm_matrix(&[1, 2, 3, 0])];
        let base: Vec<IMat> = perm
            .iter()
            .map(|m| match kind {
                0 => m.clone(),
                1 => m.kron(m),
                _ => wedge_matrix(m),
            })
            .collect();
        let n = base[0].n;
        let (p, pi) = unimodular(n, &ops);
        let gens: Vec<IMat> = base.iter().map(|m| p.mul(m).mul(&pi)).collect();
        let rep = MatRep::new("S4", &["s", "c"], gens.clone()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let g = MatGroup::enumerate(&rep, 1000).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(g.order(), 24);
        let cd = conjugacy_classes(&g);
        let t = dixon_character_table(&g, &cd, 1_000_000).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut total = 0;
        for (chi, &deg) in t.values.iter().zip(&t.degrees) {
            let pr = isotypic_projector(&g, &cd, chi, deg, &|m: &IMat| m.clone()).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(pr.mul(&pr), pr.clone());
            for r in &gens {
                let rm: Mat<BigRational> = r.to_mat();
                prop_assert_eq!(pr.mul(&rm), rm.mul(&pr));
            }
            total += pr.rank();
        }
        prop_assert_eq!(total, n);
        Ok(())
    }))
}

pub fn pfaffian_squared(cases: u32) -> SuiteResult {
    let strat = (1usize..=3).prop_flat_map(|k| prop::collection::vec((-9i64..=9, 1i64..=3), (2 * k) * (2 * k - 1) / 2));
    finish(runner(cases).run(&strat, |entries| {
        let mut n = 2;
        while n * (n - 1) / 2 < entries.len() {
            n += 2;
        }
        let mut a: Mat<BigRational> = Mat::zeros(n, n);
        let mut it = entries.iter();
        for i in 0..n {
            for j in i + 1..n {
                let &(num, den) = it.next().unwrap();
                let x = BigRational::new(BigInt::from(num), BigInt::from(den));
                a.set(i, j, x.clone());
                a.set(j, i, -x);
            }
        }
        let idx: Vec<usize> = (0..n).collect();
        let pf = pfaffian(&a, &idx);
        prop_assert_eq!(pf.clone() * pf, a.determinant());
        Ok(())
    }))
}

type F = Fp<32003>;

fn poly_strategy(nvars: usize) -> impl Strategy<Value = Poly<F>> {
    prop::collection::vec((prop::collection::vec(0u16..=2, nvars), -5i64..=5), 1..=4).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(m, c)| (m, F::new(c))).collect();
        Poly::from_terms(nvars, MonomialOrder::DegRevLex, terms)
    })
}

/// Every S-polynomial of the output reduces to zero and every input lies
/// in the ideal.
pub fn groebner_s_polynomials(cases: u32) -> SuiteResult {
    let strat = prop::collection::vec(poly_strategy(3), 1..=3);
    finish(runner(cases).run(&strat, |input| {
        let input: Vec<Poly<F>> = input.into_iter().filter(|p| !p.is_zero()).collect();
        match groebner(&input, MonomialOrder::DegRevLex, 20_000) {
            Ok(gb) => {
                prop_assert!(gb.verify());
                for f in &input {
                    prop_assert!(gb.contains(f));
                }
            }
            Err(GroebnerError::EffortCap(_)) => return Err(TestCaseError::reject("pair cap")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        Ok(())
    }))
}

/// Adding defined generators and simplifying preserves abelian invariants.
pub fn tietze_invariants(cases: u32) -> SuiteResult {
    let strat = presentation_strategy(3, 4, 8)
        .prop_flat_map(|p| {
            let n = p.ngens();
            (Just(p), prop::collection::vec(word_strategy(n, 5), 0..4))
        });
    finish(runner(cases).run(&strat, |(p, defs)| {
        // z_k = w_k, written as relators z_k⁻¹·w_k
        let n = p.ngens();
        let mut labels = p.labels();
        let mut rels = p.relators.clone();
        for (k, w) in defs.iter().enumerate() {
            labels.push(format!("z{k}"));
            rels.push(free_reduce(std::iter::once(letter(n + k, true)).chain(w.letters().iter().copied())));
        }
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let big = Presentation::new("Q", &refs, rels);
        let sub = SubgroupPresentation { gen_words: (0..big.ngens()).map(Word::gen).collect(), ambient: "Q".into(), pres: big.clone() };
        let s = tietze_simplify(&sub, &TietzeOptions::default());
        let before = abelian_invariants(&p);
        prop_assert_eq!(abelian_invariants(&big), before.clone());
        prop_assert_eq!(abelian_invariants(&s.result.pres), before);
        prop_assert!(s.result.pres.ngens() <= big.ngens());
        Ok(())
    }))
}

#[allow(dead_code)]
pub const SUITES: [(&str, fn(u32) -> SuiteResult); 6] = [
    ("parser round trip", parser_round_trip),
    ("Smith form transform verification", smith_verification),
    ("projector idempotence", projector_idempotence),
    ("Pfaffian squared equals determinant", pfaffian_squared),
    ("Gröbner S-polynomial reduction", groebner_s_polynomials),
    ("Tietze abelian-invariant preservation", tietze_invariants),
];
