//! Runs the whole pipeline in a fresh cache directory plus the property
//! suites, and prints one PASS/FAIL line per acceptance criterion.
//!
//! Criterion 7 (the quadric) is known to fail: the printed quadric matrix
//! and point are not compatible with the printed kernel basis. The test
//! asserts that it still fails in exactly that way, and that everything
//! else passes.

mod common;

use std::time::Instant;

use stover::pipeline::{run, Config, StageReport, Target};

const KNOWN_FAILURES: [usize; 1] = [7];

struct Criterion {
    number: usize,
    title: &'static str,
    ids: &'static [&'static str],
    /// Stages whose combined time must stay below the limit.
    stages: &'static [&'static str],
    limit_ms: u64,
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        number: 1,
        title: "φ-stage: verified extension, image order 18144, U₃(3) closure 6048",
        ids: &["phi.extension", "phi.image_order", "phi.u33_order"],
        stages: &["phi"],
        limit_ms: 60_000,
    },
    Criterion {
        number: 2,
        title: "subgroups: one proper class of index ≤ 3, containing u, jb, bj",
        ids: &["subgroups.proper_classes", "subgroups.contains", "subgroups.preimage"],
        stages: &["subgroups"],
        limit_ms: 60_000,
    },
    Criterion {
        number: 3,
        title: "H₁(Π) = ℤ¹⁴ after two-stage rewriting",
        ids: &["rewrite.gamma_onto", "rewrite.pi_index", "rewrite.tietze", "h1.invariants"],
        stages: &["rewrite", "h1"],
        limit_ms: 30 * 60_000,
    },
    Criterion {
        number: 4,
        title: "γ₂Π/γ₃Π = ℤ/4 ⊕ ℤ²⁸, real kernel dimension 28",
        ids: &["nilq.gamma2", "nilq.real_kernel"],
        stages: &["nilq"],
        limit_ms: 2 * 3_600_000,
    },
    Criterion {
        number: 5,
        title: "characters: 14 classes, degrees, orthogonality, commutants, χ₄χ₅",
        ids: &[
            "chars.classes",
            "chars.degrees",
            "chars.orthogonality",
            "chars.wedge_commutant",
            "chars.wedge_ranks",
            "chars.tensor_commutant",
            "chars.tensor_ranks",
            "chars.chi4chi5",
        ],
        stages: &["chars"],
        limit_ms: 10 * 60_000,
    },
    Criterion {
        number: 6,
        title: "kernel: χ₃-isotypic part of rank 7 equal to span (N, 2I₇)ᵀ",
        ids: &["kernel.rank", "kernel.span"],
        stages: &["kernel"],
        limit_ms: 60_000,
    },
    Criterion {
        number: 7,
        title: "quadric: common divisor of the sub-Pfaffians equals the printed Q, vanishes at the printed point",
        ids: &["quadric.divides", "quadric.matrix", "quadric.cofactor_rank", "quadric.seed_value", "quadric.leading_minors", "quadric.printed_minors"],
        stages: &["quadric"],
        limit_ms: 60_000,
    },
    Criterion {
        number: 8,
        title: "no decomposables: Nullstellensatz certificate, negative control fails",
        ids: &["quadric.no_decomposables", "quadric.negative_control", "quadric.f31"],
        stages: &["quadric"],
        limit_ms: 10 * 60_000,
    },
    Criterion {
        number: 9,
        title: "Lagrangian: 10 quadric points with 4-dim support and witness, σ-image test, traces, span 49",
        ids: &["lagrangian.points", "lagrangian.sigma", "lagrangian.traces", "lagrangian.algebra_span"],
        stages: &["lagrangian"],
        limit_ms: 5 * 60_000,
    },
    Criterion {
        number: 10,
        title: "Albanese: J² + J + I = 0, (x²+x+1)⁷, unimodular ℤ[α]-basis, Π′/Π′_tors trivial",
        ids: &["albanese.order3", "albanese.charpoly", "albanese.basis", "albanese.piprime_index", "albanese.piprime_trivial"],
        stages: &["albanese"],
        limit_ms: 3_600_000,
    },
    Criterion {
        number: 11,
        title: "bookkeeping: 28 = k + 2d with k = 14, d = 7, invariant tables consistent",
        ids: &["report.expected_tables", "report.elimination", "report.surface_table", "report.albanese_table"],
        stages: &["report"],
        limit_ms: 1_000,
    },
];

fn stage_ms(rows: &[StageReport], stage: &str) -> u64 {
    rows.iter().find(|r| r.name == stage).map_or(0, |r| r.ms)
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Config { cache_dir: dir.path().to_path_buf(), ..Config::default() };
    let rows = run(Target::All, &cfg).expect("pipeline runs to completion");

    let mut outcomes = Vec::new();
    for c in &CRITERIA {
        let mut problems = Vec::new();
        for id in c.ids {
            match rows.iter().find(|r| r.id == *id) {
                Some(r) if r.matched => {}
                Some(r) => problems.push(format!("{id}: expected {} computed {}", r.expected, r.computed)),
                None => problems.push(format!("{id}: missing")),
            }
        }
        let ms: u64 = c.stages.iter().map(|s| stage_ms(&rows, s)).sum();
        if ms > c.limit_ms {
            problems.push(format!("took {ms} ms, limit {} ms", c.limit_ms));
        }
        outcomes.push((c.number, c.title.to_string(), ms, problems));
    }

    let started = Instant::now();
    let mut problems = Vec::new();
    for (name, suite) in common::SUITES {
        if let Err(e) = suite(100) {
            problems.push(format!("{name}: {e}"));
        }
    }
    let ms = started.elapsed().as_millis() as u64;
    if ms > 120_000 {
        problems.push(format!("took {ms} ms, limit 120000 ms"));
    }
    outcomes.push((12, "property suites, 100 cases each".to_string(), ms, problems));

    println!();
    for (n, title, ms, problems) in &outcomes {
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {status}  {title}  ({ms} ms)");
        for p in problems {
            println!("               {p}");
        }
    }

    for (n, _, _, problems) in &outcomes {
        if KNOWN_FAILURES.contains(n) {
            assert!(!problems.is_empty(), "criterion {n} now passes; update KNOWN_FAILURES and the notes");
        } else {
            assert!(problems.is_empty(), "criterion {n} failed: {problems:?}");
        }
    }
    // the known failure is exactly the matrix and point mismatch
    let seven = &outcomes.iter().find(|o| o.0 == 7).unwrap().3;
    assert_eq!(seven.len(), 2, "{seven:?}");
    assert!(seven[0].starts_with("quadric.matrix") && seven[1].starts_with("quadric.seed_value"));
}
