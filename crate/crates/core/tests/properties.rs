mod common;

fn check(suite: fn(u32) -> common::SuiteResult) {
    if let Err(e) = suite(256) {
        panic!("{e}");
    }
}

#[test]
fn parser_round_trip() {
    check(common::parser_round_trip);
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    check(common::smith_verification);
}

#[test]
fn isotypic_projectors_are_idempotent() {
    check(common::projector_idempotence);
}

#[test]
fn pfaffian_squared_is_determinant() {
    check(common::pfaffian_squared);
}

#[test]
fn groebner_s_polynomials_reduce_to_zero() {
    check(common::groebner_s_polynomials);
}

#[test]
fn tietze_preserves_abelian_invariants() {
    check(common::tietze_invariants);
}
