use dualbench::admit::{
    admissible_clause, admissible_quasi_exact, classify_completeness, dual_refutation, verify_lemma_suite, Admissibility,
    Bounds,
};
use dualbench::algebra::{direct_power, trivial_algebra, FiniteAlgebra};
use dualbench::free::free_algebra;
use dualbench::generators::{demorgan_d, kleene_k, two};
use dualbench::members::enumerate_members;
use dualbench::membership::{member_is_free, member_isp_free, Route};
use dualbench::parse::parse_clause;
use dualbench::profile::profile;
use dualbench::random::{random_clause, random_quasi_identity, ClauseShape};
use dualbench::registry::ClauseId;
use dualbench::satisfy::satisfies;
use dualbench::term::Clause;
use dualbench::{Error, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn members(sig: Signature) -> Vec<FiniteAlgebra> {
    enumerate_members(profile(sig), 2, 8).unwrap()
}

#[test]
fn is_membership_examples() {
    let sq = direct_power(&two(), 2).unwrap();
    let v = member_is_free(Signature::Bdl, &sq).unwrap();
    assert!(!v.result && !v.disagreement);
    let clause = v.route(Route::Clause).unwrap();
    assert_eq!(clause.result, Some(false));
    assert!(clause.evidence.contains("C2"), "{}", clause.evidence);

    for b in members(Signature::St) {
        assert_eq!(member_is_free(Signature::St, &b).unwrap().result, !b.is_trivial(), "{}", b.name());
    }
    assert!(!member_is_free(Signature::Dma, &demorgan_d()).unwrap().result);
    for b in members(Signature::Dl) {
        assert!(member_is_free(Signature::Dl, &b).unwrap().result, "{}", b.name());
    }
}

#[test]
fn isp_membership_examples() {
    assert!(!member_isp_free(Signature::Ka, &kleene_k()).unwrap().result);
    assert!(member_isp_free(Signature::Dma, &trivial_algebra(Signature::Dma)).unwrap().result);
    for b in members(Signature::Bdl) {
        assert!(member_isp_free(Signature::Bdl, &b).unwrap().result, "{}", b.name());
    }
}

#[test]
fn admissible_but_not_valid() {
    let v = admissible_clause(Signature::Bdl, ClauseId::C2.clause(), 2, 8).unwrap();
    assert_eq!(v.verdict, Admissibility::Admissible);

    let v = admissible_clause(Signature::Ka, ClauseId::C8.clause(), 2, 8).unwrap();
    assert_eq!(v.verdict, Admissibility::Admissible);
    assert!(!satisfies(&kleene_k(), ClauseId::C8.clause()).unwrap().holds());

    let v = admissible_clause(Signature::Dma, ClauseId::C6.clause(), 2, 8).unwrap();
    assert_eq!(v.verdict, Admissibility::Admissible);
    assert!(!satisfies(&demorgan_d(), ClauseId::C6.clause()).unwrap().holds());
}

#[test]
fn collapse_clause_is_refuted_by_two() {
    let c = parse_clause("x = y => false").unwrap();
    let v = admissible_clause(Signature::Bdl, &c, 2, 8).unwrap();
    assert_eq!(v.verdict, Admissibility::NotAdmissible);
    let w = v.counterexample.unwrap();
    assert_eq!(w.size, 2);
    // The premise must hold, so both variables take the same value.
    assert_eq!(w.assignment, "x:=0, y:=0");
}

#[test]
fn exact_quasi_identities() {
    let q = parse_clause("x /\\ y = bot => x = bot").unwrap();
    assert!(!admissible_quasi_exact(Signature::Bdl, &q).unwrap());
    let t = parse_clause("true => x = x").unwrap();
    for sig in [Signature::Bdl, Signature::Dl, Signature::St] {
        assert!(admissible_quasi_exact(sig, &t).unwrap(), "{sig}");
    }
    match admissible_quasi_exact(Signature::Ka, ClauseId::C8.clause()) {
        Ok(v) => assert!(v),
        Err(Error::Budget { .. }) => {}
        Err(e) => panic!("{e}"),
    }
    assert!(admissible_quasi_exact(Signature::Bdl, ClauseId::C2.clause()).is_err());
}

#[test]
fn completeness_classes() {
    let r = classify_completeness(Signature::Bdl, 2, 8).unwrap();
    assert!(r.structurally_complete && !r.universally_complete && !r.non_negative_universally_complete);
    let r = classify_completeness(Signature::St, 2, 8).unwrap();
    assert!(r.non_negative_universally_complete && !r.universally_complete);
    let r = classify_completeness(Signature::Dl, 2, 8).unwrap();
    assert!(r.universally_complete);
    for sig in [Signature::Dma, Signature::Dml, Signature::Ka, Signature::Kl] {
        assert!(!classify_completeness(sig, 2, 8).unwrap().structurally_complete, "{sig}");
    }
}

#[test]
fn lemma_suites_agree() {
    let r = verify_lemma_suite(Signature::Dma, Bounds { max_power: 2, max_size: 8, n_cap: Some(4) }).unwrap();
    assert!(r.disagreements.is_empty());
    assert_eq!(r.verdicts.len(), 2 * r.members_checked);
    let r = verify_lemma_suite(Signature::Bdl, Bounds { max_power: 2, max_size: 6, n_cap: Some(3) }).unwrap();
    assert!(r.disagreements.is_empty());
}

#[test]
fn small_cap_is_bound_limited() {
    let r = verify_lemma_suite(Signature::Bdl, Bounds { max_power: 2, max_size: 8, n_cap: Some(0) }).unwrap();
    assert!(r.disagreements.is_empty());
    assert!(r.bound_limited > 0);
    let limited = r.verdicts.iter().find(|v| v.bound_limited).unwrap();
    assert!(limited.result);
    assert_eq!(limited.route(Route::Witness).unwrap().result, None);
}

#[test]
fn lemma_report_serializes() {
    let r = verify_lemma_suite(Signature::Ka, Bounds::default()).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    for key in ["profile", "bounds", "members_checked", "disagreements", "verdicts"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

/// Whether `c` holds in the free algebras on up to two generators.
fn holds_in_small_free(sig: Signature, c: &Clause) -> bool {
    let start = if profile(sig).bar_target.is_some() { 1 } else { 0 };
    (start..=2).all(|m| {
        let f = free_algebra(sig, m).unwrap();
        let a = f.unbounded_algebra().unwrap().reduct(sig).unwrap();
        satisfies(&a, c).unwrap().holds()
    })
}

fn small_shape() -> ClauseShape {
    ClauseShape { variables: 2, max_depth: 2, max_premises: 2, max_conclusions: 2, leq_rate: 0.4 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refutation_agrees_with_free_algebras(seed in any::<u64>(), sig in 0usize..7) {
        let sig = Signature::ALL[sig];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_clause(&mut rng, sig, &small_shape());
        let refuted = dual_refutation(sig, &c).unwrap().expect("two variables fit the search");
        match refuted {
            None => prop_assert!(holds_in_small_free(sig, &c), "admissible but fails in F(m): {}", c),
            Some(w) => {
                prop_assert!(member_is_free(sig, &w.algebra).unwrap().result);
                prop_assert!(!satisfies(&w.algebra, &c).unwrap().holds());
            }
        }
    }

    #[test]
    fn structural_completeness_of_bounded_lattices(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = ClauseShape { variables: 3, max_depth: 2, max_premises: 2, max_conclusions: 1, leq_rate: 0.4 };
        let q = random_quasi_identity(&mut rng, Signature::Bdl, &shape);
        let exact = admissible_quasi_exact(Signature::Bdl, &q).unwrap();
        let valid = members(Signature::Bdl).iter().all(|a| satisfies(a, &q).unwrap().holds());
        prop_assert_eq!(exact, valid, "{}", q);
        let verdict = admissible_clause(Signature::Bdl, &q, 2, 8).unwrap().verdict;
        prop_assert_eq!(verdict == Admissibility::Admissible, exact, "{}", q);
    }
}
