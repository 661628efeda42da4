use std::collections::BTreeMap;

use dualbench::algebra::{
    add_bounds, direct_power, direct_product, homomorphisms, is_homomorphism, is_isomorphic, remove_bounds,
    subalgebra_generated, subuniverse, trivial_algebra, validate_variety, FiniteAlgebra,
};
use dualbench::generators::{demorgan_d, kleene_k, stone_s, two};
use dualbench::members::enumerate_members;
use dualbench::parse::parse_term;
use dualbench::profile::profile;
use dualbench::satisfy::eval_term;
use dualbench::{Op, Signature};
use proptest::prelude::*;

fn el(a: &FiniteAlgebra, label: &str) -> usize {
    a.element(label).unwrap_or_else(|| panic!("{} has no element {label}", a.name()))
}

fn eval(a: &FiniteAlgebra, term: &str, env: &[(&str, usize)]) -> usize {
    let env: BTreeMap<String, usize> = env.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    eval_term(a, &parse_term(term).unwrap(), &env).unwrap()
}

/// Every map `A → B`, checked op by op without the library's search.
fn brute_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let (n, m) = (a.size(), b.size());
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    'maps: for code in 0..m.pow(n as u32) {
        let mut c = code;
        for v in map.iter_mut() {
            *v = c % m;
            c /= m;
        }
        for &op in a.signature().ops() {
            let ok = match op.arity() {
                0 => map[a.apply(op, &[])] == b.apply(op, &[]),
                1 => (0..n).all(|x| map[a.apply(op, &[x])] == b.apply(op, &[map[x]])),
                _ => (0..n).all(|x| (0..n).all(|y| map[a.apply(op, &[x, y])] == b.apply(op, &[map[x], map[y]]))),
            };
            if !ok {
                continue 'maps;
            }
        }
        out.push(map.clone());
    }
    out.sort();
    out
}

#[test]
fn kleene_excluded_middle_fails_at_a() {
    let k = kleene_k();
    let a = el(&k, "a");
    assert_eq!(eval(&k, "~x \\/ x", &[("x", a)]), a);
}

#[test]
fn variable_evaluates_to_its_value() {
    let d = demorgan_d();
    for c in 0..d.size() {
        assert_eq!(eval(&d, "x", &[("x", c)]), c);
    }
}

#[test]
fn product_meet_is_pointwise() {
    let sq = direct_power(&two(), 2).unwrap();
    assert_eq!(sq.size(), 4);
    let (x, y) = (el(&sq, "(1,0)"), el(&sq, "(0,1)"));
    assert_eq!(sq.meet(x, y), el(&sq, "(0,0)"));
    assert_eq!(eval(&sq, "x /\\ y", &[("x", x), ("y", y)]), el(&sq, "(0,0)"));
}

#[test]
fn homomorphisms_of_generators() {
    let t = two();
    let homs = homomorphisms(&t, &t).unwrap();
    assert_eq!(homs.len(), 1);
    assert_eq!(homs[0].map, vec![0, 1]);

    let d = demorgan_d();
    let mut lib: Vec<Vec<usize>> = homomorphisms(&d, &d).unwrap().into_iter().map(|h| h.map).collect();
    lib.sort();
    let brute = brute_homs(&d, &d);
    assert_eq!(lib, brute);
    let (a, b) = (el(&d, "a"), el(&d, "b"));
    let mut swap: Vec<usize> = (0..4).collect();
    swap.swap(a, b);
    let id: Vec<usize> = (0..4).collect();
    let mut expected = vec![id, swap];
    expected.sort();
    assert_eq!(brute, expected);

    let triv = trivial_algebra(Signature::Bdl);
    assert!(homomorphisms(&triv, &t).unwrap().is_empty());
}

#[test]
fn generated_subalgebras() {
    let d = demorgan_d();
    let (sub, emb) = subalgebra_generated(&d, &[]).unwrap();
    assert_eq!(sub.size(), 2);
    let mut image = emb.map.clone();
    image.sort();
    assert_eq!(image, vec![el(&d, "0"), el(&d, "1")]);

    let k = kleene_k();
    let (sub, _) = subalgebra_generated(&k, &[el(&k, "a")]).unwrap();
    assert_eq!(sub.size(), 3);

    let all: Vec<usize> = (0..d.size()).collect();
    let (sub, _) = subalgebra_generated(&d, &all).unwrap();
    assert!(is_isomorphic(&sub, &d).is_some());
}

#[test]
fn powers_and_products() {
    assert!(direct_power(&two(), 0).unwrap().is_trivial());
    let k = kleene_k();
    assert_eq!(direct_product(&[&k, &k], Signature::Ka).unwrap().size(), 9);
}

#[test]
fn isomorphism_checks() {
    let sq = direct_power(&two(), 2).unwrap();
    let shuffled = sq.permuted(&[2, 0, 3, 1]).unwrap();
    let iso = is_isomorphic(&sq, &shuffled).expect("permuted copy is isomorphic");
    assert!(is_homomorphism(&sq, &shuffled, &iso.map));
    assert!(is_isomorphic(&two(), &trivial_algebra(Signature::Bdl)).is_none());
    let d = demorgan_d();
    let k4 = add_bounds(&kleene_k().reduct(Signature::Kl).unwrap()).unwrap();
    assert_eq!(k4.size(), 5);
    assert!(is_isomorphic(&d, &k4.reduct(Signature::Dma).unwrap()).is_none());
}

#[test]
fn enumerated_members() {
    let bdl = enumerate_members(profile(Signature::Bdl), 1, 4).unwrap();
    assert_eq!(bdl.len(), 2);
    assert!(bdl.iter().any(|a| a.is_trivial()));
    assert!(bdl.iter().any(|a| is_isomorphic(a, &two()).is_some()));

    let dma = enumerate_members(profile(Signature::Dma), 1, 4).unwrap();
    let d = demorgan_d();
    let chain3 = subalgebra_generated(&d, &[el(&d, "a")]).unwrap().0;
    let pair = subalgebra_generated(&d, &[]).unwrap().0;
    for want in [&d, &chain3, &pair] {
        assert!(dma.iter().any(|a| is_isomorphic(a, want).is_some()), "missing {}", want.name());
    }
    for sig in Signature::ALL {
        for a in enumerate_members(profile(sig), 2, 8).unwrap() {
            assert_eq!(validate_variety(sig, &a).unwrap(), None, "{} in {sig}", a.name());
        }
    }
}

#[test]
fn bounds_added_and_removed() {
    let one = trivial_algebra(Signature::Dl);
    let c3 = add_bounds(&one).unwrap();
    assert_eq!(c3.signature(), Signature::Bdl);
    assert_eq!(c3.size(), 3);
    assert!((0..3).all(|x| (0..3).all(|y| c3.leq(x, y) || c3.leq(y, x))));

    let d = add_bounds(&demorgan_d().reduct(Signature::Dml).unwrap()).unwrap();
    let c3_clause = dualbench::registry::ClauseId::C3.clause();
    assert!(dualbench::satisfy::satisfies(&d, c3_clause).unwrap().holds());

    // Five-element chain 0 < 1 < 2 < 3 < 4 with negation reversing it.
    let chain5 = FiniteAlgebra::from_fn("chain5", Signature::Ka, 5, |op, args| match (op, args) {
        (Op::Meet, [x, y]) => *x.min(y),
        (Op::Join, [x, y]) => *x.max(y),
        (Op::Neg, [x]) => 4 - x,
        (Op::Bot, []) => 0,
        (Op::Top, []) => 4,
        _ => unreachable!(),
    })
    .unwrap();
    let kb = add_bounds(&kleene_k().reduct(Signature::Kl).unwrap()).unwrap();
    assert!(is_isomorphic(&kb, &chain5).is_some());
    assert!(is_isomorphic(&remove_bounds(&kb).unwrap(), &kleene_k().reduct(Signature::Kl).unwrap()).is_some());
}

#[test]
fn variety_validation() {
    assert_eq!(validate_variety(Signature::Dma, &demorgan_d()).unwrap(), None);
    let d = as_ka(&demorgan_d());
    let v = validate_variety(Signature::Ka, &d).unwrap().expect("D is not a Kleene algebra");
    let text = v.describe(&d);
    assert!(text.contains('a') && text.contains('b'), "{text}");
    assert_eq!(validate_variety(Signature::Bdl, &trivial_algebra(Signature::Bdl)).unwrap(), None);
    assert_eq!(validate_variety(Signature::St, &stone_s()).unwrap(), None);
}

/// D with its signature relabelled as a Kleene algebra, tables unchanged.
fn as_ka(d: &FiniteAlgebra) -> FiniteAlgebra {
    FiniteAlgebra::from_fn("D", Signature::Ka, d.size(), |op, args| d.apply(op, args))
        .unwrap()
        .with_labels(d.labels().to_vec())
        .unwrap()
}

fn generators() -> Vec<FiniteAlgebra> {
    vec![two(), stone_s(), demorgan_d(), kleene_k()]
}

proptest! {
    #[test]
    fn generated_subuniverse_is_closed(which in 0usize..4, seed in proptest::collection::vec(0usize..16, 0..4)) {
        let base = &generators()[which];
        let a = direct_power(base, 2).unwrap();
        let seed: Vec<usize> = seed.into_iter().map(|s| s % a.size()).collect();
        let u = subuniverse(&a, seed.iter().copied());
        for s in &seed {
            prop_assert!(u.contains(s));
        }
        for &op in a.signature().ops() {
            match op.arity() {
                0 => prop_assert!(u.contains(&a.apply(op, &[]))),
                1 => for &x in &u { prop_assert!(u.contains(&a.apply(op, &[x]))) },
                _ => for &x in &u { for &y in &u { prop_assert!(u.contains(&a.apply(op, &[x, y]))) } },
            }
        }
        let (sub, emb) = subalgebra_generated(&a, &seed).unwrap();
        prop_assert_eq!(sub.size(), u.len());
        prop_assert!(is_homomorphism(&sub, &a, &emb.map));
    }

    #[test]
    fn permuted_copies_are_isomorphic(which in 0usize..4, perm in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle()) {
        let a = direct_power(&generators()[which], 2).unwrap();
        let order: Vec<usize> = perm.into_iter().filter(|&i| i < a.size()).collect();
        prop_assume!(order.len() == a.size());
        let b = a.permuted(&order).unwrap();
        let iso = is_isomorphic(&a, &b);
        prop_assert!(iso.is_some());
        prop_assert!(is_homomorphism(&a, &b, &iso.unwrap().map));
    }

    #[test]
    fn library_homs_match_brute_force(i in 0usize..4, j in 0usize..4) {
        let gens = generators();
        let sig = gens[i].signature();
        let target = dualbench::generators::as_signature(&gens[j], sig);
        prop_assume!(target.is_ok());
        let target = target.unwrap();
        let mut lib: Vec<Vec<usize>> = homomorphisms(&gens[i], &target).unwrap().into_iter().map(|h| h.map).collect();
        lib.sort();
        prop_assert_eq!(lib, brute_homs(&gens[i], &target));
    }
}
