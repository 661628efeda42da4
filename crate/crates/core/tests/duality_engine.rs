use dualbench::algebra::{
    direct_power, homomorphisms, is_homomorphism, is_isomorphic, subalgebra_generated, trivial_algebra, FiniteAlgebra,
};
use dualbench::duality::{dual_algebra, dual_morphism, dual_space, evaluation_map};
use dualbench::free::{count_free, free_algebra};
use dualbench::generators::{demorgan_d, kleene_k, stone_s, two, two_space};
use dualbench::members::enumerate_members;
use dualbench::membership::{embeds_into_free, embeds_into_free_power};
use dualbench::profile::profile;
use dualbench::search::SearchOutcome;
use dualbench::space::{space_power, StructuredSpace};
use dualbench::Signature;
use proptest::prelude::*;

mod common;
use common::{demorgan_tables, kleene_tables, monotone_count, stone_tables};

use common::MONOTONE;

#[test]
fn oracle_counts_are_stable() {
    for (n, &want) in MONOTONE.iter().enumerate() {
        assert_eq!(monotone_count(n as u32), want);
    }
    assert_eq!(stone_tables().endomorphisms(), 6);
    assert_eq!(demorgan_tables().endomorphisms(), 6);
    assert_eq!(kleene_tables().endomorphisms(), 6);
}

#[test]
fn free_sizes_match_oracles() {
    for n in 0..=4 {
        assert_eq!(free_algebra(Signature::Bdl, n).unwrap().size() as u64, MONOTONE[n], "F_bdl({n})");
    }
    assert_eq!(free_algebra(Signature::St, 1).unwrap().size() as u64, stone_tables().endomorphisms());
    assert_eq!(free_algebra(Signature::Dma, 1).unwrap().size() as u64, demorgan_tables().endomorphisms());
    assert_eq!(free_algebra(Signature::Ka, 1).unwrap().size() as u64, kleene_tables().endomorphisms());
    for n in 1..=3 {
        let dl = free_algebra(Signature::Dl, n).unwrap().unbounded_algebra().unwrap();
        assert_eq!(dl.size() as u64, MONOTONE[n] - 2);
    }
    assert_eq!(count_free(Signature::Bdl, 3, 10).unwrap(), None);
    assert_eq!(count_free(Signature::Bdl, 3, 20).unwrap(), Some(20));
}

#[test]
fn free_generators_are_free() {
    for sig in [Signature::Bdl, Signature::St, Signature::Dma, Signature::Ka] {
        let m = &profile(sig).generator;
        for n in 0..=2 {
            let f = free_algebra(sig, n).unwrap();
            let Ok(a) = f.to_algebra() else { continue };
            let gens = f.generators().to_vec();
            let (sub, _) = subalgebra_generated(a, &gens).unwrap();
            assert_eq!(sub.size(), a.size(), "F_{sig}({n}) is generated by its generators");
            let homs = homomorphisms(a, m).unwrap();
            let mut images: Vec<Vec<usize>> = homs.iter().map(|h| gens.iter().map(|&g| h.apply(g)).collect()).collect();
            images.sort();
            images.dedup();
            assert_eq!(homs.len(), images.len());
            assert_eq!(images.len(), m.size().pow(n as u32), "every assignment extends, F_{sig}({n})");
        }
    }
}

#[test]
fn dual_spaces_of_small_algebras() {
    let bdl = profile(Signature::Bdl);
    let sq = direct_power(&two(), 2).unwrap();
    let x = dual_space(bdl, &sq).unwrap().space;
    assert_eq!(x.size(), 2);
    assert!(!x.leq(0, 1) && !x.leq(1, 0));
    assert!(dual_space(bdl, &trivial_algebra(Signature::Bdl)).unwrap().space.is_empty());

    let dma = profile(Signature::Dma);
    let xd = dual_space(dma, &demorgan_d()).unwrap();
    assert_eq!(xd.space.size(), 2);
    assert!(!xd.space.leq(0, 1) && !xd.space.leq(1, 0));
    assert_eq!(xd.space.unary("f").unwrap(), &[1, 0]);

    let ka = profile(Signature::Ka);
    let xk = dual_space(ka, &kleene_k()).unwrap();
    assert_eq!(xk.space.size(), 1);
    assert_eq!(xk.points[0].map, vec![0, 1, 2]);
    assert!(!xk.space.in_subset("Y", 0));
}

#[test]
fn dual_algebras_of_small_spaces() {
    let bdl = profile(Signature::Bdl);
    let point = space_power(&two_space(), 0).unwrap();
    let a = dual_algebra(bdl, &point).unwrap().algebra;
    assert!(is_isomorphic(&a, &two()).is_some());
    for n in 2..=3 {
        let x = space_power(&two_space(), n).unwrap();
        assert_eq!(dual_algebra(bdl, &x).unwrap().algebra.size() as u64, MONOTONE[n]);
    }
}

#[test]
fn evaluation_maps_of_generators() {
    for (sig, a) in [
        (Signature::Bdl, two()),
        (Signature::Dma, demorgan_d()),
        (Signature::Ka, kleene_k()),
        (Signature::St, stone_s()),
    ] {
        let e = evaluation_map(profile(sig), &a).unwrap();
        assert!(e.is_isomorphism, "{sig}");
    }
}

#[test]
fn free_embeddings() {
    let f = |sig, b: &FiniteAlgebra, cap| embeds_into_free(sig, b, cap).unwrap();
    match f(Signature::Bdl, &two(), 1) {
        SearchOutcome::Found(w) => assert!(w.n <= 1),
        other => panic!("{other:?}"),
    }
    let sq = direct_power(&two(), 2).unwrap();
    for cap in 0..=3 {
        assert!(matches!(f(Signature::Bdl, &sq, cap), SearchOutcome::None), "cap {cap}");
    }
    let d = demorgan_d();
    let chain = subalgebra_generated(&d, &[d.element("a").unwrap()]).unwrap().0;
    // `~a = a` has no solution in a free algebra, which maps onto `2`.
    for cap in 0..=3 {
        assert!(matches!(f(Signature::Dma, &chain, cap), SearchOutcome::None), "cap {cap}");
    }
    let one = free_algebra(Signature::Dma, 1).unwrap();
    let f1 = one.to_algebra().unwrap();
    assert!((0..f1.size()).all(|x| f1.neg(x) != x));
    // The constants {0, 1} of K embed with at most one generator.
    let k = kleene_k();
    let constants = subalgebra_generated(&k, &[]).unwrap().0;
    match f(Signature::Ka, &constants, 1) {
        SearchOutcome::Found(w) => {
            let free = free_algebra(Signature::Ka, w.n).unwrap();
            let h = w.into_free(&free).expect("images are free elements");
            assert!(h.is_injective());
            assert!(is_homomorphism(&constants, free.to_algebra().unwrap(), &h.map));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn power_embeddings() {
    let bdl = profile(Signature::Bdl);
    for b in enumerate_members(bdl, 2, 8).unwrap() {
        assert!(
            matches!(embeds_into_free_power(Signature::Bdl, &b, 3, 4).unwrap(), SearchOutcome::Found(_)),
            "{}",
            b.name()
        );
    }
    assert!(matches!(embeds_into_free_power(Signature::Ka, &kleene_k(), 3, 4).unwrap(), SearchOutcome::None));
    match embeds_into_free_power(Signature::Dma, &trivial_algebra(Signature::Dma), 3, 4).unwrap() {
        SearchOutcome::Found(w) => assert!(w.parts.is_empty()),
        other => panic!("{other:?}"),
    }
}

fn members(sig: Signature) -> Vec<FiniteAlgebra> {
    enumerate_members(profile(sig), 2, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_dual_is_identity(sig in 0usize..4, i in any::<prop::sample::Index>()) {
        let sig = [Signature::Bdl, Signature::St, Signature::Dma, Signature::Ka][sig];
        let ms = members(sig);
        let b = &ms[i.index(ms.len())];
        let e = evaluation_map(profile(sig), b).unwrap();
        prop_assert!(e.is_isomorphism);
        // X(A(X(B))) has as many points as X(B).
        let x2 = dual_space(profile(sig), &e.double_dual.algebra).unwrap();
        prop_assert_eq!(x2.space.size(), e.dual.space.size());
    }

    #[test]
    fn dual_of_a_homomorphism_is_a_morphism(sig in 0usize..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let sig = [Signature::Bdl, Signature::St, Signature::Dma, Signature::Ka][sig];
        let p = profile(sig);
        let ms = members(sig);
        let (b, c) = (&ms[i.index(ms.len())], &ms[j.index(ms.len())]);
        let xb = dual_space(p, b).unwrap();
        let xc = dual_space(p, c).unwrap();
        for f in homomorphisms(b, c).unwrap().iter().take(8) {
            let g = dual_morphism(f, &xb, &xc).unwrap();
            prop_assert!(dualbench::space::is_space_morphism(&xc.space, &xb.space, &g.map));
        }
    }

    #[test]
    fn substructures_of_powers_dualize_back(sig in 0usize..4, mask in 1u64..512) {
        let sig = [Signature::Bdl, Signature::St, Signature::Dma, Signature::Ka][sig];
        let p = profile(sig);
        let x = space_power(&p.space, 2).unwrap();
        let mut pts: Vec<usize> = (0..x.size()).filter(|&q| mask >> (q % 64) & 1 == 1).collect();
        // Close under the unary maps so the points form a substructure.
        loop {
            let before = pts.len();
            for t in x.unary_ops().values() {
                let extra: Vec<usize> = pts.iter().map(|&q| t[q]).collect();
                pts.extend(extra);
            }
            pts.sort();
            pts.dedup();
            if pts.len() == before { break; }
        }
        let y: StructuredSpace = x.induced(&pts).unwrap();
        prop_assume!(dualbench::space::check_space_axioms(&y).is_none());
        let a = dual_algebra(p, &y).unwrap();
        prop_assert!(dualbench::algebra::validate_variety(sig, &a.algebra).unwrap().is_none());
        let e = evaluation_map(p, &a.algebra).unwrap();
        prop_assert!(e.is_isomorphism);
    }
}
