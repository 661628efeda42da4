//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Every check is exact; the only tolerance is the wall-clock
//! budget pinned next to each criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dualbench::admit::{admissible_clause, admissible_quasi_exact, classify_completeness, verify_lemma_suite, Admissibility, Bounds};
use dualbench::algebra::direct_power;
use dualbench::duality::evaluation_map;
use dualbench::free::free_algebra;
use dualbench::generators::{demorgan_d, kleene_k, two};
use dualbench::members::enumerate_members;
use dualbench::membership::member_isp_free;
use dualbench::parse::{parse_clause, print_clause};
use dualbench::profile::profile;
use dualbench::random::{random_clause, random_quasi_identity, ClauseShape};
use dualbench::registry::ClauseId;
use dualbench::satisfy::satisfies;
use dualbench::{Error, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{demorgan_tables, kleene_tables, monotone_count, stone_tables};

const SEED: u64 = 0x5eed_d0a1;
const BOUNDED: [Signature; 4] = [Signature::Bdl, Signature::St, Signature::Dma, Signature::Ka];

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ac1() -> Outcome {
    let mut total = 0;
    for sig in BOUNDED {
        let p = profile(sig);
        for b in enumerate_members(p, 2, 8).map_err(|e| e.to_string())? {
            let e = evaluation_map(p, &b).map_err(|e| e.to_string())?;
            check(e.is_isomorphism, format!("{sig}: evaluation map of {} is not an isomorphism", b.name()))?;
            total += 1;
        }
    }
    Ok(format!("{total} evaluation maps are isomorphisms"))
}

fn ac2() -> Outcome {
    let size = |sig, n| free_algebra(sig, n).map(|f| f.size() as u64).map_err(|e| e.to_string());
    for n in 0..=3u32 {
        let want = monotone_count(n);
        let got = size(Signature::Bdl, n as usize)?;
        check(got == want, format!("|F_bdl({n})| = {got}, oracle {want}"))?;
    }
    for (sig, oracle) in [
        (Signature::Ka, kleene_tables().endomorphisms()),
        (Signature::St, stone_tables().endomorphisms()),
        (Signature::Dma, demorgan_tables().endomorphisms()),
    ] {
        let got = size(sig, 1)?;
        check(got == oracle, format!("|F_{sig}(1)| = {got}, oracle {oracle}"))?;
    }
    check(size(Signature::Ka, 1)? == 6, "|F_ka(1)| != 6")?;
    Ok("F_bdl(0..3) = 2, 3, 6, 20; F_ka(1), F_st(1), F_dma(1) match the oracle".into())
}

fn ac3() -> Outcome {
    let bounds = Bounds { max_power: 2, max_size: 8, n_cap: Some(4) };
    let mut checked = 0;
    let mut limited = 0;
    for sig in Signature::ALL {
        let r = verify_lemma_suite(sig, bounds).map_err(|e| e.to_string())?;
        if let Some(first) = r.disagreements.first() {
            return Err(format!("{sig}: {} disagreements, first on {}", r.disagreements.len(), first.algebra));
        }
        checked += r.verdicts.len();
        limited += r.bound_limited;
    }
    Ok(format!("0 disagreements over {checked} verdicts in 7 profiles ({limited} bound-limited)"))
}

fn ac4() -> Outcome {
    let sq = direct_power(&two(), 2).map_err(|e| e.to_string())?;
    let cases = [
        (Signature::Bdl, sq, ClauseId::C2),
        (Signature::Ka, kleene_k(), ClauseId::C8),
        (Signature::Dma, demorgan_d(), ClauseId::C6),
    ];
    let mut parts = Vec::new();
    for (sig, alg, c) in cases {
        let sat = satisfies(&alg, c.clause()).map_err(|e| e.to_string())?;
        let w = sat
            .counterexample()
            .ok_or_else(|| format!("{} satisfies {}", alg.name(), c.name()))?;
        let v = admissible_clause(sig, c.clause(), 2, 8).map_err(|e| e.to_string())?;
        check(
            v.verdict == Admissibility::Admissible,
            format!("{} in {sig}: {} ({})", c.name(), v.verdict.name(), v.evidence),
        )?;
        parts.push(format!("{} fails in {} at {} yet is admissible in {sig}", c.name(), alg.name(), w.render(&alg)));
    }
    Ok(parts.join("; "))
}

fn ac5() -> Outcome {
    let get = |sig| classify_completeness(sig, 2, 8).map_err(|e| e.to_string());
    let bdl = get(Signature::Bdl)?;
    check(
        bdl.structurally_complete && !bdl.universally_complete && !bdl.non_negative_universally_complete,
        "bdl is not structurally complete only",
    )?;
    let st = get(Signature::St)?;
    check(st.non_negative_universally_complete && !st.universally_complete, "st classification")?;
    check(get(Signature::Dl)?.universally_complete, "dl is not universally complete")?;
    for sig in [Signature::Dma, Signature::Dml, Signature::Ka, Signature::Kl] {
        check(!get(sig)?.structurally_complete, format!("{sig} reported structurally complete"))?;
    }
    let k = member_isp_free(Signature::Ka, &kleene_k()).map_err(|e| e.to_string())?;
    check(!k.result && !k.disagreement, "K in ISP(F_ka)")?;
    let d = member_isp_free(Signature::Dma, &demorgan_d()).map_err(|e| e.to_string())?;
    check(!d.result && !d.disagreement, "D in ISP(F_dma)")?;
    Ok("bdl SC only; st NNUC not UC; dl UC; dma/dml/ka/kl not SC; K not in ISP(F_ka), D not in ISP(F_dma)".into())
}

/// Malformed clauses with the 1-based column each must be reported at.
const MALFORMED: [(&str, usize); 10] = [
    ("", 1),
    ("x = ", 5),
    ("x = y =>", 9),
    ("(x /\\ y = x => false", 9),
    ("x & y = x => false", 3),
    ("x = y => false | x = y", 16),
    ("x = y, => x = y", 8),
    ("x <= ~ => false", 8),
    ("x = y => x = y)", 15),
    ("x /\\ y", 7),
];

fn ac6() -> Outcome {
    for id in ClauseId::ALL {
        let text = print_clause(id.clause());
        let back = parse_clause(&text).map_err(|e| format!("{}: {e}", id.name()))?;
        check(&back == id.clause(), format!("{} does not round-trip", id.name()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..100 {
        let sig = Signature::ALL[i % 7];
        let c = random_clause(&mut rng, sig, &ClauseShape::default());
        let text = print_clause(&c);
        let back = parse_clause(&text).map_err(|e| format!("`{text}`: {e}"))?;
        check(back == c, format!("`{text}` does not round-trip"))?;
    }
    for (text, column) in MALFORMED {
        match parse_clause(text) {
            Ok(_) => return Err(format!("{text:?} was accepted")),
            Err(e) => check(e.column == column, format!("{text:?}: column {} instead of {column}", e.column))?,
        }
    }
    Ok("8 registry + 100 random clauses round-trip; 10 malformed inputs rejected at the expected columns".into())
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let shape = ClauseShape { variables: 3, max_depth: 3, max_premises: 3, max_conclusions: 1, leq_rate: 0.3 };
    let bdl_members = enumerate_members(profile(Signature::Bdl), 2, 8).map_err(|e| e.to_string())?;
    let mut admissible = 0;
    for _ in 0..50 {
        let q = random_quasi_identity(&mut rng, Signature::Bdl, &shape);
        let exact = admissible_quasi_exact(Signature::Bdl, &q).map_err(|e| e.to_string())?;
        let mut valid = true;
        for a in &bdl_members {
            valid &= satisfies(a, &q).map_err(|e| e.to_string())?.holds();
        }
        check(exact == valid, format!("`{}`: exact {exact}, member validity {valid}", print_clause(&q)))?;
        admissible += exact as usize;
    }
    let mut notes = vec![format!("bdl: 50/50 agree ({admissible} admissible)")];
    for (sig, c) in [(Signature::Ka, ClauseId::C8), (Signature::Dma, ClauseId::C6), (Signature::Dma, ClauseId::C7)] {
        match admissible_quasi_exact(sig, c.clause()) {
            Ok(v) => {
                check(v, format!("{} not admissible in {sig}", c.name()))?;
                notes.push(format!("{} in {sig}: exact", c.name()));
            }
            Err(Error::Budget { .. }) => {
                let v = admissible_clause(sig, c.clause(), 2, 8).map_err(|e| e.to_string())?;
                check(
                    v.verdict == Admissibility::Admissible,
                    format!("{} in {sig}: dual criteria say {}", c.name(), v.verdict.name()),
                )?;
                let suite = verify_lemma_suite(sig, Bounds { max_power: 2, max_size: 8, n_cap: Some(4) })
                    .map_err(|e| e.to_string())?;
                check(suite.disagreements.is_empty(), format!("{sig} lemma suite disagrees"))?;
                notes.push(format!("{} in {sig}: free algebra over budget, dual criteria certify", c.name()));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(notes.join("; "))
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: [Criterion; 7] = [
    Criterion { id: "AC1", name: "duality soundness", budget: Duration::from_secs(120), run: ac1 },
    Criterion { id: "AC2", name: "free-algebra sizes", budget: Duration::from_secs(60), run: ac2 },
    Criterion { id: "AC3", name: "membership route agreement", budget: Duration::from_secs(600), run: ac3 },
    Criterion { id: "AC4", name: "admissible but not valid", budget: Duration::from_secs(120), run: ac4 },
    Criterion { id: "AC5", name: "completeness classification", budget: Duration::from_secs(120), run: ac5 },
    Criterion { id: "AC6", name: "parser round-trip and diagnostics", budget: Duration::from_secs(10), run: ac6 },
    Criterion { id: "AC7", name: "quasi-identity exactness", budget: Duration::from_secs(300), run: ac7 },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if took > c.budget => ("FAIL", format!("took {took:.2?}, budget {:?}", c.budget)),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{} {status} {} [{took:.2?}]: {detail}", c.id, c.name);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
