//! `dualbench`: command-line front end for the workbench.
//!
//! Exit codes: 0 success, 1 a cross-check disagreement, 2 a budget refusal,
//! 64 usage error, 65 bad input data, 70 internal error, 74 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualbench::admit::{
    admissible_clause, admissible_quasi_exact, classify_completeness, dual_refutation, verify_lemma_suite,
    Admissibility, Bounds, DEFAULT_MAX_POWER, DEFAULT_MAX_SIZE,
};
use dualbench::algebra::FiniteAlgebra;
use dualbench::dot::emit_dot;
use dualbench::duality::{check_member, dual_algebra, dual_space};
use dualbench::free::{free_algebra, set_cache_dir};
use dualbench::generators::{as_signature, is_builtin_name, named_algebra};
use dualbench::io::{algebra_to_json, algebra_value, read_algebra, read_space, space_to_json, write_text};
use dualbench::members::enumerate_members;
use dualbench::membership::{member_with_witness, Class, MembershipVerdict, Route};
use dualbench::parse::{parse_clause, print_clause};
use dualbench::profile::profile;
use dualbench::random::{random_clause, ClauseShape};
use dualbench::satisfy::{satisfies, Satisfaction};
use dualbench::space::space_power;
use dualbench::term::Clause;
use dualbench::{Error, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "dualbench", version, about = "Dualities, free algebras and admissible clauses for lattice-based varieties")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Do not read or write the free-algebra cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory for free algebras.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variety {
    Bdl,
    Dl,
    St,
    Dma,
    Dml,
    Ka,
    Kl,
}

impl From<Variety> for Signature {
    fn from(v: Variety) -> Signature {
        match v {
            Variety::Bdl => Signature::Bdl,
            Variety::Dl => Signature::Dl,
            Variety::St => Signature::St,
            Variety::Dma => Signature::Dma,
            Variety::Dml => Signature::Dml,
            Variety::Ka => Signature::Ka,
            Variety::Kl => Signature::Kl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Is,
    Isp,
    Both,
}

#[derive(Args)]
struct ClauseArg {
    /// Clause text, e.g. "x /\ y = bot => x = bot | y = bot".
    #[arg(long, value_name = "STR", conflicts_with = "clause_file")]
    clause: Option<String>,
    /// File holding the clause text.
    #[arg(long, value_name = "PATH")]
    clause_file: Option<PathBuf>,
}

#[derive(Args)]
struct Enumeration {
    #[arg(long, default_value_t = DEFAULT_MAX_POWER)]
    max_power: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Does a finite algebra satisfy a clause?
    Check {
        #[arg(long)]
        variety: Variety,
        #[command(flatten)]
        clause: ClauseArg,
        /// JSON file or built-in name (2, S, D, K, trivial, D^2, ...).
        #[arg(long, value_name = "PATH|NAME")]
        algebra: String,
    },
    /// Membership in IS(F) and ISP(F) by every route.
    Member {
        #[arg(long)]
        variety: Variety,
        #[arg(long, value_name = "PATH|NAME")]
        algebra: String,
        #[arg(long, value_enum, default_value = "both")]
        class: ClassArg,
        /// Largest free generator count for the witness search.
        #[arg(long)]
        n_cap: Option<usize>,
    },
    /// Dual space of an algebra, or dual algebra of a space.
    Dual {
        #[arg(long)]
        variety: Variety,
        #[arg(long, value_name = "PATH|NAME", conflicts_with = "space", required_unless_present = "space")]
        algebra: Option<String>,
        #[arg(long, value_name = "PATH")]
        space: Option<PathBuf>,
        /// Write the JSON result here instead of standard output.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        emit_dot: Option<PathBuf>,
    },
    /// The free algebra on n generators.
    Free {
        #[arg(long)]
        variety: Variety,
        #[arg(short, long)]
        n: usize,
        #[arg(long)]
        size_only: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Render the space M~^n whose morphisms form the free algebra.
        #[arg(long, value_name = "PATH")]
        emit_dot: Option<PathBuf>,
    },
    /// Is a clause admissible?
    Admissible {
        #[arg(long)]
        variety: Variety,
        #[command(flatten)]
        clause: ClauseArg,
        #[command(flatten)]
        bounds: Enumeration,
        /// Decide a quasi-identity in the free algebra on n0 generators.
        #[arg(long)]
        quasi_exact: bool,
    },
    /// Cross-check the membership routes on every enumerated member.
    Verify {
        /// Defaults to every profile.
        #[arg(long)]
        variety: Option<Variety>,
        #[command(flatten)]
        bounds: Enumeration,
        #[arg(long)]
        n_cap: Option<usize>,
        /// Also compare the refutation search with free algebras on this
        /// many seeded random clauses.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Completeness properties at the enumeration bound.
    Classify {
        #[arg(long)]
        variety: Variety,
        #[command(flatten)]
        bounds: Enumeration,
    },
    /// List the enumerated members.
    Enumerate {
        #[arg(long)]
        variety: Variety,
        #[command(flatten)]
        bounds: Enumeration,
        /// Write each member as `member-<i>.json` into this directory.
        #[arg(long, value_name = "DIR")]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

type Run = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error");
            eprintln!("dualbench: {}", first.trim_start_matches("error: "));
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("dualbench: {m}");
            ExitCode::from(64)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("dualbench: {}", e.to_string().replace('\n', " "));
            ExitCode::from(match e {
                Error::Budget { .. } => 2,
                Error::Io(_) => 74,
                Error::Invariant(_) => 70,
                _ => 65,
            })
        }
    }
}

fn run(cli: Cli) -> Run {
    let g = cli.global;
    if let Some(n) = g.jobs {
        if n == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    set_cache_dir(if g.no_cache { None } else { g.cache_dir.clone().or_else(default_cache_dir) });
    match cli.command {
        Command::Check { variety, clause, algebra } => check(&g, variety.into(), &clause, &algebra),
        Command::Member { variety, algebra, class, n_cap } => member(&g, variety.into(), &algebra, class, n_cap),
        Command::Dual { variety, algebra, space, output, emit_dot } => {
            dual(variety.into(), algebra.as_deref(), space.as_deref(), output.as_deref(), emit_dot.as_deref())
        }
        Command::Free { variety, n, size_only, output, emit_dot } => {
            free(&g, variety.into(), n, size_only, output.as_deref(), emit_dot.as_deref())
        }
        Command::Admissible { variety, clause, bounds, quasi_exact } => {
            admissible(&g, variety.into(), &clause, &bounds, quasi_exact)
        }
        Command::Verify { variety, bounds, n_cap, random } => verify(&g, variety.map(Into::into), &bounds, n_cap, random),
        Command::Classify { variety, bounds } => classify(&g, variety.into(), &bounds),
        Command::Enumerate { variety, bounds, output } => enumerate(&g, variety.into(), &bounds, output.as_deref()),
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("dualbench"))
}

fn load_clause(arg: &ClauseArg) -> Result<Clause, Failure> {
    let text = match (&arg.clause, &arg.clause_file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => {
            let t = fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            t.trim_end_matches(['\n', '\r']).to_string()
        }
        _ => return Err(Failure::Usage("give exactly one of --clause or --clause-file".into())),
    };
    parse_clause(&text).map_err(|e| Failure::Lib(e.into()))
}

/// A built-in name or a JSON file, read in the variety's signature and
/// checked against its laws.
fn load_algebra(arg: &str, sig: Signature) -> Result<FiniteAlgebra, Failure> {
    let a = if is_builtin_name(arg) && !Path::new(arg).exists() {
        named_algebra(arg, sig)?
    } else {
        as_signature(&read_algebra(Path::new(arg))?, sig)?
    };
    check_member(profile(sig), &a)?;
    Ok(a)
}

fn json_line(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn check(g: &Global, sig: Signature, clause: &ClauseArg, algebra: &str) -> Run {
    let c = load_clause(clause)?;
    let a = load_algebra(algebra, sig)?;
    let sat = satisfies(&a, &c)?;
    let witness = sat.counterexample().map(|w| w.render(&a));
    let out = if g.json {
        json_line(json!({
            "variety": sig,
            "algebra": a.name(),
            "clause": print_clause(&c),
            "holds": sat.holds(),
            "witness": witness,
        }))
    } else {
        match sat {
            Satisfaction::Holds => "true\n".to_string(),
            Satisfaction::Fails(_) => format!("false; witness {}\n", witness.unwrap_or_default()),
        }
    };
    Ok((out, 0))
}

fn describe_verdict(v: &MembershipVerdict) -> String {
    let mut s = format!("{}: {}\n", v.class.name(), v.result);
    for r in &v.routes {
        let name = match r.route {
            Route::Clause => "clause",
            Route::Dual => "dual",
            Route::Witness => "witness",
        };
        let result = match r.result {
            Some(b) => b.to_string(),
            None => "none found".into(),
        };
        s.push_str(&format!("  {name}: {result} ({})\n", r.evidence));
    }
    if v.disagreement {
        s.push_str("  DISAGREEMENT between routes\n");
    } else if v.bound_limited {
        s.push_str("  witness search limited by the generator cap\n");
    }
    s
}

fn member(g: &Global, sig: Signature, algebra: &str, class: ClassArg, n_cap: Option<usize>) -> Run {
    let a = load_algebra(algebra, sig)?;
    let classes: &[Class] = match class {
        ClassArg::Is => &[Class::Is],
        ClassArg::Isp => &[Class::Isp],
        ClassArg::Both => &[Class::Is, Class::Isp],
    };
    let cap = match n_cap {
        Some(c) => c,
        None => dual_points(sig, &a)? + 2,
    };
    let verdicts = classes
        .iter()
        .map(|&c| member_with_witness(sig, &a, c, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let code = verdicts.iter().any(|v| v.disagreement) as u8;
    let out = if g.json {
        json_line(serde_json::to_value(&verdicts).expect("verdicts serialize"))
    } else {
        let mut s = format!("{} ({} elements) in {sig}\n", a.name(), a.size());
        for v in &verdicts {
            s.push_str(&describe_verdict(v));
        }
        s
    };
    Ok((out, code))
}

fn dual_points(sig: Signature, a: &FiniteAlgebra) -> Result<usize, Error> {
    let p = profile(sig);
    let side = match p.bar_target {
        None => a.clone(),
        Some(_) => dualbench::algebra::add_bounds(a)?,
    };
    Ok(dual_space(p.dual_profile(), &side)?.space.size())
}

fn deliver(text: String, output: Option<&Path>) -> Result<String, Failure> {
    match output {
        Some(p) => {
            write_text(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn dual(sig: Signature, algebra: Option<&str>, space: Option<&Path>, output: Option<&Path>, dot: Option<&Path>) -> Run {
    let p = profile(sig);
    if !p.has_duality() {
        return Err(Error::NoDuality(p.name().to_string()).into());
    }
    let (text, rendered) = match (algebra, space) {
        (Some(name), None) => {
            let a = load_algebra(name, sig)?;
            let x = dual_space(p, &a)?.space;
            (space_to_json(&x), (x, format!("X({})", a.name())))
        }
        (None, Some(path)) => {
            let x = read_space(path)?;
            let a = dual_algebra(p, &x)?.algebra.with_name(format!("A({})", path.display()));
            (algebra_to_json(&a), (x, path.display().to_string()))
        }
        _ => return Err(Failure::Usage("give exactly one of --algebra or --space".into())),
    };
    if let Some(path) = dot {
        write_text(path, &emit_dot(&rendered.0, &rendered.1))?;
    }
    Ok((deliver(text, output)?, 0))
}

fn free(g: &Global, sig: Signature, n: usize, size_only: bool, output: Option<&Path>, dot: Option<&Path>) -> Run {
    let p = profile(sig);
    if p.bar_target.is_some() && n == 0 {
        return Err(Error::Invalid(format!("`{sig}` has no constants, so it has no free algebra on 0 generators")).into());
    }
    let f = free_algebra(sig, n)?;
    if let Some(path) = dot {
        let x = space_power(&p.dual_profile().space, n)?;
        write_text(path, &emit_dot(&x, &format!("{}~^{n}", p.dual_profile().generator.name())))?;
    }
    let alg = if size_only && output.is_none() && !g.json { None } else { Some(f.unbounded_algebra()?.reduct(sig)?) };
    let size = alg.as_ref().map_or(
        f.size() - if p.bar_target.is_some() { 2 } else { 0 },
        |a| a.size(),
    );
    if let (Some(path), Some(a)) = (output, &alg) {
        write_text(path, &algebra_to_json(a))?;
    }
    let out = if size_only {
        format!("{size}\n")
    } else if g.json {
        json_line(algebra_value(alg.as_ref().expect("built for JSON")))
    } else {
        let a = alg.as_ref().expect("built for text");
        let gens: Vec<&str> = match p.bar_target {
            None => f.generators().iter().map(|&i| a.label(i)).collect(),
            Some(_) => f.generators().iter().map(|&i| a.label(i - 1)).collect(),
        };
        format!("{}: {size} elements; generators {}\n", a.name(), if gens.is_empty() { "none".into() } else { gens.join(", ") })
    };
    Ok((out, 0))
}

fn admissible(g: &Global, sig: Signature, clause: &ClauseArg, bounds: &Enumeration, quasi_exact: bool) -> Run {
    let c = load_clause(clause)?;
    if quasi_exact {
        let v = admissible_quasi_exact(sig, &c)?;
        let verdict = if v { Admissibility::Admissible } else { Admissibility::NotAdmissible };
        let out = if g.json {
            json_line(json!({"profile": sig, "clause": print_clause(&c), "verdict": verdict, "method": "free_algebra"}))
        } else {
            format!("{}\n", verdict.name())
        };
        return Ok((out, 0));
    }
    let v = admissible_clause(sig, &c, bounds.max_power, bounds.max_size)?;
    let out = if g.json {
        json_line(serde_json::to_value(&v).expect("verdict serializes"))
    } else {
        match &v.counterexample {
            Some(w) => format!(
                "{}; counterexample {} ({} elements) at {}\n",
                v.verdict.name(),
                w.name,
                w.size,
                w.assignment
            ),
            None => format!("{}; {}\n", v.verdict.name(), v.evidence),
        }
    };
    Ok((out, 0))
}

/// Seeded random clauses on which the refutation search and the free
/// algebras on up to two generators must not contradict each other.
fn random_cross_check(sig: Signature, count: usize, seed: u64) -> Result<Vec<String>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = ClauseShape { variables: 2, max_depth: 2, max_premises: 2, max_conclusions: 2, leq_rate: 0.4 };
    let start = if profile(sig).bar_target.is_some() { 1 } else { 0 };
    let mut bad = Vec::new();
    for _ in 0..count {
        let c = random_clause(&mut rng, sig, &shape);
        let Some(refuted) = dual_refutation(sig, &c)? else { continue };
        if refuted.is_none() {
            for m in start..=2 {
                let f = free_algebra(sig, m)?;
                if !satisfies(&f.unbounded_algebra()?.reduct(sig)?, &c)?.holds() {
                    bad.push(format!("{}: admissible by refutation, fails in F({m})", print_clause(&c)));
                    break;
                }
            }
        }
    }
    Ok(bad)
}

fn verify(g: &Global, sig: Option<Signature>, bounds: &Enumeration, n_cap: Option<usize>, random: usize) -> Run {
    let sigs: Vec<Signature> = match sig {
        Some(s) => vec![s],
        None => Signature::ALL.to_vec(),
    };
    let b = Bounds { max_power: bounds.max_power, max_size: bounds.max_size, n_cap };
    let mut total = 0;
    let mut text = String::new();
    let mut reports = Vec::new();
    for s in sigs {
        let r = verify_lemma_suite(s, b)?;
        let extra = if random > 0 { random_cross_check(s, random, g.seed)? } else { Vec::new() };
        total += r.disagreements.len() + extra.len();
        text.push_str(&format!(
            "{s}: {} members, {} verdicts, {} disagreements ({} bound-limited)\n",
            r.members_checked,
            r.verdicts.len(),
            r.disagreements.len(),
            r.bound_limited
        ));
        for d in &r.disagreements {
            text.push_str(&format!("  {} {}\n", d.algebra, d.class.name()));
        }
        if random > 0 {
            text.push_str(&format!("  random clauses: {random} checked, {} inconsistent (seed {})\n", extra.len(), g.seed));
            for e in &extra {
                text.push_str(&format!("  {e}\n"));
            }
        }
        let mut v = serde_json::to_value(&r).expect("report serializes");
        if random > 0 {
            v["random_clauses"] = json!({"checked": random, "seed": g.seed, "inconsistent": extra});
        }
        reports.push(v);
    }
    text.push_str(&format!("{total} disagreements\n"));
    let out = if g.json {
        json_line(if reports.len() == 1 { reports.pop().unwrap() } else { serde_json::Value::Array(reports) })
    } else {
        text
    };
    Ok((out, (total > 0) as u8))
}

fn classify(g: &Global, sig: Signature, bounds: &Enumeration) -> Run {
    let r = classify_completeness(sig, bounds.max_power, bounds.max_size)?;
    let out = if g.json {
        json_line(serde_json::to_value(&r).expect("report serializes"))
    } else {
        let line = |name: &str, v: bool, first: &Option<String>| match first {
            Some(f) if !v => format!("  {name}: false (first failure: {f})\n"),
            _ => format!("  {name}: {v}\n"),
        };
        format!(
            "{sig} at max-power {} max-size {} ({} members)\n{}{}{}",
            r.max_power,
            r.max_size,
            r.members_checked,
            line("structurally complete", r.structurally_complete, &r.not_in_isp),
            line("universally complete", r.universally_complete, &r.not_in_is),
            line("non-negative universally complete", r.non_negative_universally_complete, &r.nontrivial_not_in_is),
        )
    };
    Ok((out, 0))
}

fn enumerate(g: &Global, sig: Signature, bounds: &Enumeration, output: Option<&Path>) -> Run {
    let members = enumerate_members(profile(sig), bounds.max_power, bounds.max_size)?;
    if let Some(dir) = output {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        for (i, a) in members.iter().enumerate() {
            write_text(&dir.join(format!("member-{i}.json")), &algebra_to_json(a))?;
        }
    }
    let out = if g.json {
        json_line(serde_json::Value::Array(members.iter().map(algebra_value).collect()))
    } else {
        members.iter().map(|a| format!("{}\t{}\n", a.name(), a.size())).collect()
    };
    Ok((out, 0))
}
