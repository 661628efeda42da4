//! Seeded generators for random terms and clauses.

use rand::Rng;

use crate::signature::{Op, Signature};
use crate::term::{Clause, Identity, Term};

#[derive(Debug, Clone)]
pub struct ClauseShape {
    pub variables: usize,
    pub max_depth: usize,
    pub max_premises: usize,
    pub max_conclusions: usize,
    /// Probability of writing an identity with the `<=` sugar.
    pub leq_rate: f64,
}

impl Default for ClauseShape {
    fn default() -> Self {
        ClauseShape {
            variables: 3,
            max_depth: 3,
            max_premises: 3,
            max_conclusions: 2,
            leq_rate: 0.3,
        }
    }
}

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

pub fn random_term<R: Rng + ?Sized>(rng: &mut R, sig: Signature, vars: usize, depth: usize) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        let consts: Vec<Op> = sig.ops().iter().copied().filter(|o| o.arity() == 0).collect();
        if !consts.is_empty() && rng.gen_bool(0.15) {
            return match consts[rng.gen_range(0..consts.len())] {
                Op::Bot => Term::Bot,
                _ => Term::Top,
            };
        }
        return Term::var(VAR_NAMES[rng.gen_range(0..vars.clamp(1, VAR_NAMES.len()))]);
    }
    let ops: Vec<Op> = sig.ops().iter().copied().filter(|o| o.arity() > 0).collect();
    match ops[rng.gen_range(0..ops.len())] {
        Op::Neg => Term::neg(random_term(rng, sig, vars, depth - 1)),
        Op::Star => Term::star(random_term(rng, sig, vars, depth - 1)),
        Op::Meet => Term::meet(random_term(rng, sig, vars, depth - 1), random_term(rng, sig, vars, depth - 1)),
        _ => Term::join(random_term(rng, sig, vars, depth - 1), random_term(rng, sig, vars, depth - 1)),
    }
}

pub fn random_identity<R: Rng + ?Sized>(rng: &mut R, sig: Signature, shape: &ClauseShape) -> Identity {
    let a = random_term(rng, sig, shape.variables, shape.max_depth);
    let b = random_term(rng, sig, shape.variables, shape.max_depth);
    if rng.gen_bool(shape.leq_rate) {
        Identity::leq(a, b)
    } else {
        Identity::eq(a, b)
    }
}

pub fn random_clause<R: Rng + ?Sized>(rng: &mut R, sig: Signature, shape: &ClauseShape) -> Clause {
    let np = rng.gen_range(0..=shape.max_premises);
    let nc = rng.gen_range(0..=shape.max_conclusions);
    let premises: Vec<_> = (0..np).map(|_| random_identity(rng, sig, shape)).collect();
    let conclusions: Vec<_> = (0..nc).map(|_| random_identity(rng, sig, shape)).collect();
    Clause::new(premises, conclusions)
}

/// A quasi-identity: exactly one conclusion.
pub fn random_quasi_identity<R: Rng + ?Sized>(rng: &mut R, sig: Signature, shape: &ClauseShape) -> Clause {
    let np = rng.gen_range(0..=shape.max_premises);
    let premises: Vec<_> = (0..np).map(|_| random_identity(rng, sig, shape)).collect();
    Clause::new(premises, [random_identity(rng, sig, shape)])
}
