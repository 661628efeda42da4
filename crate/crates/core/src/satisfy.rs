//! Term evaluation and clause satisfaction over finite models.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::signature::{Op, Signature};
use crate::term::{Clause, Identity, Term};

/// Default cap on the number of assignments a clause check may visit.
pub const ASSIGNMENT_LIMIT: u128 = 100_000_000;

/// Anything terms can be evaluated in.
pub trait Model {
    type Value: Clone + PartialEq;
    fn signature(&self) -> Signature;
    fn constant(&self, op: Op) -> Self::Value;
    fn unary(&self, op: Op, a: &Self::Value) -> Self::Value;
    fn binary(&self, op: Op, a: &Self::Value, b: &Self::Value) -> Self::Value;
}

impl Model for FiniteAlgebra {
    type Value = usize;

    fn signature(&self) -> Signature {
        FiniteAlgebra::signature(self)
    }

    fn constant(&self, op: Op) -> usize {
        self.apply(op, &[])
    }

    fn unary(&self, op: Op, a: &usize) -> usize {
        self.apply(op, &[*a])
    }

    fn binary(&self, op: Op, a: &usize, b: &usize) -> usize {
        self.apply(op, &[*a, *b])
    }
}

/// A term with variables resolved to slots.
#[derive(Debug, Clone)]
pub(crate) enum Node {
    Var(usize),
    Const(Op),
    Un(Op, Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
}

impl Node {
    pub(crate) fn compile(t: &Term, vars: &[String]) -> Node {
        match t {
            Term::Var(v) => Node::Var(vars.iter().position(|x| x == v).expect("variable is listed")),
            Term::Bot => Node::Const(Op::Bot),
            Term::Top => Node::Const(Op::Top),
            Term::Neg(a) => Node::Un(Op::Neg, Box::new(Node::compile(a, vars))),
            Term::Star(a) => Node::Un(Op::Star, Box::new(Node::compile(a, vars))),
            Term::Meet(a, b) => Node::Bin(Op::Meet, Box::new(Node::compile(a, vars)), Box::new(Node::compile(b, vars))),
            Term::Join(a, b) => Node::Bin(Op::Join, Box::new(Node::compile(a, vars)), Box::new(Node::compile(b, vars))),
        }
    }

    pub(crate) fn eval<M: Model>(&self, m: &M, env: &[M::Value]) -> M::Value {
        match self {
            Node::Var(i) => env[*i].clone(),
            Node::Const(op) => m.constant(*op),
            Node::Un(op, a) => m.unary(*op, &a.eval(m, env)),
            Node::Bin(op, a, b) => m.binary(*op, &a.eval(m, env), &b.eval(m, env)),
        }
    }

    fn max_slot(&self) -> Option<usize> {
        match self {
            Node::Var(i) => Some(*i),
            Node::Const(_) => None,
            Node::Un(_, a) => a.max_slot(),
            Node::Bin(_, a, b) => a.max_slot().max(b.max_slot()),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledIdentity {
    pub lhs: Node,
    pub rhs: Node,
}

impl CompiledIdentity {
    pub(crate) fn new(id: &Identity, vars: &[String]) -> Self {
        CompiledIdentity {
            lhs: Node::compile(&id.lhs, vars),
            rhs: Node::compile(&id.rhs, vars),
        }
    }

    pub(crate) fn holds<M: Model>(&self, m: &M, env: &[M::Value]) -> bool {
        self.lhs.eval(m, env) == self.rhs.eval(m, env)
    }

    fn max_slot(&self) -> Option<usize> {
        self.lhs.max_slot().max(self.rhs.max_slot())
    }
}

/// A clause compiled against its own variable order.
#[derive(Debug, Clone)]
pub(crate) struct CompiledClause {
    pub vars: Vec<String>,
    pub premises: Vec<CompiledIdentity>,
    pub conclusions: Vec<CompiledIdentity>,
    /// `ready[i]` lists the premises decided once slots `0..=i` are bound;
    /// premises without variables sit in `ground`.
    ready: Vec<Vec<usize>>,
    ground: Vec<usize>,
}

impl CompiledClause {
    pub(crate) fn new(c: &Clause) -> Self {
        let vars = c.variables();
        let premises: Vec<CompiledIdentity> = c.premises.iter().map(|p| CompiledIdentity::new(p, &vars)).collect();
        let conclusions = c.conclusions.iter().map(|p| CompiledIdentity::new(p, &vars)).collect();
        let mut ready = vec![Vec::new(); vars.len()];
        let mut ground = Vec::new();
        for (i, p) in premises.iter().enumerate() {
            match p.max_slot() {
                Some(s) => ready[s].push(i),
                None => ground.push(i),
            }
        }
        CompiledClause {
            vars,
            premises,
            conclusions,
            ready,
            ground,
        }
    }

    pub(crate) fn premises_hold<M: Model>(&self, m: &M, env: &[M::Value]) -> bool {
        self.premises.iter().all(|p| p.holds(m, env))
    }

    pub(crate) fn some_conclusion_holds<M: Model>(&self, m: &M, env: &[M::Value]) -> bool {
        self.conclusions.iter().any(|c| c.holds(m, env))
    }

    /// First counter-assignment in lexicographic order, as indices into
    /// `elements`.
    pub(crate) fn find_counterexample<M: Model>(&self, m: &M, elements: &[M::Value]) -> Option<Vec<usize>> {
        let k = self.vars.len();
        let mut env: Vec<M::Value> = Vec::with_capacity(k);
        let mut idx = vec![0usize; k];
        if !self.ground.iter().all(|&p| self.premises[p].holds(m, &env)) {
            return None;
        }
        if k == 0 {
            return (!self.some_conclusion_holds(m, &env)).then(Vec::new);
        }
        if elements.is_empty() {
            return None;
        }
        env.push(elements[0].clone());
        let mut level = 0;
        loop {
            // env[0..=level] is bound; check premises decided at this level.
            let ok = self.ready[level].iter().all(|&p| self.premises[p].holds(m, &env));
            if ok && level + 1 == k {
                if !self.some_conclusion_holds(m, &env) {
                    return Some(idx);
                }
            } else if ok {
                level += 1;
                idx[level] = 0;
                env.push(elements[0].clone());
                continue;
            }
            // advance to the next candidate
            loop {
                idx[level] += 1;
                if idx[level] < elements.len() {
                    env[level] = elements[idx[level]].clone();
                    break;
                }
                if level == 0 {
                    return None;
                }
                env.pop();
                level -= 1;
            }
        }
    }
}

/// Values for the clause variables, in ascending variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub vars: Vec<String>,
    pub values: Vec<usize>,
}

impl Assignment {
    pub fn render(&self, a: &FiniteAlgebra) -> String {
        self.vars
            .iter()
            .zip(&self.values)
            .map(|(v, &x)| format!("{v}:={}", a.label(x)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn value(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var).map(|i| self.values[i])
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vars.iter().zip(&self.values).map(|(v, x)| format!("{v}:={x}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Satisfaction {
    Holds,
    Fails(Assignment),
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }

    pub fn counterexample(&self) -> Option<&Assignment> {
        match self {
            Satisfaction::Holds => None,
            Satisfaction::Fails(a) => Some(a),
        }
    }
}

pub(crate) fn check_ops(signature: Signature, ops: impl IntoIterator<Item = Op>) -> Result<()> {
    for op in ops {
        if !signature.has(op) {
            return Err(Error::UnknownOperation { op, signature });
        }
    }
    Ok(())
}

pub(crate) fn check_assignment_budget(elements: usize, vars: usize, limit: u128) -> Result<()> {
    let count = (elements as u128).checked_pow(vars as u32).unwrap_or(u128::MAX);
    if count > limit {
        return Err(Error::budget("clause assignments", count, limit));
    }
    Ok(())
}

/// Satisfaction over an arbitrary model given its element list.
pub fn satisfies_model<M: Model>(m: &M, elements: &[M::Value], clause: &Clause, limit: u128) -> Result<Option<Vec<usize>>> {
    check_ops(m.signature(), clause.ops())?;
    let compiled = CompiledClause::new(clause);
    check_assignment_budget(elements.len(), compiled.vars.len(), limit)?;
    Ok(compiled.find_counterexample(m, elements))
}

/// Whether `a` satisfies `clause`; on failure, the lexicographically first
/// counter-assignment (variables by name, values ascending).
pub fn satisfies(a: &FiniteAlgebra, clause: &Clause) -> Result<Satisfaction> {
    satisfies_with_limit(a, clause, ASSIGNMENT_LIMIT)
}

pub fn satisfies_with_limit(a: &FiniteAlgebra, clause: &Clause, limit: u128) -> Result<Satisfaction> {
    let elements: Vec<usize> = (0..a.size()).collect();
    Ok(match satisfies_model(a, &elements, clause, limit)? {
        None => Satisfaction::Holds,
        Some(values) => Satisfaction::Fails(Assignment {
            vars: clause.variables(),
            values,
        }),
    })
}

pub fn eval_term(a: &FiniteAlgebra, term: &Term, assignment: &BTreeMap<String, usize>) -> Result<usize> {
    let mut ops = Default::default();
    term.ops(&mut ops);
    check_ops(a.signature(), ops)?;
    eval_checked(a, term, assignment)
}

fn eval_checked(a: &FiniteAlgebra, term: &Term, env: &BTreeMap<String, usize>) -> Result<usize> {
    Ok(match term {
        Term::Var(v) => {
            let x = *env.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            if x >= a.size() {
                return Err(Error::Invalid(format!("value {x} for `{v}` is outside the carrier")));
            }
            x
        }
        Term::Bot => a.apply(Op::Bot, &[]),
        Term::Top => a.apply(Op::Top, &[]),
        Term::Neg(t) => a.neg(eval_checked(a, t, env)?),
        Term::Star(t) => a.star(eval_checked(a, t, env)?),
        Term::Meet(s, t) => a.meet(eval_checked(a, s, env)?, eval_checked(a, t, env)?),
        Term::Join(s, t) => a.join(eval_checked(a, s, env)?, eval_checked(a, t, env)?),
    })
}

/// First algebra of the list refuting `clause`, with its counter-assignment.
pub fn valid_in_class(algebras: &[FiniteAlgebra], clause: &Clause) -> Result<Option<(usize, Assignment)>> {
    for (i, a) in algebras.iter().enumerate() {
        if let Satisfaction::Fails(w) = satisfies(a, clause)? {
            return Ok(Some((i, w)));
        }
    }
    Ok(None)
}

/// Whether `φ ≈ ψ` holds throughout the profile's variety. The variety is
/// generated by its generator, so checking there is exact.
pub fn identity_valid(sig: Signature, id: &Identity) -> Result<bool> {
    let p = crate::profile::profile(sig);
    let c = Clause::new([], [id.clone()]);
    check_ops(sig, c.ops())?;
    Ok(satisfies(&p.generator, &c)?.holds())
}
