//! Terms, identities and clauses, with their canonical text form.

use std::collections::BTreeSet;
use std::fmt;

use crate::signature::Op;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Bot,
    Top,
    Neg(Box<Term>),
    Star(Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn star(t: Term) -> Term {
        Term::Star(Box::new(t))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Bot | Term::Top => {}
            Term::Neg(a) | Term::Star(a) => a.variables(out),
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }

    pub fn ops(&self, out: &mut BTreeSet<Op>) {
        match self {
            Term::Var(_) => {}
            Term::Bot => {
                out.insert(Op::Bot);
            }
            Term::Top => {
                out.insert(Op::Top);
            }
            Term::Neg(a) => {
                out.insert(Op::Neg);
                a.ops(out);
            }
            Term::Star(a) => {
                out.insert(Op::Star);
                a.ops(out);
            }
            Term::Meet(a, b) | Term::Join(a, b) => {
                out.insert(if matches!(self, Term::Meet(..)) { Op::Meet } else { Op::Join });
                a.ops(out);
                b.ops(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bot | Term::Top => 0,
            Term::Neg(a) | Term::Star(a) => 1 + a.depth(),
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Join(..) => 1,
            Term::Meet(..) => 2,
            Term::Neg(_) => 3,
            Term::Star(_) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.level() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Term::Var(v) => f.write_str(v)?,
            Term::Bot => f.write_str("bot")?,
            Term::Top => f.write_str("top")?,
            Term::Neg(a) => {
                f.write_str("~")?;
                a.write(f, 3)?;
            }
            Term::Star(a) => {
                a.write(f, 4)?;
                f.write_str("*")?;
            }
            Term::Meet(a, b) => {
                a.write(f, 2)?;
                f.write_str(" /\\ ")?;
                b.write(f, 3)?;
            }
            Term::Join(a, b) => {
                a.write(f, 1)?;
                f.write_str(" \\/ ")?;
                b.write(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 1)
    }
}

/// `lhs ≈ rhs`. The order sugar `φ <= ψ` is stored as `φ /\ ψ ≈ φ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn eq(lhs: Term, rhs: Term) -> Identity {
        Identity { lhs, rhs }
    }

    pub fn leq(lower: Term, upper: Term) -> Identity {
        Identity {
            lhs: Term::meet(lower.clone(), upper),
            rhs: lower,
        }
    }

    /// The pair `(φ, ψ)` when this identity is the desugared form of `φ <= ψ`.
    pub fn as_leq(&self) -> Option<(&Term, &Term)> {
        match &self.lhs {
            Term::Meet(a, b) if **a == self.rhs => Some((a, b)),
            _ => None,
        }
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        self.lhs.variables(out);
        self.rhs.variables(out);
    }

    pub fn ops(&self, out: &mut BTreeSet<Op>) {
        self.lhs.ops(out);
        self.rhs.ops(out);
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_leq() {
            Some((a, b)) => write!(f, "{a} <= {b}"),
            None => write!(f, "{} = {}", self.lhs, self.rhs),
        }
    }
}

/// `Σ ⇒ Δ` with both sides kept as ordered sets, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    pub premises: BTreeSet<Identity>,
    pub conclusions: BTreeSet<Identity>,
}

impl Clause {
    pub fn new(premises: impl IntoIterator<Item = Identity>, conclusions: impl IntoIterator<Item = Identity>) -> Clause {
        Clause {
            premises: premises.into_iter().collect(),
            conclusions: conclusions.into_iter().collect(),
        }
    }

    /// Variables in ascending name order; this is the assignment order.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = BTreeSet::new();
        for id in self.premises.iter().chain(&self.conclusions) {
            id.variables(&mut vars);
        }
        vars.into_iter().collect()
    }

    pub fn ops(&self) -> BTreeSet<Op> {
        let mut ops = BTreeSet::new();
        for id in self.premises.iter().chain(&self.conclusions) {
            id.ops(&mut ops);
        }
        ops
    }

    pub fn is_quasi_identity(&self) -> bool {
        self.conclusions.len() == 1
    }

    pub fn is_negative(&self) -> bool {
        self.conclusions.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.premises.is_empty()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.premises.is_empty() {
            f.write_str("true")?;
        }
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(" => ")?;
        if self.conclusions.is_empty() {
            f.write_str("false")?;
        }
        for (i, c) in self.conclusions.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
