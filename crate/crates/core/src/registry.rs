//! The eight named clauses used by the basis tables.

use std::sync::LazyLock;

use crate::parse::parse_clause;
use crate::term::Clause;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl ClauseId {
    pub const ALL: [ClauseId; 8] = [
        ClauseId::C1,
        ClauseId::C2,
        ClauseId::C3,
        ClauseId::C4,
        ClauseId::C5,
        ClauseId::C6,
        ClauseId::C7,
        ClauseId::C8,
    ];

    pub fn name(self) -> &'static str {
        ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"][self as usize]
    }

    pub fn text(self) -> &'static str {
        match self {
            ClauseId::C1 => "top = bot => false",
            ClauseId::C2 => "x /\\ y = bot => x = bot | y = bot",
            ClauseId::C3 => "x \\/ y = top => x = top | y = top",
            ClauseId::C4 => "x = ~x => false",
            ClauseId::C5 => "x = ~x => x = y",
            ClauseId::C6 => "x <= ~x, ~(x \\/ y) <= x \\/ y, ~y \\/ z = top => z = top",
            ClauseId::C7 => "x <= ~x, y <= ~y, x /\\ y = bot => x \\/ y <= ~(x \\/ y)",
            ClauseId::C8 => "~x <= x, x /\\ ~y <= ~x \\/ y => ~y <= y",
        }
    }

    pub fn clause(self) -> &'static Clause {
        &REGISTRY[self as usize]
    }

    pub fn from_name(name: &str) -> Option<ClauseId> {
        ClauseId::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(name))
    }
}

static REGISTRY: LazyLock<Vec<Clause>> = LazyLock::new(|| {
    ClauseId::ALL
        .iter()
        .map(|c| parse_clause(c.text()).expect("registry clauses parse"))
        .collect()
});
