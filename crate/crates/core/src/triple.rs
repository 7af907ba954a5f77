//! Id-level triples and triple patterns.

use std::fmt;

/// A dictionary-encoded triple. Ids are 1-based within their role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdTriple {
    pub s: u32,
    pub p: u32,
    pub o: u32,
}

impl IdTriple {
    pub fn new(s: u32, p: u32, o: u32) -> Self {
        IdTriple { s, p, o }
    }

    /// Sort key of the store's column order.
    pub fn pos_key(&self) -> (u32, u32, u32) {
        (self.p, self.o, self.s)
    }
}

impl fmt::Display for IdTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.p, self.o)
    }
}

/// Which positions of a pattern are bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Spo,
    Sp,
    Po,
    P,
    So,
    S,
    O,
    All,
}

impl Shape {
    pub const ALL: [Shape; 8] = [
        Shape::Spo,
        Shape::Sp,
        Shape::Po,
        Shape::P,
        Shape::So,
        Shape::S,
        Shape::O,
        Shape::All,
    ];

    pub fn of(s: bool, p: bool, o: bool) -> Shape {
        match (s, p, o) {
            (true, true, true) => Shape::Spo,
            (true, true, false) => Shape::Sp,
            (false, true, true) => Shape::Po,
            (false, true, false) => Shape::P,
            (true, false, true) => Shape::So,
            (true, false, false) => Shape::S,
            (false, false, true) => Shape::O,
            (false, false, false) => Shape::All,
        }
    }

    /// Whether subject, predicate and object are bound.
    pub fn bound(self) -> (bool, bool, bool) {
        match self {
            Shape::Spo => (true, true, true),
            Shape::Sp => (true, true, false),
            Shape::Po => (false, true, true),
            Shape::P => (false, true, false),
            Shape::So => (true, false, true),
            Shape::S => (true, false, false),
            Shape::O => (false, false, true),
            Shape::All => (false, false, false),
        }
    }

    /// Pattern notation such as `(s,?,o)`.
    pub fn label(self) -> &'static str {
        match self {
            Shape::Spo => "(s,p,o)",
            Shape::Sp => "(s,p,?)",
            Shape::Po => "(?,p,o)",
            Shape::P => "(?,p,?)",
            Shape::So => "(s,?,o)",
            Shape::S => "(s,?,?)",
            Shape::O => "(?,?,o)",
            Shape::All => "(?,?,?)",
        }
    }

    /// Benchmark family: patterns with a bound predicate, patterns with an
    /// unbound one, and the full scan.
    pub fn family(self) -> &'static str {
        match self {
            Shape::Spo | Shape::Sp | Shape::Po | Shape::P => "bound-predicate",
            Shape::So | Shape::S | Shape::O => "unbound-predicate",
            Shape::All => "scan",
        }
    }
}

/// A triple pattern over ids; `None` is a wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TriplePattern {
    pub s: Option<u32>,
    pub p: Option<u32>,
    pub o: Option<u32>,
}

impl TriplePattern {
    pub fn new(s: Option<u32>, p: Option<u32>, o: Option<u32>) -> Self {
        TriplePattern { s, p, o }
    }

    pub fn shape(&self) -> Shape {
        Shape::of(self.s.is_some(), self.p.is_some(), self.o.is_some())
    }

    pub fn matches(&self, t: &IdTriple) -> bool {
        self.s.is_none_or(|s| s == t.s) && self.p.is_none_or(|p| p == t.p) && self.o.is_none_or(|o| o == t.o)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<u32>| v.map_or("?".to_string(), |x| format!("#{x}"));
        write!(f, "{} {} {}", show(self.s), show(self.p), show(self.o))
    }
}
