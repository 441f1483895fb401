//! Machine-checkable verdicts: a measured quantity compared exactly with a bound.

use crate::rational::{format_rational, Rational};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Infinity-norm proximity `< (4n+2)/9 · Δ_{n-1}`.
    Thm2,
    /// Facet width of lattice-free polyhedra `< (4n+2)/9 · Δ_n - 1`.
    Thm4,
    /// Proximity along a direction `< (4n+2)/9 · Δ^α`.
    Thm5,
    /// Proximity for minors in `{0, ±k, ±2k}`.
    Thm7a,
    /// Facet width for minors in `{0, ±k, ±2k}`.
    Thm7b,
    /// Volume form of the slice bound in dimension 2 and 3.
    Volume,
    /// Vertex bound transferred from `A` to `AB`.
    Transfer,
    /// Planar polar area lower bound.
    PolarArea,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::Thm2,
        TheoremId::Thm4,
        TheoremId::Thm5,
        TheoremId::Thm7a,
        TheoremId::Thm7b,
        TheoremId::Volume,
        TheoremId::Transfer,
        TheoremId::PolarArea,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm2 => "thm2",
            TheoremId::Thm4 => "thm4",
            TheoremId::Thm5 => "thm5",
            TheoremId::Thm7a => "thm7a",
            TheoremId::Thm7b => "thm7b",
            TheoremId::Volume => "volume",
            TheoremId::Transfer => "transfer",
            TheoremId::PolarArea => "polar-area",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    /// Human-readable form of the inequality checked.
    pub label: String,
    pub measured: Rational,
    pub bound: Rational,
    pub strict: bool,
    pub verdict: Verdict,
    /// Exact witness values, already rendered (`p/q`, vectors as `(a, b)`).
    pub witness: Vec<(String, String)>,
}

impl BoundReport {
    pub fn new(
        theorem: TheoremId,
        label: impl Into<String>,
        measured: Rational,
        bound: Rational,
        strict: bool,
    ) -> Self {
        let ok = if strict { measured < bound } else { measured <= bound };
        Self {
            theorem,
            label: label.into(),
            measured,
            bound,
            strict,
            verdict: if ok { Verdict::Holds } else { Verdict::Violated },
            witness: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.witness.push((key.to_string(), value.into()));
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {} {} {} -> {}",
            self.theorem,
            self.label,
            format_rational(&self.measured),
            if self.strict { "<" } else { "<=" },
            format_rational(&self.bound),
            self.verdict.as_str()
        )
    }
}
