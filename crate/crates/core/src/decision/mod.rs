//! Deciding whether two Morse functions are homotopic through Morse
//! functions, from their invariants or by exhibiting moves.

mod constructive;

use std::collections::BTreeMap;
use std::fmt;

pub use constructive::{
    certifies, common_regular_angle, decide_constructive, join, normalize, search_certificate, Bounds, Constructive,
    Normalized,
};

use crate::graph::DecoratedReebGraph;
use crate::invariants::{descriptor_of, BasisMap, InvariantError, MorseDescriptor};
use crate::moves::MoveCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountIndex {
    C0,
    C1,
    C2,
}

impl CountIndex {
    pub fn name(self) -> &'static str {
        match self {
            CountIndex::C0 => "c0",
            CountIndex::C1 => "c1",
            CountIndex::C2 => "c2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "c0" => Some(CountIndex::C0),
            "c1" => Some(CountIndex::C1),
            "c2" => Some(CountIndex::C2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Reason {
    Ok,
    WindingMismatch(usize),
    CountMismatch(CountIndex),
    SignMismatch(String),
    SurfaceMismatch,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Ok => f.write_str("ok"),
            Reason::WindingMismatch(i) => write!(f, "winding-mismatch({i})"),
            Reason::CountMismatch(c) => write!(f, "count-mismatch({})", c.name()),
            Reason::SignMismatch(l) => write!(f, "sign-mismatch({l})"),
            Reason::SurfaceMismatch => f.write_str("surface-mismatch"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decision {
    pub equivalent: bool,
    pub reason: Reason,
}

impl Decision {
    pub fn from_reason(reason: Reason) -> Self {
        Self { equivalent: reason == Reason::Ok, reason }
    }
}

/// Outcome of a certificate search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchStatus {
    Found,
    Exhausted,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "found" => Some(SearchStatus::Found),
            "exhausted" => Some(SearchStatus::Exhausted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecisionError {
    #[error("descriptors live on different surfaces")]
    SurfaceMismatch,
    #[error("winding vector is not zero")]
    NonzeroWinding,
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("unknown decision strategy {0:?}")]
    UnknownStrategy(String),
}

/// True iff the winding vectors agree.
pub fn homotopic(f: &MorseDescriptor, g: &MorseDescriptor) -> Result<bool, DecisionError> {
    if !f.surface.same_marked_surface(&g.surface) {
        return Err(DecisionError::SurfaceMismatch);
    }
    Ok(f.winding == g.winding)
}

fn compare_types(f: &MorseDescriptor, g: &MorseDescriptor) -> Reason {
    let (a, b) = (&f.ctype, &g.ctype);
    for (i, x, y) in [(CountIndex::C0, a.c0, b.c0), (CountIndex::C1, a.c1, b.c1), (CountIndex::C2, a.c2, b.c2)] {
        if x != y {
            return Reason::CountMismatch(i);
        }
    }
    let labels: std::collections::BTreeSet<&String> = a.sign.keys().chain(b.sign.keys()).collect();
    for l in labels {
        if a.sign.get(l) != b.sign.get(l) {
            return Reason::SignMismatch(l.clone());
        }
    }
    Reason::Ok
}

/// Compare critical types only; both functions must be null-homotopic.
pub fn decide_real(f: &MorseDescriptor, g: &MorseDescriptor) -> Result<Decision, DecisionError> {
    if f.winding.0.iter().chain(&g.winding.0).any(|&w| w != 0) {
        return Err(DecisionError::NonzeroWinding);
    }
    if !f.surface.same_marked_surface(&g.surface) {
        return Ok(Decision::from_reason(Reason::SurfaceMismatch));
    }
    Ok(Decision::from_reason(compare_types(f, g)))
}

/// Compare winding vectors, then counts, then boundary signs.
pub fn decide_circle(f: &MorseDescriptor, g: &MorseDescriptor) -> Decision {
    if !f.surface.same_marked_surface(&g.surface) || f.winding.0.len() != g.winding.0.len() {
        return Decision::from_reason(Reason::SurfaceMismatch);
    }
    if let Some(i) = f.winding.0.iter().zip(&g.winding.0).position(|(x, y)| x != y) {
        return Decision::from_reason(Reason::WindingMismatch(i));
    }
    Decision::from_reason(compare_types(f, g))
}

/// A graph with a choice of images for the surface's basis loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marked {
    pub graph: DecoratedReebGraph,
    pub basis: BasisMap,
}

impl Marked {
    pub fn new(graph: DecoratedReebGraph, basis: BasisMap) -> Self {
        Self { graph, basis }
    }

    pub fn descriptor(&self) -> Result<MorseDescriptor, InvariantError> {
        descriptor_of(&self.graph, &self.basis)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub decision: Decision,
    pub search: Option<SearchStatus>,
    pub certificate: Option<MoveCertificate>,
}

impl Outcome {
    pub fn plain(decision: Decision) -> Self {
        Self { decision, search: None, certificate: None }
    }
}

pub trait Decider: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, f: &Marked, g: &Marked, bounds: &Bounds) -> Result<Outcome, DecisionError>;
}

/// Invariant comparison including the homotopy class.
pub struct Circle;

impl Decider for Circle {
    fn name(&self) -> &'static str {
        "circle"
    }

    fn decide(&self, f: &Marked, g: &Marked, _: &Bounds) -> Result<Outcome, DecisionError> {
        Ok(Outcome::plain(decide_circle(&f.descriptor()?, &g.descriptor()?)))
    }
}

/// Critical type comparison for null-homotopic functions.
pub struct Real;

impl Decider for Real {
    fn name(&self) -> &'static str {
        "real"
    }

    fn decide(&self, f: &Marked, g: &Marked, _: &Bounds) -> Result<Outcome, DecisionError> {
        Ok(Outcome::plain(decide_real(&f.descriptor()?, &g.descriptor()?)?))
    }
}

pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Decider>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, d: Box<dyn Decider>) {
        self.entries.insert(d.name(), d);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Decider, DecisionError> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| DecisionError::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Circle));
        r.register(Box::new(Real));
        r.register(Box::new(Constructive));
        r
    }
}

#[cfg(test)]
mod tests;
