//! The complete invariant of a circle-valued Morse function: its critical
//! type together with the cohomology class it pulls back from the circle.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::graph::{validate, DecoratedReebGraph, Diagnostic, Sign, VertexKind};
use crate::homology::{check_closed_walk, cycle_basis, is_coboundary, HomologyError, SignedEdge};
use crate::rational::{floor_i, Q};
use crate::surface::{euler_characteristic, h1_free_rank, SurfaceDescriptor};

/// Counts of critical points per index plus the boundary sign function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CriticalType {
    pub c0: u32,
    pub c1: u32,
    pub c2: u32,
    pub sign: BTreeMap<String, Sign>,
}

impl CriticalType {
    pub fn new(c0: u32, c1: u32, c2: u32) -> Self {
        Self { c0, c1, c2, sign: BTreeMap::new() }
    }

    pub fn with_sign(mut self, label: &str, sign: Sign) -> Self {
        self.sign.insert(label.to_string(), sign);
        self
    }

    pub fn euler(&self) -> i64 {
        self.c0 as i64 - self.c1 as i64 + self.c2 as i64
    }

    pub fn counts(&self) -> (u32, u32, u32) {
        (self.c0, self.c1, self.c2)
    }
}

impl fmt::Display for CriticalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {{", self.c0, self.c1, self.c2)?;
        for (i, (l, s)) in self.sign.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}: {s}")?;
        }
        write!(f, "}})")
    }
}

/// Values of the pulled-back generator on the fixed basis of `H_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WindingVector(pub Vec<i64>);

impl WindingVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Each fixed surface-basis loop written as a closed walk in the graph.
pub type BasisMap = Vec<Vec<SignedEdge>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorseDescriptor {
    pub surface: SurfaceDescriptor,
    pub ctype: CriticalType,
    pub winding: WindingVector,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("invalid graph: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("no surface has Euler characteristic {chi} with {boundary} boundary circles and orientable = {orientable}")]
    Unsolvable { chi: i64, boundary: u32, orientable: bool },
    #[error("angle {0} is not a regular value")]
    NotRegular(Q),
    #[error("basis map has {got} loops, surface needs {expected}")]
    BasisLength { expected: usize, got: usize },
    #[error("basis loop {index}: {source}")]
    BasisLoop { index: usize, source: HomologyError },
    #[error(transparent)]
    Walk(#[from] HomologyError),
    #[error("walk displacement {0} is not an integer")]
    NonIntegral(Q),
    #[error("c0 - c1 + c2 = {counts} but the surface has Euler characteristic {chi}")]
    Euler { counts: i64, chi: i64 },
    #[error("boundary signs do not match the surface boundary labels")]
    SignKeys,
    #[error("winding vector has length {got}, surface needs {expected}")]
    WindingLength { expected: usize, got: usize },
    #[error(transparent)]
    Surface(#[from] crate::surface::SurfaceError),
}

impl MorseDescriptor {
    pub fn new(surface: SurfaceDescriptor, ctype: CriticalType, winding: WindingVector) -> Result<Self, InvariantError> {
        let d = Self { surface, ctype, winding };
        d.check()?;
        Ok(d)
    }

    pub fn check(&self) -> Result<(), InvariantError> {
        self.surface.check()?;
        let chi = euler_characteristic(&self.surface);
        if self.ctype.euler() != chi {
            return Err(InvariantError::Euler { counts: self.ctype.euler(), chi });
        }
        let mut labels = self.surface.boundary.clone();
        labels.sort();
        if !self.ctype.sign.keys().cloned().eq(labels.into_iter()) {
            return Err(InvariantError::SignKeys);
        }
        let rank = h1_free_rank(&self.surface);
        if self.winding.len() != rank {
            return Err(InvariantError::WindingLength { expected: rank, got: self.winding.len() });
        }
        Ok(())
    }
}

fn require_valid(g: &DecoratedReebGraph) -> Result<(), InvariantError> {
    let d = validate(g);
    if d.is_empty() {
        Ok(())
    } else {
        Err(InvariantError::Invalid(d))
    }
}

pub fn extract_critical_type(g: &DecoratedReebGraph) -> Result<CriticalType, InvariantError> {
    require_valid(g)?;
    let mut t = CriticalType::default();
    for v in g.vertices.values() {
        match &v.kind {
            VertexKind::Min => t.c0 += 1,
            VertexKind::Max => t.c2 += 1,
            VertexKind::Saddle | VertexKind::TwistSaddle => t.c1 += 1,
            VertexKind::Boundary { label, sign } => {
                t.sign.insert(label.clone(), *sign);
            }
            VertexKind::Regular => {}
        }
    }
    Ok(t)
}

/// Whether the underlying surface is orientable: no cross-cap saddles and the
/// twist cocycle is a coboundary.
pub fn is_orientable(g: &DecoratedReebGraph) -> Result<bool, InvariantError> {
    if g.count_kind(|k| *k == VertexKind::TwistSaddle) > 0 {
        return Ok(false);
    }
    if g.edges.values().all(|e| !e.twist) {
        return Ok(true);
    }
    Ok(is_coboundary(&g.multigraph(), &g.twist_bits())?)
}

pub fn reconstruct_surface(g: &DecoratedReebGraph) -> Result<SurfaceDescriptor, InvariantError> {
    let t = extract_critical_type(g)?;
    let chi = t.euler();
    let boundary = g.boundary_labels();
    let b = boundary.len() as i64;
    let orientable = is_orientable(g)?;
    let deficit = 2 - chi - b;
    let unsolvable = || InvariantError::Unsolvable { chi, boundary: b as u32, orientable };
    let genus = if orientable {
        if deficit < 0 || deficit % 2 != 0 {
            return Err(unsolvable());
        }
        deficit / 2
    } else {
        if deficit < 1 {
            return Err(unsolvable());
        }
        deficit
    };
    Ok(SurfaceDescriptor { orientable, genus: genus as u32, boundary })
}

/// Degree of `f` along a closed walk: the signed sum of displacements.
pub fn winding_on_cycle(g: &DecoratedReebGraph, cycle: &[SignedEdge]) -> Result<i64, InvariantError> {
    check_closed_walk(&g.multigraph(), cycle)?;
    let total: Q = cycle.iter().map(|&(e, s)| g.edges[&e].delta * Q::from(s as i128)).sum();
    if !total.is_integer() {
        return Err(InvariantError::NonIntegral(total));
    }
    Ok(total.to_integer() as i64)
}

pub fn is_regular(g: &DecoratedReebGraph, a: Q) -> bool {
    let a = crate::rational::frac(a);
    g.vertices.values().all(|v| !v.kind.blocks_regularity() || v.angle != a)
}

/// Number of times the edge passes through angle `a`, counted on the
/// half-open lift `(tail, tail + delta]`.
pub fn edge_crossings(g: &DecoratedReebGraph, e: crate::homology::EdgeId, a: Q) -> i64 {
    let e = &g.edges[&e];
    let t = g.vertices[&e.tail].angle;
    floor_i(t + e.delta - a) - floor_i(t - a)
}

/// Signed intersection number of a closed walk with the fiber over `a`.
pub fn fiber_crossing_degree(g: &DecoratedReebGraph, cycle: &[SignedEdge], a: Q) -> Result<i64, InvariantError> {
    if !is_regular(g, a) {
        return Err(InvariantError::NotRegular(a));
    }
    check_closed_walk(&g.multigraph(), cycle)?;
    Ok(cycle.iter().map(|&(e, s)| s as i64 * edge_crossings(g, e, a)).sum())
}

pub fn descriptor_of(g: &DecoratedReebGraph, basis: &BasisMap) -> Result<MorseDescriptor, InvariantError> {
    let surface = reconstruct_surface(g)?;
    let ctype = extract_critical_type(g)?;
    let rank = h1_free_rank(&surface);
    if basis.len() != rank {
        return Err(InvariantError::BasisLength { expected: rank, got: basis.len() });
    }
    let mut winding = Vec::with_capacity(rank);
    for (index, cyc) in basis.iter().enumerate() {
        check_closed_walk(&g.multigraph(), cyc).map_err(|source| InvariantError::BasisLoop { index, source })?;
        winding.push(winding_on_cycle(g, cyc)?);
    }
    MorseDescriptor::new(surface, ctype, WindingVector(winding))
}

/// A basis map that sends the first loops to the graph's fundamental cycles
/// and the rest to empty walks. Used when a graph comes without a marking.
pub fn graph_basis_map(g: &DecoratedReebGraph) -> Result<BasisMap, InvariantError> {
    let rank = h1_free_rank(&reconstruct_surface(g)?);
    let mut cycles = cycle_basis(&g.multigraph()).cycles;
    cycles.truncate(rank);
    cycles.resize(rank, Vec::new());
    Ok(cycles)
}

/// Non-negative generator of the subgroup of `Z` spanned by `values`.
pub fn subgroup_generator(values: impl IntoIterator<Item = i64>) -> i64 {
    values.into_iter().fold(0i64, |acc, v| num_integer::Integer::gcd(&acc, &v))
}

/// Generator of the image of `f^*` computed from the graph's own cycles.
pub fn winding_subgroup(g: &DecoratedReebGraph) -> Result<i64, InvariantError> {
    let basis = cycle_basis(&g.multigraph());
    let mut ws = Vec::new();
    for c in &basis.cycles {
        ws.push(winding_on_cycle(g, c)?);
    }
    Ok(subgroup_generator(ws))
}

pub fn is_zero_angle(a: Q) -> bool {
    a.is_zero()
}
