//! Spanning-forest cycle bases and Z/2 coboundary tests on multigraphs.

use std::collections::{BTreeMap, VecDeque};

pub type VertexId = u32;
pub type EdgeId = u32;

/// One step of a closed walk: an edge traversed forwards (`+1`) or backwards (`-1`).
pub type SignedEdge = (EdgeId, i8);

/// Directed multigraph; loops and parallel edges are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(EdgeId, VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} has an unknown endpoint")]
    UnknownEndpoint(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("walk is not closed")]
    NotClosed,
    #[error("walk references unknown edge {0}")]
    UnknownEdge(EdgeId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Vec<SignedEdge>>,
}

type Adjacency = BTreeMap<VertexId, Vec<(EdgeId, VertexId, i8)>>;

impl Multigraph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<(EdgeId, VertexId, VertexId)>) -> Self {
        Self { vertices, edges }
    }

    pub fn check(&self) -> Result<(), HomologyError> {
        let vs: std::collections::BTreeSet<_> = self.vertices.iter().collect();
        let mut es = std::collections::BTreeSet::new();
        for &(e, t, h) in &self.edges {
            if !vs.contains(&t) || !vs.contains(&h) {
                return Err(HomologyError::UnknownEndpoint(e));
            }
            if !es.insert(e) {
                return Err(HomologyError::DuplicateEdge(e));
            }
        }
        Ok(())
    }

    /// Adjacency lists ordered by edge id; a loop appears once in each direction.
    fn adjacency(&self) -> Adjacency {
        let mut adj: Adjacency = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        let mut edges = self.edges.clone();
        edges.sort();
        for (e, t, h) in edges {
            adj.entry(t).or_default().push((e, h, 1));
            adj.entry(h).or_default().push((e, t, -1));
        }
        adj
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let adj = self.adjacency();
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        for &root in adj.keys() {
            if seen.contains_key(&root) {
                continue;
            }
            let mut comp = vec![root];
            seen.insert(root, ());
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(_, w, _) in &adj[&v] {
                    if seen.insert(w, ()).is_none() {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Deterministic BFS spanning forest: `parent[v] = (edge, parent vertex, sign)`
    /// where `sign` is the direction in which the edge is traversed from parent to `v`.
    fn spanning_forest(&self) -> (BTreeMap<VertexId, Option<(EdgeId, VertexId, i8)>>, Vec<EdgeId>) {
        let adj = self.adjacency();
        let mut parent: BTreeMap<VertexId, Option<(EdgeId, VertexId, i8)>> = BTreeMap::new();
        let mut tree_edges = Vec::new();
        for &root in adj.keys() {
            if parent.contains_key(&root) {
                continue;
            }
            parent.insert(root, None);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(e, w, s) in &adj[&v] {
                    if !parent.contains_key(&w) {
                        parent.insert(w, Some((e, v, s)));
                        tree_edges.push(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        (parent, tree_edges)
    }
}

/// Walk from `v` up to its forest root as signed edges.
fn path_to_root(
    parent: &BTreeMap<VertexId, Option<(EdgeId, VertexId, i8)>>,
    mut v: VertexId,
) -> Vec<(SignedEdge, VertexId)> {
    let mut out = Vec::new();
    while let Some(Some((e, p, s))) = parent.get(&v) {
        out.push(((*e, -*s), *p));
        v = *p;
    }
    out
}

/// Fundamental cycles of the lowest-id-first BFS spanning forest, one per
/// non-tree edge in increasing edge id order. Each cycle starts with its
/// non-tree edge traversed forwards.
pub fn cycle_basis(g: &Multigraph) -> CycleBasis {
    let (parent, tree) = g.spanning_forest();
    let tree: std::collections::BTreeSet<_> = tree.into_iter().collect();
    let mut edges = g.edges.clone();
    edges.sort();
    let mut cycles = Vec::new();
    for (e, t, h) in edges {
        if tree.contains(&e) {
            continue;
        }
        // e: t -> h, then tree path h -> lca -> t.
        let up_h = path_to_root(&parent, h);
        let up_t = path_to_root(&parent, t);
        let anc_h: Vec<VertexId> = std::iter::once(h).chain(up_h.iter().map(|&(_, v)| v)).collect();
        let anc_t: Vec<VertexId> = std::iter::once(t).chain(up_t.iter().map(|&(_, v)| v)).collect();
        let lca = *anc_h.iter().find(|v| anc_t.contains(v)).expect("same component");
        let ih = anc_h.iter().position(|&v| v == lca).unwrap();
        let it = anc_t.iter().position(|&v| v == lca).unwrap();
        let mut cyc = vec![(e, 1i8)];
        cyc.extend(up_h[..ih].iter().map(|&(se, _)| se));
        cyc.extend(up_t[..it].iter().rev().map(|&((e2, s), _)| (e2, -s)));
        cycles.push(cyc);
    }
    CycleBasis { cycles }
}

/// Start and end vertex of a walk, or `None` for the empty walk.
pub fn walk_endpoints(g: &Multigraph, walk: &[SignedEdge]) -> Result<Option<(VertexId, VertexId)>, HomologyError> {
    let ends: BTreeMap<EdgeId, (VertexId, VertexId)> = g.edges.iter().map(|&(e, t, h)| (e, (t, h))).collect();
    let mut start = None;
    let mut cur: Option<VertexId> = None;
    for &(e, s) in walk {
        let &(t, h) = ends.get(&e).ok_or(HomologyError::UnknownEdge(e))?;
        let (from, to) = if s > 0 { (t, h) } else { (h, t) };
        match cur {
            None => start = Some(from),
            Some(c) if c != from => return Err(HomologyError::NotClosed),
            _ => {}
        }
        cur = Some(to);
    }
    Ok(start.zip(cur))
}

pub fn check_closed_walk(g: &Multigraph, walk: &[SignedEdge]) -> Result<(), HomologyError> {
    match walk_endpoints(g, walk)? {
        Some((a, b)) if a != b => Err(HomologyError::NotClosed),
        _ => Ok(()),
    }
}

/// Whether `bits` is the coboundary of some 0/1 vertex labelling.
pub fn is_coboundary(g: &Multigraph, bits: &BTreeMap<EdgeId, u8>) -> Result<bool, HomologyError> {
    g.check()?;
    let adj = g.adjacency();
    let Some(&root) = adj.keys().next() else { return Ok(true) };
    // Two-colour by BFS, failing on the first edge that disagrees.
    let mut pot: BTreeMap<VertexId, u8> = BTreeMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    let mut consistent = true;
    while let Some(v) = queue.pop_front() {
        for &(e, w, _) in &adj[&v] {
            let want = pot[&v] ^ (bits.get(&e).copied().unwrap_or(0) & 1);
            match pot.get(&w) {
                Some(&p) => consistent &= p == want,
                None => {
                    pot.insert(w, want);
                    queue.push_back(w);
                }
            }
        }
    }
    if pot.len() != adj.len() {
        return Err(HomologyError::Disconnected);
    }
    Ok(consistent)
}
