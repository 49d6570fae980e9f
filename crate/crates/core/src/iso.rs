//! Isomorphisms of decorated Reeb graphs by backtracking search.
//!
//! Twist bits are compared up to gauge: flipping the local orientation at a
//! vertex toggles the bit of every edge at that vertex (loops are unchanged).

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::DecoratedReebGraph;
use crate::homology::{EdgeId, VertexId};
use crate::moves::CircleMap;
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleRule {
    /// Corresponding vertices have equal angles.
    Exact,
    /// Some orientation-preserving circle homeomorphism carries every angle
    /// to its image's angle.
    CyclicOrder,
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
    /// Vertices of the source whose local orientation is flipped.
    pub gauge: BTreeSet<VertexId>,
}

impl Isomorphism {
    /// The circle map realizing the angle correspondence, if any.
    pub fn circle_map(&self, g: &DecoratedReebGraph, h: &DecoratedReebGraph) -> Option<CircleMap> {
        let pairs: Vec<(Q, Q)> = self.vertices.iter().map(|(v, w)| (g.vertices[v].angle, h.vertices[w].angle)).collect();
        CircleMap::through(&pairs)
    }
}

struct Search<'a> {
    g: &'a DecoratedReebGraph,
    h: &'a DecoratedReebGraph,
    rule: AngleRule,
    order: Vec<VertexId>,
    /// Edge ids between ordered vertex pairs.
    ge: BTreeMap<(VertexId, VertexId), Vec<EdgeId>>,
    he: BTreeMap<(VertexId, VertexId), Vec<EdgeId>>,
    map: BTreeMap<VertexId, VertexId>,
    used: BTreeSet<VertexId>,
    accept: &'a mut dyn FnMut(&BTreeMap<VertexId, VertexId>) -> bool,
}

fn adjacency(g: &DecoratedReebGraph) -> BTreeMap<(VertexId, VertexId), Vec<EdgeId>> {
    let mut m: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for e in g.edges.values() {
        m.entry((e.tail, e.head)).or_default().push(e.id);
    }
    m
}

/// BFS order so each new vertex is adjacent to an earlier one when possible.
fn search_order(g: &DecoratedReebGraph, seed: &BTreeMap<VertexId, VertexId>) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = seed.keys().copied().collect();
    let mut seen: BTreeSet<VertexId> = order.iter().copied().collect();
    let mut nbrs: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for e in g.edges.values() {
        nbrs.entry(e.tail).or_default().insert(e.head);
        nbrs.entry(e.head).or_default().insert(e.tail);
    }
    let mut i = 0;
    loop {
        while i < order.len() {
            let v = order[i];
            for &w in nbrs.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    order.push(w);
                }
            }
            i += 1;
        }
        match g.vertices.keys().find(|v| !seen.contains(v)) {
            Some(&v) => {
                seen.insert(v);
                order.push(v);
            }
            None => return order,
        }
    }
}

impl<'a> Search<'a> {
    fn count(m: &BTreeMap<(VertexId, VertexId), Vec<EdgeId>>, a: VertexId, b: VertexId) -> usize {
        m.get(&(a, b)).map_or(0, Vec::len)
    }

    fn compatible(&self, v: VertexId, w: VertexId) -> bool {
        let (gv, hw) = (&self.g.vertices[&v], &self.h.vertices[&w]);
        if gv.kind != hw.kind || (self.rule == AngleRule::Exact && gv.angle != hw.angle) {
            return false;
        }
        if self.g.in_edges(v).len() != self.h.in_edges(w).len() || self.g.out_edges(v).len() != self.h.out_edges(w).len() {
            return false;
        }
        if Self::count(&self.ge, v, v) != Self::count(&self.he, w, w) {
            return false;
        }
        self.map.iter().all(|(&u, &x)| {
            Self::count(&self.ge, u, v) == Self::count(&self.he, x, w)
                && Self::count(&self.ge, v, u) == Self::count(&self.he, w, x)
        })
    }

    fn run(&mut self, depth: usize) -> Option<Isomorphism> {
        if depth == self.order.len() {
            return self.finish();
        }
        let v = self.order[depth];
        if let Some(&w) = self.map.get(&v) {
            // Seeded vertex: check against the other seeded ones placed so far.
            let saved = self.map.remove(&v);
            let ok = self.compatible(v, w);
            self.map.insert(v, saved.unwrap());
            return if ok { self.run(depth + 1) } else { None };
        }
        let candidates: Vec<VertexId> = self.h.vertices.keys().copied().filter(|w| !self.used.contains(w)).collect();
        for w in candidates {
            if !self.compatible(v, w) {
                continue;
            }
            self.map.insert(v, w);
            self.used.insert(w);
            if let Some(iso) = self.run(depth + 1) {
                return Some(iso);
            }
            self.map.remove(&v);
            self.used.remove(&w);
        }
        None
    }

    fn finish(&mut self) -> Option<Isomorphism> {
        if self.rule == AngleRule::CyclicOrder {
            let pairs: Vec<(Q, Q)> =
                self.map.iter().map(|(v, w)| (self.g.vertices[v].angle, self.h.vertices[w].angle)).collect();
            CircleMap::through(&pairs)?;
        }
        if !(self.accept)(&self.map) {
            return None;
        }
        let gauge = self.solve_gauge()?;
        let flip = |v: &VertexId| gauge.contains(v);
        let mut edges = BTreeMap::new();
        for (&(a, b), ids) in &self.ge {
            let c = flip(&a) ^ flip(&b);
            let mut targets: Vec<EdgeId> = self.he[&(self.map[&a], self.map[&b])].clone();
            for &e in ids {
                let want = self.g.edges[&e].twist ^ c;
                let k = targets.iter().position(|f| self.h.edges[f].twist == want)?;
                edges.insert(e, targets.remove(k));
            }
        }
        Some(Isomorphism { vertices: self.map.clone(), edges, gauge })
    }

    /// Find vertex flips making every parallel class of edges match.
    fn solve_gauge(&self) -> Option<BTreeSet<VertexId>> {
        // Parity constraints f(a) ^ f(b) = c as a graph; two-colour it.
        let mut cons: BTreeMap<VertexId, Vec<(VertexId, bool)>> = BTreeMap::new();
        for (&(a, b), ids) in &self.ge {
            let theirs = &self.he[&(self.map[&a], self.map[&b])];
            let ones = |it: &mut dyn Iterator<Item = bool>| it.filter(|&t| t).count();
            let mine_ones = ones(&mut ids.iter().map(|e| self.g.edges[e].twist));
            let their_ones = ones(&mut theirs.iter().map(|e| self.h.edges[e].twist));
            let n = ids.len();
            let same = mine_ones == their_ones;
            let flipped = n - mine_ones == their_ones && a != b;
            match (same, flipped) {
                (false, false) => return None,
                (true, true) => {}
                (c0, _) => {
                    let c = !c0;
                    cons.entry(a).or_default().push((b, c));
                    cons.entry(b).or_default().push((a, c));
                }
            }
        }
        let mut colour: BTreeMap<VertexId, bool> = BTreeMap::new();
        for &start in self.g.vertices.keys() {
            if colour.contains_key(&start) {
                continue;
            }
            colour.insert(start, false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = colour[&u];
                for &(w, c) in cons.get(&u).into_iter().flatten() {
                    match colour.get(&w) {
                        Some(&cw) if cw != cu ^ c => return None,
                        Some(_) => {}
                        None => {
                            colour.insert(w, cu ^ c);
                            stack.push(w);
                        }
                    }
                }
            }
        }
        Some(colour.into_iter().filter(|(_, c)| *c).map(|(v, _)| v).collect())
    }
}

/// Find an isomorphism `g -> h` extending `seed`.
pub fn find_isomorphism(
    g: &DecoratedReebGraph,
    h: &DecoratedReebGraph,
    rule: AngleRule,
    seed: &BTreeMap<VertexId, VertexId>,
) -> Option<Isomorphism> {
    find_isomorphism_where(g, h, rule, seed, &mut |_| true)
}

/// As [`find_isomorphism`], skipping vertex maps rejected by `accept`.
pub fn find_isomorphism_where(
    g: &DecoratedReebGraph,
    h: &DecoratedReebGraph,
    rule: AngleRule,
    seed: &BTreeMap<VertexId, VertexId>,
    accept: &mut dyn FnMut(&BTreeMap<VertexId, VertexId>) -> bool,
) -> Option<Isomorphism> {
    if g.vertices.len() != h.vertices.len() || g.edges.len() != h.edges.len() {
        return None;
    }
    let mut s = Search {
        g,
        h,
        rule,
        order: search_order(g, seed),
        ge: adjacency(g),
        he: adjacency(h),
        map: seed.clone(),
        used: seed.values().copied().collect(),
        accept,
    };
    if s.used.len() != seed.len() {
        return None;
    }
    s.run(0)
}

/// Isomorphic as decorated graphs: same kinds, labels, angles and
/// displacements, twist bits up to gauge.
pub fn isomorphic(g: &DecoratedReebGraph, h: &DecoratedReebGraph) -> bool {
    find_isomorphism(g, h, AngleRule::Exact, &BTreeMap::new()).is_some()
}

/// Isomorphic after reparametrizing the circle.
pub fn isomorphic_up_to_reangle(g: &DecoratedReebGraph, h: &DecoratedReebGraph) -> bool {
    find_isomorphism(g, h, AngleRule::CyclicOrder, &BTreeMap::new()).is_some()
}
