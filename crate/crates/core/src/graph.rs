//! Labeled undirected graphs with stable edge identifiers.
//!
//! Vertices are integers `0..n` with an explicit *active* subset; removing a
//! vertex deactivates it instead of relabeling, so bookkeeping that refers to
//! vertex names (side membership, returned vertices) survives any sequence of
//! removals. Parallel edges are stored as separate slots so that a class of a
//! color partition can own individual copies.

use std::collections::HashMap;

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::bitset::{VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};

/// Stable identifier of an edge slot. Identifiers are never reused: an edge
/// that disappears (deleted, or an endpoint removed) leaves a dead slot.
pub type EdgeId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    fn new(a: usize, b: usize) -> Edge {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }

    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }

    pub fn shares_vertex(&self, o: &Edge) -> bool {
        self.touches(o.u) || self.touches(o.v)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    active: VertexSet,
    edges: Vec<Edge>,
    present: Vec<bool>,
    bipartition: Option<(VertexSet, VertexSet)>,
}

/// Wire form: `{"n": int, "edges": [[u,v],...], "bipartition": [[..],[..]]?,
/// "multiplicity": [int,...]?}`. A multiplicity entry expands its edge into
/// that many parallel slots, in input order.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bipartition: Option<(Vec<usize>, Vec<usize>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity: Option<Vec<u32>>,
}

impl Graph {
    /// Edgeless graph on vertices `0..n`, all active.
    pub fn empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::budget(format!(
                "graphs support at most {MAX_VERTICES} vertices, got {n}"
            )));
        }
        Ok(Graph {
            n,
            active: VertexSet::full(n),
            edges: Vec::new(),
            present: Vec::new(),
            bipartition: None,
        })
    }

    /// Builds a graph from an edge list; repeated pairs become parallel slots.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.push_edge(u, v)?;
        }
        Ok(g)
    }

    /// Appends a new edge slot and returns its id.
    pub fn push_edge(&mut self, u: usize, v: usize) -> Result<EdgeId> {
        if u == v {
            return Err(Error::invalid(format!("self-loop at vertex {u}")));
        }
        if !self.active.contains(u) || !self.active.contains(v) {
            return Err(Error::invalid(format!(
                "edge ({u},{v}) has an endpoint outside the active vertex set"
            )));
        }
        if let Some((a, b)) = self.bipartition {
            let crosses = (a.contains(u) && b.contains(v)) || (b.contains(u) && a.contains(v));
            if !crosses {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) does not cross the declared bipartition"
                )));
            }
        }
        self.edges.push(Edge::new(u, v));
        self.present.push(true);
        Ok(self.edges.len() - 1)
    }

    pub fn set_bipartition(&mut self, a: VertexSet, b: VertexSet) -> Result<()> {
        if a.intersects(b) {
            return Err(Error::invalid("bipartition sides intersect"));
        }
        if a.union(b) != self.active {
            return Err(Error::invalid(
                "bipartition sides must cover exactly the active vertices",
            ));
        }
        for e in self.edge_ids() {
            let Edge { u, v } = self.edges[e];
            let crosses = (a.contains(u) && b.contains(v)) || (b.contains(u) && a.contains(v));
            if !crosses {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) does not cross the declared bipartition"
                )));
            }
        }
        self.bipartition = Some((a, b));
        Ok(())
    }

    pub fn path(k: usize) -> Graph {
        let edges: Vec<_> = (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(k, &edges).expect("path construction")
    }

    pub fn cycle(k: usize) -> Graph {
        assert!(k >= 3, "cycles need at least 3 vertices");
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Graph::from_edges(k, &edges).expect("cycle construction")
    }

    pub fn complete(k: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        Graph::from_edges(k, &edges).expect("complete construction")
    }

    /// K_{a,b} with side A on `0..a` and side B on `a..a+b`; edge ids are
    /// `u*b + (v-a)` in row-major order.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = Graph::empty(a + b).expect("complete_bipartite size");
        g.bipartition = Some((
            (0..a).collect::<VertexSet>(),
            (a..a + b).collect::<VertexSet>(),
        ));
        for u in 0..a {
            for v in a..a + b {
                g.push_edge(u, v).expect("bipartite edge");
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn active_vertices(&self) -> VertexSet {
        self.active
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        self.bipartition
    }

    /// Number of edge slots ever created (dead ones included).
    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        e < self.present.len() && self.present[e]
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<Edge> {
        if !self.has_edge(e) {
            return Err(Error::invalid(format!("edge id {e} is not present")));
        }
        Ok(self.edges[e])
    }

    /// Present edge ids, ascending.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i))
    }

    pub fn edge_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn edges_at(&self, v: usize) -> impl Iterator<Item = EdgeId> + '_ {
        self.edge_ids().filter(move |&e| self.edges[e].touches(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges_at(v).count()
    }

    pub fn max_degree(&self) -> usize {
        self.active
            .iter()
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for e in self.edges_at(v) {
            s.insert(self.edges[e].other(v));
        }
        s
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_ids()
            .any(|e| self.edges[e].touches(u) && self.edges[e].touches(v))
    }

    /// Multiplicity of the (u,v) pair among present slots.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let probe = Edge::new(u, v);
        self.edge_ids().filter(|&e| self.edges[e] == probe).count()
    }

    /// True when no two present slots carry the same vertex pair.
    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<Edge> = self.edge_ids().map(|e| self.edges[e]).collect();
        let len = seen.len();
        seen.sort_by_key(|e| (e.u, e.v));
        seen.dedup();
        seen.len() == len
    }

    pub fn require_simple(&self, op: &str) -> Result<()> {
        if self.is_simple() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{op} requires a simple graph (multiplicity 1 everywhere)"
            )))
        }
    }

    pub fn isolated_active_vertices(&self) -> VertexSet {
        let mut covered = VertexSet::EMPTY;
        for e in self.edge_ids() {
            covered.insert(self.edges[e].u);
            covered.insert(self.edges[e].v);
        }
        self.active.difference(covered)
    }

    /// The line graph: one vertex per edge slot of `self` (dead slots stay
    /// inactive), with two slots adjacent iff the underlying edges share an
    /// endpoint. Parallel edges share both endpoints, hence become adjacent.
    pub fn line_graph(&self) -> Result<Graph> {
        let ids: Vec<EdgeId> = self.edge_ids().collect();
        let mut lg = Graph {
            n: self.edges.len(),
            active: ids.iter().copied().collect(),
            edges: Vec::new(),
            present: Vec::new(),
            bipartition: None,
        };
        if lg.n > MAX_VERTICES {
            return Err(Error::budget(format!(
                "line graph would have {} vertices (max {MAX_VERTICES})",
                lg.n
            )));
        }
        for (i, &e) in ids.iter().enumerate() {
            for &f in &ids[i + 1..] {
                if self.edges[e].shares_vertex(&self.edges[f]) {
                    lg.edges.push(Edge::new(e, f));
                    lg.present.push(true);
                }
            }
        }
        Ok(lg)
    }

    /// Restriction to `s`: keeps labels, drops edges leaving `s`.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<Graph> {
        if !s.is_subset_of(self.active) {
            return Err(Error::invalid(
                "induced subgraph: requested set is not a subset of the active vertices",
            ));
        }
        let mut g = self.clone();
        g.active = s;
        for e in 0..g.edges.len() {
            if g.present[e] && !(s.contains(g.edges[e].u) && s.contains(g.edges[e].v)) {
                g.present[e] = false;
            }
        }
        g.bipartition = self
            .bipartition
            .map(|(a, b)| (a.intersection(s), b.intersection(s)));
        Ok(g)
    }

    /// Removes exactly the edge slot `e`; all vertices stay.
    pub fn delete_edge(&self, e: EdgeId) -> Result<Graph> {
        if !self.has_edge(e) {
            return Err(Error::invalid(format!("delete_edge: edge id {e} not present")));
        }
        let mut g = self.clone();
        g.present[e] = false;
        Ok(g)
    }

    /// Explosion `G*e`: removes both endpoints of `e`, all their neighbors,
    /// and every edge incident to a removed vertex.
    pub fn explode_edge(&self, e: EdgeId) -> Result<Graph> {
        if !self.has_edge(e) {
            return Err(Error::invalid(format!("explode_edge: edge id {e} not present")));
        }
        let Edge { u, v } = self.edges[e];
        let mut dead = VertexSet::singleton(u).union(VertexSet::singleton(v));
        dead = dead.union(self.neighbors(u)).union(self.neighbors(v));
        self.induced_subgraph(self.active.difference(dead))
    }

    /// Label-sensitive canonical key: equal exactly for identical
    /// (vertex-set, edge-set) states. Suitable as a memoization key for
    /// subgraphs of one root graph, where labels persist.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 4 * self.edges.len());
        out.extend_from_slice(&(self.n as u64).to_be_bytes());
        out.extend_from_slice(&self.active.0.to_be_bytes());
        let mut pairs: Vec<Edge> = self.edge_ids().map(|e| self.edges[e]).collect();
        pairs.sort_by_key(|e| (e.u, e.v));
        for e in pairs {
            out.extend_from_slice(&(e.u as u16).to_be_bytes());
            out.extend_from_slice(&(e.v as u16).to_be_bytes());
        }
        out
    }

    /// Isomorphism-invariant key: minimum label-sensitive key over all
    /// relabelings of the active vertices, pruned by iterated degree
    /// refinement. Exponential in the worst case; intended for small graphs.
    pub fn canonical_key_isomorphism(&self, vertex_cap: usize) -> Result<Vec<u8>> {
        let verts = self.active.to_vec();
        if verts.len() > vertex_cap {
            return Err(Error::budget(format!(
                "canonical labeling capped at {vertex_cap} vertices, got {}",
                verts.len()
            )));
        }
        // Refined color per vertex: iterate (color, sorted neighbor colors).
        let mut color: HashMap<usize, u64> = verts.iter().map(|&v| (v, self.degree(v) as u64)).collect();
        for _ in 0..verts.len() {
            let mut sig: Vec<(usize, (u64, Vec<u64>))> = verts
                .iter()
                .map(|&v| {
                    let mut ns: Vec<u64> = self.neighbors(v).iter().map(|w| color[&w]).collect();
                    ns.sort_unstable();
                    (v, (color[&v], ns))
                })
                .collect();
            sig.sort_by(|a, b| a.1.cmp(&b.1));
            let mut next: HashMap<usize, u64> = HashMap::new();
            let mut c = 0u64;
            for i in 0..sig.len() {
                if i > 0 && sig[i].1 != sig[i - 1].1 {
                    c += 1;
                }
                next.insert(sig[i].0, c);
            }
            if next == color {
                break;
            }
            color = next;
        }
        // Backtrack over permutations consistent with the color classes.
        let mut order: Vec<usize> = verts.clone();
        order.sort_by_key(|v| (color[v], *v));
        let mut best: Option<Vec<u8>> = None;
        let mut assignment: Vec<usize> = Vec::with_capacity(order.len());
        let mut used = vec![false; order.len()];
        self.canonical_search(&order, &color, &mut assignment, &mut used, &mut best);
        Ok(best.expect("at least one labeling"))
    }

    fn canonical_search(
        &self,
        order: &[usize],
        color: &HashMap<usize, u64>,
        assignment: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<Vec<u8>>,
    ) {
        let pos = assignment.len();
        if pos == order.len() {
            let key = self.relabel_key(assignment);
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        // Only vertices sharing the refined color of the canonical slot can
        // occupy it; other choices cannot yield the minimum key.
        let slot_color = color[&order[pos]];
        for (i, &v) in order.iter().enumerate() {
            if used[i] || color[&v] != slot_color {
                continue;
            }
            used[i] = true;
            assignment.push(v);
            self.canonical_search(order, color, assignment, used, best);
            assignment.pop();
            used[i] = false;
        }
    }

    /// Key of the graph relabeled so that `assignment[i]` becomes vertex `i`.
    fn relabel_key(&self, assignment: &[usize]) -> Vec<u8> {
        let index: HashMap<usize, usize> = assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut pairs: Vec<(usize, usize)> = self
            .edge_ids()
            .map(|e| {
                let a = index[&self.edges[e].u];
                let b = index[&self.edges[e].v];
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        pairs.sort_unstable();
        let mut out = Vec::with_capacity(16 + 4 * pairs.len());
        out.extend_from_slice(&(assignment.len() as u64).to_be_bytes());
        for (a, b) in pairs {
            out.extend_from_slice(&(a as u16).to_be_bytes());
            out.extend_from_slice(&(b as u16).to_be_bytes());
        }
        out
    }

    /// Exact maximum matching size. Bipartite graphs use augmenting paths;
    /// general graphs fall back to a memoized branch over the lowest active
    /// vertex, which is exact but exponential, hence capped.
    pub fn max_matching(&self) -> Result<usize> {
        if let Some((a, _)) = self.bipartition {
            return Ok(self.bipartite_matching(a));
        }
        if self.active_count() > 24 {
            return Err(Error::budget(
                "max_matching on non-bipartite graphs is capped at 24 vertices",
            ));
        }
        let adj: Vec<VertexSet> = (0..self.n).map(|v| self.neighbors(v)).collect();
        let mut memo: HashMap<u128, usize> = HashMap::new();
        Ok(matching_rec(&adj, self.active, &mut memo))
    }

    fn bipartite_matching(&self, side_a: VertexSet) -> usize {
        let left: Vec<usize> = side_a.intersection(self.active).to_vec();
        let mut matched: HashMap<usize, usize> = HashMap::new(); // right -> left
        let mut size = 0;
        for &u in &left {
            let mut visited = VertexSet::EMPTY;
            if self.augment(u, &mut visited, &mut matched) {
                size += 1;
            }
        }
        size
    }

    fn augment(&self, u: usize, visited: &mut VertexSet, matched: &mut HashMap<usize, usize>) -> bool {
        for w in self.neighbors(u).iter() {
            if visited.contains(w) {
                continue;
            }
            visited.insert(w);
            let free = match matched.get(&w) {
                None => true,
                Some(&prev) => self.augment(prev, visited, matched),
            };
            if free {
                matched.insert(w, u);
                return true;
            }
        }
        false
    }

    /// Independence domination number: the maximum over independent sets `I`
    /// of the minimum size of a set `D` with `I ⊆ N(D)` (open neighborhoods).
    ///
    /// A graph with an isolated vertex has an undominatable independent set
    /// and reports [`Error::Undominatable`].
    pub fn igamma(&self, vertex_cap: usize) -> Result<usize> {
        let verts = self.active.to_vec();
        let n = verts.len();
        if n > vertex_cap {
            return Err(Error::budget(format!(
                "igamma is exhaustive and capped at {vertex_cap} vertices, got {n}"
            )));
        }
        if !self.isolated_active_vertices().is_empty() {
            return Err(Error::Undominatable);
        }
        // Local adjacency over compressed indices 0..n.
        let index: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<u32> = verts
            .iter()
            .map(|&v| {
                let mut m = 0u32;
                for w in self.neighbors(v).iter() {
                    m |= 1 << index[&w];
                }
                m
            })
            .collect();
        // cover[mask] = fewest vertices whose open neighborhoods cover mask.
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut cover = vec![u32::MAX; (full as usize) + 1];
        cover[0] = 0;
        for mask in 1..=full {
            let low = mask.trailing_zeros() as usize;
            let mut best = u32::MAX;
            for (d, &nd) in adj.iter().enumerate() {
                let _ = d;
                if nd >> low & 1 == 1 {
                    let rest = cover[(mask & !nd) as usize];
                    if rest != u32::MAX {
                        best = best.min(rest + 1);
                    }
                }
            }
            cover[mask as usize] = best;
        }
        let mut result = 0u32;
        for mask in 0..=full {
            if !is_independent_mask(&adj, mask) {
                continue;
            }
            debug_assert_ne!(cover[mask as usize], u32::MAX, "no isolated vertices");
            result = result.max(cover[mask as usize]);
        }
        Ok(result as usize)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ids: Vec<EdgeId> = self.edge_ids().collect();
        // Collapse parallel slots back into a multiplicity vector.
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut mult: Vec<u32> = Vec::new();
        for &e in &ids {
            let pair = (self.edges[e].u, self.edges[e].v);
            if let Some(pos) = seen.iter().position(|&p| p == pair) {
                mult[pos] += 1;
            } else {
                seen.push(pair);
                mult.push(1);
            }
        }
        let j = GraphJson {
            n: self.n,
            edges: seen,
            bipartition: self
                .bipartition
                .map(|(a, b)| (a.intersection(self.active).to_vec(), b.intersection(self.active).to_vec())),
            multiplicity: if mult.iter().all(|&m| m == 1) {
                None
            } else {
                Some(mult)
            },
        };
        serde_json::to_value(j).expect("graph serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Graph> {
        let j: GraphJson = serde_json::from_value(value.clone())?;
        let mut g = Graph::empty(j.n)?;
        if let Some((a, b)) = &j.bipartition {
            for &v in a.iter().chain(b.iter()) {
                if v >= j.n {
                    return Err(Error::invalid(format!("bipartition vertex {v} out of range")));
                }
            }
            let sa: VertexSet = a.iter().copied().collect();
            let sb: VertexSet = b.iter().copied().collect();
            g.set_bipartition(sa, sb)?;
        }
        if let Some(mult) = &j.multiplicity {
            if mult.len() != j.edges.len() {
                return Err(Error::invalid(
                    "multiplicity array must parallel the edge array",
                ));
            }
        }
        for (i, &(u, v)) in j.edges.iter().enumerate() {
            if u >= j.n || v >= j.n {
                return Err(Error::invalid(format!("edge ({u},{v}) out of range")));
            }
            let copies = j.multiplicity.as_ref().map_or(1, |m| m[i]);
            if copies == 0 {
                return Err(Error::invalid("multiplicity entries must be positive"));
            }
            for _ in 0..copies {
                g.push_edge(u, v)?;
            }
        }
        Ok(g)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph(n={}, active={:?}, edges={:?})",
            self.n,
            self.active,
            self.edge_ids()
                .map(|e| (self.edges[e].u, self.edges[e].v))
                .collect::<Vec<_>>()
        )
    }
}

fn is_independent_mask(adj: &[u32], mask: u32) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if adj[v] & mask != 0 {
            return false;
        }
    }
    true
}

fn matching_rec(adj: &[VertexSet], active: VertexSet, memo: &mut HashMap<u128, usize>) -> usize {
    // First active vertex with a live neighbor; vertices without one can be
    // dropped for free.
    let mut probe = active;
    let v = loop {
        match probe.first() {
            None => return 0,
            Some(v) => {
                if adj[v].intersects(active) {
                    break v;
                }
                probe.remove(v);
            }
        }
    };
    let key = probe.0;
    if let Some(&cached) = memo.get(&key) {
        return cached;
    }
    let without = {
        let mut a = probe;
        a.remove(v);
        matching_rec(adj, a, memo)
    };
    let mut best = without;
    for w in adj[v].intersection(probe).iter() {
        let mut a = probe;
        a.remove(v);
        a.remove(w);
        best = best.max(1 + matching_rec(adj, a, memo));
    }
    memo.insert(key, best);
    best
}

/// Number of derangements of `[n]`, via `D_n = (n-1)(D_{n-1} + D_{n-2})`.
pub fn derangements(n: usize) -> BigUint {
    let mut prev2 = BigUint::from(1u32); // D_0
    if n == 0 {
        return prev2;
    }
    let mut prev1 = BigUint::from(0u32); // D_1
    for k in 2..=n {
        let next = BigUint::from(k as u32 - 1) * (&prev1 + &prev2);
        prev2 = prev1;
        prev1 = next;
    }
    prev1
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}
