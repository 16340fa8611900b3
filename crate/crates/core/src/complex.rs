//! Independence complexes `I(G)` and matching complexes `M(H)` as explicit
//! face lists, grouped by dimension.

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_FACE_BUDGET: usize = 5_000_000;

/// Faces are sorted vertex lists; within a dimension the face list is sorted
/// lexicographically, which fixes boundary-matrix column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    ground: Vec<usize>,
    includes_empty: bool,
    faces_by_dim: Vec<Vec<Vec<usize>>>,
    /// True when every face of the underlying complex is materialized;
    /// false when a `max_dim` cap may have cut higher faces off.
    complete: bool,
}

impl SimplicialComplex {
    /// The void complex: no faces at all, not even the empty one.
    pub fn void() -> SimplicialComplex {
        SimplicialComplex {
            ground: Vec::new(),
            includes_empty: false,
            faces_by_dim: Vec::new(),
            complete: true,
        }
    }

    pub fn ground_set(&self) -> &[usize] {
        &self.ground
    }

    pub fn includes_empty_face(&self) -> bool {
        self.includes_empty
    }

    pub fn is_void(&self) -> bool {
        !self.includes_empty
    }

    /// Highest dimension with a materialized face, or `None` if there are no
    /// nonempty faces.
    pub fn top_dimension(&self) -> Option<usize> {
        if self.faces_by_dim.is_empty() {
            None
        } else {
            Some(self.faces_by_dim.len() - 1)
        }
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn faces(&self, dim: usize) -> &[Vec<usize>] {
        self.faces_by_dim.get(dim).map_or(&[], |f| f.as_slice())
    }

    pub fn face_count(&self, dim: usize) -> usize {
        self.faces(dim).len()
    }

    /// Face counts per dimension, starting at dimension 0.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim.iter().map(|f| f.len()).collect()
    }

    pub fn total_faces(&self) -> usize {
        self.faces_by_dim.iter().map(|f| f.len()).sum::<usize>()
            + usize::from(self.includes_empty)
    }

    /// Position of `face` in the sorted list of its dimension.
    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        if face.is_empty() {
            return self.includes_empty.then_some(0);
        }
        let dim = face.len() - 1;
        self.faces(dim)
            .binary_search_by(|probe| probe.as_slice().cmp(face))
            .ok()
    }

    /// Maximal faces (those with no materialized coface).
    pub fn maximal_faces(&self) -> Vec<Vec<usize>> {
        if self.is_void() {
            return Vec::new();
        }
        if self.faces_by_dim.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for dim in 0..self.faces_by_dim.len() {
            for face in &self.faces_by_dim[dim] {
                let has_coface = self.faces(dim + 1).iter().any(|cof| {
                    face.iter().all(|v| cof.binary_search(v).is_ok())
                });
                if !has_coface {
                    out.push(face.clone());
                }
            }
        }
        out
    }

    /// Debug/test dump: `{"ground": int, "faces": [[...],...]}` with maximal
    /// faces only.
    pub fn dump_json(&self) -> serde_json::Value {
        #[derive(Serialize, Deserialize)]
        struct Dump {
            ground: usize,
            faces: Vec<Vec<usize>>,
        }
        serde_json::to_value(Dump {
            ground: self.ground.len(),
            faces: self.maximal_faces(),
        })
        .expect("dump serializes")
    }

    /// Downward closure check on `face`: all co-dimension-1 subsets present.
    pub fn facets_present(&self, face: &[usize]) -> bool {
        if face.len() <= 1 {
            return self.includes_empty;
        }
        (0..face.len()).all(|skip| {
            let sub: Vec<usize> = face
                .iter()
                .enumerate()
                .filter_map(|(i, &v)| (i != skip).then_some(v))
                .collect();
            self.face_index(&sub).is_some()
        })
    }
}

/// All independent sets of `g` of size at most `max_dim + 1` (every size if
/// `max_dim` is `None`), as faces over the active vertex labels.
pub fn independence_complex(
    g: &Graph,
    max_dim: Option<usize>,
    face_budget: usize,
) -> Result<SimplicialComplex> {
    g.require_simple("independence_complex")?;
    let verts = g.active_vertices().to_vec();
    let adj: Vec<VertexSet> = (0..g.vertex_count()).map(|v| g.neighbors(v)).collect();
    let size_cap = max_dim.map(|d| d + 1);

    let mut faces_by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut total = 0usize;
    // Breadth by dimension: extend each face by vertices beyond its last,
    // keeping lexicographic order within every dimension for free.
    let mut current: Vec<(Vec<usize>, VertexSet)> = vec![(Vec::new(), verts.iter().copied().collect())];
    let mut dim = 0usize;
    loop {
        if size_cap == Some(dim) {
            break;
        }
        let mut next: Vec<(Vec<usize>, VertexSet)> = Vec::new();
        for (face, candidates) in &current {
            for v in candidates.iter() {
                total += 1;
                if total > face_budget {
                    return Err(Error::budget(format!(
                        "independence complex exceeds {face_budget} faces at dimension {dim}"
                    )));
                }
                let mut f = face.clone();
                f.push(v);
                // Future extensions must be above v and non-adjacent to it.
                let mut c = *candidates;
                c = c.difference(adj[v]);
                c = c.difference(VertexSet::full(v + 1));
                next.push((f, c));
            }
        }
        if next.is_empty() {
            break;
        }
        faces_by_dim.push(next.iter().map(|(f, _)| f.clone()).collect());
        current = next;
        dim += 1;
    }
    // The enumeration is complete when it stopped of its own accord, or when
    // the cap landed beyond the last nonempty dimension.
    let complete = size_cap.is_none_or(|cap| faces_by_dim.len() < cap);
    Ok(SimplicialComplex {
        ground: verts,
        includes_empty: true,
        faces_by_dim,
        complete,
    })
}

/// The matching complex `M(H) = I(L(H))`: ground set is the present edge ids
/// of `h`, faces are matchings.
pub fn matching_complex(
    h: &Graph,
    max_dim: Option<usize>,
    face_budget: usize,
) -> Result<SimplicialComplex> {
    h.require_simple("matching_complex")?;
    independence_complex(&h.line_graph()?, max_dim, face_budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(g: &Graph) -> SimplicialComplex {
        independence_complex(g, None, DEFAULT_FACE_BUDGET).unwrap()
    }

    /// Oracle: enumerate independent subsets of the active vertices directly
    /// over the power set, independent of the DFS in the implementation.
    fn independent_sets_brute(g: &Graph) -> Vec<Vec<usize>> {
        let verts = g.active_vertices().to_vec();
        let mut out = Vec::new();
        for mask in 1u64..(1 << verts.len()) {
            let set: Vec<usize> = verts
                .iter()
                .enumerate()
                .filter_map(|(i, &v)| (mask >> i & 1 == 1).then_some(v))
                .collect();
            let ok = set
                .iter()
                .all(|&u| set.iter().all(|&w| w == u || !g.are_adjacent(u, w)));
            if ok {
                out.push(set);
            }
        }
        out
    }

    #[test]
    fn edgeless_triangle_is_full_simplex() {
        let g = Graph::empty(3).unwrap();
        let c = complex(&g);
        assert_eq!(c.f_vector(), vec![3, 3, 1]);
        assert_eq!(c.total_faces(), 8); // 7 nonempty + empty face
        assert!(c.includes_empty_face());
        assert!(c.is_complete());
    }

    #[test]
    fn c4_independence_complex() {
        let c = complex(&Graph::cycle(4));
        // 4 vertices plus the two diagonals {0,2} and {1,3}.
        assert_eq!(c.f_vector(), vec![4, 2]);
        assert_eq!(c.faces(1), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn k3_independence_complex_has_no_edges() {
        let c = complex(&Graph::complete(3));
        assert_eq!(c.f_vector(), vec![3]);
    }

    #[test]
    fn matching_complex_k22() {
        let h = Graph::complete_bipartite(2, 2);
        let c = matching_complex(&h, None, DEFAULT_FACE_BUDGET).unwrap();
        // 4 single edges, 2 perfect matchings, plus the empty face.
        assert_eq!(c.f_vector(), vec![4, 2]);
        assert_eq!(c.total_faces(), 7);
    }

    #[test]
    fn matching_complex_p3_two_points() {
        let c = matching_complex(&Graph::path(3), None, DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(c.f_vector(), vec![2]);
    }

    #[test]
    fn matching_complex_k33_face_vector() {
        let h = Graph::complete_bipartite(3, 3);
        let c = matching_complex(&h, None, DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(c.f_vector(), vec![9, 18, 6]);
    }

    #[test]
    fn matching_counts_match_direct_enumeration() {
        // Every graph with <= 10 edges here; matchings counted from scratch.
        let graphs = [
            Graph::path(5),
            Graph::cycle(6),
            Graph::complete(4),
            Graph::complete_bipartite(2, 3),
            Graph::from_edges(6, &[(0, 1), (2, 3), (4, 5), (1, 2)]).unwrap(),
        ];
        for h in &graphs {
            let c = matching_complex(h, None, DEFAULT_FACE_BUDGET).unwrap();
            let ids: Vec<_> = h.edge_ids().collect();
            let mut counts: Vec<usize> = Vec::new();
            for mask in 1u64..(1 << ids.len()) {
                let chosen: Vec<_> = ids
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &e)| (mask >> i & 1 == 1).then_some(e))
                    .collect();
                let pairwise_disjoint = chosen.iter().all(|&e| {
                    chosen.iter().all(|&f| {
                        e == f
                            || !h
                                .endpoints(e)
                                .unwrap()
                                .shares_vertex(&h.endpoints(f).unwrap())
                    })
                });
                if pairwise_disjoint {
                    let d = chosen.len() - 1;
                    if counts.len() <= d {
                        counts.resize(d + 1, 0);
                    }
                    counts[d] += 1;
                }
            }
            assert_eq!(c.f_vector(), counts, "graph {h:?}");
        }
    }

    #[test]
    fn dim0_and_dim1_faces_identify_vertices_and_nonedges() {
        for g in [Graph::cycle(5), Graph::complete(4), Graph::path(4)] {
            let c = complex(&g);
            assert_eq!(c.face_count(0), g.active_count());
            let nonedges = g
                .active_vertices()
                .to_vec()
                .iter()
                .flat_map(|&u| {
                    g.active_vertices()
                        .to_vec()
                        .into_iter()
                        .filter(move |&v| v > u)
                        .map(move |v| (u, v))
                })
                .filter(|&(u, v)| !g.are_adjacent(u, v))
                .count();
            assert_eq!(c.face_count(1), nonedges);
        }
    }

    #[test]
    fn downward_closure_on_samples() {
        for g in [Graph::cycle(6), Graph::complete_bipartite(3, 3)] {
            let c = complex(&g);
            for dim in 0..=c.top_dimension().unwrap_or(0) {
                for face in c.faces(dim) {
                    assert!(c.facets_present(face), "face {face:?} missing a facet");
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_power_set_oracle() {
        for g in [
            Graph::cycle(5),
            Graph::path(6),
            Graph::complete(4),
            Graph::complete_bipartite(2, 3),
        ] {
            let c = complex(&g);
            let mut oracle = independent_sets_brute(&g);
            oracle.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
            let mut produced: Vec<Vec<usize>> = Vec::new();
            for d in 0..c.faces_by_dim.len() {
                produced.extend(c.faces(d).iter().cloned());
            }
            produced.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
            assert_eq!(produced, oracle);
        }
    }

    #[test]
    fn dimension_cap_marks_incomplete() {
        let g = Graph::empty(5).unwrap();
        let c = independence_complex(&g, Some(1), DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(c.f_vector(), vec![5, 10]);
        assert!(!c.is_complete());
        let c2 = independence_complex(&g, Some(10), DEFAULT_FACE_BUDGET).unwrap();
        assert!(c2.is_complete());
    }

    #[test]
    fn budget_error_names_dimension() {
        let g = Graph::empty(20).unwrap();
        let err = independence_complex(&g, None, 100).unwrap_err();
        assert!(matches!(err, crate::error::Error::Budget(_)));
    }

    #[test]
    fn maximal_faces_dump() {
        let c = complex(&Graph::cycle(4));
        let dump = c.dump_json();
        assert_eq!(dump["ground"], 4);
        assert_eq!(dump["faces"], serde_json::json!([[0, 2], [1, 3]]));
    }

    #[test]
    fn multigraph_rejected() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(independence_complex(&g, None, DEFAULT_FACE_BUDGET).is_err());
    }
}
