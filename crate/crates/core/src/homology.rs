//! Exact reduced rational homology of a [`SimplicialComplex`] and the
//! connectivity parameter derived from it.
//!
//! All ranks are computed by fraction-free integer elimination (one-step
//! Bareiss with explicit pivoting); no floating point is involved anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, Zero};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Homological connectivity: a natural number or infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Eta {
    Finite(u32),
    Infinity,
}

impl Eta {
    pub fn is_at_least(self, k: u32) -> bool {
        match self {
            Eta::Finite(v) => v >= k,
            Eta::Infinity => true,
        }
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Finite(v) => write!(f, "{v}"),
            Eta::Infinity => write!(f, "inf"),
        }
    }
}

/// Result of a connectivity query that may stop early at a threshold.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EtaBound {
    Exact(Eta),
    /// Vanishing verified through the threshold: the connectivity is at
    /// least this value (possibly much larger).
    AtLeast(u32),
}

impl EtaBound {
    pub fn is_at_least(self, k: u32) -> bool {
        match self {
            EtaBound::Exact(e) => e.is_at_least(k),
            EtaBound::AtLeast(v) => v >= k,
        }
    }
}

impl fmt::Display for EtaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaBound::Exact(e) => write!(f, "{e}"),
            EtaBound::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Signed incidence matrix of the boundary map from `dim`-faces to
/// `(dim-1)`-faces of the augmented chain complex. For `dim = 0` the target
/// is the one-dimensional span of the empty face and every entry is `+1`.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, sign)` triplets, grouped by column in ascending order.
    pub entries: Vec<(usize, usize, i8)>,
}

impl BoundaryMatrix {
    pub fn rank(&self) -> usize {
        rank_fraction_free(self.rows, self.cols, &self.entries)
    }

    /// Sparse triplet text: one `row col value` line per entry.
    pub fn dump_triplets(&self) -> String {
        let mut out = String::new();
        for &(r, c, v) in &self.entries {
            out.push_str(&format!("{r} {c} {v}\n"));
        }
        out
    }
}

pub fn boundary_matrix(c: &SimplicialComplex, j: usize) -> Result<BoundaryMatrix> {
    let top = c.top_dimension();
    let max_allowed = top.map_or(0, |t| t + 1);
    if j > max_allowed {
        return Err(Error::invalid(format!(
            "boundary dimension {j} out of range (top dimension {})",
            top.map_or(-1i64, |t| t as i64)
        )));
    }
    if j == 0 {
        let rows = usize::from(c.includes_empty_face());
        let cols = c.face_count(0);
        let entries = (0..cols).map(|col| (0usize, col, 1i8)).collect();
        return Ok(BoundaryMatrix {
            dim: 0,
            rows,
            cols,
            entries,
        });
    }
    let faces = c.faces(j);
    let mut entries = Vec::with_capacity(faces.len() * (j + 1));
    for (col, face) in faces.iter().enumerate() {
        for skip in 0..face.len() {
            let facet: Vec<usize> = face
                .iter()
                .enumerate()
                .filter_map(|(i, &v)| (i != skip).then_some(v))
                .collect();
            let row = c.face_index(&facet).ok_or_else(|| {
                Error::invalid(format!(
                    "complex is not downward closed: facet {facet:?} of {face:?} missing"
                ))
            })?;
            let sign = if skip % 2 == 0 { 1i8 } else { -1i8 };
            entries.push((row, col, sign));
        }
    }
    Ok(BoundaryMatrix {
        dim: j,
        rows: c.face_count(j - 1),
        cols: faces.len(),
        entries,
    })
}

/// Exact rank over the rationals via fraction-free elimination.
///
/// Pivoting follows the sparsest active column (ties by column index); inside
/// the column a unit entry in the shortest row wins. With one-step Bareiss
/// updates every division is exact, which `debug_assert` verifies.
fn rank_fraction_free(nrows: usize, _ncols: usize, triplets: &[(usize, usize, i8)]) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); nrows];
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &(r, c, v) in triplets {
        debug_assert!(v == 1 || v == -1);
        rows[r].insert(c, BigInt::from(v));
        col_rows.entry(c).or_default().insert(r);
    }

    let mut rank = 0usize;
    let mut prev_pivot = BigInt::from(1);
    loop {
        // Sparsest nonempty column, lowest index on ties.
        let Some((&pivot_col, _)) = col_rows
            .iter()
            .filter(|(_, rs)| !rs.is_empty())
            .min_by_key(|(c, rs)| (rs.len(), **c))
        else {
            break;
        };
        // Row choice: unit entries first, then fewest entries, then index.
        let pivot_row = *col_rows[&pivot_col]
            .iter()
            .min_by_key(|&&r| {
                let val = &rows[r][&pivot_col];
                (usize::from(val.magnitude() != &1u32.into()), rows[r].len(), r)
            })
            .expect("column is nonempty");

        let pivot_val = rows[pivot_row][&pivot_col].clone();
        rank += 1;

        let pivot_entries: Vec<(usize, BigInt)> =
            rows[pivot_row].iter().map(|(c, v)| (*c, v.clone())).collect();
        let victims: Vec<usize> = col_rows[&pivot_col]
            .iter()
            .copied()
            .filter(|&r| r != pivot_row)
            .collect();
        for r in victims {
            let factor = rows[r][&pivot_col].clone();
            // row_r <- (pivot_val * row_r - factor * pivot_row) / prev_pivot
            for (c, pv) in &pivot_entries {
                let updated = {
                    let cur = rows[r].get(c).cloned().unwrap_or_else(BigInt::zero);
                    let num = &pivot_val * &cur - &factor * pv;
                    debug_assert!((&num % &prev_pivot).is_zero(), "Bareiss division must be exact");
                    num / &prev_pivot
                };
                if updated.is_zero() {
                    if rows[r].remove(c).is_some() {
                        col_rows.get_mut(c).map(|s| s.remove(&r));
                    }
                } else {
                    if rows[r].insert(*c, updated).is_none() {
                        col_rows.entry(*c).or_default().insert(r);
                    }
                }
            }
            // Entries of row r outside the pivot row's support scale by
            // pivot_val / prev_pivot.
            let other_cols: Vec<usize> = rows[r]
                .keys()
                .copied()
                .filter(|c| !pivot_entries.iter().any(|(pc, _)| pc == c))
                .collect();
            for c in other_cols {
                let cur = rows[r].remove(&c).expect("listed entry");
                let num = &pivot_val * &cur;
                debug_assert!((&num % &prev_pivot).is_zero(), "Bareiss division must be exact");
                let updated = num / &prev_pivot;
                if updated.is_zero() {
                    col_rows.get_mut(&c).map(|s| s.remove(&r));
                } else {
                    rows[r].insert(c, updated);
                }
            }
            debug_assert!(!rows[r].contains_key(&pivot_col));
        }

        // Retire the pivot row and column.
        let retired: Vec<usize> = rows[pivot_row].keys().copied().collect();
        for c in retired {
            col_rows.get_mut(&c).map(|s| s.remove(&pivot_row));
        }
        rows[pivot_row].clear();
        col_rows.remove(&pivot_col);
        prev_pivot = pivot_val;
    }
    rank
}

/// Reduced Betti number over the rationals,
/// `dim ker boundary_j - rank boundary_{j+1}`.
pub fn reduced_betti(c: &SimplicialComplex, j: usize) -> Result<usize> {
    ensure_dimension_known(c, j)?;
    ensure_dimension_known(c, j + 1)?;
    let f_j = c.face_count(j);
    if f_j == 0 {
        return Ok(0);
    }
    let rank_j = boundary_matrix(c, j)?.rank();
    let rank_j1 = if c.face_count(j + 1) == 0 {
        0
    } else {
        boundary_matrix(c, j + 1)?.rank()
    };
    Ok(f_j - rank_j - rank_j1)
}

/// Dimension `d` face counts are trustworthy when `d` was materialized or the
/// complex is known complete (nothing exists beyond the top dimension).
fn ensure_dimension_known(c: &SimplicialComplex, d: usize) -> Result<()> {
    let materialized = c.top_dimension().map_or(0, |t| t + 1);
    if d < materialized || c.is_complete() {
        Ok(())
    } else {
        Err(Error::budget(format!(
            "faces of dimension {d} were not materialized; rebuild the complex with a larger max_dim"
        )))
    }
}

/// Homological connectivity of `c`.
///
/// Returns the least `j` with a nonvanishing reduced Betti number, plus one;
/// `Infinity` when every reduced Betti number vanishes. The void complex and
/// the empty-face-only complex both yield 0. With `cap` set, the scan stops
/// once vanishing is verified below the threshold and reports `AtLeast(cap)`.
pub fn eta(c: &SimplicialComplex, cap: Option<u32>) -> Result<EtaBound> {
    if c.is_void() {
        return Ok(EtaBound::Exact(Eta::Finite(0)));
    }
    if c.top_dimension().is_none() {
        // Only the empty face: reduced H_{-1} is one-dimensional.
        return Ok(EtaBound::Exact(Eta::Finite(0)));
    }
    // A nonempty complex with vertices has vanishing reduced H_{-1}, so the
    // scan starts at dimension 0. Ranks are shared between consecutive
    // Betti numbers.
    let mut rank_cur = 1usize; // rank of the augmentation map
    let mut j = 0usize;
    loop {
        if let Some(k) = cap {
            if (j as u64) + 1 >= k as u64 {
                return Ok(EtaBound::AtLeast(k));
            }
        }
        ensure_dimension_known(c, j)?;
        let f_j = c.face_count(j);
        if f_j == 0 {
            // Past the top dimension with everything vanishing so far.
            return Ok(EtaBound::Exact(Eta::Infinity));
        }
        ensure_dimension_known(c, j + 1)?;
        let rank_next = if c.face_count(j + 1) == 0 {
            0
        } else {
            boundary_matrix(c, j + 1)?.rank()
        };
        let betti = f_j - rank_cur - rank_next;
        if betti > 0 {
            return Ok(EtaBound::Exact(Eta::Finite(j as u32 + 1)));
        }
        rank_cur = rank_next;
        j += 1;
    }
}

/// Exact connectivity; requires enough of the complex to decide.
pub fn eta_exact(c: &SimplicialComplex) -> Result<Eta> {
    match eta(c, None)? {
        EtaBound::Exact(e) => Ok(e),
        EtaBound::AtLeast(_) => unreachable!("uncapped eta is exact"),
    }
}

/// Threshold query: is the connectivity at least `k`?
pub fn eta_at_least(c: &SimplicialComplex, k: u32) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    // Stops as soon as a nonzero Betti number below the threshold appears.
    Ok(eta(c, Some(k))?.is_at_least(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{independence_complex, matching_complex, DEFAULT_FACE_BUDGET};
    use crate::graph::Graph;

    fn icx(g: &Graph) -> SimplicialComplex {
        independence_complex(g, None, DEFAULT_FACE_BUDGET).unwrap()
    }

    /// Dense exact elimination over i128 rationals-free arithmetic; the
    /// independent oracle for small ranks.
    fn rank_dense_oracle(rows: usize, cols: usize, entries: &[(usize, usize, i8)]) -> usize {
        let mut m = vec![vec![0i128; cols]; rows];
        for &(r, c, v) in entries {
            m[r][c] = v as i128;
        }
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            let Some(p) = (row..rows).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, p);
            for r in 0..rows {
                if r != row && m[r][col] != 0 {
                    let (a, b) = (m[row][col], m[r][col]);
                    for c2 in 0..cols {
                        m[r][c2] = m[r][c2] * a - m[row][c2] * b;
                    }
                }
            }
            row += 1;
            rank += 1;
            if row == rows {
                break;
            }
        }
        rank
    }

    #[test]
    fn augmentation_of_two_points() {
        let c = icx(&Graph::complete(2)); // two isolated points in I(K_2)
        let b0 = boundary_matrix(&c, 0).unwrap();
        assert_eq!((b0.rows, b0.cols), (1, 2));
        assert_eq!(b0.entries, vec![(0, 0, 1), (0, 1, 1)]);
        assert_eq!(b0.rank(), 1);
    }

    #[test]
    fn edge_boundary_signs() {
        // One 1-face on two vertices: the complex of a single segment.
        let c = icx(&Graph::empty(2).unwrap());
        let b1 = boundary_matrix(&c, 1).unwrap();
        assert_eq!((b1.rows, b1.cols), (2, 1));
        // d[v0,v1] = [v1] - [v0]
        assert_eq!(b1.entries, vec![(1, 0, 1), (0, 0, -1)]);
    }

    #[test]
    fn hollow_square_boundary_rank() {
        // I(2K_2) with edges {0,1} and {2,3}: independent sets avoid both,
        // giving the 4-cycle 0-2-1-3 as a simplicial circle.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let c = icx(&g);
        assert_eq!(c.f_vector(), vec![4, 4]);
        let b1 = boundary_matrix(&c, 1).unwrap();
        assert_eq!((b1.rows, b1.cols), (4, 4));
        assert!(b1.entries.iter().filter(|e| e.2 != 0).count() == 8);
        assert_eq!(b1.rank(), 3);
        assert_eq!(
            b1.rank(),
            rank_dense_oracle(b1.rows, b1.cols, &b1.entries)
        );
    }

    #[test]
    fn betti_examples() {
        // Two disjoint 1-faces: M(K_{2,2}); one extra connected component.
        let c = matching_complex(&Graph::complete_bipartite(2, 2), None, DEFAULT_FACE_BUDGET)
            .unwrap();
        assert_eq!(reduced_betti(&c, 0).unwrap(), 1);

        // Hollow 4-cycle: a circle.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let c = icx(&g);
        assert_eq!(reduced_betti(&c, 0).unwrap(), 0);
        assert_eq!(reduced_betti(&c, 1).unwrap(), 1);

        // Full simplex on 4 vertices is acyclic everywhere.
        let c = icx(&Graph::empty(4).unwrap());
        for j in 0..4 {
            assert_eq!(reduced_betti(&c, j).unwrap(), 0, "dimension {j}");
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        for g in [
            Graph::cycle(5),
            Graph::complete_bipartite(2, 3),
            Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap(),
        ] {
            let c = icx(&g);
            let top = c.top_dimension().unwrap();
            for j in 1..=top {
                let bj = boundary_matrix(&c, j).unwrap();
                let bj1 = boundary_matrix(&c, j - 1).unwrap();
                // Compose: entries of bj1 * bj must cancel.
                let mut product: BTreeMap<(usize, usize), i64> = BTreeMap::new();
                for &(mid, col, s1) in &bj.entries {
                    for &(row, mid2, s2) in &bj1.entries {
                        if mid2 == mid {
                            *product.entry((row, col)).or_insert(0) += (s1 as i64) * (s2 as i64);
                        }
                    }
                }
                assert!(product.values().all(|&v| v == 0), "dd != 0 at j={j}");
            }
        }
    }

    #[test]
    fn eta_of_two_points_is_one() {
        assert_eq!(eta_exact(&icx(&Graph::complete(2))).unwrap(), Eta::Finite(1));
    }

    #[test]
    fn eta_of_full_simplex_is_infinite() {
        for k in 1..=4 {
            let c = icx(&Graph::empty(k).unwrap());
            assert_eq!(eta_exact(&c).unwrap(), Eta::Infinity, "k={k}");
        }
    }

    #[test]
    fn eta_void_and_empty_conventions() {
        assert_eq!(eta_exact(&SimplicialComplex::void()).unwrap(), Eta::Finite(0));
        // I(G) restricted to an empty vertex set is {∅}.
        let g = Graph::complete(3);
        let restricted = g.induced_subgraph(crate::bitset::VertexSet::EMPTY).unwrap();
        let c = icx(&restricted);
        assert_eq!(eta_exact(&c).unwrap(), Eta::Finite(0));
    }

    #[test]
    fn eta_matching_small_complete_bipartite() {
        // Known connectivity of matching complexes of K_{n,n}: floor(2n/3).
        for (n, expected) in [(2usize, 1u32), (3, 2)] {
            let h = Graph::complete_bipartite(n, n);
            let c = matching_complex(&h, None, DEFAULT_FACE_BUDGET).unwrap();
            assert_eq!(eta_exact(&c).unwrap(), Eta::Finite(expected), "n={n}");
        }
    }

    #[test]
    fn euler_characteristic_cross_check() {
        for g in [
            Graph::cycle(4),
            Graph::cycle(5),
            Graph::complete_bipartite(3, 3),
            Graph::path(6),
        ] {
            let c = icx(&g);
            let top = c.top_dimension().unwrap();
            // Reduced Euler characteristic from face counts (empty face = -1).
            let mut chi_faces: i64 = -1;
            for d in 0..=top {
                let sign = if d % 2 == 0 { 1 } else { -1 };
                chi_faces += sign * c.face_count(d) as i64;
            }
            let mut chi_betti: i64 = 0;
            for j in 0..=top {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                chi_betti += sign * reduced_betti(&c, j).unwrap() as i64;
            }
            // beta_{-1} vanishes for complexes with vertices.
            assert_eq!(chi_faces, chi_betti, "graph {g:?}");
        }
    }

    #[test]
    fn capped_eta_reports_at_least() {
        let c = icx(&Graph::empty(6).unwrap());
        assert_eq!(eta(&c, Some(3)).unwrap(), EtaBound::AtLeast(3));
        assert!(eta_at_least(&c, 3).unwrap());
        // A disconnected complex fails any threshold above 1.
        let c = icx(&Graph::complete(2));
        assert!(!eta_at_least(&c, 2).unwrap());
        assert!(eta_at_least(&c, 1).unwrap());
    }

    #[test]
    fn truncated_complex_errors_when_undecidable() {
        let g = Graph::empty(6).unwrap();
        let c = independence_complex(&g, Some(1), DEFAULT_FACE_BUDGET).unwrap();
        assert!(eta_exact(&c).is_err());
        // But a capped query that stays within materialized dimensions works.
        assert!(eta_at_least(&c, 2).unwrap());
    }

    #[test]
    fn boundary_dim_out_of_range() {
        let c = icx(&Graph::complete(2));
        assert!(boundary_matrix(&c, 2).is_err());
        assert!(boundary_matrix(&c, 1).is_ok());
    }

    #[test]
    fn sparse_rank_matches_dense_oracle_on_random_incidences() {
        // Deterministic pseudo-random ±1 sparse matrices.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..50 {
            let rows = 1 + (next() % 8) as usize;
            let cols = 1 + (next() % 8) as usize;
            let mut entries = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    match next() % 4 {
                        0 => entries.push((r, c, 1i8)),
                        1 => entries.push((r, c, -1i8)),
                        _ => {}
                    }
                }
            }
            let fast = rank_fraction_free(rows, cols, &entries);
            let slow = rank_dense_oracle(rows, cols, &entries);
            assert_eq!(fast, slow, "trial {trial} rows={rows} cols={cols}");
        }
    }
}
