//! Core grid-subgraph representation and lattice-symmetry utilities.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::caps;
use crate::{Coord, Error, Result};

/// A subgraph of `G_{c×r} = K_c □ K_r` with orientation-tagged edges.
///
/// Coordinates are 1-based: vertices are lattice points `(x, y)` with
/// `1 ≤ x ≤ columns`, `1 ≤ y ≤ rows`. Horizontal edges join two vertices in
/// the same row, vertical edges two vertices in the same column; no other
/// edges exist in the lattice.
///
/// Edges are stored normalized: a horizontal edge is `(x1, x2, y)` with
/// `x1 < x2`, a vertical edge is `(x, y1, y2)` with `y1 < y2`. Sorted-set
/// storage makes serialization deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridSubgraph {
    pub columns: Coord,
    pub rows: Coord,
    /// True when the vertex set is all of `[columns] × [rows]`.
    pub spanning: bool,
    pub vertices: BTreeSet<(Coord, Coord)>,
    pub h_edges: BTreeSet<(Coord, Coord, Coord)>,
    pub v_edges: BTreeSet<(Coord, Coord, Coord)>,
}

impl GridSubgraph {
    /// Graph with no vertices and no edges on a `c×r` lattice.
    pub fn empty(columns: Coord, rows: Coord) -> Self {
        GridSubgraph {
            columns,
            rows,
            spanning: false,
            vertices: BTreeSet::new(),
            h_edges: BTreeSet::new(),
            v_edges: BTreeSet::new(),
        }
    }

    /// Edgeless spanning subgraph: all lattice points, no edges.
    pub fn empty_spanning(columns: Coord, rows: Coord) -> Self {
        let mut g = GridSubgraph::empty(columns, rows);
        g.spanning = true;
        for x in 1..=columns {
            for y in 1..=rows {
                g.vertices.insert((x, y));
            }
        }
        g
    }

    /// The full grid graph `G_{c×r}`: every row and column is a clique.
    pub fn complete(columns: Coord, rows: Coord) -> Self {
        let mut g = GridSubgraph::empty_spanning(columns, rows);
        for y in 1..=rows {
            for x1 in 1..columns {
                for x2 in x1 + 1..=columns {
                    g.h_edges.insert((x1, x2, y));
                }
            }
        }
        for x in 1..=columns {
            for y1 in 1..rows {
                for y2 in y1 + 1..=rows {
                    g.v_edges.insert((x, y1, y2));
                }
            }
        }
        g
    }

    pub fn add_vertex(&mut self, x: Coord, y: Coord) {
        self.vertices.insert((x, y));
    }

    /// Adds the edge `{u, v}`, classifying its orientation; endpoints are
    /// inserted into the vertex set if missing. Rejects loops and pairs that
    /// share neither a row nor a column.
    pub fn add_edge(&mut self, u: (Coord, Coord), v: (Coord, Coord)) -> Result<()> {
        let (ux, uy) = u;
        let (vx, vy) = v;
        if u == v || (ux != vx && uy != vy) {
            return Err(Error::DiagonalEdge(ux, uy, vx, vy));
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        if uy == vy {
            self.h_edges.insert((ux.min(vx), ux.max(vx), uy));
        } else {
            self.v_edges.insert((ux, uy.min(vy), uy.max(vy)));
        }
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.h_edges.len() + self.v_edges.len()
    }

    /// All edges as vertex pairs, horizontal first.
    pub fn edges(&self) -> impl Iterator<Item = ((Coord, Coord), (Coord, Coord))> + '_ {
        let h = self.h_edges.iter().map(|&(x1, x2, y)| ((x1, y), (x2, y)));
        let v = self.v_edges.iter().map(|&(x, y1, y2)| ((x, y1), (x, y2)));
        h.chain(v)
    }

    pub fn has_h_edge(&self, x1: Coord, x2: Coord, y: Coord) -> bool {
        self.h_edges.contains(&(x1.min(x2), x1.max(x2), y))
    }

    pub fn has_v_edge(&self, x: Coord, y1: Coord, y2: Coord) -> bool {
        self.v_edges.contains(&(x, y1.min(y2), y1.max(y2)))
    }

    pub fn has_edge(&self, u: (Coord, Coord), v: (Coord, Coord)) -> bool {
        if u.1 == v.1 && u.0 != v.0 {
            self.has_h_edge(u.0, v.0, u.1)
        } else if u.0 == v.0 && u.1 != v.1 {
            self.has_v_edge(u.0, u.1, v.1)
        } else {
            false
        }
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for &(x, y) in &self.vertices {
            if x < 1 || x > self.columns || y < 1 || y > self.rows {
                violations.push(format!("vertex ({x}, {y}) out of range"));
            }
        }
        for &(x1, x2, y) in &self.h_edges {
            if x1 >= x2 {
                violations.push(format!("h-edge ({x1}, {x2}, {y}) not normalized"));
            }
            for x in [x1, x2] {
                if !self.vertices.contains(&(x, y)) {
                    violations.push(format!("h-edge endpoint ({x}, {y}) missing from vertices"));
                }
            }
        }
        for &(x, y1, y2) in &self.v_edges {
            if y1 >= y2 {
                violations.push(format!("v-edge ({x}, {y1}, {y2}) not normalized"));
            }
            for y in [y1, y2] {
                if !self.vertices.contains(&(x, y)) {
                    violations.push(format!("v-edge endpoint ({x}, {y}) missing from vertices"));
                }
            }
        }
        if self.spanning && self.vertices.len() != self.columns as usize * self.rows as usize {
            violations.push(format!(
                "spanning mismatch: {} of {} lattice points present",
                self.vertices.len(),
                self.columns as usize * self.rows as usize
            ));
        }
        ValidationReport { violations }
    }

    /// Complement within the lattice edge set `E*`; defined for spanning
    /// subgraphs only.
    pub fn complement(&self) -> Result<GridSubgraph> {
        if !self.spanning {
            return Err(Error::NotSpanning);
        }
        let full = GridSubgraph::complete(self.columns, self.rows);
        let mut g = GridSubgraph::empty_spanning(self.columns, self.rows);
        g.h_edges = full.h_edges.difference(&self.h_edges).copied().collect();
        g.v_edges = full.v_edges.difference(&self.v_edges).copied().collect();
        Ok(g)
    }

    /// Horizontal and vertical degree of `v`.
    pub fn degree(&self, v: (Coord, Coord)) -> Result<(usize, usize)> {
        if !self.vertices.contains(&v) {
            return Err(Error::VertexNotFound(v.0, v.1));
        }
        let (x, y) = v;
        let d_h = self
            .h_edges
            .iter()
            .filter(|&&(x1, x2, ey)| ey == y && (x1 == x || x2 == x))
            .count();
        let d_v = self
            .v_edges
            .iter()
            .filter(|&&(ex, y1, y2)| ex == x && (y1 == y || y2 == y))
            .count();
        Ok((d_h, d_v))
    }

    /// Swaps rows and columns; horizontal edges become vertical and vice versa.
    pub fn transpose(&self) -> GridSubgraph {
        GridSubgraph {
            columns: self.rows,
            rows: self.columns,
            spanning: self.spanning,
            vertices: self.vertices.iter().map(|&(x, y)| (y, x)).collect(),
            h_edges: self.v_edges.iter().map(|&(x, y1, y2)| (y1, y2, x)).collect(),
            v_edges: self.h_edges.iter().map(|&(x1, x2, y)| (y, x1, x2)).collect(),
        }
    }

    /// Relabels columns and rows. `column_perm[i]` is the image of column
    /// `i+1`; likewise for rows. Both must be bijections.
    pub fn permute(&self, column_perm: &[Coord], row_perm: &[Coord]) -> Result<GridSubgraph> {
        check_perm(column_perm, self.columns)?;
        check_perm(row_perm, self.rows)?;
        let cm = |x: Coord| column_perm[(x - 1) as usize];
        let rm = |y: Coord| row_perm[(y - 1) as usize];
        let mut g = GridSubgraph::empty(self.columns, self.rows);
        g.spanning = self.spanning;
        g.vertices = self.vertices.iter().map(|&(x, y)| (cm(x), rm(y))).collect();
        g.h_edges = self
            .h_edges
            .iter()
            .map(|&(x1, x2, y)| {
                let (a, b) = (cm(x1), cm(x2));
                (a.min(b), a.max(b), rm(y))
            })
            .collect();
        g.v_edges = self
            .v_edges
            .iter()
            .map(|&(x, y1, y2)| {
                let (a, b) = (rm(y1), rm(y2));
                (cm(x), a.min(b), a.max(b))
            })
            .collect();
        Ok(g)
    }

    /// The graph induced on one row or column, as a clique-complement-style
    /// small graph on `n` positions.
    pub fn line_graph(&self, kind: LineKind, index: Coord) -> LineGraph {
        let (n, adjacency) = match kind {
            LineKind::Row => (
                self.columns,
                self.h_edges
                    .iter()
                    .filter(|&&(_, _, y)| y == index)
                    .map(|&(x1, x2, _)| (x1, x2))
                    .collect(),
            ),
            LineKind::Column => (
                self.rows,
                self.v_edges
                    .iter()
                    .filter(|&&(x, _, _)| x == index)
                    .map(|&(_, y1, y2)| (y1, y2))
                    .collect(),
            ),
        };
        LineGraph {
            line_kind: kind,
            index,
            n,
            adjacency,
        }
    }

    /// Flat encoding used as canonical key: dimensions, then characteristic
    /// vectors of vertices and both edge sets in sorted order.
    fn encode(&self) -> Vec<u16> {
        let mut out = vec![self.columns, self.rows, self.spanning as u16];
        for &(x, y) in &self.vertices {
            out.push(x);
            out.push(y);
        }
        out.push(u16::MAX);
        for &(a, b, c) in &self.h_edges {
            out.extend([a, b, c]);
        }
        out.push(u16::MAX);
        for &(a, b, c) in &self.v_edges {
            out.extend([a, b, c]);
        }
        out
    }

    /// Minimal encoding over all column/row relabelings (and optionally the
    /// transpose). Two graphs are isomorphic under the lattice symmetry group
    /// iff their canonical forms are equal.
    pub fn canonical_form(&self, allow_transpose: bool) -> Result<Vec<u16>> {
        let cap = caps().canonical_max;
        if self.columns as usize > cap || self.rows as usize > cap {
            return Err(Error::SizeCap {
                what: "canonical_form lattice side",
                size: self.columns.max(self.rows) as usize,
                cap,
            });
        }
        let mut best: Option<Vec<u16>> = None;
        let mut consider = |g: &GridSubgraph| {
            for cp in permutations(g.columns) {
                for rp in permutations(g.rows) {
                    let enc = g.permute(&cp, &rp).expect("valid perms").encode();
                    if best.as_ref().map_or(true, |b| enc < *b) {
                        best = Some(enc);
                    }
                }
            }
        };
        consider(self);
        if allow_transpose {
            consider(&self.transpose());
        }
        Ok(best.expect("at least the identity considered"))
    }
}

fn check_perm(perm: &[Coord], n: Coord) -> Result<()> {
    let ok = perm.len() == n as usize && {
        let set: BTreeSet<Coord> = perm.iter().copied().collect();
        set.len() == n as usize && perm.iter().all(|&p| p >= 1 && p <= n)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::BadPermutation {
            expected: n,
            got: perm.to_vec(),
        })
    }
}

/// All permutations of `1..=n` as image vectors, in lexicographic order.
pub fn permutations(n: Coord) -> Vec<Vec<Coord>> {
    use itertools::Itertools;
    (1..=n).permutations(n as usize).collect()
}

/// Exhaustive isomorphism search under the lattice symmetry group.
pub fn find_isomorphism(
    a: &GridSubgraph,
    b: &GridSubgraph,
    allow_transpose: bool,
) -> Result<Option<GridIsoWitness>> {
    let cap = caps().canonical_max;
    if a.columns as usize > cap || a.rows as usize > cap {
        return Err(Error::SizeCap {
            what: "find_isomorphism lattice side",
            size: a.columns.max(a.rows) as usize,
            cap,
        });
    }
    let mut candidates = vec![(a.clone(), false)];
    if allow_transpose {
        candidates.push((a.transpose(), true));
    }
    for (g, transposed) in candidates {
        if g.columns != b.columns || g.rows != b.rows {
            continue;
        }
        for cp in permutations(g.columns) {
            for rp in permutations(g.rows) {
                if g.permute(&cp, &rp)? == *b {
                    return Ok(Some(GridIsoWitness {
                        column_perm: cp,
                        row_perm: rp,
                        transposed,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Witness that one grid subgraph maps onto another under the lattice group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridIsoWitness {
    pub column_perm: Vec<Coord>,
    pub row_perm: Vec<Coord>,
    pub transposed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    Row,
    Column,
}

impl fmt::Display for LineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineKind::Row => write!(f, "row"),
            LineKind::Column => write!(f, "column"),
        }
    }
}

/// One row or column of a grid subgraph, viewed as a graph on positions
/// `1..=n` along the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineGraph {
    pub line_kind: LineKind,
    pub index: Coord,
    pub n: Coord,
    pub adjacency: BTreeSet<(Coord, Coord)>,
}

impl LineGraph {
    pub fn has_edge(&self, a: Coord, b: Coord) -> bool {
        self.adjacency.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, p: Coord) -> usize {
        self.adjacency
            .iter()
            .filter(|&&(a, b)| a == p || b == p)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

// JSON wire format. Arrays are sorted lexicographically because the sets are
// ordered; `vertices` is omitted for spanning graphs.
#[derive(Serialize, Deserialize)]
struct GridJson {
    columns: Coord,
    rows: Coord,
    spanning: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[Coord; 2]>>,
    h_edges: Vec<[Coord; 3]>,
    v_edges: Vec<[Coord; 3]>,
}

impl Serialize for GridSubgraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridJson {
            columns: self.columns,
            rows: self.rows,
            spanning: self.spanning,
            vertices: if self.spanning {
                None
            } else {
                Some(self.vertices.iter().map(|&(x, y)| [x, y]).collect())
            },
            h_edges: self.h_edges.iter().map(|&(a, b, c)| [a, b, c]).collect(),
            v_edges: self.v_edges.iter().map(|&(a, b, c)| [a, b, c]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridSubgraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GridJson::deserialize(d)?;
        let mut g = if raw.spanning {
            GridSubgraph::empty_spanning(raw.columns, raw.rows)
        } else {
            GridSubgraph::empty(raw.columns, raw.rows)
        };
        if let Some(vs) = raw.vertices {
            for [x, y] in vs {
                g.vertices.insert((x, y));
            }
        }
        for [x1, x2, y] in raw.h_edges {
            g.h_edges.insert((x1.min(x2), x1.max(x2), y));
            g.vertices.insert((x1, y));
            g.vertices.insert((x2, y));
        }
        for [x, y1, y2] in raw.v_edges {
            g.v_edges.insert((x, y1.min(y2), y1.max(y2)));
            g.vertices.insert((x, y1));
            g.vertices.insert((x, y2));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_2x2_validates() {
        let g = GridSubgraph::complete(2, 2);
        assert_eq!(g.h_edges.len(), 2);
        assert_eq!(g.v_edges.len(), 2);
        assert!(g.validate().is_ok());
    }

    #[test]
    fn diagonal_edge_rejected() {
        let mut g = GridSubgraph::empty(2, 2);
        assert!(g.add_edge((1, 1), (2, 2)).is_err());
        assert!(g.add_edge((1, 1), (1, 1)).is_err());
    }

    #[test]
    fn spanning_mismatch_reported() {
        let mut g = GridSubgraph::empty_spanning(2, 2);
        g.vertices.remove(&(2, 2));
        let report = g.validate();
        assert!(!report.is_ok());
        assert!(report.violations.iter().any(|v| v.contains("spanning")));
    }

    #[test]
    fn dangling_endpoint_reported() {
        let mut g = GridSubgraph::empty(2, 1);
        g.add_vertex(1, 1);
        g.h_edges.insert((1, 2, 1));
        assert!(!g.validate().is_ok());
    }

    #[test]
    fn complement_cases() {
        let complete = GridSubgraph::complete(3, 3);
        assert_eq!(
            complete.complement().unwrap(),
            GridSubgraph::empty_spanning(3, 3)
        );
        assert_eq!(
            GridSubgraph::empty_spanning(2, 2).complement().unwrap(),
            GridSubgraph::complete(2, 2)
        );

        // single h-edge in G_{2×2} → the other 3 lattice edges
        let mut g = GridSubgraph::empty_spanning(2, 2);
        g.add_edge((1, 1), (2, 1)).unwrap();
        let co = g.complement().unwrap();
        assert_eq!(co.edge_count(), 3);
        assert!(co.has_h_edge(1, 2, 2));
        assert!(co.has_v_edge(1, 1, 2));
        assert!(co.has_v_edge(2, 1, 2));
        assert_eq!(co.complement().unwrap(), g);
    }

    #[test]
    fn complement_requires_spanning() {
        let g = GridSubgraph::empty(2, 2);
        assert!(matches!(g.complement(), Err(Error::NotSpanning)));
    }

    #[test]
    fn degrees() {
        let g = GridSubgraph::complete(3, 3);
        assert_eq!(g.degree((1, 1)).unwrap(), (2, 2));
        let e = GridSubgraph::empty_spanning(4, 4);
        assert_eq!(e.degree((2, 3)).unwrap(), (0, 0));
        assert!(e.degree((5, 1)).is_err());
    }

    #[test]
    fn degree_sums_match_edge_counts() {
        let g = GridSubgraph::complete(3, 4);
        let (sh, sv) = g
            .vertices
            .iter()
            .map(|&v| g.degree(v).unwrap())
            .fold((0, 0), |(a, b), (h, v)| (a + h, b + v));
        assert_eq!(sh, 2 * g.h_edges.len());
        assert_eq!(sv, 2 * g.v_edges.len());
    }

    #[test]
    fn transpose_involution_and_orientation_swap() {
        let mut g = GridSubgraph::empty(3, 2);
        g.add_edge((1, 1), (3, 1)).unwrap();
        g.add_edge((2, 1), (2, 2)).unwrap();
        let t = g.transpose();
        assert_eq!(t.h_edges.len(), 1);
        assert_eq!(t.v_edges.len(), 1);
        assert!(t.has_h_edge(1, 2, 2));
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn permute_identity_and_group_invariance() {
        let g = GridSubgraph::complete(3, 2);
        let id = g.permute(&[1, 2, 3], &[1, 2]).unwrap();
        assert_eq!(id, g);
        assert!(g.permute(&[1, 1, 2], &[1, 2]).is_err());

        let mut h = GridSubgraph::empty(3, 3);
        h.add_edge((1, 1), (2, 1)).unwrap();
        h.add_edge((2, 1), (2, 2)).unwrap();
        let p = h.permute(&[3, 1, 2], &[2, 3, 1]).unwrap();
        assert_eq!(
            p.canonical_form(false).unwrap(),
            h.canonical_form(false).unwrap()
        );
    }

    #[test]
    fn canonical_distinguishes_orientation() {
        // 4-cycle on 2×2 vs a 4-vertex path in one row
        let sq = GridSubgraph::complete(2, 2);
        let mut path = GridSubgraph::empty(4, 1);
        for x in 1..4 {
            path.add_edge((x, 1), (x + 1, 1)).unwrap();
        }
        assert_ne!(
            sq.canonical_form(true).unwrap(),
            path.canonical_form(true).unwrap()
        );
    }

    #[test]
    fn iso_witness_applies() {
        let mut a = GridSubgraph::empty(2, 2);
        a.add_edge((1, 1), (2, 1)).unwrap();
        let mut b = GridSubgraph::empty(2, 2);
        b.add_edge((1, 2), (1, 1)).unwrap();
        // a is a horizontal edge, b a vertical one: only transposition works
        assert!(find_isomorphism(&a, &b, false).unwrap().is_none());
        let w = find_isomorphism(&a, &b, true).unwrap().unwrap();
        assert!(w.transposed);
        let image = a.transpose().permute(&w.column_perm, &w.row_perm).unwrap();
        assert_eq!(image, b);
    }

    #[test]
    fn line_graphs() {
        let mut g = GridSubgraph::empty_spanning(3, 2);
        g.add_edge((1, 1), (3, 1)).unwrap();
        g.add_edge((2, 1), (2, 2)).unwrap();
        let row1 = g.line_graph(LineKind::Row, 1);
        assert_eq!(row1.n, 3);
        assert!(row1.has_edge(3, 1));
        assert_eq!(row1.degree(2), 0);
        let col2 = g.line_graph(LineKind::Column, 2);
        assert!(col2.has_edge(1, 2));
    }

    #[test]
    fn json_round_trip_and_shape() {
        let mut g = GridSubgraph::empty_spanning(2, 2);
        g.add_edge((1, 1), (2, 1)).unwrap();
        g.add_edge((1, 1), (1, 2)).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"{"columns":2,"rows":2,"spanning":true,"h_edges":[[1,2,1]],"v_edges":[[1,1,2]]}"#
        );
        let back: GridSubgraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);

        let mut p = GridSubgraph::empty(3, 1);
        p.add_edge((1, 1), (3, 1)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains(r#""vertices":[[1,1],[3,1]]"#));
        let back: GridSubgraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn complement_edge_counts() {
        let mut g = GridSubgraph::empty_spanning(4, 3);
        g.add_edge((1, 2), (3, 2)).unwrap();
        g.add_edge((2, 1), (2, 3)).unwrap();
        let co = g.complement().unwrap();
        let r = g.rows as usize;
        let c = g.columns as usize;
        assert_eq!(g.h_edges.len() + co.h_edges.len(), r * c * (c - 1) / 2);
        assert_eq!(g.v_edges.len() + co.v_edges.len(), c * r * (r - 1) / 2);
    }
}
