//! Generators and validators for the named pattern families.

use std::collections::{BTreeMap, BTreeSet};

use crate::grid::{GridSubgraph, LineKind};
use crate::{Coord, Error, Result};

/// Alternating cycle `AC_t` on a `t/2 × t/2` lattice: the cycle
/// `(1,1),(2,1),(2,2),(3,2),…,(t/2,t/2),(1,t/2)` whose edges alternate
/// horizontal/vertical orientation.
pub fn alternating_cycle(t: Coord) -> Result<GridSubgraph> {
    if t < 4 || t % 2 != 0 {
        return Err(Error::BadParameter(format!(
            "alternating cycle needs even t >= 4, got {t}"
        )));
    }
    let n = t / 2;
    let mut pts = vec![(1, 1)];
    for i in 1..n {
        pts.push((i + 1, i));
        pts.push((i + 1, i + 1));
    }
    pts.push((1, n));
    simple_cycle_from_waypoints(&WaypointCycle { waypoints: pts })
}

/// Aligned staircase `AS_{d-1}` on `d+1` columns and `d` rows: the staircase
/// path along the diagonal plus the two long aligning edges in rows 1 and `d`.
pub fn aligned_staircase(d: Coord) -> Result<GridSubgraph> {
    if d < 2 {
        return Err(Error::BadParameter(format!(
            "aligned staircase needs d >= 2, got {d}"
        )));
    }
    let mut g = GridSubgraph::empty(d + 1, d);
    for i in 1..=d {
        g.add_edge((i, i), (i + 1, i))?;
    }
    for i in 1..d {
        g.add_edge((i + 1, i), (i + 1, i + 1))?;
    }
    g.add_edge((1, 1), (d + 1, 1))?;
    g.add_edge((1, d), (d + 1, d))?;
    Ok(g)
}

/// A closed lattice walk given by its corner-to-corner vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaypointCycle {
    pub waypoints: Vec<(Coord, Coord)>,
}

/// Builds the cycle through the waypoints, rejecting walks that are not
/// closed lattice walks or whose cycle is not simple.
pub fn simple_cycle_from_waypoints(w: &WaypointCycle) -> Result<GridSubgraph> {
    let pts = &w.waypoints;
    if pts.len() < 4 {
        return Err(Error::BadParameter(format!(
            "cycle needs at least 4 waypoints, got {}",
            pts.len()
        )));
    }
    let distinct: BTreeSet<_> = pts.iter().collect();
    if distinct.len() != pts.len() {
        return Err(Error::BadParameter("waypoints not distinct".into()));
    }
    let columns = pts.iter().map(|p| p.0).max().unwrap();
    let rows = pts.iter().map(|p| p.1).max().unwrap();
    let mut g = GridSubgraph::empty(columns, rows);
    for i in 0..pts.len() {
        let u = pts[i];
        let v = pts[(i + 1) % pts.len()];
        g.add_edge(u, v)?;
    }
    g.spanning = g.vertices.len() == columns as usize * rows as usize;
    if let Some((kind, index)) = simplicity_violation(&g) {
        return Err(Error::NotSimple {
            line_kind: match kind {
                LineKind::Row => "row",
                LineKind::Column => "column",
            },
            index,
        });
    }
    Ok(g)
}

/// First row or column whose intersection with `g` is disconnected, if any.
fn simplicity_violation(g: &GridSubgraph) -> Option<(LineKind, Coord)> {
    for y in 1..=g.rows {
        let verts: Vec<Coord> = g
            .vertices
            .iter()
            .filter(|&&(_, vy)| vy == y)
            .map(|&(x, _)| x)
            .collect();
        let edges: Vec<(Coord, Coord)> = g
            .h_edges
            .iter()
            .filter(|&&(_, _, ey)| ey == y)
            .map(|&(x1, x2, _)| (x1, x2))
            .collect();
        if !connected(&verts, &edges) {
            return Some((LineKind::Row, y));
        }
    }
    for x in 1..=g.columns {
        let verts: Vec<Coord> = g
            .vertices
            .iter()
            .filter(|&&(vx, _)| vx == x)
            .map(|&(_, y)| y)
            .collect();
        let edges: Vec<(Coord, Coord)> = g
            .v_edges
            .iter()
            .filter(|&&(ex, _, _)| ex == x)
            .map(|&(_, y1, y2)| (y1, y2))
            .collect();
        if !connected(&verts, &edges) {
            return Some((LineKind::Column, x));
        }
    }
    None
}

fn connected(verts: &[Coord], edges: &[(Coord, Coord)]) -> bool {
    if verts.len() <= 1 {
        return true;
    }
    let mut adj: BTreeMap<Coord, Vec<Coord>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![verts[0]];
    while let Some(v) = stack.pop() {
        if seen.insert(v) {
            if let Some(ns) = adj.get(&v) {
                stack.extend(ns.iter().copied());
            }
        }
    }
    verts.iter().all(|v| seen.contains(v))
}

/// True when every nonempty row/column intersection of `g` is connected.
pub fn is_simple(g: &GridSubgraph) -> bool {
    simplicity_violation(g).is_none()
}

/// True when `g` is connected, acyclic, and simple.
pub fn is_simple_tree(g: &GridSubgraph) -> bool {
    let verts: Vec<(Coord, Coord)> = g.vertices.iter().copied().collect();
    if verts.is_empty() {
        return false;
    }
    // whole-graph connectivity via index-labeled union of edges
    let index: BTreeMap<(Coord, Coord), Coord> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as Coord))
        .collect();
    let edges: Vec<(Coord, Coord)> = g
        .edges()
        .map(|(u, v)| (index[&u], index[&v]))
        .collect();
    let labels: Vec<Coord> = (0..verts.len() as Coord).collect();
    connected(&labels, &edges) && g.edge_count() + 1 == verts.len() && is_simple(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Square,
    NzStool,
    RowClique(Coord),
    ColumnClique(Coord),
}

/// The small named patterns used throughout: the square (= `AC_4`), the
/// N-Z stool, and within-line cliques.
///
/// The N-Z stool is read off its figure: a 4×2 lattice with the bottom-row
/// path, top-row edges {(1,2),(3,2)}, {(1,2),(4,2)}, {(2,2),(4,2)}, and all
/// four vertical edges.
pub fn named(which: Named) -> Result<GridSubgraph> {
    match which {
        Named::Square => alternating_cycle(4),
        Named::NzStool => {
            let mut g = GridSubgraph::empty_spanning(4, 2);
            for x in 1..4 {
                g.add_edge((x, 1), (x + 1, 1))?;
            }
            g.add_edge((1, 2), (3, 2))?;
            g.add_edge((1, 2), (4, 2))?;
            g.add_edge((2, 2), (4, 2))?;
            for x in 1..=4 {
                g.add_edge((x, 1), (x, 2))?;
            }
            Ok(g)
        }
        Named::RowClique(m) => {
            if m < 1 {
                return Err(Error::BadParameter("clique size must be >= 1".into()));
            }
            let mut g = GridSubgraph::empty(m, 1);
            g.add_vertex(1, 1);
            for x1 in 1..m {
                for x2 in x1 + 1..=m {
                    g.add_edge((x1, 1), (x2, 1))?;
                }
            }
            g.spanning = g.vertices.len() == m as usize;
            Ok(g)
        }
        Named::ColumnClique(m) => Ok(named(Named::RowClique(m))?.transpose()),
    }
}

/// One lattice point, the seed of every bridging script.
pub fn one_vertex() -> GridSubgraph {
    let mut g = GridSubgraph::empty(1, 1);
    g.add_vertex(1, 1);
    g.spanning = true;
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::find_isomorphism;

    #[test]
    fn ac8_matches_figure() {
        let g = alternating_cycle(8).unwrap();
        assert_eq!(g.columns, 4);
        assert_eq!(g.rows, 4);
        assert_eq!(g.vertices.len(), 8);
        assert_eq!(g.h_edges.len(), 4);
        assert_eq!(g.v_edges.len(), 4);
        for pt in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 3), (4, 4), (1, 4)] {
            assert!(g.vertices.contains(&pt), "missing {pt:?}");
        }
        assert!(g.has_h_edge(1, 2, 1));
        assert!(g.has_h_edge(1, 4, 4));
        assert!(g.has_v_edge(1, 1, 4));
        // every vertex has one horizontal and one vertical edge
        for &v in &g.vertices {
            assert_eq!(g.degree(v).unwrap(), (1, 1));
        }
    }

    #[test]
    fn ac4_is_the_complete_2x2() {
        assert_eq!(alternating_cycle(4).unwrap(), GridSubgraph::complete(2, 2));
    }

    #[test]
    fn ac_rejects_bad_t() {
        assert!(alternating_cycle(5).is_err());
        assert!(alternating_cycle(2).is_err());
    }

    #[test]
    fn ac_is_simple_and_regular() {
        for t in [4u16, 6, 8, 10, 12] {
            let g = alternating_cycle(t).unwrap();
            assert!(is_simple(&g));
            assert_eq!(g.h_edges.len(), (t / 2) as usize);
            assert_eq!(g.v_edges.len(), (t / 2) as usize);
        }
    }

    #[test]
    fn staircase_small_cases() {
        let g = aligned_staircase(2).unwrap();
        assert_eq!((g.columns, g.rows), (3, 2));
        // families instantiate to 2 + 1 + 2 distinct edges at d=2
        assert_eq!(g.edge_count(), 5);
        assert!(g.has_h_edge(1, 3, 1));
        assert!(g.has_h_edge(1, 3, 2));

        let g5 = aligned_staircase(5).unwrap();
        assert_eq!((g5.columns, g5.rows), (6, 5));
        assert_eq!(g5.edge_count(), 5 + 4 + 2);
        assert!(aligned_staircase(1).is_err());
    }

    #[test]
    fn staircase_square_free() {
        let sq = named(Named::Square).unwrap();
        for d in 2..=4 {
            let stair = aligned_staircase(d).unwrap();
            assert!(crate::embed::contains(&sq, &stair).is_none());
        }
    }

    #[test]
    fn waypoints_accept_ac6() {
        let w = WaypointCycle {
            waypoints: vec![(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)],
        };
        let g = simple_cycle_from_waypoints(&w).unwrap();
        assert_eq!(g, alternating_cycle(6).unwrap());
    }

    #[test]
    fn waypoints_reject_split_column() {
        // revisits column 1 in two separated arcs
        let w = WaypointCycle {
            waypoints: vec![
                (1, 1),
                (3, 1),
                (3, 2),
                (1, 2),
                (1, 3),
                (2, 3),
                (2, 4),
                (1, 4),
                (1, 5),
                (3, 5),
                (3, 6),
                (1, 6),
            ],
        };
        match simple_cycle_from_waypoints(&w) {
            Err(Error::NotSimple { line_kind, index }) => {
                assert_eq!((line_kind, index), ("column", 1));
            }
            other => panic!("expected simplicity rejection, got {other:?}"),
        }
    }

    #[test]
    fn simplicity_checks() {
        assert!(is_simple(&alternating_cycle(8).unwrap()));
        // two disjoint edges in one row
        let mut g = GridSubgraph::empty(4, 1);
        g.add_edge((1, 1), (2, 1)).unwrap();
        g.add_edge((3, 1), (4, 1)).unwrap();
        assert!(!is_simple(&g));

        let mut path = GridSubgraph::empty(3, 1);
        path.add_edge((1, 1), (2, 1)).unwrap();
        path.add_edge((2, 1), (3, 1)).unwrap();
        assert!(is_simple_tree(&path));
        assert!(!is_simple_tree(&alternating_cycle(6).unwrap()));
    }

    #[test]
    fn named_patterns() {
        assert_eq!(
            named(Named::Square).unwrap(),
            alternating_cycle(4).unwrap()
        );
        let stool = named(Named::NzStool).unwrap();
        assert_eq!(stool.vertices.len(), 8);
        assert_eq!(stool.edge_count(), 10);
        assert!(stool.validate().is_ok());
        let rc = named(Named::RowClique(3)).unwrap();
        assert_eq!(rc.vertices.len(), 3);
        assert_eq!(rc.h_edges.len(), 3);
        assert_eq!(rc.rows, 1);
        let cc = named(Named::ColumnClique(3)).unwrap();
        assert!(find_isomorphism(&rc, &cc, true).unwrap().is_some());
    }

    #[test]
    fn transpose_of_ac8_is_isomorphic() {
        let g = alternating_cycle(8).unwrap();
        assert_eq!(
            g.canonical_form(true).unwrap(),
            g.transpose().canonical_form(true).unwrap()
        );
    }
}
