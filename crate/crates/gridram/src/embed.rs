//! Orientation-preserving embedding search, coclique detection, and the
//! diversity predicate.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::caps::caps;
use crate::grid::{GridSubgraph, LineGraph, LineKind};
use crate::patterns::is_simple_tree;
use crate::{Coord, Error, Result};

/// A labeled copy of a pattern inside a host: injective maps on pattern
/// columns and rows. `column_map[i]` is the host column assigned to pattern
/// column `i+1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    pub column_map: Vec<Coord>,
    pub row_map: Vec<Coord>,
}

impl Embedding {
    pub fn col(&self, x: Coord) -> Coord {
        self.column_map[(x - 1) as usize]
    }

    pub fn row(&self, y: Coord) -> Coord {
        self.row_map[(y - 1) as usize]
    }

    pub fn image(&self, v: (Coord, Coord)) -> (Coord, Coord) {
        (self.col(v.0), self.row(v.1))
    }

    /// Re-checks the embedding contract against the pattern and host.
    pub fn verify(&self, pattern: &GridSubgraph, host: &GridSubgraph) -> bool {
        let inj = |map: &[Coord], bound: Coord| {
            map.iter().all(|&i| i >= 1 && i <= bound)
                && map.iter().collect::<BTreeSet<_>>().len() == map.len()
        };
        if self.column_map.len() != pattern.columns as usize
            || self.row_map.len() != pattern.rows as usize
            || !inj(&self.column_map, host.columns)
            || !inj(&self.row_map, host.rows)
        {
            return false;
        }
        pattern
            .vertices
            .iter()
            .all(|&v| host.vertices.contains(&self.image(v)))
            && pattern.h_edges.iter().all(|&(x1, x2, y)| {
                host.has_h_edge(self.col(x1), self.col(x2), self.row(y))
            })
            && pattern.v_edges.iter().all(|&(x, y1, y2)| {
                host.has_v_edge(self.col(x), self.row(y1), self.row(y2))
            })
    }
}

/// Constraints threaded through the backtracking search.
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Forced images: pattern column → host column.
    pub pinned_columns: BTreeMap<Coord, Coord>,
    /// Forced images: pattern row → host row.
    pub pinned_rows: BTreeMap<Coord, Coord>,
    /// Host columns unavailable to non-pinned pattern columns.
    pub forbidden_columns: BTreeSet<Coord>,
    /// Host rows unavailable to non-pinned pattern rows.
    pub forbidden_rows: BTreeSet<Coord>,
}

/// Enumerates embeddings of `pattern` into `host` in lexicographic order on
/// `(column_map, row_map)`, calling `f` for each; `f` returns false to stop.
pub fn for_each_embedding_with<F>(
    pattern: &GridSubgraph,
    host: &GridSubgraph,
    opts: &SearchOptions,
    f: &mut F,
) where
    F: FnMut(&Embedding) -> bool,
{
    if pattern.columns > host.columns || pattern.rows > host.rows {
        return;
    }
    // vertices per pattern column, for a counting prune at the column stage
    let mut pat_col_count = vec![0usize; pattern.columns as usize + 1];
    for &(x, _) in &pattern.vertices {
        pat_col_count[x as usize] += 1;
    }
    let mut host_col_count = vec![0usize; host.columns as usize + 1];
    for &(x, _) in &host.vertices {
        host_col_count[x as usize] += 1;
    }

    let mut column_map: Vec<Coord> = Vec::with_capacity(pattern.columns as usize);
    let mut used_cols = vec![false; host.columns as usize + 1];
    let mut row_map: Vec<Coord> = Vec::with_capacity(pattern.rows as usize);
    let mut used_rows = vec![false; host.rows as usize + 1];

    // pattern edges/vertices indexed by the highest row they touch, so each
    // constraint is checked as soon as its last row is assigned
    let mut h_by_row: BTreeMap<Coord, Vec<(Coord, Coord)>> = BTreeMap::new();
    for &(x1, x2, y) in &pattern.h_edges {
        h_by_row.entry(y).or_default().push((x1, x2));
    }
    let mut v_by_row: BTreeMap<Coord, Vec<(Coord, Coord)>> = BTreeMap::new();
    for &(x, y1, y2) in &pattern.v_edges {
        v_by_row.entry(y2).or_default().push((x, y1));
    }
    let mut verts_by_row: BTreeMap<Coord, Vec<Coord>> = BTreeMap::new();
    for &(x, y) in &pattern.vertices {
        verts_by_row.entry(y).or_default().push(x);
    }

    struct Ctx<'a, F> {
        pattern: &'a GridSubgraph,
        host: &'a GridSubgraph,
        opts: &'a SearchOptions,
        f: &'a mut F,
        pat_col_count: Vec<usize>,
        host_col_count: Vec<usize>,
        h_by_row: BTreeMap<Coord, Vec<(Coord, Coord)>>,
        v_by_row: BTreeMap<Coord, Vec<(Coord, Coord)>>,
        verts_by_row: BTreeMap<Coord, Vec<Coord>>,
    }

    fn assign_rows<F: FnMut(&Embedding) -> bool>(
        ctx: &mut Ctx<F>,
        column_map: &[Coord],
        row_map: &mut Vec<Coord>,
        used_rows: &mut [bool],
    ) -> bool {
        let y = row_map.len() as Coord + 1;
        if y > ctx.pattern.rows {
            let emb = Embedding {
                column_map: column_map.to_vec(),
                row_map: row_map.clone(),
            };
            return (ctx.f)(&emb);
        }
        for gy in 1..=ctx.host.rows {
            if used_rows[gy as usize] {
                continue;
            }
            match ctx.opts.pinned_rows.get(&y) {
                Some(&p) if p != gy => continue,
                None if ctx.opts.forbidden_rows.contains(&gy) => continue,
                _ => {}
            }
            let cm = |x: Coord| column_map[(x - 1) as usize];
            let ok = ctx
                .verts_by_row
                .get(&y)
                .map_or(true, |xs| {
                    xs.iter().all(|&x| ctx.host.vertices.contains(&(cm(x), gy)))
                })
                && ctx.h_by_row.get(&y).map_or(true, |es| {
                    es.iter()
                        .all(|&(x1, x2)| ctx.host.has_h_edge(cm(x1), cm(x2), gy))
                })
                && ctx.v_by_row.get(&y).map_or(true, |es| {
                    es.iter().all(|&(x, y1)| {
                        ctx.host
                            .has_v_edge(cm(x), row_map[(y1 - 1) as usize], gy)
                    })
                });
            if !ok {
                continue;
            }
            row_map.push(gy);
            used_rows[gy as usize] = true;
            let keep_going = assign_rows(ctx, column_map, row_map, used_rows);
            used_rows[gy as usize] = false;
            row_map.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn assign_cols<F: FnMut(&Embedding) -> bool>(
        ctx: &mut Ctx<F>,
        column_map: &mut Vec<Coord>,
        used_cols: &mut [bool],
        row_map: &mut Vec<Coord>,
        used_rows: &mut [bool],
    ) -> bool {
        let x = column_map.len() as Coord + 1;
        if x > ctx.pattern.columns {
            return assign_rows(ctx, column_map, row_map, used_rows);
        }
        for gx in 1..=ctx.host.columns {
            if used_cols[gx as usize] {
                continue;
            }
            match ctx.opts.pinned_columns.get(&x) {
                Some(&p) if p != gx => continue,
                None if ctx.opts.forbidden_columns.contains(&gx) => continue,
                _ => {}
            }
            if ctx.pat_col_count[x as usize] > ctx.host_col_count[gx as usize] {
                continue;
            }
            column_map.push(gx);
            used_cols[gx as usize] = true;
            let keep_going = assign_cols(ctx, column_map, used_cols, row_map, used_rows);
            used_cols[gx as usize] = false;
            column_map.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    let mut ctx = Ctx {
        pattern,
        host,
        opts,
        f,
        pat_col_count,
        host_col_count,
        h_by_row,
        v_by_row,
        verts_by_row,
    };
    assign_cols(
        &mut ctx,
        &mut column_map,
        &mut used_cols,
        &mut row_map,
        &mut used_rows,
    );
}

pub fn for_each_embedding<F>(pattern: &GridSubgraph, host: &GridSubgraph, f: &mut F)
where
    F: FnMut(&Embedding) -> bool,
{
    for_each_embedding_with(pattern, host, &SearchOptions::default(), f)
}

/// Number of labeled embeddings of `pattern` into `host`.
pub fn count_embeddings(pattern: &GridSubgraph, host: &GridSubgraph) -> u64 {
    let mut n = 0u64;
    for_each_embedding(pattern, host, &mut |_| {
        n += 1;
        true
    });
    n
}

/// First embedding in lexicographic order, if any.
pub fn contains(pattern: &GridSubgraph, host: &GridSubgraph) -> Option<Embedding> {
    let mut found = None;
    for_each_embedding(pattern, host, &mut |e| {
        found = Some(e.clone());
        false
    });
    found
}

/// An independent `k`-set within a single row or column of a host grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coclique {
    pub line_kind: LineKind,
    pub line_index: Coord,
    pub positions: BTreeSet<Coord>,
}

impl Coclique {
    /// Lattice points of the coclique.
    pub fn points(&self) -> Vec<(Coord, Coord)> {
        self.positions
            .iter()
            .map(|&p| match self.line_kind {
                LineKind::Row => (p, self.line_index),
                LineKind::Column => (self.line_index, p),
            })
            .collect()
    }

    /// Re-checks independence within the line against the host.
    pub fn verify(&self, host: &GridSubgraph) -> bool {
        let line = host.line_graph(self.line_kind, self.line_index);
        let in_range = self.positions.iter().all(|&p| p >= 1 && p <= line.n);
        in_range
            && self
                .positions
                .iter()
                .all(|&a| self.positions.iter().all(|&b| a >= b || !line.has_edge(a, b)))
            && self.points().iter().all(|p| host.vertices.contains(p))
    }
}

/// Exact maximum independent set of a line graph, with witness positions.
/// Branch and bound on bitmasks; isolated vertices are taken greedily.
pub fn line_max_independent_set(line: &LineGraph) -> Result<(usize, BTreeSet<Coord>)> {
    let cap = caps().mis_line;
    let n = line.n as usize;
    if n > cap {
        return Err(Error::SizeCap {
            what: "exact independent set line length",
            size: n,
            cap,
        });
    }
    let mut adj = vec![0u32; n];
    for &(a, b) in &line.adjacency {
        adj[(a - 1) as usize] |= 1 << (b - 1);
        adj[(b - 1) as usize] |= 1 << (a - 1);
    }

    fn mis(mask: u32, adj: &[u32]) -> (usize, u32) {
        if mask == 0 {
            return (0, 0);
        }
        let v = mask.trailing_zeros() as usize;
        let nbrs = adj[v] & mask;
        // taking an isolated vertex is always optimal
        let (take_size, take_set) = mis(mask & !(1 << v) & !nbrs, adj);
        let take = (take_size + 1, take_set | (1 << v));
        if nbrs == 0 {
            return take;
        }
        let skip = mis(mask & !(1 << v), adj);
        if skip.0 > take.0 {
            skip
        } else {
            take
        }
    }

    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let (size, set) = mis(full, &adj);
    let positions = (0..n)
        .filter(|i| set >> i & 1 == 1)
        .map(|i| i as Coord + 1)
        .collect();
    Ok((size, positions))
}

/// Maximum coclique over all rows and columns of a spanning host.
pub fn max_coclique(host: &GridSubgraph) -> Result<(usize, Coclique)> {
    if !host.spanning {
        return Err(Error::NotSpanning);
    }
    let mut best: Option<(usize, Coclique)> = None;
    let lines = (1..=host.rows)
        .map(|i| (LineKind::Row, i))
        .chain((1..=host.columns).map(|i| (LineKind::Column, i)));
    for (kind, index) in lines {
        let line = host.line_graph(kind, index);
        let (size, positions) = line_max_independent_set(&line)?;
        if best.as_ref().map_or(true, |(b, _)| size > *b) {
            best = Some((
                size,
                Coclique {
                    line_kind: kind,
                    line_index: index,
                    positions,
                },
            ));
        }
    }
    Ok(best.expect("grids have at least one line"))
}

/// Greedy minimum-degree-first independent set on a line; size is at least
/// `n/(Δ+1)` but may fall short of `target` (the caller checks).
pub fn greedy_independent_set(line: &LineGraph, target: usize) -> BTreeSet<Coord> {
    let mut alive: BTreeSet<Coord> = (1..=line.n).collect();
    let mut picked = BTreeSet::new();
    while picked.len() < target && !alive.is_empty() {
        let &v = alive
            .iter()
            .min_by_key(|&&v| {
                let deg = alive
                    .iter()
                    .filter(|&&u| u != v && line.has_edge(u, v))
                    .count();
                (deg, v)
            })
            .unwrap();
        picked.insert(v);
        let nbrs: Vec<Coord> = alive
            .iter()
            .filter(|&&u| u == v || line.has_edge(u, v))
            .copied()
            .collect();
        for u in nbrs {
            alive.remove(&u);
        }
    }
    picked
}

/// Diversity predicate: does `host_vertex` admit `n` embeddings of the simple
/// tree `tree` sending `tree_vertex` there, pairwise sharing no host column
/// except `host_vertex`'s column and no host row except its row?
pub fn is_n_diverse(
    host: &GridSubgraph,
    host_vertex: (Coord, Coord),
    tree: &GridSubgraph,
    tree_vertex: (Coord, Coord),
    n: usize,
) -> Result<(bool, Vec<Embedding>)> {
    let budget = caps().diverse_budget;
    let cost = tree.vertices.len() * n;
    if cost > budget {
        return Err(Error::SizeCap {
            what: "diversity budget |T|*n",
            size: cost,
            cap: budget,
        });
    }
    if !tree.vertices.contains(&tree_vertex) {
        return Err(Error::VertexNotFound(tree_vertex.0, tree_vertex.1));
    }
    if !host.vertices.contains(&host_vertex) {
        return Err(Error::VertexNotFound(host_vertex.0, host_vertex.1));
    }
    if !is_simple_tree(tree) {
        return Err(Error::BadParameter("diversity pattern must be a simple tree".into()));
    }

    fn extend(
        host: &GridSubgraph,
        tree: &GridSubgraph,
        tree_vertex: (Coord, Coord),
        host_vertex: (Coord, Coord),
        n: usize,
        opts: &SearchOptions,
        chosen: &mut Vec<Embedding>,
    ) -> bool {
        if chosen.len() == n {
            return true;
        }
        let mut done = false;
        for_each_embedding_with(tree, host, opts, &mut |e| {
            let mut next = opts.clone();
            for (i, &c) in e.column_map.iter().enumerate() {
                if i as Coord + 1 != tree_vertex.0 {
                    next.forbidden_columns.insert(c);
                }
            }
            for (i, &r) in e.row_map.iter().enumerate() {
                if i as Coord + 1 != tree_vertex.1 {
                    next.forbidden_rows.insert(r);
                }
            }
            chosen.push(e.clone());
            if extend(host, tree, tree_vertex, host_vertex, n, &next, chosen) {
                done = true;
                return false;
            }
            chosen.pop();
            true
        });
        done
    }

    let mut opts = SearchOptions::default();
    opts.pinned_columns.insert(tree_vertex.0, host_vertex.0);
    opts.pinned_rows.insert(tree_vertex.1, host_vertex.1);
    let mut chosen = Vec::new();
    let ok = extend(host, tree, tree_vertex, host_vertex, n, &opts, &mut chosen);
    Ok((ok, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::permutations;
    use crate::patterns::{alternating_cycle, named, one_vertex, Named};

    fn h_edge() -> GridSubgraph {
        let mut g = GridSubgraph::empty(2, 1);
        g.add_edge((1, 1), (2, 1)).unwrap();
        g
    }

    #[test]
    fn counts_on_complete_hosts() {
        let host3 = GridSubgraph::complete(3, 3);
        assert_eq!(count_embeddings(&one_vertex(), &host3), 9);
        assert_eq!(count_embeddings(&h_edge(), &GridSubgraph::complete(2, 2)), 4);
        let ac6 = alternating_cycle(6).unwrap();
        assert_eq!(count_embeddings(&ac6, &host3), 36);
    }

    #[test]
    fn falling_factorial_counts() {
        // (N)_c · (N)_r for a pattern using all its lines
        let mut p = GridSubgraph::empty(2, 2);
        p.add_edge((1, 1), (2, 1)).unwrap();
        p.add_vertex(1, 2);
        for n in 2..=4u16 {
            let host = GridSubgraph::complete(n, n);
            let ff = |k: u64| (0..2).map(|i| k - i).product::<u64>();
            assert_eq!(count_embeddings(&p, &host), ff(n as u64) * ff(n as u64));
        }
    }

    #[test]
    fn count_invariant_under_relabeling() {
        let mut host = GridSubgraph::empty_spanning(3, 3);
        host.add_edge((1, 1), (2, 1)).unwrap();
        host.add_edge((2, 1), (2, 3)).unwrap();
        host.add_edge((1, 2), (3, 2)).unwrap();
        let p = h_edge();
        let base = count_embeddings(&p, &host);
        for cp in permutations(3) {
            for rp in permutations(3) {
                let g = host.permute(&cp, &rp).unwrap();
                assert_eq!(count_embeddings(&p, &g), base);
            }
        }
    }

    #[test]
    fn contains_is_lexicographic_least() {
        let host = GridSubgraph::complete(3, 2);
        let e = contains(&h_edge(), &host).unwrap();
        assert_eq!(e.column_map, vec![1, 2]);
        assert_eq!(e.row_map, vec![1]);
        assert!(e.verify(&h_edge(), &host));
    }

    #[test]
    fn contains_agrees_with_count() {
        let sq = named(Named::Square).unwrap();
        for d in 2..=4 {
            let host = crate::patterns::aligned_staircase(d).unwrap();
            assert_eq!(contains(&sq, &host).is_none(), count_embeddings(&sq, &host) == 0);
        }
        assert!(contains(&sq, &GridSubgraph::complete(2, 2)).is_some());
    }

    #[test]
    fn monotone_in_host_edges() {
        let p = alternating_cycle(4).unwrap();
        let mut host = GridSubgraph::empty_spanning(3, 3);
        let mut last = 0;
        let full = GridSubgraph::complete(3, 3);
        for &(x1, x2, y) in &full.h_edges {
            host.h_edges.insert((x1, x2, y));
            let c = count_embeddings(&p, &host);
            assert!(c >= last);
            last = c;
        }
        for &(x, y1, y2) in &full.v_edges {
            host.v_edges.insert((x, y1, y2));
            let c = count_embeddings(&p, &host);
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn max_coclique_cases() {
        let (s, w) = max_coclique(&GridSubgraph::empty_spanning(3, 3)).unwrap();
        assert_eq!(s, 3);
        assert!(w.verify(&GridSubgraph::empty_spanning(3, 3)));
        let (s, _) = max_coclique(&GridSubgraph::complete(4, 4)).unwrap();
        assert_eq!(s, 1);
    }

    #[test]
    fn max_coclique_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let full = GridSubgraph::complete(4, 4);
            let mut g = GridSubgraph::empty_spanning(4, 4);
            for &e in &full.h_edges {
                if rng.gen_bool(0.5) {
                    g.h_edges.insert(e);
                }
            }
            for &e in &full.v_edges {
                if rng.gen_bool(0.5) {
                    g.v_edges.insert(e);
                }
            }
            let (got, w) = max_coclique(&g).unwrap();
            assert!(w.verify(&g));
            // oracle: all subsets of every line
            let mut best = 0usize;
            let lines = (1..=4u16)
                .map(|i| (LineKind::Row, i))
                .chain((1..=4u16).map(|i| (LineKind::Column, i)));
            for (kind, idx) in lines {
                let line = g.line_graph(kind, idx);
                for mask in 0u32..16 {
                    let pts: Vec<Coord> =
                        (0..4).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                    let indep = pts
                        .iter()
                        .all(|&a| pts.iter().all(|&b| a >= b || !line.has_edge(a, b)));
                    if indep {
                        best = best.max(pts.len());
                    }
                }
            }
            assert_eq!(got, best);
        }
    }

    #[test]
    fn greedy_line_cases() {
        let edgeless = LineGraph {
            line_kind: LineKind::Row,
            index: 1,
            n: 5,
            adjacency: BTreeSet::new(),
        };
        assert_eq!(greedy_independent_set(&edgeless, 5).len(), 5);

        let mut complete = BTreeSet::new();
        for a in 1..5u16 {
            for b in a + 1..=5 {
                complete.insert((a, b));
            }
        }
        let k5 = LineGraph {
            line_kind: LineKind::Row,
            index: 1,
            n: 5,
            adjacency: complete,
        };
        assert_eq!(greedy_independent_set(&k5, 5).len(), 1);

        let c5 = LineGraph {
            line_kind: LineKind::Row,
            index: 1,
            n: 5,
            adjacency: [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)].into_iter().collect(),
        };
        assert_eq!(greedy_independent_set(&c5, 5).len(), 2);
        let (exact, _) = line_max_independent_set(&c5).unwrap();
        assert_eq!(exact, 2);
    }

    #[test]
    fn diversity_small_cases() {
        let single = one_vertex();
        let host = GridSubgraph::complete(3, 3);
        let (ok, _) = is_n_diverse(&host, (2, 2), &single, (1, 1), 3).unwrap();
        assert!(ok);

        let empty = GridSubgraph::empty_spanning(3, 3);
        let edge = {
            let mut g = GridSubgraph::empty(2, 1);
            g.add_edge((1, 1), (2, 1)).unwrap();
            g
        };
        let (ok, _) = is_n_diverse(&empty, (1, 1), &edge, (1, 1), 1).unwrap();
        assert!(!ok);

        let host5 = GridSubgraph::complete(5, 5);
        let (ok, ws) = is_n_diverse(&host5, (3, 3), &edge, (1, 1), 2).unwrap();
        assert!(ok);
        assert_eq!(ws.len(), 2);
        // the two extensions use distinct non-center columns
        assert_ne!(ws[0].column_map[1], ws[1].column_map[1]);
        for w in &ws {
            assert!(w.verify(&edge, &host5));
            assert_eq!(w.image((1, 1)), (3, 3));
        }
    }
}
