//! Column colorings over the subset alphabet `2^[r]` and the compatibility
//! search used by the reduction to patterns with few rows.

use std::collections::BTreeMap;

use crate::caps::caps;
use crate::grid::GridSubgraph;
use crate::{Coord, Error, Result};

/// Assigns each unordered column pair the set of rows (as a bitmask) whose
/// horizontal edge between the two columns is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnColoring {
    pub n: Coord,
    pub rows: Coord,
    pub color: BTreeMap<(Coord, Coord), u32>,
}

impl ColumnColoring {
    pub fn get(&self, x1: Coord, x2: Coord) -> u32 {
        *self.color.get(&(x1.min(x2), x1.max(x2))).unwrap_or(&0)
    }

    /// Rows in the color as 1-based indices.
    pub fn rows_of(&self, x1: Coord, x2: Coord) -> Vec<Coord> {
        let mask = self.get(x1, x2);
        (1..=self.rows).filter(|y| mask >> (y - 1) & 1 == 1).collect()
    }
}

/// The coloring χ(x₁,x₂) = { y : {(x₁,y),(x₂,y)} ∈ E(G) }.
pub fn column_coloring(g: &GridSubgraph) -> Result<ColumnColoring> {
    let cap = caps().coloring_rows;
    if g.rows as usize > cap {
        return Err(Error::SizeCap {
            what: "column coloring rows",
            size: g.rows as usize,
            cap,
        });
    }
    let mut color = BTreeMap::new();
    for x1 in 1..g.columns {
        for x2 in x1 + 1..=g.columns {
            color.insert((x1, x2), 0u32);
        }
    }
    for &(x1, x2, y) in &g.h_edges {
        *color.get_mut(&(x1, x2)).unwrap() |= 1 << (y - 1);
    }
    Ok(ColumnColoring {
        n: g.columns,
        rows: g.rows,
        color,
    })
}

/// Finds a column injection φ with χ_H(x₁,x₂) ⊆ χ_G(φ(x₁),φ(x₂)) on every
/// pattern pair; together with the identity row map this is an embedding of
/// the horizontal-only pattern. With `require_unique_colors`, patterns in
/// which two horizontal edges share a column pair are rejected up front.
pub fn find_colored_pattern(
    chi: &ColumnColoring,
    h: &GridSubgraph,
    require_unique_colors: bool,
) -> Result<Option<Vec<Coord>>> {
    if !h.v_edges.is_empty() {
        return Err(Error::BadParameter(
            "colored-pattern search takes horizontal-only patterns".into(),
        ));
    }
    if h.rows > chi.rows || h.columns > chi.n {
        return Ok(None);
    }
    let chi_h = column_coloring(h)?;
    if require_unique_colors {
        for (&(x1, x2), &mask) in &chi_h.color {
            if mask.count_ones() > 1 {
                return Err(Error::BadParameter(format!(
                    "columns {x1} and {x2} carry {} aligned edges; at most one allowed",
                    mask.count_ones()
                )));
            }
        }
    }
    let constraints: Vec<((Coord, Coord), u32)> = chi_h
        .color
        .iter()
        .filter(|(_, &m)| m != 0)
        .map(|(&p, &m)| (p, m))
        .collect();

    fn rec(
        c_h: Coord,
        n: Coord,
        chi: &ColumnColoring,
        constraints: &[((Coord, Coord), u32)],
        map: &mut Vec<Coord>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = map.len() as Coord + 1;
        if x > c_h {
            return true;
        }
        'cand: for u in 1..=n {
            if used[u as usize] {
                continue;
            }
            for &((a, b), m) in constraints {
                // check pairs whose later column is x
                let other = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if other < x {
                    let img = map[(other - 1) as usize];
                    if m & !chi.get(img, u) != 0 {
                        continue 'cand;
                    }
                }
            }
            map.push(u);
            used[u as usize] = true;
            if rec(c_h, n, chi, constraints, map, used) {
                return true;
            }
            used[u as usize] = false;
            map.pop();
        }
        false
    }

    let mut map = Vec::new();
    let mut used = vec![false; chi.n as usize + 1];
    if rec(h.columns, chi.n, chi, &constraints, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

/// Largest set of columns no pair of which is colored exactly `t_mask`.
/// Exact independent-set search up to the configured column cap, greedy
/// beyond it; the flag reports which mode ran.
pub fn color_restricted_subset(chi: &ColumnColoring, t_mask: u32) -> (Vec<Coord>, bool) {
    let n = chi.n as usize;
    let conflict = |a: Coord, b: Coord| chi.get(a, b) == t_mask;
    if n <= caps().color_subset_exact && n <= 30 {
        // branch and bound over column bitmasks
        fn mis(mask: u32, adj: &[u32]) -> (usize, u32) {
            if mask == 0 {
                return (0, 0);
            }
            let v = mask.trailing_zeros() as usize;
            let nbrs = adj[v] & mask;
            let (ts, tset) = mis(mask & !(1 << v) & !nbrs, adj);
            let take = (ts + 1, tset | (1 << v));
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
        let mut adj = vec![0u32; n];
        for a in 1..=n as Coord {
            for b in a + 1..=n as Coord {
                if conflict(a, b) {
                    adj[(a - 1) as usize] |= 1 << (b - 1);
                    adj[(b - 1) as usize] |= 1 << (a - 1);
                }
            }
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let (_, set) = mis(full, &adj);
        let cols = (0..n)
            .filter(|i| set >> i & 1 == 1)
            .map(|i| i as Coord + 1)
            .collect();
        (cols, true)
    } else {
        let mut picked: Vec<Coord> = Vec::new();
        for u in 1..=chi.n {
            if picked.iter().all(|&p| !conflict(p, u)) {
                picked.push(u);
            }
        }
        (picked, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{for_each_embedding_with, SearchOptions};

    fn random_spanning(
        rng: &mut impl rand::Rng,
        columns: Coord,
        rows: Coord,
        p: f64,
    ) -> GridSubgraph {
        let full = GridSubgraph::complete(columns, rows);
        let mut g = GridSubgraph::empty_spanning(columns, rows);
        for &e in &full.h_edges {
            if rng.gen_bool(p) {
                g.h_edges.insert(e);
            }
        }
        for &e in &full.v_edges {
            if rng.gen_bool(p) {
                g.v_edges.insert(e);
            }
        }
        g
    }

    #[test]
    fn coloring_basics() {
        let g = GridSubgraph::complete(4, 2);
        let chi = column_coloring(&g).unwrap();
        for x1 in 1..4 {
            for x2 in x1 + 1..=4 {
                assert_eq!(chi.rows_of(x1, x2), vec![1, 2]);
            }
        }

        let mut one = GridSubgraph::empty_spanning(3, 2);
        one.add_edge((1, 1), (2, 1)).unwrap();
        let chi = column_coloring(&one).unwrap();
        assert_eq!(chi.get(1, 2), 0b01);
        assert_eq!(chi.get(1, 3), 0);
        assert_eq!(chi.get(2, 3), 0);

        let empty = GridSubgraph::empty_spanning(3, 3);
        let chi = column_coloring(&empty).unwrap();
        assert!(chi.color.values().all(|&m| m == 0));
    }

    #[test]
    fn coloring_rows_cap() {
        let g = GridSubgraph::empty_spanning(2, 7);
        assert!(column_coloring(&g).is_err());
    }

    #[test]
    fn complement_coloring_flips_masks() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g = random_spanning(&mut rng, 5, 3, 0.5);
        let co = g.complement().unwrap();
        let chi = column_coloring(&g).unwrap();
        let chic = column_coloring(&co).unwrap();
        let full = (1u32 << 3) - 1;
        for x1 in 1..5 {
            for x2 in x1 + 1..=5 {
                assert_eq!(chi.get(x1, x2) ^ chic.get(x1, x2), full);
            }
        }
    }

    #[test]
    fn pattern_search_basics() {
        let complete = GridSubgraph::complete(4, 2);
        let chi = column_coloring(&complete).unwrap();
        let mut h = GridSubgraph::empty(2, 1);
        h.add_edge((1, 1), (2, 1)).unwrap();
        assert!(find_colored_pattern(&chi, &h, false).unwrap().is_some());

        // pattern lives in row 2; host only has row-1 edges
        let mut g = GridSubgraph::empty_spanning(3, 2);
        g.add_edge((1, 1), (2, 1)).unwrap();
        let chi = column_coloring(&g).unwrap();
        let mut h2 = GridSubgraph::empty(2, 2);
        h2.add_edge((1, 2), (2, 2)).unwrap();
        assert!(find_colored_pattern(&chi, &h2, false).unwrap().is_none());
    }

    #[test]
    fn pattern_search_rejects_vertical_and_aligned() {
        let chi = column_coloring(&GridSubgraph::complete(3, 2)).unwrap();
        let mut v = GridSubgraph::empty(1, 2);
        v.add_edge((1, 1), (1, 2)).unwrap();
        assert!(find_colored_pattern(&chi, &v, false).is_err());

        let mut aligned = GridSubgraph::empty(2, 2);
        aligned.add_edge((1, 1), (2, 1)).unwrap();
        aligned.add_edge((1, 2), (2, 2)).unwrap();
        assert!(find_colored_pattern(&chi, &aligned, true).is_err());
        assert!(find_colored_pattern(&chi, &aligned, false).unwrap().is_some());
    }

    #[test]
    fn pattern_search_matches_embed_with_identity_rows() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for trial in 0..30 {
            let g = random_spanning(&mut rng, 8, 2, 0.4);
            let chi = column_coloring(&g).unwrap();
            // two-row pattern with no aligned pairs
            let mut h = GridSubgraph::empty(3, 2);
            h.add_edge((1, 1), (2, 1)).unwrap();
            h.add_edge((2, 2), (3, 2)).unwrap();

            let colored = find_colored_pattern(&chi, &h, true).unwrap();
            let mut opts = SearchOptions::default();
            for y in 1..=2 {
                opts.pinned_rows.insert(y, y);
            }
            let mut direct = None;
            for_each_embedding_with(&h, &g, &opts, &mut |e| {
                direct = Some(e.clone());
                false
            });
            assert_eq!(colored.is_some(), direct.is_some(), "trial {trial}");
            if let Some(map) = colored {
                let emb = crate::embed::Embedding {
                    column_map: map,
                    row_map: vec![1, 2],
                };
                assert!(emb.verify(&h, &g));
            }
        }
    }

    #[test]
    fn restricted_subset_extremes() {
        let complete = GridSubgraph::complete(5, 2);
        let chi = column_coloring(&complete).unwrap();
        // all pairs colored {1,2}
        let (all_t, exact) = color_restricted_subset(&chi, 0b11);
        assert!(exact);
        assert_eq!(all_t.len(), 1);
        let (none_t, _) = color_restricted_subset(&chi, 0b01);
        assert_eq!(none_t.len(), 5);
    }

    #[test]
    fn restricted_subset_matches_oracle() {
        // row graph C5 in row 1: color {1} exactly on cycle pairs
        let mut g = GridSubgraph::empty_spanning(5, 2);
        for &(a, b) in &[(1u16, 2u16), (2, 3), (3, 4), (4, 5), (1, 5)] {
            g.add_edge((a, 1), (b, 1)).unwrap();
        }
        let chi = column_coloring(&g).unwrap();
        let (got, exact) = color_restricted_subset(&chi, 0b01);
        assert!(exact);
        // oracle over all subsets
        let mut best = 0;
        for mask in 0u32..32 {
            let cols: Vec<Coord> = (0..5).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let ok = cols
                .iter()
                .all(|&a| cols.iter().all(|&b| a >= b || chi.get(a, b) != 0b01));
            if ok {
                best = best.max(cols.len());
            }
        }
        assert_eq!(got.len(), best);
    }
}
