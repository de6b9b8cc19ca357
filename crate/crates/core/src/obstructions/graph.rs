//! Bitmask graphs and an exact chromatic number solver.
//!
//! The solver is the oracle used to certify that the explicit Kneser
//! colorings are optimal at desk scale. It is a DSATUR branch and bound
//! with a greedy clique preassignment; dense graphs up to roughly 60
//! vertices and sparse ones well beyond that close within the budget.

use crate::error::{Error, Result};

/// Undirected graph on at most 128 vertices with bitmask adjacency rows.
#[derive(Clone, Debug)]
pub struct MaskGraph {
    adj: Vec<u128>,
}

impl MaskGraph {
    pub fn new(vertices: usize) -> Result<Self> {
        if vertices > 128 {
            return Err(Error::InvalidSpec(format!(
                "size cap exceeded: {vertices} vertices, mask graphs hold at most 128"
            )));
        }
        Ok(MaskGraph { adj: vec![0; vertices] })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "no loops");
        assert!(i < self.adj.len() && j < self.adj.len(), "vertex out of range");
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    /// Neighbor set of `i` as a bitmask.
    pub fn neighbors(&self, i: usize) -> u128 {
        self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }
}

/// Branch node budget for [`brute_chromatic`]; exceeding it is reported as an
/// error rather than letting the search run away.
const NODE_BUDGET: u64 = 50_000_000;

/// Exact chromatic number by branch and bound.
///
/// A greedily grown clique is preassigned (its vertices must all receive
/// distinct colors, which also breaks color symmetry), a DSATUR greedy run
/// provides the initial upper bound, and the search branches on the
/// uncolored vertex with the most distinctly colored neighbors.
pub fn brute_chromatic(g: &MaskGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(0);
    }
    if g.adj.iter().all(|&m| m == 0) {
        return Ok(1);
    }
    let clique = greedy_clique(g);
    let greedy = dsatur_greedy(g);
    if clique.len() == greedy {
        return Ok(greedy);
    }
    let mut search = Search {
        g,
        color: vec![usize::MAX; n],
        sat_mask: vec![0u128; n],
        sat_count: vec![[0u8; 128]; n],
        uncolored: if n == 128 { !0u128 } else { (1u128 << n) - 1 },
        best: greedy,
        floor: clique.len(),
        nodes: 0,
    };
    for (c, &v) in clique.iter().enumerate() {
        search.assign(v, c);
    }
    search.branch(clique.len())?;
    Ok(search.best)
}

struct Search<'a> {
    g: &'a MaskGraph,
    color: Vec<usize>,
    /// Per vertex, the set of colors present among its colored neighbors.
    sat_mask: Vec<u128>,
    /// Per vertex and color, how many colored neighbors carry that color.
    sat_count: Vec<[u8; 128]>,
    uncolored: u128,
    best: usize,
    floor: usize,
    nodes: u64,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        self.uncolored &= !(1u128 << v);
        let mut nb = self.g.neighbors(v) & self.uncolored;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            self.sat_count[u][c] += 1;
            self.sat_mask[u] |= 1 << c;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.uncolored |= 1 << v;
        self.color[v] = usize::MAX;
        let mut nb = self.g.neighbors(v) & self.uncolored;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            self.sat_count[u][c] -= 1;
            if self.sat_count[u][c] == 0 {
                self.sat_mask[u] &= !(1u128 << c);
            }
        }
    }

    /// `used` is the number of colors currently in use; returns early once
    /// the clique lower bound is met.
    fn branch(&mut self, used: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::RetryCapExceeded {
                attempts: NODE_BUDGET.min(u32::MAX as u64) as u32,
                context: "chromatic number search budget (size cap exceeded)".into(),
            });
        }
        if self.uncolored == 0 {
            self.best = used;
            return Ok(self.best == self.floor);
        }
        if used >= self.best {
            return Ok(false);
        }
        let v = self.pick_vertex();
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.sat_mask[v] >> c & 1 == 1 {
                continue;
            }
            self.assign(v, c);
            let done = self.branch(used.max(c + 1))?;
            self.unassign(v, c);
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Most saturated uncolored vertex; ties by degree, then index.
    fn pick_vertex(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (0usize, 0usize);
        let mut rest = self.uncolored;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let cand = (self.sat_mask[u].count_ones() as usize, self.g.degree(u));
            if best == usize::MAX || cand > key {
                best = u;
                key = cand;
            }
        }
        best
    }
}

/// Grow a clique greedily from the highest-degree vertex.
fn greedy_clique(g: &MaskGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut clique = Vec::new();
    let mut candidates = if n == 128 { !0u128 } else { (1u128 << n) - 1 };
    while candidates != 0 {
        let mut pick = None;
        let mut rest = candidates;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let deg = (g.neighbors(u) & candidates).count_ones();
            if pick.map_or(true, |(_, d)| deg > d) {
                pick = Some((u, deg));
            }
        }
        let (u, _) = pick.expect("candidates nonempty");
        clique.push(u);
        candidates &= g.neighbors(u);
    }
    clique
}

/// DSATUR greedy coloring; returns the number of colors used.
fn dsatur_greedy(g: &MaskGraph) -> usize {
    let n = g.vertex_count();
    let mut sat = vec![0u128; n];
    let mut color = vec![usize::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        let mut v = usize::MAX;
        let mut key = (0usize, 0usize);
        for u in 0..n {
            if color[u] != usize::MAX {
                continue;
            }
            let cand = (sat[u].count_ones() as usize, g.degree(u));
            if v == usize::MAX || cand > key {
                v = u;
                key = cand;
            }
        }
        let c = (0..).find(|&c| sat[v] >> c & 1 == 0).expect("a free color exists");
        color[v] = c;
        used = used.max(c + 1);
        let mut nb = g.neighbors(v);
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            sat[u] |= 1 << c;
        }
    }
    used
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> MaskGraph {
        let mut g = MaskGraph::new(n).expect("small");
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    fn cycle(n: usize) -> MaskGraph {
        let mut g = MaskGraph::new(n).expect("small");
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn complete_graphs_need_all_colors() {
        for n in 1..=6 {
            assert_eq!(brute_chromatic(&complete(n)).expect("solves"), n);
        }
    }

    #[test]
    fn edgeless_needs_one_color() {
        let g = MaskGraph::new(7).expect("small");
        assert_eq!(brute_chromatic(&g).expect("solves"), 1);
        let empty = MaskGraph::new(0).expect("empty");
        assert_eq!(brute_chromatic(&empty).expect("solves"), 0);
    }

    #[test]
    fn cycles_alternate_by_parity() {
        assert_eq!(brute_chromatic(&cycle(6)).expect("solves"), 2);
        assert_eq!(brute_chromatic(&cycle(5)).expect("solves"), 3);
        assert_eq!(brute_chromatic(&cycle(9)).expect("solves"), 3);
    }

    #[test]
    fn bipartite_double_star_is_two_chromatic() {
        // two hubs joined, each with three private leaves
        let mut g = MaskGraph::new(8).expect("small");
        g.add_edge(0, 1);
        for leaf in 2..5 {
            g.add_edge(0, leaf);
        }
        for leaf in 5..8 {
            g.add_edge(1, leaf);
        }
        assert_eq!(brute_chromatic(&g).expect("solves"), 2);
    }

    #[test]
    fn size_cap_is_reported() {
        assert!(matches!(MaskGraph::new(129), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn clique_plus_pendant_path() {
        // K_5 with a path of two extra vertices glued to one corner
        let mut g = MaskGraph::new(7).expect("small");
        for i in 0..5 {
            for j in i + 1..5 {
                g.add_edge(i, j);
            }
        }
        g.add_edge(4, 5);
        g.add_edge(5, 6);
        assert_eq!(brute_chromatic(&g).expect("solves"), 5);
    }
}
