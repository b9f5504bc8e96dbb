//! Dense-id undirected graphs and vertex orderings.
//!
//! Vertices are `0..n`. Edges are stored once as `(u, v)` with `u < v`;
//! adjacency is mirrored into per-vertex sorted neighbor lists plus a
//! bitset for O(1) membership tests. Orderings are bijections from
//! vertices onto positions `1..=n` and are validated on construction, so
//! downstream code can rely on them being well formed.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Default ceiling for the exact clique search. The bound-and-branch
/// search is exponential in the worst case; anything larger than this is
/// rejected instead of silently hanging.
pub const DEFAULT_CLIQUE_CAP: usize = 512;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    adj: Vec<Vec<u64>>,
}

impl Graph {
    /// Build a graph on `n` vertices from an edge list. Edges may be given
    /// in either endpoint order but must not contain loops or duplicates.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("loop at vertex {a}")));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }

        let words = n.div_ceil(WORD_BITS).max(1);
        let mut neighbors = vec![Vec::new(); n];
        let mut adj = vec![vec![0u64; words]; n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
            adj[u][v / WORD_BITS] |= 1 << (v % WORD_BITS);
            adj[v][u / WORD_BITS] |= 1 << (u % WORD_BITS);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            neighbors,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    /// Neighborhood of `v` as a single word; only valid when `n <= 64`.
    pub fn neighbor_word(&self, v: usize) -> u64 {
        debug_assert!(self.n <= WORD_BITS);
        self.adj[v][0]
    }

    // ---- small builders used by generators and tests ----

    pub fn empty(n: usize) -> Self {
        Graph::new(n, &[]).expect("edgeless graph is always valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        Graph::new(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("clique edges are valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::new(a + b, &edges).expect("bipartite edges are valid")
    }

    /// Induced subgraph on `keep` (which must be duplicate-free); returns
    /// the subgraph together with the map from new ids to original ids.
    pub fn induced(&self, keep: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(
                "duplicate vertex in induced set".into(),
            ));
        }
        if let Some(&last) = sorted.last() {
            if last >= self.n {
                return Err(Error::InvalidInput(format!(
                    "vertex {last} out of range for n = {}",
                    self.n
                )));
            }
        }
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in sorted.iter().enumerate() {
            back[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if back[u] != usize::MAX && back[v] != usize::MAX {
                edges.push((back[u], back[v]));
            }
        }
        Ok((Graph::new(sorted.len(), &edges)?, sorted))
    }
}

/// A bijection from vertices `0..n` onto positions `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    pos: Vec<usize>,
}

impl Ordering {
    /// `pos[v]` is the 1-indexed position of vertex `v`.
    pub fn new(pos: Vec<usize>) -> Result<Self> {
        let n = pos.len();
        let mut seen = vec![false; n + 1];
        for (v, &p) in pos.iter().enumerate() {
            if p < 1 || p > n {
                return Err(Error::InvalidOrdering(format!(
                    "vertex {v} has position {p}, outside 1..={n}"
                )));
            }
            if seen[p] {
                return Err(Error::InvalidOrdering(format!("position {p} used twice")));
            }
            seen[p] = true;
        }
        Ok(Ordering { pos })
    }

    /// Build from the sequence of vertices read left to right.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let n = seq.len();
        let mut pos = vec![0usize; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrdering(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            if pos[v] != 0 {
                return Err(Error::InvalidOrdering(format!("vertex {v} listed twice")));
            }
            pos[v] = i + 1;
        }
        Ok(Ordering { pos })
    }

    pub fn identity(n: usize) -> Self {
        Ordering {
            pos: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    /// The vertex sequence read left to right.
    pub fn sequence(&self) -> Vec<usize> {
        let n = self.pos.len();
        let mut seq = vec![0usize; n];
        for (v, &p) in self.pos.iter().enumerate() {
            seq[p - 1] = v;
        }
        seq
    }

    /// Mirror image: position p becomes n + 1 - p.
    pub fn reverse(&self) -> Ordering {
        let n = self.pos.len();
        Ordering {
            pos: self.pos.iter().map(|&p| n + 1 - p).collect(),
        }
    }
}

/// Largest edge stretch `|pos(u) - pos(v)|` under `pi`; 0 for edgeless
/// graphs. Errors when the ordering is over a different vertex count.
pub fn stretch(g: &Graph, pi: &Ordering) -> Result<usize> {
    if pi.len() != g.n() {
        return Err(Error::InvalidOrdering(format!(
            "ordering over {} vertices given for a graph on {}",
            pi.len(),
            g.n()
        )));
    }
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| pi.position(u).abs_diff(pi.position(v)))
        .max()
        .unwrap_or(0))
}

/// Connected components, each sorted ascending, ordered by smallest member.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(v) = queue.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn clique_number(g: &Graph) -> Result<usize> {
    clique_number_capped(g, DEFAULT_CLIQUE_CAP)
}

/// Exact clique number by branch and bound with a greedy-coloring bound.
/// Rejects graphs larger than `cap` with a resource-limit error.
pub fn clique_number_capped(g: &Graph, cap: usize) -> Result<usize> {
    let n = g.n();
    if n > cap {
        return Err(Error::ResourceLimit(format!(
            "clique search capped at {cap} vertices, graph has {n}"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    // Static order by descending degree stabilizes the search; ties by id.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (usize::MAX - g.degree(v), v));

    let words = n.div_ceil(WORD_BITS);
    let mut adj = vec![vec![0u64; words]; n];
    for (slot, &v) in order.iter().enumerate() {
        for &w in g.neighbors(v) {
            let wslot = order.iter().position(|&x| x == w).unwrap();
            adj[slot][wslot / WORD_BITS] |= 1 << (wslot % WORD_BITS);
        }
    }

    let mut best = 0usize;
    let mut cand: Vec<u64> = vec![!0u64; words];
    if !n.is_multiple_of(WORD_BITS) {
        cand[words - 1] = (1u64 << (n % WORD_BITS)) - 1;
    }
    expand_clique(&adj, &cand, 0, &mut best, words, n);
    Ok(best)
}

fn expand_clique(
    adj: &[Vec<u64>],
    cand: &[u64],
    size: usize,
    best: &mut usize,
    words: usize,
    n: usize,
) {
    // Greedy coloring of the candidate set: vertices are processed in slot
    // order and the color count bounds any clique inside `cand`.
    let mut verts = Vec::new();
    for v in 0..n {
        if cand[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1 {
            verts.push(v);
        }
    }
    if verts.is_empty() {
        *best = (*best).max(size);
        return;
    }
    let mut color = vec![0usize; verts.len()];
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let mut c = 0;
        loop {
            if c == classes.len() {
                classes.push(vec![0u64; words]);
            }
            let conflict = (0..words).any(|w| classes[c][w] & adj[v][w] != 0);
            if !conflict {
                classes[c][v / WORD_BITS] |= 1 << (v % WORD_BITS);
                color[i] = c + 1;
                break;
            }
            c += 1;
        }
    }
    // Process candidates in reverse color order so the bound tightens fast.
    let mut by_color: Vec<(usize, usize)> =
        verts.iter().copied().zip(color.iter().copied()).collect();
    by_color.sort_by_key(|&(v, c)| (c, v));

    let mut live = cand.to_vec();
    for &(v, c) in by_color.iter().rev() {
        if size + c <= *best {
            return;
        }
        let mut next = vec![0u64; words];
        for w in 0..words {
            next[w] = live[w] & adj[v][w];
        }
        expand_clique(adj, &next, size + 1, best, words, n);
        live[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        // Outer 5-cycle, inner 5-star polygon, spokes.
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, 5 + i));
        }
        Graph::new(10, &edges).unwrap()
    }

    /// Independent oracle: largest clique by scanning all vertex subsets.
    fn clique_by_subsets(g: &Graph) -> usize {
        let n = g.n();
        assert!(n <= 20);
        let mut best = 0;
        for mask in 0u32..1 << n {
            let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if verts.len() <= best {
                continue;
            }
            let ok = verts
                .iter()
                .enumerate()
                .all(|(i, &u)| verts[i + 1..].iter().all(|&v| g.adjacent(u, v)));
            if ok {
                best = verts.len();
            }
        }
        best
    }

    #[test]
    fn stretch_of_paths_and_triangles() {
        let p3 = Graph::path(3);
        assert_eq!(stretch(&p3, &Ordering::identity(3)).unwrap(), 1);
        // Putting the middle vertex last stretches one path edge across.
        let pi = Ordering::new(vec![1, 3, 2]).unwrap();
        assert_eq!(stretch(&p3, &pi).unwrap(), 2);

        let k3 = Graph::complete(3);
        assert_eq!(stretch(&k3, &Ordering::identity(3)).unwrap(), 2);
    }

    #[test]
    fn stretch_rejects_mismatched_ordering() {
        let g = Graph::path(4);
        let pi = Ordering::identity(3);
        assert!(stretch(&g, &pi).is_err());
    }

    #[test]
    fn ordering_validation() {
        assert!(Ordering::new(vec![1, 2, 2]).is_err());
        assert!(Ordering::new(vec![0, 1, 2]).is_err());
        assert!(Ordering::new(vec![1, 2, 4]).is_err());
        assert!(Ordering::new(vec![2, 3, 1]).is_ok());
        assert!(Ordering::from_sequence(&[2, 0, 1]).is_ok());
        assert!(Ordering::from_sequence(&[2, 2, 1]).is_err());
    }

    #[test]
    fn reverse_mirrors_positions() {
        let pi = Ordering::identity(3);
        assert_eq!(pi.reverse().positions(), &[3, 2, 1]);
        let g = Graph::cycle(5);
        let pi = Ordering::new(vec![3, 1, 4, 5, 2]).unwrap();
        assert_eq!(
            stretch(&g, &pi).unwrap(),
            stretch(&g, &pi.reverse()).unwrap()
        );
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(Graph::new(3, &[(0, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn clique_number_examples() {
        assert_eq!(clique_number(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(clique_number(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(clique_number(&Graph::empty(6)).unwrap(), 1);
        assert_eq!(clique_number(&Graph::empty(0)).unwrap(), 0);
        // Petersen is triangle-free; pinned against the subset oracle.
        let p = petersen();
        let expected = clique_by_subsets(&p);
        assert_eq!(expected, 2);
        assert_eq!(clique_number(&p).unwrap(), expected);
    }

    #[test]
    fn clique_number_matches_subset_oracle_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7061);
        for _ in 0..60 {
            let n = rng.gen_range(1..=9);
            let mut edges = Vec::new();
            let p: f64 = rng.gen_range(0.1..0.9);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            assert_eq!(clique_number(&g).unwrap(), clique_by_subsets(&g));
        }
    }

    #[test]
    fn clique_cap_is_enforced() {
        let g = Graph::empty(8);
        assert!(matches!(
            clique_number_capped(&g, 4),
            Err(crate::Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn components_are_sorted_by_smallest_member() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(components(&g), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(components(&Graph::path(5)).len(), 1);
        assert_eq!(components(&Graph::empty(3)).len(), 3);
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = Graph::cycle(5);
        let (sub, map) = g.induced(&[0, 1, 3]).unwrap();
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(sub.edge_count(), 1); // only 0-1 survives
        assert!(sub.adjacent(0, 1));
    }

    #[test]
    fn stretch_invariant_under_automorphisms() {
        // Brute-force automorphisms of small graphs, then check stretch of
        // a fixed ordering composed with each.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(90210);
        for _ in 0..20 {
            let n = rng.gen_range(2..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let autos = automorphisms(&g);
            let pi = random_ordering(n, &mut rng);
            let base = stretch(&g, &pi).unwrap();
            for f in autos {
                // pi composed with the automorphism: v -> pi(f(v))
                let composed = Ordering::new((0..n).map(|v| pi.position(f[v])).collect()).unwrap();
                assert_eq!(stretch(&g, &composed).unwrap(), base);
            }
        }
    }

    fn random_ordering(n: usize, rng: &mut impl rand::Rng) -> Ordering {
        use rand::seq::SliceRandom;
        let mut seq: Vec<usize> = (0..n).collect();
        seq.shuffle(rng);
        Ordering::from_sequence(&seq).unwrap()
    }

    fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permute_check(g, &mut perm, 0, &mut out);
        out
    }

    fn permute_check(g: &Graph, perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        let n = g.n();
        if k == n {
            let ok = (0..n)
                .all(|u| (u + 1..n).all(|v| g.adjacent(u, v) == g.adjacent(perm[u], perm[v])));
            if ok {
                out.push(perm.clone());
            }
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute_check(g, perm, k + 1, out);
            perm.swap(k, i);
        }
    }
}
