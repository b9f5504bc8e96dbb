//! Oracle solvers for bandwidth: exhaustive permutation search and a
//! window-based decision search.
//!
//! `bandwidth_bruteforce` is the ground truth on tiny graphs. The decision
//! procedure `bandwidth_decide` places vertices left to right and keeps, as
//! state, the set of placed vertices plus the ordered occupants of the last
//! min(b, placed) positions; a vertex sliding out of that window must have
//! every neighbor placed, which is exactly the stretch-≤-b condition.
//! Dead states are memoized up to a state budget; past it, the search keeps
//! running without new memo entries until an effort budget lapses.

use crate::error::{Error, Result};
use crate::graph::{clique_number, components, stretch, Graph, Ordering};
use std::collections::HashSet;

#[derive(Clone, Debug)]
pub struct ExactConfig {
    /// Vertex cap for the factorial search.
    pub max_brute_n: usize,
    /// Maximum number of memoized dead states in the decision search.
    pub state_budget: usize,
    /// Search-node cap for the decision search (memoized or not).
    pub effort_budget: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_brute_n: 10,
            state_budget: 50_000_000,
            effort_budget: 400_000_000,
        }
    }
}

/// Minimum bandwidth and an ordering attaining it, by branch-and-bound
/// over all orderings. Only for small graphs.
pub fn bandwidth_bruteforce(g: &Graph) -> Result<(usize, Ordering)> {
    bandwidth_bruteforce_with(g, &ExactConfig::default())
}

pub fn bandwidth_bruteforce_with(g: &Graph, cfg: &ExactConfig) -> Result<(usize, Ordering)> {
    let n = g.n();
    if n > cfg.max_brute_n {
        return Err(Error::ResourceLimit(format!(
            "brute force capped at {} vertices, got {n}",
            cfg.max_brute_n
        )));
    }
    if n == 0 || g.edge_count() == 0 {
        return Ok((0, Ordering::identity(n)));
    }
    let identity = Ordering::identity(n);
    let mut best_val = stretch(g, &identity)?;
    let mut best_seq: Vec<usize> = (0..n).collect();
    let mut path = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];
    let mut used = vec![false; n];
    brute_rec(
        g,
        &mut path,
        &mut pos,
        &mut used,
        0,
        &mut best_val,
        &mut best_seq,
    );
    Ok((best_val, Ordering::from_sequence(&best_seq)?))
}

fn brute_rec(
    g: &Graph,
    path: &mut Vec<usize>,
    pos: &mut [usize],
    used: &mut [bool],
    cur_max: usize,
    best_val: &mut usize,
    best_seq: &mut Vec<usize>,
) {
    let n = g.n();
    let t = path.len();
    if cur_max >= *best_val {
        return;
    }
    if t == n {
        *best_val = cur_max;
        *best_seq = path.clone();
        return;
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        let mut m = cur_max;
        for &u in g.neighbors(v) {
            if pos[u] != usize::MAX {
                m = m.max(t - pos[u]);
            }
        }
        if m >= *best_val {
            continue;
        }
        used[v] = true;
        pos[v] = t;
        path.push(v);
        brute_rec(g, path, pos, used, m, best_val, best_seq);
        path.pop();
        pos[v] = usize::MAX;
        used[v] = false;
    }
}

/// Sound lower bounds on bandwidth: clique number minus one, half the
/// maximum degree (rounded up), and the spread/diameter bound per
/// connected component.
pub fn bandwidth_lower_bound(g: &Graph) -> Result<usize> {
    let mut lb = 0usize;
    if g.n() > 0 {
        lb = lb.max(clique_number(g)?.saturating_sub(1));
    }
    for v in 0..g.n() {
        lb = lb.max(g.degree(v).div_ceil(2));
    }
    for comp in components(g) {
        let nc = comp.len();
        if nc < 2 {
            continue;
        }
        let (sub, _) = g.induced(&comp)?;
        let diam = diameter(&sub);
        if diam > 0 {
            lb = lb.max((nc - 1).div_ceil(diam));
        }
    }
    Ok(lb)
}

fn diameter(g: &Graph) -> usize {
    let mut best = 0;
    for src in 0..g.n() {
        let mut dist = vec![usize::MAX; g.n()];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(
            dist.iter()
                .copied()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0),
        );
    }
    best
}

/// Decide whether `g` admits an ordering of stretch ≤ `b`; on success the
/// witness ordering is returned.
pub fn bandwidth_decide(g: &Graph, b: usize) -> Result<(bool, Option<Ordering>)> {
    bandwidth_decide_with(g, b, &ExactConfig::default())
}

pub fn bandwidth_decide_with(
    g: &Graph,
    b: usize,
    cfg: &ExactConfig,
) -> Result<(bool, Option<Ordering>)> {
    let n = g.n();
    if n == 0 {
        return Ok((true, Some(Ordering::identity(0))));
    }
    if g.edge_count() == 0 {
        return Ok((true, Some(Ordering::identity(n))));
    }
    if b == 0 {
        // At least one edge, and an edge always has stretch ≥ 1.
        return Ok((false, None));
    }
    if b >= n - 1 {
        return Ok((true, Some(Ordering::identity(n))));
    }
    if n > 64 {
        return Err(Error::ResourceLimit(
            "decision search supports at most 64 vertices".into(),
        ));
    }
    if bandwidth_lower_bound(g)? > b {
        return Ok((false, None));
    }

    let mut search = WindowSearch {
        g,
        b,
        n,
        path: Vec::with_capacity(n),
        placed: 0,
        dead: HashSet::new(),
        memo_keys: b <= 21,
        state_budget: cfg.state_budget,
        effort: 0,
        effort_budget: cfg.effort_budget,
    };
    if search.run()? {
        let pi = Ordering::from_sequence(&search.path)?;
        debug_assert!(stretch(g, &pi)? <= b);
        Ok((true, Some(pi)))
    } else {
        Ok((false, None))
    }
}

struct WindowSearch<'a> {
    g: &'a Graph,
    b: usize,
    n: usize,
    path: Vec<usize>,
    placed: u64,
    dead: HashSet<(u64, u128)>,
    memo_keys: bool,
    state_budget: usize,
    effort: u64,
    effort_budget: u64,
}

impl WindowSearch<'_> {
    fn run(&mut self) -> Result<bool> {
        self.step()
    }

    fn key(&self) -> (u64, u128) {
        let t = self.path.len();
        let start = t.saturating_sub(self.b);
        let mut packed = 0u128;
        for (i, &v) in self.path[start..].iter().enumerate() {
            packed |= (v as u128) << (6 * i);
        }
        (self.placed, packed)
    }

    fn step(&mut self) -> Result<bool> {
        let t = self.path.len();
        if t == self.n {
            return Ok(true);
        }
        self.effort += 1;
        if self.effort > self.effort_budget {
            return Err(Error::ResourceLimit(format!(
                "decision search exceeded effort budget {}",
                self.effort_budget
            )));
        }
        let key = if self.memo_keys {
            Some(self.key())
        } else {
            None
        };
        if let Some(k) = &key {
            if self.dead.contains(k) {
                return Ok(false);
            }
        }

        let full = if self.n == 64 {
            !0u64
        } else {
            (1u64 << self.n) - 1
        };
        let unplaced = !self.placed & full;
        // A vertex pending for the window vertex at position p is due by
        // position p + b. Walking the window oldest-first, the distinct
        // pending vertices seen so far must all fit in the slots up to
        // the current deadline: a deficit kills the state, an exact fit
        // forces position t into the due set. The per-vertex exact fit
        // (all of one vertex's pending fill its remaining slots) forces
        // position t the same way.
        let mut allowed = unplaced;
        let start = t.saturating_sub(self.b);
        let mut dead_state = false;
        let mut seen = 0u64;
        let mut due = 0usize;
        for p in start..t {
            let u = self.path[p];
            let pending = self.g.neighbor_word(u) & unplaced;
            let slots = p + self.b + 1 - t;
            let d = pending.count_ones() as usize;
            if d > 0 && slots == d {
                allowed &= pending;
            }
            let new = pending & !seen;
            if new != 0 {
                seen |= new;
                due += new.count_ones() as usize;
                if due > slots {
                    dead_state = true;
                    break;
                }
                if due == slots {
                    allowed &= seen;
                }
            }
        }

        if !dead_state && allowed != 0 {
            let mut cands: Vec<usize> = (0..self.n).filter(|&v| allowed >> v & 1 == 1).collect();
            // Earliest deadline first: a vertex whose oldest window
            // neighbor sits at position p must be placed by p + b, so
            // serving the tightest deadline keeps the frontier closeable.
            // Break ties toward vertices with more placed neighbors.
            cands.sort_by_key(|&v| {
                let word = self.g.neighbor_word(v);
                let deadline = (start..t)
                    .find(|&p| word >> self.path[p] & 1 == 1)
                    .map_or(usize::MAX, |p| p + self.b);
                (
                    deadline,
                    std::cmp::Reverse((word & self.placed).count_ones()),
                )
            });
            for v in cands {
                self.path.push(v);
                self.placed |= 1 << v;
                // The position falling out of the window is final: all of
                // its neighbors must already be placed.
                let ok = if t >= self.b {
                    let frozen = self.path[t - self.b];
                    self.g.neighbor_word(frozen) & !self.placed & full == 0
                } else {
                    true
                };
                if ok && self.step()? {
                    return Ok(true);
                }
                self.path.pop();
                self.placed &= !(1 << v);
            }
        }

        if let Some(k) = key {
            if self.dead.len() < self.state_budget {
                self.dead.insert(k);
            }
        }
        Ok(false)
    }
}

/// Minimum bandwidth via binary search on `bandwidth_decide`, seeded with
/// the sound lower bounds.
pub fn bandwidth_min(g: &Graph) -> Result<(usize, Ordering)> {
    bandwidth_min_with(g, &ExactConfig::default())
}

pub fn bandwidth_min_with(g: &Graph, cfg: &ExactConfig) -> Result<(usize, Ordering)> {
    let n = g.n();
    if n == 0 {
        return Ok((0, Ordering::identity(0)));
    }
    if g.edge_count() == 0 {
        return Ok((0, Ordering::identity(n)));
    }
    let mut lo = bandwidth_lower_bound(g)?.min(n - 1);
    let mut hi = n - 1;
    let mut witness: Option<Ordering> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let (ok, w) = bandwidth_decide_with(g, mid, cfg)?;
        if ok {
            witness = w;
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let good = match &witness {
        Some(w) => stretch(g, w)? <= lo,
        None => false,
    };
    if !good {
        let (ok, w) = bandwidth_decide_with(g, lo, cfg)?;
        if !ok {
            return Err(Error::Internal(
                "binary search converged on an infeasible bound".into(),
            ));
        }
        witness = w;
    }
    let w = witness.ok_or_else(|| Error::Internal("decision true without witness".into()))?;
    Ok((lo, w))
}
