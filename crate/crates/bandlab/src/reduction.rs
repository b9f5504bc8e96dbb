//! Hardness gadget: from a bin-packing instance (items A, bin count k) with
//! integral per-bin capacity B, build a graph G and bound b = 2kB + B - 1
//! such that G has bandwidth at most b exactly when the items pack into k
//! bins of equal sum B.
//!
//! The graph consists of two boundary cliques X and Y of size b+1 (forcing
//! the two ends of any good ordering), k delimiter cliques whose halves pin
//! down a grid of positions in between, and one clique of size 2a_j per
//! item, whose left half must land between two consecutive delimiters and
//! drag its right half into the mirrored slot. Anchor edges between
//! specific boundary vertices and the delimiter/item cliques enforce the
//! grid. `check_structure_claims` verifies this rigidity on any ordering of
//! stretch <= b and extracts the induced packing.

use std::collections::BTreeMap;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{stretch, Graph, Ordering};

/// Items to pack into equally filled bins. Values are stored plainly but
/// sizes are treated as unary: all algorithms here are polynomial in the
/// sum of the items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinPackingInstance {
    items: Vec<u64>,
    bins: usize,
}

impl BinPackingInstance {
    pub fn new(items: Vec<u64>, bins: usize) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidInput("need at least one item".into()));
        }
        if items.contains(&0) {
            return Err(Error::InvalidInput("items must be positive".into()));
        }
        if bins == 0 {
            return Err(Error::InvalidInput("need at least one bin".into()));
        }
        let mut total: u64 = 0;
        for &a in &items {
            total = total
                .checked_add(a)
                .ok_or_else(|| Error::InvalidInput("item sum overflows".into()))?;
        }
        Ok(BinPackingInstance { items, bins })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn total(&self) -> u64 {
        self.items.iter().sum()
    }

    /// The common bin capacity B, when the total splits evenly.
    pub fn capacity(&self) -> Option<u64> {
        let total = self.total();
        let k = self.bins as u64;
        if total.is_multiple_of(k) {
            Some(total / k)
        } else {
            None
        }
    }
}

/// Default cap on stored dynamic-programming states in `ubp_solve`.
pub const UBP_STATE_BUDGET: usize = 5_000_000;

/// Exact bin packing into equal-sum bins: returns one packing (bins of item
/// indices) or None. Dynamic program over sorted bin-load tuples, with a
/// forward reachability pass and a backward co-reachability pass; the
/// packing is replayed greedily through the co-reachable states, assigning
/// each item to the lowest-index bin that keeps completion possible.
pub fn ubp_solve(inst: &BinPackingInstance) -> Result<Option<Vec<Vec<usize>>>> {
    ubp_solve_with(inst, UBP_STATE_BUDGET)
}

pub fn ubp_solve_with(
    inst: &BinPackingInstance,
    state_budget: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    let Some(b_cap) = inst.capacity() else {
        return Ok(None);
    };
    if inst.items().iter().any(|&a| a > b_cap) {
        return Ok(None);
    }
    let k = inst.bins();
    let items = inst.items();
    let n = items.len();
    // Forward reachability: sorted load tuples after each item prefix.
    let mut levels: Vec<HashSet<Vec<u64>>> = Vec::with_capacity(n + 1);
    let mut stored_states = 0usize;
    levels.push(HashSet::from([vec![0; k]]));
    for (j, &a) in items.iter().enumerate() {
        let mut next: HashSet<Vec<u64>> = HashSet::new();
        for state in &levels[j] {
            for i in 0..k {
                if state[i] + a > b_cap {
                    continue;
                }
                // Identical loads give identical successors.
                if i > 0 && state[i] == state[i - 1] {
                    continue;
                }
                let mut succ = state.clone();
                succ[i] += a;
                succ.sort_unstable();
                next.insert(succ);
            }
        }
        stored_states += next.len();
        if stored_states > state_budget {
            return Err(Error::ResourceLimit(format!(
                "bin packing state space exceeds {state_budget} states"
            )));
        }
        levels.push(next);
    }
    let full = vec![b_cap; k];
    if !levels[n].contains(&full) {
        return Ok(None);
    }
    // Backward co-reachability: states from which the remaining suffix can
    // still complete.
    let mut completable: Vec<HashSet<Vec<u64>>> = vec![HashSet::new(); n + 1];
    completable[n].insert(full);
    for j in (0..n).rev() {
        let a = items[j];
        let mut keep = HashSet::new();
        for state in &levels[j] {
            let reaches = (0..k).any(|i| {
                if state[i] + a > b_cap || (i > 0 && state[i] == state[i - 1]) {
                    return false;
                }
                let mut succ = state.clone();
                succ[i] += a;
                succ.sort_unstable();
                completable[j + 1].contains(&succ)
            });
            if reaches {
                keep.insert(state.clone());
            }
        }
        completable[j] = keep;
    }
    // Replay with concrete bin identities.
    let mut loads = vec![0u64; k];
    let mut packing: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, &a) in items.iter().enumerate() {
        let mut placed = false;
        for i in 0..k {
            if loads[i] + a > b_cap {
                continue;
            }
            let mut trial = loads.clone();
            trial[i] += a;
            let mut key = trial.clone();
            key.sort_unstable();
            if completable[j + 1].contains(&key) {
                loads = trial;
                packing[i].push(j);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Internal(
                "packing replay diverged from the reachability table".into(),
            ));
        }
    }
    debug_assert!(loads.iter().all(|&l| l == b_cap));
    Ok(Some(packing))
}

/// Named vertex groups of the constructed graph. All ids refer to the graph
/// returned alongside these labels.
#[derive(Clone, Debug)]
pub struct ReductionLabels {
    items: Vec<u64>,
    bins: usize,
    capacity: u64,
    bound: usize,
    x: Vec<usize>,
    y: Vec<usize>,
    x_parts: Vec<Vec<usize>>,
    y_parts: Vec<Vec<usize>>,
    l: Vec<Vec<usize>>,
    r: Vec<Vec<usize>>,
    a_l: Vec<Vec<usize>>,
    a_r: Vec<Vec<usize>>,
}

impl ReductionLabels {
    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// The common bin capacity B.
    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// The bandwidth bound b = 2kB + B - 1.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// The left boundary clique, in index order x_1, ..., x_{2kB+B}.
    pub fn x(&self) -> &[usize] {
        &self.x
    }

    /// The right boundary clique, in index order y_1, ..., y_{2kB+B}.
    pub fn y(&self) -> &[usize] {
        &self.y
    }

    /// Segments X^0, X^1, ..., X^k of the left boundary clique.
    pub fn x_parts(&self) -> &[Vec<usize>] {
        &self.x_parts
    }

    /// Segments Y^1, ..., Y^{k+1} of the right boundary clique
    /// (index 0 holds Y^1).
    pub fn y_parts(&self) -> &[Vec<usize>] {
        &self.y_parts
    }

    /// Left delimiter halves L^1, ..., L^k, each listed l^i_1, ..., l^i_B.
    pub fn l(&self) -> &[Vec<usize>] {
        &self.l
    }

    /// Right delimiter halves R^1, ..., R^k, each listed r^i_1, ..., r^i_B.
    pub fn r(&self) -> &[Vec<usize>] {
        &self.r
    }

    /// Left item halves, one group per item.
    pub fn a_l(&self) -> &[Vec<usize>] {
        &self.a_l
    }

    /// Right item halves, one group per item.
    pub fn a_r(&self) -> &[Vec<usize>] {
        &self.a_r
    }

    /// x_{2kB+B}, the last left-boundary vertex.
    pub fn x_last(&self) -> usize {
        *self.x.last().unwrap()
    }

    /// y_1, the first right-boundary vertex.
    pub fn y_first(&self) -> usize {
        self.y[0]
    }

    /// The left-boundary vertex adjacent to all of L^i (1-based i):
    /// x_{2iB+B+1} for i < k, x_{2kB+B} for i = k.
    pub fn x_anchor(&self, i: usize) -> usize {
        assert!((1..=self.bins).contains(&i));
        if i < self.bins {
            self.x[2 * i * self.capacity as usize + self.capacity as usize]
        } else {
            self.x_last()
        }
    }

    /// The right-boundary vertex adjacent to all of R^i (1-based i):
    /// y_{2iB-B} for i > 1, y_1 for i = 1.
    pub fn y_anchor(&self, i: usize) -> usize {
        assert!((1..=self.bins).contains(&i));
        if i > 1 {
            self.y[2 * i * self.capacity as usize - self.capacity as usize - 1]
        } else {
            self.y_first()
        }
    }

    /// l^i_1, the delimiter vertex wired into the left boundary (1-based i).
    pub fn ell_first(&self, i: usize) -> usize {
        self.l[i - 1][0]
    }

    /// r^i_B, the delimiter vertex wired into the right boundary (1-based i).
    pub fn r_last(&self, i: usize) -> usize {
        self.r[i - 1][self.capacity as usize - 1]
    }

    /// All named groups, keyed for serialization.
    pub fn groups(&self) -> BTreeMap<String, Vec<usize>> {
        let mut map = BTreeMap::new();
        map.insert("X".to_string(), self.x.clone());
        map.insert("Y".to_string(), self.y.clone());
        for (i, part) in self.x_parts.iter().enumerate() {
            map.insert(format!("X{i}"), part.clone());
        }
        for (i, part) in self.y_parts.iter().enumerate() {
            map.insert(format!("Y{}", i + 1), part.clone());
        }
        for (i, half) in self.l.iter().enumerate() {
            map.insert(format!("L{}", i + 1), half.clone());
        }
        for (i, half) in self.r.iter().enumerate() {
            map.insert(format!("R{}", i + 1), half.clone());
        }
        for (j, half) in self.a_l.iter().enumerate() {
            map.insert(format!("A{}L", j + 1), half.clone());
        }
        for (j, half) in self.a_r.iter().enumerate() {
            map.insert(format!("A{}R", j + 1), half.clone());
        }
        map
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.groups()).expect("label groups serialize")
    }
}

fn clique_edges(edges: &mut Vec<(usize, usize)>, vertices: &[usize]) {
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            edges.push((u, v));
        }
    }
}

/// Build the bandwidth instance (G, b) for a bin-packing instance.
/// Rejects instances whose total does not split evenly over the bins: those
/// are trivially NO and the construction is not defined for them.
pub fn build_reduction(inst: &BinPackingInstance) -> Result<(Graph, usize, ReductionLabels)> {
    let cap = inst.capacity().ok_or_else(|| {
        Error::TrivialInstance("item sum is not divisible by the bin count".into())
    })?;
    let k = inst.bins();
    let big_b =
        usize::try_from(cap).map_err(|_| Error::InvalidInput("capacity too large".into()))?;
    // n = 8kB + 2B; guard the arithmetic and keep the graph constructible.
    let n_vertices = (8usize)
        .checked_mul(k)
        .and_then(|v| v.checked_mul(big_b))
        .and_then(|v| v.checked_add(2 * big_b))
        .ok_or_else(|| Error::InvalidInput("instance too large to construct".into()))?;
    if n_vertices > 2_000_000 {
        return Err(Error::ResourceLimit(format!(
            "construction would have {n_vertices} vertices"
        )));
    }
    let boundary = 2 * k * big_b + big_b;
    let b = boundary - 1;
    let x: Vec<usize> = (0..boundary).collect();
    let y: Vec<usize> = (boundary..2 * boundary).collect();
    let mut next_id = 2 * boundary;
    let mut l: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut r: Vec<Vec<usize>> = Vec::with_capacity(k);
    for _ in 0..k {
        l.push((next_id..next_id + big_b).collect());
        next_id += big_b;
        r.push((next_id..next_id + big_b).collect());
        next_id += big_b;
    }
    let mut a_l: Vec<Vec<usize>> = Vec::with_capacity(inst.items().len());
    let mut a_r: Vec<Vec<usize>> = Vec::with_capacity(inst.items().len());
    for &a in inst.items() {
        let a = a as usize;
        a_l.push((next_id..next_id + a).collect());
        next_id += a;
        a_r.push((next_id..next_id + a).collect());
        next_id += a;
    }
    debug_assert_eq!(next_id, n_vertices);
    // Boundary segments: X^0 of size B+1, X^1..X^{k-1} of size 2B, X^k of
    // size 2B-1; Y^1 of size 3B-1, Y^2..Y^k of size 2B, Y^{k+1} a single
    // vertex.
    let mut x_parts = Vec::with_capacity(k + 1);
    x_parts.push(x[..big_b + 1].to_vec());
    for i in 1..=k {
        let start = 2 * i * big_b - big_b + 1;
        let end = if i < k {
            2 * i * big_b + big_b + 1
        } else {
            boundary
        };
        x_parts.push(x[start..end].to_vec());
    }
    let mut y_parts = Vec::with_capacity(k + 1);
    y_parts.push(y[..3 * big_b - 1].to_vec());
    for i in 2..=k {
        let start = 2 * i * big_b - big_b - 1;
        y_parts.push(y[start..start + 2 * big_b].to_vec());
    }
    y_parts.push(vec![y[boundary - 1]]);
    let labels = ReductionLabels {
        items: inst.items().to_vec(),
        bins: k,
        capacity: cap,
        bound: b,
        x,
        y,
        x_parts,
        y_parts,
        l,
        r,
        a_l,
        a_r,
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    clique_edges(&mut edges, labels.x());
    clique_edges(&mut edges, labels.y());
    for i in 0..k {
        let delim: Vec<usize> = labels.l[i].iter().chain(&labels.r[i]).copied().collect();
        clique_edges(&mut edges, &delim);
    }
    for j in 0..labels.items.len() {
        let item: Vec<usize> = labels.a_l[j]
            .iter()
            .chain(&labels.a_r[j])
            .copied()
            .collect();
        clique_edges(&mut edges, &item);
    }
    // l^i_1 sees every boundary vertex from segment X^i onward; the last
    // vertex of X^i sees all of L^i. Mirrored for r^i_B and Y.
    for i in 1..=k {
        let ell = labels.ell_first(i);
        for part in &labels.x_parts[i..] {
            for &xv in part {
                edges.push((ell, xv));
            }
        }
        // l^i_1 is already adjacent to the anchor through the segment edges
        // above; re-adding that pair would duplicate the edge.
        for &lv in &labels.l[i - 1] {
            if lv != ell {
                edges.push((labels.x_anchor(i), lv));
            }
        }
        let rb = labels.r_last(i);
        for part in &labels.y_parts[..i] {
            for &yv in part {
                edges.push((rb, yv));
            }
        }
        for &rv in &labels.r[i - 1] {
            if rv != rb {
                edges.push((labels.y_anchor(i), rv));
            }
        }
    }
    // Every item clique hangs off the boundary: left halves off x_{2kB+B},
    // right halves off y_1.
    for half in labels.a_l() {
        for &v in half {
            edges.push((labels.x_last(), v));
        }
    }
    for half in labels.a_r() {
        for &v in half {
            edges.push((labels.y_first(), v));
        }
    }
    let g = Graph::new(n_vertices, &edges)?;
    Ok((g, b, labels))
}

/// The canonical low-stretch ordering induced by an equal-sum packing:
/// X first, then per bin the packed left item halves followed by the left
/// delimiter half, then the mirrored right halves, then Y. Verified to have
/// stretch at most b before returning.
pub fn witness_ordering(
    g: &Graph,
    labels: &ReductionLabels,
    partition: &[Vec<usize>],
) -> Result<Ordering> {
    let k = labels.bins();
    let big_b = labels.capacity() as usize;
    if partition.len() != k {
        return Err(Error::InvalidInput(format!("partition must have {k} bins")));
    }
    let n_items = labels.items().len();
    let mut seen = vec![false; n_items];
    for bin in partition {
        let mut sum = 0u64;
        for &j in bin {
            if j >= n_items || seen[j] {
                return Err(Error::InvalidInput(
                    "partition is not a permutation of the items".into(),
                ));
            }
            seen[j] = true;
            sum += labels.items()[j];
        }
        if sum != labels.capacity() {
            return Err(Error::InvalidInput(format!(
                "bin sums to {sum}, expected {}",
                labels.capacity()
            )));
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidInput("partition misses items".into()));
    }
    let boundary = 2 * k * big_b + big_b;
    let mut pos = vec![0usize; g.n()];
    for (t, &v) in labels.x().iter().enumerate() {
        pos[v] = t + 1;
    }
    for (t, &v) in labels.y().iter().enumerate() {
        pos[v] = 3 * boundary - 2 * big_b + t + 1;
    }
    for i in 1..=k {
        let mut next_left = boundary + (i - 1) * 2 * big_b + 1;
        let mut next_right = 2 * boundary - big_b + (i - 1) * 2 * big_b + 1;
        let mut bin = partition[i - 1].clone();
        bin.sort_unstable();
        for &j in &bin {
            for &v in &labels.a_l()[j] {
                pos[v] = next_left;
                next_left += 1;
            }
            for &v in &labels.a_r()[j] {
                pos[v] = next_right;
                next_right += 1;
            }
        }
        for &v in &labels.l()[i - 1] {
            pos[v] = next_left;
            next_left += 1;
        }
        for &v in &labels.r()[i - 1] {
            pos[v] = next_right;
            next_right += 1;
        }
    }
    let pi = Ordering::new(pos)?;
    let achieved = stretch(g, &pi)?;
    if achieved > labels.bound() {
        return Err(Error::Internal(format!(
            "witness ordering has stretch {achieved}, expected at most {}",
            labels.bound()
        )));
    }
    Ok(pi)
}

/// The 4k-vertex deletion set whose removal leaves only cliques: the k
/// left-boundary anchors, the k right-boundary anchors, and the wired
/// delimiter vertices l^i_1 and r^i_B.
pub fn cvd_witness(labels: &ReductionLabels) -> Vec<usize> {
    let mut set = Vec::with_capacity(4 * labels.bins());
    for i in 1..=labels.bins() {
        set.push(labels.x_anchor(i));
        set.push(labels.y_anchor(i));
        set.push(labels.ell_first(i));
        set.push(labels.r_last(i));
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// One verified statement about the rigid structure of a low-stretch
/// ordering.
#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Outcome of `check_structure_claims`: the claim list in check order, plus
/// the packing the ordering induces when every claim holds.
#[derive(Clone, Debug)]
pub struct StructureReport {
    /// Claims were checked on the reverse of the given ordering.
    pub reversed: bool,
    pub claims: Vec<ClaimResult>,
    /// Bins of item indices, present when all claims hold.
    pub partition: Option<Vec<Vec<usize>>>,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds) && self.partition.is_some()
    }
}

fn positions_form_interval(pi: &Ordering, vs: &[usize], lo: usize, hi: usize) -> bool {
    if vs.len() != hi - lo + 1 {
        return false;
    }
    vs.iter().all(|&v| (lo..=hi).contains(&pi.position(v)))
}

/// Verify the rigidity of an ordering of stretch <= b: boundary cliques at
/// the two ends, boundary segments and delimiter vertices at their forced
/// positions, delimiter halves confined near their wired vertex, and item
/// cliques kept whole between consecutive delimiters. Extracts the induced
/// equal-sum packing. Claims are checked on the given ordering or its
/// reverse, whichever puts X first.
pub fn check_structure_claims(
    g: &Graph,
    labels: &ReductionLabels,
    pi: &Ordering,
    b: usize,
) -> Result<StructureReport> {
    let achieved = stretch(g, pi)?;
    if achieved > b {
        return Err(Error::InvalidInput(format!(
            "ordering has stretch {achieved}, claims need at most {b}"
        )));
    }
    if b != labels.bound() {
        return Err(Error::InvalidInput(format!(
            "bound {b} does not match the construction bound {}",
            labels.bound()
        )));
    }
    let n = g.n();
    let k = labels.bins();
    let big_b = labels.capacity() as usize;
    let boundary = 2 * k * big_b + big_b;
    let mut claims: Vec<ClaimResult> = Vec::new();
    let push = |claims: &mut Vec<ClaimResult>, name: &str, holds: bool, detail: String| {
        claims.push(ClaimResult {
            name: name.to_string(),
            holds,
            detail,
        });
        holds
    };
    // Boundary cliques occupy the b+1 first and last positions, in one of
    // the two orientations.
    let x_first = positions_form_interval(pi, labels.x(), 1, b + 1)
        && positions_form_interval(pi, labels.y(), n - b, n);
    let y_first = positions_form_interval(pi, labels.y(), 1, b + 1)
        && positions_form_interval(pi, labels.x(), n - b, n);
    let reversed = !x_first && y_first;
    let oriented;
    let pi = if reversed {
        oriented = pi.reverse();
        &oriented
    } else {
        pi
    };
    let boundaries_ok = x_first || y_first;
    if !push(
        &mut claims,
        "boundaries",
        boundaries_ok,
        if boundaries_ok {
            format!("X on [1,{}], Y on [{},{n}]", b + 1, n - b)
        } else {
            "boundary cliques are not at the two ends".to_string()
        },
    ) {
        return Ok(StructureReport {
            reversed,
            claims,
            partition: None,
        });
    }
    // Boundary segments sit at fixed windows.
    let mut segments_ok = true;
    let mut segment_detail = String::new();
    for (i, part) in labels.x_parts().iter().enumerate() {
        let lo = if i == 0 { 1 } else { 2 * i * big_b - big_b + 2 };
        let hi = lo + part.len() - 1;
        if !positions_form_interval(pi, part, lo, hi) {
            segments_ok = false;
            segment_detail = format!("X segment {i} is not on [{lo},{hi}]");
            break;
        }
    }
    if segments_ok {
        for (idx, part) in labels.y_parts().iter().enumerate() {
            let i = idx + 1;
            let lo = if i == 1 {
                6 * k * big_b + big_b + 1
            } else {
                6 * k * big_b + 2 * i * big_b
            };
            let hi = lo + part.len() - 1;
            if !positions_form_interval(pi, part, lo, hi) {
                segments_ok = false;
                segment_detail = format!("Y segment {i} is not on [{lo},{hi}]");
                break;
            }
        }
    }
    if !push(
        &mut claims,
        "boundary-segments",
        segments_ok,
        if segments_ok {
            "all X and Y segments at their forced windows".to_string()
        } else {
            segment_detail
        },
    ) {
        return Ok(StructureReport {
            reversed,
            claims,
            partition: None,
        });
    }
    // Wired delimiter vertices at their forced positions, at the edges of
    // their cliques.
    let mut anchors_ok = true;
    let mut anchor_detail = String::new();
    for i in 1..=k {
        let ell = labels.ell_first(i);
        let rb = labels.r_last(i);
        let want_ell = 2 * k * big_b + 2 * i * big_b + 1;
        let want_rb = 4 * k * big_b + 2 * i * big_b + big_b;
        let min_l = labels.l()[i - 1]
            .iter()
            .map(|&v| pi.position(v))
            .min()
            .unwrap();
        let max_r = labels.r()[i - 1]
            .iter()
            .map(|&v| pi.position(v))
            .max()
            .unwrap();
        if pi.position(ell) != want_ell || pi.position(rb) != want_rb {
            anchors_ok = false;
            anchor_detail = format!(
                "delimiter {i}: wired vertices at ({}, {}), expected ({want_ell}, {want_rb})",
                pi.position(ell),
                pi.position(rb)
            );
            break;
        }
        if min_l != want_ell || max_r != want_rb {
            anchors_ok = false;
            anchor_detail =
                format!("delimiter {i}: wired vertices are not extreme in their halves");
            break;
        }
    }
    if !push(
        &mut claims,
        "delimiter-anchors",
        anchors_ok,
        if anchors_ok {
            "every wired delimiter vertex at its forced position".to_string()
        } else {
            anchor_detail
        },
    ) {
        return Ok(StructureReport {
            reversed,
            claims,
            partition: None,
        });
    }
    // Delimiter halves stay within one boundary-segment width of their
    // wired vertex.
    let mut locality_ok = true;
    let mut locality_detail = String::new();
    'locality: for i in 1..=k {
        let ell_pos = pi.position(labels.ell_first(i));
        let rb_pos = pi.position(labels.r_last(i));
        let x_width = labels.x_parts()[i].len();
        let y_width = labels.y_parts()[i - 1].len();
        for &v in &labels.l()[i - 1] {
            let p = pi.position(v);
            if !(ell_pos..ell_pos + x_width).contains(&p) {
                locality_ok = false;
                locality_detail = format!("left half {i} leaks outside its window");
                break 'locality;
            }
        }
        for &v in &labels.r()[i - 1] {
            let p = pi.position(v);
            if !(rb_pos + 1 - y_width..=rb_pos).contains(&p) {
                locality_ok = false;
                locality_detail = format!("right half {i} leaks outside its window");
                break 'locality;
            }
        }
    }
    if !push(
        &mut claims,
        "delimiter-locality",
        locality_ok,
        if locality_ok {
            "delimiter halves confined next to their wired vertices".to_string()
        } else {
            locality_detail
        },
    ) {
        return Ok(StructureReport {
            reversed,
            claims,
            partition: None,
        });
    }
    // Between consecutive wired vertices there is room for exactly B item
    // vertices; collect them per slot. Slot boundaries: position 2kB+B (the
    // last X vertex) and the wired delimiter vertices.
    let ell_pos = |i: usize| {
        if i == 0 {
            boundary
        } else {
            pi.position(labels.ell_first(i))
        }
    };
    let rb_pos = |i: usize| {
        if i == 0 {
            pi.position(labels.ell_first(k))
        } else {
            pi.position(labels.r_last(i))
        }
    };
    let all_left: Vec<usize> = labels.a_l().iter().flatten().copied().collect();
    let all_right: Vec<usize> = labels.a_r().iter().flatten().copied().collect();
    let mut bins_ok = true;
    let mut bins_detail = String::new();
    let mut left_slots: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut right_slots: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &v in &all_left {
        let p = pi.position(v);
        match (1..=k).find(|&i| ell_pos(i - 1) < p && p < ell_pos(i)) {
            Some(i) => left_slots[i - 1].push(v),
            None => {
                bins_ok = false;
                bins_detail = format!("left item vertex {v} is outside every slot");
                break;
            }
        }
    }
    if bins_ok {
        for &v in &all_right {
            let p = pi.position(v);
            match (1..=k).find(|&i| rb_pos(i - 1) < p && p < rb_pos(i)) {
                Some(i) => right_slots[i - 1].push(v),
                None => {
                    bins_ok = false;
                    bins_detail = format!("right item vertex {v} is outside every slot");
                    break;
                }
            }
        }
    }
    if bins_ok {
        for i in 0..k {
            if left_slots[i].len() != big_b || right_slots[i].len() != big_b {
                bins_ok = false;
                bins_detail = format!(
                    "slot {} holds {} left and {} right item vertices, expected {big_b} each",
                    i + 1,
                    left_slots[i].len(),
                    right_slots[i].len()
                );
                break;
            }
        }
    }
    if !push(
        &mut claims,
        "slot-sizes",
        bins_ok,
        if bins_ok {
            format!("each of the {k} slots holds exactly {big_b} item vertices per side")
        } else {
            bins_detail
        },
    ) {
        return Ok(StructureReport {
            reversed,
            claims,
            partition: None,
        });
    }
    // Item integrity: every item clique is wholly inside one left slot, and
    // its right half is in the matching right slot.
    let slot_of = |slots: &[Vec<usize>], v: usize| slots.iter().position(|s| s.contains(&v));
    let mut integrity_ok = true;
    let mut integrity_detail = String::new();
    let mut item_bin: Vec<usize> = Vec::with_capacity(labels.items().len());
    'integrity: for j in 0..labels.items().len() {
        let mut bin: Option<usize> = None;
        for &v in &labels.a_l()[j] {
            let slot = slot_of(&left_slots, v);
            if slot.is_none() || (bin.is_some() && slot != bin) {
                integrity_ok = false;
                integrity_detail = format!("item {} is split across left slots", j + 1);
                break 'integrity;
            }
            bin = slot;
        }
        let bin = bin.expect("items are nonempty");
        for &v in &labels.a_r()[j] {
            if slot_of(&right_slots, v) != Some(bin) {
                integrity_ok = false;
                integrity_detail = format!(
                    "item {}: right half not in the slot matching its left half",
                    j + 1
                );
                break 'integrity;
            }
        }
        item_bin.push(bin);
    }
    if !push(
        &mut claims,
        "item-integrity",
        integrity_ok,
        if integrity_ok {
            "every item clique kept whole within one matched slot pair".to_string()
        } else {
            integrity_detail
        },
    ) {
        return Ok(StructureReport {
            reversed,
            claims,
            partition: None,
        });
    }
    let mut partition: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, &bin) in item_bin.iter().enumerate() {
        partition[bin].push(j);
    }
    let sums: Vec<u64> = partition
        .iter()
        .map(|bin| bin.iter().map(|&j| labels.items()[j]).sum())
        .collect();
    let sums_ok = sums.iter().all(|&s| s == labels.capacity());
    push(
        &mut claims,
        "equal-sums",
        sums_ok,
        format!("bin sums {sums:?}, capacity {}", labels.capacity()),
    );
    Ok(StructureReport {
        reversed,
        claims,
        partition: if sums_ok { Some(partition) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{is_cluster_graph, min_cluster_deletion_set};

    fn inst(items: &[u64], bins: usize) -> BinPackingInstance {
        BinPackingInstance::new(items.to_vec(), bins).unwrap()
    }

    #[test]
    fn packing_solver_examples() {
        assert_eq!(
            ubp_solve(&inst(&[1, 2, 1], 2)).unwrap(),
            Some(vec![vec![0, 2], vec![1]])
        );
        assert_eq!(ubp_solve(&inst(&[2], 2)).unwrap(), None);
        assert_eq!(ubp_solve(&inst(&[3, 1], 2)).unwrap(), None);
        assert_eq!(
            ubp_solve(&inst(&[1, 1], 2)).unwrap(),
            Some(vec![vec![0], vec![1]])
        );
        let packing = ubp_solve(&inst(&[3, 2, 2, 1, 1, 3], 3)).unwrap().unwrap();
        assert_eq!(packing.len(), 3);
        for bin in &packing {
            assert_eq!(
                bin.iter().map(|&j| [3u64, 2, 2, 1, 1, 3][j]).sum::<u64>(),
                4
            );
        }
    }

    #[test]
    fn packing_state_budget_is_enforced() {
        let items: Vec<u64> = (1..=12).collect();
        let i = inst(&items, 2);
        assert!(matches!(
            ubp_solve_with(&i, 3),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn construction_sizes_and_labels() {
        let (g, b, labels) = build_reduction(&inst(&[1, 2, 1], 2)).unwrap();
        assert_eq!(b, 9);
        assert_eq!(g.n(), 36);
        assert_eq!(labels.capacity(), 2);
        assert_eq!(labels.x().len(), 10);
        assert_eq!(labels.y().len(), 10);
        assert_eq!(labels.x_parts()[0].len(), 3);
        assert_eq!(labels.x_parts()[1].len(), 4);
        assert_eq!(labels.x_parts()[2].len(), 3);
        assert_eq!(labels.y_parts()[0].len(), 5);
        assert_eq!(labels.y_parts()[1].len(), 4);
        assert_eq!(labels.y_parts()[2].len(), 1);
        for i in 0..2 {
            assert_eq!(labels.l()[i].len() + labels.r()[i].len(), 4);
        }
        for (j, &a) in labels.items().iter().enumerate() {
            assert_eq!(labels.a_l()[j].len() as u64, a);
            assert_eq!(labels.a_r()[j].len() as u64, a);
        }
        // Wired vertices touch the advertised groups.
        for i in 1..=2 {
            let ell = labels.ell_first(i);
            for part in &labels.x_parts()[i..] {
                for &xv in part {
                    assert!(g.adjacent(ell, xv));
                }
            }
            for &lv in &labels.l()[i - 1] {
                assert!(g.adjacent(labels.x_anchor(i), lv));
            }
            let rb = labels.r_last(i);
            for part in &labels.y_parts()[..i] {
                for &yv in part {
                    assert!(g.adjacent(rb, yv));
                }
            }
            for &rv in &labels.r()[i - 1] {
                assert!(g.adjacent(labels.y_anchor(i), rv));
            }
        }
        for half in labels.a_l() {
            for &v in half {
                assert!(g.adjacent(labels.x_last(), v));
            }
        }
        for half in labels.a_r() {
            for &v in half {
                assert!(g.adjacent(labels.y_first(), v));
            }
        }
    }

    #[test]
    fn construction_size_oracle() {
        for (items, bins, want_b, want_n) in [
            (vec![1u64, 1], 2usize, 4usize, 18usize),
            (vec![1], 1, 2, 10),
            (vec![2], 2, 4, 18),
        ] {
            let (g, b, labels) = build_reduction(&inst(&items, bins)).unwrap();
            assert_eq!(b, want_b);
            assert_eq!(g.n(), want_n);
            let k = labels.bins();
            let cap = labels.capacity() as usize;
            assert_eq!(g.n(), 8 * k * cap + 2 * cap);
        }
    }

    #[test]
    fn non_integral_capacity_is_trivial() {
        assert!(matches!(
            build_reduction(&inst(&[1, 1, 1], 2)),
            Err(Error::TrivialInstance(_))
        ));
    }

    #[test]
    fn witness_ordering_matches_advertised_stretch() {
        let (g, _, labels) = build_reduction(&inst(&[1, 2, 1], 2)).unwrap();
        let pi = witness_ordering(&g, &labels, &[vec![0, 2], vec![1]]).unwrap();
        assert_eq!(stretch(&g, &pi).unwrap(), 9);

        let (g, b, labels) = build_reduction(&inst(&[1, 1], 2)).unwrap();
        let pi = witness_ordering(&g, &labels, &[vec![0], vec![1]]).unwrap();
        assert!(stretch(&g, &pi).unwrap() <= b);

        let (g, b, labels) = build_reduction(&inst(&[1], 1)).unwrap();
        let pi = witness_ordering(&g, &labels, &[vec![0]]).unwrap();
        assert!(stretch(&g, &pi).unwrap() <= b);
    }

    #[test]
    fn witness_ordering_rejects_bad_partitions() {
        let (g, _, labels) = build_reduction(&inst(&[1, 2, 1], 2)).unwrap();
        assert!(witness_ordering(&g, &labels, &[vec![0, 1], vec![2]]).is_err());
        assert!(witness_ordering(&g, &labels, &[vec![0, 1, 2], vec![]]).is_err());
        assert!(witness_ordering(&g, &labels, &[vec![0, 2]]).is_err());
    }

    #[test]
    fn deletion_witness_leaves_cliques() {
        for (items, bins) in [(vec![1u64, 2, 1], 2usize), (vec![1, 1], 2), (vec![1], 1)] {
            let (g, _, labels) = build_reduction(&inst(&items, bins)).unwrap();
            let witness = cvd_witness(&labels);
            assert_eq!(witness.len(), 4 * bins);
            let keep: Vec<usize> = (0..g.n()).filter(|v| !witness.contains(v)).collect();
            let (h, _) = g.induced(&keep).unwrap();
            assert!(is_cluster_graph(&h));
        }
        // On the smallest instance the optimum deletion set is no larger.
        let (g, _, _) = build_reduction(&inst(&[1], 1)).unwrap();
        let opt = min_cluster_deletion_set(&g).unwrap();
        assert!(opt.members().len() <= 4);
    }

    #[test]
    fn structure_claims_hold_on_witnesses() {
        let (g, b, labels) = build_reduction(&inst(&[1, 2, 1], 2)).unwrap();
        let pi = witness_ordering(&g, &labels, &[vec![0, 2], vec![1]]).unwrap();
        let report = check_structure_claims(&g, &labels, &pi, b).unwrap();
        assert!(report.all_hold(), "claims: {:?}", report.claims);
        assert!(!report.reversed);
        let partition = report.partition.unwrap();
        assert_eq!(partition, vec![vec![0, 2], vec![1]]);

        let report = check_structure_claims(&g, &labels, &pi.reverse(), b).unwrap();
        assert!(report.all_hold());
        assert!(report.reversed);
        assert_eq!(report.partition.unwrap(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn structure_claims_extract_the_swapped_partition() {
        let (g, b, labels) = build_reduction(&inst(&[1, 1], 2)).unwrap();
        let pi = witness_ordering(&g, &labels, &[vec![1], vec![0]]).unwrap();
        let report = check_structure_claims(&g, &labels, &pi, b).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.partition.unwrap(), vec![vec![1], vec![0]]);
    }

    #[test]
    fn structure_claims_require_the_stretch_bound() {
        let (g, b, labels) = build_reduction(&inst(&[1], 1)).unwrap();
        let bad = Ordering::identity(g.n());
        if stretch(&g, &bad).unwrap() > b {
            assert!(check_structure_claims(&g, &labels, &bad, b).is_err());
        } else {
            panic!("identity unexpectedly within bound");
        }
    }

    #[test]
    fn labels_serialize_to_named_groups() {
        let (_, _, labels) = build_reduction(&inst(&[1, 1], 2)).unwrap();
        let groups = labels.groups();
        for key in [
            "X", "Y", "X0", "X1", "X2", "Y1", "Y2", "Y3", "L1", "L2", "R1", "R2", "A1L", "A2R",
        ] {
            assert!(groups.contains_key(key), "missing group {key}");
        }
        let json = labels.to_json();
        let parsed: std::collections::BTreeMap<String, Vec<usize>> =
            serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, groups);
    }
}
