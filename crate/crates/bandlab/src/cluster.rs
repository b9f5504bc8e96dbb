//! Cluster deletion sets, cluster types, and the extended deletion set.
//!
//! A set S of vertices is a cluster deletion set when every component of
//! G - S is a clique; those components are the clusters. Clusters are
//! classified by how they attach to S: the cluster type of C counts, for
//! each subset N of S, the vertices of C whose S-neighborhood is exactly
//! N. Subsets are canonicalized as bitmasks over S sorted ascending, so
//! types compare and hash deterministically.
//!
//! The extended deletion set S' adds, per cluster type, a bounded number
//! of representative clusters to S. Orderings that place the extreme
//! neighbors of every S-vertex inside S' ("S'-extremal") are the ones the
//! structured solver reasons about.

use crate::error::{Error, Result};
use crate::graph::{components, Graph, Ordering};
use std::collections::BTreeMap;

/// A validated cluster deletion set together with the clusters of G - S.
#[derive(Clone, Debug)]
pub struct ClusterDeletionSet {
    members: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl ClusterDeletionSet {
    /// Validate `members` against `g`: the rest of the graph must split
    /// into cliques. Clusters come back sorted by smallest vertex.
    pub fn from_members(g: &Graph, members: &[usize]) -> Result<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != members.len() {
            return Err(Error::InvalidInput(
                "duplicate vertex in deletion set".into(),
            ));
        }
        if let Some(&last) = sorted.last() {
            if last >= g.n() {
                return Err(Error::InvalidInput(format!(
                    "deletion set vertex {last} out of range for n = {}",
                    g.n()
                )));
            }
        }
        let mut in_set = vec![false; g.n()];
        for &v in &sorted {
            in_set[v] = true;
        }
        let rest: Vec<usize> = (0..g.n()).filter(|&v| !in_set[v]).collect();
        let (sub, map) = g.induced(&rest)?;
        if !is_cluster_graph(&sub) {
            return Err(Error::InvalidInput(
                "removing the set does not leave a union of cliques".into(),
            ));
        }
        let clusters = components(&sub)
            .into_iter()
            .map(|comp| comp.into_iter().map(|v| map[v]).collect())
            .collect();
        Ok(ClusterDeletionSet {
            members: sorted,
            clusters,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Clusters of G - S, each sorted ascending, ordered by smallest member.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Is every component of `g` a clique?
pub fn is_cluster_graph(g: &Graph) -> bool {
    components(g).iter().all(|comp| {
        comp.iter()
            .enumerate()
            .all(|(i, &u)| comp[i + 1..].iter().all(|&v| g.adjacent(u, v)))
    })
}

/// Minimum cluster deletion set by iterative deepening over induced-path
/// branching: every induced path u - v - w must lose one of its three
/// vertices, and a graph without such a path is a union of cliques.
pub fn min_cluster_deletion_set(g: &Graph) -> Result<ClusterDeletionSet> {
    min_cluster_deletion_set_capped(g, g.n())
}

pub fn min_cluster_deletion_set_capped(g: &Graph, depth_cap: usize) -> Result<ClusterDeletionSet> {
    let mut deleted = vec![false; g.n()];
    for depth in 0..=depth_cap.min(g.n()) {
        let mut chosen = Vec::new();
        if branch_p3(g, &mut deleted, depth, &mut chosen) {
            chosen.sort_unstable();
            return ClusterDeletionSet::from_members(g, &chosen);
        }
    }
    Err(Error::ResourceLimit(format!(
        "no cluster deletion set within depth cap {depth_cap}"
    )))
}

fn find_induced_p3(g: &Graph, deleted: &[bool]) -> Option<(usize, usize, usize)> {
    for v in 0..g.n() {
        if deleted[v] {
            continue;
        }
        let nbrs: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !deleted[u])
            .collect();
        for (i, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if !g.adjacent(u, w) {
                    return Some((u, v, w));
                }
            }
        }
    }
    None
}

fn branch_p3(g: &Graph, deleted: &mut Vec<bool>, budget: usize, chosen: &mut Vec<usize>) -> bool {
    match find_induced_p3(g, deleted) {
        None => true,
        Some((u, v, w)) => {
            if budget == 0 {
                return false;
            }
            for cand in [u, v, w] {
                deleted[cand] = true;
                chosen.push(cand);
                if branch_p3(g, deleted, budget - 1, chosen) {
                    return true;
                }
                chosen.pop();
                deleted[cand] = false;
            }
            false
        }
    }
}

/// The S-neighborhood profile of a cluster: for each realized subset of S
/// (as a bitmask over S sorted ascending), how many cluster vertices have
/// exactly that S-neighborhood. Entries are sorted by mask and counts are
/// positive, so equal profiles compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterType {
    entries: Vec<(u64, u32)>,
}

impl ClusterType {
    /// Build from (neighborhood mask, vertex count) pairs; zero counts are
    /// dropped and duplicate masks merged.
    pub fn from_entries(entries: &[(u64, u32)]) -> Self {
        let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
        for &(mask, c) in entries {
            if c > 0 {
                *counts.entry(mask).or_insert(0) += c;
            }
        }
        ClusterType {
            entries: counts.into_iter().collect(),
        }
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    /// Cluster size: sum of all counts.
    pub fn norm1(&self) -> usize {
        self.entries.iter().map(|&(_, c)| c as usize).sum()
    }
}

/// Bitmask of `v`'s neighborhood inside the sorted set `s`.
pub fn neighborhood_mask(g: &Graph, s_sorted: &[usize], v: usize) -> u64 {
    let mut mask = 0u64;
    for (i, &s) in s_sorted.iter().enumerate() {
        if g.adjacent(s, v) {
            mask |= 1 << i;
        }
    }
    mask
}

pub fn cluster_type_of(g: &Graph, s_sorted: &[usize], cluster: &[usize]) -> ClusterType {
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    for &v in cluster {
        *counts.entry(neighborhood_mask(g, s_sorted, v)).or_insert(0) += 1;
    }
    ClusterType {
        entries: counts.into_iter().collect(),
    }
}

/// Group the clusters of `set` by cluster type. Types come back sorted by
/// their canonical encoding; cluster indices refer to `set.clusters()`.
pub fn cluster_types(
    g: &Graph,
    set: &ClusterDeletionSet,
) -> Result<Vec<(ClusterType, Vec<usize>)>> {
    if set.members().len() >= 63 {
        return Err(Error::ResourceLimit(
            "cluster typing supports deletion sets up to 62 vertices".into(),
        ));
    }
    let mut grouped: BTreeMap<ClusterType, Vec<usize>> = BTreeMap::new();
    for (idx, cluster) in set.clusters().iter().enumerate() {
        let ty = cluster_type_of(g, set.members(), cluster);
        grouped.entry(ty).or_default().push(idx);
    }
    Ok(grouped.into_iter().collect())
}

/// One cluster type with its clusters split into representatives (the
/// first min(2|S|, count) by smallest vertex) and the remainder.
#[derive(Clone, Debug)]
pub struct TypeClusters {
    pub ty: ClusterType,
    pub clusters: Vec<usize>,
    pub representatives: Vec<usize>,
    pub remaining: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ExtendedDeletionSet {
    base: ClusterDeletionSet,
    types: Vec<TypeClusters>,
    members: Vec<usize>,
    in_set: Vec<bool>,
    vertex_cluster: Vec<Option<usize>>,
    cluster_type_idx: Vec<usize>,
    cluster_rep: Vec<bool>,
}

impl ExtendedDeletionSet {
    pub fn base(&self) -> &ClusterDeletionSet {
        &self.base
    }

    pub fn types(&self) -> &[TypeClusters] {
        &self.types
    }

    /// S' = S plus all vertices of representative clusters, sorted.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn k_prime(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_set[v]
    }

    /// Index into `base().clusters()` for a non-S vertex.
    pub fn cluster_of(&self, v: usize) -> Option<usize> {
        self.vertex_cluster.get(v).copied().flatten()
    }

    /// Index into `types()` for a cluster index.
    pub fn type_of_cluster(&self, cluster: usize) -> usize {
        self.cluster_type_idx[cluster]
    }

    /// Is this cluster one of the representatives merged into S'?
    pub fn is_representative(&self, cluster: usize) -> bool {
        self.cluster_rep[cluster]
    }
}

pub fn extended_deletion_set(g: &Graph, set: &ClusterDeletionSet) -> Result<ExtendedDeletionSet> {
    let typed = cluster_types(g, set)?;
    let cap = 2 * set.members().len();
    let mut types = Vec::with_capacity(typed.len());
    let mut members = set.members().to_vec();
    for (ty, clusters) in typed {
        // Clusters of one type all share a size, so ordering by smallest
        // vertex realizes the (size, smallest id) representative rule.
        let mut ordered = clusters;
        ordered.sort_by_key(|&idx| set.clusters()[idx][0]);
        let take = cap.min(ordered.len());
        let representatives = ordered[..take].to_vec();
        let remaining = ordered[take..].to_vec();
        for &idx in &representatives {
            members.extend_from_slice(&set.clusters()[idx]);
        }
        types.push(TypeClusters {
            ty,
            clusters: ordered,
            representatives,
            remaining,
        });
    }
    members.sort_unstable();
    let mut in_set = vec![false; g.n()];
    for &v in &members {
        in_set[v] = true;
    }
    let mut vertex_cluster = vec![None; g.n()];
    for (idx, c) in set.clusters().iter().enumerate() {
        for &v in c {
            vertex_cluster[v] = Some(idx);
        }
    }
    let mut cluster_type_idx = vec![usize::MAX; set.clusters().len()];
    let mut cluster_rep = vec![false; set.clusters().len()];
    for (t, tc) in types.iter().enumerate() {
        for &idx in &tc.clusters {
            cluster_type_idx[idx] = t;
        }
        for &idx in &tc.representatives {
            cluster_rep[idx] = true;
        }
    }
    Ok(ExtendedDeletionSet {
        base: set.clone(),
        types,
        members,
        in_set,
        vertex_cluster,
        cluster_type_idx,
        cluster_rep,
    })
}

/// Does every S-vertex have both its leftmost and rightmost neighbor
/// (under `pi`) inside S'? Vacuously true for isolated S-vertices.
pub fn is_extremal(
    g: &Graph,
    set: &ClusterDeletionSet,
    s_prime: &ExtendedDeletionSet,
    pi: &Ordering,
) -> Result<bool> {
    if pi.len() != g.n() {
        return Err(Error::InvalidOrdering(
            "ordering does not match graph size".into(),
        ));
    }
    for &s in set.members() {
        let mut leftmost: Option<usize> = None;
        let mut rightmost: Option<usize> = None;
        for &v in g.neighbors(s) {
            if leftmost.is_none_or(|b| pi.position(v) < pi.position(b)) {
                leftmost = Some(v);
            }
            if rightmost.is_none_or(|b| pi.position(v) > pi.position(b)) {
                rightmost = Some(v);
            }
        }
        if let (Some(l), Some(r)) = (leftmost, rightmost) {
            if !s_prime.contains(l) || !s_prime.contains(r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
