//! Bandwidth decision parameterized by cluster-vertex-deletion set size and
//! clique number.
//!
//! Pipeline: compute a minimum deletion set S whose removal leaves disjoint
//! cliques, extend it with representative clusters to S', and for every order
//! sigma of S' build a bounded-integer feasibility program whose variables
//! count, per distribution type, how many remaining clusters are laid out
//! that way. A satisfying assignment is turned back into a concrete vertex
//! ordering by filling buckets and canonicalizing; infeasibility for every
//! sigma proves that no ordering of stretch <= b exists.

pub mod normalize;
pub mod types;

use std::path::PathBuf;

use crate::cluster::{
    extended_deletion_set, min_cluster_deletion_set, ClusterDeletionSet, ExtendedDeletionSet,
};
use crate::error::{Error, Result};
use crate::exact::bandwidth_lower_bound;
use crate::graph::{clique_number_capped, stretch, Graph, Ordering, DEFAULT_CLIQUE_CAP};
use crate::ilp::{Assignment, Cmp, ConstraintSystem, VarId};

pub use normalize::{
    check_pi1, check_pi2, check_pi3, exchange_clusters, make_extremal, normalize_pi1,
    normalize_pi2, normalize_pi3, validate_compatible, BucketCertificate, PropertyCertificate,
    PropertyCheck,
};
pub use types::{
    allowed_buckets, enumerate_distribution_types, lambda_cmp, lex_cmp, rho_cmp, tail_cmp,
    type_orders, DistributionType, EnumeratedType, TypeOrders,
};

/// Tunables for the decision procedure. All limits err on the side of
/// stopping with a resource-limit error rather than running unbounded.
#[derive(Clone, Debug)]
pub struct FptConfig {
    /// Upper bound on k'! — the number of orders of S' that may be tried.
    pub sigma_budget: u64,
    /// Cap on enumerated distribution types per sigma.
    pub types_cap: usize,
    /// Search-node budget handed to the feasibility solver per sigma.
    pub ilp_node_budget: u64,
    /// Vertex-count cap for the clique-number computation.
    pub clique_cap: usize,
    /// Report the witness of the first feasible sigma in enumeration order.
    /// The enumeration is sequential, so runs are reproducible either way;
    /// the flag documents the intent for callers that parallelize.
    pub deterministic: bool,
    /// When set, write one LP-format export per attempted sigma here.
    pub export_lp_dir: Option<PathBuf>,
}

impl Default for FptConfig {
    fn default() -> Self {
        FptConfig {
            sigma_budget: 10_000_000,
            types_cap: 200_000,
            ilp_node_budget: crate::ilp::DEFAULT_NODE_BUDGET,
            clique_cap: DEFAULT_CLIQUE_CAP,
            deterministic: true,
            export_lp_dir: None,
        }
    }
}

/// A fixed order of S' (positions 1..=k') plus, for each S-vertex, the
/// positions of its leftmost and rightmost neighbor inside S'.
#[derive(Clone, Debug)]
pub struct SigmaContext {
    order: Vec<usize>,
    pos_of: Vec<Option<usize>>,
    vminmax: Vec<Option<(usize, usize)>>,
}

impl SigmaContext {
    pub fn new(g: &Graph, eds: &ExtendedDeletionSet, order: Vec<usize>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != eds.members() {
            return Err(Error::InvalidInput(
                "sigma must order exactly the extended deletion set".into(),
            ));
        }
        let mut pos_of = vec![None; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos_of[v] = Some(i + 1);
        }
        let mut vminmax = Vec::with_capacity(eds.base().members().len());
        for &s in eds.base().members() {
            let mut lo: Option<usize> = None;
            let mut hi: Option<usize> = None;
            for &u in g.neighbors(s) {
                if let Some(p) = pos_of[u] {
                    lo = Some(lo.map_or(p, |x: usize| x.min(p)));
                    hi = Some(hi.map_or(p, |x: usize| x.max(p)));
                }
            }
            vminmax.push(lo.zip(hi));
        }
        Ok(SigmaContext {
            order,
            pos_of,
            vminmax,
        })
    }

    pub fn k_prime(&self) -> usize {
        self.order.len()
    }

    /// order[i] is the vertex at position i+1.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based position of an S' vertex.
    pub fn sigma(&self, v: usize) -> Option<usize> {
        self.pos_of.get(v).copied().flatten()
    }

    /// Extreme S'-neighbor positions for the i-th S member (sorted order).
    pub fn vminmax_of_s_index(&self, i: usize) -> Option<(usize, usize)> {
        self.vminmax[i]
    }

    /// Extreme S'-neighbor positions for an S vertex.
    pub fn vminmax(&self, eds: &ExtendedDeletionSet, s: usize) -> Option<(usize, usize)> {
        let idx = eds.base().members().binary_search(&s).ok()?;
        self.vminmax[idx]
    }
}

/// k'+1 vertex sets partitioning V minus S'; bucket i sits between the
/// sigma-vertices at positions i and i+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketDistribution {
    buckets: Vec<Vec<usize>>,
    bucket_of: Vec<Option<usize>>,
}

impl BucketDistribution {
    pub fn new(g: &Graph, eds: &ExtendedDeletionSet, mut buckets: Vec<Vec<usize>>) -> Result<Self> {
        if buckets.len() != eds.k_prime() + 1 {
            return Err(Error::InvalidInput(
                "bucket distribution needs exactly k'+1 buckets".into(),
            ));
        }
        let mut bucket_of = vec![None; g.n()];
        for (i, bucket) in buckets.iter_mut().enumerate() {
            bucket.sort_unstable();
            for &v in bucket.iter() {
                if v >= g.n() || eds.contains(v) {
                    return Err(Error::InvalidInput(format!(
                        "vertex {v} may not appear in a bucket"
                    )));
                }
                if bucket_of[v].replace(i).is_some() {
                    return Err(Error::InvalidInput(format!(
                        "vertex {v} appears in two buckets"
                    )));
                }
            }
        }
        for (v, slot) in bucket_of.iter().enumerate() {
            if !eds.contains(v) && slot.is_none() {
                return Err(Error::InvalidInput(format!("vertex {v} is unbucketed")));
            }
        }
        Ok(BucketDistribution { buckets, bucket_of })
    }

    /// Read the buckets off a sigma-compatible ordering.
    pub fn from_ordering(
        g: &Graph,
        eds: &ExtendedDeletionSet,
        ctx: &SigmaContext,
        pi: &Ordering,
    ) -> Result<Self> {
        if pi.len() != g.n() {
            return Err(Error::InvalidOrdering(
                "ordering does not match graph size".into(),
            ));
        }
        let mut s_prime_positions: Vec<(usize, usize)> =
            eds.members().iter().map(|&v| (pi.position(v), v)).collect();
        s_prime_positions.sort_unstable();
        let order_by_pi: Vec<usize> = s_prime_positions.iter().map(|&(_, v)| v).collect();
        if order_by_pi != ctx.order() {
            return Err(Error::InvalidInput(
                "ordering is not compatible with sigma".into(),
            ));
        }
        let positions: Vec<usize> = s_prime_positions.iter().map(|&(p, _)| p).collect();
        let mut buckets = vec![Vec::new(); eds.k_prime() + 1];
        for v in 0..g.n() {
            if eds.contains(v) {
                continue;
            }
            let i = positions.partition_point(|&p| p < pi.position(v));
            buckets[i].push(v);
        }
        BucketDistribution::new(g, eds, buckets)
    }

    pub fn k_prime(&self) -> usize {
        self.buckets.len() - 1
    }

    pub fn buckets(&self) -> &[Vec<usize>] {
        &self.buckets
    }

    pub fn bucket_of(&self, v: usize) -> Option<usize> {
        self.bucket_of.get(v).copied().flatten()
    }

    /// First 1-based position of bucket i in any compatible ordering.
    pub fn bucket_start(&self, i: usize) -> usize {
        let before: usize = self.buckets[..i].iter().map(|b| b.len()).sum();
        i + before + 1
    }
}

/// The feasibility program for one sigma, with its variable handles.
pub struct FptIlp {
    pub system: ConstraintSystem,
    pub x: Vec<VarId>,
    pub y: Vec<VarId>,
    pub types: Vec<EnumeratedType>,
    pub orders: TypeOrders,
    pub omega: usize,
    pub b: usize,
}

pub fn build_ilp(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    b: usize,
    cfg: &FptConfig,
) -> Result<FptIlp> {
    let omega = clique_number_capped(g, cfg.clique_cap)?;
    build_ilp_inner(g, eds, ctx, b, cfg, omega)
}

fn build_ilp_inner(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    b: usize,
    cfg: &FptConfig,
    omega: usize,
) -> Result<FptIlp> {
    let k_prime = ctx.k_prime();
    let b_i64 = b as i64;
    let types = enumerate_distribution_types(eds, ctx, cfg.types_cap)?;
    let orders = type_orders(&types, k_prime);
    let mut sys = ConstraintSystem::new();
    let mut x = Vec::with_capacity(types.len());
    let mut y = Vec::with_capacity(types.len());
    for (t, et) in types.iter().enumerate() {
        let remaining = eds.types()[et.kappa_idx].remaining.len() as i64;
        let xt = sys.add_var(&format!("x{t}"), 0, remaining)?;
        let yt = sys.add_binary(&format!("y{t}"))?;
        sys.add_indicator(yt, xt)?;
        x.push(xt);
        y.push(yt);
    }
    // Every remaining cluster of each cluster-type gets exactly one layout.
    for (kappa_idx, tc) in eds.types().iter().enumerate() {
        if tc.remaining.is_empty() {
            continue;
        }
        let terms: Vec<(i64, VarId)> = types
            .iter()
            .enumerate()
            .filter(|(_, et)| et.kappa_idx == kappa_idx)
            .map(|(t, _)| (1, x[t]))
            .collect();
        sys.add_linear(&terms, Cmp::Eq, tc.remaining.len() as i64)?;
    }
    // Bucket sizes as derived expressions.
    let z_terms: Vec<Vec<(i64, VarId)>> = (0..=k_prime)
        .map(|i| {
            types
                .iter()
                .enumerate()
                .filter(|(_, et)| et.dt.col_norm1(i) > 0)
                .map(|(t, et)| (et.dt.col_norm1(i) as i64, x[t]))
                .collect()
        })
        .collect();
    for (i, terms) in z_terms.iter().enumerate() {
        sys.add_derived(&format!("z{i}"), terms)?;
    }
    // Edges inside S': the positional gap plus all buckets in between.
    for p in 1..=k_prime {
        for q in p + 1..=k_prime {
            if !g.adjacent(ctx.order()[p - 1], ctx.order()[q - 1]) {
                continue;
            }
            let mut terms = Vec::new();
            for z in &z_terms[p..q] {
                terms.extend_from_slice(z);
            }
            sys.add_linear(&terms, Cmp::Le, b_i64 - (q - p) as i64)?;
        }
    }
    // A clique fully inside one bucket needs b+1 consecutive positions.
    sys.add_linear(&[], Cmp::Le, b_i64 - (omega as i64 - 1))?;
    // Stretch of a cluster spanning buckets ell..r: everything of the same
    // left order placed at or after it in bucket ell, all full buckets in
    // between, and everything of the same right order placed before it in
    // bucket r. Which end carries the extreme edge depends on whether the
    // leftmost or rightmost slice is bigger.
    for (t, et) in types.iter().enumerate() {
        let (ell, r, n_l, n_r) = et.dt.class();
        if ell == r {
            continue;
        }
        let mut terms: Vec<(i64, VarId)> = Vec::new();
        let lam_rank = orders
            .lambda_rank(t)
            .expect("spanning type has a left rank");
        let rho_rank = orders.rho_rank(t).expect("spanning type has a right rank");
        let (lam_from, rho_until, bound) = if n_l >= n_r {
            (
                lam_rank,
                rho_rank,
                b_i64 - (r - ell) as i64 - n_r as i64 + 1,
            )
        } else {
            (
                lam_rank + 1,
                rho_rank + 1,
                b_i64 - n_l as i64 - (r - ell) as i64 + 1,
            )
        };
        for &tp in &orders.t_l[ell][lam_from..] {
            terms.push((types[tp].dt.num_l() as i64, x[tp]));
        }
        for z in &z_terms[ell + 1..r] {
            terms.extend_from_slice(z);
        }
        for &tp in &orders.t_r[r][..rho_until] {
            terms.push((types[tp].dt.num_r() as i64, x[tp]));
        }
        sys.add_guarded(y[t], &terms, bound)?;
    }
    sys.set_big_m((g.n() + b + 1) as i64);
    Ok(FptIlp {
        system: sys,
        x,
        y,
        types,
        orders,
        omega,
        b,
    })
}

/// Turn a satisfying assignment back into a vertex ordering: hand each
/// remaining cluster a distribution type (greedily, in enumeration order),
/// fill the buckets row by row, lay the buckets out around sigma, and
/// canonicalize. The result is verified against the bound before returning.
pub fn reconstruct_ordering(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    ilp: &FptIlp,
    assignment: &Assignment,
) -> Result<Ordering> {
    let k_prime = ctx.k_prime();
    // Distribute the remaining clusters of each cluster-type over its
    // enumerated types according to the solution counts.
    let mut type_of_cluster: Vec<Option<usize>> = vec![None; eds.base().clusters().len()];
    for (kappa_idx, tc) in eds.types().iter().enumerate() {
        if tc.remaining.is_empty() {
            continue;
        }
        let mut pool = tc.remaining.iter().copied();
        let mut total = 0usize;
        for (t, et) in ilp.types.iter().enumerate() {
            if et.kappa_idx != kappa_idx {
                continue;
            }
            let count = assignment.value(ilp.x[t]);
            for _ in 0..count {
                let cluster = pool.next().ok_or_else(|| {
                    Error::Internal("solution assigns more clusters than remain".into())
                })?;
                type_of_cluster[cluster] = Some(t);
                total += 1;
            }
        }
        if total != tc.remaining.len() {
            return Err(Error::Internal(
                "solution leaves remaining clusters unassigned".into(),
            ));
        }
    }
    // Fill buckets; keep (type, cluster, vertex) keys for a deterministic
    // within-bucket order.
    let mut keyed_buckets: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k_prime + 1];
    for (cluster, assigned) in type_of_cluster.iter().enumerate() {
        let Some(t) = *assigned else { continue };
        let dt = &ilp.types[t].dt;
        let s_sorted = eds.base().members();
        let mut by_mask: Vec<(u64, Vec<usize>)> = Vec::new();
        for &v in &eds.base().clusters()[cluster] {
            let mask = crate::cluster::neighborhood_mask(g, s_sorted, v);
            match by_mask.iter_mut().find(|(m, _)| *m == mask) {
                Some((_, vs)) => vs.push(v),
                None => by_mask.push((mask, vec![v])),
            }
        }
        for (mask, vs) in by_mask {
            let row = dt
                .rows()
                .iter()
                .find(|(m, _)| *m == mask)
                .ok_or_else(|| Error::Internal("cluster mask missing from its type".into()))?;
            let mut it = vs.into_iter();
            for (i, &count) in row.1.iter().enumerate() {
                for _ in 0..count {
                    let v = it
                        .next()
                        .ok_or_else(|| Error::Internal("type row exceeds cluster size".into()))?;
                    keyed_buckets[i].push((t, cluster, v));
                }
            }
            if it.next().is_some() {
                return Err(Error::Internal("type row misses cluster vertices".into()));
            }
        }
    }
    let mut buckets: Vec<Vec<usize>> = Vec::with_capacity(k_prime + 1);
    let mut seq: Vec<usize> = Vec::with_capacity(g.n());
    for (i, mut keyed) in keyed_buckets.into_iter().enumerate() {
        keyed.sort_unstable();
        let bucket: Vec<usize> = keyed.iter().map(|&(_, _, v)| v).collect();
        seq.extend_from_slice(&bucket);
        if i < k_prime {
            seq.push(ctx.order()[i]);
        }
        buckets.push(bucket);
    }
    let bd = BucketDistribution::new(g, eds, buckets)?;
    let pi = Ordering::from_sequence(&seq)?;
    let pi = normalize_pi1(g, eds, ctx, &bd, &pi)?;
    let pi = normalize_pi2(g, eds, ctx, &bd, &pi)?;
    let pi = normalize_pi3(g, eds, ctx, &bd, &pi)?;
    let achieved = stretch(g, &pi)?;
    if achieved > ilp.b {
        return Err(Error::Internal(format!(
            "reconstructed ordering has stretch {achieved}, expected at most {}",
            ilp.b
        )));
    }
    Ok(pi)
}

/// Derive the sigma a concrete ordering induces on S'.
pub fn derive_sigma(g: &Graph, eds: &ExtendedDeletionSet, pi: &Ordering) -> Result<SigmaContext> {
    if pi.len() != g.n() {
        return Err(Error::InvalidOrdering(
            "ordering does not match graph size".into(),
        ));
    }
    let mut order: Vec<usize> = eds.members().to_vec();
    order.sort_by_key(|&v| pi.position(v));
    SigmaContext::new(g, eds, order)
}

/// The assignment an extremal compatible ordering induces: x counts clusters
/// per realized distribution type, y its indicator. Variable order matches
/// `build_ilp`. Errors when a cluster realizes a type outside the enumerated
/// list (impossible for extremal orderings).
pub fn forward_assignment(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    buckets: &BucketDistribution,
    ilp: &FptIlp,
) -> Result<Vec<i64>> {
    let mut values = vec![0i64; ilp.system.num_vars()];
    for cluster in 0..eds.base().clusters().len() {
        if eds.is_representative(cluster) {
            continue;
        }
        let dt = DistributionType::of_cluster(g, eds, buckets, cluster)?;
        let kappa_idx = eds.type_of_cluster(cluster);
        let t = ilp
            .types
            .iter()
            .position(|et| et.kappa_idx == kappa_idx && et.dt == dt)
            .ok_or_else(|| {
                Error::Internal("realized distribution type missing from enumeration".into())
            })?;
        values[ilp.x[t].0] += 1;
        values[ilp.y[t].0] = 1;
    }
    Ok(values)
}

fn factorial_exceeds(k: usize, budget: u64) -> bool {
    let mut acc: u64 = 1;
    for i in 2..=k as u64 {
        acc = match acc.checked_mul(i) {
            Some(v) => v,
            None => return true,
        };
        if acc > budget {
            return true;
        }
    }
    acc > budget
}

/// Lay a cluster graph out as consecutive cliques.
fn cluster_graph_witness(set: &ClusterDeletionSet) -> Result<Ordering> {
    let mut seq = Vec::new();
    for cluster in set.clusters() {
        seq.extend_from_slice(cluster);
    }
    Ordering::from_sequence(&seq)
}

/// Decide whether the graph admits an ordering of stretch at most `b`,
/// returning a verified witness when it does.
pub fn fpt_decide(
    g: &Graph,
    b: usize,
    set: Option<&ClusterDeletionSet>,
    cfg: &FptConfig,
) -> Result<(bool, Option<Ordering>)> {
    let n = g.n();
    if n == 0 || g.edge_count() == 0 || b >= n.saturating_sub(1) {
        return Ok((true, Some(Ordering::identity(n))));
    }
    let owned;
    let set = match set {
        Some(s) => s,
        None => {
            owned = min_cluster_deletion_set(g)?;
            &owned
        }
    };
    let omega = clique_number_capped(g, cfg.clique_cap)?;
    if b + 1 < omega {
        return Ok((false, None));
    }
    if set.members().is_empty() {
        // Disjoint cliques: consecutive layout is optimal, and omega - 1 <= b
        // was just checked.
        let witness = cluster_graph_witness(set)?;
        debug_assert_eq!(stretch(g, &witness).unwrap(), omega - 1);
        return Ok((true, Some(witness)));
    }
    let eds = extended_deletion_set(g, set)?;
    let k_prime = eds.k_prime();
    if factorial_exceeds(k_prime, cfg.sigma_budget) {
        return Err(Error::ResourceLimit(format!(
            "sigma enumeration needs {k_prime}! orders, over the budget of {}",
            cfg.sigma_budget
        )));
    }
    let members = eds.members();
    // Adjacency between member indices, for prefix pruning.
    let adj: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| {
            members
                .iter()
                .enumerate()
                .filter(|&(_, &u)| g.adjacent(v, u))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut search = SigmaSearch {
        g,
        eds: &eds,
        cfg,
        omega,
        b,
        adj,
        chosen: Vec::with_capacity(k_prime),
        used: vec![false; k_prime],
        pos_of_idx: vec![0usize; k_prime],
        exported: 0,
    };
    match search.dfs()? {
        Some(witness) => Ok((true, Some(witness))),
        None => Ok((false, None)),
    }
}

struct SigmaSearch<'a> {
    g: &'a Graph,
    eds: &'a ExtendedDeletionSet,
    cfg: &'a FptConfig,
    omega: usize,
    b: usize,
    adj: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    used: Vec<bool>,
    pos_of_idx: Vec<usize>,
    exported: usize,
}

impl SigmaSearch<'_> {
    fn dfs(&mut self) -> Result<Option<Ordering>> {
        let k_prime = self.used.len();
        if self.chosen.len() == k_prime {
            return self.try_leaf();
        }
        let p = self.chosen.len() + 1;
        for idx in 0..k_prime {
            if self.used[idx] {
                continue;
            }
            // Placed neighbors must be within b positions.
            if self.adj[idx]
                .iter()
                .any(|&nb| self.used[nb] && p - self.pos_of_idx[nb] > self.b)
            {
                continue;
            }
            self.used[idx] = true;
            self.pos_of_idx[idx] = p;
            self.chosen.push(idx);
            // The vertex falling b positions behind must have no unplaced
            // neighbors left.
            let frozen_ok = if p > self.b {
                let fr = self.chosen[p - self.b - 1];
                self.adj[fr].iter().all(|&nb| self.used[nb])
            } else {
                true
            };
            if frozen_ok {
                if let Some(witness) = self.dfs()? {
                    return Ok(Some(witness));
                }
            }
            self.chosen.pop();
            self.used[idx] = false;
        }
        Ok(None)
    }

    fn try_leaf(&mut self) -> Result<Option<Ordering>> {
        // Stretch is mirror-invariant, so skip the lexicographically larger
        // of each sigma/reverse pair.
        let rev_larger = self
            .chosen
            .iter()
            .zip(self.chosen.iter().rev())
            .find_map(|(a, b)| if a != b { Some(a > b) } else { None });
        if rev_larger == Some(true) {
            return Ok(None);
        }
        let members = self.eds.members();
        let order: Vec<usize> = self.chosen.iter().map(|&i| members[i]).collect();
        let ctx = SigmaContext::new(self.g, self.eds, order)?;
        let ilp = build_ilp_inner(self.g, self.eds, &ctx, self.b, self.cfg, self.omega)?;
        if let Some(dir) = &self.cfg.export_lp_dir {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("sigma_{:06}.lp", self.exported));
            std::fs::write(path, ilp.system.export_lp())?;
            self.exported += 1;
        }
        match ilp
            .system
            .solve_feasibility_with(self.cfg.ilp_node_budget)?
        {
            Some(assignment) => {
                let witness = reconstruct_ordering(self.g, self.eds, &ctx, &ilp, &assignment)?;
                Ok(Some(witness))
            }
            None => Ok(None),
        }
    }
}

/// Minimum bandwidth via a decision ladder: binary search between the
/// combinatorial lower bound and n-1.
pub fn fpt_min(
    g: &Graph,
    set: Option<&ClusterDeletionSet>,
    cfg: &FptConfig,
) -> Result<(usize, Ordering)> {
    let n = g.n();
    if n == 0 || g.edge_count() == 0 {
        return Ok((0, Ordering::identity(n)));
    }
    let mut lo = bandwidth_lower_bound(g)?;
    let mut hi = n - 1;
    let mut best: Option<(usize, Ordering)> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match fpt_decide(g, mid, set, cfg)? {
            (true, witness) => {
                hi = mid;
                if let Some(w) = witness {
                    best = Some((mid, w));
                }
            }
            (false, _) => lo = mid + 1,
        }
    }
    match best {
        Some((b, w)) if b == lo => Ok((lo, w)),
        _ => {
            let (feasible, witness) = fpt_decide(g, lo, set, cfg)?;
            if !feasible {
                return Err(Error::Internal(
                    "decision ladder converged on an infeasible bound".into(),
                ));
            }
            let w = witness
                .ok_or_else(|| Error::Internal("feasible decision without witness".into()))?;
            Ok((lo, w))
        }
    }
}
