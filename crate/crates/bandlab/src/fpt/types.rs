//! Distribution types: how a single cluster's vertices are spread over the
//! buckets of a bucket distribution, broken down by S-neighborhood.

use std::cmp::Ordering as CmpOrd;

use crate::cluster::{neighborhood_mask, ClusterType, ExtendedDeletionSet};
use crate::error::{Error, Result};
use crate::fpt::{BucketDistribution, SigmaContext};
use crate::graph::Graph;

/// A sparse matrix with one row per realized S-neighborhood (bitmask over the
/// sorted S members) and one column per bucket 0..=k'. Entry (N, i) counts the
/// cluster vertices with S-neighborhood N placed in bucket i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistributionType {
    /// Rows sorted by mask; every row has at least one nonzero entry.
    rows: Vec<(u64, Vec<u32>)>,
    k_prime: usize,
}

impl DistributionType {
    pub fn new(mut rows: Vec<(u64, Vec<u32>)>, k_prime: usize) -> Result<Self> {
        rows.retain(|(_, counts)| counts.iter().any(|&c| c > 0));
        rows.sort_by_key(|&(mask, _)| mask);
        for w in rows.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(
                    "duplicate neighborhood row in distribution type".into(),
                ));
            }
        }
        for (_, counts) in &rows {
            if counts.len() != k_prime + 1 {
                return Err(Error::InvalidInput(
                    "distribution row length must be k'+1".into(),
                ));
            }
        }
        if rows.is_empty() {
            return Err(Error::InvalidInput(
                "distribution type must place at least one vertex".into(),
            ));
        }
        Ok(DistributionType { rows, k_prime })
    }

    /// The type of a concrete non-representative cluster inside a bucket
    /// distribution.
    pub fn of_cluster(
        g: &Graph,
        eds: &ExtendedDeletionSet,
        buckets: &BucketDistribution,
        cluster: usize,
    ) -> Result<Self> {
        let s_sorted = eds.base().members();
        let k_prime = buckets.k_prime();
        let mut rows: Vec<(u64, Vec<u32>)> = Vec::new();
        for &v in &eds.base().clusters()[cluster] {
            let bucket = buckets.bucket_of(v).ok_or_else(|| {
                Error::InvalidInput(format!("vertex {v} of cluster {cluster} is not bucketed"))
            })?;
            let mask = neighborhood_mask(g, s_sorted, v);
            match rows.iter_mut().find(|(m, _)| *m == mask) {
                Some((_, counts)) => counts[bucket] += 1,
                None => {
                    let mut counts = vec![0u32; k_prime + 1];
                    counts[bucket] += 1;
                    rows.push((mask, counts));
                }
            }
        }
        DistributionType::new(rows, k_prime)
    }

    pub fn rows(&self) -> &[(u64, Vec<u32>)] {
        &self.rows
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    /// Column 1-norm: number of cluster vertices placed in bucket `i`.
    pub fn col_norm1(&self, i: usize) -> u32 {
        self.rows.iter().map(|(_, counts)| counts[i]).sum()
    }

    /// Total number of vertices placed (the cluster size).
    pub fn norm1(&self) -> u32 {
        (0..=self.k_prime).map(|i| self.col_norm1(i)).sum()
    }

    /// Leftmost bucket with a vertex.
    pub fn lb(&self) -> usize {
        (0..=self.k_prime)
            .find(|&i| self.col_norm1(i) > 0)
            .expect("nonzero by construction")
    }

    /// Rightmost bucket with a vertex.
    pub fn rb(&self) -> usize {
        (0..=self.k_prime)
            .rev()
            .find(|&i| self.col_norm1(i) > 0)
            .expect("nonzero by construction")
    }

    /// Vertices in the leftmost occupied bucket.
    pub fn num_l(&self) -> u32 {
        self.col_norm1(self.lb())
    }

    /// Vertices in the rightmost occupied bucket.
    pub fn num_r(&self) -> u32 {
        self.col_norm1(self.rb())
    }

    /// (LB, RB, numL, numR) classification.
    pub fn class(&self) -> (usize, usize, u32, u32) {
        (self.lb(), self.rb(), self.num_l(), self.num_r())
    }

    /// Row sums: the cluster type this distribution realizes.
    pub fn cluster_type(&self) -> ClusterType {
        let entries: Vec<(u64, u32)> = self
            .rows
            .iter()
            .map(|(mask, counts)| (*mask, counts.iter().sum()))
            .collect();
        ClusterType::from_entries(&entries)
    }
}

/// Lexicographic comparison of the dense matrices, read row by row with rows
/// ordered by ascending neighborhood mask (absent rows are all-zero).
pub fn lex_cmp(a: &DistributionType, b: &DistributionType) -> CmpOrd {
    debug_assert_eq!(a.k_prime, b.k_prime);
    let zero = vec![0u32; a.k_prime + 1];
    let (mut i, mut j) = (0, 0);
    while i < a.rows.len() || j < b.rows.len() {
        let ma = a.rows.get(i).map(|r| r.0).unwrap_or(u64::MAX);
        let mb = b.rows.get(j).map(|r| r.0).unwrap_or(u64::MAX);
        let (ra, rb) = if ma < mb {
            i += 1;
            (&a.rows[i - 1].1, &zero)
        } else if mb < ma {
            j += 1;
            (&zero, &b.rows[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (&a.rows[i - 1].1, &b.rows[j - 1].1)
        };
        match ra.cmp(rb) {
            CmpOrd::Equal => {}
            other => return other,
        }
    }
    CmpOrd::Equal
}

/// The tie-break shared by both type orders once the extreme buckets agree:
/// numL-dominant types first; within the numL-dominant group ascending numR
/// then lex; within the numR-dominant group descending numL then lex.
pub fn tail_cmp(a: &DistributionType, b: &DistributionType) -> CmpOrd {
    let (nla, nra) = (a.num_l(), a.num_r());
    let (nlb, nrb) = (b.num_l(), b.num_r());
    match (nla >= nra, nlb >= nrb) {
        (true, false) => CmpOrd::Less,
        (false, true) => CmpOrd::Greater,
        (true, true) => nra.cmp(&nrb).then_with(|| lex_cmp(a, b)),
        (false, false) => nlb.cmp(&nla).then_with(|| lex_cmp(a, b)),
    }
}

/// Order on types sharing a rightmost bucket: ascending leftmost bucket, then
/// the shared tie-break.
pub fn rho_cmp(a: &DistributionType, b: &DistributionType) -> CmpOrd {
    a.lb().cmp(&b.lb()).then_with(|| tail_cmp(a, b))
}

/// Order on types sharing a leftmost bucket: ascending rightmost bucket, then
/// the shared tie-break.
pub fn lambda_cmp(a: &DistributionType, b: &DistributionType) -> CmpOrd {
    a.rb().cmp(&b.rb()).then_with(|| tail_cmp(a, b))
}

/// A distribution type together with the cluster-type (index into
/// `eds.types()`) it realizes.
#[derive(Clone, Debug)]
pub struct EnumeratedType {
    pub dt: DistributionType,
    pub kappa_idx: usize,
}

/// Per-bucket orders over the enumerated types: for each bucket `i`, the types
/// whose rightmost bucket is `i` (but leftmost differs), sorted, and the types
/// whose leftmost bucket is `i` (but rightmost differs), sorted.
#[derive(Clone, Debug)]
pub struct TypeOrders {
    pub t_r: Vec<Vec<usize>>,
    pub t_l: Vec<Vec<usize>>,
    rho_rank: Vec<Option<usize>>,
    lambda_rank: Vec<Option<usize>>,
}

impl TypeOrders {
    /// 0-based rank of type `t` within the order of its rightmost bucket.
    pub fn rho_rank(&self, t: usize) -> Option<usize> {
        self.rho_rank[t]
    }

    /// 0-based rank of type `t` within the order of its leftmost bucket.
    pub fn lambda_rank(&self, t: usize) -> Option<usize> {
        self.lambda_rank[t]
    }
}

pub fn type_orders(types: &[EnumeratedType], k_prime: usize) -> TypeOrders {
    let mut t_r: Vec<Vec<usize>> = vec![Vec::new(); k_prime + 1];
    let mut t_l: Vec<Vec<usize>> = vec![Vec::new(); k_prime + 1];
    for (idx, et) in types.iter().enumerate() {
        let (lb, rb) = (et.dt.lb(), et.dt.rb());
        if lb < rb {
            t_r[rb].push(idx);
            t_l[lb].push(idx);
        }
    }
    let mut rho_rank = vec![None; types.len()];
    let mut lambda_rank = vec![None; types.len()];
    for list in &mut t_r {
        list.sort_by(|&a, &b| rho_cmp(&types[a].dt, &types[b].dt));
        for (rank, &t) in list.iter().enumerate() {
            rho_rank[t] = Some(rank);
        }
    }
    for list in &mut t_l {
        list.sort_by(|&a, &b| lambda_cmp(&types[a].dt, &types[b].dt));
        for (rank, &t) in list.iter().enumerate() {
            lambda_rank[t] = Some(rank);
        }
    }
    TypeOrders {
        t_r,
        t_l,
        rho_rank,
        lambda_rank,
    }
}

/// Buckets a vertex with S-neighborhood `mask` may occupy under `ctx`: the
/// intersection over s in the mask of [sigma(vmin_s), sigma(vmax_s) - 1].
/// `None` when the intersection is empty.
pub fn allowed_buckets(ctx: &SigmaContext, mask: u64) -> Option<(usize, usize)> {
    let (mut lo, mut hi) = (0usize, ctx.k_prime());
    let mut bits = mask;
    while bits != 0 {
        let s_idx = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (vmin, vmax) = ctx
            .vminmax_of_s_index(s_idx)
            .expect("masked s has an S' neighbor by construction");
        lo = lo.max(vmin);
        hi = hi.min(vmax - 1);
    }
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// All distribution types that can still be assigned to a cluster: one group
/// per cluster-type with remaining (non-representative) clusters, rows over
/// that type's realized neighborhoods, zero-forced entries dropped up front.
pub fn enumerate_distribution_types(
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    cap: usize,
) -> Result<Vec<EnumeratedType>> {
    let k_prime = ctx.k_prime();
    let mut out: Vec<EnumeratedType> = Vec::new();
    for (kappa_idx, tc) in eds.types().iter().enumerate() {
        if tc.remaining.is_empty() {
            continue;
        }
        let rows_spec: Vec<(u64, u32, (usize, usize))> = {
            let mut spec = Vec::new();
            let mut feasible = true;
            for &(mask, count) in tc.ty.entries() {
                match allowed_buckets(ctx, mask) {
                    Some(range) => spec.push((mask, count, range)),
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
            if !feasible {
                continue;
            }
            spec
        };
        let mut partial: Vec<(u64, Vec<u32>)> = Vec::new();
        enumerate_rows(&rows_spec, 0, k_prime, &mut partial, &mut |rows| {
            if out.len() >= cap {
                return Err(Error::ResourceLimit(format!(
                    "distribution-type enumeration exceeded cap of {cap}"
                )));
            }
            out.push(EnumeratedType {
                dt: DistributionType::new(rows.to_vec(), k_prime)?,
                kappa_idx,
            });
            Ok(())
        })?;
    }
    Ok(out)
}

/// One partially built row: a neighborhood mask with its per-bucket counts.
type MaskRow = (u64, Vec<u32>);

/// Recursively pick a weak composition for each row, in lexicographic order.
fn enumerate_rows(
    spec: &[(u64, u32, (usize, usize))],
    row: usize,
    k_prime: usize,
    partial: &mut Vec<MaskRow>,
    emit: &mut dyn FnMut(&[MaskRow]) -> Result<()>,
) -> Result<()> {
    if row == spec.len() {
        return emit(partial);
    }
    let (mask, count, (lo, hi)) = spec[row];
    let mut counts = vec![0u32; k_prime + 1];
    compose(count, lo, hi, &mut counts, &mut |counts| {
        partial.push((mask, counts.to_vec()));
        let r = enumerate_rows(spec, row + 1, k_prime, partial, emit);
        partial.pop();
        r
    })
}

/// Weak compositions of `count` over buckets lo..=hi, leftmost bucket varying
/// slowest, largest count first.
fn compose(
    count: u32,
    lo: usize,
    hi: usize,
    counts: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if lo == hi {
        counts[lo] = count;
        let r = emit(counts);
        counts[lo] = 0;
        return r;
    }
    for here in (0..=count).rev() {
        counts[lo] = here;
        compose(count - here, lo + 1, hi, counts, emit)?;
    }
    counts[lo] = 0;
    Ok(())
}
