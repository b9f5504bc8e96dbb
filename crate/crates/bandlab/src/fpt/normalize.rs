//! Canonicalization of bucket-compatible orderings.
//!
//! Three successively stronger layout properties are established without ever
//! increasing the stretch:
//!
//! * P1 — inside every bucket, each cluster's slice is contiguous, and the
//!   bucket splits into three zones: first the clusters that end here (R),
//!   then the ones passing through or fully contained (M), then the ones
//!   starting here (L).
//! * P2 — any two clusters sharing their leftmost bucket, or sharing their
//!   rightmost bucket, appear in the same relative order at both ends.
//! * P3 — within a zone, clusters of equal distribution type are adjacent,
//!   and the type blocks follow the canonical type orders.

use std::cmp::Ordering as CmpOrd;

use crate::cluster::{is_extremal, ExtendedDeletionSet};
use crate::error::{Error, Result};
use crate::fpt::types::{lambda_cmp, rho_cmp, tail_cmp, DistributionType};
use crate::fpt::{BucketDistribution, SigmaContext};
use crate::graph::{stretch, Graph, Ordering};

/// Outcome of a layout-property check.
#[derive(Clone, Debug)]
pub struct PropertyCheck {
    pub holds: bool,
    /// Interval layout, present when the property holds and has one.
    pub certificate: Option<PropertyCertificate>,
    /// Human-readable reason, present when the property fails.
    pub violation: Option<String>,
}

impl PropertyCheck {
    fn ok(certificate: Option<PropertyCertificate>) -> Self {
        PropertyCheck {
            holds: true,
            certificate,
            violation: None,
        }
    }

    fn fail(reason: String) -> Self {
        PropertyCheck {
            holds: false,
            certificate: None,
            violation: Some(reason),
        }
    }
}

/// Inclusive 1-based position interval; `None` when empty.
pub type Interval = Option<(usize, usize)>;

/// Zone intervals per bucket: the coarse R/M/L triple and, when computed, the
/// finer per-type blocks inside the R and L zones (in canonical type order).
#[derive(Clone, Debug, Default)]
pub struct BucketCertificate {
    pub bucket: usize,
    pub i_r: Interval,
    pub i_m: Interval,
    pub i_l: Interval,
    pub j_r: Vec<(usize, usize)>,
    pub j_m: Interval,
    pub j_l: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct PropertyCertificate {
    pub buckets: Vec<BucketCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Zone {
    R,
    M,
    L,
}

/// A cluster's vertex positions inside one bucket, sorted ascending.
#[derive(Clone, Debug)]
struct Part {
    cluster: usize,
    positions: Vec<usize>,
}

impl Part {
    fn first(&self) -> usize {
        self.positions[0]
    }

    fn last(&self) -> usize {
        *self.positions.last().unwrap()
    }

    fn contiguous(&self) -> bool {
        self.last() - self.first() + 1 == self.positions.len()
    }
}

/// Error unless `pi` is compatible with sigma and reproduces `buckets`.
pub fn validate_compatible(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<()> {
    let derived = BucketDistribution::from_ordering(g, eds, ctx, pi)?;
    if derived.buckets() != buckets.buckets() {
        return Err(Error::InvalidInput(
            "ordering does not reproduce the given bucket distribution".into(),
        ));
    }
    Ok(())
}

fn require_extremal(g: &Graph, eds: &ExtendedDeletionSet, pi: &Ordering) -> Result<()> {
    if !is_extremal(g, eds.base(), eds, pi)? {
        return Err(Error::InvalidInput(
            "ordering is not extremal with respect to the extended deletion set".into(),
        ));
    }
    Ok(())
}

/// Distribution type of every non-representative cluster (None for
/// representatives, whose vertices are not bucketed).
fn cluster_dts(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    buckets: &BucketDistribution,
) -> Result<Vec<Option<DistributionType>>> {
    let mut dts = Vec::with_capacity(eds.base().clusters().len());
    for c in 0..eds.base().clusters().len() {
        if eds.is_representative(c) {
            dts.push(None);
        } else {
            dts.push(Some(DistributionType::of_cluster(g, eds, buckets, c)?));
        }
    }
    Ok(dts)
}

/// Cluster parts inside bucket `i`, ordered by first position.
fn parts_in_bucket(
    eds: &ExtendedDeletionSet,
    buckets: &BucketDistribution,
    pi: &Ordering,
    i: usize,
) -> Vec<Part> {
    let mut by_cluster: Vec<(usize, Vec<usize>)> = Vec::new();
    for &v in &buckets.buckets()[i] {
        let c = eds
            .cluster_of(v)
            .expect("bucketed vertices live in clusters");
        match by_cluster.iter_mut().find(|(cl, _)| *cl == c) {
            Some((_, positions)) => positions.push(pi.position(v)),
            None => by_cluster.push((c, vec![pi.position(v)])),
        }
    }
    let mut parts: Vec<Part> = by_cluster
        .into_iter()
        .map(|(cluster, mut positions)| {
            positions.sort_unstable();
            Part { cluster, positions }
        })
        .collect();
    parts.sort_by_key(|p| p.first());
    parts
}

fn zone_of(dt: &DistributionType, bucket: usize) -> Zone {
    let (lb, rb) = (dt.lb(), dt.rb());
    if rb == bucket && lb < bucket {
        Zone::R
    } else if lb == bucket && rb > bucket {
        Zone::L
    } else {
        Zone::M
    }
}

fn interval_of(count: usize, start: usize) -> (Interval, usize) {
    if count == 0 {
        (None, start)
    } else {
        (Some((start, start + count - 1)), start + count)
    }
}

/// P1: every part contiguous; within each bucket all R parts precede all M
/// parts, which precede all L parts.
pub fn check_pi1(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<PropertyCheck> {
    validate_compatible(g, eds, ctx, buckets, pi)?;
    let dts = cluster_dts(g, eds, buckets)?;
    let mut cert = Vec::new();
    for i in 0..=buckets.k_prime() {
        let parts = parts_in_bucket(eds, buckets, pi, i);
        let mut counts = [0usize; 3];
        let mut prev_zone = Zone::R;
        for part in &parts {
            if !part.contiguous() {
                return Ok(PropertyCheck::fail(format!(
                    "cluster {} is not contiguous inside bucket {i}",
                    part.cluster
                )));
            }
            let zone = zone_of(dts[part.cluster].as_ref().unwrap(), i);
            let order = |z: Zone| match z {
                Zone::R => 0,
                Zone::M => 1,
                Zone::L => 2,
            };
            if order(zone) < order(prev_zone) {
                return Ok(PropertyCheck::fail(format!(
                    "zones out of order in bucket {i} at cluster {}",
                    part.cluster
                )));
            }
            prev_zone = zone;
            counts[order(zone)] += part.positions.len();
        }
        let start = buckets.bucket_start(i);
        let (i_r, start) = interval_of(counts[0], start);
        let (i_m, start) = interval_of(counts[1], start);
        let (i_l, _) = interval_of(counts[2], start);
        cert.push(BucketCertificate {
            bucket: i,
            i_r,
            i_m,
            i_l,
            ..BucketCertificate::default()
        });
    }
    Ok(PropertyCheck::ok(Some(PropertyCertificate {
        buckets: cert,
    })))
}

/// Total order between two disjoint position sets; `None` when interleaved.
fn rel(a: &[usize], b: &[usize]) -> Option<CmpOrd> {
    if *a.last().unwrap() < b[0] {
        Some(CmpOrd::Less)
    } else if *b.last().unwrap() < a[0] {
        Some(CmpOrd::Greater)
    } else {
        None
    }
}

/// Positions of cluster `c` inside bucket `i`, sorted.
fn part_positions(
    eds: &ExtendedDeletionSet,
    buckets: &BucketDistribution,
    pi: &Ordering,
    c: usize,
    i: usize,
) -> Vec<usize> {
    let mut positions: Vec<usize> = buckets.buckets()[i]
        .iter()
        .copied()
        .filter(|&v| eds.cluster_of(v) == Some(c))
        .map(|v| pi.position(v))
        .collect();
    positions.sort_unstable();
    positions
}

/// P2: clusters sharing an extreme bucket keep one relative order at both
/// extremes — for every pair with equal leftmost or equal rightmost bucket,
/// the leftmost parts compare the same way as the rightmost parts.
pub fn check_pi2(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<PropertyCheck> {
    validate_compatible(g, eds, ctx, buckets, pi)?;
    let dts = cluster_dts(g, eds, buckets)?;
    let clusters: Vec<usize> = (0..dts.len()).filter(|&c| dts[c].is_some()).collect();
    for (idx, &c1) in clusters.iter().enumerate() {
        for &c2 in &clusters[idx + 1..] {
            let d1 = dts[c1].as_ref().unwrap();
            let d2 = dts[c2].as_ref().unwrap();
            if d1.lb() != d2.lb() && d1.rb() != d2.rb() {
                continue;
            }
            let l1 = part_positions(eds, buckets, pi, c1, d1.lb());
            let l2 = part_positions(eds, buckets, pi, c2, d2.lb());
            let r1 = part_positions(eds, buckets, pi, c1, d1.rb());
            let r2 = part_positions(eds, buckets, pi, c2, d2.rb());
            let left = rel(&l1, &l2);
            let right = rel(&r1, &r2);
            match (left, right) {
                (Some(a), Some(b)) if a == b => {}
                _ => {
                    return Ok(PropertyCheck::fail(format!(
                        "clusters {c1} and {c2} disagree between their extreme buckets"
                    )));
                }
            }
        }
    }
    Ok(PropertyCheck::ok(None))
}

/// P3: P1 zones hold; inside each R zone the parts group into contiguous
/// same-type blocks ordered canonically, and likewise inside each L zone.
pub fn check_pi3(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<PropertyCheck> {
    let pi1 = check_pi1(g, eds, ctx, buckets, pi)?;
    if !pi1.holds {
        return Ok(PropertyCheck::fail(format!(
            "zone layout missing: {}",
            pi1.violation.unwrap_or_default()
        )));
    }
    let mut cert = pi1.certificate.unwrap();
    let dts = cluster_dts(g, eds, buckets)?;
    for i in 0..=buckets.k_prime() {
        let parts = parts_in_bucket(eds, buckets, pi, i);
        for (zone, cmp, is_r) in [
            (Zone::R, rho_cmp as fn(_, _) -> CmpOrd, true),
            (Zone::L, lambda_cmp as fn(_, _) -> CmpOrd, false),
        ] {
            let zone_parts: Vec<&Part> = parts
                .iter()
                .filter(|p| zone_of(dts[p.cluster].as_ref().unwrap(), i) == zone)
                .collect();
            // Group consecutive parts of equal type into blocks.
            let mut blocks: Vec<(&DistributionType, usize, usize)> = Vec::new();
            for part in &zone_parts {
                let dt = dts[part.cluster].as_ref().unwrap();
                match blocks.last_mut() {
                    Some((bdt, _, last)) if *bdt == dt => *last = part.last(),
                    _ => blocks.push((dt, part.first(), part.last())),
                }
            }
            // A type split into non-adjacent blocks shows up as a repeated
            // type after consecutive grouping, which the strict order check
            // rejects alongside genuine misorderings.
            for w in blocks.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                if cmp(a.0, b.0) != CmpOrd::Less {
                    return Ok(PropertyCheck::fail(format!(
                        "type blocks out of order in bucket {i}"
                    )));
                }
            }
            let intervals: Vec<(usize, usize)> = blocks
                .iter()
                .map(|&(_, first, last)| (first, last))
                .collect();
            if is_r {
                cert.buckets[i].j_r = intervals;
            } else {
                cert.buckets[i].j_l = intervals;
            }
        }
        cert.buckets[i].j_m = cert.buckets[i].i_m;
    }
    Ok(PropertyCheck::ok(Some(cert)))
}

/// Re-pack every bucket into R, M, L zones: R parts sorted by their last
/// position, M and L parts by their first position, vertices inside a part
/// keeping their relative order. Positions of S' vertices are untouched.
pub fn normalize_pi1(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<Ordering> {
    validate_compatible(g, eds, ctx, buckets, pi)?;
    require_extremal(g, eds, pi)?;
    let dts = cluster_dts(g, eds, buckets)?;
    let orig = pi.sequence();
    let mut seq = orig.clone();
    for i in 0..=buckets.k_prime() {
        let parts = parts_in_bucket(eds, buckets, pi, i);
        let mut r_parts: Vec<&Part> = Vec::new();
        let mut m_parts: Vec<&Part> = Vec::new();
        let mut l_parts: Vec<&Part> = Vec::new();
        for part in &parts {
            match zone_of(dts[part.cluster].as_ref().unwrap(), i) {
                Zone::R => r_parts.push(part),
                Zone::M => m_parts.push(part),
                Zone::L => l_parts.push(part),
            }
        }
        r_parts.sort_by_key(|p| p.last());
        m_parts.sort_by_key(|p| p.first());
        l_parts.sort_by_key(|p| p.first());
        let mut cursor = buckets.bucket_start(i);
        for part in r_parts.into_iter().chain(m_parts).chain(l_parts) {
            for &p in &part.positions {
                seq[cursor - 1] = orig[p - 1];
                cursor += 1;
            }
        }
    }
    let out = Ordering::from_sequence(&seq)?;
    ensure_no_worse(g, pi, &out)?;
    Ok(out)
}

/// Resolve P2 violations by sliding the offending pair's shared-extreme parts
/// past each other; each slide settles one pair for good, so this terminates.
pub fn normalize_pi2(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<Ordering> {
    validate_compatible(g, eds, ctx, buckets, pi)?;
    require_extremal(g, eds, pi)?;
    if !check_pi1(g, eds, ctx, buckets, pi)?.holds {
        return Err(Error::InvalidInput(
            "zone layout must hold before the second normalization pass".into(),
        ));
    }
    let dts = cluster_dts(g, eds, buckets)?;
    let n_clusters = eds.base().clusters().len();
    let mut cur = pi.clone();
    let guard = 2 * (n_clusters * n_clusters + 2);
    for _ in 0..guard {
        match find_pi2_slide(eds, buckets, &cur, &dts) {
            Some((start, a_len, b_len)) => {
                let mut seq = cur.sequence();
                seq[start - 1..start - 1 + a_len + b_len].rotate_left(a_len);
                cur = Ordering::from_sequence(&seq)?;
            }
            None => {
                let ok = check_pi1(g, eds, ctx, buckets, &cur)?.holds
                    && check_pi2(g, eds, ctx, buckets, &cur)?.holds;
                if !ok {
                    return Err(Error::Internal(
                        "second normalization pass settled on a violating layout".into(),
                    ));
                }
                ensure_no_worse(g, pi, &cur)?;
                return Ok(cur);
            }
        }
    }
    Err(Error::Internal(
        "second normalization pass failed to terminate".into(),
    ))
}

/// Find one adjacent pair whose extreme parts are inverted and return the
/// slide (start position, first part length, second part length) that swaps
/// their shared-bucket parts.
fn find_pi2_slide(
    eds: &ExtendedDeletionSet,
    buckets: &BucketDistribution,
    pi: &Ordering,
    dts: &[Option<DistributionType>],
) -> Option<(usize, usize, usize)> {
    for i in 0..=buckets.k_prime() {
        let parts = parts_in_bucket(eds, buckets, pi, i);
        // Clusters starting here (L zone): their right ends must follow the
        // left-end order.
        let l_zone: Vec<&Part> = parts
            .iter()
            .filter(|p| zone_of(dts[p.cluster].as_ref().unwrap(), i) == Zone::L)
            .collect();
        for w in l_zone.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (da, db) = (
                dts[a.cluster].as_ref().unwrap(),
                dts[b.cluster].as_ref().unwrap(),
            );
            let ra = part_positions(eds, buckets, pi, a.cluster, da.rb());
            let rb = part_positions(eds, buckets, pi, b.cluster, db.rb());
            if (db.rb(), rb[0]) < (da.rb(), ra[0]) {
                return Some((a.first(), a.positions.len(), b.positions.len()));
            }
        }
        // Clusters ending here (R zone): left ends must follow the right-end
        // order.
        let r_zone: Vec<&Part> = parts
            .iter()
            .filter(|p| zone_of(dts[p.cluster].as_ref().unwrap(), i) == Zone::R)
            .collect();
        for w in r_zone.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (da, db) = (
                dts[a.cluster].as_ref().unwrap(),
                dts[b.cluster].as_ref().unwrap(),
            );
            let la = part_positions(eds, buckets, pi, a.cluster, da.lb());
            let lb = part_positions(eds, buckets, pi, b.cluster, db.lb());
            if (db.lb(), lb[0]) < (da.lb(), la[0]) {
                return Some((a.first(), a.positions.len(), b.positions.len()));
            }
        }
    }
    None
}

/// Sort same-extent clusters inside each zone by the canonical type order,
/// using stretch-safe whole-cluster exchanges.
pub fn normalize_pi3(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
) -> Result<Ordering> {
    validate_compatible(g, eds, ctx, buckets, pi)?;
    require_extremal(g, eds, pi)?;
    if !check_pi1(g, eds, ctx, buckets, pi)?.holds || !check_pi2(g, eds, ctx, buckets, pi)?.holds {
        return Err(Error::InvalidInput(
            "earlier layout passes must hold before the third normalization pass".into(),
        ));
    }
    let dts = cluster_dts(g, eds, buckets)?;
    let n = g.n();
    let mut cur = pi.clone();
    let guard = n * n + 2;
    for _ in 0..guard {
        match find_pi3_exchange(eds, buckets, &cur, &dts) {
            Some((c, c_prime, ell, r)) => {
                cur = exchange_clusters(g, eds, ctx, buckets, &cur, c, c_prime, ell, r)?;
            }
            None => {
                let ok = check_pi1(g, eds, ctx, buckets, &cur)?.holds
                    && check_pi2(g, eds, ctx, buckets, &cur)?.holds
                    && check_pi3(g, eds, ctx, buckets, &cur)?.holds;
                if !ok {
                    return Err(Error::Internal(
                        "third normalization pass settled on a violating layout".into(),
                    ));
                }
                ensure_no_worse(g, pi, &cur)?;
                return Ok(cur);
            }
        }
    }
    Err(Error::Internal(
        "third normalization pass failed to terminate".into(),
    ))
}

/// Find one adjacent inversion inside a (leftmost, rightmost) group.
fn find_pi3_exchange(
    eds: &ExtendedDeletionSet,
    buckets: &BucketDistribution,
    pi: &Ordering,
    dts: &[Option<DistributionType>],
) -> Option<(usize, usize, usize, usize)> {
    for ell in 0..buckets.k_prime() {
        let parts = parts_in_bucket(eds, buckets, pi, ell);
        for r in ell + 1..=buckets.k_prime() {
            let group: Vec<&Part> = parts
                .iter()
                .filter(|p| {
                    let dt = dts[p.cluster].as_ref().unwrap();
                    dt.lb() == ell && dt.rb() == r
                })
                .collect();
            for w in group.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (da, db) = (
                    dts[a.cluster].as_ref().unwrap(),
                    dts[b.cluster].as_ref().unwrap(),
                );
                if tail_cmp(db, da) == CmpOrd::Less {
                    return Some((a.cluster, b.cluster, ell, r));
                }
            }
        }
    }
    None
}

/// Exchange two clusters spanning the same bucket range `ell..=r`, where
/// `c`'s parts directly precede `c_prime`'s in both extreme buckets: the two
/// left parts swap their combined span, as do the two right parts; all other
/// positions (including both clusters' middle parts) stay fixed, and vertex
/// order inside each part is preserved.
#[allow(clippy::too_many_arguments)]
pub fn exchange_clusters(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    ctx: &SigmaContext,
    buckets: &BucketDistribution,
    pi: &Ordering,
    c: usize,
    c_prime: usize,
    ell: usize,
    r: usize,
) -> Result<Ordering> {
    validate_compatible(g, eds, ctx, buckets, pi)?;
    if ell >= r {
        return Err(Error::InvalidInput(
            "exchange requires two distinct extreme buckets".into(),
        ));
    }
    let dt_c = DistributionType::of_cluster(g, eds, buckets, c)?;
    let dt_cp = DistributionType::of_cluster(g, eds, buckets, c_prime)?;
    if dt_c.lb() != ell || dt_c.rb() != r || dt_cp.lb() != ell || dt_cp.rb() != r {
        return Err(Error::InvalidInput(
            "both clusters must span exactly the exchange buckets".into(),
        ));
    }
    let lp_c = part_positions(eds, buckets, pi, c, ell);
    let lp_cp = part_positions(eds, buckets, pi, c_prime, ell);
    let rp_c = part_positions(eds, buckets, pi, c, r);
    let rp_cp = part_positions(eds, buckets, pi, c_prime, r);
    for (positions, what) in [
        (&lp_c, "left part of the first cluster"),
        (&lp_cp, "left part of the second cluster"),
        (&rp_c, "right part of the first cluster"),
        (&rp_cp, "right part of the second cluster"),
    ] {
        if positions.last().unwrap() - positions[0] + 1 != positions.len() {
            return Err(Error::InvalidInput(format!("{what} is not contiguous")));
        }
    }
    if lp_c.last().unwrap() + 1 != lp_cp[0] || rp_c.last().unwrap() + 1 != rp_cp[0] {
        return Err(Error::InvalidInput(
            "cluster parts must be adjacent, first cluster leading".into(),
        ));
    }
    let num_l_c = dt_c.num_l() as usize;
    let num_l_cp = dt_cp.num_l() as usize;
    let num_r_c = dt_c.num_r() as usize;
    let num_r_cp = dt_cp.num_r() as usize;
    let mut positions = pi.positions().to_vec();
    for &v in &eds.base().clusters()[c] {
        let p = pi.position(v);
        if buckets.bucket_of(v) == Some(ell) {
            positions[v] = p + num_l_cp;
        } else if buckets.bucket_of(v) == Some(r) {
            positions[v] = p + num_r_cp;
        }
    }
    for &v in &eds.base().clusters()[c_prime] {
        let p = pi.position(v);
        if buckets.bucket_of(v) == Some(ell) {
            positions[v] = p - num_l_c;
        } else if buckets.bucket_of(v) == Some(r) {
            positions[v] = p - num_r_c;
        }
    }
    Ordering::new(positions)
}

fn ensure_no_worse(g: &Graph, before: &Ordering, after: &Ordering) -> Result<()> {
    if stretch(g, after)? > stretch(g, before)? {
        return Err(Error::Internal(
            "normalization increased the stretch".into(),
        ));
    }
    Ok(())
}

/// Swap whole clusters with neighborhood-preserving twins until every
/// S-vertex has both its leftmost and rightmost neighbor inside the extended
/// set. The swaps compose graph automorphisms into `pi`, so the stretch is
/// unchanged.
pub fn make_extremal(g: &Graph, eds: &ExtendedDeletionSet, pi: &Ordering) -> Result<Ordering> {
    if pi.len() != g.n() {
        return Err(Error::InvalidOrdering(
            "ordering does not match graph size".into(),
        ));
    }
    let s = eds.base().members();
    let mut cur = pi.clone();
    let guard = 2 * s.len() + 1;
    for _ in 0..guard {
        let extremes = extreme_vertices(g, s, &cur);
        let offender = extremes.iter().copied().find(|&v| !eds.contains(v));
        let Some(v) = offender else {
            debug_assert!(is_extremal(g, eds.base(), eds, &cur)?);
            return Ok(cur);
        };
        let c = eds
            .cluster_of(v)
            .ok_or_else(|| Error::Internal("extreme vertex outside S has no cluster".into()))?;
        let t = eds.type_of_cluster(c);
        let c_twin = eds.types()[t]
            .representatives
            .iter()
            .copied()
            .find(|&rep| {
                eds.base().clusters()[rep]
                    .iter()
                    .all(|u| !extremes.contains(u))
            })
            .ok_or_else(|| {
                Error::Internal("no representative twin free of extreme vertices".into())
            })?;
        cur = swap_clusters_by_type(g, eds, &cur, c, c_twin)?;
    }
    Err(Error::Internal(
        "extremality repair failed to terminate".into(),
    ))
}

/// All leftmost/rightmost neighbors of S-vertices under `pi`.
fn extreme_vertices(g: &Graph, s: &[usize], pi: &Ordering) -> Vec<usize> {
    let mut out = Vec::new();
    for &sv in s {
        let mut leftmost: Option<usize> = None;
        let mut rightmost: Option<usize> = None;
        for &u in g.neighbors(sv) {
            let p = pi.position(u);
            if leftmost.is_none_or(|l| p < pi.position(l)) {
                leftmost = Some(u);
            }
            if rightmost.is_none_or(|r| p > pi.position(r)) {
                rightmost = Some(u);
            }
        }
        out.extend(leftmost);
        out.extend(rightmost);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Swap the positions of two same-type clusters, matching vertices with equal
/// S-neighborhoods pairwise; this is an automorphism, so stretch is
/// preserved.
fn swap_clusters_by_type(
    g: &Graph,
    eds: &ExtendedDeletionSet,
    pi: &Ordering,
    c1: usize,
    c2: usize,
) -> Result<Ordering> {
    use crate::cluster::neighborhood_mask;
    let s = eds.base().members();
    let group = |cluster: usize| -> Vec<(u64, usize)> {
        let mut pairs: Vec<(u64, usize)> = eds.base().clusters()[cluster]
            .iter()
            .map(|&v| (neighborhood_mask(g, s, v), v))
            .collect();
        pairs.sort_unstable();
        pairs
    };
    let g1 = group(c1);
    let g2 = group(c2);
    if g1.len() != g2.len() || g1.iter().map(|p| p.0).ne(g2.iter().map(|p| p.0)) {
        return Err(Error::Internal(
            "cluster swap requires matching neighborhood profiles".into(),
        ));
    }
    let mut positions = pi.positions().to_vec();
    for (&(_, v1), &(_, v2)) in g1.iter().zip(&g2) {
        positions[v1] = pi.position(v2);
        positions[v2] = pi.position(v1);
    }
    Ordering::new(positions)
}
