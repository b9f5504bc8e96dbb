//! Seeded instance generation with a planted cluster deletion set.
//!
//! The generator plants a set S of the requested size, partitions the rest
//! into cliques drawn from a fixed number of templates (a template fixes the
//! clique size and, per clique vertex, which S vertices it sees), and wires
//! S internally at random. Draws whose clique number exceeds the cap or
//! whose realized template count collapses are rejected and retried, so
//! every returned instance satisfies the advertised invariants exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{cluster_types, ClusterDeletionSet};
use crate::error::{Error, Result};
use crate::graph::{clique_number, Graph};

/// Requested shape of a generated instance.
#[derive(Clone, Debug)]
pub struct GenSpec {
    /// Total vertex count.
    pub n: usize,
    /// Size of the planted deletion set.
    pub cvd: usize,
    /// Upper bound on the clique number of the whole graph.
    pub clique_cap: usize,
    /// Number of distinct cluster-types among the cliques outside S.
    pub cluster_types: usize,
}

const GEN_ATTEMPTS: usize = 500;

/// One clique template: per future clique member, the subset of S it sees.
type Template = Vec<u64>;

fn canonical_type(template: &Template) -> Vec<(u64, u32)> {
    let mut counts: Vec<(u64, u32)> = Vec::new();
    for &mask in template {
        match counts.iter_mut().find(|(m, _)| *m == mask) {
            Some((_, c)) => *c += 1,
            None => counts.push((mask, 1)),
        }
    }
    counts.sort_unstable();
    counts
}

/// Generate a graph together with its planted deletion set. Reproducible:
/// the same spec and seed always produce the same instance.
pub fn generate_instance(spec: &GenSpec, seed: u64) -> Result<(Graph, ClusterDeletionSet)> {
    let GenSpec {
        n,
        cvd,
        clique_cap,
        cluster_types: want_types,
    } = *spec;
    if cvd > n {
        return Err(Error::InvalidInput(
            "planted set cannot exceed the vertex count".into(),
        ));
    }
    if cvd > 63 {
        return Err(Error::InvalidInput(
            "planted set is limited to 63 vertices".into(),
        ));
    }
    let budget = n - cvd;
    if budget == 0 && want_types != 0 {
        return Err(Error::InvalidInput(
            "no vertices left outside S, yet cluster-types were requested".into(),
        ));
    }
    if budget > 0 && (want_types == 0 || want_types > budget) {
        return Err(Error::InvalidInput(format!(
            "cannot realize {want_types} cluster-types with {budget} vertices"
        )));
    }
    if clique_cap == 0 {
        return Err(Error::InvalidInput("clique cap must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..GEN_ATTEMPTS {
        // Distinct templates, then clusters drawn from them.
        let max_size = clique_cap.min(budget).max(1);
        let mut templates: Vec<Template> = Vec::with_capacity(want_types);
        let mut spent = 0usize;
        for t in 0..want_types {
            let still_needed = want_types - t - 1;
            let room = budget - spent - still_needed;
            let size = rng.gen_range(1..=max_size.min(room));
            let template: Template = (0..size)
                .map(|_| {
                    if cvd == 0 {
                        0
                    } else {
                        rng.gen_range(0u64..(1 << cvd))
                    }
                })
                .collect();
            if templates
                .iter()
                .any(|other| canonical_type(other) == canonical_type(&template))
            {
                continue 'attempt;
            }
            spent += size;
            templates.push(template);
        }
        let mut clusters: Vec<usize> = (0..want_types).collect();
        while spent < budget {
            let fitting: Vec<usize> = (0..want_types)
                .filter(|&t| templates[t].len() <= budget - spent)
                .collect();
            if fitting.is_empty() {
                continue 'attempt;
            }
            let t = fitting[rng.gen_range(0..fitting.len())];
            spent += templates[t].len();
            clusters.push(t);
        }
        // S occupies ids 0..cvd; clusters follow contiguously.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for s in 0..cvd {
            for s2 in s + 1..cvd {
                if rng.gen_bool(0.3) {
                    edges.push((s, s2));
                }
            }
        }
        let mut next = cvd;
        for &t in &clusters {
            let members: Vec<usize> = (next..next + templates[t].len()).collect();
            next += templates[t].len();
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    edges.push((u, v));
                }
            }
            for (slot, &v) in members.iter().enumerate() {
                let mask = templates[t][slot];
                for s in 0..cvd {
                    if mask & (1 << s) != 0 {
                        edges.push((s, v));
                    }
                }
            }
        }
        debug_assert_eq!(next, n);
        let g = Graph::new(n, &edges)?;
        if clique_number(&g)? > clique_cap {
            continue 'attempt;
        }
        let members: Vec<usize> = (0..cvd).collect();
        let set = ClusterDeletionSet::from_members(&g, &members)?;
        let realized = cluster_types(&g, &set)?;
        if realized.len() != want_types {
            continue 'attempt;
        }
        return Ok((g, set));
    }
    Err(Error::ResourceLimit(format!(
        "no instance matching {spec:?} found in {GEN_ATTEMPTS} attempts"
    )))
}
