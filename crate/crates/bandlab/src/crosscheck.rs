//! Cross-verification harnesses: run independent solvers against each other
//! on seeded instances and report any divergence with a reproducer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{bandwidth_bruteforce_with, bandwidth_decide_with, ExactConfig};
use crate::fpt::{fpt_decide, FptConfig};
use crate::gen::{generate_instance, GenSpec};
use crate::graph::stretch;
use crate::reduction::{
    build_reduction, check_structure_claims, cvd_witness, ubp_solve, witness_ordering,
    BinPackingInstance,
};

/// Ranges the solver cross-check draws instances from.
#[derive(Clone, Debug)]
pub struct CrosscheckSpec {
    pub min_n: usize,
    pub max_n: usize,
    pub max_cvd: usize,
    pub max_types: usize,
    pub clique_cap: usize,
}

impl Default for CrosscheckSpec {
    fn default() -> Self {
        CrosscheckSpec {
            min_n: 3,
            max_n: 8,
            max_cvd: 1,
            max_types: 2,
            clique_cap: 3,
        }
    }
}

/// Line-oriented report; `to_text` output is byte-stable for a fixed seed.
#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub instances: usize,
    pub divergences: usize,
    pub lines: Vec<String>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.divergences == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!(
            "checked {} instances, {} divergences\n",
            self.instances, self.divergences
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Run brute force, the window decision search, and the parameterized solver
/// on `count` seeded instances, comparing the three verdicts for every
/// bound. Divergences become report lines carrying a reproducer.
pub fn crosscheck(count: usize, seed: u64, spec: &CrosscheckSpec) -> Result<CrosscheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut divergences = 0usize;
    let exact_cfg = ExactConfig::default();
    let fpt_cfg = FptConfig::default();
    for idx in 0..count {
        let instance_seed: u64 = rng.gen();
        let n = rng.gen_range(spec.min_n..=spec.max_n);
        let cvd = rng.gen_range(0..=spec.max_cvd.min(n - 1));
        let budget = n - cvd;
        let types = rng.gen_range(1..=spec.max_types.min(budget));
        let gen_spec = GenSpec {
            n,
            cvd,
            clique_cap: spec.clique_cap,
            cluster_types: types,
        };
        let (g, set) = generate_instance(&gen_spec, instance_seed)?;
        let (opt, _) = bandwidth_bruteforce_with(&g, &exact_cfg)?;
        let mut bad: Option<String> = None;
        for b in 0..n {
            let brute = opt <= b;
            let (dp, dp_witness) = bandwidth_decide_with(&g, b, &exact_cfg)?;
            let (fpt, fpt_witness) = fpt_decide(&g, b, Some(&set), &fpt_cfg)?;
            if dp != brute || fpt != brute {
                bad = Some(format!(
                    "b={b} brute={brute} dp={dp} fpt={fpt} edges={:?}",
                    g.edges()
                ));
                break;
            }
            for w in [dp_witness, fpt_witness].into_iter().flatten() {
                let s = stretch(&g, &w)?;
                if s > b {
                    bad = Some(format!(
                        "b={b} witness has stretch {s} edges={:?}",
                        g.edges()
                    ));
                    break;
                }
            }
            if bad.is_some() {
                break;
            }
        }
        let tag = format!(
            "instance {idx:04} seed={instance_seed} n={n} m={} cvd={cvd} types={types}",
            g.edge_count()
        );
        match bad {
            Some(detail) => {
                divergences += 1;
                lines.push(format!("{tag}: DIVERGENCE {detail}"));
            }
            None => lines.push(format!("{tag}: ok (bandwidth {opt})")),
        }
    }
    Ok(CrosscheckReport {
        instances: count,
        divergences,
        lines,
    })
}

fn enumerate_multisets(max_sum: u64) -> Vec<Vec<u64>> {
    // Nondecreasing item sequences with sum in [1, max_sum].
    fn extend(prefix: &mut Vec<u64>, min: u64, left: u64, out: &mut Vec<Vec<u64>>) {
        for a in min..=left {
            prefix.push(a);
            out.push(prefix.clone());
            extend(prefix, a, left - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_sum, &mut out);
    out.sort();
    out
}

/// Sweep every item multiset with sum at most `max_sum` against `bins` bins:
/// the packing solver and the bandwidth decision on the constructed graph
/// must agree. Item sets whose total does not split evenly are skipped
/// (the construction is undefined for them). YES sides also verify the
/// explicit witness ordering and the structural claims on the solver's
/// witness.
pub fn crosscheck_reduction(max_sum: u64, bins: usize) -> Result<CrosscheckReport> {
    let mut lines = Vec::new();
    let mut divergences = 0usize;
    let mut instances = 0usize;
    let exact_cfg = ExactConfig::default();
    for items in enumerate_multisets(max_sum) {
        let inst = BinPackingInstance::new(items.clone(), bins)?;
        if inst.capacity().is_none() {
            continue;
        }
        instances += 1;
        let packing = ubp_solve(&inst)?;
        let (g, b, labels) = build_reduction(&inst)?;
        let witness_set = cvd_witness(&labels);
        let tag = format!(
            "items={items:?} k={bins} B={} b={b} n={}",
            labels.capacity(),
            g.n()
        );
        if witness_set.len() != 4 * bins {
            divergences += 1;
            lines.push(format!("{tag}: DIVERGENCE deletion witness size"));
            continue;
        }
        let (bandwidth_yes, solver_witness) = bandwidth_decide_with(&g, b, &exact_cfg)?;
        let packing_yes = packing.is_some();
        if packing_yes != bandwidth_yes {
            divergences += 1;
            lines.push(format!(
                "{tag}: DIVERGENCE packing={packing_yes} bandwidth={bandwidth_yes}"
            ));
            continue;
        }
        if let Some(parts) = &packing {
            let explicit = witness_ordering(&g, &labels, parts)?;
            if stretch(&g, &explicit)? > b {
                divergences += 1;
                lines.push(format!("{tag}: DIVERGENCE explicit witness exceeds bound"));
                continue;
            }
            if let Some(w) = &solver_witness {
                let report = check_structure_claims(&g, &labels, w, b)?;
                if !report.all_hold() {
                    divergences += 1;
                    let failed: Vec<&str> = report
                        .claims
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| c.name.as_str())
                        .collect();
                    lines.push(format!(
                        "{tag}: DIVERGENCE structure claims failed: {failed:?}"
                    ));
                    continue;
                }
            }
        }
        lines.push(format!(
            "{tag}: ok ({})",
            if packing_yes { "YES" } else { "NO" }
        ));
    }
    Ok(CrosscheckReport {
        instances,
        divergences,
        lines,
    })
}
