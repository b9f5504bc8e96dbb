//! Acceptance audit for the whole toolkit: ten numbered checks, one test
//! per check. Each test prints a single `criterion N: PASS` line with the
//! evidence it gathered (run with `--nocapture` to see the lines); a
//! failing assertion marks the corresponding criterion FAIL.
//!
//! The checks deliberately re-derive their expectations with the dumbest
//! available method — exhaustive enumeration, explicit certificates —
//! instead of trusting the faster production code paths they audit.

use bandlab::cluster::{
    extended_deletion_set, is_cluster_graph, is_extremal, min_cluster_deletion_set,
    ClusterDeletionSet, ExtendedDeletionSet,
};
use bandlab::exact::{bandwidth_bruteforce, bandwidth_decide};
use bandlab::fpt::{
    check_pi1, check_pi2, check_pi3, enumerate_distribution_types, exchange_clusters, fpt_decide,
    normalize_pi1, normalize_pi2, normalize_pi3, BucketDistribution, DistributionType, FptConfig,
    SigmaContext,
};
use bandlab::gen::{generate_instance, GenSpec};
use bandlab::graph::stretch;
use bandlab::ilp::{Cmp, ConstraintSystem, VarId};
use bandlab::reduction::{
    build_reduction, check_structure_claims, cvd_witness, ubp_solve, witness_ordering,
    BinPackingInstance,
};
use bandlab::{Graph, Ordering};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(criterion: usize, evidence: &str) {
    println!("criterion {criterion}: PASS — {evidence}");
}

// ---------------------------------------------------------------------------
// Shared corpus: small instances with a planted deletion set, spanning
// deletion sets of size 0..=2, one or two cluster-types, up to ten
// vertices, cliques of at most three vertices, and an extended set small
// enough that the parameterized solver enumerates every ordering of it.

struct Curated {
    g: Graph,
    set: ClusterDeletionSet,
    eds: ExtendedDeletionSet,
}

fn curated_corpus() -> Vec<Curated> {
    let mut out = Vec::new();
    let combos: &[(usize, usize, usize, usize)] = &[
        // (cvd, cluster types, clique cap, instances wanted per n)
        (0, 1, 3, 2),
        (0, 2, 3, 2),
        (1, 1, 3, 7),
        (1, 2, 3, 7),
        (2, 1, 3, 7),
        (2, 2, 3, 7),
        // Pairs-of-pairs family: several same-type two-vertex cliques,
        // so exchange pairs among leftover clusters exist.
        (1, 1, 2, 5),
    ];
    for &(cvd, cluster_types, clique_cap, want) in combos {
        for n in 3..=10 {
            let spec = GenSpec {
                n,
                cvd,
                clique_cap,
                cluster_types,
            };
            let mut got = 0;
            for seed in 0..80u64 {
                if got == want {
                    break;
                }
                let Ok((g, set)) = generate_instance(&spec, seed) else {
                    continue;
                };
                let eds = extended_deletion_set(&g, &set).unwrap();
                if eds.k_prime() > 7 {
                    continue;
                }
                out.push(Curated { g, set, eds });
                got += 1;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 1: the two exact solvers agree on every graph with up to six
// vertices (all edge subsets) and on 500 seeded graphs with 7–9 vertices,
// for every bound.

fn assert_solvers_agree(g: &Graph, what: &str) {
    let (opt, wit) = bandwidth_bruteforce(g).unwrap();
    assert_eq!(
        stretch(g, &wit).unwrap(),
        opt,
        "criterion 1: FAIL — brute-force witness does not achieve its value on {what}"
    );
    for b in 0..g.n() {
        let (yes, w) = bandwidth_decide(g, b).unwrap();
        assert_eq!(
            yes,
            b >= opt,
            "criterion 1: FAIL — window search disagrees with brute force on {what} at b={b} (optimum {opt})"
        );
        if yes {
            let w = w.expect("decision yes must carry a witness");
            assert!(
                stretch(g, &w).unwrap() <= b,
                "criterion 1: FAIL — window-search witness exceeds b={b} on {what}"
            );
        }
    }
}

#[test]
fn criterion_01_exact_solvers_agree() {
    let mut graphs = 0usize;
    for n in 0..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u64..(1u64 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            assert_solvers_agree(&g, &format!("exhaustive n={n} mask={mask}"));
            graphs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    for round in 0..500 {
        let n = rng.gen_range(7..=9usize);
        let p = [0.2, 0.35, 0.5, 0.7][rng.gen_range(0..4)];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        assert_solvers_agree(&g, &format!("seeded round={round} n={n}"));
        graphs += 1;
    }
    pass(
        1,
        &format!("brute force and window search agree at every bound on {graphs} graphs"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: the parameterized solver agrees with brute force on a
// curated corpus of at least 200 instances, for every bound from 0 to n−1.

#[test]
fn criterion_02_parameterized_solver_agrees_on_curated_corpus() {
    let corpus = curated_corpus();
    assert!(
        corpus.len() >= 200,
        "criterion 2: FAIL — curated corpus has only {} instances",
        corpus.len()
    );
    let cfg = FptConfig::default();
    for (idx, inst) in corpus.iter().enumerate() {
        let (opt, _) = bandwidth_bruteforce(&inst.g).unwrap();
        for b in 0..inst.g.n() {
            let (yes, wit) = fpt_decide(&inst.g, b, Some(&inst.set), &cfg).unwrap();
            assert_eq!(
                yes,
                b >= opt,
                "criterion 2: FAIL — instance {idx} (n={}) disagrees with brute force at b={b} (optimum {opt})",
                inst.g.n()
            );
            if let Some(w) = wit {
                assert!(
                    stretch(&inst.g, &w).unwrap() <= b,
                    "criterion 2: FAIL — instance {idx} witness exceeds b={b}"
                );
            }
        }
    }
    pass(
        2,
        &format!(
            "parameterized solver matches brute force on {} curated instances at every bound",
            corpus.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: on at least 500 randomly drawn compatible orderings, the
// three-stage normalization never increases the stretch and its output
// passes all three property checks; explicit cluster exchanges change the
// cluster spreads by exactly the four advertised differences.

/// Distribute every remaining cluster's vertices into buckets; `pick`
/// chooses the enumerated type (an index into `types`) for each
/// `(cluster-type index, cluster)` pair, or `None` to abort.
fn fill_buckets(
    inst: &Curated,
    ctx: &SigmaContext,
    types: &[bandlab::fpt::EnumeratedType],
    mut pick: impl FnMut(usize, usize) -> Option<usize>,
) -> Option<Vec<Vec<usize>>> {
    let eds = &inst.eds;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); ctx.k_prime() + 1];
    for (ti, tc) in eds.types().iter().enumerate() {
        for &cluster in &tc.remaining {
            let et = &types[pick(ti, cluster)?];
            let mut vs_by_mask: Vec<(u64, Vec<usize>)> = Vec::new();
            for &v in &eds.base().clusters()[cluster] {
                let mask = bandlab::cluster::neighborhood_mask(&inst.g, eds.base().members(), v);
                match vs_by_mask.iter_mut().find(|(m, _)| *m == mask) {
                    Some((_, vs)) => vs.push(v),
                    None => vs_by_mask.push((mask, vec![v])),
                }
            }
            for (mask, vs) in vs_by_mask {
                let row = et
                    .dt
                    .rows()
                    .iter()
                    .find(|(m, _)| *m == mask)
                    .expect("type realizes the same cluster-type");
                let mut it = vs.into_iter();
                for (i, &cnt) in row.1.iter().enumerate() {
                    for _ in 0..cnt {
                        buckets[i].push(it.next().unwrap());
                    }
                }
            }
        }
    }
    Some(buckets)
}

/// Index the enumerated types by the cluster-type they realize.
fn types_by_kappa(
    eds: &ExtendedDeletionSet,
    types: &[bandlab::fpt::EnumeratedType],
) -> Vec<Vec<usize>> {
    let mut per = vec![Vec::new(); eds.types().len()];
    for (e, et) in types.iter().enumerate() {
        per[et.kappa_idx].push(e);
    }
    per
}

/// Draw a random compatible ordering for `inst`: a random ordering of the
/// extended set, a random legal distribution type per remaining cluster,
/// and shuffled bucket contents. Returns the context, the bucket
/// distribution, and the ordering.
fn random_compatible_ordering(
    inst: &Curated,
    rng: &mut ChaCha8Rng,
) -> Option<(SigmaContext, BucketDistribution, Ordering)> {
    let eds = &inst.eds;
    let mut order = eds.members().to_vec();
    order.shuffle(rng);
    let ctx = SigmaContext::new(&inst.g, eds, order).ok()?;
    let types = enumerate_distribution_types(eds, &ctx, 100_000).ok()?;
    let per_kappa = types_by_kappa(eds, &types);
    let buckets = fill_buckets(inst, &ctx, &types, |ti, _| {
        per_kappa[ti].choose(rng).copied()
    })?;
    let bd = BucketDistribution::new(&inst.g, eds, buckets).ok()?;
    let k = ctx.k_prime();
    let mut seq = Vec::new();
    for i in 0..=k {
        let mut bucket = bd.buckets()[i].to_vec();
        bucket.shuffle(rng);
        seq.extend(bucket);
        if i < k {
            seq.push(ctx.order()[i]);
        }
    }
    let pi = Ordering::from_sequence(&seq).ok()?;
    Some((ctx, bd, pi))
}

/// Rebuild `bd`'s ordering with bucket contents keyed so cluster `a`'s
/// vertices lead cluster `b`'s in every bucket, with all other clusters
/// after them.
fn pair_leading_ordering(
    inst: &Curated,
    ctx: &SigmaContext,
    bd: &BucketDistribution,
    a: usize,
    b: usize,
) -> Ordering {
    let clusters = inst.eds.base().clusters();
    let cluster_of = |v: usize| clusters.iter().position(|c| c.contains(&v)).unwrap();
    let rank = |v: usize| {
        let c = cluster_of(v);
        if c == a {
            0
        } else if c == b {
            1
        } else {
            2 + c
        }
    };
    let mut seq = Vec::new();
    for i in 0..=ctx.k_prime() {
        let mut bucket = bd.buckets()[i].to_vec();
        bucket.sort_by_key(|&v| (rank(v), v));
        seq.extend(bucket);
        if i < ctx.k_prime() {
            seq.push(ctx.order()[i]);
        }
    }
    Ordering::from_sequence(&seq).unwrap()
}

#[test]
fn criterion_03_normalization_chains_and_exchange_identities() {
    let corpus = curated_corpus();
    let rich: Vec<&Curated> = corpus
        .iter()
        .filter(|c| c.eds.types().iter().any(|t| !t.remaining.is_empty()))
        .collect();
    assert!(
        !rich.is_empty(),
        "criterion 3: FAIL — corpus has no instance with remaining clusters"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut chains = 0usize;
    let mut exchanges = 0usize;
    let mut cursor = 0usize;
    while chains < 500 {
        let inst = rich[cursor % rich.len()];
        cursor += 1;
        let Some((ctx, bd, pi)) = random_compatible_ordering(inst, &mut rng) else {
            continue;
        };
        let g = &inst.g;
        let eds = &inst.eds;
        let before = stretch(g, &pi).unwrap();
        let p1 = normalize_pi1(g, eds, &ctx, &bd, &pi).unwrap();
        let s1 = stretch(g, &p1).unwrap();
        assert!(
            s1 <= before,
            "criterion 3: FAIL — first normalization stage increased stretch ({before} -> {s1})"
        );
        assert!(
            check_pi1(g, eds, &ctx, &bd, &p1).unwrap().holds,
            "criterion 3: FAIL — first property does not hold after its stage"
        );
        let p2 = normalize_pi2(g, eds, &ctx, &bd, &p1).unwrap();
        let s2 = stretch(g, &p2).unwrap();
        assert!(
            s2 <= s1,
            "criterion 3: FAIL — second normalization stage increased stretch ({s1} -> {s2})"
        );
        assert!(
            check_pi2(g, eds, &ctx, &bd, &p2).unwrap().holds,
            "criterion 3: FAIL — second property does not hold after its stage"
        );
        let p3 = normalize_pi3(g, eds, &ctx, &bd, &p2).unwrap();
        let s3 = stretch(g, &p3).unwrap();
        assert!(
            s3 <= s2,
            "criterion 3: FAIL — third normalization stage increased stretch ({s2} -> {s3})"
        );
        for (what, check) in [
            ("first", check_pi1(g, eds, &ctx, &bd, &p3).unwrap().holds),
            ("second", check_pi2(g, eds, &ctx, &bd, &p3).unwrap().holds),
            ("third", check_pi3(g, eds, &ctx, &bd, &p3).unwrap().holds),
        ] {
            assert!(
                check,
                "criterion 3: FAIL — {what} property does not hold after the full chain"
            );
        }
        chains += 1;
    }

    // Exchange identities: pick an instance with at least two leftover
    // clusters of one type, deal the pair two types spanning the same two
    // extreme buckets, lay the pair adjacently, swap it, and compare the
    // vertex spreads against the four predicted differences.
    let eligible: Vec<&Curated> = rich
        .iter()
        .copied()
        .filter(|c| c.eds.types().iter().any(|t| t.remaining.len() >= 2))
        .collect();
    assert!(
        !eligible.is_empty(),
        "criterion 3: FAIL — corpus has no instance with an exchangeable cluster pair"
    );
    let mut cursor = 0usize;
    let mut attempts = 0usize;
    while exchanges < 100 && attempts < 10_000 {
        attempts += 1;
        let inst = eligible[cursor % eligible.len()];
        cursor += 1;
        let g = &inst.g;
        let eds = &inst.eds;
        let mut order = eds.members().to_vec();
        order.shuffle(&mut rng);
        let Ok(ctx) = SigmaContext::new(g, eds, order) else {
            continue;
        };
        let Ok(types) = enumerate_distribution_types(eds, &ctx, 100_000) else {
            continue;
        };
        let per_kappa = types_by_kappa(eds, &types);
        // Find a cluster pair and two same-extent spanning types for it.
        let mut choice: Option<(usize, usize, usize, usize)> = None;
        for (ti, tc) in eds.types().iter().enumerate() {
            if tc.remaining.len() < 2 {
                continue;
            }
            let mut by_extent: Vec<((usize, usize), Vec<usize>)> = Vec::new();
            for &e in &per_kappa[ti] {
                let dt = &types[e].dt;
                if dt.lb() == dt.rb() {
                    continue;
                }
                match by_extent.iter_mut().find(|(x, _)| *x == (dt.lb(), dt.rb())) {
                    Some((_, es)) => es.push(e),
                    None => by_extent.push(((dt.lb(), dt.rb()), vec![e])),
                }
            }
            if let Some((_, es)) = by_extent.choose(&mut rng) {
                let ta = *es.choose(&mut rng).unwrap();
                let tb = *es.choose(&mut rng).unwrap();
                choice = Some((tc.remaining[0], tc.remaining[1], ta, tb));
                break;
            }
        }
        let Some((a, b, ta, tb)) = choice else {
            continue;
        };
        let Some(buckets) = fill_buckets(inst, &ctx, &types, |ti, cluster| {
            if cluster == a {
                Some(ta)
            } else if cluster == b {
                Some(tb)
            } else {
                per_kappa[ti].choose(&mut rng).copied()
            }
        }) else {
            continue;
        };
        let Ok(bd) = BucketDistribution::new(g, eds, buckets) else {
            continue;
        };
        let lead = pair_leading_ordering(inst, &ctx, &bd, a, b);
        let dt_a = DistributionType::of_cluster(g, eds, &bd, a).unwrap();
        let dt_b = DistributionType::of_cluster(g, eds, &bd, b).unwrap();
        let (ell, r) = (dt_a.lb(), dt_a.rb());
        assert_eq!(
            (ell, r),
            (dt_b.lb(), dt_b.rb()),
            "pair was dealt one extent"
        );
        let swapped = exchange_clusters(g, eds, &ctx, &bd, &lead, a, b, ell, r).unwrap();
        let spread = |o: &Ordering, cluster: usize| {
            let vs = &eds.base().clusters()[cluster];
            let ps: Vec<usize> = vs.iter().map(|&v| o.position(v)).collect();
            (ps.iter().max().unwrap() - ps.iter().min().unwrap()) as i64
        };
        let (nl_a, nr_a) = (dt_a.num_l() as i64, dt_a.num_r() as i64);
        let (nl_b, nr_b) = (dt_b.num_l() as i64, dt_b.num_r() as i64);
        let (s_a, s_b) = (spread(&lead, a), spread(&lead, b));
        let (s_a2, s_b2) = (spread(&swapped, a), spread(&swapped, b));
        assert_eq!(
            s_a - s_a2,
            nl_b - nr_b,
            "criterion 3: FAIL — leading-cluster spread difference is off"
        );
        assert_eq!(
            s_b - s_b2,
            nr_a - nl_a,
            "criterion 3: FAIL — trailing-cluster spread difference is off"
        );
        assert_eq!(
            s_a - s_b2,
            nr_a - nr_b,
            "criterion 3: FAIL — cross spread difference (lead vs new trail) is off"
        );
        assert_eq!(
            s_b - s_a2,
            nl_b - nl_a,
            "criterion 3: FAIL — cross spread difference (trail vs new lead) is off"
        );
        let re = BucketDistribution::from_ordering(g, eds, &ctx, &swapped).unwrap();
        assert_eq!(
            re.buckets(),
            bd.buckets(),
            "criterion 3: FAIL — exchange changed the bucket distribution"
        );
        exchanges += 1;
    }
    assert!(
        exchanges >= 100,
        "criterion 3: FAIL — only {exchanges} exchange checks materialized"
    );
    pass(
        3,
        &format!(
            "{chains} normalization chains are monotone and complete; {exchanges} cluster exchanges match the four spread differences"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: on every curated instance with at most eight vertices, the
// minimum stretch over extremal orderings equals the overall minimum —
// established by enumerating all n! orderings.

fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_04_extremal_orderings_attain_the_optimum() {
    let corpus = curated_corpus();
    let mut instances = 0usize;
    for inst in corpus.iter().filter(|c| c.g.n() <= 8 && c.g.n() >= 1) {
        let (opt, _) = bandwidth_bruteforce(&inst.g).unwrap();
        let n = inst.g.n();
        let edges = inst.g.edges().to_vec();
        let mut pos = vec![0usize; n];
        let mut global_min = usize::MAX;
        let mut extremal_min = usize::MAX;
        for_each_permutation(n, |seq| {
            for (p, &v) in seq.iter().enumerate() {
                pos[v] = p;
            }
            let mut s = 0usize;
            for &(u, v) in &edges {
                s = s.max(pos[u].abs_diff(pos[v]));
            }
            global_min = global_min.min(s);
            if s < extremal_min {
                let pi = Ordering::from_sequence(seq).unwrap();
                if is_extremal(&inst.g, inst.eds.base(), &inst.eds, &pi).unwrap() {
                    extremal_min = s;
                }
            }
        });
        assert_eq!(
            global_min, opt,
            "criterion 4: FAIL — enumeration disagrees with brute force (n={n})"
        );
        assert_eq!(
            extremal_min, global_min,
            "criterion 4: FAIL — no extremal ordering attains the optimum (n={n})"
        );
        instances += 1;
    }
    assert!(
        instances >= 50,
        "criterion 4: FAIL — only {instances} instances with at most eight vertices"
    );
    pass(
        4,
        &format!(
            "extremal orderings attain the optimum on all {instances} small curated instances"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: the flagship constructed instance has bound 9 on 36
// vertices, and the explicit witness built from its packing has stretch
// exactly 9.

#[test]
fn criterion_05_flagship_construction_and_witness() {
    let inst = BinPackingInstance::new(vec![1, 2, 1], 2).unwrap();
    let (g, b, labels) = build_reduction(&inst).unwrap();
    assert_eq!(b, 9, "criterion 5: FAIL — bound is {b}, not 9");
    assert_eq!(g.n(), 36, "criterion 5: FAIL — size is {}, not 36", g.n());
    let partition = vec![vec![0, 2], vec![1]];
    let w = witness_ordering(&g, &labels, &partition).unwrap();
    let s = stretch(&g, &w).unwrap();
    assert_eq!(s, 9, "criterion 5: FAIL — witness stretch is {s}, not 9");
    pass(
        5,
        "items {1,2,1} into 2 bins: bound 9, 36 vertices, witness stretch exactly 9",
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: the smallest unpackable instance maps to bound 4 on 18
// vertices, and the bandwidth solver refutes that bound.

#[test]
fn criterion_06_unpackable_instance_is_refuted() {
    let inst = BinPackingInstance::new(vec![2], 2).unwrap();
    assert!(
        ubp_solve(&inst).unwrap().is_none(),
        "criterion 6: FAIL — packing solver accepts an oversized item"
    );
    let (g, b, _labels) = build_reduction(&inst).unwrap();
    assert_eq!(b, 4, "criterion 6: FAIL — bound is {b}, not 4");
    assert_eq!(g.n(), 18, "criterion 6: FAIL — size is {}, not 18", g.n());
    let (yes, _) = bandwidth_decide(&g, b).unwrap();
    assert!(
        !yes,
        "criterion 6: FAIL — bandwidth solver accepts bound {b} on the unpackable instance"
    );
    pass(
        6,
        "item {2} into 2 bins: bound 4, 18 vertices, refuted by the window search",
    );
}

// ---------------------------------------------------------------------------
// Criterion 7: over every item multiset with sum at most 4 and one or two
// bins (integral capacity), the packing solver and the bandwidth solver
// give the same answer on the constructed graphs.

#[test]
fn criterion_07_reduction_sweep_answers_agree() {
    let mut instances = 0usize;
    for bins in 1..=2usize {
        let report = bandlab::crosscheck::crosscheck_reduction(4, bins).unwrap();
        assert!(
            report.passed(),
            "criterion 7: FAIL — sweep with {bins} bin(s) diverged:\n{}",
            report.to_text()
        );
        instances += report.instances;
    }
    pass(
        7,
        &format!("packing and bandwidth answers agree on all {instances} constructed instances"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: the advertised deletion set of every constructed graph has
// exactly 4k vertices and leaves a cluster graph; on the two smallest
// graphs a minimum deletion set is no larger.

fn small_multisets(max_sum: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u64>, u64, u64)> = vec![(Vec::new(), 0, 1)];
    while let Some((items, sum, min_next)) = stack.pop() {
        if !items.is_empty() {
            out.push(items.clone());
        }
        for next in min_next..=(max_sum - sum) {
            let mut more = items.clone();
            more.push(next);
            stack.push((more, sum + next, next));
        }
    }
    out
}

#[test]
fn criterion_08_deletion_witness_sizes() {
    let mut checked = 0usize;
    let mut smallest: Vec<(usize, Graph, usize)> = Vec::new();
    for bins in 1..=2usize {
        for items in small_multisets(4) {
            let inst = BinPackingInstance::new(items.clone(), bins).unwrap();
            if inst.capacity().is_none() {
                continue;
            }
            let (g, _b, labels) = build_reduction(&inst).unwrap();
            let witness = cvd_witness(&labels);
            assert_eq!(
                witness.len(),
                4 * bins,
                "criterion 8: FAIL — witness size is {} for {} bin(s), items {items:?}",
                witness.len(),
                bins
            );
            let keep: Vec<usize> = (0..g.n()).filter(|v| !witness.contains(v)).collect();
            let (rest, _) = g.induced(&keep).unwrap();
            assert!(
                is_cluster_graph(&rest),
                "criterion 8: FAIL — deleting the witness leaves a non-cluster graph (items {items:?}, {bins} bin(s))"
            );
            smallest.push((g.n(), g, 4 * bins));
            checked += 1;
        }
    }
    smallest.sort_by_key(|(n, _, _)| *n);
    for (n, g, bound) in smallest.iter().take(2) {
        let min_set = min_cluster_deletion_set(g).unwrap();
        assert!(
            min_set.members().len() <= *bound,
            "criterion 8: FAIL — minimum deletion set ({}) exceeds 4k={bound} on the {n}-vertex graph",
            min_set.members().len()
        );
    }
    pass(
        8,
        &format!(
            "all {checked} constructed graphs: witness has 4k vertices and leaves a cluster graph; minima confirmed on the two smallest"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: on 1000 random bounded-integer systems (at most six
// variables, domains of at most five values, with indicator and guarded
// rows), the feasibility solver agrees with exhaustive domain enumeration,
// and every satisfying assignment re-verifies.

fn random_small_system(rng: &mut ChaCha8Rng) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new();
    let nvars = rng.gen_range(1..=6usize);
    let mut vars: Vec<VarId> = Vec::new();
    for i in 0..nvars {
        let v = if rng.gen_bool(0.4) {
            sys.add_binary(&format!("v{i}")).unwrap()
        } else {
            let lo = rng.gen_range(-2..=1i64);
            let hi = lo + rng.gen_range(0..=4i64);
            sys.add_var(&format!("v{i}"), lo, hi).unwrap()
        };
        vars.push(v);
    }
    for _ in 0..rng.gen_range(1..=4usize) {
        let mut terms = Vec::new();
        for &v in &vars {
            if rng.gen_bool(0.7) {
                let c = rng.gen_range(-3..=3i64);
                if c != 0 {
                    terms.push((c, v));
                }
            }
        }
        if terms.is_empty() {
            terms.push((1, vars[0]));
        }
        let cmp = match rng.gen_range(0..3) {
            0 => Cmp::Le,
            1 => Cmp::Ge,
            _ => Cmp::Eq,
        };
        sys.add_linear(&terms, cmp, rng.gen_range(-5..=10)).unwrap();
    }
    let binaries: Vec<VarId> = vars.iter().copied().filter(|&v| sys.is_binary(v)).collect();
    let nonneg: Vec<VarId> = vars
        .iter()
        .copied()
        .filter(|&v| sys.bounds(v).0 >= 0)
        .collect();
    for _ in 0..rng.gen_range(0..=2usize) {
        if binaries.is_empty() || nonneg.is_empty() {
            break;
        }
        let y = *binaries.choose(rng).unwrap();
        let x = *nonneg.choose(rng).unwrap();
        if y == x {
            continue;
        }
        sys.add_indicator(y, x).unwrap();
    }
    for _ in 0..rng.gen_range(0..=2usize) {
        if binaries.is_empty() {
            break;
        }
        let y = *binaries.choose(rng).unwrap();
        let mut terms = Vec::new();
        for &v in &vars {
            if rng.gen_bool(0.6) {
                let c = rng.gen_range(-2..=3i64);
                if c != 0 {
                    terms.push((c, v));
                }
            }
        }
        if terms.is_empty() {
            terms.push((1, y));
        }
        sys.add_guarded(y, &terms, rng.gen_range(-3..=8)).unwrap();
    }
    sys
}

fn exhaustively_satisfiable(sys: &ConstraintSystem) -> bool {
    fn rec(sys: &ConstraintSystem, acc: &mut Vec<i64>) -> bool {
        if acc.len() == sys.num_vars() {
            return sys.verify_assignment(acc).unwrap().is_empty();
        }
        let (lo, hi) = sys.bounds(VarId(acc.len()));
        for v in lo..=hi {
            acc.push(v);
            if rec(sys, acc) {
                acc.pop();
                return true;
            }
            acc.pop();
        }
        false
    }
    rec(sys, &mut Vec::new())
}

#[test]
fn criterion_09_feasibility_solver_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    let mut sat = 0usize;
    for round in 0..1000 {
        let sys = random_small_system(&mut rng);
        let expected = exhaustively_satisfiable(&sys);
        let got = sys.solve_feasibility().unwrap();
        assert_eq!(
            got.is_some(),
            expected,
            "criterion 9: FAIL — solver disagrees with enumeration on system {round}"
        );
        if let Some(asg) = got {
            sat += 1;
            assert!(
                sys.verify_assignment(asg.values()).unwrap().is_empty(),
                "criterion 9: FAIL — solver answer fails re-verification on system {round}"
            );
        }
    }
    pass(
        9,
        &format!("feasibility solver matches exhaustive enumeration on 1000 systems ({sat} satisfiable, all re-verified)"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 10: every stretch-respecting ordering our solvers produce on
// the constructed graphs passes the structural analysis and yields a
// packing with equal bin sums.

#[test]
fn criterion_10_solver_orderings_yield_packings() {
    let mut checked = 0usize;
    for bins in 1..=2usize {
        for items in small_multisets(4) {
            let inst = BinPackingInstance::new(items.clone(), bins).unwrap();
            let Some(capacity) = inst.capacity() else {
                continue;
            };
            let (g, b, labels) = build_reduction(&inst).unwrap();
            let mut orderings: Vec<Ordering> = Vec::new();
            if let (true, Some(w)) = bandwidth_decide(&g, b).unwrap() {
                orderings.push(w);
            }
            if let Some(packing) = ubp_solve(&inst).unwrap() {
                let w = witness_ordering(&g, &labels, &packing).unwrap();
                let mut rev: Vec<usize> = (0..g.n()).collect();
                rev.sort_by_key(|&v| std::cmp::Reverse(w.position(v)));
                orderings.push(Ordering::from_sequence(&rev).unwrap());
                orderings.push(w);
            }
            for o in &orderings {
                assert!(
                    stretch(&g, o).unwrap() <= b,
                    "criterion 10: FAIL — produced ordering exceeds the bound (items {items:?}, {bins} bin(s))"
                );
                let report = check_structure_claims(&g, &labels, o, b).unwrap();
                assert!(
                    report.all_hold(),
                    "criterion 10: FAIL — structural analysis rejects a valid ordering (items {items:?}, {bins} bin(s)): {:?}",
                    report
                        .claims
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| &c.name)
                        .collect::<Vec<_>>()
                );
                let packing = report.partition.expect("holding report carries a packing");
                assert_eq!(packing.len(), bins);
                for bin in &packing {
                    let total: u64 = bin.iter().map(|&j| labels.items()[j]).sum();
                    assert_eq!(
                        total, capacity,
                        "criterion 10: FAIL — extracted packing has unequal bin sums (items {items:?}, {bins} bin(s))"
                    );
                }
                checked += 1;
            }
        }
    }
    assert!(
        checked >= 20,
        "criterion 10: FAIL — only {checked} orderings were available to analyze"
    );
    pass(
        10,
        &format!("{checked} solver orderings all pass the structural analysis and extract equal-sum packings"),
    );
}
