//! Property suites, one per documented invariant. Each entry pairs a
//! generator with a check and a case budget; `run` executes one entry with a
//! fixed-seed runner so results are reproducible.

use std::collections::{BTreeSet, HashMap};

use erode::io::{load_distance_matrix_csv, load_points_csv, read_result_csv, write_result_csv};
use erode::{
    augment_rnn, build_exact_knn, build_exact_rnn, build_nndescent_knn, build_reverse, cluster,
    clustering_accuracy, erode, graph_recall, mark_outliers, pairwise_f1, propagate,
    prune_knn_to_rnn, rho_star_trace, static_density, ClusterConfig, Dataset, GraphSource,
    GroundTruth, KnnGraph, Labeling, Metric, Neighbor, NnDescentParams, RnnGraph,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::Rng;

use super::*;

type Check = Result<(), TestCaseError>;
type Cloud = Vec<Vec<f64>>;

const E: Metric = Metric::Euclidean;

pub struct Suite {
    pub name: &'static str,
    pub cases: u32,
    run: fn(&mut TestRunner) -> Result<(), String>,
}

macro_rules! suite {
    ($name:ident, $cases:expr, $strategy:expr) => {
        Suite {
            name: stringify!($name),
            cases: $cases,
            run: |runner| runner.run(&$strategy, $name).map_err(|e| e.to_string()),
        }
    };
}

pub fn suites() -> Vec<Suite> {
    vec![
        suite!(density_matches_double_loop, 128, instance(60)),
        suite!(
            density_monotone_in_radius,
            128,
            (any_cloud(50), 0.0..4.0f64, 0.0..4.0f64)
        ),
        suite!(density_follows_permutation, 64, permuted(any_cloud(50))),
        suite!(exact_graph_is_symmetric, 128, instance(60)),
        suite!(double_reverse_is_identity, 96, (instance(50), 1usize..8)),
        suite!(pruned_full_knn_is_rnn, 96, instance(40)),
        suite!(augmentation_keeps_neighbors, 96, (instance(50), 1usize..10)),
        suite!(nndescent_recall_uniform_plane, 6, any::<u64>()),
        suite!(erosion_matches_rescan, 128, instance(80)),
        suite!(
            erosion_matches_rescan_asymmetric,
            64,
            (instance(60), 1usize..8)
        ),
        suite!(rho_star_never_increases, 96, instance(60)),
        suite!(batches_hold_the_minimum, 96, instance(60)),
        suite!(
            chain_interior_is_deeper,
            64,
            (1usize..40, 1.2..1.8f64, 0u64..1000)
        ),
        suite!(levels_follow_permutation, 64, permuted(any_cloud(50))),
        suite!(founders_are_peaks, 96, instance(80)),
        suite!(founders_had_no_visited_neighbor, 96, instance(80)),
        suite!(
            labels_follow_tie_preserving_permutation,
            64,
            permuted(cloud(50))
        ),
        suite!(
            augmentation_never_adds_clusters,
            96,
            (instance(60), 1usize..8)
        ),
        suite!(
            mark_outliers_is_idempotent,
            128,
            (prop::collection::vec(0u32..8, 1..60), 0usize..6)
        ),
        suite!(scores_ignore_relabeling, 128, scored_pair(50)),
        suite!(
            single_cluster_accuracy_floor,
            96,
            prop::collection::vec(-1i64..5, 1..60)
        ),
        suite!(accuracy_matches_exhaustive_search, 128, small_assignment()),
        suite!(result_file_round_trips, 48, (instance(50), 1usize..4)),
        suite!(loaders_reject_malformed_tables, 96, malformed()),
    ]
}

/// Runs one suite by name and returns the number of cases it generated.
pub fn run(name: &str) -> Result<u32, String> {
    let suite = suites()
        .into_iter()
        .find(|s| s.name == name)
        .unwrap_or_else(|| panic!("no suite named {name}"));
    let mut runner = TestRunner::new(Config {
        cases: suite.cases,
        failure_persistence: None,
        ..Config::default()
    });
    (suite.run)(&mut runner).map(|()| suite.cases)
}

// ---- generators

pub fn cloud(max_n: usize) -> impl Strategy<Value = Cloud> {
    (1usize..=3).prop_flat_map(move |dim| {
        prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), 1..=max_n)
    })
}

/// Half-integer coordinates: duplicates and equal distances are common.
pub fn gridded_cloud(max_n: usize) -> impl Strategy<Value = Cloud> {
    (1usize..=2).prop_flat_map(move |dim| {
        prop::collection::vec(
            prop::collection::vec((-8i32..8).prop_map(|v| v as f64 / 2.0), dim),
            1..=max_n,
        )
    })
}

pub fn any_cloud(max_n: usize) -> impl Strategy<Value = Cloud> {
    prop_oneof![3 => cloud(max_n), 1 => gridded_cloud(max_n)]
}

pub fn instance(max_n: usize) -> impl Strategy<Value = (Cloud, f64)> {
    (any_cloud(max_n), 0.0..3.0f64)
}

fn permuted(
    points: impl Strategy<Value = Cloud>,
) -> impl Strategy<Value = (Cloud, f64, Vec<usize>)> {
    (points, 0.0..3.0f64).prop_flat_map(|(pts, r)| {
        let n = pts.len();
        (
            Just(pts),
            Just(r),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
}

fn scored_pair(max_n: usize) -> impl Strategy<Value = (Vec<u32>, Vec<i64>, u64)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(0u32..6, n),
            prop::collection::vec(-1i64..5, n),
            any::<u64>(),
        )
    })
}

/// At most four regular clusters and two outliers, so exhaustive matching
/// stays cheap.
fn small_assignment() -> impl Strategy<Value = (Vec<u32>, Vec<i64>)> {
    (1usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(1u32..=4, n),
            prop::collection::vec(0..n, 0..=2),
            prop::collection::vec(-1i64..4, n),
        )
            .prop_map(|(mut pred, outliers, truth)| {
                for i in outliers {
                    pred[i] = 0;
                }
                (pred, truth)
            })
    })
}

#[derive(Debug, Clone)]
pub enum Defect {
    Ragged,
    NotANumber(&'static str),
    NonSquare,
}

fn malformed() -> impl Strategy<Value = (Vec<Vec<f64>>, Defect, usize)> {
    let defect = prop_oneof![
        Just(Defect::Ragged),
        Just(Defect::NotANumber("NaN")),
        Just(Defect::NotANumber("inf")),
        Just(Defect::NotANumber("-inf")),
        Just(Defect::NotANumber("1.2.3")),
        Just(Defect::NonSquare),
    ];
    (2usize..12, 2usize..5).prop_flat_map(move |(n, dim)| {
        (
            prop::collection::vec(prop::collection::vec(0.0..9.0f64, dim), n),
            defect.clone(),
            0..n,
        )
    })
}

// ---- helpers

fn data(points: &Cloud) -> Dataset {
    Dataset::from_rows(points).unwrap()
}

fn graph(points: &Cloud, r: f64) -> RnnGraph {
    build_exact_rnn(&data(points), E, r).unwrap()
}

fn knn_graph(points: &Cloud, r: f64, k: usize) -> RnnGraph {
    let k = k.min(points.len() - 1);
    let knn = build_exact_knn(&data(points), E, k).unwrap();
    prune_knn_to_rnn(&knn, r).unwrap()
}

fn id_sets(g: &RnnGraph) -> Vec<BTreeSet<usize>> {
    g.lists()
        .iter()
        .map(|l| l.iter().map(|e| e.id).collect())
        .collect()
}

fn same_partition(a: &[u32], b: &[u32]) -> bool {
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    a.iter()
        .zip(b)
        .all(|(&x, &y)| *fwd.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x)
}

fn visit_rank(levels: &erode::BoundaryLevels) -> Vec<usize> {
    let mut rank = vec![0; levels.len()];
    for (pos, i) in levels.visit_order().enumerate() {
        rank[i] = pos;
    }
    rank
}

// ---- core model

fn density_matches_double_loop((pts, r): (Cloud, f64)) -> Check {
    prop_assert_eq!(
        static_density(&data(&pts), E, r).unwrap(),
        brute_density(&pts, r)
    );
    Ok(())
}

fn density_monotone_in_radius((pts, a, b): (Cloud, f64, f64)) -> Check {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let d = data(&pts);
    let small = static_density(&d, E, lo).unwrap();
    let large = static_density(&d, E, hi).unwrap();
    prop_assert!(small.iter().zip(&large).all(|(s, l)| s <= l));
    Ok(())
}

fn density_follows_permutation((pts, r, perm): (Cloud, f64, Vec<usize>)) -> Check {
    let moved: Cloud = perm.iter().map(|&p| pts[p].clone()).collect();
    let rho = static_density(&data(&pts), E, r).unwrap();
    let rho_moved = static_density(&data(&moved), E, r).unwrap();
    for (k, &p) in perm.iter().enumerate() {
        prop_assert_eq!(rho_moved[k], rho[p]);
    }
    Ok(())
}

// ---- neighbor graphs

fn exact_graph_is_symmetric((pts, r): (Cloud, f64)) -> Check {
    let g = graph(&pts, r);
    for i in 0..g.len() {
        for e in g.neighbors(i) {
            prop_assert!(g
                .neighbors(e.id)
                .iter()
                .any(|b| b.id == i && b.dist == e.dist));
        }
    }
    Ok(())
}

fn double_reverse_is_identity(((pts, r), k): ((Cloud, f64), usize)) -> Check {
    let graphs = if pts.len() > 1 {
        vec![graph(&pts, r), knn_graph(&pts, r, k)]
    } else {
        vec![graph(&pts, r)]
    };
    for g in graphs {
        let rev = build_reverse(&g);
        prop_assert!(rev.is_reverse_of(&g));
        // Re-wrap the reverse lists as a graph and reverse once more.
        let lists = (0..rev.len())
            .map(|i| {
                rev.referrers(i)
                    .iter()
                    .map(|&j| Neighbor::new(j as usize, 0.0))
                    .collect()
            })
            .collect();
        let as_graph = RnnGraph::from_lists(lists, r, GraphSource::Approximate).unwrap();
        let back = build_reverse(&as_graph);
        let want = id_sets(&g);
        for (i, set) in want.iter().enumerate() {
            let got: BTreeSet<usize> = back.referrers(i).iter().map(|&j| j as usize).collect();
            prop_assert_eq!(&got, set);
        }
    }
    Ok(())
}

fn pruned_full_knn_is_rnn((pts, r): (Cloud, f64)) -> Check {
    if pts.len() < 2 {
        return Ok(());
    }
    let d = data(&pts);
    let full = build_exact_knn(&d, E, pts.len() - 1).unwrap();
    let pruned = prune_knn_to_rnn(&full, r).unwrap();
    let exact = graph(&pts, r);
    prop_assert_eq!(pruned.lists(), exact.lists());
    Ok(())
}

fn augmentation_keeps_neighbors(((pts, r), k): ((Cloud, f64), usize)) -> Check {
    if k >= pts.len() {
        return Ok(());
    }
    let g = graph(&pts, r);
    let aug = augment_rnn(&g, &data(&pts), E, k, None).unwrap();
    for i in 0..g.len() {
        if g.neighbors(i).len() < k {
            prop_assert_eq!(aug.neighbors(i).len(), k);
            let kept: BTreeSet<usize> = aug.neighbors(i).iter().map(|e| e.id).collect();
            prop_assert!(g.neighbors(i).iter().all(|e| kept.contains(&e.id)));
        } else {
            prop_assert_eq!(aug.neighbors(i), g.neighbors(i));
        }
    }
    Ok(())
}

fn nndescent_recall_uniform_plane(seed: u64) -> Check {
    let pts = uniform_points(&mut rng(seed), 1000, 2, 1.0);
    let d = data(&pts);
    let params = NnDescentParams {
        seed,
        ..NnDescentParams::with_k(10)
    };
    let approx = build_nndescent_knn(&d, E, params).unwrap();
    let exact: KnnGraph = build_exact_knn(&d, E, 10).unwrap();
    let recall = graph_recall(&approx, &exact).unwrap();
    prop_assert!(recall >= 0.90, "recall {}", recall);
    Ok(())
}

// ---- erosion

fn erosion_matches_rescan((pts, r): (Cloud, f64)) -> Check {
    let g = graph(&pts, r);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    let (batches, level) = naive_erosion(&ids(g.lists()));
    prop_assert_eq!(levels.batches(), batches.as_slice());
    prop_assert_eq!(levels.levels(), level.as_slice());
    Ok(())
}

fn erosion_matches_rescan_asymmetric(((pts, r), k): ((Cloud, f64), usize)) -> Check {
    if pts.len() < 2 {
        return Ok(());
    }
    let g = knn_graph(&pts, r, k);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    let (batches, _) = naive_erosion(&ids(g.lists()));
    prop_assert_eq!(levels.batches(), batches.as_slice());
    Ok(())
}

fn rho_star_never_increases((pts, r): (Cloud, f64)) -> Check {
    let g = graph(&pts, r);
    let trace = rho_star_trace(&g, &build_reverse(&g)).unwrap();
    for w in trace.windows(2) {
        for (before, after) in w[0].densities.iter().zip(&w[1].densities) {
            if let (Some(b), Some(a)) = (before, after) {
                prop_assert!(a <= b);
            }
        }
    }
    Ok(())
}

fn batches_hold_the_minimum((pts, r): (Cloud, f64)) -> Check {
    let g = graph(&pts, r);
    let trace = rho_star_trace(&g, &build_reverse(&g)).unwrap();
    for step in &trace {
        let m = step.min_density;
        for (i, rho) in step.densities.iter().enumerate() {
            let Some(rho) = *rho else { continue };
            if step.batch.binary_search(&i).is_ok() {
                prop_assert_eq!(rho, m);
            } else {
                prop_assert!(rho > m);
            }
        }
    }
    Ok(())
}

fn chain_interior_is_deeper((m, r, seed): (usize, f64, u64)) -> Check {
    // Unit spacing with a little jitter: only consecutive points are within r.
    let mut rng = rng(seed);
    let pts: Cloud = (0..m)
        .map(|i| vec![i as f64 + rng.random_range(-0.05..0.05), 0.0])
        .collect();
    let g = graph(&pts, r);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    for i in 0..m {
        prop_assert_eq!(levels.level(i) as usize, i.min(m - 1 - i) + 1);
    }
    Ok(())
}

fn levels_follow_permutation((pts, r, perm): (Cloud, f64, Vec<usize>)) -> Check {
    let moved: Cloud = perm.iter().map(|&p| pts[p].clone()).collect();
    let a = erode_points(&pts, r);
    let b = erode_points(&moved, r);
    for (k, &p) in perm.iter().enumerate() {
        prop_assert_eq!(b.level(k), a.level(p));
    }
    Ok(())
}

fn erode_points(pts: &Cloud, r: f64) -> erode::BoundaryLevels {
    let g = graph(pts, r);
    erode(&g, &build_reverse(&g)).unwrap()
}

// ---- propagation

fn founders_are_peaks((pts, r): (Cloud, f64)) -> Check {
    let g = graph(&pts, r);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    let lab = propagate(&levels, &g).unwrap();
    for (i, &l) in lab.labels().iter().enumerate() {
        let founder = lab.seeds()[l as usize - 1];
        prop_assert!(levels.level(founder) >= levels.level(i));
    }
    Ok(())
}

fn founders_had_no_visited_neighbor((pts, r): (Cloud, f64)) -> Check {
    let g = graph(&pts, r);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    let lab = propagate(&levels, &g).unwrap();
    let rank = visit_rank(&levels);
    let lonely: Vec<usize> = levels
        .visit_order()
        .filter(|&i| g.neighbors(i).iter().all(|e| rank[e.id] > rank[i]))
        .collect();
    prop_assert_eq!(lonely.len(), lab.cluster_count());
    prop_assert_eq!(lonely.as_slice(), lab.seeds());
    Ok(())
}

fn labels_follow_tie_preserving_permutation((pts, r, shuffle): (Cloud, f64, Vec<usize>)) -> Check {
    let n = pts.len();
    let g = graph(&pts, r);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    let lab = propagate(&levels, &g).unwrap();

    // Scatter samples randomly, then reorder each level's members so their
    // relative id order survives.
    let mut slots: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, &s) in shuffle.iter().enumerate() {
        slots.entry(levels.level(i)).or_default().push(s);
    }
    let mut new_pos = vec![0; n];
    for (l, mut positions) in slots {
        positions.sort_unstable();
        let members = (0..n).filter(|&i| levels.level(i) == l);
        for (i, p) in members.zip(positions) {
            new_pos[i] = p;
        }
    }
    let mut moved = vec![Vec::new(); n];
    for (i, &p) in new_pos.iter().enumerate() {
        moved[p] = pts[i].clone();
    }
    let g2 = graph(&moved, r);
    let levels2 = erode(&g2, &build_reverse(&g2)).unwrap();
    let lab2 = propagate(&levels2, &g2).unwrap();
    for (i, &p) in new_pos.iter().enumerate() {
        prop_assert_eq!(lab2.label(p), lab.label(i));
    }
    Ok(())
}

fn augmentation_never_adds_clusters(((pts, r), k): ((Cloud, f64), usize)) -> Check {
    if k >= pts.len() {
        return Ok(());
    }
    let g = graph(&pts, r);
    let levels = erode(&g, &build_reverse(&g)).unwrap();
    let aug = augment_rnn(&g, &data(&pts), E, k, None).unwrap();
    let plain = propagate(&levels, &g).unwrap();
    let wide = propagate(&levels, &aug).unwrap();
    prop_assert!(wide.cluster_count() <= plain.cluster_count());
    Ok(())
}

fn mark_outliers_is_idempotent((labels, min): (Vec<u32>, usize)) -> Check {
    let lab = Labeling::from_labels(&labels);
    let once = mark_outliers(&lab, min);
    prop_assert_eq!(mark_outliers(&once, min), once);
    Ok(())
}

// ---- evaluation

fn scores_ignore_relabeling((pred, truth, seed): (Vec<u32>, Vec<i64>, u64)) -> Check {
    if truth.iter().filter(|&&t| t >= 0).count() < 2 {
        return Ok(());
    }
    let mut rng = rng(seed);
    let mut names: Vec<u32> = (1..=5).collect();
    names.shuffle(&mut rng);
    let mut classes: Vec<i64> = (10..15).collect();
    classes.shuffle(&mut rng);
    let pred2: Vec<u32> = pred
        .iter()
        .map(|&p| if p == 0 { 0 } else { names[p as usize - 1] })
        .collect();
    let truth2: Vec<i64> = truth
        .iter()
        .map(|&t| if t < 0 { t } else { classes[t as usize] })
        .collect();
    let (a, b) = (Labeling::from_labels(&pred), Labeling::from_labels(&pred2));
    let (s, t) = (GroundTruth::new(truth), GroundTruth::new(truth2));
    prop_assert_eq!(
        clustering_accuracy(&a, &s).unwrap(),
        clustering_accuracy(&b, &t).unwrap()
    );
    prop_assert_eq!(pairwise_f1(&a, &s).unwrap(), pairwise_f1(&b, &t).unwrap());
    Ok(())
}

fn single_cluster_accuracy_floor(truth: Vec<i64>) -> Check {
    let scored: Vec<i64> = truth.iter().copied().filter(|&t| t >= 0).collect();
    if scored.is_empty() {
        return Ok(());
    }
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for t in &scored {
        *counts.entry(*t).or_default() += 1;
    }
    let largest = *counts.values().max().unwrap() as f64 / scored.len() as f64;
    let acc = clustering_accuracy(
        &Labeling::from_labels(&vec![1u32; truth.len()]),
        &GroundTruth::new(truth),
    )
    .unwrap();
    prop_assert!(acc >= largest - 1e-12);
    Ok(())
}

fn accuracy_matches_exhaustive_search((pred, truth): (Vec<u32>, Vec<i64>)) -> Check {
    if truth.iter().all(|&t| t < 0) {
        return Ok(());
    }
    let options: Vec<Option<i64>> = truth.iter().map(|&t| (t >= 0).then_some(t)).collect();
    let got = clustering_accuracy(&Labeling::from_labels(&pred), &GroundTruth::new(truth)).unwrap();
    let want = permutation_accuracy(&pred, &options);
    prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    Ok(())
}

// ---- files

fn result_file_round_trips(((pts, r), min): ((Cloud, f64), usize)) -> Check {
    let res = cluster(&data(&pts), E, &ClusterConfig::new(r).min_cluster_size(min)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.csv");
    write_result_csv(&res.labeling, &res.levels, res.density(), &path).unwrap();
    let back = read_result_csv(&path).unwrap();
    prop_assert_eq!(&back.labeling, &res.labeling);
    prop_assert_eq!(&back.levels, &res.levels);
    Ok(())
}

fn loaders_reject_malformed_tables((rows, defect, at): (Vec<Vec<f64>>, Defect, usize)) -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut lines: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    let header = format!(
        "{}\n",
        (0..rows[0].len())
            .map(|c| format!("x{c}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    let render = |lines: &[Vec<String>]| {
        let body: Vec<String> = lines.iter().map(|l| l.join(",")).collect();
        format!("{header}{}\n", body.join("\n"))
    };
    let path = dir.path().join("table.csv");
    std::fs::write(&path, render(&lines)).unwrap();
    prop_assert!(load_points_csv(&path).is_ok());

    match defect {
        Defect::Ragged => {
            lines[at].pop();
            std::fs::write(&path, render(&lines)).unwrap();
            prop_assert!(load_points_csv(&path).is_err());
            prop_assert!(load_distance_matrix_csv(&path).is_err());
        }
        Defect::NotANumber(token) => {
            let col = at % lines[at].len();
            lines[at][col] = token.to_string();
            std::fs::write(&path, render(&lines)).unwrap();
            prop_assert!(load_points_csv(&path).is_err());
            prop_assert!(load_distance_matrix_csv(&path).is_err());
        }
        Defect::NonSquare => {
            // A valid point table is a distance matrix only if it is square.
            if rows.len() != rows[0].len() {
                prop_assert!(load_distance_matrix_csv(&path).is_err());
            }
        }
    }
    Ok(())
}
