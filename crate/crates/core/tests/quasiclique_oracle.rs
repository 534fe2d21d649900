mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scpm_core::{
    graph::full_view, induced_view, AttributedGraph, Engine, Gamma, GraphView, QuasiCliqueParams,
    SearchStrategy,
};
use support::oracle::{self, MaskGraph};

const GAMMAS: [(u64, u64); 3] = [(1, 2), (3, 5), (1, 1)];
const MIN_SIZES: [usize; 2] = [3, 4];

fn params(num: u64, den: u64, min_size: usize) -> QuasiCliqueParams {
    QuasiCliqueParams::new(Gamma::new(num, den).unwrap(), min_size).unwrap()
}

/// Compares every engine entry point on `view` against brute force over
/// the view's members. `mask` is the same graph relabelled to 0..m.
fn check_view(view: &GraphView, mask: &MaskGraph, num: u64, den: u64, min_size: usize) {
    let p = params(num, den, min_size);
    let members = view.members();
    let mut expected: Vec<Vec<u32>> = oracle::maximal_quasi_cliques(mask, num, den, min_size);
    expected.sort_by(|a, b| oracle::reference_order(mask, a, b));
    let to_global = |q: &Vec<u32>| q.iter().map(|&i| members[i as usize]).collect::<Vec<_>>();
    let expected_global: Vec<Vec<u32>> = expected.iter().map(to_global).collect();

    for strategy in [SearchStrategy::DepthFirst, SearchStrategy::BreadthFirst] {
        let mut engine = Engine::new(p, strategy);
        let got = engine.enumerate_maximal(view).unwrap();
        let got_sets: Vec<Vec<u32>> = got.iter().map(|q| q.vertices().to_vec()).collect();
        assert_eq!(got_sets, expected_global, "{strategy} γ={num}/{den} min={min_size} {:?}", view.edges());
        for (q, local) in got.iter().zip(&expected) {
            let (dn, dd) = oracle::density_parts(mask, local);
            let d = q.density();
            assert_eq!(d.numer() * dd, dn * d.denom());
        }

        let mut covered: Vec<u32> = expected_global.iter().flatten().copied().collect();
        covered.sort_unstable();
        covered.dedup();
        assert_eq!(engine.covered_vertices(view).unwrap(), covered, "cover {strategy}");
    }
    for k in [1usize, 2, 5] {
        let top = Engine::new(p, SearchStrategy::DepthFirst).top_k(view, k).unwrap();
        let top_sets: Vec<Vec<u32>> = top.iter().map(|q| q.vertices().to_vec()).collect();
        let prefix: Vec<Vec<u32>> = expected_global.iter().take(k).cloned().collect();
        assert_eq!(top_sets, prefix, "top-{k} γ={num}/{den} min={min_size} {:?}", view.edges());
    }
}

fn check_graph(n: usize, edges: &[(u32, u32)]) {
    let g = AttributedGraph::from_tokens::<&str>(n, edges, &[]).unwrap();
    let view = full_view(&g);
    let mask = MaskGraph::new(n, edges);
    for &(num, den) in &GAMMAS {
        for &min_size in &MIN_SIZES {
            check_view(&view, &mask, num, den, min_size);
        }
    }
}

fn all_pairs(n: usize) -> Vec<(u32, u32)> {
    (0..n as u32).flat_map(|a| (a + 1..n as u32).map(move |b| (a, b))).collect()
}

#[test]
fn every_graph_up_to_six_vertices() {
    for n in 1..=6 {
        let pairs = all_pairs(n);
        for bits in 0u32..1 << pairs.len() {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            check_graph(n, &edges);
        }
    }
}

#[test]
fn random_eight_vertex_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let pairs = all_pairs(8);
    for i in 0..2_000 {
        let p = [0.3, 0.5, 0.7, 0.85][i % 4];
        let edges: Vec<_> = pairs.iter().copied().filter(|_| rng.random::<f64>() < p).collect();
        check_graph(8, &edges);
    }
}

#[test]
fn induced_views_of_larger_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..150 {
        let n = 30;
        let p = [0.3, 0.5, 0.7][i % 3];
        let edges: Vec<_> = all_pairs(n).into_iter().filter(|_| rng.random::<f64>() < p).collect();
        let g = AttributedGraph::from_tokens::<&str>(n, &edges, &[]).unwrap();
        let members: Vec<u32> = (0..n as u32).filter(|_| rng.random::<f64>() < 0.45).take(14).collect();
        let view = induced_view(&g, &members).unwrap();
        let local: Vec<(u32, u32)> = view
            .edges()
            .iter()
            .map(|&(a, b)| (view.position(a).unwrap() as u32, view.position(b).unwrap() as u32))
            .collect();
        let mask = MaskGraph::new(members.len(), &local);
        for &(num, den) in &GAMMAS {
            for &min_size in &MIN_SIZES {
                check_view(&view, &mask, num, den, min_size);
            }
        }
    }
}

#[test]
fn unusual_gammas_and_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs = all_pairs(9);
    for i in 0..300 {
        let edges: Vec<_> = pairs.iter().copied().filter(|_| rng.random::<f64>() < 0.6).collect();
        let g = AttributedGraph::from_tokens::<&str>(9, &edges, &[]).unwrap();
        let view = full_view(&g);
        let mask = MaskGraph::new(9, &edges);
        let (num, den) = [(1, 3), (2, 3), (7, 10), (9, 10), (1, 10)][i % 5];
        let min_size = [2, 5, 6][i % 3];
        check_view(&view, &mask, num, den, min_size);
    }
}
