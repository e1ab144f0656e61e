use clique_spectra::enumeration::{
    argmax_energy, canonical_form, certificate, enumerate_clique_trees, evaluate, is_isomorphic,
    EnumSpec,
};
use clique_spectra::graph::{block_path_distances, build_clique_tree, BlockSpec, GraphFile};
use clique_spectra::spectra::{
    distance_det_exact, distance_eigen, distance_energy, distance_spectrum, inertia, perron_pair,
};
use clique_spectra::{distance_matrix, CliqueTree, DistanceMatrix, Inertia};
use num_traits::ToPrimitive;
use proptest::prelude::*;

const MAX_ORDER: usize = 12;

/// Grows a clique tree from a root size and `(size, vertex seed)` steps,
/// skipping steps that would exceed `max_order` vertices.
fn grow(root: usize, steps: &[(usize, usize)], max_order: usize) -> CliqueTree {
    let mut g = build_clique_tree(&[BlockSpec::root(root)]).unwrap();
    for &(size, seed) in steps {
        if g.vertex_count() + size - 1 > max_order {
            continue;
        }
        let v = seed % g.vertex_count();
        g = g.attach(size, v).unwrap();
    }
    g
}

fn clique_tree(max_order: usize) -> impl Strategy<Value = CliqueTree> {
    (2usize..=4, prop::collection::vec((2usize..=4, any::<usize>()), 0..8))
        .prop_map(move |(root, steps)| grow(root, &steps, max_order))
}

fn permuted(d: &DistanceMatrix, perm: &[usize]) -> DistanceMatrix {
    let n = d.order();
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| d.get(perm[i], perm[j])).collect())
        .collect();
    DistanceMatrix::from_rows(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn structure_is_valid(g in clique_tree(MAX_ORDER)) {
        g.validate().unwrap();
        let sizes = g.block_sizes();
        prop_assert_eq!(g.vertex_count(), sizes.iter().sum::<usize>() - (sizes.len() - 1));
    }

    #[test]
    fn bfs_matches_block_paths(g in clique_tree(MAX_ORDER)) {
        prop_assert_eq!(distance_matrix(&g), block_path_distances(&g));
    }

    #[test]
    fn distance_is_a_metric(g in clique_tree(MAX_ORDER)) {
        let d = distance_matrix(&g);
        let n = d.order();
        for u in 0..n {
            prop_assert_eq!(d.get(u, u), 0);
            for v in 0..n {
                prop_assert_eq!(d.get(u, v), d.get(v, u));
                prop_assert_eq!(d.get(u, v) == 1, g.is_adjacent(u, v));
                for w in 0..n {
                    prop_assert!(d.get(u, w) <= d.get(u, v) + d.get(v, w));
                }
            }
        }
    }

    #[test]
    fn spectrum_sums_to_trace(g in clique_tree(MAX_ORDER)) {
        let d = distance_matrix(&g);
        let s = distance_spectrum(&d).unwrap();
        let n = d.order() as f64;
        prop_assert!(s.sum().abs() <= 1e-9 * n * d.max_entry() as f64);
    }

    #[test]
    fn eigen_decomposition_reconstructs(g in clique_tree(MAX_ORDER)) {
        let d = distance_matrix(&g);
        let e = distance_eigen(&d).unwrap();
        let n = d.order();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n)
                    .map(|t| e.vectors[(i, t)] * e.spectrum.eigenvalues[t] * e.vectors[(j, t)])
                    .sum();
                worst = worst.max((r - d.get(i, j) as f64).abs());
            }
        }
        prop_assert!(worst <= 1e-8 * d.max_entry() as f64, "reconstruction error {}", worst);
    }

    #[test]
    fn exact_determinant_matches_spectrum(g in clique_tree(10)) {
        let d = distance_matrix(&g);
        let s = distance_spectrum(&d).unwrap();
        let product: f64 = s.eigenvalues.iter().product();
        let exact = distance_det_exact(&d).to_f64().unwrap();
        prop_assert!(exact != 0.0);
        prop_assert!((product - exact).abs() <= 1e-8 * exact.abs(), "{} vs {}", product, exact);
    }

    #[test]
    fn one_positive_eigenvalue_and_energy(g in clique_tree(MAX_ORDER)) {
        let d = distance_matrix(&g);
        let s = distance_spectrum(&d).unwrap();
        let n = d.order();
        prop_assert_eq!(inertia(&s), Inertia { positive: 1, zero: 0, negative: n - 1 });
        let e = distance_energy(&s);
        prop_assert!((e - 2.0 * s.largest()).abs() <= 1e-8 * e);
    }

    #[test]
    fn perron_root_agrees_with_jacobi(g in clique_tree(MAX_ORDER)) {
        let d = distance_matrix(&g);
        let (rho, v) = perron_pair(&d.to_matrix()).unwrap();
        let s = distance_spectrum(&d).unwrap();
        prop_assert!((rho - s.largest()).abs() <= 1e-9 * rho);
        prop_assert!(v.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn relabelling_preserves_isomorphism(
        g in clique_tree(MAX_ORDER),
        perm in Just(()).prop_flat_map(|_| Just((0..MAX_ORDER).collect::<Vec<_>>()).prop_shuffle()),
    ) {
        let d = distance_matrix(&g);
        let perm: Vec<usize> = perm.into_iter().filter(|&p| p < d.order()).collect();
        let q = permuted(&d, &perm);
        prop_assert_eq!(certificate(&d), certificate(&q));
        prop_assert!(is_isomorphic(&d, &q));
    }

    #[test]
    fn canonical_form_decides_isomorphism(a in clique_tree(7), b in clique_tree(7)) {
        let same = canonical_form(&a) == canonical_form(&b);
        prop_assert_eq!(same, is_isomorphic(&distance_matrix(&a), &distance_matrix(&b)));
    }

    #[test]
    fn graph_file_round_trip(g in clique_tree(MAX_ORDER)) {
        let json = serde_json::to_string(&GraphFile::from_tree(&g)).unwrap();
        let back = GraphFile::parse(&json).unwrap().build().unwrap();
        prop_assert_eq!(distance_matrix(&back), distance_matrix(&g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The class-deduplicated search finds the same maximum energy as the
    /// raw attachment stream, whatever order the blocks are listed in.
    #[test]
    fn argmax_matches_raw_stream(
        sizes in prop::collection::vec(2usize..=4, 1..=4).prop_shuffle(),
    ) {
        let spec = EnumSpec::multiset(&sizes);
        let raw_best = enumerate_clique_trees(&spec)
            .unwrap()
            .map(|g| evaluate(&g).unwrap().energy)
            .fold(f64::MIN, f64::max);
        let res = argmax_energy(&spec).unwrap();
        prop_assert!((res.winner_energy - raw_best).abs() <= 1e-9 * raw_best);

        let mut reversed = sizes.clone();
        reversed.reverse();
        let again = argmax_energy(&EnumSpec::multiset(&reversed)).unwrap();
        prop_assert_eq!(again.winner_energy, res.winner_energy);
    }
}
