use gre::model::{build_c, sample_graphs, GRAPH_TAG};
use gre::{
    build_p, sample_graph, sample_population, sample_tau, BlockAssignment, ContaminationSpec,
    Stream, SymmetricMatrix, WeightFamily, WsbmSpec,
};

fn two_block(family: WeightFamily) -> WsbmSpec {
    WsbmSpec::new(vec![vec![4.0, 2.0], vec![2.0, 7.0]], vec![0.5, 0.5], family).unwrap()
}

fn pair(v: f64) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(2, |i, j| if i == j { 0.0 } else { v }).unwrap()
}

fn edge_mean(p: f64, c: f64, eps: f64, family: WeightFamily, draws: usize, seed: u64) -> f64 {
    let graphs = sample_graphs(&pair(p), &pair(c), eps, family, draws, Stream::new(seed)).unwrap();
    graphs.iter().map(|g| g.get(0, 1)).sum::<f64>() / draws as f64
}

#[test]
fn balanced_block_fraction() {
    let tau = sample_tau(&two_block(WeightFamily::Exponential), 100_000, Stream::new(1)).unwrap();
    let frac = tau.labels().iter().filter(|&&l| l == 0).count() as f64 / 1e5;
    assert!((frac - 0.5).abs() < 0.01, "{frac}");
}

#[test]
fn single_block_labels() {
    let spec = WsbmSpec::new(vec![vec![3.0]], vec![1.0], WeightFamily::Exponential).unwrap();
    let tau = sample_tau(&spec, 5, Stream::new(9)).unwrap();
    assert_eq!(tau.labels(), &[0; 5]);
    let p = build_p(&spec, &tau).unwrap();
    assert!(p.as_slice().iter().all(|&v| v == 3.0));
}

#[test]
fn parameter_matrix_from_blocks() {
    let spec = two_block(WeightFamily::Exponential);
    let tau = BlockAssignment::new(vec![0, 0, 1], 2).unwrap();
    let p = build_p(&spec, &tau).unwrap();
    assert_eq!((p.get(0, 1), p.get(0, 2), p.get(1, 2)), (4.0, 2.0, 2.0));

    let swapped = BlockAssignment::new(vec![1, 0, 0], 2).unwrap();
    let q = build_p(&spec, &swapped).unwrap();
    assert_eq!(q, p.permuted(&[2, 0, 1]).unwrap());
}

#[test]
fn clean_exponential_mean() {
    let mean = edge_mean(4.0, 9.0, 0.0, WeightFamily::Exponential, 100_000, 2);
    assert!((mean / 4.0 - 1.0).abs() < 0.02, "{mean}");
}

#[test]
fn mixture_mean() {
    let mean = edge_mean(4.0, 9.0, 0.1, WeightFamily::Exponential, 100_000, 3);
    assert!((mean / 4.5 - 1.0).abs() < 0.02, "{mean}");
    // 4 standard errors of the mixture: variance 45 - 4.5^2.
    assert!((mean - 4.5).abs() < 4.0 * (24.75f64 / 1e5).sqrt());

    let mean = edge_mean(4.0, 9.0, 0.1, WeightFamily::Poisson, 100_000, 4);
    assert!((mean / 4.5 - 1.0).abs() < 0.02, "{mean}");
}

#[test]
fn almost_pure_contamination() {
    // epsilon must stay below 1; one ulp short of it is pure contamination
    // for any practical sample size.
    let eps = 1.0 - f64::EPSILON;
    let mean = edge_mean(4.0, 9.0, eps, WeightFamily::Exponential, 100_000, 5);
    assert!((mean / 9.0 - 1.0).abs() < 0.02, "{mean}");
    assert!(ContaminationSpec::new(vec![vec![9.0]], 1.0).is_err());
}

#[test]
fn paper_scale_population() {
    let spec = two_block(WeightFamily::Exponential);
    let cont = ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.1).unwrap();
    let pop = sample_population(&spec, &cont, 100, 20, Stream::new(6)).unwrap();
    assert_eq!(pop.graphs.len(), 20);
    for g in &pop.graphs {
        assert_eq!(g.n(), 100);
        assert!(g.is_hollow());
        assert!(g.min_value() >= 0.0);
        for (i, j, v) in g.upper_entries() {
            assert_eq!(v, g.get(j, i));
        }
    }
    let l = pop.tau.labels();
    assert_eq!(pop.c, build_c(&cont, &pop.tau).unwrap());
    for (i, j, v) in pop.p.upper_entries() {
        assert_eq!(v, spec.b()[l[i]][l[j]]);
    }
}

#[test]
fn population_graphs_are_sample_graph_calls() {
    let spec = two_block(WeightFamily::Poisson);
    let cont = ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.2).unwrap();
    let stream = Stream::new(8);
    let pop = sample_population(&spec, &cont, 12, 3, stream).unwrap();
    assert_eq!(pop.digest(), sample_population(&spec, &cont, 12, 3, stream).unwrap().digest());
    for (t, g) in pop.graphs.iter().enumerate() {
        assert!(g.as_slice().iter().all(|v| v.fract() == 0.0));
        let direct = sample_graph(&pop.p, &pop.c, 0.2, WeightFamily::Poisson, stream.child(GRAPH_TAG), t).unwrap();
        assert_eq!(g, &direct);
    }
    let single = sample_population(&spec, &cont, 12, 1, stream).unwrap();
    assert_eq!(single.graphs[0], pop.graphs[0]);
}
