// Graph files on disk: write a population, then run the `estimate` and
// `scree` commands on the directory.

use std::fs::File;
use std::io::BufWriter;

use gre::cli::{estimate, scree, sidecar_path, DimArg, EstimateOptions, ScreeOptions};
use gre::io::{write_dense_file, write_edge_list, GraphFileFormat};
use gre::{sample_population, ContaminationSpec, Stream, WeightFamily, WsbmSpec};

pub fn run_example() -> gre::Result<()> {
    let dir = tempfile::tempdir()?;
    let dense = dir.path().join("dense");
    let edges = dir.path().join("edges");
    std::fs::create_dir_all(&dense)?;
    std::fs::create_dir_all(&edges)?;

    let spec = WsbmSpec::new(
        vec![vec![4.0, 2.0], vec![2.0, 7.0]],
        vec![0.5, 0.5],
        WeightFamily::Poisson,
    )?;
    let cont = ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.1)?;
    let pop = sample_population(&spec, &cont, 30, 6, Stream::new(1))?;
    for (t, g) in pop.graphs.iter().enumerate() {
        write_dense_file(&dense.join(format!("g{t}.tsv")), g)?;
        write_edge_list(BufWriter::new(File::create(edges.join(format!("g{t}.csv")))?), g)?;
    }

    let out = dir.path().join("estimate.tsv");
    let mut opts = EstimateOptions::new(edges, GraphFileFormat::EdgeListCsv, out.clone());
    opts.family = WeightFamily::Poisson;
    opts.q = 0.9;
    opts.dim = DimArg::Auto;
    opts.elbow = 1;
    let (est, sel) = estimate(&opts)?;
    println!("estimate {}x{} with d = {} (elbows {:?})", est.n(), est.n(), sel.chosen, sel.elbows);
    let sidecar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&out))?)
        .map_err(|e| gre::Error::Input(e.to_string()))?;
    println!("sidecar estimator {} chosen_dimension {}", sidecar["estimator"], sidecar["chosen_dimension"]);

    let eigs = scree(&ScreeOptions {
        graph_dir: dense,
        format: GraphFileFormat::DenseMatrixTsv,
        out: dir.path().join("scree.csv"),
        threads: None,
    })?;
    println!("normalized scree head: {:?}", eigs.iter().take(4).map(|s| s / eigs[0]).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
