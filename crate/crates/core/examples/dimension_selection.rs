// Elbow-based choice of the embedding dimension from a scree.

use gre::pipeline::{marchette_diagonal, profile_loglik};
use gre::{
    eig_sym, estimate_matrix, sample_population, zhu_ghodsi_elbows, ContaminationSpec, QParam,
    Stream, WeightFamily, WsbmSpec,
};

pub fn run_example() -> gre::Result<()> {
    let scree = [10.0, 9.5, 9.0, 3.0, 2.8, 2.7, 0.5, 0.4, 0.3, 0.2];
    let sel = zhu_ghodsi_elbows(&scree, 3)?;
    println!("synthetic scree elbows: {:?}", sel.elbows);
    let best = (1..scree.len())
        .map(|s| (s, profile_loglik(&scree, s)))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    println!("first split {} with profile log-likelihood {:.3}", best.0, best.1);

    let spec = WsbmSpec::new(
        vec![vec![4.0, 2.0, 1.0], vec![2.0, 7.0, 2.0], vec![1.0, 2.0, 9.0]],
        vec![0.3, 0.3, 0.4],
        WeightFamily::Exponential,
    )?;
    let cont = ContaminationSpec::new(vec![vec![9.0; 3]; 3], 0.0)?;
    let pop = sample_population(&spec, &cont, 90, 30, Stream::new(5))?;
    let mean = estimate_matrix(&pop.graphs, QParam::MLE, WeightFamily::Exponential)?;
    let eig = eig_sym(&marchette_diagonal(&mean))?;
    println!("top of the scree: {:?}", &eig.values()[..6]);
    let sel = zhu_ghodsi_elbows(eig.values(), 3)?;
    println!("elbows {:?}, chosen d = {}", sel.elbows, sel.chosen);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
