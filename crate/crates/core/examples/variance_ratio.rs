// How much the low-rank step shrinks the variance at a single edge as the
// number of vertices grows.

use gre::eval::{variance_ratio_probe, VarianceProbe};
use gre::{ContaminationSpec, DimMode, PipelineConfig, QParam, WeightFamily, WsbmSpec};

pub fn run_example() -> gre::Result<()> {
    let probe = VarianceProbe {
        spec: WsbmSpec::new(
            vec![vec![4.0, 2.0], vec![2.0, 7.0]],
            vec![0.5, 0.5],
            WeightFamily::Exponential,
        )?,
        contamination: ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.1)?,
        q: Some(QParam::new(0.9)?),
        ns: vec![20, 40],
        m: 10,
        replicates: 30,
        seed: 17,
        pipeline: PipelineConfig::new(QParam::MLE, DimMode::Fixed(2)),
    };
    for r in variance_ratio_probe(&probe)? {
        println!(
            "n = {:>3}, edge {:?}: mle pair {:.4}, mlqe pair {:.4}",
            r.n,
            r.edge,
            r.mle_ratio,
            r.mlqe_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
