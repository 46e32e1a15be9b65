// MLE versus MLqE on a single contaminated edge, next to the population
// fixed point the MLqE converges to.

use gre::model::WeightFamily;
use gre::rng::Stream;
use gre::{mle_entry, mlqe_exponential, population_mlq_root, EdgeSample, QParam};
use rand_distr::{Distribution, Exp};
use rand::Rng;

pub fn run_example() -> gre::Result<()> {
    let (p, c, eps) = (4.0, 20.0, 0.2);
    let mut rng = Stream::new(11).rng();
    let clean = Exp::new(1.0 / p).expect("positive rate");
    let dirty = Exp::new(1.0 / c).expect("positive rate");
    let draws: Vec<f64> = (0..20_000)
        .map(|_| if rng.random::<f64>() < eps { dirty.sample(&mut rng) } else { clean.sample(&mut rng) })
        .collect();
    let sample = EdgeSample::new(&draws)?;

    println!("true P = {p}, contamination mean C = {c}, epsilon = {eps}");
    println!("MLE  = {:.4}", mle_entry(sample, WeightFamily::Exponential));
    for q in [0.95, 0.9, 0.8, 0.7] {
        let q = QParam::new(q)?;
        println!(
            "q = {:.2}: MLqE = {:.4}, population root = {:.4}",
            q.value(),
            mlqe_exponential(sample, q)?,
            population_mlq_root(p, c, eps, q)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
