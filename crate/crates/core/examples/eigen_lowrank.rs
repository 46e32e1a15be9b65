// Eigendecomposition, best rank-d approximation and spectral embedding of a
// small symmetric matrix.

use gre::{ase_embed, eig_sym, lowrank_d, SymmetricMatrix};

pub fn run_example() -> gre::Result<()> {
    // Two-block parameter matrix including its diagonal, so exactly rank 2.
    let blocks = [0, 0, 0, 1, 1, 1];
    let b = [[4.0, 2.0], [2.0, 7.0]];
    let p = SymmetricMatrix::from_upper_fn(6, |i, j| b[blocks[i]][blocks[j]])?;

    let eig = eig_sym(&p)?;
    println!("eigenvalues: {:?}", eig.values());

    let p2 = lowrank_d(&p, 2)?;
    let err = p2.as_slice().iter().zip(p.as_slice()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let tail: f64 = eig.values()[2..].iter().map(|s| s * s).sum::<f64>().sqrt();
    println!("rank-2 error {err:.6}, discarded eigenvalue norm {tail:.6}");
    assert!((err - tail).abs() < 1e-9 * (1.0 + tail));

    let x = ase_embed(&p2, 2)?;
    for i in 0..x.n() {
        println!("vertex {i}: {:?}", x.row(i));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
