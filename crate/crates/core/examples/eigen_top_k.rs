//! Top-k eigenspace of a random symmetric matrix, checked against the dense
//! decomposition.

use online_pca::eigen::{full_decompose, top_k, EigenConfig};
use online_pca::SymmetricMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> online_pca::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = SymmetricMatrix::from_lower_fn(40, |_, _| rng.random_range(-1.0..1.0));
    let r = top_k(&a, 3, &EigenConfig::default())?;
    let exact = full_decompose(&a).top_k_sum(3);
    println!(
        "iterative: {:.12} ({} iterations, converged: {})",
        r.rayleigh_value, r.iterations, r.converged
    );
    println!("dense:     {exact:.12}");
    println!("orthonormality error: {:.2e}", r.basis.orthonormality_error());
    Ok(())
}
