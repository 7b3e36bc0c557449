//! Largest eigenvalue of GOE noise as the dimension grows.

use online_pca::perturb::estimate_max_eigenvalue;

fn main() -> online_pca::Result<()> {
    for n in [10, 25, 50, 100, 200] {
        let mean = estimate_max_eigenvalue(n, 1.0, 100, 7)?;
        println!("n={n:<4} E[λ_max] ≈ {mean:7.3}   √(2n) = {:7.3}", (2.0 * n as f64).sqrt());
    }
    Ok(())
}
