//! Matrix exponentiated gradient on a stream where one coordinate dominates.

use online_pca::learners::{default_meg_eta, MegLearner, OnlineLearner};
use online_pca::streams::{generate, StreamKind, StreamSpec};

fn main() -> online_pca::Result<()> {
    let (n, k, horizon) = (6, 2, 300);
    let weights = vec![5.0, 3.0, 1.0, 1.0, 1.0, 1.0];
    let spec = StreamSpec::new(StreamKind::DiagonalExpert { weights: Some(weights) }, n, horizon, 2);
    let mut meg = MegLearner::new(n, k, default_meg_eta(n, k, horizon))?;
    let mut total = 0.0;
    for x in generate(&spec)? {
        total += meg.predict()?.gain(&x);
        meg.update(&x)?;
    }
    let w = meg.parameter();
    println!("cumulative gain {total:.2}");
    println!("eigenvalues of W: {:?}", w.eigenvalues().iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
    Ok(())
}
