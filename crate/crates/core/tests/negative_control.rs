use online_pca::harness::verify::{sparse_bound, VerifyOptions};

/// An absurd noise level must break the sparse bound, so the check is not vacuous.
#[test]
fn huge_noise_breaks_sparse_bound() {
    let r = sparse_bound(&VerifyOptions {
        filter: None,
        sparse_sigma2: Some(1e3),
    });
    println!("{r}");
    assert!(!r.passed, "{r}");
}
