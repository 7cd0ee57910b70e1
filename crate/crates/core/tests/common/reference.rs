//! The published algorithm, transcribed line by line. Shares the crate's
//! incomplete beta and HDI so that only the index mapping is under test.

use thd_core::{beta_hdi, regularized_incomplete_beta, BetaParams};

/// Direct transcription of the published algorithm: clamp to the HDI, take
/// CDF differences over iL..iR and place them at positions iL+1..iR.
pub fn thd_weights(n: usize, p: f64, width: f64) -> Vec<f64> {
    let (a, b) = ((n + 1) as f64 * p, (n + 1) as f64 * (1.0 - p));
    let params = BetaParams::new(a, b).unwrap();
    let h = beta_hdi(params, width).unwrap();
    let (l, r) = (h.lower, h.upper);
    let pbeta = |x: f64| regularized_incomplete_beta(x, params).unwrap();
    let (cl, cr) = (pbeta(l), pbeta(r));
    let cdf = |x: f64| (pbeta(x.clamp(l, r)) - cl) / (cr - cl);
    let il = (l * n as f64).floor() as usize;
    let ir = (r * n as f64).ceil() as usize;
    let cdfs: Vec<f64> = (il..=ir).map(|i| cdf(i as f64 / n as f64)).collect();
    let mut w = vec![0.0; n];
    for (k, pair) in cdfs.windows(2).enumerate() {
        w[il + k] = pair[1] - pair[0];
    }
    w
}
