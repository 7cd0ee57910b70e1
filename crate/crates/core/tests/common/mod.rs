//! Test oracles. Everything outside `reference` is independent of the crate under test.

#![allow(dead_code)]

pub mod reference;

/// Adaptive Simpson quadrature of `f` on `[a, b]`, split into `pieces` panels first.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let lo = a + h * k as f64;
            let hi = if k + 1 == pieces { b } else { lo + h };
            let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson(f, lo, hi, flo, fmid, fhi, whole, tol / pieces as f64, 50)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Unnormalized lower beta integral on `[0, x]` for `x <= 0.5`.
/// For `a < 1` substitutes `s = t^a` to remove the endpoint singularity.
fn lower_integral(x: f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if a < 1.0 {
        let top = x.powf(a);
        let f = move |s: f64| (1.0 - s.powf(1.0 / a)).powf(b - 1.0) / a;
        let rough = integrate(&f, 0.0, top, 8, f64::INFINITY);
        integrate(&f, 0.0, top, 64, rough.abs() * rel_tol)
    } else {
        let f = move |t: f64| {
            if t == 0.0 {
                if a == 1.0 { 1.0 } else { 0.0 }
            } else {
                t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0)
            }
        };
        let rough = integrate(&f, 0.0, x, 64, f64::INFINITY);
        integrate(&f, 0.0, x, 64, rough.abs() * rel_tol)
    }
}

/// Regularized incomplete beta by quadrature, normalized by its own full integral.
pub fn incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    const REL: f64 = 1e-13;
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let total = lower_integral(0.5, a, b, REL) + lower_integral(0.5, b, a, REL);
    if x <= 0.5 {
        lower_integral(x, a, b, REL) / total
    } else {
        1.0 - lower_integral(1.0 - x, b, a, REL) / total
    }
}

/// Clamped truncated-beta CDF built on the quadrature oracle.
pub fn thd_cdf(x: f64, a: f64, b: f64, lower: f64, upper: f64) -> f64 {
    if x <= lower {
        0.0
    } else if x >= upper {
        1.0
    } else {
        let il = incomplete_beta(lower, a, b);
        let ir = incomplete_beta(upper, a, b);
        (incomplete_beta(x, a, b) - il) / (ir - il)
    }
}

/// Beta density without any special functions other than the quadrature normalizer.
pub fn beta_density(x: f64, a: f64, b: f64) -> f64 {
    let total = lower_integral(0.5, a, b, 1e-13) + lower_integral(0.5, b, a, 1e-13);
    x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0) / total
}

/// Ten-value worked example with one gross outlier.
pub const WORKED_EXAMPLE: [f64; 10] =
    [-0.565, -0.106, -0.095, 0.363, 0.404, 0.633, 1.371, 1.512, 2.018, 100_000.0];

/// Deterministic xorshift generator for test inputs.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}
