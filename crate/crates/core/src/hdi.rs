//! Highest-density interval of fixed width for a beta distribution.
//!
//! The beta density is unimodal, so the interval `[L, L + D]` of maximal mass
//! either hugs a border (mode at 0 or 1) or satisfies `f(L) = f(L + D)`. In the
//! interior case `t ↦ f(t) - f(t + D)` is increasing on the bracket
//! `[max(0, M - D), min(M, 1 - D)]`, so bisection always finds the root.

use crate::error::{Error, Result};
use crate::special::{ln_beta_pdf, regularized_incomplete_beta, BetaParams};

/// Slack for the `α <= 1` / `β <= 1` comparisons and the full-width check.
pub const SHAPE_EPS: f64 = 1e-9;

/// Upper bound on the bisection bracket width at exit.
pub const ROOT_TOLERANCE: f64 = 1e-9;

// Enough halvings to resolve roots down to the subnormal range.
const MAX_BISECTIONS: usize = 1100;

/// Location of the beta mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// `α <= 1` and `β <= 1`: the density has no unique mode.
    Degenerate,
    /// Mode at 0.
    LeftBorder,
    /// Mode at 1.
    RightBorder,
    /// Mode `(α - 1) / (α + β - 2)` strictly inside `(0, 1)`.
    Interior(f64),
}

impl Mode {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Mode::Degenerate => None,
            Mode::LeftBorder => Some(0.0),
            Mode::RightBorder => Some(1.0),
            Mode::Interior(m) => Some(m),
        }
    }
}

pub fn beta_mode(params: BetaParams) -> Mode {
    let (a, b) = (params.alpha(), params.beta());
    let a_low = a < 1.0 + SHAPE_EPS;
    let b_low = b < 1.0 + SHAPE_EPS;
    match (a_low, b_low) {
        (true, true) => Mode::Degenerate,
        (true, false) => Mode::LeftBorder,
        (false, true) => Mode::RightBorder,
        (false, false) => Mode::Interior((a - 1.0) / (a + b - 2.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HdiCase {
    Degenerate,
    LeftBorder,
    RightBorder,
    Middle,
    FullRange,
}

impl HdiCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            HdiCase::Degenerate => "degenerate",
            HdiCase::LeftBorder => "left_border",
            HdiCase::RightBorder => "right_border",
            HdiCase::Middle => "middle",
            HdiCase::FullRange => "full_range",
        }
    }
}

impl core::fmt::Display for HdiCase {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `[lower, upper]` with `upper = lower + width`.
///
/// For [`HdiCase::Degenerate`] the bounds are NaN: any interval is as good as
/// any other, and callers handle that case themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HdiInterval {
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub mode: Option<f64>,
    pub case: HdiCase,
    /// Set when the root bracket failed to change sign (floating-point
    /// degeneracy at extreme shapes) and a bracket endpoint was returned.
    pub bracket_fallback: bool,
}

impl HdiInterval {
    pub fn is_degenerate(&self) -> bool {
        self.case == HdiCase::Degenerate
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

pub fn beta_hdi(params: BetaParams, width: f64) -> Result<HdiInterval> {
    if !(width.is_finite() && width > 0.0 && width <= 1.0) {
        return Err(Error::Domain { what: "beta_hdi width", value: width });
    }
    let mode = beta_mode(params);
    let interval = |lower: f64, upper: f64, case| HdiInterval {
        lower,
        upper,
        width,
        mode: mode.value(),
        case,
        bracket_fallback: false,
    };
    let m = match mode {
        Mode::Degenerate => return Ok(interval(f64::NAN, f64::NAN, HdiCase::Degenerate)),
        Mode::LeftBorder => return Ok(interval(0.0, width, HdiCase::LeftBorder)),
        Mode::RightBorder => return Ok(interval(1.0 - width, 1.0, HdiCase::RightBorder)),
        Mode::Interior(_) if width > 1.0 - SHAPE_EPS => {
            return Ok(interval(0.0, 1.0, HdiCase::FullRange))
        }
        Mode::Interior(m) => m,
    };

    let lo = (m - width).max(0.0);
    let hi = m.min(1.0 - width);
    let (lower, fallback) = solve_equal_density(params, width, lo, hi)?;
    let mut out = interval(lower, lower + width, HdiCase::Middle);
    out.bracket_fallback = fallback;
    Ok(out)
}

/// Sign of `f(t) - f(t + D)`, compared in log space so that densities that
/// underflow in linear space still order correctly.
fn density_gap(params: BetaParams, width: f64, t: f64) -> Result<f64> {
    let left = ln_beta_pdf(t, params)?;
    let right = ln_beta_pdf((t + width).min(1.0), params)?;
    Ok(match (left == f64::NEG_INFINITY, right == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (true, false) => -1.0,
        (false, true) => 1.0,
        (false, false) => left - right,
    })
}

fn solve_equal_density(params: BetaParams, width: f64, lo: f64, hi: f64) -> Result<(f64, bool)> {
    let g_lo = density_gap(params, width, lo)?;
    let g_hi = density_gap(params, width, hi)?;
    if g_lo == 0.0 {
        return Ok((lo, false));
    }
    if g_hi == 0.0 {
        return Ok((hi, false));
    }
    if g_lo > 0.0 || g_hi < 0.0 {
        let mass = |t: f64| -> Result<f64> {
            Ok(regularized_incomplete_beta((t + width).min(1.0), params)?
                - regularized_incomplete_beta(t, params)?)
        };
        let pick = if mass(lo)? >= mass(hi)? { lo } else { hi };
        return Ok((pick, true));
    }

    let (mut lo, mut hi) = (lo, hi);
    // Bisect to the floating-point limit; ROOT_TOLERANCE is the contract.
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = density_gap(params, width, mid)?;
        if g == 0.0 {
            return Ok((mid, false));
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(hi - lo <= ROOT_TOLERANCE);
    Ok((0.5 * (lo + hi), false))
}
