//! Standard normal distribution function, its logarithm and its inverse.
//!
//! `Φ` is evaluated through the complementary error function of `libm`
//! (a port of the fdlibm rational approximations), which keeps full relative
//! accuracy in both tails. The inverse starts from the `erfc⁻¹` of `statrs`
//! and is polished with one Halley step against `Φ`.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function Φ(x).
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(x), accurate when it is small.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Mills ratio (1 − Φ(t))/φ(t) for t ≥ 5 by its continued fraction
/// t + 1/(t + 2/(t + 3/(t + ...))), evaluated bottom-up.
fn mills_ratio_tail(t: f64) -> f64 {
    let mut acc = t;
    for k in (1..=80).rev() {
        acc = t + k as f64 / acc;
    }
    1.0 / acc
}

/// ln Φ(x), finite for every finite x.
pub fn ln_cdf(x: f64) -> f64 {
    if x < -5.0 {
        -0.5 * x * x - LN_SQRT_2PI + mills_ratio_tail(-x).ln()
    } else if x > 5.0 {
        (-sf(x)).ln_1p()
    } else {
        cdf(x).ln()
    }
}

/// ln(1 − Φ(x)).
pub fn ln_sf(x: f64) -> f64 {
    ln_cdf(-x)
}

/// Φ⁻¹(p) for p in (0, 1). Returns ∓∞ at p = 0 and p = 1, NaN outside.
pub fn quantile(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let x = -SQRT_2 * erfc_inv(2.0 * p);
    // Halley step on Φ(x) − p, using the smaller tail for accuracy.
    let e = if x < 0.0 { cdf(x) - p } else { (1.0 - p) - sf(x) };
    let d = pdf(x);
    if d <= 0.0 || !e.is_finite() {
        return x;
    }
    let u = e / d;
    x - u / (1.0 + 0.5 * x * u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;

    #[test]
    fn reference_values() {
        assert!((cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((cdf(-1.959_963_984_540_054) - 0.025).abs() < 1e-15);
        assert!((sf(5.0) - 2.866_515_718_791_939e-7).abs() < 1e-20);
        assert!((quantile(0.95) - 1.644_853_626_951_472_2).abs() < 1e-14);
        assert!((quantile(0.05) + 1.644_853_626_951_472_2).abs() < 1e-14);
        assert!((quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-14);
        assert_eq!(quantile(0.5), 0.0);
    }

    #[test]
    fn cdf_matches_integrated_density() {
        // Independent route: Φ(x) = 1/2 + ∫_0^x φ.
        for &x in &[-6.0, -3.3, -1.0, -0.2, 0.4, 1.7, 2.9, 7.5] {
            let integral = adaptive_simpson(pdf, 0.0, x, 1e-15);
            let want = 0.5 + integral;
            assert!((cdf(x) - want).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let x = quantile(p);
            assert!((cdf(x) - p).abs() < 1e-15, "p={p}");
        }
        for &p in &[1e-300, 1e-100, 1e-20, 1e-10, 1e-5] {
            let x = quantile(p);
            assert!(((cdf(x) - p) / p).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn ln_cdf_is_continuous_across_branches() {
        for &x in &[-5.0, 5.0] {
            let lo = ln_cdf(x - 1e-9);
            let hi = ln_cdf(x + 1e-9);
            assert!((lo - hi).abs() < 1e-7);
        }
        assert!((ln_cdf(-5.000_001) - cdf(-5.000_001).ln()).abs() < 1e-12);
        // Deep tail where Φ underflows.
        let v = ln_cdf(-40.0);
        let approx = -800.0 - (40.0f64).ln() - LN_SQRT_2PI;
        assert!((v - approx).abs() < 1e-3);
        assert!(v.is_finite());
    }
}
