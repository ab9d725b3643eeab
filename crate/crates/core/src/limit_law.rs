//! The limit law B̄(a, λ) = sup_{t∈[a,1]} (√λ·B₁(t) − √(1−λ)·B₂(t−a)) of the
//! centered and scaled statistic, with B₁, B₂ independent Brownian bridges.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::normal;
use crate::quadrature::adaptive_simpson;
use crate::rng::{derived, SeededGenerator};

/// Below this `a` the law is the Smirnov law; above `1 − DEGENERATE` it is
/// the point mass at 0.
const DEGENERATE: f64 = 1e-12;
const QUANTILE_BRACKET: f64 = 12.0;
/// Gaussian half-width, in standard deviations, of the tail integral.
const KERNEL_SPAN: f64 = 10.0;
const ORACLE_BLOCK: usize = 1024;

/// Parameters of B̄(a, λ) plus numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitLawParams {
    pub a: f64,
    pub lambda: f64,
    /// Absolute tolerance of the tail quadrature.
    pub quad_tol: f64,
    /// Absolute tolerance of quantile bisection.
    pub root_tol: f64,
}

impl LimitLawParams {
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        let p = LimitLawParams { a, lambda, quad_tol: 1e-10, root_tol: 1e-8 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_tolerances(mut self, quad_tol: f64, root_tol: f64) -> Result<Self> {
        self.quad_tol = quad_tol;
        self.root_tol = root_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.a) {
            return Err(domain(format!("a = {} outside [0, 1]", self.a)));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(domain(format!("lambda = {} outside (0, 1)", self.lambda)));
        }
        if !(self.quad_tol > 0.0 && self.root_tol > 0.0) {
            return Err(domain("tolerances must be positive"));
        }
        Ok(())
    }
}

/// P(B̄(a, λ) > v).
pub fn tail_prob(params: &LimitLawParams, v: f64) -> Result<f64> {
    params.validate()?;
    if !v.is_finite() {
        return Err(domain(format!("tail argument {v} is not finite")));
    }
    let LimitLawParams { a, lambda, quad_tol, .. } = *params;
    if a < DEGENERATE {
        return Ok(if v <= 0.0 { 1.0 } else { (-2.0 * v * v).exp().min(1.0) });
    }
    if a > 1.0 - DEGENERATE {
        return Ok(if v < 0.0 { 1.0 } else { 0.0 });
    }
    let u = v / (1.0 - a).sqrt();
    let s1 = (lambda * a).sqrt();
    let s2 = ((1.0 - lambda) * a).sqrt();
    let prec = 1.0 - 4.0 * lambda * (1.0 - lambda) * a * a;
    let upper = u / s1;
    let mu = 2.0 * u * s1 * (1.0 - 2.0 * (1.0 - lambda) * a) / prec;
    let slope = 2.0 * (lambda * (1.0 - lambda)).sqrt() * a;
    let offset = u * (1.0 - 2.0 * (1.0 - lambda) * a) / s2;

    let lo = mu - KERNEL_SPAN / prec.sqrt();
    let hi = (mu + KERNEL_SPAN / prec.sqrt()).min(upper);
    let integral = if hi > lo {
        let kernel = |x: f64| {
            let d = x - mu;
            (-0.5 * prec * d * d).exp() / (2.0 * PI).sqrt() * normal::cdf(offset + slope * x)
        };
        adaptive_simpson(kernel, lo, hi, quad_tol)
    } else {
        0.0
    };
    let p = 1.0 - normal::cdf(upper) * normal::cdf(u / s2) + (-2.0 * v * v / prec).exp() * integral;
    Ok(p.clamp(0.0, 1.0))
}

/// Mean and variance of B̄(a, λ). Neither depends on λ.
pub fn moments(params: &LimitLawParams) -> Result<(f64, f64)> {
    params.validate()?;
    let a = params.a;
    if a >= 1.0 {
        return Ok((0.0, 0.0));
    }
    let mean = ((a * (1.0 - a)).sqrt() + PI / 2.0 - (a / (1.0 - a)).sqrt().atan()) / (2.0 * PI).sqrt();
    let second = (1.0 - a * a) / 2.0;
    Ok((mean, (second - mean * mean).max(0.0)))
}

/// The `p`-quantile K_p(a, λ), by bisection of the tail on [−12, 12].
pub fn quantile(params: &LimitLawParams, p: f64) -> Result<f64> {
    params.validate()?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("quantile level {p} outside (0, 1)")));
    }
    let target = 1.0 - p;
    let mut lo = -QUANTILE_BRACKET;
    let mut hi = QUANTILE_BRACKET;
    if tail_prob(params, lo)? < target || tail_prob(params, hi)? > target {
        return Err(Error::Internal(format!(
            "tail of B̄({}, {}) does not bracket level {p} on [-12, 12]",
            params.a, params.lambda
        )));
    }
    while hi - lo > params.root_tol {
        let mid = 0.5 * (lo + hi);
        if tail_prob(params, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Extreme standard deviations (σ̲_π, σ̄_π) of the normal laws bounding
/// the quantiles of the limit law from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEnvelope {
    pub sigma_lower: f64,
    pub sigma_upper: f64,
}

pub fn sigma_envelope(pi: f64, lambda: f64) -> Result<SigmaEnvelope> {
    if !(0.0..1.0).contains(&pi) {
        return Err(domain(format!("contamination level {pi} outside [0, 1)")));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(domain(format!("lambda {lambda} outside (0, 1)")));
    }
    let lower = lambda.min(1.0 - lambda) * pi * (1.0 - pi);
    let upper = if lambda * pi > 0.5 {
        lambda * pi * (1.0 - pi)
    } else if (1.0 - lambda) * pi > 0.5 {
        (1.0 - lambda) * pi * (1.0 - pi)
    } else {
        0.25 - pi * pi * lambda * (1.0 - lambda)
    };
    Ok(SigmaEnvelope { sigma_lower: lower.sqrt(), sigma_upper: upper.sqrt() })
}

/// σ_t = √(λt(1−t) + (1−λ)(t−π)(1−t+π)) for t ∈ [π, 1].
pub fn sigma_t(t: f64, pi: f64, lambda: f64) -> Result<f64> {
    if !(t >= pi && t <= 1.0) {
        return Err(domain(format!("t = {t} outside [{pi}, 1]")));
    }
    let var = lambda * t * (1.0 - t) + (1.0 - lambda) * (t - pi) * (1.0 - t + pi);
    Ok(var.max(0.0).sqrt())
}

/// How [`oracle_sample_with`] takes the supremum between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupSampling {
    /// Draw the exact maximum of the conditional bridge on every grid cell,
    /// which removes the discretization bias.
    #[default]
    BridgeCorrected,
    /// Maximum over the grid points only; biased low by O(grid^-1/2).
    GridOnly,
}

/// One draw of B̄(a, λ) from its representation
/// √(1−a)·sup_s (B(s) + √(λa)(1−s)X + √((1−λ)a)sY).
pub fn oracle_sample<R: Rng + ?Sized>(params: &LimitLawParams, grid_points: usize, rng: &mut R) -> f64 {
    let mut buf = Vec::new();
    oracle_draw(params, grid_points, SupSampling::default(), rng, &mut buf)
}

pub fn oracle_sample_with<R: Rng + ?Sized>(
    params: &LimitLawParams,
    grid_points: usize,
    mode: SupSampling,
    rng: &mut R,
) -> f64 {
    let mut buf = Vec::new();
    oracle_draw(params, grid_points, mode, rng, &mut buf)
}

fn oracle_draw<R: Rng + ?Sized>(
    params: &LimitLawParams,
    grid_points: usize,
    mode: SupSampling,
    rng: &mut R,
    walk: &mut Vec<f64>,
) -> f64 {
    let a = params.a;
    if a >= 1.0 {
        return 0.0;
    }
    let cells = grid_points.max(2) - 1;
    let dt = 1.0 / cells as f64;
    let step = dt.sqrt();
    walk.clear();
    walk.push(0.0);
    let mut w = 0.0;
    for _ in 0..cells {
        let z: f64 = rng.sample(StandardNormal);
        w += step * z;
        walk.push(w);
    }
    let end = w;
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let cx = (params.lambda * a).sqrt() * x;
    let cy = ((1.0 - params.lambda) * a).sqrt() * y;
    // Z(s) = W(s) − s·W(1) + (1−s)·cx + s·cy; drift terms are linear.
    for (i, v) in walk.iter_mut().enumerate() {
        let s = i as f64 * dt;
        *v += cx + s * (cy - cx - end);
    }
    let grid_max = walk.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sup = match mode {
        SupSampling::GridOnly => grid_max,
        SupSampling::BridgeCorrected => {
            // P(cell max > m) = exp(−2(m−x)(m−y)/dt); cells whose chance of
            // beating the grid maximum is below e^-40 are left alone.
            let mut best = grid_max;
            for pair in walk.windows(2) {
                let (l, r) = (pair[0], pair[1]);
                if 2.0 * (grid_max - l) * (grid_max - r) > 40.0 * dt {
                    continue;
                }
                let e: f64 = rng.sample(Exp1);
                let m = 0.5 * (l + r + ((l - r) * (l - r) + 2.0 * dt * e).sqrt());
                best = best.max(m);
            }
            best
        }
    };
    (1.0 - a).sqrt() * sup
}

/// `draws` independent oracle samples. Block `k` of 1024 draws uses the
/// generator derived from `(seed, k)`, so the output does not depend on the
/// number of threads.
pub fn oracle_batch(
    params: &LimitLawParams,
    grid_points: usize,
    draws: usize,
    mode: SupSampling,
    seed: u64,
) -> Vec<f64> {
    let blocks = draws.div_ceil(ORACLE_BLOCK);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng: SeededGenerator = derived(seed, k as u64);
            let count = ORACLE_BLOCK.min(draws - k * ORACLE_BLOCK);
            let mut buf = Vec::with_capacity(grid_points);
            (0..count).map(|_| oracle_draw(params, grid_points, mode, &mut rng, &mut buf)).collect::<Vec<_>>()
        })
        .collect()
}
