//! One-dimensional distributions: analytic families, empirical samples,
//! increasing transformations and the least-favorable families used to
//! calibrate the tests.

use std::fmt;

use rand::Rng;

use crate::error::{config, domain, Error, Result};
use crate::normal;
use crate::rng::open01;

/// Half-width, in standard deviations, of the window treated as the
/// numerical support of a normal law. ln Φ is still finite there, so ratio
/// functionals can be followed far into the tails.
const NORMAL_SPAN: f64 = 38.0;

/// A sorted, non-empty sequence of finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Sorts `values` ascending. Rejects empty input and non-finite values.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("sample must contain at least one value"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(domain(format!("sample contains non-finite value {bad}")));
        }
        values.sort_by(f64::total_cmp);
        Ok(Sample { values })
    }

    /// Wraps values that the caller guarantees are sorted and finite.
    pub(crate) fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Sample { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// #{values ≤ x}.
    pub fn count_le(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v <= x)
    }

    /// #{values < x}.
    pub fn count_lt(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v < x)
    }

    /// Empirical distribution function at `x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.len() as f64
    }

    /// The `k`-th order statistic, 1-based.
    pub fn order_statistic(&self, k: usize) -> f64 {
        self.values[k.clamp(1, self.len()) - 1]
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.len() - 1]
    }

    /// Image of the sample under a strictly increasing map. Order is kept.
    pub fn map(&self, map: &MonotoneMap) -> Sample {
        Sample::from_sorted(self.values.iter().map(|&v| map.apply(v)).collect())
    }
}

/// A strictly increasing, continuous, piecewise-linear map of the real line.
///
/// Stored as knots `(xᵢ, yᵢ)`; between knots the map interpolates linearly
/// and beyond the outer knots it extends the first and last segments.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneMap {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl MonotoneMap {
    pub fn identity() -> Self {
        MonotoneMap { xs: vec![0.0, 1.0], ys: vec![0.0, 1.0] }
    }

    /// `x ↦ scale·x + shift`, `scale > 0`.
    pub fn affine(scale: f64, shift: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && shift.is_finite()) {
            return Err(domain("affine map needs a finite positive scale"));
        }
        Ok(MonotoneMap { xs: vec![0.0, 1.0], ys: vec![shift, shift + scale] })
    }

    /// Builds the map through the given knots, which must be strictly
    /// increasing in both coordinates.
    pub fn from_knots(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(domain("a monotone map needs at least two knots"));
        }
        let increasing = knots.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1);
        let finite = knots.iter().all(|(x, y)| x.is_finite() && y.is_finite());
        if !increasing || !finite {
            return Err(domain("knots must be finite and strictly increasing in x and y"));
        }
        Ok(MonotoneMap { xs: knots.iter().map(|k| k.0).collect(), ys: knots.iter().map(|k| k.1).collect() })
    }

    /// Interior knots where the slope may change.
    pub fn breakpoints(&self) -> &[f64] {
        &self.xs[1..self.xs.len() - 1]
    }

    /// Slopes of the linear pieces, one more than the breakpoints.
    pub fn slopes(&self) -> Vec<f64> {
        self.xs.windows(2).zip(self.ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect()
    }

    fn segment(knots: &[f64], v: f64) -> usize {
        // Index i of the segment [kᵢ, kᵢ₊₁] used for v, clamped to the ends.
        let p = knots.partition_point(|&k| k <= v);
        p.saturating_sub(1).min(knots.len() - 2)
    }

    pub fn apply(&self, x: f64) -> f64 {
        let i = Self::segment(&self.xs, x);
        let slope = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + slope * (x - self.xs[i])
    }

    pub fn inverse(&self, y: f64) -> f64 {
        let i = Self::segment(&self.ys, y);
        let slope = (self.xs[i + 1] - self.xs[i]) / (self.ys[i + 1] - self.ys[i]);
        self.xs[i] + slope * (y - self.ys[i])
    }

    /// `(scale, shift)` if the map is affine on `[lo, hi]`.
    fn affine_on(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        if self.breakpoints().iter().any(|&b| b > lo && b < hi) {
            return None;
        }
        let i = Self::segment(&self.xs, 0.5 * (lo + hi));
        let scale = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]);
        Some((scale, self.ys[i] - scale * self.xs[i]))
    }

    fn is_globally_affine(&self) -> bool {
        self.xs.len() == 2
    }
}

/// One uniform component of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixturePiece {
    pub weight: f64,
    pub lo: f64,
    pub hi: f64,
}

impl MixturePiece {
    pub fn new(weight: f64, lo: f64, hi: f64) -> Self {
        MixturePiece { weight, lo, hi }
    }

    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
}

/// Which extreme of the set of π-trimmings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrimSide {
    /// The stochastically smallest trimming: mass moved to the lower tail,
    /// CDF `min(F/(1−π), 1)`.
    Lower,
    /// The stochastically largest trimming: the lower π-fraction removed,
    /// CDF `max((F − π)/(1−π), 0)`.
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    Uniform {
        lo: f64,
        hi: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// Pieces sorted by lower end.
    UniformMixture(Vec<MixturePiece>),
    /// CDF √x on [0, 1].
    SqrtLaw,
    Empirical(Sample),
    Pushforward {
        base: Box<Distribution>,
        map: MonotoneMap,
    },
    /// `cut` is F⁻¹(1−π) for the lower side and F⁻¹(π) for the upper side.
    Trimmed {
        base: Box<Distribution>,
        pi: f64,
        side: TrimSide,
        cut: f64,
    },
}

/// An immutable one-dimensional distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    kind: DistKind,
}

impl Distribution {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(format!("uniform needs finite lo < hi, got ({lo}, {hi})")));
        }
        Ok(Distribution { kind: DistKind::Uniform { lo, hi } })
    }

    pub fn standard_uniform() -> Self {
        Distribution { kind: DistKind::Uniform { lo: 0.0, hi: 1.0 } }
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(domain(format!("normal needs finite mu and sigma > 0, got ({mu}, {sigma})")));
        }
        Ok(Distribution { kind: DistKind::Normal { mu, sigma } })
    }

    /// Mixture of uniform pieces. Weights must lie in (0, 1] and sum to one
    /// within 1e-12; pieces may overlap.
    pub fn mixture(pieces: Vec<MixturePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(domain("mixture needs at least one piece"));
        }
        for p in &pieces {
            if !(p.lo.is_finite() && p.hi.is_finite() && p.lo < p.hi) {
                return Err(domain(format!("mixture piece needs lo < hi, got ({}, {})", p.lo, p.hi)));
            }
            if !(p.weight > 0.0 && p.weight <= 1.0) {
                return Err(domain(format!("mixture weight {} outside (0, 1]", p.weight)));
            }
        }
        let total: f64 = pieces.iter().map(|p| p.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain(format!("mixture weights sum to {total}, not 1")));
        }
        let mut pieces = pieces;
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        Ok(Distribution { kind: DistKind::UniformMixture(pieces) })
    }

    pub fn sqrt_law() -> Self {
        Distribution { kind: DistKind::SqrtLaw }
    }

    pub fn empirical(sample: Sample) -> Self {
        Distribution { kind: DistKind::Empirical(sample) }
    }

    pub fn kind(&self) -> &DistKind {
        &self.kind
    }

    pub fn as_sample(&self) -> Option<&Sample> {
        match &self.kind {
            DistKind::Empirical(s) => Some(s),
            _ => None,
        }
    }

    /// True when the law has no atoms.
    pub fn is_continuous(&self) -> bool {
        match &self.kind {
            DistKind::Empirical(_) => false,
            DistKind::Pushforward { base, .. } | DistKind::Trimmed { base, .. } => base.is_continuous(),
            _ => true,
        }
    }

    /// True when the support is bounded.
    pub fn is_compact(&self) -> bool {
        match &self.kind {
            DistKind::Normal { .. } => false,
            DistKind::Pushforward { base, .. } | DistKind::Trimmed { base, .. } => base.is_compact(),
            _ => true,
        }
    }

    /// F(x).
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            DistKind::Normal { mu, sigma } => normal::cdf((x - mu) / sigma),
            DistKind::UniformMixture(pieces) => pieces.iter().map(|p| p.weight * p.cdf(x)).sum::<f64>().min(1.0),
            DistKind::SqrtLaw => x.clamp(0.0, 1.0).sqrt(),
            DistKind::Empirical(s) => s.ecdf(x),
            DistKind::Pushforward { base, map } => base.cdf(map.inverse(x)),
            DistKind::Trimmed { base, pi, side, cut } => match side {
                TrimSide::Lower if x >= *cut => 1.0,
                TrimSide::Lower => (base.cdf(x) / (1.0 - pi)).min(1.0),
                TrimSide::Upper if x < *cut => 0.0,
                TrimSide::Upper => ((base.cdf(x) - pi) / (1.0 - pi)).max(0.0),
            },
        }
    }

    /// Left limit F(x−).
    pub fn cdf_left(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::Empirical(s) => s.count_lt(x) as f64 / s.len() as f64,
            DistKind::Pushforward { base, map } => base.cdf_left(map.inverse(x)),
            DistKind::Trimmed { base, pi, side, cut } => match side {
                TrimSide::Lower if x > *cut => 1.0,
                TrimSide::Lower => (base.cdf_left(x) / (1.0 - pi)).min(1.0),
                TrimSide::Upper if x <= *cut => 0.0,
                TrimSide::Upper => ((base.cdf_left(x) - pi) / (1.0 - pi)).max(0.0),
            },
            _ => self.cdf(x),
        }
    }

    /// ln F(x); stays finite deep in normal tails.
    pub fn ln_cdf(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::Normal { mu, sigma } => normal::ln_cdf((x - mu) / sigma),
            DistKind::Pushforward { base, map } => base.ln_cdf(map.inverse(x)),
            _ => self.cdf(x).ln(),
        }
    }

    /// ln(1 − F(x)).
    pub fn ln_sf(&self, x: f64) -> f64 {
        match &self.kind {
            DistKind::Normal { mu, sigma } => normal::ln_sf((x - mu) / sigma),
            DistKind::Pushforward { base, map } => base.ln_sf(map.inverse(x)),
            _ => (-self.cdf(x)).ln_1p(),
        }
    }

    /// Generalized inverse F⁻¹(t) = inf{x : t ≤ F(x)}.
    ///
    /// For empirical laws this is the ⌈tn⌉-th order statistic. `t = 0`
    /// returns the lower end of the support and `t = 1` the upper end, both
    /// only for bounded supports.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("quantile level {t} outside [0, 1]")));
        }
        if (t == 0.0 || t == 1.0) && !self.is_compact() {
            return Err(domain(format!("quantile level {t} needs a bounded support")));
        }
        Ok(match &self.kind {
            DistKind::Uniform { lo, hi } => lo + t * (hi - lo),
            DistKind::Normal { mu, sigma } => mu + sigma * normal::quantile(t),
            DistKind::UniformMixture(pieces) => mixture_quantile(pieces, t),
            DistKind::SqrtLaw => t * t,
            DistKind::Empirical(s) => s.order_statistic(ceil_rank(t, s.len())),
            DistKind::Pushforward { base, map } => map.apply(base.quantile(t)?),
            DistKind::Trimmed { base, pi, side, .. } => match side {
                TrimSide::Lower => base.quantile((1.0 - pi) * t)?,
                TrimSide::Upper => base.quantile(pi + (1.0 - pi) * t)?,
            },
        })
    }

    /// `k` independent draws by inverse transform of open-interval uniforms,
    /// returned sorted.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, k: usize) -> Result<Sample> {
        if k == 0 {
            return Err(domain("sample size must be at least 1"));
        }
        let mut out = Vec::with_capacity(k);
        match &self.kind {
            DistKind::Empirical(s) => {
                let n = s.len();
                for _ in 0..k {
                    let u = open01(rng);
                    out.push(s.order_statistic(ceil_rank(u, n)));
                }
            }
            _ => {
                for _ in 0..k {
                    out.push(self.quantile(open01(rng))?);
                }
            }
        }
        Sample::new(out)
    }

    /// Points where the CDF may jump or change its analytic form.
    pub fn knots(&self) -> Vec<f64> {
        let mut k = match &self.kind {
            DistKind::Uniform { lo, hi } => vec![*lo, *hi],
            DistKind::Normal { .. } => vec![],
            DistKind::UniformMixture(pieces) => pieces.iter().flat_map(|p| [p.lo, p.hi]).collect(),
            DistKind::SqrtLaw => vec![0.0, 1.0],
            DistKind::Empirical(s) => s.values().to_vec(),
            DistKind::Pushforward { base, map } => {
                let mut v: Vec<f64> = base.knots().into_iter().map(|x| map.apply(x)).collect();
                v.extend(map.breakpoints().iter().map(|&b| map.apply(b)));
                v
            }
            DistKind::Trimmed { base, cut, .. } => {
                let mut v = base.knots();
                v.push(*cut);
                v
            }
        };
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// An interval carrying all but a negligible part of the mass.
    pub fn support_hint(&self) -> (f64, f64) {
        match &self.kind {
            DistKind::Uniform { lo, hi } => (*lo, *hi),
            DistKind::Normal { mu, sigma } => (mu - NORMAL_SPAN * sigma, mu + NORMAL_SPAN * sigma),
            DistKind::UniformMixture(pieces) => (
                pieces.iter().map(|p| p.lo).fold(f64::INFINITY, f64::min),
                pieces.iter().map(|p| p.hi).fold(f64::NEG_INFINITY, f64::max),
            ),
            DistKind::SqrtLaw => (0.0, 1.0),
            DistKind::Empirical(s) => (s.min(), s.max()),
            DistKind::Pushforward { base, map } => {
                let (lo, hi) = base.support_hint();
                (map.apply(lo), map.apply(hi))
            }
            DistKind::Trimmed { base, .. } => base.support_hint(),
        }
    }

    /// Short human-readable description.
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub(crate) fn trimmed(base: &Distribution, pi: f64, side: TrimSide) -> Result<Self> {
        let cut = match side {
            TrimSide::Lower => base.quantile(1.0 - pi)?,
            TrimSide::Upper => base.quantile(pi)?,
        };
        Ok(Distribution { kind: DistKind::Trimmed { base: Box::new(base.clone()), pi, side, cut } })
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DistKind::Uniform { lo, hi } => write!(f, "U({lo}, {hi})"),
            DistKind::Normal { mu, sigma } => write!(f, "N({mu}, {sigma}^2)"),
            DistKind::UniformMixture(pieces) => {
                let parts: Vec<String> = pieces.iter().map(|p| format!("{}·U({}, {})", p.weight, p.lo, p.hi)).collect();
                write!(f, "{}", parts.join(" + "))
            }
            DistKind::SqrtLaw => write!(f, "Sqrt"),
            DistKind::Empirical(s) => write!(f, "Empirical(n={})", s.len()),
            DistKind::Pushforward { base, .. } => write!(f, "T#({base})"),
            DistKind::Trimmed { base, pi, side, .. } => match side {
                TrimSide::Lower => write!(f, "({base})_{pi}"),
                TrimSide::Upper => write!(f, "({base})^{pi}"),
            },
        }
    }
}

/// ⌈t·n⌉ clamped to 1..=n, snapping products that are integers up to
/// rounding (0.7·10 = 7.000000000000001).
pub(crate) fn ceil_rank(t: f64, n: usize) -> usize {
    let c = t * n as f64;
    let r = c.round();
    let k = if (c - r).abs() <= 1e-9 * (n as f64).max(1.0) { r } else { c.ceil() };
    (k as usize).clamp(1, n)
}

fn mixture_quantile(pieces: &[MixturePiece], t: f64) -> f64 {
    let disjoint = pieces.windows(2).all(|w| w[0].hi <= w[1].lo);
    if disjoint {
        let mut below = 0.0;
        for (i, p) in pieces.iter().enumerate() {
            let last = i + 1 == pieces.len();
            if t <= below + p.weight || last {
                let frac = ((t - below) / p.weight).clamp(0.0, 1.0);
                return p.lo + frac * (p.hi - p.lo);
            }
            below += p.weight;
        }
        unreachable!("mixture has at least one piece");
    }
    // Overlapping pieces: bisection on the CDF for inf{x : F(x) ≥ t}.
    let cdf = |x: f64| pieces.iter().map(|p| p.weight * p.cdf(x)).sum::<f64>();
    let mut lo = pieces.iter().map(|p| p.lo).fold(f64::INFINITY, f64::min);
    let mut hi = pieces.iter().map(|p| p.hi).fold(f64::NEG_INFINITY, f64::max);
    if t <= 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid) >= t {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Image of `dist` under the strictly increasing `map`: the law with CDF
/// `F(map⁻¹(x))`.
///
/// Empirical laws are mapped point by point; uniform and normal laws stay in
/// their family when the map is affine on their support.
pub fn pushforward(dist: &Distribution, map: &MonotoneMap) -> Distribution {
    match &dist.kind {
        DistKind::Empirical(s) => Distribution::empirical(s.map(map)),
        DistKind::Uniform { lo, hi } if map.affine_on(*lo, *hi).is_some() => {
            Distribution { kind: DistKind::Uniform { lo: map.apply(*lo), hi: map.apply(*hi) } }
        }
        DistKind::Normal { mu, sigma } if map.is_globally_affine() => {
            let (scale, shift) = map.affine_on(*mu, *mu).expect("affine map");
            Distribution { kind: DistKind::Normal { mu: scale * mu + shift, sigma: scale * sigma } }
        }
        _ => Distribution { kind: DistKind::Pushforward { base: Box::new(dist.clone()), map: map.clone() } },
    }
}

/// Families attaining a prescribed π(F, U(0,1)) at the boundary of the
/// testing problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeastFavorable {
    /// Boundary of the test for essential order, needs λπ ≤ ½ and
    /// (1−λ)π ≤ ½: (½−πλ)U(0, ½+π(1−λ)) + (½+πλ)U(½+π(1−λ), 1+π/2−λπ²).
    ForBoundary,
    /// Worst power for the test for essential order: U(π, 1+π).
    ForPower,
    /// Boundary of the test against essential order: U(π, 1+π).
    AgainstBoundary,
    /// Worst power for the test against essential order; the mixture of
    /// `ForBoundary`, which at λ = ½ is
    /// (1−π)/2·U(0, (1+π)/2) + (1+π)/2·U((1+π)/2, 1+π(1−π)/2).
    AgainstPower,
    /// Boundary replacement when λπ > ½: U(π, 1).
    ForBoundaryBigPiLeft,
    /// Boundary replacement when (1−λ)π > ½: (1−π)U(0,1) + πU(1, 1+π(1−π)).
    ForBoundaryBigPiRight,
}

impl LeastFavorable {
    pub const ALL: [LeastFavorable; 6] = [
        LeastFavorable::ForBoundary,
        LeastFavorable::ForPower,
        LeastFavorable::AgainstBoundary,
        LeastFavorable::AgainstPower,
        LeastFavorable::ForBoundaryBigPiLeft,
        LeastFavorable::ForBoundaryBigPiRight,
    ];
}

/// Builds the least-favorable law `D` of `family`, with π(D, U(0,1)) = `pi`.
pub fn make_least_favorable(family: LeastFavorable, pi: f64, lambda: f64) -> Result<Distribution> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(domain(format!("contamination level {pi} outside (0, 1)")));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(domain(format!("lambda {lambda} outside (0, 1)")));
    }
    match family {
        LeastFavorable::ForPower | LeastFavorable::AgainstBoundary => Distribution::uniform(pi, 1.0 + pi),
        LeastFavorable::ForBoundary | LeastFavorable::AgainstPower => {
            if lambda * pi > 0.5 || (1.0 - lambda) * pi > 0.5 {
                return Err(config(format!(
                    "{family:?} needs lambda*pi <= 1/2 and (1-lambda)*pi <= 1/2 (pi={pi}, lambda={lambda}); \
                     use a BigPi variant"
                )));
            }
            let knot = 0.5 + pi * (1.0 - lambda);
            let w_low = 0.5 - pi * lambda;
            let w_high = 0.5 + pi * lambda;
            let top = 1.0 + pi / 2.0 - lambda * pi * pi;
            let mut pieces = Vec::with_capacity(2);
            if w_low > 0.0 {
                pieces.push(MixturePiece::new(w_low, 0.0, knot));
            }
            pieces.push(MixturePiece::new(w_high, knot, top));
            Distribution::mixture(pieces)
        }
        LeastFavorable::ForBoundaryBigPiLeft => {
            if lambda * pi <= 0.5 {
                return Err(config(format!("{family:?} needs lambda*pi > 1/2 (pi={pi}, lambda={lambda})")));
            }
            Distribution::uniform(pi, 1.0)
        }
        LeastFavorable::ForBoundaryBigPiRight => {
            if (1.0 - lambda) * pi <= 0.5 {
                return Err(config(format!("{family:?} needs (1-lambda)*pi > 1/2 (pi={pi}, lambda={lambda})")));
            }
            Distribution::mixture(vec![
                MixturePiece::new(1.0 - pi, 0.0, 1.0),
                MixturePiece::new(pi, 1.0, 1.0 + pi * (1.0 - pi)),
            ])
        }
    }
}

impl From<Sample> for Distribution {
    fn from(s: Sample) -> Self {
        Distribution::empirical(s)
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Sample::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::generator;

    fn all_kinds() -> Vec<Distribution> {
        let map = MonotoneMap::from_knots(&[(0.0, 0.0), (0.5, 2.0), (1.0, 2.5)]).unwrap();
        vec![
            Distribution::uniform(-1.0, 2.0).unwrap(),
            Distribution::normal(0.3, 1.7).unwrap(),
            make_least_favorable(LeastFavorable::ForBoundary, 0.2, 0.5).unwrap(),
            Distribution::mixture(vec![MixturePiece::new(0.3, 0.0, 2.0), MixturePiece::new(0.7, 1.0, 1.5)]).unwrap(),
            Distribution::sqrt_law(),
            Distribution::empirical(Sample::new(vec![0.1, 0.4, 0.4, 0.9, 2.0]).unwrap()),
            pushforward(&Distribution::sqrt_law(), &map),
            Distribution::trimmed(&Distribution::standard_uniform(), 0.3, TrimSide::Lower).unwrap(),
            Distribution::trimmed(&Distribution::normal(0.0, 1.0).unwrap(), 0.2, TrimSide::Upper).unwrap(),
        ]
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(Distribution::standard_uniform().cdf(0.3), 0.3);
        assert_eq!(Distribution::sqrt_law().cdf(0.25), 0.5);
        assert_eq!(Distribution::normal(0.0, 1.0).unwrap().cdf(0.0), 0.5);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(Distribution::standard_uniform().quantile(0.7).unwrap(), 0.7);
        assert_eq!(Distribution::sqrt_law().quantile(0.5).unwrap(), 0.25);
        let e = Distribution::empirical(Sample::new(vec![3.0, 1.0, 2.0]).unwrap());
        assert_eq!(e.quantile(0.5).unwrap(), 2.0);
        assert_eq!(e.quantile(1.0 / 3.0).unwrap(), 1.0);
        assert_eq!(e.quantile(0.34).unwrap(), 2.0);
    }

    #[test]
    fn quantile_domain_errors() {
        let n = Distribution::normal(0.0, 1.0).unwrap();
        assert!(matches!(n.quantile(0.0), Err(Error::Domain(_))));
        assert!(matches!(n.quantile(1.0), Err(Error::Domain(_))));
        assert!(n.quantile(1.5).is_err());
        assert_eq!(Distribution::standard_uniform().quantile(0.0).unwrap(), 0.0);
        assert_eq!(Distribution::standard_uniform().quantile(1.0).unwrap(), 1.0);
    }

    #[test]
    fn ceil_rank_snaps_integer_products() {
        assert_eq!(ceil_rank(0.7, 10), 7);
        assert_eq!(ceil_rank(0.71, 10), 8);
        assert_eq!(ceil_rank(0.5, 3), 2);
        assert_eq!(ceil_rank(1e-9, 3), 1);
        assert_eq!(ceil_rank(1.0, 3), 3);
    }

    #[test]
    fn constructor_validation() {
        assert!(Distribution::uniform(1.0, 1.0).is_err());
        assert!(Distribution::normal(0.0, 0.0).is_err());
        assert!(Distribution::mixture(vec![MixturePiece::new(0.5, 0.0, 1.0)]).is_err());
        assert!(Distribution::mixture(vec![
            MixturePiece::new(0.5, 0.0, 1.0),
            MixturePiece::new(0.5 + 1e-13, 1.0, 2.0)
        ])
        .is_ok());
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn cdf_is_monotone_right_continuous_with_limits() {
        for d in all_kinds() {
            let (lo, hi) = d.support_hint();
            let w = hi - lo;
            let mut prev = 0.0;
            for i in 0..=2000 {
                let x = lo - 0.1 * w + i as f64 * 1.2 * w / 2000.0;
                let f = d.cdf(x);
                assert!((0.0..=1.0).contains(&f), "{d}: F({x}) = {f}");
                assert!(f >= prev - 1e-15, "{d}: not monotone at {x}");
                prev = f;
            }
            assert!(d.cdf(lo - w) < 1e-12, "{d}: lower limit");
            assert!(d.cdf(hi + w) > 1.0 - 1e-12, "{d}: upper limit");
            for k in d.knots() {
                // √x has infinite slope at 0, hence the loose tolerance.
                let right = d.cdf(k + 1e-14 * (1.0 + k.abs()));
                assert!((right - d.cdf(k)).abs() < 1e-6, "{d}: right continuity at {k}");
                assert!(d.cdf_left(k) <= d.cdf(k) + 1e-15);
            }
        }
    }

    #[test]
    fn generalized_inverse_consistency() {
        let mut rng = generator(11);
        for d in all_kinds() {
            let (lo, hi) = d.support_hint();
            // Keep normal tails where 1 − F(x) is well above the spacing of
            // doubles near 1, otherwise F⁻¹(F(x)) cannot resolve x.
            let (lo, hi) = if d.is_compact() { (lo, hi) } else { (lo / 8.0, hi / 8.0) };
            for _ in 0..1000 {
                let t: f64 = open01(&mut rng);
                let x = lo - 0.1 + rng.gen::<f64>() * (hi - lo + 0.2);
                let q = d.quantile(t).unwrap();
                assert!(d.cdf(q) >= t - 1e-12, "{d}: F(F^-1({t})) = {} < t", d.cdf(q));
                let fx = d.cdf(x);
                if fx > 0.0 && fx < 1.0 {
                    let back = d.quantile(fx).unwrap();
                    assert!(back <= x + 1e-9 * (1.0 + x.abs()), "{d}: F^-1(F({x})) = {back} > x");
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_sorted() {
        let u = Distribution::standard_uniform();
        let a = u.sample(&mut generator(42), 5).unwrap();
        let b = u.sample(&mut generator(42), 5).unwrap();
        assert_eq!(a, b);
        assert!(a.values().windows(2).all(|w| w[0] <= w[1]));
        assert!(u.sample(&mut generator(1), 0).is_err());
    }

    #[test]
    fn resampling_stays_on_support() {
        let s = Sample::new(vec![0.5, 1.5, 1.5, 7.0]).unwrap();
        let e = Distribution::empirical(s.clone());
        let draw = e.sample(&mut generator(3), 200).unwrap();
        assert!(draw.values().iter().all(|v| s.values().contains(v)));
    }

    #[test]
    fn normal_sample_mean_within_clt_bound() {
        let n = Distribution::normal(0.0, 1.0).unwrap();
        let s = n.sample(&mut generator(2024), 100_000).unwrap();
        let mean = s.values().iter().sum::<f64>() / 1e5;
        assert!(mean.abs() < 4.0 / 1e5f64.sqrt(), "mean {mean}");
    }

    #[test]
    fn least_favorable_examples() {
        let d = make_least_favorable(LeastFavorable::ForPower, 0.1, 0.5).unwrap();
        assert_eq!(d.kind(), &DistKind::Uniform { lo: 0.1, hi: 1.1 });

        let d = make_least_favorable(LeastFavorable::ForBoundary, 0.2, 0.5).unwrap();
        let DistKind::UniformMixture(p) = d.kind() else { panic!("mixture expected") };
        assert_eq!(p.len(), 2);
        assert!((p[0].weight - 0.4).abs() < 1e-15 && p[0].lo == 0.0 && (p[0].hi - 0.6).abs() < 1e-15);
        assert!((p[1].weight - 0.6).abs() < 1e-15 && (p[1].hi - 1.08).abs() < 1e-15);

        let d = make_least_favorable(LeastFavorable::AgainstPower, 0.05, 0.5).unwrap();
        let DistKind::UniformMixture(p) = d.kind() else { panic!("mixture expected") };
        assert!((p[0].weight - 0.475).abs() < 1e-15 && (p[0].hi - 0.525).abs() < 1e-15);
        assert!((p[1].weight - 0.525).abs() < 1e-15 && (p[1].hi - 1.02375).abs() < 1e-15);
    }

    #[test]
    fn least_favorable_parameter_mismatch() {
        let e = make_least_favorable(LeastFavorable::ForBoundaryBigPiLeft, 0.4, 0.5);
        assert!(matches!(e, Err(Error::Config(_))));
        let e = make_least_favorable(LeastFavorable::ForBoundaryBigPiRight, 0.8, 0.5);
        assert!(matches!(e, Err(Error::Config(_))));
        let e = make_least_favorable(LeastFavorable::ForBoundary, 0.8, 0.7);
        assert!(matches!(e, Err(Error::Config(_))));
        assert!(make_least_favorable(LeastFavorable::ForBoundaryBigPiLeft, 0.8, 0.7).is_ok());
        assert!(make_least_favorable(LeastFavorable::ForBoundaryBigPiRight, 0.8, 0.3).is_ok());
    }

    #[test]
    fn least_favorable_attains_pi_on_grid() {
        // sup (G − D) over 10⁴ uniform points plus the law's knots.
        let g = Distribution::standard_uniform();
        let cases: Vec<(LeastFavorable, f64, f64)> = vec![
            (LeastFavorable::ForBoundary, 0.2, 0.5),
            (LeastFavorable::ForBoundary, 0.05, 0.3),
            (LeastFavorable::ForPower, 0.1, 0.5),
            (LeastFavorable::AgainstBoundary, 0.01, 0.5),
            (LeastFavorable::AgainstPower, 0.05, 0.5),
            (LeastFavorable::ForBoundaryBigPiLeft, 0.8, 0.7),
            (LeastFavorable::ForBoundaryBigPiRight, 0.8, 0.3),
        ];
        for (fam, pi, lam) in cases {
            let d = make_least_favorable(fam, pi, lam).unwrap();
            let (_, hi) = d.support_hint();
            let mut pts: Vec<f64> = (0..10_000).map(|i| -0.1 + i as f64 * (hi + 0.2) / 9999.0).collect();
            pts.extend(d.knots());
            let sup = pts.iter().map(|&x| g.cdf(x) - d.cdf(x)).fold(f64::NEG_INFINITY, f64::max);
            assert!((sup - pi).abs() < 1e-9, "{fam:?} pi={pi} lambda={lam}: sup {sup}");
        }
    }

    #[test]
    fn pushforward_examples() {
        let u = Distribution::standard_uniform();
        assert_eq!(pushforward(&u, &MonotoneMap::identity()), u);
        let doubled = pushforward(&u, &MonotoneMap::affine(2.0, 0.0).unwrap());
        assert_eq!(doubled.kind(), &DistKind::Uniform { lo: 0.0, hi: 2.0 });

        let map = MonotoneMap::from_knots(&[(-1.0, -3.0), (0.2, 0.0), (0.7, 0.1), (3.0, 9.0)]).unwrap();
        let p = pushforward(&u, &map);
        for i in 0..=100 {
            let x = -4.0 + i as f64 * 0.15;
            assert!((p.cdf(x) - u.cdf(map.inverse(x))).abs() < 1e-15);
        }
        let n = pushforward(&Distribution::normal(1.0, 2.0).unwrap(), &MonotoneMap::affine(3.0, -1.0).unwrap());
        assert_eq!(n.kind(), &DistKind::Normal { mu: 2.0, sigma: 6.0 });
    }

    #[test]
    fn monotone_map_round_trip() {
        let map = MonotoneMap::from_knots(&[(0.0, 1.0), (1.0, 4.0), (2.0, 4.5)]).unwrap();
        assert_eq!(map.breakpoints(), &[1.0]);
        assert_eq!(map.slopes(), vec![3.0, 0.5]);
        for &x in &[-2.0, 0.0, 0.3, 1.0, 1.7, 5.0] {
            assert!((map.inverse(map.apply(x)) - x).abs() < 1e-12);
        }
        assert!(MonotoneMap::from_knots(&[(0.0, 1.0), (1.0, 1.0)]).is_err());
    }
}
