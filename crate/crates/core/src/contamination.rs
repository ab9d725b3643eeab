//! The trimming calculus: extreme trimmings, minimal contamination indices,
//! trimming membership for discrete laws and the precedence index.

use crate::dist_model::{Distribution, Sample, TrimSide};
use crate::error::{domain, Result};
use crate::inference::empirical_pi;
use crate::quadrature::adaptive_simpson;

/// Initial number of grid points for analytic suprema.
pub const DEFAULT_GRID: usize = 4096;

const REFINE_ROUNDS: usize = 3;
const REFINE_FACTOR: usize = 8;
const SATURATION: f64 = 1e-12;

/// Which functional produced a [`ContaminationIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// sup over F₀ > 0 of (F₀ − F)/F₀: the least π with F_π ≤_st F₀.
    Pi0Below,
    /// sup over F₀ < 1 of (F − F₀)/(1 − F₀): the least π with F^π ≥_st F₀.
    Pi0PrimeAbove,
    /// π(F₁, F₂) = sup (F₂ − F₁).
    PiTwoSample,
    /// π(F₂, F₁) = sup (F₁ − F₂).
    PiTwoSampleReversed,
}

/// A contamination level in [0, 1].
///
/// The value 1 means that no level below total contamination makes the
/// relation hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationIndex {
    pub value: f64,
    pub kind: IndexKind,
    /// Where the supremum was found, when a finite maximizer was located.
    pub argmax: Option<f64>,
}

impl ContaminationIndex {
    fn new(raw: f64, kind: IndexKind, argmax: Option<f64>) -> Self {
        let value = if raw >= 1.0 - SATURATION { 1.0 } else { raw.clamp(0.0, 1.0) };
        ContaminationIndex { value, kind, argmax }
    }

    /// True when only total contamination makes the relation hold.
    pub fn is_total(&self) -> bool {
        self.value == 1.0
    }
}

/// The stochastically smallest and largest π-trimmings `(F_π, F^π)` of `f`.
pub fn trim_extremes(f: &Distribution, pi: f64) -> Result<(Distribution, Distribution)> {
    if !(0.0..1.0).contains(&pi) {
        return Err(domain(format!("trimming level {pi} outside [0, 1)")));
    }
    if pi == 0.0 {
        return Ok((f.clone(), f.clone()));
    }
    Ok((Distribution::trimmed(f, pi, TrimSide::Lower)?, Distribution::trimmed(f, pi, TrimSide::Upper)?))
}

/// π₀ = sup over {F₀ > 0} of (F₀ − F)/F₀, the least π for which `f` is a
/// π-contaminated stochastic minorant of `f0`.
pub fn min_contamination_below(f: &Distribution, f0: &Distribution, grid: usize) -> ContaminationIndex {
    // 1 − F/F₀ in log space follows ratios of tails that underflow.
    let eval = |x: f64| {
        let lf0 = f0.ln_cdf(x);
        if lf0 == f64::NEG_INFINITY {
            None
        } else {
            Some(-(f.ln_cdf(x) - lf0).exp_m1())
        }
    };
    let eval_left = |x: f64| {
        let (a, b) = (f.cdf_left(x), f0.cdf_left(x));
        if b == 0.0 {
            None
        } else {
            Some(1.0 - a / b)
        }
    };
    let (value, arg) = sup_search(&[f, f0], grid, eval, eval_left);
    ContaminationIndex::new(value, IndexKind::Pi0Below, arg)
}

/// π′₀ = sup over {F₀ < 1} of (F − F₀)/(1 − F₀), the least π for which `f`
/// is a π-contaminated stochastic majorant of `f0`.
pub fn min_contamination_above(f: &Distribution, f0: &Distribution, grid: usize) -> ContaminationIndex {
    let eval = |x: f64| {
        let lf0 = f0.ln_sf(x);
        if lf0 == f64::NEG_INFINITY {
            None
        } else {
            Some(-(f.ln_sf(x) - lf0).exp_m1())
        }
    };
    let eval_left = |x: f64| {
        let (a, b) = (1.0 - f.cdf_left(x), 1.0 - f0.cdf_left(x));
        if b == 0.0 {
            None
        } else {
            Some(1.0 - a / b)
        }
    };
    let (value, arg) = sup_search(&[f, f0], grid, eval, eval_left);
    ContaminationIndex::new(value, IndexKind::Pi0PrimeAbove, arg)
}

/// π(F₁, F₂) = sup (F₂ − F₁). Exact for two empirical laws.
pub fn pi_index(f1: &Distribution, f2: &Distribution, grid: usize) -> ContaminationIndex {
    two_sample(f1, f2, grid, IndexKind::PiTwoSample)
}

/// π(F₂, F₁) = sup (F₁ − F₂), reported with its own kind tag.
pub fn pi_index_reversed(f1: &Distribution, f2: &Distribution, grid: usize) -> ContaminationIndex {
    two_sample(f2, f1, grid, IndexKind::PiTwoSampleReversed)
}

/// Two-sided distance sup |F₁ − F₂| = max(π(F₁,F₂), π(F₂,F₁)).
pub fn ks_distance(f1: &Distribution, f2: &Distribution, grid: usize) -> f64 {
    pi_index(f1, f2, grid).value.max(pi_index(f2, f1, grid).value)
}

fn two_sample(f1: &Distribution, f2: &Distribution, grid: usize, kind: IndexKind) -> ContaminationIndex {
    if let (Some(x), Some(y)) = (f1.as_sample(), f2.as_sample()) {
        let stat = empirical_pi(x, y);
        return ContaminationIndex::new(stat.pi_hat(), kind, stat.argmax_points.first().copied());
    }
    let (value, arg) =
        sup_search(&[f1, f2], grid, |x| Some(f2.cdf(x) - f1.cdf(x)), |x| Some(f2.cdf_left(x) - f1.cdf_left(x)));
    // The level 0 is always approached at ±∞.
    ContaminationIndex::new(value.max(0.0), kind, arg)
}

/// Supremum of `eval` (right values) and `eval_left` (left limits at knots)
/// over a grid on the union of supports, refined around the incumbent.
/// Points where the functional is undefined return `None`.
fn sup_search<E, L>(dists: &[&Distribution], grid: usize, eval: E, eval_left: L) -> (f64, Option<f64>)
where
    E: Fn(f64) -> Option<f64>,
    L: Fn(f64) -> Option<f64>,
{
    let grid = grid.max(2);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut knots = Vec::new();
    for d in dists {
        let (a, b) = d.support_hint();
        // A margin so that behaviour just outside bounded supports is seen.
        let margin = if d.is_compact() { 1e-3 * (b - a).max(1e-9) } else { 0.0 };
        lo = lo.min(a - margin);
        hi = hi.max(b + margin);
        knots.extend(d.knots());
    }
    let mut points: Vec<f64> = (0..grid).map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64).collect();
    points.extend(knots.iter().copied());
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut best = f64::NEG_INFINITY;
    let mut arg = None;
    let consider = |x: f64, v: Option<f64>, best: &mut f64, arg: &mut Option<f64>| {
        if let Some(v) = v {
            if v > *best {
                *best = v;
                *arg = Some(x);
            }
        }
    };
    for &x in &points {
        consider(x, eval(x), &mut best, &mut arg);
    }
    for &k in &knots {
        consider(k, eval_left(k), &mut best, &mut arg);
    }

    // Refine inside the bracket of the best grid point.
    let mut bracket = match arg {
        Some(c) => {
            let i = points.partition_point(|&p| p < c);
            let left = if i > 0 { points[i - 1] } else { c };
            let right = points.get(i + 1).copied().unwrap_or(c);
            (left, right)
        }
        None => return (0.0, None),
    };
    for _ in 0..REFINE_ROUNDS {
        let (a, b) = bracket;
        if b <= a {
            break;
        }
        let steps = 2 * REFINE_FACTOR;
        let h = (b - a) / steps as f64;
        for j in 0..=steps {
            let x = a + j as f64 * h;
            consider(x, eval(x), &mut best, &mut arg);
        }
        let c = arg.expect("incumbent exists");
        bracket = ((c - h).max(a), (c + h).min(b));
    }
    (best, arg)
}

/// A finitely supported probability: strictly increasing locations with
/// positive masses summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(domain("a discrete measure needs at least one atom"));
        }
        if atoms.iter().any(|&(x, p)| !x.is_finite() || p.is_nan() || p <= 0.0) {
            return Err(domain("atoms need finite locations and positive masses"));
        }
        if atoms.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(domain("atom locations must be strictly increasing"));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain(format!("atom masses sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms })
    }

    /// The empirical measure of a sample, ties merged.
    pub fn from_sample(sample: &Sample) -> Self {
        let n = sample.len() as f64;
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        for &v in sample.values() {
            match atoms.last_mut() {
                Some(last) if last.0 == v => last.1 += 1.0 / n,
                _ => atoms.push((v, 1.0 / n)),
            }
        }
        DiscreteMeasure { atoms }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Mass of the single point `x`.
    pub fn mass_at(&self, x: f64) -> f64 {
        match self.atoms.binary_search_by(|a| a.0.total_cmp(&x)) {
            Ok(i) => self.atoms[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|a| a.0 <= x);
        self.atoms[..k].iter().map(|a| a.1).sum::<f64>().min(1.0)
    }
}

/// Whether `p0` is a π-trimming of `p`: (1 − π)·P₀({s}) ≤ P({s}) at every
/// atom `s` of P₀. A relative slack of 1e-12 absorbs rounding in the masses.
pub fn is_trimming(p0: &DiscreteMeasure, p: &DiscreteMeasure, pi: f64) -> bool {
    p0.atoms.iter().all(|&(s, mass)| {
        let lhs = (1.0 - pi) * mass;
        lhs <= p.mass_at(s) + 1e-12 * lhs
    })
}

/// θ(F, G) = P(X ≤ Y) for independent X ~ F and Y ~ G.
///
/// Exact for empirical laws (the fraction of pairs with Xᵢ ≤ Yⱼ when both are
/// empirical); otherwise by quadrature of 1 − G(F⁻¹(u)−) over u.
pub fn precedence_index(f: &Distribution, g: &Distribution) -> f64 {
    match (f.as_sample(), g.as_sample()) {
        (Some(x), Some(y)) => {
            let m = y.len();
            let pairs: usize = x.values().iter().map(|&xi| m - y.count_lt(xi)).sum();
            pairs as f64 / (x.len() as f64 * m as f64)
        }
        (Some(x), None) => {
            let s: f64 = x.values().iter().map(|&xi| 1.0 - g.cdf_left(xi)).sum();
            s / x.len() as f64
        }
        (None, Some(y)) => {
            let s: f64 = y.values().iter().map(|&yj| f.cdf(yj)).sum();
            s / y.len() as f64
        }
        (None, None) => {
            const EDGE: f64 = 1e-13;
            let integrand = |u: f64| {
                let q = f.quantile(u).expect("level inside (0, 1)");
                1.0 - g.cdf_left(q)
            };
            adaptive_simpson(integrand, EDGE, 1.0 - EDGE, 1e-11).clamp(0.0, 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_model::{make_least_favorable, pushforward, LeastFavorable, MixturePiece, MonotoneMap};
    use crate::normal;
    use crate::rng::generator;
    use rand::Rng;

    fn unif() -> Distribution {
        Distribution::standard_uniform()
    }

    #[test]
    fn trim_extremes_examples() {
        let (lower, upper) = trim_extremes(&unif(), 0.0).unwrap();
        assert_eq!(lower, unif());
        assert_eq!(upper, unif());
        let (lower, upper) = trim_extremes(&unif(), 0.5).unwrap();
        assert_eq!(lower.cdf(0.25), 0.5);
        assert_eq!(upper.cdf(0.75), 0.5);
        assert_eq!(lower.cdf(0.6), 1.0);
        assert_eq!(upper.cdf(0.4), 0.0);
        assert!(trim_extremes(&unif(), 1.0).is_err());
    }

    #[test]
    fn sqrt_law_examples() {
        let s = Distribution::sqrt_law();
        assert_eq!(min_contamination_below(&s, &unif(), DEFAULT_GRID).value, 0.0);
        let above = min_contamination_above(&s, &unif(), DEFAULT_GRID).value;
        assert!((above - 0.5).abs() < 1e-6, "{above}");
        assert_eq!(min_contamination_above(&unif(), &s, DEFAULT_GRID).value, 0.0);
        assert_eq!(pi_index(&s, &unif(), DEFAULT_GRID).value, 0.0);
        let p = pi_index(&unif(), &s, DEFAULT_GRID).value;
        assert!((p - 0.25).abs() < 1e-6, "{p}");
    }

    #[test]
    fn normal_shift_examples() {
        let g = Distribution::normal(0.0, 1.0).unwrap();
        for &mu in &[0.1, 0.5, 1.0] {
            let f = Distribution::normal(mu, 1.0).unwrap();
            let want = 2.0 * normal::cdf(mu / 2.0) - 1.0;
            let got = pi_index(&f, &g, DEFAULT_GRID).value;
            assert!((got - want).abs() < 1e-6, "mu={mu}: {got} vs {want}");
        }
        let f = Distribution::normal(1.0, 1.0).unwrap();
        let idx = min_contamination_below(&f, &g, DEFAULT_GRID);
        assert!(idx.is_total(), "{idx:?}");
        assert!((pi_index(&f, &g, DEFAULT_GRID).value - 0.382_925).abs() < 1e-6);
    }

    #[test]
    fn self_indices_vanish() {
        let laws = vec![
            unif(),
            Distribution::normal(2.0, 0.5).unwrap(),
            Distribution::sqrt_law(),
            Distribution::empirical(Sample::new(vec![1.0, 2.0, 2.0, 5.0]).unwrap()),
        ];
        for d in &laws {
            assert_eq!(pi_index(d, d, DEFAULT_GRID).value, 0.0);
            assert_eq!(min_contamination_below(d, d, DEFAULT_GRID).value, 0.0);
            assert_eq!(min_contamination_above(d, d, DEFAULT_GRID).value, 0.0);
        }
    }

    #[test]
    fn least_favorable_index() {
        for fam in [LeastFavorable::ForBoundary, LeastFavorable::ForPower, LeastFavorable::AgainstPower] {
            let d = make_least_favorable(fam, 0.1, 0.5).unwrap();
            let p = pi_index(&d, &unif(), DEFAULT_GRID).value;
            assert!((p - 0.1).abs() < 1e-12, "{fam:?}: {p}");
        }
    }

    #[test]
    fn transform_invariance() {
        let map = MonotoneMap::from_knots(&[(-1.0, -5.0), (0.3, 0.0), (0.8, 0.2), (2.0, 7.0)]).unwrap();
        let f1 = unif();
        let f2 = Distribution::sqrt_law();
        let direct = pi_index(&f1, &f2, DEFAULT_GRID).value;
        let mapped = pi_index(&pushforward(&f1, &map), &pushforward(&f2, &map), DEFAULT_GRID).value;
        assert!((direct - mapped).abs() < 1e-9, "{direct} vs {mapped}");
    }

    #[test]
    fn is_trimming_examples() {
        let point = DiscreteMeasure::new(vec![(0.0, 1.0)]).unwrap();
        let coin = DiscreteMeasure::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!(is_trimming(&coin, &coin, 0.0));
        assert!(is_trimming(&point, &coin, 0.5));
        assert!(!is_trimming(&point, &coin, 0.4));
    }

    #[test]
    fn precedence_examples() {
        assert!((precedence_index(&unif(), &unif()) - 0.5).abs() < 1e-9);
        let x = Distribution::empirical(Sample::new(vec![1.0, 3.0]).unwrap());
        let y = Distribution::empirical(Sample::new(vec![2.0, 4.0]).unwrap());
        assert_eq!(precedence_index(&x, &y), 0.75);
        // Uniform ≥_st √x-law, so θ(Sqrt, U) ≥ ½; exact value 2/3.
        let theta = precedence_index(&Distribution::sqrt_law(), &unif());
        assert!((theta - 2.0 / 3.0).abs() < 1e-8, "{theta}");
        let n = Distribution::normal(0.0, 1.0).unwrap();
        assert!((precedence_index(&n, &n) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn extremality_of_trimmings() {
        // Discretize U(0,1) into 50 atoms, draw random trimming densities
        // 0 ≤ g ≤ 1/(1−π) with ∫g dF = 1, and compare with the extremes.
        let mut rng = generator(2_202);
        let k = 50;
        let w = 1.0 / k as f64;
        let locs: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) * w).collect();
        let base = Distribution::empirical(Sample::new(locs.clone()).unwrap());
        for _ in 0..200 {
            let pi: f64 = rng.gen_range(0.01..0.9);
            let cap = 1.0 / (1.0 - pi);
            // Fill capacity in a random order until total mass 1.
            let mut g = vec![0.0; k];
            let mut order: Vec<usize> = (0..k).collect();
            for i in (1..k).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut remaining = 1.0;
            for &i in &order {
                let take = (cap * w * rng.gen_range(0.3..1.0)).min(remaining);
                g[i] = take / w;
                remaining -= take;
            }
            for &i in &order {
                let room = (cap - g[i]) * w;
                let take = room.min(remaining);
                g[i] += take / w;
                remaining -= take;
            }
            assert!(remaining.abs() < 1e-12);
            let (lower, upper) = trim_extremes(&base, pi).unwrap();
            let mut acc = 0.0;
            for (i, &x) in locs.iter().enumerate() {
                acc += g[i] * w;
                assert!(upper.cdf(x) <= acc + 1e-12, "upper at {x}");
                assert!(acc <= lower.cdf(x) + 1e-12, "lower at {x}");
            }
        }
    }

    /// Least feasible π by bisection: build the greedy lower-tail trimming
    /// of F, check membership atom-wise and compare CDFs with F₀.
    fn brute_force_pi0(f: &DiscreteMeasure, f0: &DiscreteMeasure) -> f64 {
        let mut locs: Vec<f64> = f.atoms().iter().chain(f0.atoms()).map(|a| a.0).collect();
        locs.sort_by(f64::total_cmp);
        locs.dedup();
        let feasible = |pi: f64| {
            let cap = 1.0 / (1.0 - pi);
            let mut remaining = 1.0;
            let mut atoms = Vec::new();
            for &(x, p) in f.atoms() {
                let take = (p * cap).min(remaining);
                if take > 0.0 {
                    atoms.push((x, take));
                }
                remaining -= take;
            }
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let last = atoms.len() - 1;
            atoms[last].1 += 1.0 - total;
            let q = DiscreteMeasure { atoms };
            is_trimming(&q, f, pi) && locs.iter().all(|&x| q.cdf(x) >= f0.cdf(x) - 1e-13)
        };
        if feasible(0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0 - 1e-13);
        if !feasible(hi) {
            return 1.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn random_discrete<R: Rng>(rng: &mut R) -> (DiscreteMeasure, Sample) {
        let k = rng.gen_range(1..=20);
        let mut values = Vec::new();
        for _ in 0..k {
            let loc = rng.gen_range(0..12) as f64;
            for _ in 0..rng.gen_range(1..4) {
                values.push(loc);
            }
        }
        let s = Sample::new(values).unwrap();
        (DiscreteMeasure::from_sample(&s), s)
    }

    #[test]
    fn pi0_matches_brute_force() {
        let mut rng = generator(77);
        for _ in 0..300 {
            let (f, fs) = random_discrete(&mut rng);
            let (f0, f0s) = random_discrete(&mut rng);
            let formula =
                min_contamination_below(&Distribution::empirical(fs), &Distribution::empirical(f0s), DEFAULT_GRID)
                    .value;
            let brute = brute_force_pi0(&f, &f0);
            assert!((formula - brute).abs() < 1e-9, "{formula} vs {brute}");
        }
    }

    #[test]
    fn ks_decomposition_on_grid() {
        let pairs = vec![
            (Distribution::sqrt_law(), unif()),
            (Distribution::normal(0.3, 1.0).unwrap(), Distribution::normal(0.0, 2.0).unwrap()),
            (
                Distribution::mixture(vec![MixturePiece::new(0.5, 0.0, 0.2), MixturePiece::new(0.5, 0.6, 1.0)])
                    .unwrap(),
                unif(),
            ),
        ];
        for (a, b) in pairs {
            let (lo, hi) = (-6.0, 6.0);
            let mut pts: Vec<f64> = (0..200_001).map(|i| lo + (hi - lo) * i as f64 / 200_000.0).collect();
            pts.extend(a.knots());
            pts.extend(b.knots());
            let direct = pts.iter().map(|&x| (a.cdf(x) - b.cdf(x)).abs()).fold(0.0, f64::max);
            let split = ks_distance(&a, &b, DEFAULT_GRID);
            assert!((direct - split).abs() < 1e-6, "{a} vs {b}: {direct} {split}");
        }
    }
}
