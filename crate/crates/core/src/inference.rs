//! Two-sample inference on π(F, G) = sup (G − F): the exact statistic
//! π(Fₙ, Gₘ), contact sets, bootstrap bias correction and sup quantiles,
//! tests for and against essential stochastic order, and confidence bounds.
//!
//! `x` is always the sample from F and `y` the sample from G.

use rayon::prelude::*;

use crate::dist_model::Sample;
use crate::error::{config, domain, Result};
use crate::limit_law::{self, sigma_envelope, sigma_t, LimitLawParams};
use crate::normal;
use crate::rng::{derived, open01};

/// Tolerance constant K of the enlarged contact set.
pub const DEFAULT_K_CONST: f64 = 2.5;
/// Bootstrap replicates used when none are given.
pub const DEFAULT_BOOTSTRAP: usize = 1000;
/// Smallest B accepted for bootstrap quantiles.
pub const MIN_BOOTSTRAP_QUANTILE: usize = 50;

/// The exact statistic π(Fₙ, Gₘ) with its evaluation trail.
///
/// At every distinct pooled location p with k = #{yⱼ ≤ p} and j = #{xᵢ ≤ p}
/// the value of Gₘ − Fₙ is (k·n − j·m)/(n·m); all comparisons use the
/// integer numerator.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleStat {
    pub n: usize,
    pub m: usize,
    /// max(0, max_p (k·n − j·m)); π̂ = numerator / (n·m).
    pub numerator: i64,
    pub lambda_nm: f64,
    /// Pooled points where the supremum is attained.
    pub argmax_points: Vec<f64>,
    /// Distinct values of Gₘ at the argmax points, ascending.
    pub t_values: Vec<f64>,
    pooled: Vec<f64>,
    diffs: Vec<i64>,
    y_counts: Vec<usize>,
    x_counts: Vec<usize>,
}

impl TwoSampleStat {
    pub fn pi_hat(&self) -> f64 {
        self.numerator as f64 / (self.n as f64 * self.m as f64)
    }

    /// √(nm/(n+m)).
    pub fn scale(&self) -> f64 {
        scale(self.n, self.m)
    }

    /// Distinct pooled locations, ascending.
    pub fn pooled(&self) -> &[f64] {
        &self.pooled
    }

    /// Numerators k·n − j·m at the pooled locations.
    pub fn diffs(&self) -> &[i64] {
        &self.diffs
    }

    /// σ̂ = min over t ∈ T̂ of σ_t(π̂, λ_nm). May be 0.
    pub fn sigma_hat(&self) -> f64 {
        let pi = self.pi_hat();
        self.t_values
            .iter()
            .map(|&t| sigma_t(t.max(pi), pi, self.lambda_nm).expect("t lies in [pi, 1]"))
            .fold(f64::INFINITY, f64::min)
    }
}

fn scale(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (n * m / (n + m)).sqrt()
}

/// π(Fₙ, Gₘ) by one merge pass over the pooled sorted samples.
///
/// Tied observations are absorbed before a location's value is recorded,
/// so the recorded value is the right-continuous one; left limits equal the
/// value at the previous location, and the level 0 to the left of all data
/// is included.
pub fn empirical_pi(x: &Sample, y: &Sample) -> TwoSampleStat {
    let (xs, ys) = (x.values(), y.values());
    let (n, m) = (xs.len(), ys.len());
    let cap = n + m;
    let mut pooled = Vec::with_capacity(cap);
    let mut diffs = Vec::with_capacity(cap);
    let mut y_counts = Vec::with_capacity(cap);
    let mut x_counts = Vec::with_capacity(cap);
    let (mut i, mut k) = (0usize, 0usize);
    let mut best = 0i64;
    while i < n || k < m {
        let loc = match (xs.get(i), ys.get(k)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while k < m && ys[k] == loc {
            k += 1;
        }
        while i < n && xs[i] == loc {
            i += 1;
        }
        let d = k as i64 * n as i64 - i as i64 * m as i64;
        best = best.max(d);
        pooled.push(loc);
        diffs.push(d);
        y_counts.push(k);
        x_counts.push(i);
    }
    let mut argmax_points = Vec::new();
    let mut t_values: Vec<f64> = Vec::new();
    for (idx, &d) in diffs.iter().enumerate() {
        if d == best {
            argmax_points.push(pooled[idx]);
            let t = y_counts[idx] as f64 / m as f64;
            if t_values.last() != Some(&t) {
                t_values.push(t);
            }
        }
    }
    t_values.sort_by(f64::total_cmp);
    t_values.dedup();
    TwoSampleStat {
        n,
        m,
        numerator: best,
        lambda_nm: n as f64 / (n + m) as f64,
        argmax_points,
        t_values,
        pooled,
        diffs,
        y_counts,
        x_counts,
    }
}

/// δ_nm = K·√((n+m)/(nm) · ln ln(nm/(n+m))). Needs nm/(n+m) > e.
pub fn delta_nm(n: usize, m: usize, k_const: f64) -> Result<f64> {
    let h = n as f64 * m as f64 / (n + m) as f64;
    if h <= std::f64::consts::E {
        return Err(domain(format!(
            "nm/(n+m) = {h:.4} must exceed e; use samples with n, m of at least 6 (e.g. n = m = 6)"
        )));
    }
    if !(k_const > 0.0 && k_const.is_finite()) {
        return Err(domain(format!("K = {k_const} must be positive")));
    }
    Ok(k_const * (h.ln().ln() / h).sqrt())
}

/// The enlarged empirical contact set Γₙ and the exact argmax levels T̂.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactSets {
    /// Pooled points whose value of Gₘ − Fₙ is at least π̂ − δ_nm.
    pub gamma_n: Vec<f64>,
    pub delta_nm: f64,
    pub t_hat: Vec<f64>,
    /// True when the level 0 left of the data also qualifies.
    pub includes_left_tail: bool,
    gamma_idx: Vec<usize>,
}

pub fn contact_sets(x: &Sample, y: &Sample, k_const: f64) -> Result<ContactSets> {
    let stat = empirical_pi(x, y);
    contact_sets_for(&stat, k_const)
}

fn contact_sets_for(stat: &TwoSampleStat, k_const: f64) -> Result<ContactSets> {
    let delta = delta_nm(stat.n, stat.m, k_const)?;
    let nm = stat.n as f64 * stat.m as f64;
    // d/(nm) ≥ π̂ − δ  ⇔  d ≥ numerator − δ·nm.
    let cut = stat.numerator as f64 - delta * nm;
    let gamma_idx: Vec<usize> = (0..stat.diffs.len()).filter(|&i| stat.diffs[i] as f64 >= cut).collect();
    Ok(ContactSets {
        gamma_n: gamma_idx.iter().map(|&i| stat.pooled[i]).collect(),
        delta_nm: delta,
        t_hat: stat.t_values.clone(),
        includes_left_tail: 0.0 >= cut,
        gamma_idx,
    })
}

/// σ̂ of the plug-in test.
pub fn sigma_hat(x: &Sample, y: &Sample) -> f64 {
    empirical_pi(x, y).sigma_hat()
}

/// One bootstrap world: multinomial counts turned into prefix counts at the
/// original sorted positions. `prefix[j]` = number of draws among the j
/// smallest observations.
fn resample_prefix(len: usize, rng: &mut impl rand::Rng, counts: &mut Vec<u32>, prefix: &mut Vec<u32>) {
    counts.clear();
    counts.resize(len, 0);
    let l = len as f64;
    for _ in 0..len {
        let idx = ((open01(rng) * l).ceil() as usize).clamp(1, len) - 1;
        counts[idx] += 1;
    }
    prefix.clear();
    prefix.push(0);
    let mut acc = 0;
    for &c in counts.iter() {
        acc += c;
        prefix.push(acc);
    }
}

/// Runs `f` on B bootstrap worlds; world `b` uses the generator derived
/// from `(seed, b)`. Results come back in index order.
fn bootstrap_map<T, F>(stat: &TwoSampleStat, b: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[u32], &[u32]) -> T + Sync,
{
    (0..b)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new(), Vec::new(), Vec::new()),
            |(cx, px, cy, py), idx| {
                let mut rng = derived(seed, idx as u64);
                resample_prefix(stat.n, &mut rng, cx, px);
                resample_prefix(stat.m, &mut rng, cy, py);
                f(px, py)
            },
        )
        .collect()
}

/// Bootstrap estimate of the bias of π̂ and the corrected estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasCorrection {
    pub bias_hat: f64,
    /// π̂ − bias, clamped to [0, 1].
    pub pi_boot: f64,
}

pub fn bootstrap_bias_correct(x: &Sample, y: &Sample, b: usize, seed: u64) -> Result<BiasCorrection> {
    bias_correct(&empirical_pi(x, y), b, seed)
}

fn bias_correct(stat: &TwoSampleStat, b: usize, seed: u64) -> Result<BiasCorrection> {
    if b == 0 {
        return Err(config("bootstrap needs at least one replicate"));
    }
    let (n, m) = (stat.n as i64, stat.m as i64);
    let numerators = bootstrap_map(stat, b, seed, |px, py| {
        let mut best = 0i64;
        for (&k, &j) in stat.y_counts.iter().zip(&stat.x_counts) {
            best = best.max(py[k] as i64 * n - px[j] as i64 * m);
        }
        best
    });
    let nm = stat.n as f64 * stat.m as f64;
    let mean = numerators.iter().map(|&v| v as f64).sum::<f64>() / (b as f64 * nm);
    let pi_hat = stat.pi_hat();
    let bias_hat = mean - pi_hat;
    Ok(BiasCorrection { bias_hat, pi_boot: (pi_hat - bias_hat).clamp(0.0, 1.0) })
}

/// Order statistic ⌈αB⌉ of the bootstrap sup statistic
/// √(nm/(n+m))·sup_{Γₙ} ((Gₘ* − Gₘ) − (Fₙ* − Fₙ)).
pub fn bootstrap_sup_quantile(x: &Sample, y: &Sample, k_const: f64, b: usize, alpha: f64, seed: u64) -> Result<f64> {
    let stat = empirical_pi(x, y);
    let sets = contact_sets_for(&stat, k_const)?;
    sup_quantile(&stat, &sets, b, alpha, seed)
}

fn sup_quantile(stat: &TwoSampleStat, sets: &ContactSets, b: usize, alpha: f64, seed: u64) -> Result<f64> {
    if b < MIN_BOOTSTRAP_QUANTILE {
        return Err(config(format!("bootstrap quantiles need B >= {MIN_BOOTSTRAP_QUANTILE}, got {b}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    let (n, m) = (stat.n as i64, stat.m as i64);
    let mut values: Vec<f64> = bootstrap_map(stat, b, seed, |px, py| {
        // (K* − k)·n − (J* − j)·m over the contact points, as integers.
        let mut best = if sets.includes_left_tail { 0i64 } else { i64::MIN };
        for &i in &sets.gamma_idx {
            let (k, j) = (stat.y_counts[i], stat.x_counts[i]);
            let d = (py[k] as i64 - k as i64) * n - (px[j] as i64 - j as i64) * m;
            best = best.max(d);
        }
        best as f64 / (stat.n as f64 * stat.m as f64) * stat.scale()
    });
    values.sort_by(f64::total_cmp);
    let rank = crate::dist_model::ceil_rank(alpha, b);
    Ok(values[rank - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Reject,
    Retain,
}

impl Decision {
    pub fn is_reject(self) -> bool {
        self == Decision::Reject
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Reject => "reject",
            Decision::Retain => "retain",
        }
    }
}

/// Threshold rule of a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// For essential order, σ̄ at π₀.
    Conservative,
    /// For essential order, plug-in σ̂.
    Plugin,
    /// For essential order, bias-corrected estimate with σ̂.
    Boot,
    /// Against essential order, quantile of the limit law at π₀.
    Against,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Conservative => "conservative",
            Method::Plugin => "plugin",
            Method::Boot => "boot",
            Method::Against => "against",
        }
    }
}

/// Every constant that entered a decision.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Constants {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub pi0: f64,
    pub lambda_nm: f64,
    pub pi_hat: f64,
    pub pi_boot: Option<f64>,
    pub bias_hat: Option<f64>,
    pub sigma_bar: Option<f64>,
    pub sigma_hat: Option<f64>,
    /// The σ multiplying Φ⁻¹(α) in the threshold.
    pub sigma_used: Option<f64>,
    /// True when σ̂ was 0 and the envelope σ̄ replaced it.
    pub sigma_fallback: bool,
    pub k_quantile: Option<f64>,
    pub bootstrap: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub threshold: f64,
    pub decision: Decision,
    pub method: Method,
    pub constants: Constants,
}

fn check_alpha_below_half(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(config(format!("alpha = {alpha} must lie in (0, 1/2)")));
    }
    Ok(())
}

/// Bootstrap settings: number of replicates and base seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bootstrap {
    pub replicates: usize,
    pub seed: u64,
}

/// Test of H₀: π(F, G) ≥ π₀; rejection is evidence that F is
/// stochastically smaller than G up to contamination π₀.
pub fn test_for(
    x: &Sample,
    y: &Sample,
    pi0: f64,
    alpha: f64,
    method: Method,
    bootstrap: Option<Bootstrap>,
) -> Result<TestResult> {
    test_for_stat(&empirical_pi(x, y), pi0, alpha, method, bootstrap)
}

pub(crate) fn test_for_stat(
    stat: &TwoSampleStat,
    pi0: f64,
    alpha: f64,
    method: Method,
    bootstrap: Option<Bootstrap>,
) -> Result<TestResult> {
    check_alpha_below_half(alpha)?;
    if !(pi0 > 0.0 && pi0 < 1.0) {
        return Err(domain(format!("pi0 = {pi0} outside (0, 1)")));
    }
    let pi_hat = stat.pi_hat();
    let sigma_bar = sigma_envelope(pi0, stat.lambda_nm)?.sigma_upper;
    let z = normal::quantile(alpha);
    let mut c = Constants {
        n: stat.n,
        m: stat.m,
        alpha,
        pi0,
        lambda_nm: stat.lambda_nm,
        pi_hat,
        sigma_bar: Some(sigma_bar),
        ..Constants::default()
    };
    let estimate = match method {
        Method::Conservative => {
            c.sigma_used = Some(sigma_bar);
            pi_hat
        }
        Method::Plugin | Method::Boot => {
            let s = stat.sigma_hat();
            c.sigma_hat = Some(s);
            c.sigma_fallback = s == 0.0;
            c.sigma_used = Some(if s == 0.0 { sigma_bar } else { s });
            if method == Method::Boot {
                let bs = bootstrap.ok_or_else(|| config("the boot method needs bootstrap replicates"))?;
                let bc = bias_correct(stat, bs.replicates, bs.seed)?;
                c.bootstrap = Some(bs.replicates);
                c.seed = Some(bs.seed);
                c.bias_hat = Some(bc.bias_hat);
                c.pi_boot = Some(bc.pi_boot);
                bc.pi_boot
            } else {
                pi_hat
            }
        }
        Method::Against => return Err(config("use test_against for the against method")),
    };
    let statistic = stat.scale() * (estimate - pi0);
    let threshold = c.sigma_used.expect("set above") * z;
    let decision = if statistic < threshold { Decision::Reject } else { Decision::Retain };
    Ok(TestResult { statistic, threshold, decision, method, constants: c })
}

/// Test of H₀: π(F, G) ≤ π₀ with its critical value computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgainstTest {
    pub pi0: f64,
    pub alpha: f64,
    pub lambda: f64,
    /// K_{1−α}(π₀, λ).
    pub critical: f64,
}

impl AgainstTest {
    pub fn new(pi0: f64, alpha: f64, lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&pi0) {
            return Err(domain(format!("pi0 = {pi0} outside [0, 1)")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(config(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        let critical = limit_law::quantile(&LimitLawParams::new(pi0, lambda)?, 1.0 - alpha)?;
        Ok(AgainstTest { pi0, alpha, lambda, critical })
    }

    /// Applies the test; `stat.lambda_nm` must equal the λ used for the
    /// critical value.
    pub fn apply(&self, stat: &TwoSampleStat) -> Result<TestResult> {
        if (stat.lambda_nm - self.lambda).abs() > 1e-15 {
            return Err(config(format!(
                "critical value computed for lambda {} but samples give {}",
                self.lambda, stat.lambda_nm
            )));
        }
        let statistic = stat.scale() * (stat.pi_hat() - self.pi0);
        let decision = if statistic > self.critical { Decision::Reject } else { Decision::Retain };
        Ok(TestResult {
            statistic,
            threshold: self.critical,
            decision,
            method: Method::Against,
            constants: Constants {
                n: stat.n,
                m: stat.m,
                alpha: self.alpha,
                pi0: self.pi0,
                lambda_nm: stat.lambda_nm,
                pi_hat: stat.pi_hat(),
                k_quantile: Some(self.critical),
                ..Constants::default()
            },
        })
    }
}

/// Test of H₀: π(F, G) ≤ π₀; rejection is evidence against essential order.
pub fn test_against(x: &Sample, y: &Sample, pi0: f64, alpha: f64) -> Result<TestResult> {
    let stat = empirical_pi(x, y);
    AgainstTest::new(pi0, alpha, stat.lambda_nm)?.apply(&stat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    /// π̂ − K̂_α^Boot/√(nm/(n+m)). Can be too liberal; not recommended.
    UpperBoot,
    /// π̂_BOOT − σ̂·Φ⁻¹(α)/√(nm/(n+m)).
    UpperDirect,
    /// π̂ − K_{1−α}(π̂, λ)/√(nm/(n+m)).
    Lower,
}

impl BoundMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundMethod::UpperBoot => "upper-boot",
            BoundMethod::UpperDirect => "upper-direct",
            BoundMethod::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    /// The bound, clamped to [0, 1].
    pub value: f64,
    pub method: BoundMethod,
    pub constants: Constants,
    pub delta_nm: Option<f64>,
}

/// A one-sided confidence bound for π(F, G) at level 1 − α.
pub fn confidence_bounds(
    x: &Sample,
    y: &Sample,
    alpha: f64,
    method: BoundMethod,
    bootstrap: Option<Bootstrap>,
    k_const: f64,
) -> Result<Bound> {
    let stat = empirical_pi(x, y);
    let pi_hat = stat.pi_hat();
    let inv_scale = 1.0 / stat.scale();
    let mut c = Constants { n: stat.n, m: stat.m, alpha, lambda_nm: stat.lambda_nm, pi_hat, ..Constants::default() };
    let need_boot = || bootstrap.ok_or_else(|| config(format!("{} needs bootstrap replicates", method.as_str())));
    let mut delta = None;
    let raw = match method {
        BoundMethod::UpperBoot => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(config(format!("alpha = {alpha} must lie in (0, 1)")));
            }
            let bs = need_boot()?;
            let sets = contact_sets_for(&stat, k_const)?;
            let q = sup_quantile(&stat, &sets, bs.replicates, alpha, bs.seed)?;
            delta = Some(sets.delta_nm);
            c.k_quantile = Some(q);
            c.bootstrap = Some(bs.replicates);
            c.seed = Some(bs.seed);
            pi_hat - inv_scale * q
        }
        BoundMethod::UpperDirect => {
            check_alpha_below_half(alpha)?;
            let bs = need_boot()?;
            let bc = bias_correct(&stat, bs.replicates, bs.seed)?;
            let s = stat.sigma_hat();
            let sigma_bar = sigma_envelope(pi_hat.min(1.0 - 1e-12), stat.lambda_nm)?.sigma_upper;
            c.sigma_hat = Some(s);
            c.sigma_bar = Some(sigma_bar);
            c.sigma_fallback = s == 0.0;
            let sigma = if s == 0.0 { sigma_bar } else { s };
            c.sigma_used = Some(sigma);
            c.bias_hat = Some(bc.bias_hat);
            c.pi_boot = Some(bc.pi_boot);
            c.bootstrap = Some(bs.replicates);
            c.seed = Some(bs.seed);
            bc.pi_boot - inv_scale * sigma * normal::quantile(alpha)
        }
        BoundMethod::Lower => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(config(format!("alpha = {alpha} must lie in (0, 1)")));
            }
            let k = limit_law::quantile(&LimitLawParams::new(pi_hat, stat.lambda_nm)?, 1.0 - alpha)?;
            c.k_quantile = Some(k);
            pi_hat - inv_scale * k
        }
    };
    Ok(Bound { value: raw.clamp(0.0, 1.0), method, constants: c, delta_nm: delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_model::{make_least_favorable, Distribution, LeastFavorable, MonotoneMap};
    use crate::rng::generator;
    use proptest::prelude::*;

    fn s(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    /// Independent O(n·m·(n+m)) evaluation by counting.
    fn brute_force_numerator(x: &[f64], y: &[f64]) -> i64 {
        let (n, m) = (x.len() as i64, y.len() as i64);
        x.iter()
            .chain(y)
            .map(|&p| {
                let k = y.iter().filter(|&&v| v <= p).count() as i64;
                let j = x.iter().filter(|&&v| v <= p).count() as i64;
                k * n - j * m
            })
            .fold(0, i64::max)
    }

    fn two_sided_ks(x: &[f64], y: &[f64]) -> f64 {
        let (n, m) = (x.len() as f64, y.len() as f64);
        x.iter()
            .chain(y)
            .map(|&p| {
                let fx = x.iter().filter(|&&v| v <= p).count() as f64 / n;
                let gy = y.iter().filter(|&&v| v <= p).count() as f64 / m;
                (fx - gy).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn empirical_pi_examples() {
        assert_eq!(empirical_pi(&s(&[0.3, 0.5]), &s(&[0.3, 0.5])).pi_hat(), 0.0);
        assert_eq!(empirical_pi(&s(&[0.6, 0.8]), &s(&[0.2, 0.4])).pi_hat(), 1.0);
        let st = empirical_pi(&s(&[0.2, 0.8]), &s(&[0.4, 0.6]));
        assert_eq!(st.pi_hat(), 0.5);
        assert_eq!(st.t_values, vec![1.0]);
        assert_eq!(st.argmax_points, vec![0.6]);
    }

    #[test]
    fn ties_use_right_continuous_values() {
        // At 1.0 both samples jump; G−F there is 1 − 1/2.
        let st = empirical_pi(&s(&[1.0, 2.0]), &s(&[1.0, 1.0]));
        assert_eq!(st.numerator, brute_force_numerator(&[1.0, 2.0], &[1.0, 1.0]));
        assert_eq!(st.pi_hat(), 0.5);
    }

    #[test]
    fn contact_set_examples() {
        let d = delta_nm(1000, 1000, 2.5).unwrap();
        let exact = 2.5 * (0.002 * 500f64.ln().ln()).sqrt();
        assert!((d - exact).abs() < 1e-15, "{d}");
        assert!((d - 0.151_120).abs() < 1e-5, "{d}");
        assert!(delta_nm(2, 3, 2.5).is_err());

        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let c = contact_sets(&s(&xs), &s(&xs), 2.5).unwrap();
        assert_eq!(c.gamma_n, xs);
        assert!(c.includes_left_tail);

        let x = s(&[0.2, 0.8, 1.0, 1.4, 1.6, 2.0, 2.2]);
        let y = s(&[0.4, 0.6, 0.7, 1.1, 1.2, 1.3, 2.5]);
        let c = contact_sets(&x, &y, 2.5).unwrap();
        let st = empirical_pi(&x, &y);
        assert_eq!(c.t_hat, st.t_values);
        assert!(c.t_hat.iter().all(|&t| t >= st.pi_hat() && t <= 1.0));
    }

    #[test]
    fn sigma_hat_example() {
        let sh = sigma_hat(&s(&[0.2, 0.8]), &s(&[0.4, 0.6]));
        assert!((sh - 0.125f64.sqrt()).abs() < 1e-15);
        assert_eq!(sigma_hat(&s(&[0.1, 0.2]), &s(&[0.1, 0.2])), 0.0);
    }

    #[test]
    fn sigma_hat_converges_on_singleton_contact() {
        let f = make_least_favorable(LeastFavorable::ForBoundary, 0.2, 0.5).unwrap();
        let g = Distribution::standard_uniform();
        let n = 100_000;
        let x = f.sample(&mut generator(5), n).unwrap();
        let y = g.sample(&mut generator(6), n).unwrap();
        let sh = sigma_hat(&x, &y);
        assert!((sh * sh - 0.24).abs() < 0.01, "{}", sh * sh);
    }

    #[test]
    fn bootstrap_degenerate_and_deterministic() {
        let bc = bootstrap_bias_correct(&s(&[1.0]), &s(&[1.0]), 20, 3).unwrap();
        assert_eq!(bc, BiasCorrection { bias_hat: 0.0, pi_boot: 0.0 });
        let x = s(&[0.1, 0.5, 0.9, 1.3, 0.2]);
        let y = s(&[0.3, 0.4, 1.1]);
        let a = bootstrap_bias_correct(&x, &y, 200, 17).unwrap();
        let b = bootstrap_bias_correct(&x, &y, 200, 17).unwrap();
        assert_eq!(a.bias_hat.to_bits(), b.bias_hat.to_bits());
        assert!(bootstrap_bias_correct(&x, &y, 0, 1).is_err());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| bootstrap_bias_correct(&x, &y, 200, 17).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn sup_quantile_reproducible_and_guarded() {
        let g = Distribution::standard_uniform();
        let x = g.sample(&mut generator(1), 300).unwrap();
        let y = g.sample(&mut generator(2), 300).unwrap();
        let a = bootstrap_sup_quantile(&x, &y, 2.5, 200, 0.95, 4).unwrap();
        let b = bootstrap_sup_quantile(&x, &y, 2.5, 200, 0.95, 4).unwrap();
        assert_eq!(a, b);
        assert!(bootstrap_sup_quantile(&x, &y, 2.5, 49, 0.95, 4).is_err());
    }

    fn stat_with(n: usize, m: usize, pi_hat: f64) -> TwoSampleStat {
        // Numerator chosen to give the requested π̂ exactly on the n·m scale.
        let numerator = (pi_hat * n as f64 * m as f64).round() as i64;
        TwoSampleStat {
            n,
            m,
            numerator,
            lambda_nm: n as f64 / (n + m) as f64,
            argmax_points: vec![0.0],
            t_values: vec![1.0],
            pooled: vec![0.0],
            diffs: vec![numerator],
            y_counts: vec![m],
            x_counts: vec![0],
        }
    }

    #[test]
    fn conservative_arithmetic() {
        let r = test_for_stat(&stat_with(1000, 1000, 0.02), 0.05, 0.05, Method::Conservative, None).unwrap();
        assert!((r.statistic - (-0.670_820)).abs() < 1e-5, "{}", r.statistic);
        assert!((r.threshold - (-0.821_40)).abs() < 1e-5, "{}", r.threshold);
        assert_eq!(r.decision, Decision::Retain);
        let r = test_for_stat(&stat_with(1000, 1000, 0.01), 0.05, 0.05, Method::Conservative, None).unwrap();
        assert!((r.statistic - (-0.894_43)).abs() < 1e-5);
        assert_eq!(r.decision, Decision::Reject);
    }

    #[test]
    fn test_for_configuration_errors() {
        let st = stat_with(100, 100, 0.02);
        assert!(matches!(test_for_stat(&st, 0.05, 0.5, Method::Conservative, None), Err(crate::Error::Config(_))));
        assert!(matches!(test_for_stat(&st, 0.05, 0.05, Method::Boot, None), Err(crate::Error::Config(_))));
    }

    #[test]
    fn against_arithmetic() {
        let t = AgainstTest::new(0.0, 0.05, 0.5).unwrap();
        let r = t.apply(&stat_with(200, 200, 0.15)).unwrap();
        assert!((r.statistic - 1.5).abs() < 1e-12);
        assert!((r.threshold - 1.223_874).abs() < 1e-6);
        assert_eq!(r.decision, Decision::Reject);
        let t = AgainstTest::new(0.15, 0.05, 0.5).unwrap();
        let r = t.apply(&stat_with(200, 200, 0.15)).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.decision, Decision::Retain);
        assert!(t.apply(&stat_with(200, 100, 0.15)).is_err());
    }

    #[test]
    fn bounds_examples() {
        let x = s(&[0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1]);
        let y = s(&[0.0, 0.1, 0.2, 0.3, 0.4, 0.45, 0.55]);
        let lower = confidence_bounds(&y, &x, 0.05, BoundMethod::Lower, None, 2.5).unwrap();
        assert_eq!(lower.value, 0.0);
        let bs = Some(Bootstrap { replicates: 200, seed: 3 });
        let up = confidence_bounds(&x, &y, 0.05, BoundMethod::UpperDirect, bs, 2.5).unwrap();
        assert!(up.value >= up.constants.pi_boot.unwrap());
        let low = confidence_bounds(&x, &y, 0.05, BoundMethod::Lower, None, 2.5).unwrap();
        assert!(low.value <= low.constants.pi_hat);
        assert!(confidence_bounds(&x, &y, 0.05, BoundMethod::UpperBoot, None, 2.5).is_err());
        assert!(confidence_bounds(&x, &y, 0.6, BoundMethod::UpperDirect, bs, 2.5).is_err());
    }

    #[test]
    fn upper_direct_arithmetic() {
        // π̂_BOOT − σ̂·Φ⁻¹(α)/√500 with the example's inputs.
        let v = 0.04 - 0.35 * normal::quantile(0.05) / 500f64.sqrt();
        assert!((v - 0.065_75).abs() < 1e-5);
    }

    #[test]
    fn exactness_on_random_instances() {
        let mut rng = generator(500);
        use rand::Rng;
        for _ in 0..500 {
            let n = rng.gen_range(1..=50);
            let m = rng.gen_range(1..=50);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..30) as f64 / 7.0).collect();
            let y: Vec<f64> = (0..m).map(|_| rng.gen_range(0..30) as f64 / 7.0).collect();
            let st = empirical_pi(&s(&x), &s(&y));
            assert_eq!(st.numerator, brute_force_numerator(&x, &y));
        }
    }

    fn sample_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec((0i32..40).prop_map(|v| v as f64 * 0.25 - 3.0), 1..40)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_brute_force(x in sample_strategy(), y in sample_strategy()) {
            let st = empirical_pi(&s(&x), &s(&y));
            prop_assert_eq!(st.numerator, brute_force_numerator(&x, &y));
            let pi = st.pi_hat();
            prop_assert!((0.0..=1.0).contains(&pi));
            for &t in &st.t_values {
                prop_assert!(t >= pi && t <= 1.0);
            }
        }

        #[test]
        fn ks_decomposition(x in sample_strategy(), y in sample_strategy()) {
            let a = empirical_pi(&s(&x), &s(&y)).pi_hat();
            let b = empirical_pi(&s(&y), &s(&x)).pi_hat();
            prop_assert!((a.max(b) - two_sided_ks(&x, &y)).abs() < 1e-12);
        }

        #[test]
        fn rank_invariance(
            x in sample_strategy(),
            y in sample_strategy(),
            s1 in 0.1f64..5.0,
            s2 in 0.1f64..5.0,
            shift in -10.0f64..10.0,
        ) {
            let map = MonotoneMap::from_knots(&[(-3.0, shift), (0.5, shift + 3.5 * s1), (7.0, shift + 3.5 * s1 + 6.5 * s2)]).unwrap();
            let (xs, ys) = (s(&x), s(&y));
            let (xm, ym) = (xs.map(&map), ys.map(&map));
            let a = empirical_pi(&xs, &ys);
            let b = empirical_pi(&xm, &ym);
            prop_assert_eq!(a.numerator, b.numerator);
            prop_assert_eq!(&a.t_values, &b.t_values);
            prop_assert_eq!(a.sigma_hat().to_bits(), b.sigma_hat().to_bits());
            for method in [Method::Conservative, Method::Plugin] {
                let ra = test_for(&xs, &ys, 0.1, 0.05, method, None).unwrap();
                let rb = test_for(&xm, &ym, 0.1, 0.05, method, None).unwrap();
                prop_assert_eq!(ra.decision, rb.decision);
            }
            let bs = Some(Bootstrap { replicates: 20, seed: 8 });
            let ra = test_for(&xs, &ys, 0.1, 0.05, Method::Boot, bs).unwrap();
            let rb = test_for(&xm, &ym, 0.1, 0.05, Method::Boot, bs).unwrap();
            prop_assert_eq!(ra.statistic.to_bits(), rb.statistic.to_bits());
            let ra = test_against(&xs, &ys, 0.05, 0.05).unwrap();
            let rb = test_against(&xm, &ym, 0.05, 0.05).unwrap();
            prop_assert_eq!(ra.decision, rb.decision);
        }
    }

    #[test]
    fn decisions_monotone_in_pi0() {
        let f = make_least_favorable(LeastFavorable::ForPower, 0.08, 0.5).unwrap();
        let g = Distribution::standard_uniform();
        for seed in 0..5 {
            let x = f.sample(&mut generator(seed), 400).unwrap();
            let y = g.sample(&mut generator(seed + 100), 400).unwrap();
            let grid: Vec<f64> = (1..40).map(|i| i as f64 * 0.005).collect();
            let for_rej: Vec<bool> = grid
                .iter()
                .map(|&p| test_for(&x, &y, p, 0.05, Method::Conservative, None).unwrap().decision.is_reject())
                .collect();
            assert!(for_rej.windows(2).all(|w| !w[0] || w[1]), "test_for not monotone");
            let against_rej: Vec<bool> =
                grid.iter().map(|&p| test_against(&x, &y, p, 0.05).unwrap().decision.is_reject()).collect();
            assert!(against_rej.windows(2).all(|w| w[0] || !w[1]), "test_against not monotone");
        }
    }
}
