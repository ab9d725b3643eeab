//! Minimal contamination indices between analytic laws, and the trimmed
//! extremes that realise them.

use stocorder::contamination::{
    ks_distance, min_contamination_above, min_contamination_below, pi_index, precedence_index, trim_extremes,
    DEFAULT_GRID,
};
use stocorder::Distribution;

fn main() -> stocorder::Result<()> {
    let u = Distribution::standard_uniform();
    let s = Distribution::sqrt_law();

    println!("F = {u}, G = {s}");
    println!("  pi(F, G)      = {:.6}", pi_index(&u, &s, DEFAULT_GRID).value);
    println!("  pi0'(G vs F)  = {:.6}", min_contamination_above(&s, &u, DEFAULT_GRID).value);
    println!("  KS(F, G)      = {:.6}", ks_distance(&u, &s, DEFAULT_GRID));
    println!("  P(X <= Y)     = {:.6}", precedence_index(&u, &s));

    let g = Distribution::normal(0.0, 1.0)?;
    for mu in [0.1, 0.5, 1.0] {
        let f = Distribution::normal(mu, 1.0)?;
        let pi = pi_index(&f, &g, DEFAULT_GRID);
        let at = pi.argmax.unwrap_or(f64::NAN);
        let below = min_contamination_below(&f, &g, DEFAULT_GRID);
        println!("N({mu}, 1) vs N(0, 1): pi = {:.6} at x = {:.4}, pi0 = {}", pi.value, at, below.value);
    }

    let (lower, upper) = trim_extremes(&u, 0.2)?;
    println!("20% trimmings of {u}:");
    for x in [0.1, 0.5, 0.9] {
        println!("  x = {x}: lower {:.4}  F {:.4}  upper {:.4}", lower.cdf(x), u.cdf(x), upper.cdf(x));
    }
    Ok(())
}
