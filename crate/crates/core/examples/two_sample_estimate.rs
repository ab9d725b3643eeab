//! The exact two-sample statistic, its plug-in spread and the bootstrap
//! bias correction.

use stocorder::inference::{bootstrap_bias_correct, contact_sets, empirical_pi, DEFAULT_K_CONST};
use stocorder::rng::generator;
use stocorder::Distribution;

fn main() -> stocorder::Result<()> {
    let mut rng = generator(42);
    let x = Distribution::uniform(0.1, 1.1)?.sample(&mut rng, 500)?;
    let y = Distribution::standard_uniform().sample(&mut rng, 500)?;

    let stat = empirical_pi(&x, &y);
    println!("n = {}, m = {}, lambda = {}", stat.n, stat.m, stat.lambda_nm);
    println!("pi_hat    = {:.4}  (true value 0.1)", stat.pi_hat());
    println!("sigma_hat = {:.4}", stat.sigma_hat());
    println!("argmax at {:?}", stat.argmax_points);

    let sets = contact_sets(&x, &y, DEFAULT_K_CONST)?;
    println!("delta_nm = {:.4}, |Gamma_n| = {}", sets.delta_nm, sets.gamma_n.len());

    let bias = bootstrap_bias_correct(&x, &y, 1000, 7)?;
    println!("bias_hat = {:.4}, pi_boot = {:.4}", bias.bias_hat, bias.pi_boot);
    Ok(())
}
