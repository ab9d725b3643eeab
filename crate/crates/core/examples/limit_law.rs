//! The limit law of the scaled statistic: closed-form tail, quantiles and
//! moments against the Brownian-bridge oracle.

use stocorder::limit_law::{moments, oracle_batch, quantile, sigma_envelope, tail_prob, LimitLawParams, SupSampling};

fn main() -> stocorder::Result<()> {
    let p = LimitLawParams::new(0.3, 0.5)?;
    let draws = oracle_batch(&p, 1000, 20_000, SupSampling::BridgeCorrected, 1);
    println!("a = 0.3, lambda = 0.5");
    println!("{:>6} {:>10} {:>10}", "v", "formula", "oracle");
    for v in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5] {
        let mc = draws.iter().filter(|&&d| d > v).count() as f64 / draws.len() as f64;
        println!("{v:>6} {:>10.5} {mc:>10.5}", tail_prob(&p, v)?);
    }
    let (mean, var) = moments(&p)?;
    println!("mean {mean:.5}, variance {var:.5}");
    for q in [0.05, 0.5, 0.95] {
        println!("quantile({q}) = {:.5}", quantile(&p, q)?);
    }
    let env = sigma_envelope(0.1, 0.5)?;
    println!("sigma envelope at pi = 0.1: [{:.5}, {:.5}]", env.sigma_lower, env.sigma_upper);
    Ok(())
}
