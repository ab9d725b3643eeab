//! Testing for essential stochastic order with the conservative, plug-in
//! and bias-corrected statistics.

use stocorder::inference::{test_for, Bootstrap, Method};
use stocorder::rng::generator;
use stocorder::Distribution;

fn main() -> stocorder::Result<()> {
    let mut rng = generator(1);
    // π(F, G) = 0.05: F is below G except for a 5% contamination.
    let x = Distribution::uniform(0.05, 1.05)?.sample(&mut rng, 1000)?;
    let y = Distribution::standard_uniform().sample(&mut rng, 1000)?;
    let boot = Some(Bootstrap { replicates: 1000, seed: 9 });

    for pi0 in [0.05, 0.1, 0.2] {
        for method in [Method::Conservative, Method::Plugin, Method::Boot] {
            let r = test_for(&x, &y, pi0, 0.05, method, boot)?;
            println!(
                "pi0 = {pi0:<4} {:<12} statistic {:>8.4} threshold {:>8.4} -> {}",
                method.as_str(),
                r.statistic,
                r.threshold,
                r.decision.as_str()
            );
        }
    }
    Ok(())
}
