//! Testing against essential stochastic order: rejection shows that the
//! contamination exceeds π₀.

use stocorder::inference::test_against;
use stocorder::rng::generator;
use stocorder::Distribution;

fn main() -> stocorder::Result<()> {
    let mut rng = generator(5);
    let y = Distribution::standard_uniform().sample(&mut rng, 2000)?;
    for shift in [0.0, 0.05, 0.15] {
        let x = Distribution::uniform(shift, 1.0 + shift)?.sample(&mut rng, 2000)?;
        let r = test_against(&x, &y, 0.05, 0.05)?;
        println!(
            "pi(F, G) = {shift:<4}: statistic {:>7.4} threshold {:.4} -> {}",
            r.statistic,
            r.threshold,
            r.decision.as_str()
        );
    }
    Ok(())
}
