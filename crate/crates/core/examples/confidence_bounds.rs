//! One-sided confidence bounds for π(F, G).

use stocorder::inference::{confidence_bounds, Bootstrap, BoundMethod, DEFAULT_K_CONST};
use stocorder::rng::generator;
use stocorder::Distribution;

fn main() -> stocorder::Result<()> {
    let mut rng = generator(3);
    let x = Distribution::uniform(0.1, 1.1)?.sample(&mut rng, 1000)?;
    let y = Distribution::standard_uniform().sample(&mut rng, 1000)?;
    let boot = Some(Bootstrap { replicates: 1000, seed: 11 });

    for method in [BoundMethod::Lower, BoundMethod::UpperDirect, BoundMethod::UpperBoot] {
        let b = confidence_bounds(&x, &y, 0.05, method, boot, DEFAULT_K_CONST)?;
        println!("{:<13} {:.4}  (pi_hat {:.4})", method.as_str(), b.value, b.constants.pi_hat);
    }
    Ok(())
}
