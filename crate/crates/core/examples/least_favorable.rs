//! Least-favorable families and increasing transformations.

use stocorder::contamination::{pi_index, DEFAULT_GRID};
use stocorder::{make_least_favorable, pushforward, Distribution, LeastFavorable, MonotoneMap};

fn main() -> stocorder::Result<()> {
    let g = Distribution::standard_uniform();
    for family in [LeastFavorable::ForBoundary, LeastFavorable::ForPower, LeastFavorable::AgainstBoundary] {
        let f = make_least_favorable(family, 0.1, 0.5)?;
        println!("{family:?}: {f}  pi(F, G) = {:.6}", pi_index(&f, &g, DEFAULT_GRID).value);
    }

    // The index only depends on ranks, so a common increasing map keeps it.
    let f = make_least_favorable(LeastFavorable::ForPower, 0.1, 0.5)?;
    let map = MonotoneMap::from_knots(&[(0.0, -3.0), (0.5, 0.0), (1.2, 10.0)])?;
    let (fm, gm) = (pushforward(&f, &map), pushforward(&g, &map));
    println!("after an increasing map: pi = {:.6}", pi_index(&fm, &gm, DEFAULT_GRID).value);
    Ok(())
}
