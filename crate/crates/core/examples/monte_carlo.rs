//! Seeded Monte Carlo: rejection frequency of one scenario, then a few
//! published table cells at reduced scale.

use stocorder::inference::Method;
use stocorder::simulation::{reproduce_cell, run_scenario, Scenario, TableId, TestSpec};

fn main() -> stocorder::Result<()> {
    let scenario = Scenario::from_registry("Fpi_a:0.05", 0.5)?;
    let spec = TestSpec::For { method: Method::Plugin, pi0: 0.1, alpha: 0.05, bootstrap: None };
    let r = run_scenario(&scenario, 1000, 1000, 500, spec, 2024)?;
    println!("{}: {} of {} rejections ({:.3}) in {:.2?}", r.scenario, r.rejections, r.reps, r.frequency, r.wall_time);

    for (table, pi0, n, column) in [
        (TableId::T1, 0.2, 500, "F_0.1_a"),
        (TableId::T2, 0.2, 500, "F_0.1_a"),
        (TableId::T4, 0.1, 100, "Ftilde_0.2_b"),
    ] {
        let c = reproduce_cell(table, pi0, n, column, 300, 1, 7)?;
        println!(
            "{table} pi0={pi0} n={n} {column}: {:.3} vs published {:.3} (tolerance {:.3})",
            c.report.frequency, c.published, c.tolerance
        );
    }
    Ok(())
}
