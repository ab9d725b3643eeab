//! Seeded Monte Carlo replication of the tests and reproduction of the
//! published rejection-frequency tables.

mod reference;

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::contamination::{pi_index, DEFAULT_GRID};
use crate::dist_model::{make_least_favorable, Distribution, LeastFavorable};
use crate::error::{config, Error, Result};
use crate::inference::{empirical_pi, test_for_stat, AgainstTest, Bootstrap, Method, DEFAULT_K_CONST};
use crate::rng::{generator, mix64};

use reference::{N_ROWS, PI0_ROWS, T1_VALUES, T2_VALUES, T3_VALUES, T4_VALUES};

/// Published tables were run with this many replicates per cell.
pub const PUBLISHED_REPS: usize = 1000;
/// Nominal level of every published table.
pub const PUBLISHED_ALPHA: f64 = 0.05;

/// A pair of sampling laws with a registry name.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    /// Law of the x-sample.
    pub f_dist: Distribution,
    /// Law of the y-sample.
    pub g_dist: Distribution,
    /// π(F, G) when known in closed form.
    pub true_pi: Option<f64>,
}

impl Scenario {
    /// Resolves a registry name against G = U(0, 1):
    ///
    /// * `F0`: F = U(0, 1).
    /// * `Fpi_a:<pi>`, `Ftilde_a:<pi>`: F = U(π, 1+π).
    /// * `Fpi_b:<pi>`: the two-piece boundary mixture for sampling ratio λ.
    /// * `Ftilde_b:<pi>`: (1−π)/2·U(0, (1+π)/2) + (1+π)/2·U((1+π)/2, 1+π(1−π)/2),
    ///   the same family as `Fpi_b` at λ = ½.
    pub fn from_registry(name: &str, lambda: f64) -> Result<Self> {
        let g = Distribution::standard_uniform();
        let name = name.trim();
        if name == "F0" {
            return Ok(Scenario { id: name.into(), f_dist: g.clone(), g_dist: g, true_pi: Some(0.0) });
        }
        let (family, level) = name.split_once(':').ok_or_else(|| config(format!("unknown scenario '{name}'")))?;
        let pi: f64 = level.trim().parse().map_err(|_| config(format!("scenario '{name}' has a non-numeric level")))?;
        let fam = match family {
            "Fpi_a" => LeastFavorable::ForPower,
            "Fpi_b" => LeastFavorable::ForBoundary,
            "Ftilde_a" => LeastFavorable::AgainstBoundary,
            "Ftilde_b" => LeastFavorable::AgainstPower,
            _ => return Err(config(format!("unknown scenario family '{family}'"))),
        };
        let lam = if fam == LeastFavorable::AgainstPower { 0.5 } else { lambda };
        let f = make_least_favorable(fam, pi, lam).map_err(|e| match e {
            Error::Domain(m) => Error::Config(m),
            other => other,
        })?;
        Ok(Scenario { id: format!("{family}:{pi}"), f_dist: f, g_dist: g, true_pi: Some(pi) })
    }

    /// A scenario from explicit laws.
    pub fn custom(id: impl Into<String>, f_dist: Distribution, g_dist: Distribution) -> Self {
        let true_pi = Some(pi_index(&f_dist, &g_dist, DEFAULT_GRID).value);
        Scenario { id: id.into(), f_dist, g_dist, true_pi }
    }
}

/// One of the test variants with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestSpec {
    /// Test for essential order; `bootstrap` is required by the boot method.
    For { method: Method, pi0: f64, alpha: f64, bootstrap: Option<usize> },
    /// Test against essential order.
    Against { pi0: f64, alpha: f64 },
}

impl TestSpec {
    pub fn pi0(&self) -> f64 {
        match *self {
            TestSpec::For { pi0, .. } | TestSpec::Against { pi0, .. } => pi0,
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            TestSpec::For { alpha, .. } | TestSpec::Against { alpha, .. } => alpha,
        }
    }

    pub fn method(&self) -> Method {
        match *self {
            TestSpec::For { method, .. } => method,
            TestSpec::Against { .. } => Method::Against,
        }
    }

    pub fn bootstrap(&self) -> Option<usize> {
        match *self {
            TestSpec::For { bootstrap, .. } => bootstrap,
            TestSpec::Against { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TestSpec::For { method: Method::Against, .. } => {
                Err(config("the against method belongs to TestSpec::Against"))
            }
            TestSpec::For { method: Method::Boot, bootstrap: None, .. } => {
                Err(config("the boot method needs a bootstrap replicate count"))
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of [`run_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationReport {
    pub scenario: String,
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub test: TestSpec,
    pub k_const: f64,
    pub rejections: usize,
    pub frequency: f64,
    pub base_seed: u64,
    pub wall_time: Duration,
}

/// Runs `reps` replicates: replicate r draws x (size n) from F and y (size
/// m) from G with the generator seeded by mix64(base_seed, r), then applies
/// the test. Bootstrap worlds inside replicate r derive from its seed.
pub fn run_scenario(
    scenario: &Scenario,
    n: usize,
    m: usize,
    reps: usize,
    test: TestSpec,
    base_seed: u64,
) -> Result<ReplicationReport> {
    if reps == 0 || n == 0 || m == 0 {
        return Err(config("reps, n and m must be positive"));
    }
    test.validate()?;
    let start = Instant::now();
    let lambda = n as f64 / (n + m) as f64;
    let against = match test {
        TestSpec::Against { pi0, alpha } => Some(AgainstTest::new(pi0, alpha, lambda)?),
        TestSpec::For { .. } => None,
    };
    let outcomes: Vec<Result<bool>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let seed = mix64(base_seed, r as u64);
            let mut rng = generator(seed);
            let x = scenario.f_dist.sample(&mut rng, n)?;
            let y = scenario.g_dist.sample(&mut rng, m)?;
            let stat = empirical_pi(&x, &y);
            let result = match (test, &against) {
                (TestSpec::Against { .. }, Some(t)) => t.apply(&stat)?,
                (TestSpec::For { method, pi0, alpha, bootstrap }, _) => {
                    let bs = bootstrap.map(|replicates| Bootstrap { replicates, seed });
                    test_for_stat(&stat, pi0, alpha, method, bs)?
                }
                _ => unreachable!("critical value prepared above"),
            };
            Ok(result.decision.is_reject())
        })
        .collect();
    let mut rejections = 0;
    for o in outcomes {
        rejections += usize::from(o?);
    }
    Ok(ReplicationReport {
        scenario: scenario.id.clone(),
        n,
        m,
        reps,
        test,
        k_const: DEFAULT_K_CONST,
        rejections,
        frequency: rejections as f64 / reps as f64,
        base_seed,
        wall_time: start.elapsed(),
    })
}

/// The four published tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    /// Test for essential order, conservative threshold.
    T1,
    /// Test for essential order, plug-in threshold.
    T2,
    /// Test for essential order, bias-corrected estimate.
    T3,
    /// Test against essential order.
    T4,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T1, TableId::T2, TableId::T3, TableId::T4];

    /// Column headers as printed, in table order.
    pub fn columns(self) -> [&'static str; 9] {
        match self {
            TableId::T4 => [
                "Ftilde_0",
                "Ftilde_0.01_a",
                "Ftilde_0.01_b",
                "Ftilde_0.05_a",
                "Ftilde_0.05_b",
                "Ftilde_0.1_a",
                "Ftilde_0.1_b",
                "Ftilde_0.2_a",
                "Ftilde_0.2_b",
            ],
            _ => ["F_0.2_a", "F_0.2_b", "F_0.1_a", "F_0.1_b", "F_0.05_a", "F_0.05_b", "F_0.01_a", "F_0.01_b", "F_0"],
        }
    }

    /// Scenario behind each column.
    ///
    /// In the against-order table the columns headed `a` behave like the
    /// two-piece mixture and those headed `b` like U(π, 1+π): the diagonal
    /// `b` cells sit at the nominal 5%, which only the boundary pair
    /// U(π₀, 1+π₀) produces. The mapping follows the numbers.
    pub fn column_scenario(self, column: usize) -> &'static str {
        const FOR: [&str; 9] = [
            "Fpi_a:0.2",
            "Fpi_b:0.2",
            "Fpi_a:0.1",
            "Fpi_b:0.1",
            "Fpi_a:0.05",
            "Fpi_b:0.05",
            "Fpi_a:0.01",
            "Fpi_b:0.01",
            "F0",
        ];
        const AGAINST: [&str; 9] = [
            "F0",
            "Ftilde_b:0.01",
            "Ftilde_a:0.01",
            "Ftilde_b:0.05",
            "Ftilde_a:0.05",
            "Ftilde_b:0.1",
            "Ftilde_a:0.1",
            "Ftilde_b:0.2",
            "Ftilde_a:0.2",
        ];
        match self {
            TableId::T4 => AGAINST[column],
            _ => FOR[column],
        }
    }

    fn values(self) -> &'static [[f64; 9]; 24] {
        match self {
            TableId::T1 => &T1_VALUES,
            TableId::T2 => &T2_VALUES,
            TableId::T3 => &T3_VALUES,
            TableId::T4 => &T4_VALUES,
        }
    }

    /// Published frequency of a cell.
    pub fn published_value(self, pi0: f64, n: usize, column: &str) -> Result<f64> {
        let (row, col) = self.locate(pi0, n, column)?;
        Ok(self.values()[row][col])
    }

    fn locate(self, pi0: f64, n: usize, column: &str) -> Result<(usize, usize)> {
        let p = PI0_ROWS
            .iter()
            .position(|&v| (v - pi0).abs() < 1e-12)
            .ok_or_else(|| config(format!("{self} has no row for pi0 = {pi0}")))?;
        let q = N_ROWS.iter().position(|&v| v == n).ok_or_else(|| config(format!("{self} has no row for n = {n}")))?;
        let c = self
            .columns()
            .iter()
            .position(|&c| c == column)
            .ok_or_else(|| config(format!("{self} has no column '{column}'")))?;
        Ok((p * N_ROWS.len() + q, c))
    }

    /// The test of the table at π₀.
    pub fn test_spec(self, pi0: f64, bootstrap: usize) -> TestSpec {
        match self {
            TableId::T1 => TestSpec::For { method: Method::Conservative, pi0, alpha: PUBLISHED_ALPHA, bootstrap: None },
            TableId::T2 => TestSpec::For { method: Method::Plugin, pi0, alpha: PUBLISHED_ALPHA, bootstrap: None },
            TableId::T3 => {
                TestSpec::For { method: Method::Boot, pi0, alpha: PUBLISHED_ALPHA, bootstrap: Some(bootstrap) }
            }
            TableId::T4 => TestSpec::Against { pi0, alpha: PUBLISHED_ALPHA },
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "T1" => Ok(TableId::T1),
            "T2" => Ok(TableId::T2),
            "T3" => Ok(TableId::T3),
            "T4" => Ok(TableId::T4),
            _ => Err(config(format!("unknown table '{s}', expected T1..T4"))),
        }
    }
}

/// Acceptance band for comparing a cell to its published value: both are
/// Monte Carlo estimates, so the standard errors of both runs add up.
pub fn published_tolerance(p: f64, reps: usize) -> f64 {
    let v = p * (1.0 - p);
    (3.0 * (v / reps as f64).sqrt() + 3.0 * (v / PUBLISHED_REPS as f64).sqrt()).max(0.02)
}

/// Size of a table run.
#[derive(Debug, Clone, PartialEq)]
pub struct TableScale {
    pub reps: usize,
    /// Bootstrap replicates for the bias-corrected table.
    pub bootstrap: usize,
    /// Restrict to these sample sizes; all when `None`.
    pub n_subset: Option<Vec<usize>>,
    /// Restrict to these π₀ rows; all when `None`.
    pub pi0_subset: Option<Vec<f64>>,
}

impl Default for TableScale {
    fn default() -> Self {
        TableScale { reps: PUBLISHED_REPS, bootstrap: 1000, n_subset: None, pi0_subset: None }
    }
}

/// One reproduced cell next to its published value.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub pi0: f64,
    pub n: usize,
    pub column: &'static str,
    pub report: ReplicationReport,
    pub published: f64,
    pub tolerance: f64,
}

impl CellResult {
    pub fn within_tolerance(&self) -> bool {
        (self.report.frequency - self.published).abs() <= self.tolerance
    }
}

/// A reproduced table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRun {
    pub table: TableId,
    pub scale: TableScale,
    pub base_seed: u64,
    pub cells: Vec<CellResult>,
}

/// Seed of a cell; depends on its position in the full table only, so a
/// cell gives the same answer in a subset run.
fn cell_seed(base_seed: u64, table: TableId, row: usize, col: usize) -> u64 {
    mix64(mix64(mix64(base_seed, table as u64), row as u64), col as u64)
}

/// Runs one cell of a table with `n = m`.
pub fn reproduce_cell(
    table: TableId,
    pi0: f64,
    n: usize,
    column: &str,
    reps: usize,
    bootstrap: usize,
    base_seed: u64,
) -> Result<CellResult> {
    let (row, col) = table.locate(pi0, n, column)?;
    let column = table.columns()[col];
    let scenario = Scenario::from_registry(table.column_scenario(col), 0.5)?;
    let report =
        run_scenario(&scenario, n, n, reps, table.test_spec(pi0, bootstrap), cell_seed(base_seed, table, row, col))?;
    let published = table.values()[row][col];
    Ok(CellResult { pi0, n, column, report, published, tolerance: published_tolerance(published, reps) })
}

/// Runs the (π₀ × n × column) grid of a table at the requested scale.
pub fn reproduce_table(table: TableId, scale: &TableScale, base_seed: u64) -> Result<TableRun> {
    if scale.reps == 0 || scale.bootstrap == 0 {
        return Err(config("table scale parameters must be positive"));
    }
    let mut cells = Vec::new();
    for &pi0 in
        PI0_ROWS.iter().filter(|p| scale.pi0_subset.as_ref().is_none_or(|s| s.iter().any(|q| (q - *p).abs() < 1e-12)))
    {
        for &n in N_ROWS.iter().filter(|n| scale.n_subset.as_ref().is_none_or(|s| s.contains(n))) {
            for column in table.columns() {
                cells.push(reproduce_cell(table, pi0, n, column, scale.reps, scale.bootstrap, base_seed)?);
            }
        }
    }
    Ok(TableRun { table, scale: scale.clone(), base_seed, cells })
}

/// Writes a table in the published layout: `#` metadata lines, a header
/// `pi0,n,<columns>`, one row per (π₀, n) with our frequencies, then the
/// published values as `# published,` rows.
pub fn write_table_csv<W: Write>(run: &TableRun, out: &mut W) -> io::Result<()> {
    let table = run.table;
    writeln!(out, "# table={table}")?;
    writeln!(out, "# reps={}", run.scale.reps)?;
    if table == TableId::T3 {
        writeln!(out, "# bootstrap={}", run.scale.bootstrap)?;
    }
    writeln!(out, "# alpha={PUBLISHED_ALPHA}")?;
    writeln!(out, "# base_seed={}", run.base_seed)?;
    writeln!(out, "# test={}", table.test_spec(0.0, run.scale.bootstrap).method().as_str())?;
    let mapping: Vec<String> =
        table.columns().iter().enumerate().map(|(i, c)| format!("{c}={}", table.column_scenario(i))).collect();
    writeln!(out, "# scenarios={}", mapping.join(";"))?;
    writeln!(out, "# version={}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "pi0,n,{}", table.columns().join(","))?;
    let mut published_rows = Vec::new();
    for chunk in run.cells.chunks(9) {
        let head = &chunk[0];
        let ours: Vec<String> = chunk.iter().map(|c| format!("{:.3}", c.report.frequency)).collect();
        let theirs: Vec<String> = chunk.iter().map(|c| format!("{:.3}", c.published)).collect();
        writeln!(out, "{},{},{}", head.pi0, head.n, ours.join(","))?;
        published_rows.push(format!("# published,{},{},{}", head.pi0, head.n, theirs.join(",")));
    }
    for row in published_rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}
