use std::fmt;
use std::path::Path;

use serde::Serialize;

use nckit_grid::{associativity_defect, grid_cyclicity_defect, grid_trace_defect, io, relative_defect, GridField};

use crate::error::Result;
use crate::suites::{phase_law_error, PHASE_LAW_TOL, TRACE_TOL};

/// Associativity tolerance relative to `max|f| max|g| max|h|`.
pub const ASSOCIATIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeasure {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCheckReport {
    pub file: String,
    pub n: usize,
    pub box_length: f64,
    pub theta: f64,
    pub checks: Vec<GridMeasure>,
    pub passed: bool,
}

fn measure(name: &str, value: f64, tolerance: f64) -> GridMeasure {
    GridMeasure {
        name: name.into(),
        value,
        tolerance,
        passed: value <= tolerance,
    }
}

/// Oracles on a loaded field `f` paired with `g = conj(f)`: trace and
/// cyclicity (relative), associativity of `(f, g, f)`, and the plane-wave
/// phase law on the same grid.
pub fn grid_check(f: &GridField, file: &str) -> Result<GridCheckReport> {
    let g = f.with_values(f.values().iter().map(|z| z.conj()).collect())?;
    let mut checks = vec![
        measure("trace", relative_defect(grid_trace_defect(f, &g)?, f, &g), TRACE_TOL),
        measure("cyclicity", relative_defect(grid_cyclicity_defect(f, &g)?, f, &g), TRACE_TOL),
    ];
    let scale = f.max_abs().powi(3);
    let assoc = associativity_defect(f, &g, f)?;
    checks.push(measure(
        "associativity",
        if scale > 0.0 { assoc / scale } else { assoc },
        ASSOCIATIVITY_TOL,
    ));
    let m = (f.n() / 16).max(1) as i32;
    checks.push(measure(
        "phase_law",
        phase_law_error(f.n(), f.box_length(), f.theta(), (m, -2 * m / 3), (-m / 2, m))?,
        PHASE_LAW_TOL,
    ));
    let passed = checks.iter().all(|c| c.passed);
    Ok(GridCheckReport {
        file: file.into(),
        n: f.n(),
        box_length: f.box_length(),
        theta: f.theta(),
        checks,
        passed,
    })
}

pub fn grid_check_file(path: &Path) -> Result<GridCheckReport> {
    let f = io::load(path)?;
    grid_check(&f, &path.display().to_string())
}

impl fmt::Display for GridCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid {}  N {}  L {}  theta {}", self.file, self.n, self.box_length, self.theta)?;
        writeln!(f, "{:<16} {:>12} {:>12} {:>8}", "check", "value", "tolerance", "passed")?;
        for c in &self.checks {
            writeln!(f, "{:<16} {:>12.3e} {:>12.1e} {:>8}", c.name, c.value, c.tolerance, c.passed)?;
        }
        Ok(())
    }
}
