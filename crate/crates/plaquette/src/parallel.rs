//! Parallel sweep execution.

use rayon::prelude::*;

use plaquette_core::sweep::{SweepSpec, SweepTable};

use crate::{Error, Result};

pub const THREADS_VAR: &str = "PLAQUETTE_THREADS";

/// Reads `PLAQUETTE_THREADS`; unset or `0` selects the automatic default.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(Error::validation(THREADS_VAR, "not valid unicode"))
        }
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::validation(THREADS_VAR, "expected a non-negative integer")),
    }
}

/// Evaluates the grid on `threads` workers (0 = automatic) and returns rows in
/// grid order. The output is identical to the serial sweep.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<SweepTable> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::validation(THREADS_VAR, e.to_string()))?;
    let rows: Vec<_> = pool.install(|| {
        (0..spec.grid.points)
            .into_par_iter()
            .map(|k| spec.evaluate(k))
            .collect()
    });
    // The first failure in grid order wins, independent of scheduling.
    let s = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable {
        axis: spec.axis,
        basis: spec.basis,
        axis_values: spec.grid.values(),
        s,
    })
}

/// Per-row flag: true where both internal decays vanish.
pub fn lossless_rows(spec: &SweepSpec) -> Vec<bool> {
    (0..spec.grid.points)
        .map(|k| {
            let (lin, _) = spec.point(k);
            lin.kappa_0 == 0.0 && lin.gamma_0 == 0.0
        })
        .collect()
}
