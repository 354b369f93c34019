//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use plaquette_core::appendix::{verify_appendix, AppendixForm};
use plaquette_core::dynamics::{build_dynamics_matrix, stability_report, to_normal_mode, Basis};
use plaquette_core::model::{LinearizedSystem, RwaWarning};
use plaquette_core::routing::{
    classify_direction, table1_check, PathCheck, RegimeStatus, DEFAULT_HIGH, DEFAULT_LOW,
    TABLE1_TOL_LOW,
};
use plaquette_core::scattering::{scattering_matrix, ScatteringResult};
use plaquette_core::Complex64;

use crate::config::{load_config, Config, Prepared};
use crate::csv::{self, Metadata};
use crate::figdata::{self, Figure};
use crate::{parallel, Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "plaquette",
    version,
    about = "Scattering and routing in a four-mode optomechanical plaquette",
    after_help = "Frequencies are offsets from the mean mechanical frequency (omega - omega_m)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the classical steady state of a physical config and linearize it.
    Steady { config: PathBuf },
    /// Print the scattering probabilities at one probe frequency.
    Smatrix {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
    },
    /// Run the config's sweep and write CSV.
    Sweep {
        config: PathBuf,
        /// Overrides `output.path`; `-` writes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the data behind a reference figure (or `all`).
    Figdata {
        name: String,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Compare the closed-form U(ω) against direct inversion.
    VerifyAppendix {
        config: PathBuf,
        /// Judge the uncorrected printed forms instead of the corrected ones.
        #[arg(long)]
        as_printed: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Check the inhibited paths for both fluxes and sidebands.
    Table1 {
        config: PathBuf,
        #[arg(long, default_value_t = TABLE1_TOL_LOW)]
        tol_low: f64,
    },
    /// Classify the router orientation at one probe frequency.
    Classify {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = DEFAULT_HIGH)]
        high: f64,
        #[arg(long, default_value_t = DEFAULT_LOW)]
        low: f64,
    },
}

/// Runs one command. Reports go to `out`, warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Steady { config } => steady(&load_config(&config)?, out, err),
        Command::Smatrix { config, omega } => smatrix(&load_config(&config)?, omega, out, err),
        Command::Sweep { config, output } => sweep(&load_config(&config)?, output, out, err),
        Command::Figdata { name, outdir } => figdata_cmd(&name, &outdir, out, err),
        Command::VerifyAppendix {
            config,
            as_printed,
            tol,
            points,
        } => verify(&load_config(&config)?, as_printed, tol, points, out, err),
        Command::Table1 { config, tol_low } => table1(&load_config(&config)?, tol_low, out, err),
        Command::Classify {
            config,
            omega,
            high,
            low,
        } => classify(&load_config(&config)?, omega, high, low, out, err),
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn prepare(cfg: &Config, err: &mut dyn Write) -> Result<Prepared> {
    let p = cfg.prepare()?;
    for w in &p.warnings {
        writeln!(err, "warning: {}", rwa_text(w)).map_err(io_out)?;
    }
    Ok(p)
}

fn rwa_text(w: &RwaWarning) -> String {
    match *w {
        RwaWarning::DetuningMismatch { mode, delta, omega } => format!(
            "rotating-wave condition: Delta_{mode} = {delta} differs from omega_{mode} = {omega} by more than 10%"
        ),
        RwaWarning::StrongCoupling {
            mode,
            omega,
            coupling,
        } => format!(
            "rotating-wave condition: omega_{mode} = {omega} is below 10 G_{mode} (G_{mode} = {coupling})"
        ),
    }
}

fn complex(z: Complex64) -> String {
    format!("{:+.10e} {:+.10e}i", z.re, z.im)
}

fn scatter(lin: &LinearizedSystem, basis: Basis, omega: f64) -> Result<ScatteringResult> {
    let bare = build_dynamics_matrix(lin);
    let d = match basis {
        Basis::Bare => bare,
        Basis::Normal => to_normal_mode(&bare)?,
    };
    Ok(scattering_matrix(&d, omega)?)
}

fn write_stability(lin: &LinearizedSystem, out: &mut dyn Write) -> Result<()> {
    let report = stability_report(&build_dynamics_matrix(lin))?;
    writeln!(
        out,
        "stability: {} (min Re lambda = {:.10e})",
        if report.stable { "stable" } else { "UNSTABLE" },
        report.min_real()
    )
    .map_err(io_out)?;
    for l in &report.eigenvalues {
        writeln!(out, "  lambda = {}", complex(*l)).map_err(io_out)?;
    }
    Ok(())
}

fn write_linearized(lin: &LinearizedSystem, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "linearized system (frame omega_m = {}):",
        lin.frame_ref
    )?;
    for j in 0..2 {
        writeln!(
            out,
            "  Delta_{n} = {:.10e}  omega_{n} = {:.10e}  G_{n} = {:.10e}  phi_{n} = {:.10e}",
            lin.delta[j],
            lin.omega[j],
            lin.coupling[j],
            lin.phase[j],
            n = j + 1
        )?;
    }
    writeln!(out, "  flux = {:.10e}", lin.flux())
}

fn steady(cfg: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = prepare(cfg, err)?;
    let Some(s) = p.steady else {
        return Err(Error::validation(
            "system",
            "steady needs a `physical` system",
        ));
    };
    let o = &mut *out;
    writeln!(
        o,
        "steady state: {} iterations, residual {:.3e}",
        s.iterations, s.residual
    )
    .map_err(io_out)?;
    for (name, z) in [
        ("alpha_1", s.alpha[0]),
        ("alpha_2", s.alpha[1]),
        ("beta_1", s.beta[0]),
        ("beta_2", s.beta[1]),
    ] {
        writeln!(o, "  {name} = {}  (|.| = {:.10e})", complex(z), z.norm()).map_err(io_out)?;
    }
    write_linearized(&p.system, o).map_err(io_out)?;
    write_stability(&p.system, o)
}

fn write_matrix(r: &ScatteringResult, out: &mut dyn Write) -> std::io::Result<()> {
    let labels = r.basis.port_labels();
    writeln!(
        out,
        "S_ij = |U_ij|^2 (row i = output port, column j = input port)"
    )?;
    write!(out, "{:>4}", "")?;
    for l in labels {
        write!(out, " {l:>18}")?;
    }
    writeln!(out)?;
    for (i, row) in r.s.iter().enumerate() {
        write!(out, "{:>4}", labels[i])?;
        for v in row {
            write!(out, " {v:>18.10e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn smatrix(cfg: &Config, omega: f64, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = prepare(cfg, err)?;
    let r = scatter(&p.system, cfg.basis, omega)?;
    writeln!(
        out,
        "basis: {}  omega - omega_m = {omega}",
        cfg.basis.name()
    )
    .map_err(io_out)?;
    write_matrix(&r, out).map_err(io_out)
}

fn sweep(
    cfg: &Config,
    output: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let p = prepare(cfg, err)?;
    let spec = cfg.sweep_spec(&p)?;
    let table = parallel::run_sweep(&spec, parallel::threads_from_env()?)?;
    for w in csv::check_table(&table, &parallel::lossless_rows(&spec))? {
        writeln!(err, "warning: {w}").map_err(io_out)?;
    }
    let mut meta = Metadata::standard(&table);
    meta.push("unit", cfg.unit.as_str())
        .push(
            "frame",
            format!(
                "frequencies are omega - omega_m, omega_m = {}",
                spec.base.frame_ref
            ),
        )
        .push("config", cfg.echo.as_str());
    match output.or_else(|| cfg.output.clone()) {
        Some(path) if path != Path::new("-") => {
            csv::write_table(&path, &table, &meta)?;
            writeln!(err, "wrote {} rows to {}", table.len(), path.display()).map_err(io_out)?;
        }
        _ => out
            .write_all(csv::render(&table, &meta).as_bytes())
            .map_err(io_out)?,
    }
    Ok(())
}

fn figdata_cmd(name: &str, outdir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let figs: Vec<Figure> = if name == "all" {
        Figure::ALL.to_vec()
    } else {
        let f = Figure::from_name(name).ok_or_else(|| {
            let names: Vec<_> = Figure::ALL.iter().map(|f| f.name()).collect();
            Error::validation(
                "name",
                format!("expected `all` or one of {}", names.join(", ")),
            )
        })?;
        vec![f]
    };
    let threads = parallel::threads_from_env()?;
    for f in figs {
        let (paths, warnings) = figdata::write_figure(f, outdir, threads)?;
        for w in warnings {
            writeln!(err, "warning: {}: {w}", f.name()).map_err(io_out)?;
        }
        for p in paths {
            writeln!(out, "{}", p.display()).map_err(io_out)?;
        }
    }
    Ok(())
}

fn verify(
    cfg: &Config,
    as_printed: bool,
    tol: f64,
    points: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::validation("tol", "must be positive"));
    }
    if points < 1 {
        return Err(Error::validation("points", "must be at least 1"));
    }
    let p = prepare(cfg, err)?;
    let lin = p.system;
    let half = 3.0 * if lin.j_m > 0.0 { lin.j_m } else { lin.gamma() };
    let grid: Vec<f64> = if points == 1 {
        vec![0.0]
    } else {
        (0..points)
            .map(|k| -half + 2.0 * half * k as f64 / (points - 1) as f64)
            .collect()
    };
    let report = verify_appendix(&lin, &grid, tol)?;
    let form = if as_printed {
        AppendixForm::AsPrinted
    } else {
        AppendixForm::Corrected
    };
    let o = &mut *out;
    writeln!(
        o,
        "closed-form U vs direct inversion on {points} points in [{:.4}, {:.4}], tol {tol:e}",
        -half, half
    )
    .map_err(io_out)?;
    for (title, table) in [
        ("corrected", &report.corrected),
        ("as printed", &report.as_printed),
    ] {
        writeln!(o, "max |dU_ij| ({title}):").map_err(io_out)?;
        for row in table {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:10.3e}")).collect();
            writeln!(o, "  {}", cells.join(" ")).map_err(io_out)?;
        }
    }
    let mut flagged: Vec<(usize, usize)> = report
        .flags
        .iter()
        .filter(|f| f.form == form)
        .map(|f| (f.i, f.j))
        .collect();
    flagged.sort_unstable();
    flagged.dedup();
    let names: Vec<String> = flagged.iter().map(|(i, j)| format!("U{i}{j}")).collect();
    if report.passed(form) {
        writeln!(
            o,
            "{} forms: PASS",
            if as_printed { "printed" } else { "corrected" }
        )
        .map_err(io_out)?;
        Ok(())
    } else {
        writeln!(o, "elements above tolerance: {}", names.join(", ")).map_err(io_out)?;
        Err(Error::Check(format!(
            "{} closed forms deviate in {}",
            if as_printed { "printed" } else { "corrected" },
            names.join(", ")
        )))
    }
}

fn path_text(c: &PathCheck) -> String {
    format!(
        "S{}{} = {:.4e} {} {}",
        c.to,
        c.from,
        c.value,
        if c.ok { "ok" } else { "FAIL" },
        c.threshold
    )
}

fn table1(cfg: &Config, tol_low: f64, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if !(tol_low >= 0.0) {
        return Err(Error::validation("tol_low", "must be non-negative"));
    }
    let p = prepare(cfg, err)?;
    let report = table1_check(&p.system, tol_low)?;
    let o = &mut *out;
    for cell in report.cells.iter().flatten() {
        writeln!(
            o,
            "flux = {:.6}  omega - omega_m = {:+}  orientation {:?} (transmitter a{}): {}",
            cell.flux,
            cell.omega,
            cell.expected,
            cell.expected.transmitter(),
            if cell.passed { "PASS" } else { "FAIL" }
        )
        .map_err(io_out)?;
        for c in &cell.inhibited {
            writeln!(o, "    {}", path_text(c)).map_err(io_out)?;
        }
    }
    writeln!(o, "regime conditions:").map_err(io_out)?;
    for c in &report.regime {
        let status = match c.status {
            RegimeStatus::Satisfied => "satisfied",
            RegimeStatus::Marginal => "marginal",
            RegimeStatus::Violated => "VIOLATED",
        };
        writeln!(
            o,
            "    {:<20} {:>12.4e} vs {:>12.4e}  {status}",
            c.condition, c.lhs, c.rhs
        )
        .map_err(io_out)?;
    }
    for c in report.violations() {
        writeln!(err, "warning: regime condition `{}` violated", c.condition).map_err(io_out)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Check("inhibited paths above tol_low".into()))
    }
}

fn classify(
    cfg: &Config,
    omega: f64,
    high: f64,
    low: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let p = prepare(cfg, err)?;
    let r = scatter(&p.system, cfg.basis, omega)?;
    let v = classify_direction(&r, high, low)?;
    let o = &mut *out;
    writeln!(
        o,
        "orientation {:?}: transmitter a{}, receiver a{}, terminals {}/{}: {}",
        v.orientation,
        v.transmitter,
        v.receiver,
        v.terminals[0],
        v.terminals[1],
        if v.passed { "PASS" } else { "FAIL" }
    )
    .map_err(io_out)?;
    writeln!(
        o,
        "  transmitter -> terminals: {}\n  terminals -> receiver: {}\n  receiver -> transmitter: {}",
        v.transmitter_to_terminals, v.terminals_to_receiver, v.receiver_to_transmitter
    )
    .map_err(io_out)?;
    writeln!(o, "  required (high = {high}):").map_err(io_out)?;
    for c in &v.required {
        writeln!(o, "    {}", path_text(c)).map_err(io_out)?;
    }
    writeln!(o, "  inhibited (low = {low}):").map_err(io_out)?;
    for c in &v.inhibited {
        writeln!(o, "    {}", path_text(c)).map_err(io_out)?;
    }
    Ok(())
}
