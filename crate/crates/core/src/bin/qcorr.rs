use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use qcorr::measures::{full_report, DensityMatrix};
use qcorr::models::{cross_validate, validation_grid, CROSS_VALIDATION_TOL};
use qcorr::sweep::{
    parse_assignment, parse_measures, parse_tie, repro_preset, run_sweep, write_csv_file, Axis,
    SweepConfig, SweepError, SweepRow,
};
use qcorr::{ComplexMatrix, QcorrError};

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantum correlations of two-qubit states and spin-model thermal states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all measures for one density matrix and print JSON.
    ///
    /// The state file holds 4 lines of 4 whitespace-separated complex
    /// entries written as `a+bi` (e.g. `0.5`, `0.1-0.2i`). Rows and columns
    /// are ordered |11>, |10>, |01>, |00>, where |1> is the sigma_z = +1
    /// eigenstate.
    Report {
        #[arg(long)]
        state: PathBuf,
    },
    /// Sweep one or two model parameters and write a CSV table.
    Sweep {
        /// xxz or xxx_dm
        #[arg(long)]
        model: String,
        /// Fixed parameter, `name=value` (repeatable).
        #[arg(long = "fix", allow_hyphen_values = true)]
        fixed: Vec<String>,
        /// Tie a parameter to another, `target=source` (e.g. `Jz=J`).
        #[arg(long = "tie")]
        ties: Vec<String>,
        /// Swept parameter, `name:start:stop:step` (one or two).
        #[arg(long = "axis", allow_hyphen_values = true)]
        axes: Vec<String>,
        /// Comma-separated subset of concurrence,bell_m,bell_violation,mid,gqd,eq1.
        #[arg(long, default_value = "concurrence,bell_m,bell_violation,mid,gqd")]
        measures: String,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Regenerate the data behind a figure preset (fig1..fig5).
    Repro {
        id: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the step of every axis.
        #[arg(long)]
        step: Option<f64>,
        /// Override the measure list.
        #[arg(long)]
        measures: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Cross-validate closed-form thermal states against the Gibbs oracle.
    Validate,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Report { state } => report(&state),
        Command::Sweep {
            model,
            fixed,
            ties,
            axes,
            measures,
            out,
            workers,
        } => build_config(&model, &fixed, &ties, &axes, &measures)
            .map_err(Failure::from)
            .and_then(|cfg| sweep_to_file(&cfg, &out, workers)),
        Command::Repro {
            id,
            out,
            step,
            measures,
            workers,
        } => repro(&id, &out, step, measures.as_deref(), workers),
        Command::Validate => validate(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

fn parse_state(text: &str) -> Result<ComplexMatrix, String> {
    let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if rows.len() != 4 {
        return Err(format!("expected 4 rows, found {}", rows.len()));
    }
    let mut entries = Vec::with_capacity(16);
    for (r, line) in rows.iter().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(format!(
                "row {} has {} entries, expected 4",
                r + 1,
                cols.len()
            ));
        }
        for token in cols {
            let z = Complex64::from_str(token)
                .map_err(|_| format!("row {}: cannot parse `{token}` as a+bi", r + 1))?;
            entries.push(z);
        }
    }
    ComplexMatrix::from_entries(4, entries).map_err(|e| e.to_string())
}

fn report(path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let matrix = parse_state(&text).map_err(Failure::Config)?;
    let rho = DensityMatrix::new(matrix).map_err(|e| Failure::Config(e.to_string()))?;
    let r = full_report(&rho).map_err(|e| Failure::Numerical(e.to_string()))?;
    let out = json!({
        "concurrence": r.conc.concurrence,
        "bell_m": r.bell.m,
        "bell_violation": r.bell.violation,
        "mid": r.mid.mid,
        "gqd": r.gqd.gqd,
        "degenerate_marginal_a": r.mid.degenerate_marginal[0],
        "degenerate_marginal_b": r.mid.degenerate_marginal[1],
        "intermediates": {
            "bloch": r.bloch,
            "bell_u": r.bell.u,
            "concurrence_lambdas": r.conc.lambdas,
            "gqd_k_max": r.gqd.k_max,
            "marginal_spectrum_a": r.mid.marginal_spectra[0],
            "marginal_spectrum_b": r.mid.marginal_spectra[1],
            "mutual_information": r.mid.total_mi,
            "classical_mutual_information": r.mid.classical_mi,
            "mid_raw": r.mid.mid_raw,
        },
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("report serializes")
    );
    Ok(())
}

fn build_config(
    model: &str,
    fixed: &[String],
    ties: &[String],
    axes: &[String],
    measures: &str,
) -> Result<SweepConfig, SweepError> {
    let cfg = SweepConfig {
        label: "sweep".into(),
        model: model.parse()?,
        fixed: fixed
            .iter()
            .map(|s| parse_assignment(s))
            .collect::<Result<_, _>>()?,
        ties: ties
            .iter()
            .map(|s| parse_tie(s))
            .collect::<Result<_, _>>()?,
        axes: axes
            .iter()
            .map(|s| s.parse::<Axis>())
            .collect::<Result<_, _>>()?,
        measures: parse_measures(measures)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn report_errors(cfg: &SweepConfig, rows: &[SweepRow]) -> usize {
    let mut count = 0;
    for row in rows.iter().filter(|r| r.has_error()) {
        count += 1;
        let point: Vec<String> = cfg
            .axes
            .iter()
            .zip(&row.axis_values)
            .map(|(a, v)| format!("{}={v}", a.name))
            .collect();
        for cell in &row.values {
            if let qcorr::sweep::Cell::Error(msg) = cell {
                eprintln!("[{}] {}: {msg}", cfg.label, point.join(" "));
            }
        }
    }
    count
}

fn sweep_to_file(cfg: &SweepConfig, out: &Path, workers: Option<usize>) -> Result<(), Failure> {
    let rows = run_sweep(cfg, workers)?;
    write_csv_file(&rows, &cfg.header(), out)?;
    let failed = report_errors(cfg, &rows);
    eprintln!("{}: {} rows -> {}", cfg.label, rows.len(), out.display());
    if failed > 0 {
        return Err(Failure::Numerical(format!(
            "{failed} grid point(s) failed in {}",
            cfg.label
        )));
    }
    Ok(())
}

fn repro(
    id: &str,
    dir: &Path,
    step: Option<f64>,
    measures: Option<&str>,
    workers: Option<usize>,
) -> Result<(), Failure> {
    let mut configs = repro_preset(id)?;
    fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?;
    let mut numerical = Vec::new();
    for cfg in &mut configs {
        if let Some(step) = step {
            for axis in &mut cfg.axes {
                axis.step = step;
            }
        }
        if let Some(list) = measures {
            cfg.measures = parse_measures(list)?;
        }
        if cfg.measures.contains(&qcorr::sweep::Measure::Eq1) {
            eprintln!("note: eq1 column uses 1/(2(1 - 2 coth(J/T))^2)");
        }
        let path = dir.join(format!("{}.csv", cfg.label));
        match sweep_to_file(cfg, &path, workers) {
            Ok(()) => {}
            Err(Failure::Numerical(msg)) => numerical.push(msg),
            Err(e) => return Err(e),
        }
    }
    if numerical.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(numerical.join("; ")))
    }
}

fn validate() -> Result<(), Failure> {
    let grid = validation_grid();
    let results: Vec<Result<_, QcorrError>> = grid.par_iter().map(cross_validate).collect();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for (point, result) in grid.iter().zip(&results) {
        match result {
            Ok(r) => {
                worst = worst.max(r.trace_distance);
                if !r.pass {
                    failures += 1;
                    eprintln!("FAIL {point:?}: trace distance {:e}", r.trace_distance);
                }
            }
            Err(e) => {
                failures += 1;
                eprintln!("FAIL {point:?}: {e}");
            }
        }
    }
    println!(
        "{} points, max trace distance {worst:e} (tolerance {CROSS_VALIDATION_TOL:e}): {}",
        grid.len(),
        if failures == 0 { "PASS" } else { "FAIL" }
    );
    if failures > 0 {
        return Err(Failure::Numerical(format!(
            "{failures} point(s) failed cross-validation"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_state_file() {
        let text = "0.5 0 0 0.5\n0 0 0 0\n0 0 0 0\n0.5 0 0 0.5\n";
        let m = parse_state(text).unwrap();
        assert_eq!(m[(0, 3)], Complex64::new(0.5, 0.0));

        let text = "0.25 0.1-0.2i 0 0\n0.1+0.2i 0.25 0 0\n0 0 0.25 1e-3i\n0 0 -1e-3i 0.25\n";
        let m = parse_state(text).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.1, -0.2));
        assert_eq!(m[(2, 3)], Complex64::new(0.0, 1e-3));
        assert_eq!(m[(3, 2)], Complex64::new(0.0, -1e-3));

        assert!(parse_state("1 0 0 0\n").is_err());
        assert!(parse_state("1 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n").is_err());
        assert!(parse_state("1 0 0 x\n0 0 0 0\n0 0 0 0\n0 0 0 0\n").is_err());
    }
}
