// SPDX-License-Identifier: Apache-2.0

//! `akers-qca` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 simulation or runtime failure,
//! 3 malformed input file.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use akers_qca::akers::{
    build_nand, build_nor, build_xor, grid_eval, parse_netlist, truth_table_with, write_netlist,
};
use akers_qca::compiler::{
    compile, footprint, metrics_csv, GateMetrics, ReferenceMetrics, FLIPFLOP_REFERENCE,
    NAND_REFERENCE, NOR_REFERENCE,
};
use akers_qca::power::{analyze, analyze_sequence, dissipation_map_csv, report_csv, PowerParams};
use akers_qca::qca::library::flipflop_layout;
use akers_qca::qca::{
    parse_layout, run_with, write_layout, ClockSchedule, InputVector, QcaError, QcaLayout,
    RunOptions,
};
use akers_qca::{AkersGrid, Assignment, Bit, ParseError};

#[derive(Debug, Parser)]
#[command(
    name = "akers-qca",
    version,
    about = "Akers-array logic on clocked QCA layouts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a gate: nand, nor, xor:<n> or flipflop.
    Build {
        gate: String,
        /// Akers netlist output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the compiled QCA layout here.
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Exhaustive truth table of an Akers netlist.
    TruthTable {
        netlist: PathBuf,
        /// Stored bits, first index leftmost.
        #[arg(long, default_value = "")]
        stored: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an Akers netlist on selected vectors.
    SimLogical {
        netlist: PathBuf,
        /// Comma-separated bit strings in variable order (all when omitted).
        #[arg(long, value_delimiter = ',')]
        vectors: Option<Vec<String>>,
        #[arg(long, default_value = "")]
        stored: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clocked simulation of a QCA layout; prints a polarization trace.
    SimQca {
        layout: PathBuf,
        /// Comma-separated bit strings in input order (all when omitted).
        #[arg(long, value_delimiter = ',')]
        vectors: Option<Vec<String>>,
        /// Clock cycles per vector.
        #[arg(long, default_value_t = 2)]
        cycles: usize,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
        /// Record every cell, not just the outputs.
        #[arg(long)]
        all_cells: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy dissipation report of a QCA layout.
    Power {
        layout: PathBuf,
        /// Tunneling energies in meV.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1.0,1.5")]
        ek: Vec<f64>,
        /// Temperature in kelvin.
        #[arg(long, default_value_t = 2.0)]
        temp: f64,
        /// Analyze consecutive pairs of these vectors instead of all pairs.
        #[arg(long, value_delimiter = ',')]
        vectors: Option<Vec<String>>,
        /// Also write the per-cell dissipation map here.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cell count and bounding-box area of a QCA layout.
    Footprint {
        layout: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
    Format(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Format(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) | CliError::Format(m) => m,
        }
    }
}

fn simulation(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn qca_error(e: QcaError) -> CliError {
    match e {
        QcaError::InvalidParams(_) | QcaError::UnknownInput(_) | QcaError::UnboundInput(_) => {
            CliError::Usage(e.to_string())
        }
        _ => simulation(e),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn format_error(path: &Path, e: ParseError) -> CliError {
    CliError::Format(format!("{}: {e}", path.display()))
}

fn load_netlist(path: &Path) -> Result<AkersGrid, CliError> {
    parse_netlist(&read(path)?).map_err(|e| format_error(path, e))
}

fn load_layout(path: &Path) -> Result<QcaLayout, CliError> {
    parse_layout(&read(path)?).map_err(|e| format_error(path, e))
}

/// Writes via a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail =
        |e: std::io::Error| CliError::Runtime(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Runtime(format!("cannot write stdout: {e}")))
        }
    }
}

fn parse_bits(text: &str, width: usize, what: &str) -> Result<Vec<Bit>, CliError> {
    if text.len() != width {
        return Err(CliError::Usage(format!(
            "{what} `{text}` has {} bits, expected {width}",
            text.len()
        )));
    }
    text.chars()
        .map(|c| {
            Bit::from_char(c)
                .ok_or_else(|| CliError::Usage(format!("{what} `{text}` is not a bit string")))
        })
        .collect()
}

fn all_vectors(width: usize) -> Vec<String> {
    (0..1usize << width)
        .map(|i| {
            (0..width)
                .map(|k| {
                    if i >> (width - 1 - k) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect()
        })
        .collect()
}

fn build_grid(gate: &str) -> Result<AkersGrid, CliError> {
    match gate {
        "nand" => Ok(build_nand()),
        "nor" => Ok(build_nor()),
        _ => {
            let n = gate
                .strip_prefix("xor:")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown gate `{gate}`; expected nand, nor, xor:<n> or flipflop"
                    ))
                })?;
            build_xor(n).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn gate_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "layout".to_string())
}

fn reference_for(gate: &str) -> Option<ReferenceMetrics> {
    match gate {
        "nand" => Some(NAND_REFERENCE),
        "nor" => Some(NOR_REFERENCE),
        "flipflop" => Some(FLIPFLOP_REFERENCE),
        _ => None,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { gate, out, layout } => {
            if gate == "flipflop" {
                let path = layout.ok_or_else(|| {
                    CliError::Usage("flipflop has no Akers netlist; pass --layout".into())
                })?;
                if out.is_some() {
                    return Err(CliError::Usage(
                        "flipflop has no Akers netlist; drop --out".into(),
                    ));
                }
                let ff = flipflop_layout().map_err(simulation)?;
                return write_atomic(&path, &write_layout(&ff));
            }
            let grid = build_grid(&gate)?;
            if let Some(path) = layout {
                let compiled = compile(&grid).map_err(simulation)?;
                write_atomic(&path, &write_layout(&compiled.layout))?;
            }
            emit(out.as_deref(), &write_netlist(&grid))
        }
        Command::TruthTable {
            netlist,
            stored,
            out,
        } => {
            let grid = load_netlist(&netlist)?;
            let stored = parse_bits(&stored, grid.stored_count(), "stored bits")?;
            let table =
                truth_table_with(&grid, &stored).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(out.as_deref(), &table.to_csv())
        }
        Command::SimLogical {
            netlist,
            vectors,
            stored,
            out,
        } => {
            let grid = load_netlist(&netlist)?;
            let stored = parse_bits(&stored, grid.stored_count(), "stored bits")?;
            let names = grid.variables();
            let vectors = vectors.unwrap_or_else(|| all_vectors(names.len()));
            let mut csv = String::from("inputs,output\n");
            for v in &vectors {
                let bits = parse_bits(v, names.len(), "vector")?;
                let assignment: Assignment = names.iter().cloned().zip(bits).collect();
                let eval = grid_eval(&grid, &assignment, &stored)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let _ = writeln!(csv, "{v},{}", eval.output);
            }
            emit(out.as_deref(), &csv)
        }
        Command::SimQca {
            layout: path,
            vectors,
            cycles,
            tolerance,
            all_cells,
            out,
        } => {
            let mut layout = load_layout(&path)?;
            if !(tolerance.is_finite() && tolerance > 0.0) {
                return Err(CliError::Usage(format!(
                    "tolerance must be > 0, got {tolerance}"
                )));
            }
            layout.params.convergence_tolerance = tolerance;
            let names = layout.input_names();
            let vectors = vectors.unwrap_or_else(|| all_vectors(names.len()));
            let bound = vectors
                .iter()
                .map(|v| {
                    let bits = parse_bits(v, names.len(), "vector")?;
                    Ok(names.iter().cloned().zip(bits).collect::<InputVector>())
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let schedule = ClockSchedule::for_geometry(&layout.geometry);
            let options = RunOptions {
                cycles_per_vector: cycles,
                record_all: all_cells,
            };
            let trace = run_with(&layout, &schedule, &bound, options).map_err(qca_error)?;
            emit(out.as_deref(), &trace.to_csv())
        }
        Command::Power {
            layout: path,
            ek,
            temp,
            vectors,
            map,
            out,
        } => {
            let layout = load_layout(&path)?;
            let params = PowerParams {
                ek_values: ek,
                temperature_k: temp,
            };
            params
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let report = match &vectors {
                Some(v) => analyze_sequence(&layout, &params, v),
                None => analyze(&layout, &params),
            }
            .map_err(|e| match e {
                akers_qca::power::PowerError::InvalidVector(_)
                | akers_qca::power::PowerError::TooManyInputs(_) => CliError::Usage(e.to_string()),
                _ => simulation(e),
            })?;
            if let Some(map_path) = map {
                let csv = dissipation_map_csv(&report, &layout).map_err(simulation)?;
                write_atomic(&map_path, &csv)?;
            }
            emit(out.as_deref(), &report_csv(&[(gate_name(&path), report)]))
        }
        Command::Footprint { layout: path, out } => {
            let layout = load_layout(&path)?;
            let fp = footprint(&layout)
                .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
            let gate = gate_name(&path);
            let reference = reference_for(&gate);
            emit(
                out.as_deref(),
                &metrics_csv(&[GateMetrics {
                    gate,
                    footprint: fp,
                    reference,
                }]),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("akers-qca: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
