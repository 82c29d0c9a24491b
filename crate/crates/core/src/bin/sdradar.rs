use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use sdradar::alignment::RangeReport;
use sdradar::channel::RadarParams;
use sdradar::codes::build_pnc128;
use sdradar::correlator::ComplexVector;
use sdradar::export::{export_magnitudes, export_results, Format};
use sdradar::iq::ingest_iq;
use sdradar::pipeline::{process_window, reference_code};
use sdradar::scenario::{resolve_scenario, Scenario};
use sdradar::selftest::run_selftest;
use sdradar::simulation::run_monte_carlo;
use sdradar::{Error, Result};

#[derive(Parser)]
#[command(
    name = "sdradar",
    version,
    about = "Single-receiver SDR radar with direct-path delay realignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo run of a scenario.
    Simulate {
        /// Scenario file, or `fig5` for the bundled two-target scenario.
        #[arg(long)]
        scenario: String,
        /// Override the scenario's trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write per-trial records here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Also write aligned A-scan magnitudes, one row per trial, to
        /// `<out stem>.ascans.csv`.
        #[arg(long)]
        dump_ascans: bool,
    },
    /// Align and range every window of a raw IQ capture (interleaved f32 LE).
    Process {
        #[arg(long)]
        input: PathBuf,
        /// Scenario supplying radar parameters and the peak threshold.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        threshold: Option<f64>,
        /// Write the per-window reports as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the 128-symbol reference code.
    Code,
    /// Run the correlator oracle and the delay-invariance sweep.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn ascan_path(out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => p.with_extension("ascans.csv"),
        None => PathBuf::from("ascans.csv"),
    }
}

fn simulate(
    scenario: &str,
    trials: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: &str,
    dump_ascans: bool,
) -> Result<()> {
    let format: Format = format.parse()?;
    let mut scenario = resolve_scenario(scenario)?;
    if let Some(t) = trials {
        scenario.trials = t;
    }
    if let Some(s) = seed {
        scenario.channel.seed = s;
    }
    scenario.validate()?;
    for w in scenario.warnings() {
        eprintln!("warning: {w}");
    }

    let run = run_monte_carlo(&scenario)?;
    let s = &run.summary;
    let covered = s.delay_histogram.iter().filter(|&&c| c > 0).count();
    println!("scenario: {}", s.label);
    println!("trials: {}", s.trials);
    println!("expected bins: {:?}", s.expected_bins);
    println!(
        "success rate: {:.3} ({}/{})",
        s.success_rate, s.successes, s.trials
    );
    println!(
        "delay bins covered: {}/{}",
        covered,
        s.delay_histogram.len()
    );
    println!("reproducibility hash: {}", s.reproducibility_hash);

    if let Some(path) = &out {
        export_results(&run.records, s, format, path)?;
        println!("records written to {}", path.display());
    }
    if dump_ascans {
        let path = ascan_path(out.as_deref());
        export_magnitudes(&run.aligned_magnitudes, &path)?;
        println!("aligned magnitudes written to {}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct WindowOutput {
    window: usize,
    reference_bin: usize,
    report: RangeReport,
}

fn process(
    input: &Path,
    scenario: Option<&str>,
    threshold: Option<f64>,
    out: Option<&Path>,
) -> Result<()> {
    let (params, default_threshold) = match scenario {
        Some(s) => {
            let sc: Scenario = resolve_scenario(s)?;
            (sc.radar, sc.threshold)
        }
        None => (RadarParams::default(), Scenario::fig5().threshold),
    };
    let threshold = threshold.unwrap_or(default_threshold);
    let reference = ComplexVector::new(reference_code(&params)?.to_complex())?;
    let capture = ingest_iq(input, &params)?;
    if capture.dropped_samples > 0 {
        eprintln!(
            "warning: dropped {} trailing samples (partial window)",
            capture.dropped_samples
        );
    }

    let mut outputs = Vec::with_capacity(capture.windows.len());
    for (i, w) in capture.windows.iter().enumerate() {
        let res = process_window(w, &reference, &params, threshold)?;
        let echoes: Vec<String> = res
            .report
            .echoes()
            .map(|e| format!("bin {} ({} m, |r| {:.3})", e.bin, e.range_m, e.magnitude))
            .collect();
        println!(
            "window {i}: reference bin {}; echoes: {}",
            res.reference_bin,
            if echoes.is_empty() {
                "none".to_string()
            } else {
                echoes.join(", ")
            }
        );
        outputs.push(WindowOutput {
            window: i,
            reference_bin: res.reference_bin,
            report: res.report,
        });
    }
    if let Some(path) = out {
        let file = std::fs::File::create(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), &outputs)
            .map_err(|e| Error::Export(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            scenario,
            trials,
            seed,
            out,
            format,
            dump_ascans,
        } => simulate(&scenario, trials, seed, out, &format, dump_ascans),
        Command::Process {
            input,
            scenario,
            threshold,
            out,
        } => process(&input, scenario.as_deref(), threshold, out.as_deref()),
        Command::Code => {
            let symbols: Vec<String> = build_pnc128().symbols().iter().map(i8::to_string).collect();
            println!("{}", symbols.join(","));
            Ok(())
        }
        Command::Selftest { seed } => match run_selftest(seed) {
            Ok(report) => {
                for line in report.lines() {
                    println!("{line}");
                }
                if !report.passed() {
                    return ExitCode::from(1);
                }
                Ok(())
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
