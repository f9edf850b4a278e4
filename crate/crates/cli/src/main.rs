use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use clickstat::detectors::DetectorConfig;
use clickstat::multimode::multimode_index_sets;
use clickstat::sampler::{SampleRun, DEFAULT_RESAMPLES};
use clickstat::witnesses::{enumerate_index_sets, MatrixKind};
use clickstat_cli::output::{output_dir, to_csv, write_grouped};
use clickstat_cli::run::{empirical_rows, import_space, run_sample, run_scenario, SampleSettings};
use clickstat_cli::scenario::{
    preset, Criterion, DetectorChoice, Format, Output, Scenario, SetSelection, StateChoice, Sweep,
    PRESET_NAMES,
};
use clickstat_cli::CliError;

#[derive(Parser)]
#[command(name = "clickstat", version, about = "Nonclassicality witnesses for click-counting detectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario at a single intensity and print rows to stdout.
    Witness {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Intensity |α|² to evaluate at.
        #[arg(long)]
        at: f64,
    },
    /// Sweep a scenario over its grid and write one file per set and criterion.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Sample counting statistics and estimate witnesses with bootstrap errors.
    Sample {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 1.0)]
        at: f64,
        #[arg(long, default_value_t = 1_000_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
        resamples: usize,
        /// Analyze a recorded histogram (outcome,count) instead of sampling.
        #[arg(long)]
        import: Option<PathBuf>,
    },
    /// Reproduce the data behind a figure: fig1, fig3, fig4, fig5 or fig6.
    Figures {
        name: String,
        #[arg(long)]
        format: Option<String>,
        /// Print the preset scenario as JSON instead of running it.
        #[arg(long)]
        show: bool,
    },
    /// List the enumerated index sets for a detector.
    Sets {
        #[arg(long)]
        model: String,
        #[arg(long)]
        bins: Option<u32>,
        #[arg(long)]
        levels: Option<u32>,
        /// counts or moments.
        #[arg(long, default_value = "counts")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        modes: usize,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON file; the remaining flags build one when absent.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value = "cli")]
    name: String,
    /// coherent, cat or fock.
    #[arg(long, default_value = "cat")]
    state: String,
    /// even, odd or both (cat states).
    #[arg(long, default_value = "both")]
    parity: String,
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Photon number for Fock states.
    #[arg(long)]
    n: Option<usize>,
    /// photoelectric, onoff or pnr.
    #[arg(long, default_value = "onoff")]
    model: String,
    #[arg(long)]
    bins: Option<u32>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.0)]
    dark: f64,
    /// integer, half or all.
    #[arg(long, default_value = "all")]
    sets: String,
    /// Explicit index set, elements separated by ';', e.g. "1/2;3/2" or
    /// "1/2,0,3/2;3/2,0,1/2". Repeatable; overrides --sets.
    #[arg(long = "set")]
    explicit: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "counts")]
    criteria: Vec<String>,
    /// Multimode ratio cases: i, ii, iii, iv.
    #[arg(long, value_delimiter = ',')]
    cases: Vec<String>,
    #[arg(long, default_value = "log")]
    grid: String,
    #[arg(long, default_value_t = 1e-2)]
    start: f64,
    #[arg(long, default_value_t = 1e1)]
    stop: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value = "csv")]
    format: String,
}

fn parse_name<T: DeserializeOwned>(what: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| CliError::Validation(format!("unknown {what} {s:?}")))
}

impl ScenarioArgs {
    fn build(&self) -> Result<Scenario, CliError> {
        if let Some(path) = &self.scenario {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            return Scenario::from_json(&text);
        }
        let kind = parse_name("state", &self.state)?;
        let parities: Vec<Option<_>> = match (self.state.as_str(), self.parity.as_str()) {
            ("cat", "both") => vec![Some(parse_name("parity", "even")?), Some(parse_name("parity", "odd")?)],
            ("cat", p) => vec![Some(parse_name("parity", p)?)],
            _ => vec![None],
        };
        let states = parities
            .into_iter()
            .map(|parity| StateChoice {
                kind,
                parity,
                modes: self.modes,
                n: self.n,
            })
            .collect();
        let sets = if self.explicit.is_empty() {
            SetSelection::Preset(parse_name("set preset", &self.sets)?)
        } else {
            SetSelection::Explicit(
                self.explicit
                    .iter()
                    .map(|s| s.split(';').map(|e| e.trim().to_string()).collect())
                    .collect(),
            )
        };
        let scenario = Scenario {
            name: self.name.clone(),
            states,
            detector: DetectorChoice {
                model: parse_name("model", &self.model)?,
                bins: self.bins,
                levels: self.levels,
                eta: self.eta,
                dark: self.dark,
            },
            sets,
            criteria: self
                .criteria
                .iter()
                .map(|c| Criterion::parse(c))
                .collect::<Result<_, _>>()?,
            ratio_cases: self
                .cases
                .iter()
                .map(|c| parse_name("ratio case", c))
                .collect::<Result<_, _>>()?,
            sweep: Sweep {
                grid: parse_name("grid", &self.grid)?,
                start: self.start,
                stop: self.stop,
                points: self.points,
            },
            output: Output {
                path: self.out.clone(),
                format: parse_name("format", &self.format)?,
            },
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn sweep(scenario: &Scenario) -> Result<(), CliError> {
    let rows = run_scenario(scenario)?;
    let dir = output_dir(scenario.output.path.as_deref());
    let paths = write_grouped(&dir, &scenario.name, &rows, scenario.output.format)?;
    print_paths(&paths);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Witness { scenario, at } => {
            let mut s = scenario.build()?;
            s.sweep = Sweep::single(at);
            let rows = run_scenario(&s)?;
            std::io::stdout()
                .write_all(to_csv(&rows).as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
            Ok(())
        }
        Command::Sweep { scenario } => sweep(&scenario.build()?),
        Command::Sample {
            scenario,
            at,
            shots,
            seed,
            resamples,
            import,
        } => {
            let s = scenario.build()?;
            let dir = output_dir(s.output.path.as_deref());
            let mut rows = Vec::new();
            let mut paths = Vec::new();
            if let Some(path) = import {
                let file = fs::File::open(&path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let run = SampleRun::read_csv(file, import_space(&s, 10_000)?)?;
                rows.extend(empirical_rows(&s, &run, "imported", at, resamples)?);
            } else {
                let settings = SampleSettings {
                    at,
                    shots,
                    seed,
                    resamples,
                };
                fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                for (id, run, r) in run_sample(&s, &settings)? {
                    let path = dir.join(format!("{}_{id}_histogram.csv", s.name));
                    let file = fs::File::create(&path)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    run.write_csv(file)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    paths.push(path);
                    rows.extend(r);
                }
            }
            paths.extend(write_grouped(&dir, &format!("{}_sample", s.name), &rows, s.output.format)?);
            print_paths(&paths);
            Ok(())
        }
        Command::Figures { name, format, show } => {
            let mut s = preset(&name).ok_or_else(|| {
                CliError::Validation(format!("unknown figure {name:?}; expected one of {PRESET_NAMES:?}"))
            })?;
            if show {
                println!("{}", serde_json::to_string_pretty(&s).expect("serializable scenario"));
                return Ok(());
            }
            if let Some(f) = format {
                s.output.format = parse_name::<Format>("format", &f)?;
            }
            sweep(&s)
        }
        Command::Sets {
            model,
            bins,
            levels,
            kind,
            modes,
        } => {
            let detector = DetectorChoice {
                model: parse_name("model", &model)?,
                bins,
                levels,
                eta: 1.0,
                dark: 0.0,
            };
            let cfg: DetectorConfig = detector.config()?;
            let kind = match kind.as_str() {
                "counts" => MatrixKind::Counts,
                "moments" => MatrixKind::Moments,
                k => return Err(CliError::Validation(format!("unknown matrix kind {k:?}"))),
            };
            let sets = if modes > 1 {
                multimode_index_sets(modes, 1)?
            } else {
                enumerate_index_sets(cfg.model, kind)?
            };
            for set in sets {
                println!("{}\t{}", set.label(), set);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
