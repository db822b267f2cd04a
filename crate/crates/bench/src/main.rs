use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser};

use randproj_bench::{save_report, BenchError, Config, ExperimentRegistry, Format};

/// Run one randomized linear algebra experiment and print its result table.
#[derive(Debug, Parser)]
#[command(name = "randproj", version)]
struct Cli {
    /// Experiment to run (`list` shows all of them).
    experiment: String,

    #[arg(long)]
    seed: Option<u64>,

    /// Target rank or dimension; replaces the experiment's default sweep.
    #[arg(long)]
    rank: Option<usize>,

    #[arg(long)]
    oversampling: Option<usize>,

    /// Power iterations for the randomized SVD.
    #[arg(long)]
    power: Option<usize>,

    #[arg(long, conflicts_with = "gamma_range")]
    gamma: Option<f64>,

    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    gamma_range: Option<Vec<f64>>,

    /// Random Fourier feature count.
    #[arg(long)]
    features: Option<usize>,

    /// Groups of features for parameter-range sampling.
    #[arg(long)]
    groups: Option<usize>,

    /// Feature scaling: `paper` (no √2) or `corrected`.
    #[arg(long, value_parser = ["paper", "corrected"])]
    mode: Option<String>,

    #[arg(long)]
    folds: Option<usize>,

    /// Also run the grid search in parallel, optionally with T threads.
    #[arg(long, num_args = 0..=1, value_name = "T", default_missing_value = "0")]
    parallel: Option<usize>,

    /// Input data: a CSV file or a directory of PGM images.
    #[arg(long)]
    data: Option<PathBuf>,

    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,

    /// Any other experiment setting, as key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", action = ArgAction::Append)]
    set: Vec<String>,
}

impl Cli {
    fn config(&self) -> Result<Config, BenchError> {
        let mut c = Config::new();
        if let Some(v) = self.seed {
            c.set("seed", v);
        }
        if let Some(v) = self.rank {
            c.set("rank", v);
        }
        if let Some(v) = self.oversampling {
            c.set("oversampling", v);
        }
        if let Some(v) = self.power {
            c.set("power", v);
        }
        if let Some(v) = self.gamma {
            c.set("gamma", v);
        }
        if let Some(r) = &self.gamma_range {
            c.set("gamma-range", format!("{},{}", r[0], r[1]));
        }
        if let Some(v) = self.features {
            c.set("features", v);
        }
        if let Some(v) = self.groups {
            c.set("groups", v);
        }
        if let Some(v) = &self.mode {
            c.set("mode", v);
        }
        if let Some(v) = self.folds {
            c.set("folds", v);
        }
        if let Some(v) = self.parallel {
            c.set("parallel", v);
        }
        if let Some(v) = &self.data {
            c.set("data", v.display());
        }
        for pair in &self.set {
            c.set_pair(pair)?;
        }
        Ok(c)
    }
}

fn run(cli: &Cli) -> Result<(), BenchError> {
    let registry = ExperimentRegistry::standard();
    if cli.experiment == "list" {
        let mut out = std::io::stdout().lock();
        for e in registry.iter() {
            let _ = writeln!(out, "{:<12} {}", e.name(), e.summary());
            let _ = writeln!(out, "{:<12} keys: {}", "", e.keys().join(", "));
        }
        return Ok(());
    }
    let experiment = registry.get(&cli.experiment)?;
    let format: Format = cli.format.parse()?;
    let report = experiment.run(&cli.config()?)?;
    match &cli.out {
        Some(path) => save_report(&report, path, format),
        None => {
            let text = report.render(format)?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| BenchError::io("<stdout>", e))
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
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
