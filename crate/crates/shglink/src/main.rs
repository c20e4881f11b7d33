use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shglink::config::{load_config, RunConfig, CONFIG_DIR_ENV};
use shglink::figures::{self, Figure};
use shglink::sweep::{link_row, run_sweep, solve_point, summary_footer, SweepSpec, LINK_COLUMNS};
use shglink::table::{Cell, Format, Table};
use shglink_core::resonator;

/// Resonant-beam link with intra-cavity frequency doubling.
#[derive(Debug, Parser)]
#[command(name = "shglink", version, about)]
struct Cli {
    /// Configuration file (`key = value unit` lines). Defaults to
    /// `$SHGLINK_CONFIG_DIR/shglink.conf` if present, else built-in values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override one configuration key, e.g. `--set d=8m`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    format: OutputFormat,

    /// Worker threads for grid evaluation (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stability parameters of the resonator at the configured distance.
    Stability,
    /// Beam radius along the resonator axis.
    BeamProfile,
    /// Full link budget at the configured pump power and distance.
    Link,
    /// Evaluate the link over a linear grid of one variable.
    Sweep {
        /// p_in, d or z.
        #[arg(long)]
        var: String,
        /// Start value; units optional (bare numbers are SI).
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, allow_hyphen_values = true)]
        stop: String,
        #[arg(long)]
        count: usize,
    },
    /// Data for a standard plot: fig5, fig6, fig7 or fig8.
    Fig { name: String },
    /// Print the effective configuration.
    Config,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn build_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = load_config(cli.config.as_deref()).map_err(usage)?;
    for o in &cli.overrides {
        cfg.apply_override(o).map_err(usage)?;
    }
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn stability_table(cfg: &RunConfig) -> Result<(Table, bool), Failure> {
    let g = cfg.link.geometry(cfg.d).map_err(usage)?;
    let r = resonator::is_stable(&g);
    let mut t = Table::new(&[
        "d_m",
        "f_RR_m",
        "stability_bound_m",
        "g1",
        "g2",
        "L_star_m",
        "g1g2",
        "stable",
    ]);
    t.push(vec![
        cfg.d.into(),
        r.f_rr.into(),
        r.d_bound.into(),
        r.params.g1.into(),
        r.params.g2.into(),
        r.params.length.into(),
        r.product.into(),
        r.stable.into(),
    ]);
    Ok((t, !r.stable))
}

fn run(cli: &Cli) -> Result<(Table, bool), Failure> {
    let cfg = build_config(cli)?;
    let threads = cli.threads;
    match &cli.command {
        Command::Stability => stability_table(&cfg),
        Command::BeamProfile => {
            let (_, unstable) = stability_table(&cfg)?;
            if unstable {
                return Err(Failure::Usage(format!("resonator is unstable at d = {} m", cfg.d)));
            }
            let table = figures::beam_profile(&cfg).map_err(usage)?;
            Ok((table, false))
        }
        Command::Link => {
            let outcome = solve_point(cfg.p_in, cfg.d, &cfg).map_err(usage)?;
            let mut table = Table::new(&LINK_COLUMNS);
            table.push(link_row(&outcome));
            table.footer = summary_footer(&cfg);
            Ok((table, outcome.is_flagged()))
        }
        Command::Sweep {
            var,
            start,
            stop,
            count,
        } => {
            let spec = SweepSpec::parse(var, start, stop, *count).map_err(usage)?;
            let out = run_sweep(&spec, &cfg, threads).map_err(usage)?;
            Ok((out.table, out.flagged))
        }
        Command::Fig { name } => {
            let figure: Figure = name.parse().map_err(Failure::Usage)?;
            let out = figures::render(figure, &cfg, threads).map_err(usage)?;
            Ok((out.table, out.flagged))
        }
        Command::Config => {
            let mut t = Table::new(&["config"]);
            t.push(vec![Cell::Text(cfg.to_text())]);
            Ok((t, false))
        }
    }
}

fn emit(cli: &Cli, table: &Table) -> io::Result<()> {
    let format = match cli.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Jsonl => Format::JsonLines,
    };
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if let Command::Config = cli.command {
        // Plain config text, loadable with --config.
        if let Some(Cell::Text(text)) = table.rows.first().and_then(|r| r.first()) {
            sink.write_all(text.as_bytes())?;
        }
    } else {
        table.write(format, &mut *sink)?;
    }
    sink.flush()
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
        Ok((table, flagged)) => {
            if let Err(e) = emit(&cli, &table) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if flagged {
                eprintln!("warning: some results are unstable or outside the small-signal regime");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            if std::env::var_os(CONFIG_DIR_ENV).is_some() && cli.config.is_none() {
                eprintln!("note: configuration read via {CONFIG_DIR_ENV}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
