mod config;
mod error;
mod figures;
mod manifest;
mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use su_interferometry::table::Table;
use su_interferometry::verify::{self, ToleranceOverrides};

use config::SweepConfig;
use error::{CliError, CliResult};
use figures::Preset;
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "su-interferometry", version, about = "Phase sensitivity of SU(2) and SU(1,1) interferometers")]
struct Cli {
    /// Worker threads for sweeps and checks.
    #[arg(long, global = true, env = "SU_INTERFEROMETRY_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the data behind one figure as CSV.
    Figure {
        /// fig2, fig3, fig4, fig6, fig7 or fig8; may instead come from `preset` in the config.
        preset: Option<String>,
        /// CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Manifest path; defaults to `<out>.manifest.json` when `--out` is given.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Run the cross-oracle checks. Exits 1 if any check fails.
    Verify {
        /// Run only these checks (repeatable).
        #[arg(long = "check", value_name = "ID")]
        checks: Vec<String>,
        /// Global tolerance `T`, or `ID=T` for one check (repeatable).
        #[arg(long, value_name = "T|ID=T")]
        tolerance: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Manifest path; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List check ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Evaluate G, delta phi^2, N and E over a grid from a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV path; overrides `out` in the config; stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

fn write_table(table: &Table, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|source| CliError::Write {
                path: path.to_path_buf(),
                source,
            })?;
            let mut w = std::io::BufWriter::new(f);
            table
                .write_csv(&mut w)
                .and_then(|_| w.flush())
                .map_err(|source| CliError::Write {
                    path: path.to_path_buf(),
                    source,
                })
        }
        None => table.write_csv(std::io::stdout().lock()).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn manifest_path(explicit: Option<PathBuf>, out: Option<&Path>) -> Option<PathBuf> {
    explicit.or_else(|| {
        out.map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

fn load_config(path: Option<&Path>) -> CliResult<SweepConfig> {
    path.map_or_else(|| Ok(SweepConfig::default()), SweepConfig::load)
}

fn emit(table: &Table, mut manifest: RunManifest, out: Option<PathBuf>, explicit: Option<PathBuf>) -> CliResult<bool> {
    write_table(table, out.as_deref())?;
    if let Some(p) = &out {
        manifest.outputs.push(p.display().to_string());
    }
    if let Some(m) = manifest_path(explicit, out.as_deref()) {
        manifest.write(&m)?;
    }
    Ok(true)
}

fn figure_command(preset: Option<String>, out: Option<PathBuf>, config: Option<PathBuf>, manifest: Option<PathBuf>) -> CliResult<bool> {
    let cfg = load_config(config.as_deref())?;
    let preset = match preset {
        Some(s) => s.parse::<Preset>().map_err(CliError::Usage)?,
        None => cfg.preset.ok_or_else(|| CliError::Usage("no preset given; pass one of fig2, fig3, fig4, fig6, fig7, fig8".into()))?,
    };
    let table = figures::figure_table(preset)?;
    let mut echo = cfg.echo.clone();
    echo.push(("preset".into(), preset.to_string()));
    emit(&table, RunManifest::new("figure", echo), out.or(cfg.out), manifest)
}

fn parse_tolerances(args: &[String], base: ToleranceOverrides) -> CliResult<ToleranceOverrides> {
    let mut t = base;
    for a in args {
        match a.split_once('=') {
            Some((id, v)) => {
                let id = id.trim();
                if !verify::check_ids().any(|c| c == id) {
                    return Err(CliError::Usage(format!("unknown check `{id}` in --tolerance")));
                }
                t.per_check.insert(id.to_string(), config::parse_tolerance(v).map_err(CliError::Usage)?);
            }
            None => t.global = Some(config::parse_tolerance(a).map_err(CliError::Usage)?),
        }
    }
    Ok(t)
}

fn verify_command(checks: Vec<String>, tolerance: Vec<String>, config: Option<PathBuf>, out: Option<PathBuf>) -> CliResult<bool> {
    let cfg = load_config(config.as_deref())?;
    let overrides = parse_tolerances(&tolerance, cfg.tolerances.clone())?;
    let ids: Vec<&'static str> = if checks.is_empty() {
        verify::check_ids().collect()
    } else {
        checks
            .iter()
            .map(|c| {
                verify::check_ids()
                    .find(|id| id == c)
                    .ok_or_else(|| CliError::Usage(format!("unknown check `{c}`; see --list")))
            })
            .collect::<CliResult<_>>()?
    };
    let mut echo = cfg.echo.clone();
    echo.extend(tolerance.iter().map(|t| ("--tolerance".to_string(), t.clone())));
    let mut manifest = RunManifest::new("verify", echo);
    for id in ids {
        let outcome = verify::run_check(id, &overrides)?;
        eprintln!("{outcome}");
        manifest.checks.push(outcome);
    }
    let failed = manifest.checks.iter().filter(|c| !c.passed()).count();
    eprintln!("verify: {} passed; {failed} failed", manifest.checks.len() - failed);
    match &out {
        Some(p) => manifest.write(p)?,
        None => println!("{}", serde_json::to_string_pretty(&manifest.to_json()).expect("manifest serializes")),
    }
    Ok(manifest.passed())
}

fn sweep_command(config: PathBuf, out: Option<PathBuf>, manifest: Option<PathBuf>) -> CliResult<bool> {
    let cfg = SweepConfig::load(&config)?;
    if let Some(p) = cfg.preset {
        let table = figures::figure_table(p)?;
        return emit(&table, RunManifest::new("sweep", cfg.echo.clone()), out.or(cfg.out), manifest);
    }
    let table = sweep::sweep_table(&cfg)?;
    emit(&table, RunManifest::new("sweep", cfg.echo.clone()), out.or(cfg.out.clone()), manifest)
}

fn run(cli: Cli) -> CliResult<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    match cli.command {
        Command::Figure {
            preset,
            out,
            config,
            manifest,
        } => figure_command(preset, out, config, manifest),
        Command::Verify { list: true, .. } => {
            for c in verify::CHECKS {
                println!("{}\t{}", c.id, c.summary);
            }
            Ok(true)
        }
        Command::Verify {
            checks,
            tolerance,
            config,
            out,
            list: false,
        } => verify_command(checks, tolerance, config, out),
        Command::Sweep { config, out, manifest } => sweep_command(config, out, manifest),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
