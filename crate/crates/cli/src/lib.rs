//! Command-line runs of the qentangle toolkit.
//!
//! Each command reads an optional `key = value` config file, applies flag
//! overrides, writes a CSV or JSON results file and a manifest echoing the
//! resolved config. Exit codes: 0 success, 2 config error, 3 capacity
//! error, 4 failed numerical check.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, Command};

use commands::{execute, RunError};
use config::{parse_entries, CommandKind, ConfigError, KeyType, RunConfig};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QENTANGLE_OUT_DIR";

pub fn app() -> Command {
    let mut app = Command::new("qentangle")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Entanglement measures, area-law checks and matrix product states for small spin chains")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for kind in CommandKind::ALL {
        let mut sub = Command::new(kind.name()).about(kind.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value file; flags override its entries"),
        );
        for spec in kind.keys() {
            let mut arg = Arg::new(spec.name).long(spec.name).help(spec.help).action(ArgAction::Set).allow_negative_numbers(true);
            if spec.ty == KeyType::Bool {
                arg = arg.num_args(0..=1).default_missing_value("true");
            }
            if let Some(d) = kind.default_for(spec) {
                arg = arg.long_help(format!("{} [default: {d}]", spec.help));
            }
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub);
    }
    app
}

/// Parses arguments into a resolved config; warnings go to stderr.
pub fn config_from_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = app().try_get_matches_from(args)?;
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let kind = CommandKind::parse(name).expect("subcommands mirror the command list");
    let mut flags = Vec::new();
    for spec in kind.keys() {
        if let Some(v) = sub.get_one::<String>(spec.name) {
            flags.push((spec.name.to_owned(), v.clone()));
        }
    }
    let file = match sub.get_one::<String>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(ConfigError { key: "config".into(), message: format!("{path}: {e}") }))?;
            parse_entries(&text).map_err(config_error)?
        }
        None => Vec::new(),
    };
    let (cfg, warnings) = RunConfig::resolve(kind, &file, &flags).map_err(config_error)?;
    for w in warnings {
        eprintln!("{w}");
    }
    Ok(cfg)
}

fn config_error(e: ConfigError) -> clap::Error {
    clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"))
}

/// Runs `cfg`, writing results and manifest under `dir` unless `out` is set.
/// Returns the results path.
pub fn run(cfg: &RunConfig, dir: &Path) -> Result<PathBuf, RunError> {
    let outcome = execute(cfg)?;
    let results = output::results_path(cfg, dir);
    if let Some(parent) = results.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| RunError::Io(format!("key `out`: {}: {e}", parent.display())))?;
    }
    let io = |p: &Path, e: std::io::Error| RunError::Io(format!("key `out`: {}: {e}", p.display()));
    std::fs::write(&results, output::render(&outcome.table, cfg.text("format"))).map_err(|e| io(&results, e))?;
    let manifest = output::manifest_path(&results);
    let text = output::manifest(cfg, &results, outcome.table.rows.len(), outcome.failure.as_deref());
    std::fs::write(&manifest, text).map_err(|e| io(&manifest, e))?;
    match outcome.failure {
        Some(f) => Err(RunError::Validation(f)),
        None => Ok(results),
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn run_cli<I, T>(args: I, out_dir: Option<PathBuf>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match config_from_args(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
            } else {
                // One line: clap appends usage hints after the first.
                let text = e.render().to_string();
                eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            }
            return e.exit_code();
        }
    };
    let dir = out_dir.unwrap_or_else(|| PathBuf::from("."));
    match run(&cfg, &dir) {
        Ok(path) => {
            println!("{}", path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
