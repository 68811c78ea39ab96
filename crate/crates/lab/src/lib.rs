//! Experiment runner for the `qcompound` library: command-line flags and TOML
//! configs in, one deterministic JSON record out.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod matrix_file;
pub mod record;

use std::path::{Path, PathBuf};

use cli::{Cli, Command};
use config::{load_config, merge, ConfigFile};
use error::{LabError, LabResult};
use record::Record;

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "QCOMPOUND_OUT_DIR";

#[derive(Debug)]
pub struct Outcome {
    pub record: Record,
    pub path: PathBuf,
}

fn dispatch(command: &Command, cfg: &ConfigFile, name: &str) -> LabResult<Record> {
    let p = &cfg.params;
    macro_rules! go {
        ($args:expr, $f:path) => {
            $f(merge(p, $args)?)
        };
    }
    match command {
        Command::Divergence(a) => go!(a, commands::divergence::run),
        Command::UnionStress(a) => go!(a, commands::union::union_stress),
        Command::JordanInspect(a) => go!(a, commands::union::jordan_inspect),
        Command::CompoundSim(a) => go!(a, commands::coding::compound_sim),
        Command::InformedSim(a) => go!(a, commands::coding::informed_sim),
        Command::Rates(a) => go!(a, commands::coding::rates),
        Command::PauliExample(a) => go!(a, commands::coding::pauli_example),
        Command::Composite(a) => go!(a, commands::composite::composite),
        Command::NetValidate(a) => go!(a, commands::composite::net_validate),
        Command::Run { .. } => {
            let cmd = named(name)?;
            dispatch(&cmd, cfg, name)
        }
    }
}

/// A command with every flag unset, for `run`.
fn named(name: &str) -> LabResult<Command> {
    Ok(match name {
        "divergence" => Command::Divergence(Default::default()),
        "union-stress" => Command::UnionStress(Default::default()),
        "jordan-inspect" => Command::JordanInspect(Default::default()),
        "compound-sim" => Command::CompoundSim(Default::default()),
        "informed-sim" => Command::InformedSim(Default::default()),
        "rates" => Command::Rates(Default::default()),
        "pauli-example" => Command::PauliExample(Default::default()),
        "composite" => Command::Composite(Default::default()),
        "net-validate" => Command::NetValidate(Default::default()),
        other => return Err(LabError::Config(format!("unknown command `{other}`"))),
    })
}

fn output_path(cli_out: Option<&Path>, cfg: &ConfigFile, name: &str) -> PathBuf {
    if let Some(p) = cli_out {
        return p.to_path_buf();
    }
    if let Some(p) = &cfg.out {
        return p.clone();
    }
    let dir = std::env::var_os(OUT_DIR_VAR).map_or_else(|| PathBuf::from("results"), PathBuf::from);
    dir.join(format!("{name}.json"))
}

/// Runs one command and writes its record. A record whose checks failed is
/// still written and returned; the caller decides the exit status.
pub fn run(cli: &Cli) -> LabResult<Outcome> {
    let config_path = match &cli.command {
        Command::Run { file } => Some(file.as_path()),
        _ => cli.config.as_deref(),
    };
    let cfg = match config_path {
        Some(p) => load_config(p)?,
        None => ConfigFile::default(),
    };
    let name = match (&cli.command, &cfg.command) {
        (Command::Run { .. }, Some(c)) => c.clone(),
        (Command::Run { file }, None) => {
            return Err(LabError::Config(format!("{} has no `command` key", file.display())))
        }
        (cmd, Some(c)) if c != cmd.name() => {
            return Err(LabError::Config(format!(
                "config is for `{c}` but the command line runs `{}`",
                cmd.name()
            )))
        }
        (cmd, _) => cmd.name().to_string(),
    };
    let record = dispatch(&cli.command, &cfg, &name)?;
    let path = output_path(cli.out.as_deref(), &cfg, &name);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| LabError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(&path, record.to_json())
        .map_err(|e| LabError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(Outcome { record, path })
}
