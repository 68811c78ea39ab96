//! Command-line flags. Every parameter is optional here so that a config
//! file can supply it; defaults are applied after the merge.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qcompound", version, about = "Exact small-dimension experiments on compound channels and hypothesis tests")]
pub struct Cli {
    /// TOML config file; flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Result file. Defaults to `$QCOMPOUND_OUT_DIR/<command>.json`, or
    /// `results/<command>.json` when the variable is unset.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One divergence between states read from matrix files.
    Divergence(DivergenceArgs),
    /// Random checks of the projector-union bounds.
    UnionStress(UnionStressArgs),
    /// Jordan blocks of two projectors and their union.
    JordanInspect(JordanArgs),
    /// Exact error of the uninformed-sender code.
    CompoundSim(CompoundSimArgs),
    /// Exact error of the informed-sender code.
    InformedSim(InformedSimArgs),
    /// Converse and achievable rates over the shared-state sweep.
    Rates(RatesArgs),
    /// The all-Pauli compound channel with a maximally entangled input.
    PauliExample(PauliArgs),
    /// Composite hypothesis testing and the universal test.
    Composite(CompositeArgs),
    /// Builds a qubit epsilon-net and validates its covering on samples.
    NetValidate(NetArgs),
    /// Runs the command named by `command = "..."` in a config file.
    Run {
        /// Config file.
        file: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Divergence(_) => "divergence",
            Command::UnionStress(_) => "union-stress",
            Command::JordanInspect(_) => "jordan-inspect",
            Command::CompoundSim(_) => "compound-sim",
            Command::InformedSim(_) => "informed-sim",
            Command::Rates(_) => "rates",
            Command::PauliExample(_) => "pauli-example",
            Command::Composite(_) => "composite",
            Command::NetValidate(_) => "net-validate",
            Command::Run { .. } => "run",
        }
    }
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct DivergenceArgs {
    /// dh, ih, d, v, dmax, imax or mi [default: dh]
    #[arg(long)]
    pub kind: Option<String>,
    /// Type 1 budget for dh and ih [default: 0.1]
    #[arg(long)]
    pub eps: Option<f64>,
    /// First state (bipartite with a layout line for ih, imax, mi).
    #[arg(long)]
    pub rho: Option<PathBuf>,
    /// Second state for dh, d, v and dmax.
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    /// Fail with exit status 4 unless the value is within `tol` of this.
    #[arg(long)]
    pub expect: Option<f64>,
    /// Tolerance for `expect` [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct UnionStressArgs {
    /// Number of projectors per trial [default: 2]
    #[arg(long)]
    pub s: Option<usize>,
    /// Union slack [default: 0.3]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Hilbert-space dimension [default: 4]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Rank of each projector [default: 1]
    #[arg(long)]
    pub rank: Option<usize>,
    /// Number of trials [default: 100]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Random states per trial, on top of one planted state per projector [default: 100]
    #[arg(long)]
    pub states: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct JordanArgs {
    /// First projector file; random projectors are drawn when both files are absent.
    #[arg(long)]
    pub p1: Option<PathBuf>,
    #[arg(long)]
    pub p2: Option<PathBuf>,
    /// Dimension of random projectors [default: 4]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Ranks of random projectors [default: 2]
    #[arg(long)]
    pub rank1: Option<usize>,
    #[arg(long)]
    pub rank2: Option<usize>,
    /// Far/Near threshold [default: 0.3]
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CompoundSimArgs {
    /// Channel family, e.g. `pauli:IZ` or `random:2` [default: pauli:IZ]
    #[arg(long)]
    pub family: Option<String>,
    /// Kraus operators per random channel [default: 2]
    #[arg(long)]
    pub kraus: Option<usize>,
    /// Shared state, `bell` or `schmidt:p0,p1` [default: bell]
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Rate in bits; the certified rate when absent.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Simulate only this channel.
    #[arg(long)]
    pub true_channel: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct InformedSimArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub kraus: Option<usize>,
    /// One shared state per channel (repeat the flag); `bell` for all when absent.
    #[arg(long)]
    pub states: Option<Vec<String>>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Rate in bits; the certified rate when absent.
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub true_channel: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RatesArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub kraus: Option<usize>,
    /// Schmidt grid step of the shared-state sweep [default: 0.05]
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct PauliArgs {
    /// Number of qubits (only 1 is supported) [default: 1]
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Seed of the random inputs for the averaged-channel check [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CompositeArgs {
    /// Null states from matrix files (repeat the flag).
    #[arg(long)]
    pub s1: Option<Vec<PathBuf>>,
    /// Alternative states from matrix files (repeat the flag).
    #[arg(long)]
    pub s2: Option<Vec<PathBuf>>,
    /// Number of random qubit null states, used when `s1` is absent.
    #[arg(long)]
    pub s1_random: Option<usize>,
    /// Number of random qubit alternative states, used when `s2` is absent.
    #[arg(long)]
    pub s2_random: Option<usize>,
    /// Copies [default: 1]
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Slack of the universal test [default: 0.1]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Replace the null states by their nearest points of a qubit net [default: false]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub net: Option<bool>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct NetArgs {
    /// Target squared-fidelity deficit; `delta^2 / n` when absent.
    #[arg(long)]
    pub deficit: Option<f64>,
    /// Copies, for the deficit and the size bound [default: 1]
    #[arg(long)]
    pub n: Option<usize>,
    /// Slack, for the deficit and the size bound [default: 0.3]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Validation samples [default: 10000]
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}
