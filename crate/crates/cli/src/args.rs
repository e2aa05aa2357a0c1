use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homlkit_core::surface::FrameFlags;
use homlkit_core::theories::{BundleId, EssenceVariant, QuantifierVariant, UltrafilterMode};

/// Bounded model finding and validity checking for higher-order modal logic.
#[derive(Debug, Parser)]
#[command(name = "homlkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every goal (or the named ones) for countermodels at each scope.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scopes: Scopes,
        /// Only check this goal; repeatable.
        #[arg(long = "goal")]
        goals: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Find a model of the axioms at the first scope that has one.
    FindModel {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scopes: Scopes,
        #[command(flatten)]
        output: Output,
    },
    /// List distinct models of the axioms at one scope.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_scope)]
        scope: (usize, usize),
        #[arg(long, default_value_t = 64)]
        limit: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Church's lifted postulates; boolean extensionality must fail exactly
    /// when there is more than one world.
    ChurchSuite {
        #[command(flatten)]
        scopes: Scopes,
        #[command(flatten)]
        output: Output,
    },
    /// Consistency, necessary existence, ultrafilter property and positive
    /// property counts for the ontological theory.
    GoedelSuite {
        /// Restrict to one reading of the quantifiers (default: both).
        #[arg(long)]
        quantifiers: Option<QuantifierVariant>,
        #[arg(long, default_value = "scott")]
        essence: EssenceVariant,
        #[arg(long, default_value = "intension")]
        ultrafilter: UltrafilterMode,
        #[command(flatten)]
        scopes: Scopes,
        /// Models enumerated per scope for the ultrafilter check.
        #[arg(long, default_value_t = 4096)]
        limit: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Minimum number of distinct positive properties over all models.
    CountPositive {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        entities: usize,
        #[arg(long, default_value_t = 1)]
        worlds: usize,
        #[arg(long, value_enum, default_value_t = CountArg::Designated)]
        count: CountArg,
        /// Designated world for `--count designated`.
        #[arg(long, default_value_t = 0)]
        world: usize,
        /// Only count models with exactly this many entities existing at the
        /// designated world.
        #[arg(long)]
        existing: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Write the ground problem as DIMACS CNF.
    ExportCnf {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_scope)]
        scope: (usize, usize),
        /// Ground in refutation mode against this goal.
        #[arg(long)]
        goal: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub bundle: Option<BundleId>,
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Replace the theory's frame conditions: k, t, s4, s5 or a list of
    /// refl, symm, trans.
    #[arg(long, value_parser = parse_frame)]
    pub frame: Option<FrameFlags>,
    #[arg(long, default_value = "actualist")]
    pub quantifiers: QuantifierVariant,
    #[arg(long, default_value = "scott")]
    pub essence: EssenceVariant,
    /// Add the ultrafilter goal to the ontological bundle.
    #[arg(long)]
    pub ultrafilter: Option<UltrafilterMode>,
    /// Add the infinity axiom to the modal mathematics bundle.
    #[arg(long)]
    pub infinity: bool,
}

#[derive(Debug, Args)]
pub struct Scopes {
    /// Scope as `worlds,entities`; repeatable.
    #[arg(long = "scope", value_parser = parse_scope)]
    pub scopes: Vec<(usize, usize)>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solver conflict budget [default: $HOMLKIT_BUDGET or 10000000].
    #[arg(long)]
    pub budget: Option<u64>,
    /// Prune models that differ only by a renaming of worlds.
    #[arg(long)]
    pub symmetry_breaking: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountArg {
    Designated,
    AllWorlds,
}

fn parse_scope(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s.split_once(',').ok_or("expected `worlds,entities`")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    let (n, m) = (num(n)?, num(m)?);
    if n == 0 || m == 0 {
        return Err("scope must be positive".into());
    }
    Ok((n, m))
}

fn parse_frame(s: &str) -> Result<FrameFlags, String> {
    FrameFlags::parse_list(s).ok_or_else(|| format!("unknown frame `{s}`"))
}
