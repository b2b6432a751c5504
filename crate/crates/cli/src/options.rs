//! Command names, flags and their validation.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use mpinv_core::forms::Symmetry;
use mpinv_core::graded::{GradedAlgebra, Kind};
use mpinv_core::Tolerance;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Largest accepted ambient dimension for graded commands.
pub const MAX_AMBIENT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Pinv,
    FormPinv,
    VectorPinv,
    PseudoPinv,
    HermitianPinv,
    Sl2Complete,
    MpElement,
    OrbitHeight,
    MpOrbit,
    Homform,
    ComplexPinv,
    JordanMp,
    ReportTable,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Pinv,
        Command::FormPinv,
        Command::VectorPinv,
        Command::PseudoPinv,
        Command::HermitianPinv,
        Command::Sl2Complete,
        Command::MpElement,
        Command::OrbitHeight,
        Command::MpOrbit,
        Command::Homform,
        Command::ComplexPinv,
        Command::JordanMp,
        Command::ReportTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Pinv => "pinv",
            Command::FormPinv => "form-pinv",
            Command::VectorPinv => "vector-pinv",
            Command::PseudoPinv => "pseudo-pinv",
            Command::HermitianPinv => "hermitian-pinv",
            Command::Sl2Complete => "sl2-complete",
            Command::MpElement => "mp-element",
            Command::OrbitHeight => "orbit-height",
            Command::MpOrbit => "mp-orbit",
            Command::Homform => "homform",
            Command::ComplexPinv => "complex-pinv",
            Command::JordanMp => "jordan-mp",
            Command::ReportTable => "report-table",
        }
    }

    fn uses_algebra(self) -> bool {
        matches!(
            self,
            Command::Sl2Complete | Command::MpElement | Command::OrbitHeight | Command::JordanMp
        )
    }

    fn uses_form(self) -> bool {
        matches!(self, Command::FormPinv | Command::Homform)
    }

    pub fn needs_input(self) -> bool {
        self != Command::ReportTable
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Option(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Sl,
    So,
    Sp,
}

impl AlgebraKind {
    pub fn kind(self) -> Kind {
        match self {
            AlgebraKind::Sl => Kind::Sl,
            AlgebraKind::So => Kind::So,
            AlgebraKind::Sp => Kind::Sp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Symmetric,
    Skew,
}

impl FormKind {
    pub fn symmetry(self) -> Symmetry {
        match self {
            FormKind::Symmetric => Symmetry::Symmetric,
            FormKind::Skew => Symmetry::Skew,
        }
    }
}

/// Flags shared by all commands. `None` means "not given".
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flags {
    pub tol_rank: Option<f64>,
    pub tol_residual: Option<f64>,
    pub seed: Option<u64>,
    pub algebra: Option<AlgebraKind>,
    pub blocks: Option<Vec<usize>>,
    pub form: Option<FormKind>,
}

/// Options after defaults are applied and checked against the command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub tol_rank: f64,
    pub tol_residual: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormKind>,
}

impl Options {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let defaults = Tolerance::default();
        let tol_rank = flags.tol_rank.unwrap_or(defaults.rank_rtol);
        let tol_residual = flags.tol_residual.unwrap_or(defaults.residual_tol);
        Tolerance::new(tol_rank, tol_residual)?;
        if !command.uses_algebra() && (flags.algebra.is_some() || flags.blocks.is_some()) {
            return Err(CliError::Option(format!(
                "--algebra/--blocks do not apply to {command}"
            )));
        }
        if !command.uses_form() && flags.form.is_some() {
            return Err(CliError::Option(format!("--form does not apply to {command}")));
        }
        let mut algebra = None;
        let mut blocks = None;
        if command.uses_algebra() {
            algebra = Some(flags.algebra.unwrap_or(AlgebraKind::Sl));
            blocks = flags.blocks.clone();
            if blocks.is_none() && command != Command::OrbitHeight {
                return Err(CliError::Option(format!("{command} requires --blocks")));
            }
            if let Some(b) = &blocks {
                check_blocks(b)?;
            }
        }
        let form = command.uses_form().then(|| flags.form.unwrap_or(FormKind::Symmetric));
        let opts = Options {
            tol_rank,
            tol_residual,
            seed: flags.seed.unwrap_or(0),
            algebra,
            blocks,
            form,
        };
        Ok(opts)
    }

    pub fn tolerance(&self) -> Result<Tolerance, CliError> {
        Ok(Tolerance::new(self.tol_rank, self.tol_residual)?)
    }

    /// Graded algebra named by the flags; `default_dim` gives the trivial grading
    /// when no blocks were passed.
    pub fn algebra(&self, default_dim: Option<usize>) -> Result<GradedAlgebra, CliError> {
        let kind = self.algebra.unwrap_or(AlgebraKind::Sl).kind();
        let blocks = match (&self.blocks, default_dim) {
            (Some(b), _) => b.clone(),
            (None, Some(n)) => vec![n],
            (None, None) => return Err(CliError::Option("--blocks is required".into())),
        };
        check_blocks(&blocks)?;
        Ok(GradedAlgebra::new(kind, &blocks)?)
    }

    pub fn symmetry(&self) -> Symmetry {
        self.form.unwrap_or(FormKind::Symmetric).symmetry()
    }
}

fn check_blocks(blocks: &[usize]) -> Result<(), CliError> {
    let total: usize = blocks.iter().sum();
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(CliError::Option("block sizes must be positive".into()));
    }
    if total > MAX_AMBIENT {
        return Err(CliError::Option(format!(
            "blocks sum to {total}, above the limit {MAX_AMBIENT}"
        )));
    }
    Ok(())
}

/// Parses `d1,d2,…` into positive block sizes.
pub fn parse_blocks(s: &str) -> Result<Vec<usize>, CliError> {
    let blocks = s
        .split(',')
        .map(|part| {
            let t = part.trim();
            t.parse::<usize>()
                .map_err(|_| CliError::Option(format!("block size `{t}` is not a positive integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    check_blocks(&blocks)?;
    Ok(blocks)
}
