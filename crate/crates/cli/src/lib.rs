//! Command-line harness for `coulomb-annulus`: orthogonality certification,
//! kernel evaluation, limit convergence studies, figure data and sampling.
//!
//! Exit codes: 0 success, 1 a quantitative threshold was missed, 2 bad
//! arguments or parameters, 3 a numerical tolerance could not be met (or a
//! scaled point left the annulus).

pub mod commands;
pub mod output;
pub mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "coulomb-annulus", version, about = "Coulomb gases on an elliptic annulus at beta = 2")]
pub struct Cli {
    /// Output file (written atomically); standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Numerical tolerance requested from quadratures.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Seed for commands that draw random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Regime {
    Edge,
    Bulk,
    IntervalEdge,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EndAngle {
    #[value(name = "0")]
    Zero,
    #[value(name = "pi")]
    Pi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParityArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct AnnulusArgs {
    /// Inner elliptic radius.
    #[arg(long = "R", default_value_t = 1.5)]
    pub inner: f64,
    /// Outer elliptic radius.
    #[arg(long = "v", default_value_t = 2.5)]
    pub outer: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram matrix of the monic polynomials against the closed-form norms (JSON).
    VerifyOrthogonality {
        #[arg(long, default_value = "I")]
        model: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[command(flatten)]
        annulus: AnnulusArgs,
        /// Pass threshold for both the off-diagonal and diagonal errors.
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
    /// Normalized angular density sigma(psi) for several v (CSV).
    Figure1 {
        #[arg(long = "v", value_delimiter = ',', default_values_t = vec![1.1, 1.2, 1.5, 2.0])]
        vs: Vec<f64>,
        /// Grid points covering [0, 2 pi], both ends included.
        #[arg(long, default_value_t = 721)]
        points: usize,
    },
    /// Normalized two-molecule correlation lambda(phi) (CSV).
    Figure2 {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, default_value_t = 200.0)]
        phi_max: f64,
        /// Odd number of grid points, symmetric about zero.
        #[arg(long, default_value_t = 4001)]
        points: usize,
    },
    /// Finite-N kernel at scaled points against its large-N limit (CSV).
    Convergence {
        #[arg(long, value_enum)]
        regime: Regime,
        #[arg(long, default_value = "I")]
        model: String,
        #[arg(long = "n", value_delimiter = ',', default_values_t = vec![100, 200, 400])]
        ns: Vec<usize>,
        /// Outer radius (edge regime).
        #[arg(long, default_value_t = 2.5)]
        v: f64,
        /// Reference angle (edge regime).
        #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
        psi: f64,
        /// Annulus depth T.
        #[arg(long = "T", allow_negative_numbers = true)]
        depth: Option<f64>,
        /// Outer offset u (interval regimes).
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        #[arg(long, allow_negative_numbers = true)]
        t1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t2: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi2: Option<f64>,
        /// Interval end (interval-edge regime).
        #[arg(long, value_enum, default_value = "0")]
        angle: EndAngle,
        /// Compare against this interval-end kernel instead of the model's own.
        #[arg(long, value_enum)]
        parity: Option<ParityArg>,
        /// Exit 1 unless the relative error strictly decreases.
        #[arg(long)]
        require_decreasing: bool,
    },
    /// One kernel value K_N(z1, z2) (JSON).
    KernelEval {
        /// I, II, III, IV, or RS for the radially symmetric model.
        #[arg(long, default_value = "I")]
        model: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        annulus: AnnulusArgs,
        /// Weight exponent of the radially symmetric model.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        /// First point as `x,y`.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        z1: Vec<f64>,
        /// Second point as `x,y`.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        z2: Vec<f64>,
    },
    /// Exact samples of the N-point process (CSV).
    Sample {
        #[arg(long, default_value = "II")]
        model: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        annulus: AnnulusArgs,
        /// Number of independent realizations.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 128)]
        envelope_grid: usize,
        #[arg(long, default_value_t = 1.5)]
        envelope_safety: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_rejects: usize,
    },
    /// Bessel kernel at a = -1/2, 1/2 against its sinc closed forms (CSV).
    BesselCheck {
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0.1)]
        min: f64,
        #[arg(long, default_value_t = 20.0)]
        max: f64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
    },
    /// Integral of K_N(z, z) over the annulus for several models and N (CSV).
    TraceCheck {
        #[arg(long, value_delimiter = ',', default_values_t = vec!["I".to_string(), "II".to_string(), "III".to_string(), "IV".to_string()])]
        models: Vec<String>,
        #[arg(long = "n", value_delimiter = ',', default_values_t = vec![1, 4, 16])]
        ns: Vec<usize>,
        #[command(flatten)]
        annulus: AnnulusArgs,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
}
