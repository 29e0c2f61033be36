use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "mackey", version, about = "Mackey functors, norms and Tambara functors for cyclic p-groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Norm construction strategy: auto, brute or rewrite
    #[arg(long, global = true, default_value = "auto")]
    pub strategy: String,
    /// Recompute every norm by brute force and fail on disagreement
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Enumeration / search cap
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Also write a machine-readable result here
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

/// The cyclic group C_{p^n}.
#[derive(Args, Debug, Clone, Copy)]
pub struct Group {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the sum formula for N_H^K, or the transfer formula when --H-prime is given
    DeriveReciprocity {
        #[command(flatten)]
        group: Group,
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "H")]
        h: usize,
        #[arg(long = "H-prime")]
        h_prime: Option<usize>,
    },
    /// Norm N_H^G of a functor over the subgroup at level H
    Norm {
        #[command(flatten)]
        group: Group,
        #[arg(long = "H")]
        h: usize,
        /// JSON file, or a built-in: burnside, z, z/<m>
        #[arg(long)]
        input: String,
    },
    /// Box product of two or more functors
    Box {
        #[arg(long, num_args = 1.., required = true)]
        input: Vec<String>,
        /// Group for built-in inputs
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// X ⊗ M for a finite G-set X given by the levels of its orbit stabilizers
    TensorGset {
        #[command(flatten)]
        group: Group,
        #[arg(long, value_delimiter = ',')]
        orbits: Vec<usize>,
        #[arg(long)]
        input: String,
    },
    /// Check the Mackey or Tambara axioms
    Verify {
        #[arg(long, conflicts_with = "tambara", required_unless_present = "tambara")]
        mackey: Option<String>,
        /// JSON file with a tambara section, or burnside
        #[arg(long)]
        tambara: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Isomorphism checks
    IsoCheck {
        #[command(subcommand)]
        which: IsoCheck,
    },
    /// Worked examples
    Examples {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Subcommand, Debug)]
pub enum IsoCheck {
    /// N_K^G N_H^K M ≅ N_H^G M
    Composability {
        #[command(flatten)]
        group: Group,
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "H")]
        h: usize,
        #[arg(long)]
        input: String,
    },
    /// N_H^G (M □ L) ≅ N_H^G M □ N_H^G L
    Monoidality {
        #[command(flatten)]
        group: Group,
        #[arg(long = "H")]
        h: usize,
        #[arg(long, num_args = 2, required = true)]
        input: Vec<String>,
    },
    /// Search for an isomorphism between two functors
    Custom {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Example {
    /// The Burnside functor
    Burnside {
        #[command(flatten)]
        group: Group,
    },
    /// The norm from the trivial group to C_2 of Z/2
    #[command(name = "fig4")]
    NormOfZ2,
}
