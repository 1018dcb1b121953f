//! Quantum-inspired and simple genetic algorithms, with exact statistics for
//! how many quantum chromosomes match a schema.
//!
//! The crate is organised around six pieces:
//!
//! * [`spline`] builds the one-dimensional cubic-spline landscape and maps
//!   bitstrings onto it.
//! * [`schema`] handles schemata over `{0, 1, *}`, their match probability
//!   against a quantum chromosome and their static fitness.
//! * [`propagation`] computes the mean, variance and distribution of the number
//!   of population members matching a schema.
//! * [`sga`] and [`qiga`] implement the two optimisers.
//! * [`harness`] replicates runs, aggregates them and writes CSV output.
//!
//! ```
//! use qigalab::{schema::Schema, qubit::{QuantumChromosome, QubitGene}};
//!
//! let q = QuantumChromosome::new(vec![
//!     QubitGene::one(),
//!     QubitGene::zero(),
//!     QubitGene::new(0.5, 3f64.sqrt() / 2.0).unwrap(),
//! ]);
//! let s: Schema = "1*1".parse().unwrap();
//! assert!((s.match_probability(&q).unwrap() - 0.75).abs() < 1e-12);
//! ```

pub mod chromosome;
pub mod error;
pub mod harness;
pub mod lookup;
pub mod numeric;
pub mod propagation;
pub mod qiga;
pub mod qubit;
pub mod schema;
pub mod sga;
pub mod snapshot;
pub mod spline;

pub use chromosome::BinaryChromosome;
pub use error::{Error, Result};
pub use lookup::{RotationLookupTable, SignRule};
pub use propagation::MatchCountStats;
pub use qiga::{run_qiga, QigaConfig, QigaGeneration};
pub use qubit::{QuantumChromosome, QuantumPopulation, QubitGene};
pub use schema::Schema;
pub use sga::{run_sga, SgaConfig};
pub use snapshot::GenerationSnapshot;
pub use spline::{Boundary, Knot, SplineFitness};

// The guide's code listings are compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/landscape.md")]
    mod landscape {}
    #[doc = include_str!("../../../book/src/schemata.md")]
    mod schemata {}
    #[doc = include_str!("../../../book/src/propagation.md")]
    mod propagation {}
    #[doc = include_str!("../../../book/src/algorithms.md")]
    mod algorithms {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
