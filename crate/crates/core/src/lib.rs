//! Exact-arithmetic Markov categories of semiring-valued kernels.
//!
//! This crate implements finite semiring-valued stochastic matrices (morphisms
//! of the Kleisli category of the distribution monad over a commutative
//! semiring), dilations thereof, and mechanical checkers for the
//! information-flow axioms: determinism, positivity / deterministic marginal
//! independence, causality / parametrized equality strengthening, dilational
//! equality, initiality of dilations, non-creativity, and broadcasting.
//!
//! All arithmetic is exact: rationals are arbitrary-precision fractions,
//! lattice and table semirings are finite, and the ideal quantale of `Z[2i]`
//! uses Hermite-normal-form canonicalization. Every check returns a
//! three-valued [`Verdict`]: `Holds` with an exhaustiveness or theory
//! certificate, `Fails` with a finitely checkable witness, or `UnknownUpTo`
//! a search bound.

pub mod axioms;
pub mod cases;
pub mod dilation;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod pointed;
pub mod semiring;
pub mod verdict;

pub use axioms::AxiomReport;
pub use cases::CaseResult;
pub use dilation::{Dilation, DilationMorphism, SearchOpts};
pub use error::Error;
pub use kernel::{DetFunction, FinSet, Kernel};
pub use semiring::{Ideal, Semiring, SemiringKind, Strategy, Value};
pub use verdict::{Certificate, Verdict, VerdictStatus};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
