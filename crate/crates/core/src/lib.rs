//! Linear cellular automata whose columns carry automatic sequences: finite
//! field arithmetic, automata, algebraic equations for their generating
//! series, and the synthesis and simulation of the automaton itself.

pub mod bipoly;
pub mod christol;
pub mod dfao;
pub mod engine;
pub mod error;
pub mod field;
pub mod normalizer;
pub mod poly;
pub mod render;
pub mod synthesizer;

pub use bipoly::BiPoly;
pub use christol::{algebraic_equation, kernel_system, verify_equation, KernelSystem, OreEquation};
pub use dfao::{Dfao, Origin, SeqPrefix, Substitution};
pub use engine::{
    column_stream, guess_dfao, rewind, simulate, simulate_backward, spacetime_series, step, CandidateDfao, Diagram, Guess,
    RationalSeries, Row,
};
pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use normalizer::{normalize, normalize_invertible, NormalizedEquation};
pub use poly::{LaurentPoly, Poly, RatFun};
pub use synthesizer::{build_ca, wrap_memoryless, CaSpec, WrappedCa};
