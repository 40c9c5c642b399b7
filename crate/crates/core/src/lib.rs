//! Exact reduction of finite based chain complexes by algebraic Morse theory.
//!
//! Two independent engines compute the reduced complex on the critical cells
//! of a Morse matching together with the transfer maps `f`, `g` and homotopy
//! `h`:
//!
//! * [`gamma`] sums signed composites over zigzag paths of the Morse graph;
//! * [`hpt`] perturbs the trivial contraction of the matched part of the
//!   differential with the basic perturbation lemma.
//!
//! [`reduce::reduce`] with [`reduce::Engine::Both`] runs both and requires
//! blockwise equality. [`verify`] checks contraction identities and computes
//! homology (Smith normal form over ℤ) as an independent observable.

pub mod complex;
pub mod error;
pub mod gamma;
pub mod hpt;
pub mod io;
pub mod lcg;
pub mod matchsearch;
pub mod matrix;
pub mod morse;
pub mod reduce;
pub mod ring;
pub mod verify;

pub use complex::{BasedComplex, BlockMap, Cell, CellId};
pub use error::{Error, Result};
pub use gamma::{gamma_bruteforce, gamma_from, reduce_direct, GammaTable, ReductionResult};
pub use hpt::{
    perturb, reduce_hpt, split_differential, trivial_morse_contraction, Contraction, Perturbation, SeriesBound,
};
pub use matchsearch::greedy_matching;
pub use matrix::Matrix;
pub use morse::{
    build_digraph, build_morse_graph, critical_cells, validate_matching, MatchedInverse, Matching, MatchingError,
};
pub use ring::{RingElement, RingSpec};
pub use verify::{compare_homology, homology, smith_normal_form, verify_contraction, HomologyProfile, IdentityReport};
