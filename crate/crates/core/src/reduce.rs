//! Running the two reduction engines and comparing their output.

use std::fmt;
use std::str::FromStr;

use crate::complex::{BasedComplex, BlockMap};
use crate::error::{Error, Result};
use crate::gamma::{reduce_direct, ReductionResult};
use crate::hpt::reduce_hpt;
use crate::morse::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Path sums over the Morse graph.
    Gamma,
    /// Perturbation of the trivial Morse contraction.
    Hpt,
    /// Both, required to agree.
    Both,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Engine::Gamma),
            "hpt" => Ok(Engine::Hpt),
            "both" => Ok(Engine::Both),
            _ => Err(Error::Parse(format!("unknown engine {s:?}"))),
        }
    }
}

/// Where two reductions differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineDisagreement {
    pub differences: Vec<String>,
}

impl fmt::Display for EngineDisagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "engines disagree:")?;
        for d in &self.differences {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

fn diff_maps(name: &str, a: &BlockMap, b: &BlockMap, out: &mut Vec<String>) {
    if a.shift() != b.shift() {
        out.push(format!("{name}: shift {} vs {}", a.shift(), b.shift()));
    }
    for (s, t, m) in a.iter() {
        match b.get(s, t) {
            Some(n) if n == m => {}
            Some(_) => out.push(format!("{name}: block {s} -> {t} differs")),
            None => out.push(format!("{name}: block {s} -> {t} only in gamma result")),
        }
    }
    for (s, t, _) in b.iter() {
        if a.get(s, t).is_none() {
            out.push(format!("{name}: block {s} -> {t} only in hpt result"));
        }
    }
}

/// Blockwise comparison of reduced differential, cells, `f`, `g` and `h`.
pub fn compare_reductions(gamma: &ReductionResult, hpt: &ReductionResult) -> Option<EngineDisagreement> {
    let mut differences = Vec::new();
    if gamma.reduced.cells() != hpt.reduced.cells() {
        differences.push("reduced cell sets differ".to_string());
    }
    diff_maps("d", gamma.reduced.differential(), hpt.reduced.differential(), &mut differences);
    diff_maps("f", &gamma.f, &hpt.f, &mut differences);
    diff_maps("g", &gamma.g, &hpt.g, &mut differences);
    diff_maps("h", &gamma.h, &hpt.h, &mut differences);
    (!differences.is_empty()).then_some(EngineDisagreement { differences })
}

/// Result of [`reduce`]; `series_terms` is set when the hpt engine ran.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub result: ReductionResult,
    pub series_terms: Option<usize>,
}

#[derive(Debug)]
pub enum ReduceError {
    Failed(Error),
    Disagreement(EngineDisagreement),
}

impl From<Error> for ReduceError {
    fn from(e: Error) -> Self {
        ReduceError::Failed(e)
    }
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::Failed(e) => write!(f, "{e}"),
            ReduceError::Disagreement(d) => write!(f, "{d}"),
        }
    }
}

impl std::error::Error for ReduceError {}

pub fn reduce(
    complex: &BasedComplex,
    m: &Matching,
    engine: Engine,
    max_iterations: Option<usize>,
) -> std::result::Result<Reduction, ReduceError> {
    match engine {
        Engine::Gamma => Ok(Reduction { result: reduce_direct(complex, m)?, series_terms: None }),
        Engine::Hpt => {
            let (result, terms) = reduce_hpt(complex, m, max_iterations)?;
            Ok(Reduction { result, series_terms: Some(terms) })
        }
        Engine::Both => {
            let direct = reduce_direct(complex, m)?;
            let (perturbed, terms) = reduce_hpt(complex, m, max_iterations)?;
            if let Some(d) = compare_reductions(&direct, &perturbed) {
                return Err(ReduceError::Disagreement(d));
            }
            Ok(Reduction { result: direct, series_terms: Some(terms) })
        }
    }
}
