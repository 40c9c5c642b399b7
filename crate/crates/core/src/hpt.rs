//! Contractions, perturbations and the basic perturbation lemma.
//!
//! Given a contraction `(f, g, h)` from `C` onto `D` and a perturbation `t`
//! of `C` for which `ht` is nilpotent, the series `S = Σ t(ht)ⁿ` is finite and
//!
//! ```text
//! f' = f + f S h,   g' = g + h S g,   h' = h + h S h,   t' = f S g
//! ```
//!
//! is a contraction from `(C, d + t)` onto `(D, d_D + t')`.

use crate::complex::{BasedComplex, BlockMap};
use crate::error::{Error, Result};
use crate::gamma::ReductionResult;
use crate::morse::{build_morse_graph, critical_cells, validate_matching, MatchedInverse, Matching};
use crate::verify::verify_contraction;

/// Contraction data from `big` (C) onto `small` (D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub big: BasedComplex,
    pub small: BasedComplex,
    /// C → D, shift 0.
    pub f: BlockMap,
    /// D → C, shift 0.
    pub g: BlockMap,
    /// C → C, shift +1.
    pub h: BlockMap,
}

impl Contraction {
    /// `D = C`, `f = g = 1`, `h = 0`.
    pub fn identity(c: &BasedComplex) -> Self {
        Contraction { big: c.clone(), small: c.clone(), f: c.identity(), g: c.identity(), h: BlockMap::zero(1) }
    }
}

/// A degree −1 map `t` on the big complex with `(d + t)² = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    t: BlockMap,
}

impl Perturbation {
    /// Checks shift, block shapes and `(d + t)² = 0` against `complex`.
    pub fn new(complex: &BasedComplex, t: BlockMap) -> Result<Self> {
        if t.shift() != -1 {
            return Err(Error::ShiftMismatch { expected: -1, found: t.shift() });
        }
        t.check_against(complex, complex)?;
        let violations = check_perturbation(complex, &t)?;
        if !violations.is_empty() {
            return Err(Error::DSquaredNonzero(violations));
        }
        Ok(Perturbation { t })
    }

    pub fn map(&self) -> &BlockMap {
        &self.t
    }
}

/// Maximum number of nonzero series terms `t(ht)ⁿ` the evaluator accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesBound {
    max_iterations: usize,
}

impl SeriesBound {
    pub fn new(max_iterations: usize) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::InvalidParameter("series bound must be at least 1".into()));
        }
        Ok(SeriesBound { max_iterations })
    }

    /// Longest path in the Morse graph plus one.
    pub fn from_matching(complex: &BasedComplex, m: &Matching) -> Result<Self> {
        let longest = build_morse_graph(complex, m)?.longest_path_length()?;
        Self::new(longest + 1)
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }
}

/// Output of [`perturb`].
#[derive(Debug, Clone)]
pub struct Perturbed {
    pub contraction: Contraction,
    /// `t' = f S g`, the perturbation induced on the small complex.
    pub small_perturbation: BlockMap,
    /// Number of nonzero terms `t(ht)ⁿ` summed into `S`.
    pub terms: usize,
}

/// `(d + t)²` as a list of nonzero entries; empty means `t` is a perturbation.
pub fn check_perturbation(complex: &BasedComplex, t: &BlockMap) -> Result<Vec<crate::complex::DSquaredViolation>> {
    let ring = complex.ring();
    let sum = complex.differential().add(t, ring)?;
    let perturbed = BasedComplex::from_parts(*ring, complex.cells().to_vec(), sum)?;
    Ok(perturbed.check_d_squared())
}

/// Splits `d` into the matched part `d̃` and the rest `t = d - d̃`.
pub fn split_differential(complex: &BasedComplex, m: &Matching) -> Result<(BlockMap, BlockMap)> {
    validate_matching(complex, m).map_err(Error::InvalidMatching)?;
    let d = complex.differential();
    let matched = d.filter(|s, t| m.contains(s, t));
    let rest = d.filter(|s, t| !m.contains(s, t));
    Ok((matched, rest))
}

/// The contraction of `(C, d̃)` onto the critical cells with zero differential:
/// `f̃` projects onto critical summands, `g̃` includes them, and `h̃` sends
/// `C_β` to `C_α` by `-d_{β,α}^{-1}` for each matched `α → β`.
pub fn trivial_morse_contraction(complex: &BasedComplex, m: &Matching, inv: &MatchedInverse) -> Result<Contraction> {
    let ring = complex.ring();
    let (matched, _) = split_differential(complex, m)?;
    let big = BasedComplex::from_differential(*ring, complex.cells().to_vec(), matched)?;

    let critical = critical_cells(complex, m);
    let small_cells: Vec<_> = critical.iter().map(|id| complex.cell(id).expect("known").clone()).collect();
    let small = BasedComplex::from_differential(*ring, small_cells.clone(), BlockMap::zero(-1))?;

    let f = BlockMap::identity(ring, &small_cells);
    let g = f.clone();
    let mut h = BlockMap::zero(1);
    for (alpha, beta, inverse) in inv.iter() {
        h.insert(beta.clone(), alpha.clone(), inverse.neg(ring));
    }

    let c = Contraction { big, small, f, g, h };
    let report = verify_contraction(&c);
    if !report.passed() {
        return Err(Error::IdentityViolation(Box::new(report)));
    }
    Ok(c)
}

/// Applies the perturbation lemma. Series terms are whole block maps; the
/// evaluation stops at the first zero term, since every later term factors
/// through it.
pub fn perturb(c: &Contraction, t: &Perturbation, bound: SeriesBound) -> Result<Perturbed> {
    let ring = c.big.ring();
    let t = t.map();
    let ht = BlockMap::compose(&c.h, t, ring)?;

    let mut series = BlockMap::zero(-1);
    let mut term = t.clone();
    let mut terms = 0;
    while !term.is_zero() {
        if terms == bound.max_iterations() {
            return Err(Error::NotNilpotent(bound.max_iterations()));
        }
        series = series.add(&term, ring)?;
        term = BlockMap::compose(&term, &ht, ring)?;
        terms += 1;
    }

    let compose = |a: &BlockMap, b: &BlockMap| BlockMap::compose(a, b, ring);
    let f = c.f.add(&compose(&compose(&c.f, &series)?, &c.h)?, ring)?;
    let g = c.g.add(&compose(&compose(&c.h, &series)?, &c.g)?, ring)?;
    let h = c.h.add(&compose(&compose(&c.h, &series)?, &c.h)?, ring)?;
    let small_perturbation = compose(&compose(&c.f, &series)?, &c.g)?;

    let big = BasedComplex::from_differential(*ring, c.big.cells().to_vec(), c.big.differential().add(t, ring)?)?;
    let small = BasedComplex::from_differential(
        *ring,
        c.small.cells().to_vec(),
        c.small.differential().add(&small_perturbation, ring)?,
    )?;
    let contraction = Contraction { big, small, f, g, h };
    let report = verify_contraction(&contraction);
    if !report.passed() {
        return Err(Error::IdentityViolation(Box::new(report)));
    }
    Ok(Perturbed { contraction, small_perturbation, terms })
}

/// Reduction through the perturbation lemma: the trivial Morse contraction
/// perturbed by `t = d - d̃`.
pub fn reduce_hpt(
    complex: &BasedComplex,
    m: &Matching,
    max_iterations: Option<usize>,
) -> Result<(ReductionResult, usize)> {
    let inv = validate_matching(complex, m).map_err(Error::InvalidMatching)?;
    let trivial = trivial_morse_contraction(complex, m, &inv)?;
    let (_, rest) = split_differential(complex, m)?;
    let t = Perturbation::new(&trivial.big, rest)?;
    let bound = match max_iterations {
        Some(k) => SeriesBound::new(k)?,
        None => SeriesBound::from_matching(complex, m)?,
    };
    let out = perturb(&trivial, &t, bound)?;
    // (C, d̃ + t) is C again
    debug_assert_eq!(&out.contraction.big, complex);
    let Contraction { small, f, g, h, .. } = out.contraction;
    Ok((ReductionResult::new(complex, small, f, g, h, m.clone()), out.terms))
}
