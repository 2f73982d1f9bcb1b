//! Compounding a pseudo-Boolean table with grid functions.
//!
//! For `f` on `{0,1}^d` and `g_1, ..., g_d : A → [0, 1]` the compound is
//! `h(x) = Σ_α f(α) Π_{i∈α} g_i(x) Π_{j∉α} (1 - g_j(x))`, which is the
//! multilinear extension `f̃` evaluated at `(g_1(x), ..., g_d(x))`. Fully
//! k-increasing inputs give a fully k-increasing `h`; the same holds for
//! fully k-alternating inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{
    check_fully_k, forward_difference, measure_to_df, negate_reflect, point_mass_df,
    DiscreteMeasure, Grid, GridFunction, MultiIndex, StepVector,
};
use crate::mode::{Mode, Verdict};
use crate::multilinear::{bernoulli_eval, MLPoly};
use crate::partition::{partition_upper, PartitionResult, VectorFamily};
use crate::scalar::{rat, ratio, Rational, Scalar};
use crate::subset::{gen_fully_k, is_fully_k, PBFunction, SubsetMask};

/// A table `f` on `{0,1}^d` and `d` functions into `[0, 1]` on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundInput<T> {
    f: PBFunction<T>,
    gs: Vec<GridFunction<T>>,
}

impl<T: Scalar> CompoundInput<T> {
    pub fn new(f: PBFunction<T>, gs: Vec<GridFunction<T>>) -> Result<Self> {
        if gs.len() != f.d() || gs.is_empty() {
            return Err(Error::FunctionCount {
                expected: f.d(),
                found: gs.len(),
            });
        }
        if let Some(function) = gs.iter().position(|g| g.grid() != gs[0].grid()) {
            return Err(Error::GridMismatch { function });
        }
        for (function, g) in gs.iter().enumerate() {
            if let Some((index, v)) = g
                .values()
                .iter()
                .enumerate()
                .find(|(_, v)| **v < T::zero() || **v > T::one())
            {
                return Err(Error::ValueOutsideUnitInterval {
                    function,
                    index,
                    value: v.to_string(),
                });
            }
        }
        Ok(CompoundInput { f, gs })
    }

    pub fn f(&self) -> &PBFunction<T> {
        &self.f
    }

    pub fn gs(&self) -> &[GridFunction<T>] {
        &self.gs
    }

    pub fn grid(&self) -> &Grid {
        self.gs[0].grid()
    }
}

/// The compound `h`, evaluated from its defining sum at every grid point.
pub fn compound<T: Scalar>(input: &CompoundInput<T>) -> GridFunction<T> {
    let grid = input.grid().clone();
    let values: Vec<T> = (0..grid.size())
        .into_par_iter()
        .map(|flat| {
            let x: Vec<T> = input.gs.iter().map(|g| g.values()[flat].clone()).collect();
            bernoulli_eval(&input.f, &x).expect("one value per table variable")
        })
        .collect();
    GridFunction::new(grid, values).expect("one value per grid point")
}

/// Where a certificate indicator switches on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    /// The constant function 1.
    Always,
    /// `x ↦ 1[x >= a]` componentwise.
    AtLeast(Vec<Rational>),
}

impl Threshold {
    pub fn indicator(&self, x: &[Rational]) -> bool {
        match self {
            Threshold::Always => true,
            Threshold::AtLeast(a) => x.iter().zip(a).all(|(xi, ai)| xi >= ai),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermGroup {
    /// A single coefficient `(Δ_α f)(∅)` with `|α| < k`.
    Low,
    /// The summed coefficients over the `j`-th partition interval.
    Interval(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateTerm {
    pub weight: Rational,
    pub threshold: Threshold,
    pub group: TermGroup,
    /// `α` for a low term, `σ_j` for an interval term.
    pub support: SubsetMask,
}

/// `h = Σ weight · 1[x >= threshold]` for the compound of point-mass d.f.s.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate {
    grid: Grid,
    terms: Vec<CertificateTerm>,
    partition: PartitionResult,
}

impl DecompositionCertificate {
    /// Reassembles a certificate, e.g. after reading it back from JSON.
    pub fn from_parts(grid: Grid, terms: Vec<CertificateTerm>, partition: PartitionResult) -> Self {
        DecompositionCertificate {
            grid,
            terms,
            partition,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn terms(&self) -> &[CertificateTerm] {
        &self.terms
    }

    pub fn partition(&self) -> &PartitionResult {
        &self.partition
    }

    pub fn weight_sum(&self) -> Rational {
        self.terms.iter().map(|t| &t.weight).sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.weight >= rat(0))
    }

    /// The step function `Σ weight · 1[x >= threshold]` on the grid.
    pub fn reconstruct(&self) -> GridFunction<Rational> {
        GridFunction::from_fn(self.grid.clone(), |x| {
            self.terms
                .iter()
                .filter(|t| t.threshold.indicator(x))
                .map(|t| &t.weight)
                .sum()
        })
    }
}

/// Nonnegative indicator decomposition of `compound(f, point_mass_df(a_i))`.
///
/// Coefficients of order below `k` appear individually; the rest are summed
/// over the intervals of the partition built from the points `a_i`, each sum
/// being a difference `(Δ_σ f)(τ ∖ σ)`.
pub fn indicator_decomposition(
    f: &PBFunction<Rational>,
    k: usize,
    points: &[Vec<Rational>],
    grid: &Grid,
) -> Result<DecompositionCertificate> {
    let d = f.d();
    if k == 0 || k > d {
        return Err(Error::OrderOutOfRange { k, max: d });
    }
    if grid.dim() != k {
        return Err(Error::LengthMismatch {
            what: "grid dimension",
            expected: k,
            found: grid.dim(),
        });
    }
    if points.len() != d {
        return Err(Error::FunctionCount {
            expected: d,
            found: points.len(),
        });
    }
    if let Some(p) = points.iter().find(|p| grid.locate(p).is_none()) {
        return Err(Error::PointOffGrid {
            point: p.iter().map(ToString::to_string).collect(),
        });
    }
    if let Verdict::Violated(w) = is_fully_k(f, k, Mode::Increasing, &rat(0))? {
        return Err(Error::CertificateRefused(Box::new(w)));
    }
    let family = VectorFamily::new(points.to_vec())?;
    let coeffs = f.mobius_coefficients();
    let mut terms: Vec<CertificateTerm> = SubsetMask::all(d)
        .filter(|a| a.len() < k)
        .map(|alpha| CertificateTerm {
            weight: coeffs[alpha.index()].clone(),
            threshold: if alpha.is_empty() {
                Threshold::Always
            } else {
                Threshold::AtLeast(family.max_over(alpha).expect("nonempty"))
            },
            group: TermGroup::Low,
            support: alpha,
        })
        .collect();
    let partition = partition_upper(&family, k)?;
    for (j, iv) in partition.intervals().iter().enumerate() {
        let weight = f.delta_point(iv.sigma(), iv.tau().difference(iv.sigma()))?;
        terms.push(CertificateTerm {
            weight,
            threshold: Threshold::AtLeast(family.max_over(iv.sigma())?),
            group: TermGroup::Interval(j),
            support: iv.sigma(),
        });
    }
    Ok(DecompositionCertificate {
        grid: grid.clone(),
        terms,
        partition,
    })
}

const MASS_CHOICES: [i64; 6] = [0, 0, 0, 1, 2, 3];
const SLACK_CHOICES: [i64; 3] = [0, 1, 2];

/// Random measure on the grid with total mass at most 1.
///
/// Raw masses come from `{0, 0, 0, 1, 2, 3}` and are divided by their sum
/// plus a random slack, so zero masses and sub-probability measures are both
/// common.
pub fn gen_measure(grid: &Grid, rng: &mut impl Rng) -> DiscreteMeasure<Rational> {
    let raw: Vec<i64> = (0..grid.size())
        .map(|_| MASS_CHOICES[rng.gen_range(0..MASS_CHOICES.len())])
        .collect();
    let z = (raw.iter().sum::<i64>() + SLACK_CHOICES[rng.gen_range(0..SLACK_CHOICES.len())]).max(1);
    let (points, masses) = raw
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(flat, &m)| (grid.point(&grid.multi_index(flat)), ratio(m, z)))
        .unzip();
    DiscreteMeasure::new(points, masses).expect("distinct grid points, nonnegative masses")
}

/// D.f. of a [`gen_measure`] sample: fully increasing with values in `[0, 1]`.
pub fn gen_distribution_function(grid: &Grid, rng: &mut impl Rng) -> GridFunction<Rational> {
    measure_to_df(&gen_measure(grid, rng), grid).expect("support on the grid")
}

/// `x ↦ 1 - F(-x)` for a random d.f. `F` on `-grid`: fully alternating with
/// values in `[0, 1]`.
pub fn gen_alternating_grid_function(grid: &Grid, rng: &mut impl Rng) -> GridFunction<Rational> {
    let df = gen_distribution_function(&grid.negated(), rng);
    negate_reflect(&df, &rat(1))
}

pub const MAX_CLOSURE_D: usize = 4;
pub const MAX_CLOSURE_AXIS: usize = 3;
pub const MAX_CLOSURE_DIM: usize = 3;
pub const MAX_CLOSURE_TRIALS: usize = 10_000;

/// Randomized closure experiment: generate fully k-monotone `f` and `g_i`,
/// compound, and check the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    pub mode: Mode,
    pub d: usize,
    pub k: usize,
    /// Points per grid axis; the grid dimension is `axis_sizes.len()` and
    /// must equal `k`. Axis points are spread evenly over `[0, 1]`.
    pub axis_sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub mode: Mode,
    pub d: usize,
    pub k: usize,
    pub trials: usize,
    pub passed: usize,
    pub seed: u64,
}

impl ClosureConfig {
    fn validate(&self) -> Result<()> {
        if !matches!(self.mode, Mode::Increasing | Mode::Alternating) {
            return Err(Error::UnsupportedMode(self.mode));
        }
        let caps = [
            ("d", self.d, MAX_CLOSURE_D),
            ("grid dimension", self.axis_sizes.len(), MAX_CLOSURE_DIM),
            ("trials", self.trials, MAX_CLOSURE_TRIALS),
            (
                "axis size",
                self.axis_sizes.iter().copied().max().unwrap_or(0),
                MAX_CLOSURE_AXIS,
            ),
        ];
        if let Some(&(what, value, cap)) = caps.iter().find(|(_, v, c)| v > c) {
            return Err(Error::CapExceeded { what, value, cap });
        }
        if self.k == 0 || self.k > self.d {
            return Err(Error::OrderOutOfRange {
                k: self.k,
                max: self.d,
            });
        }
        if self.axis_sizes.len() != self.k {
            return Err(Error::LengthMismatch {
                what: "grid dimension",
                expected: self.k,
                found: self.axis_sizes.len(),
            });
        }
        if self.axis_sizes.contains(&0) {
            return Err(Error::InvalidAxis {
                axis: self.axis_sizes.iter().position(|&n| n == 0).unwrap_or(0),
                reason: "axis has no points",
            });
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::from_points(
            self.axis_sizes
                .iter()
                .map(|&n| {
                    let den = (n as i64 - 1).max(1);
                    (0..n as i64).map(|i| ratio(i, den)).collect()
                })
                .collect(),
        )
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

/// The inputs and compound of one closure trial, for reproduction.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureTrial {
    pub input: CompoundInput<Rational>,
    pub h: GridFunction<Rational>,
}

/// Builds trial `trial` of `config` deterministically from its derived seed.
pub fn closure_trial(config: &ClosureConfig, trial: usize) -> Result<ClosureTrial> {
    config.validate()?;
    let seed = config.trial_seed(trial);
    let grid = config.grid()?;
    let f = gen_fully_k(config.d, config.k, config.mode, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let gs = (0..config.d)
        .map(|_| match config.mode {
            Mode::Alternating => gen_alternating_grid_function(&grid, &mut rng),
            _ => gen_distribution_function(&grid, &mut rng),
        })
        .collect();
    let input = CompoundInput::new(f, gs)?;
    let h = compound(&input);
    Ok(ClosureTrial { input, h })
}

/// Runs every trial in exact arithmetic; the first failing trial (lowest
/// index) is returned as [`Error::ClosureViolation`].
pub fn closure_test(config: &ClosureConfig) -> Result<ClosureReport> {
    config.validate()?;
    let outcomes: Vec<Result<Option<String>>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let trial = closure_trial(config, t)?;
            let verdict = check_fully_k(&trial.h, config.k, config.mode, &rat(0))?;
            Ok(verdict.into_witness().map(|w| w.to_string()))
        })
        .collect();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        if let Some(witness) = outcome? {
            return Err(Error::ClosureViolation {
                trial,
                seed: config.trial_seed(trial),
                witness,
            });
        }
    }
    Ok(ClosureReport {
        mode: config.mode,
        d: config.d,
        k: config.k,
        trials: config.trials,
        passed: config.trials,
        seed: config.seed,
    })
}

/// Largest product grid dimension accepted by [`tensor_compose`].
pub const MAX_TENSOR_DIM: usize = 4;

/// `x ↦ p(g_1(x⁽¹⁾), ..., g_d(x⁽ᵈ⁾))` on the product of the `g_i` grids.
pub fn tensor_compose<T: Scalar>(p: &MLPoly<T>, gs: &[GridFunction<T>]) -> Result<GridFunction<T>> {
    if gs.len() != p.d() {
        return Err(Error::FunctionCount {
            expected: p.d(),
            found: gs.len(),
        });
    }
    let dim: usize = gs.iter().map(|g| g.grid().dim()).sum();
    if dim > MAX_TENSOR_DIM {
        return Err(Error::CapExceeded {
            what: "product grid dimension",
            value: dim,
            cap: MAX_TENSOR_DIM,
        });
    }
    let grids: Vec<&Grid> = gs.iter().map(GridFunction::grid).collect();
    let product = Grid::product(&grids)?;
    let values = (0..product.size())
        .map(|flat| {
            let idx = product.multi_index(flat);
            let mut offset = 0;
            let x: Vec<T> = gs
                .iter()
                .map(|g| {
                    let n = g.grid().dim();
                    let v = g.at_index(&idx[offset..offset + n]).clone();
                    offset += n;
                    v
                })
                .collect();
            p.eval(&x)
        })
        .collect::<Result<Vec<T>>>()?;
    GridFunction::new(product, values)
}

/// `x ↦ φ(g_1(x), ..., g_m(x))` for `φ` on an `m`-dimensional grid containing
/// every value vector.
pub fn compose_pointwise(
    phi: &GridFunction<Rational>,
    gs: &[GridFunction<Rational>],
) -> Result<GridFunction<Rational>> {
    if gs.len() != phi.grid().dim() || gs.is_empty() {
        return Err(Error::FunctionCount {
            expected: phi.grid().dim(),
            found: gs.len(),
        });
    }
    let grid = gs[0].grid().clone();
    if let Some(function) = gs.iter().position(|g| *g.grid() != grid) {
        return Err(Error::GridMismatch { function });
    }
    let values = (0..grid.size())
        .map(|flat| {
            let y: Vec<Rational> = gs.iter().map(|g| g.values()[flat].clone()).collect();
            phi.at(&y).cloned().ok_or_else(|| Error::PointOffGrid {
                point: y.iter().map(ToString::to_string).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(grid, values)
}

/// A fully 3-increasing `φ` composed pointwise with fully 2-increasing `g_i`
/// that is not fully 2-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct PointwiseCounterexample {
    pub phi: GridFunction<Rational>,
    pub g: GridFunction<Rational>,
    pub composite: GridFunction<Rational>,
    pub phi_fully_3_increasing: bool,
    pub g_fully_2_increasing: bool,
    /// Measure behind `g`, recovered from its values.
    pub g_measure: DiscreteMeasure<Rational>,
    pub composite_is_indicator: bool,
    /// `(Δ^{(1,1)}_{(1/2,1/2)} composite)(1/2, 1/2)`.
    pub difference: Rational,
}

impl PointwiseCounterexample {
    pub fn confirms(&self) -> bool {
        self.phi_fully_3_increasing
            && self.g_fully_2_increasing
            && self.composite_is_indicator
            && self.difference == rat(-1)
    }
}

/// `φ = 1[y >= (1/2, 1/2, 1/2)]` on `{0, 1/4, 1/2, 1}³` composed with
/// `g_i(s, t) = st` on `{0, 1/2, 1}²`, which gives `1[st >= 1/2]`.
pub fn pointwise_counterexample() -> Result<PointwiseCounterexample> {
    let half = ratio(1, 2);
    let quarter = ratio(1, 4);
    let phi_grid = Grid::cube(&[rat(0), quarter, half.clone(), rat(1)], 3)?;
    let phi: GridFunction<Rational> =
        point_mass_df(&[half.clone(), half.clone(), half.clone()], &phi_grid)?;
    let g_grid = Grid::cube(&[rat(0), half.clone(), rat(1)], 2)?;
    let g = GridFunction::from_fn(g_grid.clone(), |x| x[0].clone() * x[1].clone());
    let composite = compose_pointwise(&phi, &[g.clone(), g.clone(), g.clone()])?;
    let indicator = GridFunction::from_fn(g_grid, |x| {
        if x[0].clone() * x[1].clone() >= half {
            rat(1)
        } else {
            rat(0)
        }
    });
    let difference = forward_difference(
        &composite,
        &MultiIndex::new(vec![1, 1])?,
        &StepVector::new(vec![half.clone(), half.clone()])?,
        &[half.clone(), half],
    )?;
    Ok(PointwiseCounterexample {
        phi_fully_3_increasing: check_fully_k(&phi, 3, Mode::Increasing, &rat(0))?.holds(),
        g_fully_2_increasing: check_fully_k(&g, 2, Mode::Increasing, &rat(0))?.holds(),
        g_measure: crate::grid::df_to_measure(&g, &rat(0))?,
        composite_is_indicator: composite == indicator,
        difference,
        phi,
        g,
        composite,
    })
}
