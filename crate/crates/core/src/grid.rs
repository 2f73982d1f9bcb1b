//! Functions on finite product grids `A = A_1 × ... × A_k ⊂ Q^k`.
//!
//! Differences follow `(Δ^n_h F)(s) = Σ_{0 <= q <= n} (-1)^{|n|-|q|} C(n, q) F(s + q ⊙ h)`
//! with `C(n, q) = Π_i C(n_i, q_i)`, and `∇^n_h = (-1)^{|n|} Δ^n_h`. Every
//! evaluation point must lie on the grid; nothing is interpolated.
//!
//! Values are stored row-major with the last axis varying fastest.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mode::{Mode, Verdict};
use crate::scalar::{rat, Rational, Scalar};

pub const MAX_GRID_DIM: usize = 8;
pub const MAX_MULTI_INDEX: usize = 6;

/// A nonempty strictly increasing list of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Axis {
    points: Vec<Rational>,
}

impl Axis {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        Self::validated(points, 0)
    }

    fn validated(points: Vec<Rational>, axis: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidAxis {
                axis,
                reason: "axis has no points",
            });
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAxis {
                axis,
                reason: "axis points are not strictly increasing",
            });
        }
        Ok(Axis { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, x: &Rational) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    fn negated(&self) -> Axis {
        Axis {
            points: self.points.iter().rev().map(|x| -x.clone()).collect(),
        }
    }
}

/// Product of `1..=MAX_GRID_DIM` axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    axes: Vec<Axis>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > MAX_GRID_DIM {
            return Err(Error::GridDimension {
                dim: axes.len(),
                max: MAX_GRID_DIM,
            });
        }
        let mut strides = vec![1; axes.len()];
        for i in (0..axes.len() - 1).rev() {
            strides[i] = strides[i + 1] * axes[i + 1].len();
        }
        Ok(Grid { axes, strides })
    }

    /// Builds a grid from raw coordinate lists, validating each axis.
    pub fn from_points(axes: Vec<Vec<Rational>>) -> Result<Self> {
        let axes = axes
            .into_iter()
            .enumerate()
            .map(|(i, pts)| Axis::validated(pts, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(axes)
    }

    /// Same axis repeated `dim` times.
    pub fn cube(points: &[Rational], dim: usize) -> Result<Self> {
        Self::from_points(vec![points.to_vec(); dim])
    }

    /// Concatenates the axes of several grids.
    pub fn product(grids: &[&Grid]) -> Result<Self> {
        Self::new(grids.iter().flat_map(|g| g.axes.iter().cloned()).collect())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    pub fn size(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let i = flat / s;
                flat %= s;
                i
            })
            .collect()
    }

    pub fn point(&self, idx: &[usize]) -> Vec<Rational> {
        idx.iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.points[i].clone())
            .collect()
    }

    pub fn locate(&self, point: &[Rational]) -> Option<Vec<usize>> {
        if point.len() != self.dim() {
            return None;
        }
        point
            .iter()
            .zip(&self.axes)
            .map(|(x, a)| a.position(x))
            .collect()
    }

    /// All points in storage order.
    pub fn points(&self) -> impl Iterator<Item = Vec<Rational>> + '_ {
        (0..self.size()).map(|f| self.point(&self.multi_index(f)))
    }

    pub fn min_point(&self) -> Vec<Rational> {
        self.axes.iter().map(|a| a.points[0].clone()).collect()
    }

    pub fn max_point(&self) -> Vec<Rational> {
        self.axes
            .iter()
            .map(|a| a.points[a.len() - 1].clone())
            .collect()
    }

    /// The grid `-A`: each axis negated and reversed.
    pub fn negated(&self) -> Grid {
        Grid {
            axes: self.axes.iter().map(Axis::negated).collect(),
            strides: self.strides.clone(),
        }
    }

    fn reflected_flat(&self, flat: usize) -> usize {
        let idx: Vec<usize> = self
            .multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(i, a)| a.len() - 1 - i)
            .collect();
        self.flat_index(&idx)
    }
}

/// Values of a function at every point of a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    grid: Grid,
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(grid: Grid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::LengthMismatch {
                what: "grid function values",
                expected: grid.size(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[Rational]) -> T) -> Self {
        let values = grid.points().map(|p| f(&p)).collect();
        GridFunction { grid, values }
    }

    pub fn constant(grid: Grid, value: T) -> Self {
        let values = vec![value; grid.size()];
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn at_index(&self, idx: &[usize]) -> &T {
        &self.values[self.grid.flat_index(idx)]
    }

    pub fn at(&self, point: &[Rational]) -> Option<&T> {
        self.grid.locate(point).map(|idx| self.at_index(&idx))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> GridFunction<U> {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Largest value; the supremum on a finite grid.
    pub fn max_value(&self) -> T {
        self.values.iter().skip(1).fold(
            self.values[0].clone(),
            |m, v| if *v > m { v.clone() } else { m },
        )
    }

    /// Restriction to a product sub-grid given by per-axis coordinate subsets.
    pub fn restrict(&self, subgrid: &[Vec<Rational>]) -> Result<GridFunction<T>> {
        if subgrid.len() != self.grid.dim() {
            return Err(Error::LengthMismatch {
                what: "sub-grid axes",
                expected: self.grid.dim(),
                found: subgrid.len(),
            });
        }
        let sub = Grid::from_points(subgrid.to_vec())?;
        let positions = subgrid
            .iter()
            .zip(self.grid.axes())
            .map(|(pts, axis)| {
                pts.iter()
                    .map(|x| {
                        axis.position(x).ok_or_else(|| Error::PointOffGrid {
                            point: vec![x.to_string()],
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let values = (0..sub.size())
            .map(|f| {
                let idx: Vec<usize> = sub
                    .multi_index(f)
                    .iter()
                    .zip(&positions)
                    .map(|(&i, pos)| pos[i])
                    .collect();
                self.at_index(&idx).clone()
            })
            .collect();
        Ok(GridFunction { grid: sub, values })
    }
}

/// Difference orders `n ∈ N_0^k`, each component at most [`MAX_MULTI_INDEX`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(n: Vec<usize>) -> Result<Self> {
        if let Some((index, &value)) = n.iter().enumerate().find(|(_, &v)| v > MAX_MULTI_INDEX) {
            return Err(Error::MultiIndexTooLarge {
                index,
                value,
                max: MAX_MULTI_INDEX,
            });
        }
        Ok(MultiIndex(n))
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

/// Step sizes `h ∈ Q^k_+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepVector(Vec<Rational>);

impl StepVector {
    pub fn new(h: Vec<Rational>) -> Result<Self> {
        if let Some(index) = h.iter().position(|v| *v < rat(0)) {
            return Err(Error::NegativeStep { index });
        }
        Ok(StepVector(h))
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }
}

/// A finite measure given by distinct support points and nonnegative masses.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<T> {
    points: Vec<Vec<Rational>>,
    masses: Vec<T>,
}

impl<T: Scalar> DiscreteMeasure<T> {
    pub fn new(points: Vec<Vec<Rational>>, masses: Vec<T>) -> Result<Self> {
        if points.len() != masses.len() {
            return Err(Error::LengthMismatch {
                what: "measure masses",
                expected: points.len(),
                found: masses.len(),
            });
        }
        if let Some(index) = masses
            .iter()
            .position(|m| !m.is_finite_value() || *m < T::zero())
        {
            return Err(Error::Schema {
                field: format!("masses[{index}]"),
                reason: "mass must be finite and nonnegative".into(),
            });
        }
        if let Some(first) = points.first() {
            if let Some(index) = points.iter().position(|p| p.len() != first.len()) {
                return Err(Error::VectorLengthMismatch {
                    index,
                    expected: first.len(),
                    found: points[index].len(),
                });
            }
        }
        let mut sorted: Vec<&Vec<Rational>> = points.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Schema {
                field: "points".into(),
                reason: "support points must be distinct".into(),
            });
        }
        Ok(DiscreteMeasure { points, masses })
    }

    pub fn empty() -> Self {
        DiscreteMeasure {
            points: Vec::new(),
            masses: Vec::new(),
        }
    }

    pub fn point_mass(point: Vec<Rational>, mass: T) -> Result<Self> {
        Self::new(vec![point], vec![mass])
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.masses.iter().fold(T::zero(), |a, m| a + m.clone())
    }

    /// Drops zero masses and sorts the support lexicographically.
    pub fn canonical(&self) -> Self {
        let mut pairs: Vec<(Vec<Rational>, T)> = self
            .points
            .iter()
            .cloned()
            .zip(self.masses.iter().cloned())
            .filter(|(_, m)| !m.is_zero())
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (points, masses) = pairs.into_iter().unzip();
        DiscreteMeasure { points, masses }
    }

    /// Every mass divided by `z > 0`.
    pub fn scaled_down(&self, z: &T) -> Result<Self> {
        if z.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::ZeroNormalization);
        }
        Ok(DiscreteMeasure {
            points: self.points.clone(),
            masses: self.masses.iter().map(|m| m.clone() / z.clone()).collect(),
        })
    }
}

/// A violated difference condition on a grid; `value` is the raw forward
/// difference `(Δ^p_h F)(s)`. A zero `p` records a negative value `F(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWitness<T> {
    pub p: Vec<usize>,
    pub s: Vec<Rational>,
    pub h: Vec<Rational>,
    pub value: T,
}

impl<T> GridWitness<T> {
    pub fn map_value<U>(self, f: impl FnOnce(T) -> U) -> GridWitness<U> {
        GridWitness {
            p: self.p,
            s: self.s,
            h: self.h,
            value: f(self.value),
        }
    }
}

impl<T: fmt::Display> fmt::Display for GridWitness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "Δ^{:?}_({}) F({}) = {}",
            self.p,
            join(&self.h),
            join(&self.s),
            self.value
        )
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn check_dims<T: Scalar>(f: &GridFunction<T>, what: &'static str, len: usize) -> Result<()> {
    if len != f.grid.dim() {
        return Err(Error::LengthMismatch {
            what,
            expected: f.grid.dim(),
            found: len,
        });
    }
    Ok(())
}

/// `(Δ^n_h F)(s)` with every `s + q ⊙ h` required to be a grid point.
pub fn forward_difference<T: Scalar>(
    f: &GridFunction<T>,
    n: &MultiIndex,
    h: &StepVector,
    s: &[Rational],
) -> Result<T> {
    check_dims(f, "multi-index", n.0.len())?;
    check_dims(f, "step vector", h.0.len())?;
    check_dims(f, "base point", s.len())?;
    let total = n.total();
    let mut acc = T::zero();
    for q in box_iter(&n.0) {
        let point: Vec<Rational> = s
            .iter()
            .zip(&h.0)
            .zip(&q)
            .map(|((si, hi), &qi)| si.clone() + hi.clone() * rat(qi as i64))
            .collect();
        let value = f.at(&point).ok_or_else(|| Error::OffGrid {
            q: q.clone(),
            point: point.iter().map(ToString::to_string).collect(),
        })?;
        let coef: i64 =
            n.0.iter()
                .zip(&q)
                .map(|(&ni, &qi)| binomial(ni, qi))
                .product();
        let term = value.clone() * T::from_int(coef);
        acc = acc + term.signed_by_parity(total - q.iter().sum::<usize>());
    }
    Ok(acc)
}

/// `(∇^n_h F)(s) = (-1)^{|n|} (Δ^n_h F)(s)`.
pub fn backward_difference<T: Scalar>(
    f: &GridFunction<T>,
    n: &MultiIndex,
    h: &StepVector,
    s: &[Rational],
) -> Result<T> {
    Ok(forward_difference(f, n, h, s)?.signed_by_parity(n.total()))
}

/// All `q` with `0 <= q <= n`, lexicographic.
fn box_iter(n: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut next = Some(vec![0; n.len()]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        for i in (0..n.len()).rev() {
            if succ[i] < n[i] {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    })
}

/// One admissible step along an axis: the step and the axis indices of
/// `s_i + q h_i` for `q = 0..=p_i`.
struct AxisStep {
    h: Rational,
    idx: Vec<usize>,
}

fn axis_steps(axis: &Axis, start: usize, order: usize, adjacent_only: bool) -> Vec<AxisStep> {
    if order == 0 {
        return vec![AxisStep {
            h: rat(0),
            idx: vec![start],
        }];
    }
    let base = &axis.points[start];
    let last = if adjacent_only {
        (start + 2).min(axis.len())
    } else {
        axis.len()
    };
    (start + 1..last)
        .filter_map(|j| {
            let h = axis.points[j].clone() - base.clone();
            let idx = (0..=order)
                .map(|q| axis.position(&(base.clone() + h.clone() * rat(q as i64))))
                .collect::<Option<Vec<usize>>>()?;
            Some(AxisStep { h, idx })
        })
        .collect()
}

/// Worst (most negative oriented) violation over every admissible `h` for
/// fixed `p` and base index `s`, first in enumeration order among ties.
fn worst_at<T: Scalar>(
    f: &GridFunction<T>,
    p: &[usize],
    s: &[usize],
    mode: Mode,
    eps: &T,
    adjacent_only: bool,
) -> Option<(T, GridWitness<T>)> {
    let grid = &f.grid;
    let options: Vec<Vec<AxisStep>> = grid
        .axes
        .iter()
        .zip(s)
        .zip(p)
        .map(|((axis, &si), &pi)| axis_steps(axis, si, pi, adjacent_only))
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    let order: usize = p.iter().sum();
    let boxes: Vec<Vec<usize>> = box_iter(p).collect();
    let mut choice = vec![0usize; options.len()];
    let mut worst: Option<(T, GridWitness<T>)> = None;
    loop {
        let mut value = T::zero();
        for q in &boxes {
            let idx: Vec<usize> = q
                .iter()
                .zip(&choice)
                .zip(&options)
                .map(|((&qi, &ci), opts)| opts[ci].idx[qi])
                .collect();
            let coef: i64 = p.iter().zip(q).map(|(&pi, &qi)| binomial(pi, qi)).product();
            let term = f.at_index(&idx).clone() * T::from_int(coef);
            value = value + term.signed_by_parity(order - q.iter().sum::<usize>());
        }
        let oriented = mode.oriented(value.clone(), order);
        if !oriented.at_least_minus(eps) && worst.as_ref().is_none_or(|(w, _)| oriented < *w) {
            let h = choice
                .iter()
                .zip(&options)
                .map(|(&ci, opts)| opts[ci].h.clone())
                .collect();
            worst = Some((
                oriented,
                GridWitness {
                    p: p.to_vec(),
                    s: grid.point(s),
                    h,
                    value,
                },
            ));
        }
        // odometer, first axis slowest
        let mut i = options.len();
        loop {
            if i == 0 {
                return worst;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn worst_over<T: Scalar>(
    f: &GridFunction<T>,
    ps: &[Vec<usize>],
    mode: Mode,
    eps: &T,
    adjacent_only: bool,
) -> Option<GridWitness<T>> {
    let size = f.grid.size();
    let jobs: Vec<(usize, usize)> = (0..ps.len())
        .flat_map(|pi| (0..size).map(move |s| (pi, s)))
        .collect();
    let found: Vec<Option<(T, GridWitness<T>)>> = jobs
        .par_iter()
        .map(|&(pi, s)| worst_at(f, &ps[pi], &f.grid.multi_index(s), mode, eps, adjacent_only))
        .collect();
    found
        .into_iter()
        .flatten()
        .fold(None::<(T, GridWitness<T>)>, |best, cand| match best {
            Some(b) if b.0 <= cand.0 => Some(b),
            _ => Some(cand),
        })
        .map(|(_, w)| w)
}

/// Checks every `0 ≠ p <= n` over every on-grid `(s, h)`.
///
/// A violation reports the most negative oriented difference; ties go to the
/// first `(p, s, h)` in lexicographic enumeration order.
pub fn check_n_monotone<T: Scalar>(
    f: &GridFunction<T>,
    n: &MultiIndex,
    mode: Mode,
    eps: &T,
) -> Result<Verdict<GridWitness<T>>> {
    check_dims(f, "multi-index", n.0.len())?;
    if n.is_zero() {
        return Err(Error::ZeroMultiIndex);
    }
    let ps: Vec<Vec<usize>> = box_iter(&n.0).skip(1).collect();
    Ok(worst_over(f, &ps, mode, eps, false).map_or(Verdict::Holds, Verdict::Violated))
}

fn binary_orders(dim: usize, k: usize) -> Vec<Vec<usize>> {
    box_iter(&vec![1; dim])
        .filter(|p| {
            let m: usize = p.iter().sum();
            (1..=k).contains(&m)
        })
        .collect()
}

fn check_order(f: &GridFunction<impl Scalar>, k: usize) -> Result<()> {
    let dim = f.grid.dim();
    if k == 0 || k > dim {
        return Err(Error::OrderOutOfRange { k, max: dim });
    }
    Ok(())
}

/// Fully k-monotone check.
///
/// The verdict is decided on adjacent steps only (consecutive axis points);
/// mixed first differences over any longer step telescope into sums of
/// adjacent ones. On failure the reported witness is the worst violation over
/// all admissible steps, as in [`check_fully_k_exhaustive`].
pub fn check_fully_k<T: Scalar>(
    f: &GridFunction<T>,
    k: usize,
    mode: Mode,
    eps: &T,
) -> Result<Verdict<GridWitness<T>>> {
    check_order(f, k)?;
    let ps = binary_orders(f.grid.dim(), k);
    let size = f.grid.size();
    let violated = (0..ps.len())
        .flat_map(|pi| (0..size).map(move |s| (pi, s)))
        .collect::<Vec<_>>()
        .par_iter()
        .any(|&(pi, s)| worst_at(f, &ps[pi], &f.grid.multi_index(s), mode, eps, true).is_some());
    if !violated {
        return Ok(Verdict::Holds);
    }
    let witness = worst_over(f, &ps, mode, eps, false)
        .or_else(|| worst_over(f, &ps, mode, eps, true))
        .expect("an adjacent violation exists");
    Ok(Verdict::Violated(witness))
}

/// Fully k-monotone check over every admissible step `h`.
pub fn check_fully_k_exhaustive<T: Scalar>(
    f: &GridFunction<T>,
    k: usize,
    mode: Mode,
    eps: &T,
) -> Result<Verdict<GridWitness<T>>> {
    check_order(f, k)?;
    let ps = binary_orders(f.grid.dim(), k);
    Ok(worst_over(f, &ps, mode, eps, false).map_or(Verdict::Holds, Verdict::Violated))
}

/// `x ↦ F(-x)` on `-A`.
pub fn reflect<T: Scalar>(f: &GridFunction<T>) -> GridFunction<T> {
    let values = (0..f.values.len())
        .map(|flat| f.values[f.grid.reflected_flat(flat)].clone())
        .collect();
    GridFunction {
        grid: f.grid.negated(),
        values,
    }
}

/// `x ↦ c - F(-x)` on `-A`.
pub fn negate_reflect<T: Scalar>(f: &GridFunction<T>, c: &T) -> GridFunction<T> {
    reflect(f).map(|v| c.clone() - v.clone())
}

/// Distribution function of the unit point mass at `a`: `x ↦ 1[x >= a]`.
pub fn point_mass_df<T: Scalar>(a: &[Rational], grid: &Grid) -> Result<GridFunction<T>> {
    if grid.locate(a).is_none() {
        return Err(Error::PointOffGrid {
            point: a.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(GridFunction::from_fn(grid.clone(), |x| {
        if x.iter().zip(a).all(|(xi, ai)| xi >= ai) {
            T::one()
        } else {
            T::zero()
        }
    }))
}

/// Inverts [`measure_to_df`].
///
/// `F` must be nonnegative and fully dim-increasing. Each mass is the
/// inclusion-exclusion sum of `F` over the cell below the point, with `F := 0`
/// past the lower grid boundary. Masses in `[-eps, 0)` are clamped to zero.
pub fn df_to_measure<T: Scalar>(f: &GridFunction<T>, eps: &T) -> Result<DiscreteMeasure<T>> {
    let grid = &f.grid;
    if let Some((flat, v)) = f
        .values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.at_least_minus(eps))
    {
        let witness = GridWitness {
            p: vec![0; grid.dim()],
            s: grid.point(&grid.multi_index(flat)),
            h: vec![rat(0); grid.dim()],
            value: v.to_string(),
        };
        return Err(Error::NotDistributionFunction(Box::new(witness)));
    }
    if let Verdict::Violated(w) = check_fully_k(f, grid.dim(), Mode::Increasing, eps)? {
        return Err(Error::NotDistributionFunction(Box::new(
            w.map_value(|v| v.to_string()),
        )));
    }
    let mut mass = f.values.clone();
    for axis in 0..grid.dim() {
        let stride = grid.strides[axis];
        for flat in (0..mass.len()).rev() {
            if grid.multi_index(flat)[axis] > 0 {
                mass[flat] = mass[flat].clone() - mass[flat - stride].clone();
            }
        }
    }
    let mut points = Vec::new();
    let mut masses = Vec::new();
    for (flat, m) in mass.into_iter().enumerate() {
        let m = if m < T::zero() { T::zero() } else { m };
        if !m.is_zero() {
            points.push(grid.point(&grid.multi_index(flat)));
            masses.push(m);
        }
    }
    DiscreteMeasure::new(points, masses)
}

/// `F(x) = μ({a : a <= x})` on `grid`.
pub fn measure_to_df<T: Scalar>(mu: &DiscreteMeasure<T>, grid: &Grid) -> Result<GridFunction<T>> {
    let mut values = vec![T::zero(); grid.size()];
    for (p, m) in mu.points.iter().zip(&mu.masses) {
        let idx = grid.locate(p).ok_or_else(|| Error::PointOffGrid {
            point: p.iter().map(ToString::to_string).collect(),
        })?;
        let flat = grid.flat_index(&idx);
        values[flat] = values[flat].clone() + m.clone();
    }
    for axis in 0..grid.dim() {
        let stride = grid.strides[axis];
        for flat in 0..values.len() {
            if grid.multi_index(flat)[axis] > 0 {
                values[flat] = values[flat].clone() + values[flat - stride].clone();
            }
        }
    }
    Ok(GridFunction {
        grid: grid.clone(),
        values,
    })
}

/// Finite-support probability approximation of a `[0, 1]`-valued fully
/// increasing `F` from its restriction to the sub-grid `α`.
///
/// The measure of `F|α` is normalized by `F(max α)` and its distribution
/// function is returned on the full grid. On `α` the result is
/// `F(a) / F(max α)`.
pub fn subgrid_approx<T: Scalar>(
    f: &GridFunction<T>,
    subgrid: &[Vec<Rational>],
) -> Result<GridFunction<T>> {
    if let Some((index, v)) = f
        .values
        .iter()
        .enumerate()
        .find(|(_, v)| **v < T::zero() || **v > T::one())
    {
        return Err(Error::ValueOutsideUnitInterval {
            function: 0,
            index,
            value: v.to_string(),
        });
    }
    let restricted = f.restrict(subgrid)?;
    let top = restricted
        .at(&restricted.grid.max_point())
        .expect("max on grid")
        .clone();
    if top.is_zero() {
        return Err(Error::ZeroNormalization);
    }
    let nu = df_to_measure(&restricted, &T::zero())?;
    measure_to_df(&nu.scaled_down(&top)?, &f.grid)
}
