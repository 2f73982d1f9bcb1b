//! Pseudo-Boolean functions on the subset lattice of `[d] = {1, ..., d}`.
//!
//! Subsets are bitmasks: element `i` is bit `i - 1`. A [`PBFunction`] is the
//! full table of its `2^d` values indexed by mask. The difference operator
//! `Δ_α` acts by `(Δ_α f)(γ) = Σ_{β ⊆ α} (-1)^{|α|-|β|} f(γ ∪ β)` for
//! `γ ⊆ α^c`, and the shift `E_α` by `(E_α f)(γ) = f(γ ∪ α)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mode::{Mode, Verdict};
use crate::scalar::{rat, Rational, Scalar};

/// Largest supported ground set (the table has `2^d` entries).
pub const MAX_GROUND: usize = 24;

/// Largest ground set accepted by [`gen_fully_k`].
pub const MAX_GEN_GROUND: usize = 6;

/// Attempts made by the rejection path of [`gen_fully_k`] before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

/// A subset of `[d]` stored as a bitmask together with its ground set size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    d: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, d: usize) -> Result<Self> {
        check_ground(d)?;
        if u64::from(bits) >> d != 0 {
            return Err(Error::MaskOutOfRange {
                bits: bits.into(),
                d,
            });
        }
        Ok(SubsetMask { bits, d: d as u8 })
    }

    pub fn empty(d: usize) -> Self {
        assert!(d <= MAX_GROUND, "ground set size {d} exceeds {MAX_GROUND}");
        SubsetMask {
            bits: 0,
            d: d as u8,
        }
    }

    pub fn full(d: usize) -> Self {
        assert!(d <= MAX_GROUND, "ground set size {d} exceeds {MAX_GROUND}");
        SubsetMask {
            bits: low_bits(d),
            d: d as u8,
        }
    }

    /// Builds a mask from 1-based element labels. Duplicates are ignored.
    pub fn from_elements(elements: &[usize], d: usize) -> Result<Self> {
        check_ground(d)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > d {
                return Err(Error::ElementOutOfRange { element: e, d });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask { bits, d: d as u8 })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn ground_size(self) -> usize {
        self.d as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.ground_size() && self.bits & (1 << (element - 1)) != 0
    }

    /// Sorted 1-based element labels.
    pub fn elements(self) -> Vec<usize> {
        (1..=self.ground_size())
            .filter(|&e| self.contains(e))
            .collect()
    }

    pub fn complement(self) -> Self {
        self.with_bits(!self.bits & low_bits(self.ground_size()))
    }

    pub fn union(self, other: Self) -> Self {
        self.with_bits(self.bits | other.bits)
    }

    pub fn intersection(self, other: Self) -> Self {
        self.with_bits(self.bits & other.bits)
    }

    pub fn difference(self, other: Self) -> Self {
        self.with_bits(self.bits & !other.bits)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn submasks(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.bits;
        let d = self.d;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(cur.wrapping_sub(full) & full)
            };
            Some(SubsetMask { bits: cur, d })
        })
    }

    /// All subsets of `[d]`, in increasing mask order.
    pub fn all(d: usize) -> impl Iterator<Item = SubsetMask> {
        SubsetMask::full(d).submasks()
    }

    fn with_bits(self, bits: u32) -> Self {
        SubsetMask { bits, d: self.d }
    }

    fn positions(self) -> Vec<u32> {
        (0..self.d as u32)
            .filter(|b| self.bits >> b & 1 == 1)
            .collect()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

fn check_ground(d: usize) -> Result<()> {
    if d > MAX_GROUND {
        return Err(Error::DimensionOutOfRange { d, max: MAX_GROUND });
    }
    Ok(())
}

fn low_bits(d: usize) -> u32 {
    if d >= 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}

/// Scatters the low bits of `compact` onto the given bit positions.
pub(crate) fn deposit(compact: usize, positions: &[u32]) -> u32 {
    positions
        .iter()
        .enumerate()
        .filter(|(j, _)| compact >> j & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// In-place subset-sum (zeta) transform: `v[m] <- Σ_{s ⊆ m} v[s]`.
pub fn zeta_transform<T: Scalar>(values: &mut [T]) {
    per_bit(values, |lo, hi| *hi = hi.clone() + lo.clone());
}

/// In-place Möbius transform, the inverse of [`zeta_transform`]:
/// `v[m] <- Σ_{s ⊆ m} (-1)^{|m|-|s|} v[s]`.
pub fn mobius_transform<T: Scalar>(values: &mut [T]) {
    per_bit(values, |lo, hi| *hi = hi.clone() - lo.clone());
}

fn per_bit<T>(values: &mut [T], op: impl Fn(&T, &mut T)) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    let mut step = 1;
    while step < n {
        for block in values.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            lo.iter().zip(hi.iter_mut()).for_each(|(l, h)| op(l, h));
        }
        step *= 2;
    }
}

/// A real-valued table over all subsets of `[d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PBFunction<T> {
    d: usize,
    values: Vec<T>,
}

impl<T: Scalar> PBFunction<T> {
    pub fn new(d: usize, values: Vec<T>) -> Result<Self> {
        check_ground(d)?;
        if values.len() != 1 << d {
            return Err(Error::LengthMismatch {
                what: "table values",
                expected: 1 << d,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(PBFunction { d, values })
    }

    pub fn from_fn(d: usize, f: impl Fn(SubsetMask) -> T) -> Result<Self> {
        check_ground(d)?;
        Self::new(d, SubsetMask::all(d).map(f).collect())
    }

    pub fn constant(d: usize, value: T) -> Result<Self> {
        Self::from_fn(d, |_| value.clone())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn value(&self, mask: SubsetMask) -> &T {
        assert_eq!(mask.ground_size(), self.d, "mask ground set mismatch");
        &self.values[mask.index()]
    }

    pub fn full_set(&self) -> SubsetMask {
        SubsetMask::full(self.d)
    }

    pub fn mask(&self, bits: u32) -> Result<SubsetMask> {
        SubsetMask::new(bits, self.d)
    }

    pub fn from_elements(&self, elements: &[usize]) -> Result<SubsetMask> {
        SubsetMask::from_elements(elements, self.d)
    }

    /// `(Δ_α f)(γ)` by the explicit alternating sum over `β ⊆ α`.
    pub fn delta_point(&self, alpha: SubsetMask, gamma: SubsetMask) -> Result<T> {
        assert_eq!(alpha.ground_size(), self.d, "mask ground set mismatch");
        assert_eq!(gamma.ground_size(), self.d, "mask ground set mismatch");
        if !alpha.is_disjoint(gamma) {
            return Err(Error::Overlap { alpha, gamma });
        }
        let top = alpha.len();
        Ok(alpha.submasks().fold(T::zero(), |acc, beta| {
            let term = self.value(gamma.union(beta)).clone();
            acc + term.signed_by_parity(top - beta.len())
        }))
    }

    /// `E_α f` on the domain `{γ : γ ⊆ α^c}`.
    pub fn shift(&self, alpha: SubsetMask) -> SubTable<T> {
        self.restrict_to_complement(alpha, alpha.bits(), &self.values)
    }

    /// `Δ_α f` on the domain `{γ : γ ⊆ α^c}`, by per-element differencing.
    pub fn delta_table(&self, alpha: SubsetMask) -> SubTable<T> {
        assert_eq!(alpha.ground_size(), self.d, "mask ground set mismatch");
        let mut work = self.values.clone();
        for p in alpha.positions() {
            let bit = 1usize << p;
            for m in 0..work.len() {
                if m & bit == 0 {
                    work[m] = work[m | bit].clone() - work[m].clone();
                }
            }
        }
        self.restrict_to_complement(alpha, 0, &work)
    }

    /// `α ↦ c - f(α^c)`; an involution for fixed `c`.
    pub fn complement_dual(&self, c: &T) -> Self {
        let full = self.values.len() - 1;
        let values = (0..self.values.len())
            .map(|m| c.clone() - self.values[full ^ m].clone())
            .collect();
        PBFunction { d: self.d, values }
    }

    /// `α ↦ f(α^c)`.
    pub fn reflect(&self) -> Self {
        let full = self.values.len() - 1;
        let values = (0..self.values.len())
            .map(|m| self.values[full ^ m].clone())
            .collect();
        PBFunction { d: self.d, values }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PBFunction<U> {
        PBFunction {
            d: self.d,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Möbius coefficients `(Δ_α f)(∅)` for every `α`.
    pub fn mobius_coefficients(&self) -> Vec<T> {
        let mut c = self.values.clone();
        mobius_transform(&mut c);
        c
    }

    fn restrict_to_complement(&self, alpha: SubsetMask, base: u32, source: &[T]) -> SubTable<T> {
        assert_eq!(alpha.ground_size(), self.d, "mask ground set mismatch");
        let free = alpha.complement();
        let positions = free.positions();
        let values = (0..1usize << positions.len())
            .map(|j| source[(base | deposit(j, &positions)) as usize].clone())
            .collect();
        SubTable {
            table: PBFunction {
                d: positions.len(),
                values,
            },
            elements: free.elements(),
        }
    }
}

/// A table on `{γ : γ ⊆ S}` for some `S ⊆ [d]`, stored as a [`PBFunction`]
/// over the compacted ground set `[|S|]`.
///
/// Compacted element `j` (1-based) stands for the original element
/// `elements[j - 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubTable<T> {
    table: PBFunction<T>,
    elements: Vec<usize>,
}

impl<T: Scalar> SubTable<T> {
    pub fn table(&self) -> &PBFunction<T> {
        &self.table
    }

    pub fn into_table(self) -> PBFunction<T> {
        self.table
    }

    /// Original 1-based labels of the compacted elements.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Value at an original-ground-set mask, `None` outside the domain.
    pub fn at(&self, gamma: SubsetMask) -> Option<&T> {
        let mut compact = 0usize;
        let mut remaining = gamma.bits();
        for (j, &e) in self.elements.iter().enumerate() {
            let bit = 1u32 << (e - 1);
            if remaining & bit != 0 {
                compact |= 1 << j;
                remaining &= !bit;
            }
        }
        if remaining != 0 {
            return None;
        }
        self.table.values.get(compact)
    }
}

/// A failing pair `(β, γ)` of a fully-k check; `value` is `(Δ_β f)(γ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetWitness<T> {
    pub beta: SubsetMask,
    pub gamma: SubsetMask,
    pub value: T,
}

impl<T: fmt::Display> fmt::Display for SubsetWitness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(Δ_β f)(γ) = {} at β = {}, γ = {}",
            self.value, self.beta, self.gamma
        )
    }
}

/// Checks the sign of `(Δ_β f)(γ)` for every `β ≠ ∅` with `|β| <= k` and every
/// `γ ⊆ β^c`, orientated by `mode`, up to tolerance `eps`.
///
/// A violation reports the smallest failing `(β, γ)` in mask order.
pub fn is_fully_k<T: Scalar>(
    f: &PBFunction<T>,
    k: usize,
    mode: Mode,
    eps: &T,
) -> Result<Verdict<SubsetWitness<T>>> {
    let d = f.d();
    if k == 0 || k > d {
        return Err(Error::OrderOutOfRange { k, max: d });
    }
    let coeffs = f.mobius_coefficients();
    let betas: Vec<SubsetMask> = SubsetMask::all(d)
        .filter(|b| !b.is_empty() && b.len() <= k)
        .collect();
    let witness = betas.par_iter().find_map_first(|&beta| {
        // (Δ_β f)(γ) = Σ_{β ⊆ α ⊆ β ∪ γ} c_α, a subset sum over β^c.
        let positions = beta.complement().positions();
        let mut table: Vec<T> = (0..1usize << positions.len())
            .map(|j| coeffs[(beta.bits() | deposit(j, &positions)) as usize].clone())
            .collect();
        zeta_transform(&mut table);
        table.into_iter().enumerate().find_map(|(j, value)| {
            let oriented = mode.oriented(value.clone(), beta.len());
            (!oriented.at_least_minus(eps)).then(|| SubsetWitness {
                beta,
                gamma: beta.with_bits(deposit(j, &positions)),
                value,
            })
        })
    });
    Ok(witness.map_or(Verdict::Holds, Verdict::Violated))
}

/// Largest `k` for which `f` is fully k-monotone in `mode` (exactly), `0` if
/// even first differences fail.
pub fn max_full_order<T: Scalar>(f: &PBFunction<T>, mode: Mode) -> usize {
    let zero = T::zero();
    (1..=f.d())
        .find(|&k| !is_fully_k(f, k, mode, &zero).expect("k in range").holds())
        .map_or(f.d(), |k| k - 1)
}

/// `A ⊆ B ⇒ f(A) <= f(B)`, checked directly on covering pairs.
pub fn is_increasing<T: Scalar>(f: &PBFunction<T>) -> bool {
    SubsetMask::all(f.d()).all(|a| {
        a.complement()
            .elements()
            .into_iter()
            .all(|v| f.value(a) <= f.value(a.union(single(v, f.d()))))
    })
}

/// Diminishing returns: `f(A ∪ {v}) - f(A) >= f(B ∪ {v}) - f(B)` for all
/// `A ⊆ B` and `v ∉ B`, enumerated literally.
pub fn is_submodular<T: Scalar>(f: &PBFunction<T>) -> bool {
    let d = f.d();
    SubsetMask::all(d).all(|b| {
        b.submasks().all(|a| {
            b.complement().elements().into_iter().all(|v| {
                let v = single(v, d);
                let gain_a = f.value(a.union(v)).clone() - f.value(a).clone();
                let gain_b = f.value(b.union(v)).clone() - f.value(b).clone();
                gain_a >= gain_b
            })
        })
    })
}

fn single(element: usize, d: usize) -> SubsetMask {
    SubsetMask::from_elements(&[element], d).expect("element in range")
}

/// How [`gen_fully_k_with`] builds its base fully k-increasing table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenPath {
    /// Nonnegative integer combination of the indicators `γ ↦ 1[α ⊆ γ]`.
    Combination,
    /// Small-integer Möbius coefficients with sparse negative entries above
    /// order `k`, kept only if the checker accepts the table.
    Rejection,
    /// Picks one of the two paths above with equal probability.
    Mixed,
}

/// Deterministic generator of fully k-monotone tables (see [`GenPath::Mixed`]).
pub fn gen_fully_k(d: usize, k: usize, mode: Mode, seed: u64) -> Result<PBFunction<Rational>> {
    gen_fully_k_with(d, k, mode, seed, GenPath::Mixed)
}

pub fn gen_fully_k_with(
    d: usize,
    k: usize,
    mode: Mode,
    seed: u64,
    path: GenPath,
) -> Result<PBFunction<Rational>> {
    if d == 0 || d > MAX_GEN_GROUND {
        return Err(Error::DimensionOutOfRange {
            d,
            max: MAX_GEN_GROUND,
        });
    }
    if k == 0 || k > d {
        return Err(Error::OrderOutOfRange { k, max: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let path = match path {
        GenPath::Mixed if rng.gen_bool(0.5) => GenPath::Combination,
        GenPath::Mixed => GenPath::Rejection,
        p => p,
    };
    let base = match path {
        GenPath::Combination => combination_table(d, &mut rng),
        _ => rejection_table(d, k, &mut rng)?,
    };
    Ok(orient_from_increasing(base, mode))
}

/// Turns a fully k-increasing table into a fully k-monotone one in `mode`.
pub fn orient_from_increasing<T: Scalar>(f: PBFunction<T>, mode: Mode) -> PBFunction<T> {
    match mode {
        Mode::Increasing => f,
        Mode::Decreasing => f.reflect(),
        Mode::Alternating => {
            let top = f.value(f.full_set()).clone();
            f.complement_dual(&top)
        }
    }
}

fn combination_table(d: usize, rng: &mut ChaCha8Rng) -> PBFunction<Rational> {
    const WEIGHTS: [i64; 6] = [0, 0, 0, 1, 2, 3];
    let mut values: Vec<Rational> = (0..1usize << d)
        .map(|_| rat(WEIGHTS[rng.gen_range(0..WEIGHTS.len())]))
        .collect();
    zeta_transform(&mut values);
    PBFunction { d, values }
}

fn rejection_table(d: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<PBFunction<Rational>> {
    const LOW: [i64; 4] = [0, 0, 1, 2];
    const AT_K: [i64; 4] = [0, 1, 2, 3];
    const HIGH: [i64; 4] = [-2, -1, -1, 1];
    let high_count = SubsetMask::all(d).filter(|a| a.len() > k).count().max(1);
    let p_high = (2.0 / high_count as f64).min(1.0);
    let zero = Rational::from_integer(0.into());
    for _ in 0..REJECTION_BUDGET {
        let mut coeffs: Vec<Rational> = SubsetMask::all(d)
            .map(|a| {
                let v = match a.len() {
                    n if n < k => LOW[rng.gen_range(0..LOW.len())],
                    n if n == k => AT_K[rng.gen_range(0..AT_K.len())],
                    _ if rng.gen_bool(p_high) => HIGH[rng.gen_range(0..HIGH.len())],
                    _ => 0,
                };
                rat(v)
            })
            .collect();
        zeta_transform(&mut coeffs);
        let f = PBFunction { d, values: coeffs };
        if is_fully_k(&f, k, Mode::Increasing, &zero)?.holds() {
            return Ok(f);
        }
    }
    Err(Error::RejectionBudgetExhausted {
        d,
        k,
        attempts: REJECTION_BUDGET,
    })
}
