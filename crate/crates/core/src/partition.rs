//! Disjoint covers of `{γ ⊆ [d] : |γ| >= k}` by set-intervals.
//!
//! Given vectors `x_1, ..., x_d ∈ Q^k`, write `α ∼ β` when the componentwise
//! maxima `max_{i∈α} x_i` and `max_{i∈β} x_i` agree. [`partition_upper`]
//! builds intervals `⟨σ, τ⟩` with `|σ| = k` and `σ ∼ τ` by recursing on a
//! pivot that maximizes the last coordinate in play.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::subset::{SubsetMask, MAX_GROUND};

/// Ground set cap for [`verify_partition`], which enumerates every subset.
pub const MAX_VERIFY_GROUND: usize = 20;

/// Pairwise overlap checks by the intersection law stop above this many
/// intervals; the per-subset coverage count still detects every overlap.
const MAX_PAIRWISE_INTERVALS: usize = 5_000;

/// `⟨σ, τ⟩ = {γ : σ ⊆ γ ⊆ τ}` with `σ ⊆ τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SetInterval {
    sigma: SubsetMask,
    tau: SubsetMask,
}

impl SetInterval {
    pub fn new(sigma: SubsetMask, tau: SubsetMask) -> Result<Self> {
        if sigma.ground_size() != tau.ground_size() || !sigma.is_subset_of(tau) {
            return Err(Error::Schema {
                field: "interval".into(),
                reason: format!("sigma {sigma} is not a subset of tau {tau}"),
            });
        }
        Ok(SetInterval { sigma, tau })
    }

    pub fn sigma(&self) -> SubsetMask {
        self.sigma
    }

    pub fn tau(&self) -> SubsetMask {
        self.tau
    }

    pub fn contains(&self, gamma: SubsetMask) -> bool {
        self.sigma.is_subset_of(gamma) && gamma.is_subset_of(self.tau)
    }

    /// Number of members, `2^{|τ∖σ|}`.
    pub fn size(&self) -> u64 {
        1u64 << self.tau.difference(self.sigma).len()
    }

    pub fn members(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.tau
            .difference(self.sigma)
            .submasks()
            .map(|m| m.union(self.sigma))
    }

    /// `⟨σ₁, τ₁⟩ ∩ ⟨σ₂, τ₂⟩ = ⟨σ₁ ∪ σ₂, τ₁ ∩ τ₂⟩`, `None` when empty.
    pub fn intersection(&self, other: &SetInterval) -> Option<SetInterval> {
        let sigma = self.sigma.union(other.sigma);
        let tau = self.tau.intersection(other.tau);
        sigma
            .is_subset_of(tau)
            .then_some(SetInterval { sigma, tau })
    }
}

impl fmt::Display for SetInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}⟩", self.sigma, self.tau)
    }
}

/// Vectors `x_1, ..., x_d`, all of one length `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFamily {
    k: usize,
    vectors: Vec<Vec<Rational>>,
}

impl VectorFamily {
    pub fn new(vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if vectors.is_empty() || vectors.len() > MAX_GROUND {
            return Err(Error::DimensionOutOfRange {
                d: vectors.len(),
                max: MAX_GROUND,
            });
        }
        let k = vectors[0].len();
        if k == 0 {
            return Err(Error::VectorLengthMismatch {
                index: 0,
                expected: 1,
                found: 0,
            });
        }
        if let Some(index) = vectors.iter().position(|v| v.len() != k) {
            return Err(Error::VectorLengthMismatch {
                index,
                expected: k,
                found: vectors[index].len(),
            });
        }
        Ok(VectorFamily { k, vectors })
    }

    pub fn d(&self) -> usize {
        self.vectors.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Componentwise maximum over the (1-based) members of `alpha`.
    pub fn max_over(&self, alpha: SubsetMask) -> Result<Vec<Rational>> {
        self.max_prefix(alpha.bits(), self.k)
    }

    fn max_prefix(&self, bits: u32, coords: usize) -> Result<Vec<Rational>> {
        let mut members = (0..self.d()).filter(|i| bits >> i & 1 == 1);
        let first = members.next().ok_or(Error::EmptyIndexSet)?;
        let mut max = self.vectors[first][..coords].to_vec();
        for i in members {
            for (m, x) in max.iter_mut().zip(&self.vectors[i][..coords]) {
                if x > m {
                    *m = x.clone();
                }
            }
        }
        Ok(max)
    }

    fn check_mask(&self, alpha: SubsetMask) -> Result<()> {
        if alpha.ground_size() != self.d() {
            return Err(Error::LengthMismatch {
                what: "subset ground set",
                expected: self.d(),
                found: alpha.ground_size(),
            });
        }
        Ok(())
    }
}

/// `α ∼ β`: the componentwise maxima over `α` and `β` agree.
pub fn equivalent(alpha: SubsetMask, beta: SubsetMask, family: &VectorFamily) -> Result<bool> {
    family.check_mask(alpha)?;
    family.check_mask(beta)?;
    Ok(family.max_over(alpha)? == family.max_over(beta)?)
}

/// An ordered list of set-intervals over a common ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    d: usize,
    intervals: Vec<SetInterval>,
}

impl PartitionResult {
    pub fn new(d: usize, intervals: Vec<SetInterval>) -> Result<Self> {
        if let Some(bad) = intervals.iter().find(|iv| iv.sigma.ground_size() != d) {
            return Err(Error::LengthMismatch {
                what: "interval ground set",
                expected: d,
                found: bad.sigma.ground_size(),
            });
        }
        Ok(PartitionResult { d, intervals })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn intervals(&self) -> &[SetInterval] {
        &self.intervals
    }

    /// `Σ_j 2^{|τ_j ∖ σ_j|}`.
    pub fn total_size(&self) -> u64 {
        self.intervals.iter().map(SetInterval::size).sum()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PartitionOptions {
    /// Emit the explicit `d = k + 1` layout `⟨α, [d]⟩, ⟨[d]∖{a}⟩ (a ∈ α)`
    /// instead of recursing further.
    pub explicit_k_plus_one: bool,
}

/// Partitions `{γ : |γ| >= k}` for a family of `k`-vectors.
pub fn partition_upper(family: &VectorFamily, k: usize) -> Result<PartitionResult> {
    partition_upper_with(family, k, PartitionOptions::default())
}

pub fn partition_upper_with(
    family: &VectorFamily,
    k: usize,
    options: PartitionOptions,
) -> Result<PartitionResult> {
    let d = family.d();
    if k == 0 || k > d {
        return Err(Error::OrderOutOfRange { k, max: d });
    }
    if family.k() != k {
        return Err(Error::VectorLengthMismatch {
            index: 0,
            expected: k,
            found: family.k(),
        });
    }
    let indices: Vec<usize> = (0..d).collect();
    let raw = build(family, &indices, k, options);
    let intervals = raw
        .into_iter()
        .map(|(s, t)| SetInterval {
            sigma: SubsetMask::new(s, d).expect("bits within ground set"),
            tau: SubsetMask::new(t, d).expect("bits within ground set"),
        })
        .collect();
    Ok(PartitionResult { d, intervals })
}

fn bits_of(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |acc, &i| acc | 1 << i)
}

/// Partition of `{γ ⊆ indices : |γ| >= level}`, equivalence measured on the
/// first `level` coordinates.
fn build(
    family: &VectorFamily,
    indices: &[usize],
    level: usize,
    options: PartitionOptions,
) -> Vec<(u32, u32)> {
    let n = indices.len();
    let coord = level - 1;
    if level == n {
        let all = bits_of(indices);
        return vec![(all, all)];
    }
    if level == 1 {
        let mut order = indices.to_vec();
        order.sort_by(|&a, &b| family.vectors[a][0].cmp(&family.vectors[b][0]));
        return (1..=n)
            .rev()
            .map(|j| (1 << order[j - 1], bits_of(&order[..j])))
            .collect();
    }
    if options.explicit_k_plus_one && n == level + 1 {
        return k_plus_one(family, indices, level);
    }
    let pivot = indices
        .iter()
        .copied()
        .reduce(|best, i| {
            if family.vectors[i][coord] > family.vectors[best][coord] {
                i
            } else {
                best
            }
        })
        .expect("nonempty index set");
    let rest: Vec<usize> = indices.iter().copied().filter(|&i| i != pivot).collect();
    let (free, lower) = rayon::join(
        || build(family, &rest, level, options),
        || build(family, &rest, level - 1, options),
    );
    let bit = 1u32 << pivot;
    let lifted = lower.into_iter().map(|(s, t)| (s | bit, t | bit));
    let out: Vec<(u32, u32)> = free.into_iter().chain(lifted).collect();
    debug_assert!(out
        .iter()
        .all(|&(s, t)| { family.max_prefix(s, level).ok() == family.max_prefix(t, level).ok() }));
    out
}

/// `d = level + 1`: a `level`-set `α ∼ indices`, then the remaining
/// `level`-subsets, each missing one member of `α`.
fn k_plus_one(family: &VectorFamily, indices: &[usize], level: usize) -> Vec<(u32, u32)> {
    let mut alpha: Vec<usize> = Vec::with_capacity(level);
    for c in 0..level {
        let arg = indices
            .iter()
            .copied()
            .reduce(|best, i| {
                if family.vectors[i][c] > family.vectors[best][c] {
                    i
                } else {
                    best
                }
            })
            .expect("nonempty index set");
        if !alpha.contains(&arg) {
            alpha.push(arg);
        }
    }
    for &i in indices {
        if alpha.len() == level {
            break;
        }
        if !alpha.contains(&i) {
            alpha.push(i);
        }
    }
    let all = bits_of(indices);
    let alpha_bits = bits_of(&alpha);
    let mut out = vec![(alpha_bits, all)];
    let mut sorted = alpha;
    sorted.sort_unstable();
    out.extend(sorted.into_iter().map(|a| {
        let s = all & !(1 << a);
        (s, s)
    }));
    out
}

/// One failed check reported by [`verify_partition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionIssue {
    Uncovered(SubsetMask),
    CoveredMoreThanOnce {
        gamma: SubsetMask,
        count: usize,
    },
    CoveredBelowOrder(SubsetMask),
    SigmaSize {
        interval: usize,
        size: usize,
    },
    NotEquivalent {
        interval: usize,
    },
    /// The intersection law and direct enumeration disagree for a pair.
    LawMismatch {
        first: usize,
        second: usize,
    },
    Cardinality {
        found: u64,
        expected: u64,
    },
}

impl fmt::Display for PartitionIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uncovered(g) => write!(f, "{g} is not covered"),
            Self::CoveredMoreThanOnce { gamma, count } => {
                write!(f, "{gamma} is covered {count} times")
            }
            Self::CoveredBelowOrder(g) => write!(f, "{g} is covered but too small"),
            Self::SigmaSize { interval, size } => {
                write!(f, "interval {interval} has |sigma| = {size}")
            }
            Self::NotEquivalent { interval } => {
                write!(
                    f,
                    "interval {interval}: sigma and tau have different maxima"
                )
            }
            Self::LawMismatch { first, second } => write!(
                f,
                "intervals {first} and {second}: intersection law disagrees with enumeration"
            ),
            Self::Cardinality { found, expected } => {
                write!(f, "total interval size {found}, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionDiagnostics {
    pub issues: Vec<PartitionIssue>,
    /// `Σ_j 2^{|τ_j ∖ σ_j|}`.
    pub total_size: u64,
    /// `Σ_{m >= k} C(d, m)`.
    pub expected_size: u64,
    /// Whether the pairwise intersection-law cross-check ran.
    pub pairwise_checked: bool,
}

impl PartitionDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

fn upper_count(d: usize, k: usize) -> u64 {
    let mut c = 1u64;
    let mut total = 0u64;
    for m in 0..=d {
        if m >= k {
            total += c;
        }
        c = c * (d - m) as u64 / (m as u64 + 1);
    }
    total
}

/// Brute-force check of every partition property over all `2^d` subsets.
pub fn verify_partition(
    result: &PartitionResult,
    family: &VectorFamily,
    k: usize,
) -> Result<PartitionDiagnostics> {
    let d = result.d;
    if d > MAX_VERIFY_GROUND {
        return Err(Error::CapExceeded {
            what: "ground set size",
            value: d,
            cap: MAX_VERIFY_GROUND,
        });
    }
    if family.d() != d {
        return Err(Error::LengthMismatch {
            what: "vector family",
            expected: d,
            found: family.d(),
        });
    }
    let intervals = &result.intervals;
    let mut issues = Vec::new();

    for (j, iv) in intervals.iter().enumerate() {
        if iv.sigma.len() != k {
            issues.push(PartitionIssue::SigmaSize {
                interval: j,
                size: iv.sigma.len(),
            });
        }
        let same = !iv.sigma.is_empty() && equivalent(iv.sigma, iv.tau, family)?;
        if !same {
            issues.push(PartitionIssue::NotEquivalent { interval: j });
        }
    }

    let mut count = vec![0usize; 1 << d];
    let mut first = vec![usize::MAX; 1 << d];
    let mut enumerated: HashSet<(usize, usize)> = HashSet::new();
    for (j, iv) in intervals.iter().enumerate() {
        for g in iv.members() {
            let g = g.index();
            count[g] += 1;
            if first[g] == usize::MAX {
                first[g] = j;
            } else {
                enumerated.insert((first[g], j));
            }
        }
    }
    for gamma in SubsetMask::all(d) {
        let c = count[gamma.index()];
        match (gamma.len() >= k, c) {
            (true, 0) => issues.push(PartitionIssue::Uncovered(gamma)),
            (true, 1) => {}
            (true, c) => issues.push(PartitionIssue::CoveredMoreThanOnce { gamma, count: c }),
            (false, 0) => {}
            (false, _) => issues.push(PartitionIssue::CoveredBelowOrder(gamma)),
        }
    }

    let pairwise_checked = intervals.len() <= MAX_PAIRWISE_INTERVALS;
    if pairwise_checked {
        for (a, x) in intervals.iter().enumerate() {
            for (b, y) in intervals.iter().enumerate().skip(a + 1) {
                let law = x.intersection(y);
                let witnessed = law.is_some_and(|iv| count[iv.sigma.index()] >= 2);
                if law.is_some() != witnessed || (law.is_none() && enumerated.contains(&(a, b))) {
                    issues.push(PartitionIssue::LawMismatch {
                        first: a,
                        second: b,
                    });
                }
            }
        }
    }

    let total_size = result.total_size();
    let expected_size = upper_count(d, k);
    if total_size != expected_size {
        issues.push(PartitionIssue::Cardinality {
            found: total_size,
            expected: expected_size,
        });
    }
    Ok(PartitionDiagnostics {
        issues,
        total_size,
        expected_size,
        pairwise_checked,
    })
}
