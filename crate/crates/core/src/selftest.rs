//! Seeded end-to-end self-test covering every worked example and property
//! suite of the crate.
//!
//! Each check returns a [`CheckResult`]; the report passes only if all do.
//! Runs are deterministic for a given seed apart from timings.

use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::compound::{
    closure_test, compound, gen_alternating_grid_function, gen_measure, indicator_decomposition,
    pointwise_counterexample, tensor_compose, ClosureConfig, CompoundInput,
};
use crate::error::Error;
use crate::grid::{
    check_fully_k, check_fully_k_exhaustive, df_to_measure, measure_to_df, point_mass_df,
    subgrid_approx, DiscreteMeasure, Grid, GridFunction,
};
use crate::json::{grid_witness_to_json, subset_witness_to_json};
use crate::mode::{Mode, Verdict};
use crate::multilinear::{bernoulli_eval, compose_univariate, MLPoly, UnivariateMap};
use crate::partition::{partition_upper, verify_partition, VectorFamily};
use crate::scalar::{rat, ratio, to_f64, Rational};
use crate::subset::{gen_fully_k, is_fully_k, PBFunction, SubsetMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Corrupts one entry of the first example table so the harness must fail.
    pub mutate: bool,
    /// Closure trials per (mode, k) pair.
    pub trials: usize,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            mutate: false,
            trials: DEFAULT_TRIALS,
        }
    }
}

pub const DEFAULT_TRIALS: usize = 500;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Value>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Failure {
    detail: String,
    witness: Option<Value>,
}

type Outcome = Result<String, Failure>;

fn fail(detail: impl Into<String>) -> Failure {
    Failure {
        detail: detail.into(),
        witness: None,
    }
}

fn fail_with(detail: impl Into<String>, witness: Value) -> Failure {
    Failure {
        detail: detail.into(),
        witness: Some(witness),
    }
}

fn lib(e: Error) -> Failure {
    fail(e.to_string())
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(fail(detail()))
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), Failure> {
    let elapsed = start.elapsed();
    ensure(elapsed <= limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

type Check = (
    &'static str,
    fn(&mut ChaCha8Rng, &SelftestOptions) -> Outcome,
);

const CHECKS: [Check; 10] = [
    ("capped cardinality table", check_capped_cardinality),
    (
        "alternating table and compounds",
        check_alternating_compound,
    ),
    ("square-root composition", check_sqrt),
    ("tensor counterexample", check_tensor),
    ("pointwise counterexample", check_pointwise),
    ("interval partition suite", check_partitions),
    ("closure under compounding", check_closure),
    ("indicator certificates", check_certificates),
    ("identity suites", check_identities),
    ("finite approximation bound", check_approximation),
];

/// Runs all checks in order.
pub fn run(options: SelftestOptions) -> SelftestReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let id = i + 1;
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add((id as u64) << 32));
            let start = Instant::now();
            let outcome = check(&mut rng, &options);
            let elapsed = start.elapsed();
            let (passed, detail, witness) = match outcome {
                Ok(detail) => (true, detail, None),
                Err(f) => (false, f.detail, f.witness),
            };
            CheckResult {
                id,
                name,
                passed,
                detail,
                witness,
                elapsed,
            }
        })
        .collect();
    SelftestReport {
        seed: options.seed,
        checks,
    }
}

/// `α ↦ max(|α|, 1)`.
pub fn capped_cardinality_table(d: usize) -> PBFunction<Rational> {
    PBFunction::from_fn(d, |a| rat(a.len().max(1) as i64)).expect("d within range")
}

/// Values `0, 2, 2, 4, 2, 4, 4, 5` in mask order.
pub fn two_alternating_table() -> PBFunction<Rational> {
    PBFunction::new(3, [0, 2, 2, 4, 2, 4, 4, 5].map(rat).to_vec()).expect("eight values")
}

/// Small rational `p/q` with `|p| <= 6`, `1 <= q <= 4`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn random_table(rng: &mut impl Rng, d: usize) -> PBFunction<Rational> {
    let values = (0..1usize << d).map(|_| random_rational(rng)).collect();
    PBFunction::new(d, values).expect("table of the right length")
}

/// Grid with each axis `{0, 1, ..., n - 1}`.
pub fn integer_grid(sizes: &[usize]) -> Grid {
    Grid::from_points(
        sizes
            .iter()
            .map(|&n| (0..n as i64).map(rat).collect())
            .collect(),
    )
    .expect("valid axes")
}

fn check_capped_cardinality(_: &mut ChaCha8Rng, options: &SelftestOptions) -> Outcome {
    let start = Instant::now();
    let mut f = capped_cardinality_table(3);
    if options.mutate {
        let mut values = f.values().to_vec();
        values[0b011] = rat(3);
        f = PBFunction::new(3, values).expect("same shape");
    }
    for d in 3..=6 {
        let f = if d == 3 {
            f.clone()
        } else {
            capped_cardinality_table(d)
        };
        if let Verdict::Violated(w) = is_fully_k(&f, 2, Mode::Increasing, &rat(0)).map_err(lib)? {
            return Err(fail_with(
                format!("d = {d}: not fully 2-increasing"),
                subset_witness_to_json(&w),
            ));
        }
        let w = is_fully_k(&f, 3, Mode::Increasing, &rat(0))
            .map_err(lib)?
            .into_witness()
            .ok_or_else(|| fail(format!("d = {d}: unexpectedly fully 3-increasing")))?;
        ensure(
            d != 3 || (w.value == rat(-1) && w.beta == SubsetMask::full(3)),
            || format!("d = 3 witness {w}"),
        )?;
    }
    let coeffs = MLPoly::extend(&f).coeffs().to_vec();
    let expected = [1, 0, 0, 1, 0, 1, 1, -1].map(rat).to_vec();
    if coeffs != expected {
        let shown: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
        return Err(fail(format!("coefficients {shown:?}")));
    }
    within(start, Duration::from_secs(1), "example 1")?;
    Ok("coefficients exact; order 2 holds and order 3 fails for d = 3..6".into())
}

fn check_alternating_compound(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    let start = Instant::now();
    let f = two_alternating_table();
    ensure(
        is_fully_k(&f, 2, Mode::Alternating, &rat(0))
            .map_err(lib)?
            .holds(),
        || "not fully 2-alternating".into(),
    )?;
    ensure(
        !is_fully_k(&f, 3, Mode::Alternating, &rat(0))
            .map_err(lib)?
            .holds(),
        || "unexpectedly fully 3-alternating".into(),
    )?;
    let expected = [0, 2, 2, 0, 2, 0, 0, -1].map(rat).to_vec();
    ensure(MLPoly::extend(&f).coeffs() == &expected[..], || {
        "extension differs from 2(x1+x2+x3) - x1x2x3".into()
    })?;
    let grid = Grid::cube(&[rat(0), ratio(1, 2), rat(1)], 2).map_err(lib)?;
    for trial in 0..100 {
        let gs = (0..3)
            .map(|_| gen_alternating_grid_function(&grid, rng))
            .collect();
        let h = compound(&CompoundInput::new(f.clone(), gs).map_err(lib)?);
        if let Verdict::Violated(w) =
            check_fully_k(&h, 2, Mode::Alternating, &rat(0)).map_err(lib)?
        {
            return Err(fail_with(
                format!("trial {trial}"),
                grid_witness_to_json(&w),
            ));
        }
    }
    within(start, Duration::from_secs(30), "example 3")?;
    Ok("table and extension exact; 100 alternating compounds pass".into())
}

fn check_sqrt(_: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    let p = compose_univariate(&two_alternating_table(), |v| {
        UnivariateMap::Sqrt.apply_float(v)
    })
    .map_err(lib)?;
    let s2 = 2f64.sqrt();
    let single = s2;
    let pair = -2.0 * (s2 - 1.0);
    let triple = 3.0 * s2 + 5f64.sqrt() - 6.0;
    let expected = [0.0, single, single, pair, single, pair, pair, triple];
    let worst = p
        .coeffs()
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("largest deviation {worst:e}"))?;
    Ok(format!("largest deviation {worst:e}"))
}

fn check_tensor(_: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    let or = PBFunction::new(2, [0, 1, 1, 1].map(rat).to_vec()).map_err(lib)?;
    let line = Grid::from_points(vec![vec![rat(0), ratio(1, 2), rat(1)]]).map_err(lib)?;
    let id = GridFunction::from_fn(line, |x| x[0].clone());
    let f = tensor_compose(&MLPoly::extend(&or), &[id.clone(), id]).map_err(lib)?;
    let expected = GridFunction::from_fn(f.grid().clone(), |x| {
        x[0].clone() + x[1].clone() - x[0].clone() * x[1].clone()
    });
    ensure(f == expected, || "tensor compound is not s + t - st".into())?;
    let w = check_fully_k(&f, 2, Mode::Increasing, &rat(0))
        .map_err(lib)?
        .into_witness()
        .ok_or_else(|| fail("s + t - st passed the order-2 check"))?;
    let zero = vec![rat(0), rat(0)];
    let one = vec![rat(1), rat(1)];
    if !(w.value == rat(-1) && w.s == zero && w.h == one && w.p == vec![1, 1]) {
        return Err(fail_with("unexpected witness", grid_witness_to_json(&w)));
    }
    let square = f.grid().clone();
    let g1 = GridFunction::from_fn(square.clone(), |x| x[0].clone());
    let g2 = GridFunction::from_fn(square, |x| x[1].clone());
    let h = compound(&CompoundInput::new(or, vec![g1, g2]).map_err(lib)?);
    ensure(h == f, || "pointwise compound differs".into())?;
    if let Verdict::Violated(w) = check_fully_k(&h, 1, Mode::Increasing, &rat(0)).map_err(lib)? {
        return Err(fail_with(
            "compound not increasing",
            grid_witness_to_json(&w),
        ));
    }
    Ok("witness -1 at s = (0,0), h = (1,1); order 1 holds".into())
}

fn check_pointwise(_: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    let r = pointwise_counterexample().map_err(lib)?;
    ensure(r.phi_fully_3_increasing, || "phi fails order 3".into())?;
    ensure(r.g_fully_2_increasing, || "g fails order 2".into())?;
    ensure(r.composite_is_indicator, || {
        "composite is not 1[st >= 1/2]".into()
    })?;
    ensure(r.difference == rat(-1), || {
        format!("difference {}", r.difference)
    })?;
    Ok("difference exactly -1".into())
}

fn random_family(rng: &mut impl Rng, d: usize, k: usize) -> VectorFamily {
    VectorFamily::new(
        (0..d)
            .map(|_| (0..k).map(|_| rat(rng.gen_range(0..=3))).collect())
            .collect(),
    )
    .expect("nonempty family of equal-length vectors")
}

fn check_partitions(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for d in 1..=8 {
        for k in 1..=d {
            for _ in 0..200 {
                let x = random_family(rng, d, k);
                let p = partition_upper(&x, k).map_err(lib)?;
                let diag = verify_partition(&p, &x, k).map_err(lib)?;
                if !diag.is_valid() {
                    let issues: Vec<String> = diag.issues.iter().map(ToString::to_string).collect();
                    return Err(fail_with(
                        format!("d = {d}, k = {k}"),
                        json!({ "family": crate::json::family_to_json(&x), "issues": issues }),
                    ));
                }
                count += 1;
            }
        }
    }
    within(start, Duration::from_secs(60), "partition suite")?;
    Ok(format!("{count} partitions verified"))
}

fn check_closure(rng: &mut ChaCha8Rng, options: &SelftestOptions) -> Outcome {
    let start = Instant::now();
    let base = rng.gen::<u32>() as u64;
    for mode in [Mode::Increasing, Mode::Alternating] {
        for k in 1..=3 {
            let config = ClosureConfig {
                mode,
                d: 3,
                k,
                axis_sizes: vec![3; k],
                trials: options.trials,
                seed: base + 1_000 * k as u64,
            };
            match closure_test(&config) {
                Ok(_) => {}
                Err(Error::ClosureViolation {
                    trial,
                    seed,
                    witness,
                }) => {
                    return Err(fail_with(
                        format!("{mode}, k = {k}, trial {trial}"),
                        json!({ "seed": seed, "witness": witness }),
                    ))
                }
                Err(e) => return Err(lib(e)),
            }
        }
    }
    within(start, Duration::from_secs(300), "closure suite")?;
    Ok(format!("{} trials pass", 6 * options.trials))
}

fn check_certificates(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    for instance in 0..200 {
        let d = rng.gen_range(2..=4);
        let k = rng.gen_range(1..=d.min(3));
        let f = gen_fully_k(d, k, Mode::Increasing, rng.gen()).map_err(lib)?;
        let grid = integer_grid(&vec![3; k]);
        let points: Vec<Vec<Rational>> = (0..d)
            .map(|_| (0..k).map(|_| rat(rng.gen_range(0..3))).collect())
            .collect();
        let cert = indicator_decomposition(&f, k, &points, &grid).map_err(lib)?;
        let gs = points
            .iter()
            .map(|a| point_mass_df(a, &grid))
            .collect::<Result<Vec<_>, _>>()
            .map_err(lib)?;
        let h = compound(&CompoundInput::new(f.clone(), gs).map_err(lib)?);
        let ok = cert.reconstruct() == h
            && cert.all_nonnegative()
            && cert.weight_sum() == *f.value(f.full_set());
        if !ok {
            return Err(fail_with(
                format!("instance {instance}, d = {d}, k = {k}"),
                crate::json::certificate_to_json(&cert),
            ));
        }
    }
    Ok("200 certificates reproduce their compounds".into())
}

fn random_point(rng: &mut impl Rng, d: usize) -> Vec<Rational> {
    (0..d).map(|_| random_rational(rng)).collect()
}

fn random_grid_function(rng: &mut impl Rng) -> GridFunction<Rational> {
    let dim = rng.gen_range(1..=3);
    let sizes: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..=4)).collect();
    let grid = integer_grid(&sizes);
    if rng.gen_bool(0.5) {
        measure_to_df(&gen_measure(&grid, rng), &grid).expect("support on grid")
    } else {
        let values = (0..grid.size())
            .map(|_| rat(rng.gen_range(-2..=3)))
            .collect();
        GridFunction::new(grid, values).expect("one value per point")
    }
}

fn check_identities(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    for i in 0..1000 {
        let d = rng.gen_range(1..=5);
        let f = random_table(rng, d);
        let gamma = SubsetMask::new(rng.gen_range(0..1u32 << d), d).map_err(lib)?;
        let beta = SubsetMask::new(rng.gen::<u32>() & gamma.bits(), d).map_err(lib)?;
        let lhs: Rational = gamma
            .difference(beta)
            .submasks()
            .map(|m| {
                f.delta_point(m.union(beta), SubsetMask::empty(d))
                    .expect("disjoint")
            })
            .sum();
        let rhs = f.delta_point(beta, gamma.difference(beta)).map_err(lib)?;
        ensure(lhs == rhs, || format!("interval identity, instance {i}"))?;
    }
    for i in 0..1000 {
        let d = rng.gen_range(1..=5);
        let f = random_table(rng, d);
        let beta = SubsetMask::new(rng.gen_range(0..1u32 << d), d).map_err(lib)?;
        let derivative = MLPoly::extend(&f).partial(beta).poly.to_table();
        ensure(derivative == *f.delta_table(beta).table(), || {
            format!("derivative/difference, instance {i}")
        })?;
    }
    for i in 0..1000 {
        let d = rng.gen_range(1..=5);
        let f = random_table(rng, d);
        let x = random_point(rng, d);
        let a = MLPoly::extend(&f).eval(&x).map_err(lib)?;
        let b = bernoulli_eval(&f, &x).map_err(lib)?;
        ensure(a == b, || {
            format!("coefficient vs Bernoulli form, instance {i}")
        })?;
    }
    for i in 0..1000 {
        let dim = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..=3)).collect();
        let grid = integer_grid(&sizes);
        let mu = gen_measure(&grid, rng);
        let df = measure_to_df(&mu, &grid).map_err(lib)?;
        let back: DiscreteMeasure<Rational> = df_to_measure(&df, &rat(0)).map_err(lib)?;
        ensure(back.canonical() == mu.canonical(), || {
            format!("measure round trip, instance {i}")
        })?;
        ensure(measure_to_df(&back, &grid).map_err(lib)? == df, || {
            format!("d.f. round trip, instance {i}")
        })?;
    }
    for i in 0..100 {
        let f = random_grid_function(rng);
        let dim = f.grid().dim();
        let k = rng.gen_range(1..=dim);
        let mode = [Mode::Increasing, Mode::Decreasing, Mode::Alternating][rng.gen_range(0..3)];
        let fast = check_fully_k(&f, k, mode, &rat(0)).map_err(lib)?;
        let naive = check_fully_k_exhaustive(&f, k, mode, &rat(0)).map_err(lib)?;
        ensure(fast == naive, || {
            format!("fast vs exhaustive checker, instance {i}")
        })?;
    }
    Ok("all identities hold exactly".into())
}

fn probability_df(rng: &mut impl Rng, grid: &Grid) -> GridFunction<Rational> {
    loop {
        let mu = gen_measure(grid, rng);
        let total = mu.total_mass();
        if total > rat(0) {
            let mu = mu.scaled_down(&total).expect("positive total");
            return measure_to_df(&mu, grid).expect("support on grid");
        }
    }
}

/// Nonempty subsets of `points`, each kept in increasing order.
pub fn axis_subsets(points: &[Rational]) -> Vec<Vec<Rational>> {
    (1..1usize << points.len())
        .map(|m| {
            points
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

fn check_approximation(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Outcome {
    let grid = integer_grid(&[4, 4]);
    let subsets = axis_subsets(grid.axes()[0].points());
    let mut checked = 0usize;
    for eps in [ratio(1, 10), ratio(1, 4)] {
        let floor = rat(1) - eps.clone();
        let bound = rat(2) * eps.clone();
        for n in 0..50 {
            let f = probability_df(rng, &grid);
            for a in &subsets {
                for b in &subsets {
                    let sub = vec![a.clone(), b.clone()];
                    let top = vec![a[a.len() - 1].clone(), b[b.len() - 1].clone()];
                    if *f.at(&top).expect("on grid") < floor {
                        continue;
                    }
                    let g = subgrid_approx(&f, &sub).map_err(lib)?;
                    ensure(*g.at(&grid.max_point()).expect("on grid") == rat(1), || {
                        format!("function {n}: approximation does not reach 1")
                    })?;
                    for x in a {
                        for y in b {
                            let p = [x.clone(), y.clone()];
                            let gap =
                                (g.at(&p).expect("on grid") - f.at(&p).expect("on grid")).abs();
                            ensure(gap <= bound, || {
                                format!(
                                    "function {n}, eps = {eps}: gap {} at ({x}, {y})",
                                    to_f64(&gap)
                                )
                            })?;
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} sub-grids within 2 eps"))
}
