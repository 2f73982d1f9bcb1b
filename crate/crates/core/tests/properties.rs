//! Algebraic identities as property tests over random exact inputs.

use kmono::compound::{
    compound, gen_distribution_function, gen_measure, indicator_decomposition, CompoundInput,
};
use kmono::grid::{
    check_fully_k, check_fully_k_exhaustive, df_to_measure, forward_difference, measure_to_df,
    negate_reflect, point_mass_df, reflect, Grid, GridFunction, MultiIndex, StepVector,
};
use kmono::multilinear::{bernoulli_eval, is_fully_k_on_cube, MLPoly};
use kmono::partition::{partition_upper, verify_partition, VectorFamily};
use kmono::subset::{
    gen_fully_k, is_fully_k, is_increasing, is_submodular, PBFunction, SubsetMask,
};
use kmono::{rat, ratio, Mode, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=6).prop_map(|n| ratio(n, 6))
}

fn table(max_d: usize) -> impl Strategy<Value = PBFunction<Rational>> {
    (1..=max_d).prop_flat_map(|d| {
        prop::collection::vec(rational(), 1 << d).prop_map(move |v| PBFunction::new(d, v).unwrap())
    })
}

fn mask(d: usize) -> impl Strategy<Value = SubsetMask> {
    (0u32..1 << d).prop_map(move |b| SubsetMask::new(b, d).unwrap())
}

fn table_and_masks(
    max_d: usize,
) -> impl Strategy<Value = (PBFunction<Rational>, SubsetMask, SubsetMask)> {
    table(max_d).prop_flat_map(|f| {
        let d = f.d();
        (Just(f), mask(d), mask(d))
    })
}

fn axis() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(-4i64..=4, 1..=4).prop_map(|s| s.into_iter().map(rat).collect())
}

fn grid(max_dim: usize) -> impl Strategy<Value = Grid> {
    prop::collection::vec(axis(), 1..=max_dim).prop_map(|axes| Grid::from_points(axes).unwrap())
}

fn grid_function(max_dim: usize) -> impl Strategy<Value = GridFunction<Rational>> {
    grid(max_dim).prop_flat_map(|g| {
        prop::collection::vec(rational(), g.size())
            .prop_map(move |v| GridFunction::new(g.clone(), v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interval_sums_are_differences((f, beta, gamma) in table_and_masks(5)) {
        let gamma = gamma.union(beta);
        let coeffs = f.mobius_coefficients();
        let sum = gamma
            .submasks()
            .filter(|a| beta.is_subset_of(*a))
            .fold(rat(0), |acc, a| acc + coeffs[a.index()].clone());
        prop_assert_eq!(sum, f.delta_point(beta, gamma.difference(beta)).unwrap());
    }

    #[test]
    fn coefficients_sum_to_top_value(f in table(6)) {
        let total = f.mobius_coefficients().into_iter().fold(rat(0), |a, c| a + c);
        prop_assert_eq!(&total, f.value(f.full_set()));
    }

    #[test]
    fn differences_compose((f, a, b) in table_and_masks(5)) {
        let b = b.difference(a);
        let direct = f.delta_table(a.union(b));
        for gamma in a.union(b).complement().submasks() {
            let two_step = b.submasks().fold(rat(0), |acc, s| {
                let term = f.delta_point(a, gamma.union(s)).unwrap();
                if (b.len() - s.len()) % 2 == 0 { acc + term } else { acc - term }
            });
            prop_assert_eq!(direct.at(gamma).unwrap(), &two_step);
        }
    }

    #[test]
    fn shift_reads_the_table((f, alpha, _g) in table_and_masks(5)) {
        let shifted = f.shift(alpha);
        for gamma in alpha.complement().submasks() {
            prop_assert_eq!(shifted.at(gamma).unwrap(), f.value(gamma.union(alpha)));
        }
    }

    #[test]
    fn complement_dual_swaps_modes(seed in any::<u64>(), d in 2usize..=4, c in rational()) {
        let k = 1 + (seed as usize) % d;
        let f = gen_fully_k(d, k, Mode::Alternating, seed).unwrap();
        let dual = f.complement_dual(&c);
        prop_assert_eq!(dual.complement_dual(&c), f.clone());
        for k in 1..=d {
            let alt = is_fully_k(&f, k, Mode::Alternating, &rat(0)).unwrap().holds();
            let inc = is_fully_k(&dual, k, Mode::Increasing, &rat(0)).unwrap().holds();
            prop_assert_eq!(alt, inc);
        }
    }

    #[test]
    fn duality_on_arbitrary_tables(f in table(4), c in rational()) {
        let dual = f.complement_dual(&c);
        for k in 1..=f.d() {
            let alt = is_fully_k(&f, k, Mode::Alternating, &rat(0)).unwrap().holds();
            let inc = is_fully_k(&dual, k, Mode::Increasing, &rat(0)).unwrap().holds();
            prop_assert_eq!(alt, inc);
        }
    }

    #[test]
    fn alternating_pairs_are_submodularity(seed in any::<u64>(), d in 2usize..=5) {
        let f = gen_fully_k(d, 1, Mode::Increasing, seed).unwrap();
        prop_assume!(is_increasing(&f));
        let alt = is_fully_k(&f, 2, Mode::Alternating, &rat(0)).unwrap().holds();
        prop_assert_eq!(alt, is_submodular(&f));
    }

    #[test]
    fn generated_tables_pass(seed in any::<u64>(), d in 1usize..=6, mode_ix in 0usize..3) {
        let mode = [Mode::Increasing, Mode::Decreasing, Mode::Alternating][mode_ix];
        let k = 1 + (seed as usize) % d;
        let f = gen_fully_k(d, k, mode, seed).unwrap();
        prop_assert!(is_fully_k(&f, k, mode, &rat(0)).unwrap().holds());
        prop_assert_eq!(gen_fully_k(d, k, mode, seed).unwrap(), f);
    }

    #[test]
    fn extension_matches_vertices(f in table(5)) {
        let p = MLPoly::extend(&f);
        for a in SubsetMask::all(f.d()) {
            let x: Vec<Rational> = (1..=f.d()).map(|i| rat(a.contains(i) as i64)).collect();
            prop_assert_eq!(&p.eval(&x).unwrap(), f.value(a));
        }
        prop_assert_eq!(MLPoly::extend(&p.to_table()), p);
    }

    #[test]
    fn coefficient_and_bernoulli_forms_agree(f in table(5), xs in prop::collection::vec(rational(), 5)) {
        let x = &xs[..f.d()];
        prop_assert_eq!(MLPoly::extend(&f).eval(x).unwrap(), bernoulli_eval(&f, x).unwrap());
    }

    #[test]
    fn partials_are_differences((f, beta, _g) in table_and_masks(5)) {
        let der = MLPoly::extend(&f).partial(beta);
        let delta = f.delta_table(beta);
        prop_assert_eq!(&der.vars[..], delta.elements());
        prop_assert_eq!(&der.poly.to_table(), delta.table());
        prop_assert_eq!(der.poly.coeffs()[0].clone(), f.delta_point(beta, SubsetMask::empty(f.d())).unwrap());
    }

    #[test]
    fn nonnegative_tables_have_nonnegative_extensions(
        v in prop::collection::vec(0i64..=5, 8),
        xs in prop::collection::vec(unit_rational(), 3),
    ) {
        let f = PBFunction::new(3, v.into_iter().map(rat).collect()).unwrap();
        prop_assert!(MLPoly::extend(&f).eval(&xs).unwrap() >= rat(0));
    }

    #[test]
    fn argument_scaling((f, _a, _b) in table_and_masks(4), c in prop::collection::vec(unit_rational(), 4), x in prop::collection::vec(rational(), 4)) {
        let d = f.d();
        let p = MLPoly::extend(&f);
        let scaled = p.argument_scale(&c[..d]).unwrap();
        let cx: Vec<Rational> = c[..d].iter().zip(&x[..d]).map(|(a, b)| a.clone() * b.clone()).collect();
        prop_assert_eq!(scaled.eval(&x[..d]).unwrap(), p.eval(&cx).unwrap());
    }

    #[test]
    fn argument_scaling_keeps_order(seed in any::<u64>(), c in prop::collection::vec(unit_rational(), 4)) {
        let f = gen_fully_k(4, 2, Mode::Increasing, seed).unwrap();
        let scaled = MLPoly::extend(&f).argument_scale(&c).unwrap();
        prop_assert!(is_fully_k_on_cube(&scaled, 2, Mode::Increasing, &rat(0)).unwrap().holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fast_check_agrees_with_exhaustive(f in grid_function(3), mode_ix in 0usize..3) {
        let mode = [Mode::Increasing, Mode::Decreasing, Mode::Alternating][mode_ix];
        for k in 1..=f.grid().dim() {
            let fast = check_fully_k(&f, k, mode, &rat(0)).unwrap();
            let full = check_fully_k_exhaustive(&f, k, mode, &rat(0)).unwrap();
            prop_assert_eq!(fast, full);
        }
    }

    #[test]
    fn binary_differences_iterate(f in grid_function(3), seed in any::<u64>()) {
        let g = f.grid().clone();
        let dim = g.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let idx: Vec<usize> = g.shape().iter().map(|&n| rng.gen_range(0..n)).collect();
        let s = g.point(&idx);
        let hi: Vec<usize> = idx.iter().zip(g.shape()).map(|(&i, n)| rng.gen_range(i..n)).collect();
        let h: Vec<Rational> = g.point(&hi).into_iter().zip(&s).map(|(a, b)| a - b.clone()).collect();
        let n: Vec<usize> = (0..dim).map(|_| rng.gen_range(0..=1)).collect();
        let mut current = f.clone();
        for axis in 0..dim {
            if n[axis] == 0 { continue; }
            let mut e = vec![0; dim];
            e[axis] = 1;
            let mut step = vec![rat(0); dim];
            step[axis] = h[axis].clone();
            let prev = current.clone();
            current = GridFunction::from_fn(g.clone(), |x| {
                forward_difference(&prev, &MultiIndex::new(e.clone()).unwrap(), &StepVector::new(step.clone()).unwrap(), x)
                    .unwrap_or_else(|_| rat(0))
            });
        }
        let direct = forward_difference(&f, &MultiIndex::new(n.clone()).unwrap(), &StepVector::new(h.clone()).unwrap(), &s).unwrap();
        prop_assert_eq!(current.at(&s).unwrap(), &direct);
        let degenerate = (0..dim).any(|i| n[i] > 0 && h[i] == rat(0));
        if degenerate {
            prop_assert_eq!(direct, rat(0));
        }
    }

    #[test]
    fn measure_round_trips(g in grid(3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = gen_measure(&g, &mut rng);
        let f = measure_to_df(&mu, &g).unwrap();
        prop_assert!(check_fully_k(&f, g.dim(), Mode::Increasing, &rat(0)).unwrap().holds());
        let back = df_to_measure(&f, &rat(0)).unwrap();
        prop_assert_eq!(back.canonical(), mu.canonical());
        prop_assert_eq!(measure_to_df(&back, &g).unwrap(), f);
    }

    #[test]
    fn reflections_exchange_modes(f in grid_function(3), c in rational()) {
        for k in 1..=f.grid().dim() {
            let alt = check_fully_k(&f, k, Mode::Alternating, &rat(0)).unwrap().holds();
            let inc = check_fully_k(&negate_reflect(&f, &c), k, Mode::Increasing, &rat(0)).unwrap().holds();
            prop_assert_eq!(alt, inc);
            let dec = check_fully_k(&f, k, Mode::Decreasing, &rat(0)).unwrap().holds();
            let inc = check_fully_k(&reflect(&f), k, Mode::Increasing, &rat(0)).unwrap().holds();
            prop_assert_eq!(dec, inc);
        }
        prop_assert_eq!(negate_reflect(&negate_reflect(&f, &c), &c), f);
    }

    #[test]
    fn partitions_verify(d in 1usize..=7, k_seed in any::<usize>(), coords in prop::collection::vec(0i64..=3, 7 * 7)) {
        let k = 1 + k_seed % d;
        let vectors = (0..d).map(|i| (0..k).map(|j| rat(coords[i * 7 + j])).collect()).collect();
        let family = VectorFamily::new(vectors).unwrap();
        let r = partition_upper(&family, k).unwrap();
        let diag = verify_partition(&r, &family, k).unwrap();
        prop_assert!(diag.is_valid(), "{:?}", diag.issues);
        for (i, a) in r.intervals().iter().enumerate() {
            for b in &r.intervals()[i + 1..] {
                prop_assert!(a.intersection(b).is_none());
            }
        }
    }

    #[test]
    fn compound_is_extension_of_values(seed in any::<u64>(), f in table(3)) {
        let d = f.d();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid::cube(&[rat(0), ratio(1, 2), rat(1)], 2).unwrap();
        let gs: Vec<_> = (0..d).map(|_| gen_distribution_function(&g, &mut rng)).collect();
        let h = compound(&CompoundInput::new(f.clone(), gs.clone()).unwrap());
        let p = MLPoly::extend(&f);
        for (flat, x) in g.points().enumerate() {
            let y: Vec<Rational> = gs.iter().map(|gi| gi.at(&x).unwrap().clone()).collect();
            prop_assert_eq!(&h.values()[flat], &p.eval(&y).unwrap());
        }
    }

    #[test]
    fn compound_is_affine_in_first_input(seed in any::<u64>(), f in table(3), w in prop::collection::vec(1i64..=4, 3)) {
        let d = f.d();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid::cube(&[rat(0), ratio(1, 2), rat(1)], 2).unwrap();
        let rest: Vec<_> = (1..d).map(|_| gen_distribution_function(&g, &mut rng)).collect();
        let parts: Vec<_> = (0..3).map(|_| gen_distribution_function(&g, &mut rng)).collect();
        let total: i64 = w.iter().sum();
        let lambda: Vec<Rational> = w.iter().map(|&x| ratio(x, total)).collect();
        let mix = GridFunction::new(
            g.clone(),
            (0..g.size())
                .map(|i| parts.iter().zip(&lambda).fold(rat(0), |acc, (p, l)| acc + l.clone() * p.values()[i].clone()))
                .collect(),
        )
        .unwrap();
        let with = |first: GridFunction<Rational>| {
            let mut gs = vec![first];
            gs.extend(rest.iter().cloned());
            compound(&CompoundInput::new(f.clone(), gs).unwrap())
        };
        let mixed = with(mix);
        let separate: Vec<_> = parts.iter().map(|p| with(p.clone())).collect();
        for i in 0..g.size() {
            let combo = separate.iter().zip(&lambda).fold(rat(0), |acc, (h, l)| acc + l.clone() * h.values()[i].clone());
            prop_assert_eq!(&mixed.values()[i], &combo);
        }
    }

    #[test]
    fn scaled_inputs_match_scaled_extension(seed in any::<u64>(), f in table(3)) {
        let d = f.d();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid::cube(&[rat(0), ratio(1, 2), rat(1)], 2).unwrap();
        let gs: Vec<_> = (0..d).map(|_| gen_distribution_function(&g, &mut rng)).collect();
        let c: Vec<Rational> = gs.iter().map(|gi| gi.max_value()).collect();
        prop_assume!(c.iter().all(|ci| *ci > rat(0)));
        let stretched: Vec<Vec<Rational>> = gs
            .iter()
            .zip(&c)
            .map(|(gi, ci)| gi.values().iter().map(|v| v.clone() / ci.clone()).collect())
            .collect();
        let scaled = MLPoly::extend(&f).argument_scale(&c).unwrap();
        let h = compound(&CompoundInput::new(f.clone(), gs).unwrap());
        for i in 0..g.size() {
            let y: Vec<Rational> = stretched.iter().map(|s| s[i].clone()).collect();
            prop_assert_eq!(&h.values()[i], &scaled.eval(&y).unwrap());
        }
    }

    #[test]
    fn certificates_rebuild_compounds(seed in any::<u64>(), d in 1usize..=5, k_seed in any::<usize>(), coords in prop::collection::vec(0usize..3, 15)) {
        let k = 1 + k_seed % d.min(3);
        let f = gen_fully_k(d, k, Mode::Increasing, seed).unwrap();
        let axis = vec![rat(0), ratio(1, 2), rat(1)];
        let g = Grid::cube(&axis, k).unwrap();
        let points: Vec<Vec<Rational>> = (0..d).map(|i| (0..k).map(|j| axis[coords[i * 3 + j]].clone()).collect()).collect();
        let cert = indicator_decomposition(&f, k, &points, &g).unwrap();
        prop_assert!(cert.all_nonnegative());
        prop_assert_eq!(&cert.weight_sum(), f.value(f.full_set()));
        let gs = points.iter().map(|a| point_mass_df(a, &g).unwrap()).collect();
        prop_assert_eq!(cert.reconstruct(), compound(&CompoundInput::new(f, gs).unwrap()));
    }
}
