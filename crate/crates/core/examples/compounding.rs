//! Compound a fully 2-increasing table with distribution functions and a
//! fully 2-alternating table with its mirror class, checking that the order
//! is preserved.

use kmono::compound::{
    closure_test, compound, gen_alternating_grid_function, gen_distribution_function,
    ClosureConfig, CompoundInput,
};
use kmono::grid::{check_fully_k, Grid};
use kmono::subset::PBFunction;
use kmono::{rat, ratio, Mode, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let axis = vec![rat(0), ratio(1, 2), rat(1)];
    let grid = Grid::cube(&axis, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let f = PBFunction::from_fn(3, |a| rat(a.len().max(1) as i64))?;
    let gs = (0..3)
        .map(|_| gen_distribution_function(&grid, &mut rng))
        .collect();
    let h = compound(&CompoundInput::new(f, gs)?);
    let v = check_fully_k(&h, 2, Mode::Increasing, &rat(0))?;
    println!(
        "(|α| ∨ 1) compounded with three d.f.s is fully 2-increasing: {}",
        v.holds()
    );

    let f = PBFunction::new(3, [0, 2, 2, 4, 2, 4, 4, 5].map(rat).to_vec())?;
    let gs = (0..3)
        .map(|_| gen_alternating_grid_function(&grid, &mut rng))
        .collect();
    let h = compound(&CompoundInput::new(f, gs)?);
    let v = check_fully_k(&h, 2, Mode::Alternating, &rat(0))?;
    println!(
        "(0,2,2,4,2,4,4,5) compounded with alternating inputs is fully 2-alternating: {}",
        v.holds()
    );

    for mode in [Mode::Increasing, Mode::Alternating] {
        let report = closure_test(&ClosureConfig {
            mode,
            d: 3,
            k: 2,
            axis_sizes: vec![3, 3],
            trials: 200,
            seed: 5,
        })?;
        println!(
            "{mode}: {}/{} random trials preserve order 2",
            report.passed, report.trials
        );
    }
    Ok(())
}
