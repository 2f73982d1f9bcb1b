//! Finite differences on product grids and the n-monotone and fully
//! k-monotone checkers.

use kmono::grid::{
    check_fully_k, check_n_monotone, forward_difference, negate_reflect, Grid, GridFunction,
    MultiIndex, StepVector,
};
use kmono::{rat, ratio, Mode, Rational, Result};

fn main() -> Result<()> {
    let line = Grid::from_points(vec![(0..=4).map(rat).collect()])?;
    let square = GridFunction::from_fn(line, |x| x[0].clone() * x[0].clone());
    let second = forward_difference(
        &square,
        &MultiIndex::new(vec![2])?,
        &StepVector::new(vec![rat(1)])?,
        &[rat(0)],
    )?;
    println!("second difference of t² with unit step: {second}");
    let v = check_n_monotone(
        &square,
        &MultiIndex::new(vec![2])?,
        Mode::Increasing,
        &rat(0),
    )?;
    println!("t² on 0..4 is 2-increasing: {}", v.holds());

    let sym = Grid::from_points(vec![(-2..=2).map(rat).collect()])?;
    let cube = GridFunction::from_fn(sym, |x| x[0].clone() * x[0].clone() * x[0].clone());
    let v = check_n_monotone(&cube, &MultiIndex::new(vec![3])?, Mode::Increasing, &rat(0))?;
    if let Some(w) = v.witness() {
        println!("t³ on -2..2 is not 3-increasing: {w}");
    }

    let axis: Vec<Rational> = vec![rat(0), ratio(1, 2), rat(1)];
    let grid = Grid::cube(&axis, 2)?;
    let or = GridFunction::from_fn(grid, |x| {
        x[0].clone() + x[1].clone() - x[0].clone() * x[1].clone()
    });
    for k in 1..=2 {
        let v = check_fully_k(&or, k, Mode::Increasing, &rat(0))?;
        match v.witness() {
            None => println!("s + t - st is fully {k}-increasing"),
            Some(w) => println!("s + t - st is not fully {k}-increasing: {w}"),
        }
    }
    let alt = check_fully_k(&or, 2, Mode::Alternating, &rat(0))?.holds();
    let dual = check_fully_k(&negate_reflect(&or, &rat(1)), 2, Mode::Increasing, &rat(0))?.holds();
    println!("alternating: {alt}; reflected dual increasing: {dual}");
    Ok(())
}
