//! Two ways order is lost: tensor composition of the OR table, and pointwise
//! composition with a function that is not multilinear.

use kmono::compound::{pointwise_counterexample, tensor_compose};
use kmono::grid::{check_fully_k, Grid, GridFunction};
use kmono::multilinear::MLPoly;
use kmono::subset::PBFunction;
use kmono::{rat, ratio, Mode, Result};

fn main() -> Result<()> {
    let or = MLPoly::extend(&PBFunction::from_fn(2, |a| rat(!a.is_empty() as i64))?);
    let axis = Grid::from_points(vec![vec![rat(0), ratio(1, 2), rat(1)]])?;
    let id = GridFunction::from_fn(axis, |x| x[0].clone());
    let tensor = tensor_compose(&or, &[id.clone(), id])?;
    println!(
        "tensor composite values {:?}",
        tensor
            .values()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    for k in 1..=2 {
        let v = check_fully_k(&tensor, k, Mode::Increasing, &rat(0))?;
        println!(
            "  fully {k}-increasing: {}{}",
            v.holds(),
            v.witness().map(|w| format!(" ({w})")).unwrap_or_default()
        );
    }

    let report = pointwise_counterexample()?;
    println!("pointwise composite:");
    println!(
        "  outer function fully 3-increasing: {}",
        report.phi_fully_3_increasing
    );
    println!(
        "  inner st fully 2-increasing: {}",
        report.g_fully_2_increasing
    );
    println!(
        "  composite equals 1[st >= 1/2]: {}",
        report.composite_is_indicator
    );
    println!("  mixed difference at (1/2, 1/2): {}", report.difference);
    Ok(())
}
