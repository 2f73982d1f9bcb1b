//! Distribution functions and measures on a grid, and the probability
//! approximation obtained by restricting to a sub-grid and renormalising.

use kmono::grid::{df_to_measure, measure_to_df, subgrid_approx, DiscreteMeasure, Grid};
use kmono::{rat, ratio, Result};

fn main() -> Result<()> {
    let axis: Vec<_> = (0..4).map(rat).collect();
    let grid = Grid::cube(&axis, 2)?;
    let mu = DiscreteMeasure::new(
        vec![
            vec![rat(0), rat(1)],
            vec![rat(1), rat(2)],
            vec![rat(2), rat(0)],
            vec![rat(3), rat(3)],
        ],
        vec![ratio(3, 10), ratio(4, 10), ratio(2, 10), ratio(1, 10)],
    )?;
    let f = measure_to_df(&mu, &grid)?;
    println!(
        "d.f. values: {:?}",
        f.values()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    let back = df_to_measure(&f, &rat(0))?.canonical();
    println!(
        "recovered measure has {} atoms, total {}",
        back.len(),
        back.total_mass()
    );

    let subgrid = vec![vec![rat(0), rat(1), rat(2)], vec![rat(0), rat(1), rat(2)]];
    let g = subgrid_approx(&f, &subgrid)?;
    let eps = rat(1) - f.at(&[rat(2), rat(2)]).cloned().expect("on grid");
    let worst = subgrid[0]
        .iter()
        .flat_map(|s| subgrid[1].iter().map(move |t| vec![s.clone(), t.clone()]))
        .map(|a| {
            let d = g.at(&a).cloned().unwrap() - f.at(&a).cloned().unwrap();
            if d < rat(0) {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap();
    println!(
        "ε = {eps}; largest deviation on the sub-grid {worst} (bound {})",
        rat(2) * eps.clone()
    );
    println!(
        "approximation at the grid maximum: {}",
        g.at(&grid.max_point()).unwrap()
    );
    Ok(())
}
