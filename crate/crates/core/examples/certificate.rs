//! A nonnegative indicator decomposition of a compound of point-mass
//! distribution functions, rebuilt and compared with the direct compound.

use kmono::compound::{compound, indicator_decomposition, CompoundInput, Threshold};
use kmono::grid::{point_mass_df, Grid};
use kmono::subset::PBFunction;
use kmono::{rat, Result};

fn main() -> Result<()> {
    let f = PBFunction::from_fn(3, |a| rat(a.len().max(1) as i64))?;
    let grid = Grid::cube(&[rat(0), rat(1)], 2)?;
    let points = vec![
        vec![rat(0), rat(0)],
        vec![rat(1), rat(0)],
        vec![rat(0), rat(1)],
    ];

    let cert = indicator_decomposition(&f, 2, &points, &grid)?;
    for term in cert.terms() {
        let threshold = match &term.threshold {
            Threshold::Always => "always".to_string(),
            Threshold::AtLeast(a) => format!(
                "x >= ({})",
                a.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        };
        println!("{:>3} · 1[{threshold}]  ({:?})", term.weight, term.group);
    }
    println!(
        "weight sum {} (table at the full set: 3)",
        cert.weight_sum()
    );

    let gs = points
        .iter()
        .map(|a| point_mass_df(a, &grid))
        .collect::<Result<Vec<_>>>()?;
    let direct = compound(&CompoundInput::new(f, gs)?);
    println!("reconstruction matches: {}", cert.reconstruct() == direct);
    Ok(())
}
