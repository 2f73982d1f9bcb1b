//! Classify a few tables on the subset lattice by the order of their
//! monotonicity, and show the witnesses produced when a check fails.

use kmono::subset::{gen_fully_k, is_fully_k, max_full_order, PBFunction};
use kmono::{rat, Mode, Result};

fn main() -> Result<()> {
    // f(α) = max(|α|, 1) on three elements.
    let f = PBFunction::from_fn(3, |a| rat(a.len().max(1) as i64))?;
    for k in 1..=3 {
        match is_fully_k(&f, k, Mode::Increasing, &rat(0))?.witness() {
            None => println!("|α| ∨ 1 is fully {k}-increasing"),
            Some(w) => println!("|α| ∨ 1 fails at order {k}: {w}"),
        }
    }

    let or = PBFunction::from_fn(2, |a| rat(!a.is_empty() as i64))?;
    println!(
        "OR on two elements: increasing up to order {}",
        max_full_order(&or, Mode::Increasing)
    );
    println!(
        "OR is alternating up to order {}",
        max_full_order(&or, Mode::Alternating)
    );
    let and = or.complement_dual(&rat(1));
    let values: Vec<String> = and.values().iter().map(ToString::to_string).collect();
    println!(
        "its dual 1 - OR(α^c) = {values:?} is increasing up to order {}",
        max_full_order(&and, Mode::Increasing)
    );

    for mode in [Mode::Increasing, Mode::Decreasing, Mode::Alternating] {
        let orders: Vec<usize> = (0..8)
            .map(|seed| gen_fully_k(4, 2, mode, seed).map(|g| max_full_order(&g, mode)))
            .collect::<Result<_>>()?;
        println!("generated d = 4, k = 2 tables ({mode}), exact orders by seed: {orders:?}");
    }
    Ok(())
}
