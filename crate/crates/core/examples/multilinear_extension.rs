//! Multilinear extensions: coefficients, evaluation, mixed partials, argument
//! scaling and composition with a univariate map.

use kmono::multilinear::{bernoulli_eval, compose_univariate, MLPoly, UnivariateMap};
use kmono::subset::{PBFunction, SubsetMask};
use kmono::{rat, ratio, Result, Scalar};

fn show<T: Scalar>(label: &str, p: &MLPoly<T>) {
    let terms: Vec<String> = SubsetMask::all(p.d())
        .map(|a| format!("{}:{}", a, p.coeff(a)))
        .collect();
    println!("{label}: {}", terms.join("  "));
}

fn main() -> Result<()> {
    let f = PBFunction::from_fn(3, |a| rat(a.len().max(1) as i64))?;
    let p = MLPoly::extend(&f);
    show("coefficients", &p);

    let x = vec![ratio(1, 2); 3];
    println!(
        "value at the centre: {} (Bernoulli form {})",
        p.eval(&x)?,
        bernoulli_eval(&f, &x)?
    );

    let d12 = p.partial(SubsetMask::from_elements(&[1, 2], 3)?);
    show(
        &format!("∂ over {{1,2}} in variables {:?}", d12.vars),
        &d12.poly,
    );

    let scaled = p.argument_scale(&[ratio(1, 2), rat(1), rat(1)])?;
    show("argument scaled by (1/2, 1, 1)", &scaled);

    let g = PBFunction::new(3, [0, 2, 2, 4, 2, 4, 4, 5].map(rat).to_vec())?;
    let root = compose_univariate(&g, |v| UnivariateMap::Sqrt.apply_float(v))?;
    show("extension of the square root of (0,2,2,4,2,4,4,5)", &root);
    Ok(())
}
