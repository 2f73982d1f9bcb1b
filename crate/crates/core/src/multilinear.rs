//! Multilinear polynomials `p(x) = Σ_α c_α x^α` in `d` variables.
//!
//! The multilinear extension of a table `f` has coefficients
//! `c_α = (Δ_α f)(∅)` (the Möbius transform of `f`), and agrees with the
//! Bernoulli form `Σ_α f(α) x^α (1 - x)^{α^c}` everywhere on `R^d`.

use crate::error::{Error, Result};
use crate::mode::{Mode, Verdict};
use crate::scalar::{to_f64, Rational, Scalar};
use crate::subset::{
    deposit, is_fully_k, mobius_transform, zeta_transform, PBFunction, SubsetMask, SubsetWitness,
    MAX_GROUND,
};

/// Tolerance used for sign checks and comparisons on floating polynomials.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-12;

/// Dense coefficient vector over all `2^d` monomials, indexed by mask.
#[derive(Clone, Debug, PartialEq)]
pub struct MLPoly<T> {
    d: usize,
    coeffs: Vec<T>,
}

/// `∂^β p`, a polynomial in the variables of `β^c`.
///
/// Compacted variable `j` (1-based) stands for original variable `vars[j - 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivative<T> {
    pub poly: MLPoly<T>,
    pub vars: Vec<usize>,
}

impl<T: Scalar> MLPoly<T> {
    pub fn new(d: usize, coeffs: Vec<T>) -> Result<Self> {
        if d > MAX_GROUND {
            return Err(Error::DimensionOutOfRange { d, max: MAX_GROUND });
        }
        if coeffs.len() != 1 << d {
            return Err(Error::LengthMismatch {
                what: "polynomial coefficients",
                expected: 1 << d,
                found: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(MLPoly { d, coeffs })
    }

    pub fn constant(d: usize, c: T) -> Result<Self> {
        if d > MAX_GROUND {
            return Err(Error::DimensionOutOfRange { d, max: MAX_GROUND });
        }
        let mut coeffs = vec![T::zero(); 1 << d];
        coeffs[0] = c;
        Self::new(d, coeffs)
    }

    /// The multilinear extension of `f`, via an in-place Möbius transform.
    pub fn extend(f: &PBFunction<T>) -> Self {
        let mut coeffs = f.values().to_vec();
        mobius_transform(&mut coeffs);
        MLPoly { d: f.d(), coeffs }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: SubsetMask) -> &T {
        &self.coeffs[alpha.index()]
    }

    /// `Σ_α c_α x^α`, eliminating one variable at a time.
    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.d {
            return Err(Error::LengthMismatch {
                what: "evaluation point",
                expected: self.d,
                found: x.len(),
            });
        }
        let mut work = self.coeffs.clone();
        for xi in x.iter().rev() {
            let half = work.len() / 2;
            let (lo, hi) = work.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l = l.clone() + xi.clone() * h.clone();
            }
            work.truncate(half);
        }
        Ok(work.pop().expect("one coefficient remains"))
    }

    /// Values at the cube vertices `1_α`.
    pub fn to_table(&self) -> PBFunction<T> {
        let mut values = self.coeffs.clone();
        zeta_transform(&mut values);
        PBFunction::new(self.d, values).expect("same shape as the coefficient vector")
    }

    /// Mixed partial derivative in the variables of `β`.
    pub fn partial(&self, beta: SubsetMask) -> Derivative<T> {
        assert_eq!(beta.ground_size(), self.d, "mask ground set mismatch");
        let vars = beta.complement().elements();
        let positions: Vec<u32> = vars.iter().map(|&e| (e - 1) as u32).collect();
        let coeffs = (0..1usize << positions.len())
            .map(|j| self.coeffs[(beta.bits() | deposit(j, &positions)) as usize].clone())
            .collect();
        Derivative {
            poly: MLPoly {
                d: vars.len(),
                coeffs,
            },
            vars,
        }
    }

    /// `x ↦ p(c ⊙ x)` for `c ∈ [0, 1]^d`.
    pub fn argument_scale(&self, c: &[T]) -> Result<Self> {
        if c.len() != self.d {
            return Err(Error::LengthMismatch {
                what: "scale vector",
                expected: self.d,
                found: c.len(),
            });
        }
        if let Some((index, v)) = c
            .iter()
            .enumerate()
            .find(|(_, v)| **v < T::zero() || **v > T::one())
        {
            return Err(Error::ScaleOutOfRange {
                index,
                value: v.to_string(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, coef)| {
                c.iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .fold(coef.clone(), |acc, (_, ci)| acc * ci.clone())
            })
            .collect();
        Ok(MLPoly { d: self.d, coeffs })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MLPoly<U> {
        MLPoly {
            d: self.d,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl MLPoly<Rational> {
    pub fn to_float(&self) -> MLPoly<f64> {
        self.map(to_f64)
    }
}

impl MLPoly<f64> {
    /// Coefficientwise comparison within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.d == other.d
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Evaluates the Bernoulli form `Σ_α f(α) x^α (1 - x)^{α^c}` term by term.
pub fn bernoulli_eval<T: Scalar>(f: &PBFunction<T>, x: &[T]) -> Result<T> {
    if x.len() != f.d() {
        return Err(Error::LengthMismatch {
            what: "evaluation point",
            expected: f.d(),
            found: x.len(),
        });
    }
    Ok(SubsetMask::all(f.d()).fold(T::zero(), |acc, alpha| {
        let weight = x.iter().enumerate().fold(T::one(), |w, (i, xi)| {
            if alpha.contains(i + 1) {
                w * xi.clone()
            } else {
                w * (T::one() - xi.clone())
            }
        });
        acc + f.value(alpha).clone() * weight
    }))
}

/// Fully k-monotone on `[0, 1]^d`, decided on the cube vertices.
///
/// A multilinear polynomial is fully k-monotone on the whole cube exactly when
/// its vertex table is.
pub fn is_fully_k_on_cube<T: Scalar>(
    p: &MLPoly<T>,
    k: usize,
    mode: Mode,
    eps: &T,
) -> Result<Verdict<SubsetWitness<T>>> {
    is_fully_k(&p.to_table(), k, mode, eps)
}

/// Multilinear extension of `α ↦ φ(f(α))`.
///
/// `phi` returns `None` where it is undefined.
pub fn compose_univariate<T: Scalar, U: Scalar>(
    f: &PBFunction<T>,
    phi: impl Fn(&T) -> Option<U>,
) -> Result<MLPoly<U>> {
    let values = f
        .values()
        .iter()
        .map(|v| {
            phi(v).ok_or_else(|| Error::UndefinedComposition {
                value: v.to_string(),
            })
        })
        .collect::<Result<Vec<U>>>()?;
    Ok(MLPoly::extend(&PBFunction::new(f.d(), values)?))
}

/// Univariate maps that can be named on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum UnivariateMap {
    Identity,
    Sqrt,
    Log1p,
    Power(f64),
    /// Explicit finite value map; undefined off its keys.
    Table(Vec<(Rational, Rational)>),
}

impl UnivariateMap {
    /// Exact image, only available for `Identity` and `Table`.
    pub fn apply_exact(&self, v: &Rational) -> Option<Rational> {
        match self {
            UnivariateMap::Identity => Some(v.clone()),
            UnivariateMap::Table(pairs) => {
                pairs.iter().find(|(k, _)| k == v).map(|(_, w)| w.clone())
            }
            _ => None,
        }
    }

    pub fn apply_float(&self, v: &Rational) -> Option<f64> {
        let x = to_f64(v);
        let y = match self {
            UnivariateMap::Identity | UnivariateMap::Table(_) => to_f64(&self.apply_exact(v)?),
            UnivariateMap::Sqrt if x >= 0.0 => x.sqrt(),
            UnivariateMap::Log1p if x > -1.0 => x.ln_1p(),
            UnivariateMap::Power(theta) if x > 0.0 || (x == 0.0 && *theta > 0.0) => x.powf(*theta),
            _ => return None,
        };
        y.is_finite().then_some(y)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnivariateMap::Identity | UnivariateMap::Table(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn card_table() -> PBFunction<Rational> {
        PBFunction::from_fn(3, |a| rat(a.len().max(1) as i64)).unwrap()
    }

    fn alt_table() -> PBFunction<Rational> {
        PBFunction::new(3, [0, 2, 2, 4, 2, 4, 4, 5].map(rat).to_vec()).unwrap()
    }

    #[test]
    fn extend_card_table() {
        let p = MLPoly::extend(&card_table());
        assert_eq!(p.coeffs(), &[1, 0, 0, 1, 0, 1, 1, -1].map(rat));
    }

    #[test]
    fn extend_alt_table() {
        let p = MLPoly::extend(&alt_table());
        assert_eq!(p.coeffs(), &[0, 2, 2, 0, 2, 0, 0, -1].map(rat));
    }

    #[test]
    fn extend_constant() {
        let p = MLPoly::extend(&PBFunction::constant(3, rat(4)).unwrap());
        assert_eq!(p, MLPoly::constant(3, rat(4)).unwrap());
    }

    #[test]
    fn eval_examples() {
        let f = card_table();
        let p = MLPoly::extend(&f);
        for a in SubsetMask::all(3) {
            let x: Vec<Rational> = (1..=3).map(|i| rat(a.contains(i) as i64)).collect();
            assert_eq!(&p.eval(&x).unwrap(), f.value(a));
        }
        let half = vec![ratio(1, 2); 3];
        assert_eq!(p.eval(&half).unwrap(), ratio(13, 8));
        assert_eq!(bernoulli_eval(&f, &half).unwrap(), ratio(13, 8));
        let five = MLPoly::constant(2, rat(5)).unwrap();
        assert_eq!(five.eval(&[rat(-3), ratio(7, 2)]).unwrap(), rat(5));
        assert!(p.eval(&[rat(0)]).is_err());
    }

    #[test]
    fn to_table_examples() {
        let p = MLPoly::new(2, [0, 1, 0, 0].map(rat).to_vec()).unwrap();
        assert_eq!(p.to_table().values(), &[0, 1, 0, 1].map(rat));
        let z = MLPoly::new(2, vec![rat(0); 4]).unwrap();
        assert!(z.to_table().values().iter().all(|v| *v == rat(0)));
    }

    #[test]
    fn partial_examples() {
        let p = MLPoly::extend(&card_table());
        let d12 = p.partial(SubsetMask::from_elements(&[1, 2], 3).unwrap());
        assert_eq!(d12.vars, vec![3]);
        assert_eq!(d12.poly.coeffs(), &[rat(1), rat(-1)]);
        let d1 = p.partial(SubsetMask::from_elements(&[1], 3).unwrap());
        // x2 + x3 - x2 x3
        assert_eq!(d1.vars, vec![2, 3]);
        assert_eq!(d1.poly.coeffs(), &[0, 1, 1, -1].map(rat));
        let all = p.partial(SubsetMask::full(3));
        assert_eq!(all.poly.d(), 0);
        assert_eq!(all.poly.coeffs(), &[rat(-1)]);
        let none = p.partial(SubsetMask::empty(3));
        assert_eq!(none.poly, p);
        assert_eq!(none.vars, vec![1, 2, 3]);
    }

    #[test]
    fn cube_order_on_samples() {
        let p = MLPoly::extend(&card_table());
        assert!(is_fully_k_on_cube(&p, 2, Mode::Increasing, &rat(0))
            .unwrap()
            .holds());
        assert!(!is_fully_k_on_cube(&p, 3, Mode::Increasing, &rat(0))
            .unwrap()
            .holds());
        let c = MLPoly::constant(3, rat(-2)).unwrap();
        for mode in [Mode::Increasing, Mode::Decreasing, Mode::Alternating] {
            for k in 1..=3 {
                assert!(is_fully_k_on_cube(&c, k, mode, &rat(0)).unwrap().holds());
            }
        }
        assert!(is_fully_k_on_cube(&p, 0, Mode::Increasing, &rat(0)).is_err());
    }

    #[test]
    fn argument_scale_examples() {
        let p = MLPoly::extend(&card_table());
        assert_eq!(p.argument_scale(&[rat(1), rat(1), rat(1)]).unwrap(), p);
        assert_eq!(
            p.argument_scale(&[rat(0), rat(0), rat(0)]).unwrap(),
            MLPoly::constant(3, rat(1)).unwrap()
        );
        let s = p.argument_scale(&[ratio(1, 2), rat(1), rat(1)]).unwrap();
        let expected = [
            rat(1),
            rat(0),
            rat(0),
            ratio(1, 2),
            rat(0),
            ratio(1, 2),
            rat(1),
            ratio(-1, 2),
        ];
        assert_eq!(s.coeffs(), &expected);
        assert!(matches!(
            p.argument_scale(&[rat(2), rat(1), rat(1)]),
            Err(Error::ScaleOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let f = alt_table();
        let id = compose_univariate(&f, |v: &Rational| Some(v.clone())).unwrap();
        assert_eq!(id, MLPoly::extend(&f));
        let c = compose_univariate(&f, |_: &Rational| Some(rat(3))).unwrap();
        assert_eq!(c, MLPoly::constant(3, rat(3)).unwrap());
        assert!(matches!(
            compose_univariate(&f, |v: &Rational| (*v != rat(5)).then(|| v.clone())),
            Err(Error::UndefinedComposition { .. })
        ));
    }

    #[test]
    fn sqrt_of_alt_table() {
        let map = UnivariateMap::Sqrt;
        let p = compose_univariate(&alt_table(), |v| map.apply_float(v)).unwrap();
        let r2 = 2f64.sqrt();
        let single = r2;
        let pair = -2.0 * (r2 - 1.0);
        let triple = 3.0 * r2 + 5f64.sqrt() - 6.0;
        let expected = MLPoly::new(
            3,
            vec![0.0, single, single, pair, single, pair, pair, triple],
        )
        .unwrap();
        assert!(p.approx_eq(&expected, DEFAULT_FLOAT_TOLERANCE));
    }

    #[test]
    fn named_map_domains() {
        assert_eq!(UnivariateMap::Sqrt.apply_float(&rat(-1)), None);
        assert_eq!(UnivariateMap::Log1p.apply_float(&rat(-1)), None);
        assert_eq!(UnivariateMap::Power(0.5).apply_float(&rat(4)), Some(2.0));
        assert_eq!(UnivariateMap::Power(-1.0).apply_float(&rat(0)), None);
        let t = UnivariateMap::Table(vec![(rat(1), rat(7))]);
        assert_eq!(t.apply_exact(&rat(1)), Some(rat(7)));
        assert_eq!(t.apply_exact(&rat(2)), None);
    }
}
