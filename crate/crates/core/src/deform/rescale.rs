use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat, solve_integral, RatMatrix, Rational};
use crate::logcan::SmoothableWeight;
use crate::multivec::torus_character;

/// A torus element `t` with `t^theta = target_theta / source_theta` for every
/// weight, so that rescaling carries the deformation with coefficients
/// `source` to the one with coefficients `target`.
///
/// Integer dual vectors are used when the weights span a saturated lattice.
/// Otherwise rational dual vectors are tried and the required roots taken
/// exactly; `Ok(None)` means those roots are irrational.
pub fn rescaling_witness(
    weights: &[SmoothableWeight],
    source: &[Rational],
    target: &[Rational],
) -> Result<Option<Vec<Rational>>> {
    if source.len() != weights.len() || target.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: weights.len(), found: source.len().min(target.len()) });
    }
    if source.iter().chain(target).any(Zero::is_zero) {
        return Err(Error::Precondition("coefficients must be nonzero".into()));
    }
    let Some(first) = weights.first() else {
        return Ok(Some(Vec::new()));
    };
    let n = first.theta.dim();
    let ratios: Vec<Rational> = target.iter().zip(source).map(|(a, b)| a / b).collect();
    let rows: Vec<Vec<BigInt>> = weights.iter().map(|w| w.theta.0.iter().map(|&v| BigInt::from(v)).collect()).collect();

    let duals: Option<Vec<Vec<BigInt>>> = (0..weights.len())
        .map(|t| {
            let rhs: Vec<BigInt> = (0..weights.len()).map(|s| BigInt::from(u8::from(s == t))).collect();
            solve_integral(&rows, n, &rhs)
        })
        .collect();

    let witness = match duals {
        Some(duals) => combine(n, &ratios, &duals),
        None => match rational_duals(weights, n, &ratios) {
            Some(t) => t,
            None => return Ok(None),
        },
    };
    let consistent = weights.iter().zip(&ratios).all(|(w, r)| torus_character(&witness, &w.theta) == *r);
    if !consistent {
        return Err(Error::Internal("rescaling witness does not reproduce the ratios".into()));
    }
    Ok(Some(witness))
}

/// `t_i = prod_theta base_theta^{dual_theta_i}`.
fn combine(n: usize, bases: &[Rational], duals: &[Vec<BigInt>]) -> Vec<Rational> {
    (0..n)
        .map(|i| {
            let mut acc = Rational::one();
            for (b, d) in bases.iter().zip(duals) {
                let e: i32 = (&d[i]).try_into().expect("dual exponent fits in i32");
                acc *= num_traits::pow::Pow::pow(b, e);
            }
            acc
        })
        .collect()
}

fn rational_duals(weights: &[SmoothableWeight], n: usize, ratios: &[Rational]) -> Option<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = weights.iter().map(|w| w.theta.as_rationals()).collect();
    let transposed = RatMatrix::from_columns(&cols, n).transpose();
    let mut duals = Vec::with_capacity(weights.len());
    for t in 0..weights.len() {
        let rhs: Vec<Rational> = (0..weights.len()).map(|s| rat(i64::from(s == t))).collect();
        duals.push(transposed.solve_affine(&rhs)?);
    }
    let denom = duals.iter().flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let root: u32 = (&denom).try_into().ok()?;
    let bases: Option<Vec<Rational>> = ratios.iter().map(|r| exact_root(r, root)).collect();
    let scaled: Vec<Vec<BigInt>> = duals
        .iter()
        .map(|d| d.iter().map(|v| (v * Rational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    Some(combine(n, &bases?, &scaled))
}

fn exact_root(value: &Rational, degree: u32) -> Option<Rational> {
    if value.is_negative() && degree % 2 == 0 {
        return None;
    }
    let root_of = |v: &BigInt| -> Option<BigInt> {
        let r = v.abs().nth_root(degree);
        (num_traits::pow::Pow::pow(&r, degree) == v.abs()).then_some(r)
    };
    let num = root_of(value.numer())?;
    let den = root_of(value.denom())?;
    let magnitude = Rational::new(num, den);
    Some(if value.is_negative() { -magnitude } else { magnitude })
}
