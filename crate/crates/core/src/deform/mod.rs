//! Order-by-order construction of Poisson deformations of a log-canonical
//! structure, with the Jacobi check, Pfaffians, rescaling witnesses and
//! projection onto sub-deformations.

mod pfaffian;
mod rescale;
pub mod tail;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{ratio, RatMatrix, Rational};
use crate::logcan::{is_linearly_independent, LogCanonicalStructure, SmoothableWeight};
use crate::multivec::{Multivector, Weight};

pub use pfaffian::t_pfaffian;
pub use rescale::rescaling_witness;
pub use tail::{enumerate_tail_weights, TailWeight, TailWeightSet};

pub const DEFAULT_LEVEL_CAP: usize = 64;

/// Order in which the per-weight homotopy solves run at each level. The
/// result does not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    #[default]
    Ascending,
    Descending,
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeformConfig {
    pub level_cap: usize,
    pub schedule: Schedule,
}

impl Default for DeformConfig {
    fn default() -> Self {
        DeformConfig { level_cap: DEFAULT_LEVEL_CAP, schedule: Schedule::Ascending }
    }
}

/// A smoothable weight together with its first-order coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothing {
    pub weight: SmoothableWeight,
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deformation {
    /// Input smoothings sorted by border.
    pub smoothings: Vec<Smoothing>,
    /// `orders[m]` is the homogeneous piece at level `m`; `orders[0]` is the
    /// log-canonical bivector.
    pub orders: Vec<Multivector>,
    pub total: Multivector,
}

/// `prod_{i != j,k} x_i^{theta_i} d/dx_j ^ d/dx_k`.
pub fn v_theta(weight: &SmoothableWeight) -> Multivector {
    let n = weight.theta.dim();
    let (j, k) = weight.border;
    Multivector::log_term(n, Rational::from_integer(1.into()), &weight.theta.0, &[j, k])
        .expect("smoothable weights have entries >= -1")
}

/// The differential of the log-canonical structure on a homogeneous field of
/// weight `weight`: wedge with `sum_i (lambda w)_i x_i d/dx_i`.
pub fn d_pi0_on_weight(base: &LogCanonicalStructure, weight: &Weight, field: &Multivector) -> Result<Multivector> {
    if !field.is_homogeneous_of(weight) {
        return Err(Error::InhomogeneousInput);
    }
    Multivector::log_vector(&base.hamiltonian_coefficients(weight)).wedge(field)
}

/// Solves `d_pi0(V) = target` on one weight space by contracting with a
/// coordinate covector outside the border and dividing by that coordinate.
pub fn homotopy_solve(base: &LogCanonicalStructure, weight: &Weight, target: &Multivector) -> Result<Multivector> {
    if !target.is_homogeneous_of(weight) {
        return Err(Error::InhomogeneousInput);
    }
    if target.degree() == 0 {
        return Err(Error::Precondition("homotopy needs degree >= 1".into()));
    }
    if target.is_zero() {
        return Ok(Multivector::zero(target.dim(), target.degree() - 1));
    }
    let coeffs = base.hamiltonian_coefficients(weight);
    let border = weight.negative_support();
    let Some(i) = (0..weight.dim()).find(|i| !border.contains(i) && !coeffs[*i].is_zero()) else {
        return Err(Error::NoValidIndex(weight.to_string()));
    };
    let solved = target.contract_coordinate(i, &coeffs[i].recip())?.divide_by_coordinate(i)?;
    if d_pi0_on_weight(base, weight, &solved)? != *target {
        return Err(Error::NotClosed(weight.to_string()));
    }
    Ok(solved)
}

/// `[pi, pi]`; zero exactly when `pi` is Poisson.
pub fn jacobi_residue(pi: &Multivector) -> Result<Multivector> {
    pi.schouten(pi)
}

pub fn verify_jacobi(pi: &Multivector) -> Result<bool> {
    Ok(jacobi_residue(pi)?.is_zero())
}

fn validate_smoothings(base: &LogCanonicalStructure, smoothings: &[Smoothing]) -> Result<Vec<Smoothing>> {
    let admissible: BTreeSet<SmoothableWeight> = base.smoothable_weights()?.into_iter().collect();
    let mut sorted = smoothings.to_vec();
    sorted.sort_by(|a, b| a.weight.cmp(&b.weight));
    for s in &sorted {
        if !admissible.contains(&s.weight) {
            return Err(Error::Precondition(format!("{} is not a smoothable weight", s.weight.theta)));
        }
        if s.coefficient.is_zero() {
            return Err(Error::Precondition(format!("zero coefficient for {}", s.weight.theta)));
        }
    }
    let weights: Vec<SmoothableWeight> = sorted.iter().map(|s| s.weight.clone()).collect();
    if !is_linearly_independent(&weights) {
        return Err(Error::Precondition("smoothable weights are linearly dependent".into()));
    }
    Ok(sorted)
}

/// Builds the unique deformation whose first-order term is
/// `sum c_theta V_theta` and whose higher terms live on tail weights.
pub fn deform(base: &LogCanonicalStructure, smoothings: &[Smoothing], config: DeformConfig) -> Result<Deformation> {
    let smoothings = validate_smoothings(base, smoothings)?;
    let weights: Vec<SmoothableWeight> = smoothings.iter().map(|s| s.weight.clone()).collect();
    let tails = enumerate_tail_weights(&weights, 2, config.level_cap)?;
    if let Some((_, t)) = tails.iter().find(|(_, t)| t.weight.negative_support().len() <= 1) {
        return Err(Error::W1Violated(t.weight.to_string()));
    }

    let n = base.dim();
    let mut orders = vec![base.log_canonical_bivector()];
    let mut first = Multivector::zero(n, 2);
    for s in &smoothings {
        first = &first + &v_theta(&s.weight).scaled(&s.coefficient);
    }
    orders.push(first);

    let half = -ratio(1, 2);
    for level in 2..=tails.max_level() {
        let obstruction = obstruction_at(&orders, level)?;
        let allowed: BTreeSet<&Weight> = tails.weights_at(level).collect();
        let pieces: Vec<(Weight, Multivector)> = obstruction.weight_decompose().into_iter().collect();
        let solve = |(w, piece): &(Weight, Multivector)| -> Result<(Weight, Multivector)> {
            let solved = homotopy_solve(base, w, &piece.scaled(&half))
                .map_err(|e| Error::JacobiResidue(format!("level {level}, weight {w}: {e}")))?;
            Ok((w.clone(), solved))
        };
        let solved: Vec<(Weight, Multivector)> = match config.schedule {
            Schedule::Ascending => pieces.iter().map(solve).collect::<Result<_>>()?,
            Schedule::Descending => pieces.iter().rev().map(solve).collect::<Result<_>>()?,
            Schedule::Parallel => pieces.par_iter().map(solve).collect::<Result<_>>()?,
        };
        let by_weight: BTreeMap<Weight, Multivector> = solved.into_iter().collect();
        let mut current = Multivector::zero(n, 2);
        for (w, piece) in &by_weight {
            if piece.is_zero() {
                continue;
            }
            if !allowed.contains(w) {
                return Err(Error::Internal(format!("level {level} produced unexpected weight {w}")));
            }
            current = &current + piece;
        }
        orders.push(current);
    }

    let mut total = Multivector::zero(n, 2);
    for piece in &orders {
        total = &total + piece;
    }
    let residue = jacobi_residue(&total)?;
    if !residue.is_zero() {
        return Err(Error::JacobiResidue(format!("[pi, pi] has {} terms", residue.len())));
    }
    Ok(Deformation { smoothings, orders, total })
}

/// `sum_{k=1}^{m-1} [pi_k, pi_{m-k}]`, using symmetry of the bracket on
/// bivectors.
fn obstruction_at(orders: &[Multivector], level: usize) -> Result<Multivector> {
    let n = orders[0].dim();
    let mut acc = Multivector::zero(n, 3);
    let two = Rational::from_integer(2.into());
    for k in 1..=level / 2 {
        let (a, b) = (&orders[k], &orders[level - k]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let bracket = a.schouten(b)?;
        acc = if 2 * k == level { &acc + &bracket } else { &acc + &bracket.scaled(&two) };
    }
    Ok(acc)
}

/// Restricts the deformation built from `full` to the weights generated by
/// `sub`, which must be a subset of the weights in `full`.
pub fn maximality_projection(
    base: &LogCanonicalStructure,
    full: &[Smoothing],
    sub: &[SmoothableWeight],
    config: DeformConfig,
) -> Result<Multivector> {
    let deformation = deform(base, full, config)?;
    let thetas: Vec<SmoothableWeight> = deformation.smoothings.iter().map(|s| s.weight.clone()).collect();
    if let Some(w) = sub.iter().find(|w| !thetas.contains(w)) {
        return Err(Error::Precondition(format!("{} is not among the full weights", w.theta)));
    }
    let columns: Vec<Vec<Rational>> = thetas.iter().map(|w| w.theta.as_rationals()).collect();
    let matrix = RatMatrix::from_columns(&columns, base.dim());
    let inside: Vec<bool> = thetas.iter().map(|w| sub.contains(w)).collect();
    Ok(deformation.total.filter_weights(|w| {
        let Some(mult) = matrix.solve_affine(&w.as_rationals()) else {
            return false;
        };
        mult.iter()
            .zip(&inside)
            .all(|(b, &keep)| b.is_integer() && !num_traits::Signed::is_negative(b) && (keep || b.is_zero()))
    }))
}
