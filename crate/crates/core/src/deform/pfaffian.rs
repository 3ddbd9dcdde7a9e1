use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, Rational};
use crate::logcan::LogCanonicalStructure;
use crate::multivec::{Monomial, Multivector};

/// Top-degree T-Pfaffian of a torus-invariant bivector `pi` deforming `base`:
/// `pi^r ^ u_1 ^ ... ^ u_{n-2r}` where `2r = rank(lambda)` and the `u` are
/// logarithmic fields built from torus weights. It is normalized so that the
/// log-canonical bivector itself gives `x_1...x_n d/dx_1 ^ ... ^ d/dx_n`.
pub fn t_pfaffian(base: &LogCanonicalStructure, pi: &Multivector) -> Result<Multivector> {
    let n = base.dim();
    if pi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: pi.dim() });
    }
    let brackets = base.brackets();
    let half_rank = brackets.rank() / 2;

    let mut span = brackets.clone();
    let mut complement = Vec::new();
    for i in 0..base.torus_rank() {
        let row = base.torus().row(i);
        let extended = span.vstack(&RatMatrix::from_rows(vec![row.clone()], n));
        if extended.rank() > span.rank() {
            span = extended;
            complement.push(row);
        }
    }
    if span.rank() < n {
        return Err(Error::NotFullRank(format!("torus weights span only rank {} with the brackets", span.rank())));
    }

    let top = |field: &Multivector| -> Result<Multivector> {
        let mut acc = Multivector::scalar(n, Rational::one());
        for _ in 0..half_rank {
            acc = acc.wedge(field)?;
        }
        for u in &complement {
            acc = acc.wedge(&Multivector::log_vector(u))?;
        }
        Ok(acc)
    };

    let reference = top(&base.log_canonical_bivector())?;
    let volume = Monomial { dirs: (0..n).collect(), exponents: vec![1; n] };
    let scale = reference.coefficient(&volume);
    if scale.is_zero() || reference.len() != 1 {
        return Err(Error::Internal("log-canonical Pfaffian is not a multiple of the log volume".into()));
    }
    Ok(top(pi)?.scaled(&scale.recip()))
}
