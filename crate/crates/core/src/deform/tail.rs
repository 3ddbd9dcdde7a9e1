//! Enumeration of tail weights: nonnegative integer combinations of at
//! least two smoothable weights whose entries are all at least `-1`.
//!
//! The multiplicities are bounded per weight by an exact linear program over
//! the relaxation `{y >= 0 : Theta y >= -1}`. That polytope is bounded
//! exactly when the tail weights occupy finitely many levels, so an
//! unbounded program is reported as [`Error::UnboundedTail`]. Inside the
//! box a depth-first search prunes branches whose deficit at some
//! coordinate cannot be repaid by the weights still to be chosen.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg::{maximize, rat, LpOutcome, RatMatrix, Rational};
use crate::logcan::SmoothableWeight;
use crate::multivec::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailWeight {
    pub weight: Weight,
    /// Multiplicity of each input weight, in input order.
    pub multiplicities: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TailWeightSet {
    /// Level (sum of multiplicities) to the weights found there, sorted.
    pub by_level: BTreeMap<usize, Vec<TailWeight>>,
}

impl TailWeightSet {
    pub fn is_empty(&self) -> bool {
        self.by_level.is_empty()
    }

    pub fn max_level(&self) -> usize {
        self.by_level.keys().next_back().copied().unwrap_or(1)
    }

    pub fn weights_at(&self, level: usize) -> impl Iterator<Item = &Weight> {
        self.by_level.get(&level).into_iter().flatten().map(|t| &t.weight)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &TailWeight)> {
        self.by_level.iter().flat_map(|(&m, v)| v.iter().map(move |t| (m, t)))
    }
}

/// Tail weights at levels `>= 2` with at most `max_negative` entries equal
/// to `-1`. Fails with [`Error::CapExceeded`] if any admissible combination
/// lies above `level_cap`.
pub fn enumerate_tail_weights(
    subset: &[SmoothableWeight],
    max_negative: usize,
    level_cap: usize,
) -> Result<TailWeightSet> {
    let Some(first) = subset.first() else {
        return Ok(TailWeightSet::default());
    };
    let n = first.theta.dim();
    let s = subset.len();
    let thetas: Vec<&[i64]> = subset.iter().map(|w| w.theta.0.as_slice()).collect();

    let mut neg = RatMatrix::zeros(n, s);
    for (t, theta) in thetas.iter().enumerate() {
        for i in 0..n {
            neg.set(i, t, rat(-theta[i]));
        }
    }
    let ones = vec![Rational::one(); n];
    let mut upper = Vec::with_capacity(s);
    for t in 0..s {
        let mut objective = vec![rat(0); s];
        objective[t] = Rational::one();
        match maximize(&neg, &ones, &objective) {
            LpOutcome::Unbounded => return Err(Error::UnboundedTail),
            LpOutcome::Optimal(v) => {
                let bound = v.floor().to_integer().to_u64().ok_or(Error::CapExceeded { cap: level_cap })?;
                upper.push(bound);
            }
        }
    }

    // raise[t][i]: the most that weights t.. can still add at coordinate i.
    let mut raise = vec![vec![0i64; n]; s + 1];
    for t in (0..s).rev() {
        for i in 0..n {
            raise[t][i] = raise[t + 1][i] + thetas[t][i].max(0) * upper[t] as i64;
        }
    }

    let mut search = Search {
        thetas: &thetas,
        upper: &upper,
        raise: &raise,
        max_negative,
        level_cap,
        out: TailWeightSet::default(),
        overflow: false,
    };
    let mut current = vec![0i64; n];
    let mut mult = vec![0u64; s];
    search.visit(0, &mut current, &mut mult);
    if search.overflow {
        return Err(Error::CapExceeded { cap: level_cap });
    }
    let mut out = search.out;
    for v in out.by_level.values_mut() {
        v.sort_by(|a, b| a.weight.cmp(&b.weight));
    }
    Ok(out)
}

struct Search<'a> {
    thetas: &'a [&'a [i64]],
    upper: &'a [u64],
    raise: &'a [Vec<i64>],
    max_negative: usize,
    level_cap: usize,
    out: TailWeightSet,
    overflow: bool,
}

impl Search<'_> {
    fn visit(&mut self, t: usize, current: &mut [i64], mult: &mut [u64]) {
        if current.iter().zip(&self.raise[t]).any(|(c, r)| c + r < -1) {
            return;
        }
        if t == self.thetas.len() {
            self.record(current, mult);
            return;
        }
        for k in 0..=self.upper[t] {
            if k > 0 {
                for (c, d) in current.iter_mut().zip(self.thetas[t]) {
                    *c += d;
                }
            }
            mult[t] = k;
            self.visit(t + 1, current, mult);
        }
        let k = self.upper[t] as i64;
        for (c, d) in current.iter_mut().zip(self.thetas[t]) {
            *c -= d * k;
        }
        mult[t] = 0;
    }

    fn record(&mut self, current: &[i64], mult: &[u64]) {
        let level: u64 = mult.iter().sum();
        if level < 2 || current.iter().any(|&v| v < -1) {
            return;
        }
        if level as usize > self.level_cap {
            self.overflow = true;
            return;
        }
        if current.iter().filter(|&&v| v == -1).count() > self.max_negative {
            return;
        }
        self.out
            .by_level
            .entry(level as usize)
            .or_default()
            .push(TailWeight { weight: Weight(current.to_vec()), multiplicities: mult.to_vec() });
    }
}
