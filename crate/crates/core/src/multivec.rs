//! Polynomial multivector fields on affine space with exact coefficients.
//!
//! A term is `c * x^a * d/dx_{j1} ^ ... ^ d/dx_{jp}` with `j1 < ... < jp`.
//! Its weight is `a - sum(e_j)`, which lies in `{-1, 0, 1, ...}^n`. Terms are
//! kept in a `BTreeMap` ordered by `(index set, exponent vector)`, so equal
//! fields always iterate and render identically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Torus weight of a homogeneous piece.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zeros(dim: usize) -> Self {
        Weight(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinates where the weight is negative.
    pub fn negative_support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &v)| v < 0).map(|(i, _)| i).collect()
    }

    /// True when all entries are at least `-1`.
    pub fn is_admissible(&self) -> bool {
        self.0.iter().all(|&v| v >= -1)
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Monomial part of a term: direction indices and exponent vector.
///
/// Field order fixes the canonical term order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub dirs: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn weight(&self) -> Weight {
        let mut w: Vec<i64> = self.exponents.iter().map(|&a| i64::from(a)).collect();
        for &j in &self.dirs {
            w[j] -= 1;
        }
        Weight(w)
    }

    /// The polynomial part rendered as `x1^a1*x3^a3`, or `1`.
    pub fn render_polynomial(&self) -> String {
        let factors: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, a)| format!("x{}^{}", i + 1, a))
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    fn render(&self, coeff: &Rational) -> String {
        let mut s = format!("{} * {}", coeff, self.render_polynomial());
        if !self.dirs.is_empty() {
            let dirs: Vec<String> = self.dirs.iter().map(|j| format!("d/dx_{}", j + 1)).collect();
            s.push_str(" * ");
            s.push_str(&dirs.join("^"));
        }
        s
    }
}

/// Sorted union of two disjoint index lists and the sign of the shuffle.
/// Returns `None` when they share an index.
fn merge_dirs(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, inversions % 2 == 1))
}

fn sign(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// A homogeneous-degree polynomial multivector field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Multivector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Multivector { dim, degree, terms: BTreeMap::new() }
    }

    /// A single term `coeff * x^exponents * d/dx_dirs`. The direction list may
    /// be unsorted; it is sorted with the matching sign, and repeated indices
    /// give zero.
    pub fn term(dim: usize, coeff: Rational, exponents: Vec<u32>, dirs: &[usize]) -> Self {
        assert_eq!(exponents.len(), dim, "exponent vector has wrong length");
        assert!(dirs.iter().all(|&j| j < dim), "direction index out of range");
        let mut out = Multivector::zero(dim, dirs.len());
        let mut sorted = dirs.to_vec();
        let mut negative = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    negative = !negative;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return out;
        }
        out.add_term(Monomial { dirs: sorted, exponents }, coeff * sign(negative));
        out
    }

    /// `coeff * x^w * d_J` in the logarithmic frame, where `d_j = x_j d/dx_j`.
    /// Requires `w + sum_{j in J} e_j >= 0`.
    pub fn log_term(dim: usize, coeff: Rational, log_exponents: &[i64], dirs: &[usize]) -> Result<Self> {
        if log_exponents.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: log_exponents.len() });
        }
        let mut exps = log_exponents.to_vec();
        for &j in dirs {
            exps[j] += 1;
        }
        if exps.iter().any(|&a| a < 0) {
            return Err(Error::Precondition(format!("log term x^{:?} is not polynomial", log_exponents)));
        }
        Ok(Self::term(dim, coeff, exps.into_iter().map(|a| a as u32).collect(), dirs))
    }

    /// The logarithmic vector field `sum_i coeffs[i] * x_i d/dx_i`.
    pub fn log_vector(coeffs: &[Rational]) -> Self {
        let dim = coeffs.len();
        let mut out = Multivector::zero(dim, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; dim];
            exps[i] = 1;
            out.add_term(Monomial { dirs: vec![i], exponents: exps }, c.clone());
        }
        out
    }

    pub fn scalar(dim: usize, value: Rational) -> Self {
        let mut out = Multivector::zero(dim, 0);
        out.add_term(Monomial { dirs: vec![], exponents: vec![0; dim] }, value);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(mono.dirs.len(), self.degree);
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Multivector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn scaled(&self, factor: &Rational) -> Multivector {
        let mut out = Multivector::zero(self.dim, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * factor);
        }
        out
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        self.check_dim(other)?;
        let mut out = Multivector::zero(self.dim, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let Some((dirs, negative)) = merge_dirs(&m1.dirs, &m2.dirs) else {
                    continue;
                };
                let exponents = m1.exponents.iter().zip(&m2.exponents).map(|(a, b)| a + b).collect();
                out.add_term(Monomial { dirs, exponents }, c1 * c2 * sign(negative));
            }
        }
        Ok(out)
    }

    /// Schouten-Nijenhuis bracket. On vector fields it is the Lie bracket and
    /// `[X, f] = X(f)`.
    pub fn schouten(&self, other: &Multivector) -> Result<Multivector> {
        self.check_dim(other)?;
        let (p, q) = (self.degree, other.degree);
        if p + q == 0 {
            return Ok(Multivector::zero(self.dim, 0));
        }
        let mut out = Multivector::zero(self.dim, p + q - 1);
        let second_negated = ((p as i64 - 1) * (q as i64 - 1)).rem_euclid(2) == 0;
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // (P d/dxi_i from the right) * d/dx_i Q
                half_bracket(&mut out, m1, c1, m2, c2, false);
                // -(-1)^{(p-1)(q-1)} (Q d/dxi_i from the right) * d/dx_i P
                half_bracket(&mut out, m2, c2, m1, c1, second_negated);
            }
        }
        Ok(out)
    }

    /// Interior product with `coeff * dx_index`; removing the factor in
    /// position `k` (zero-based) carries the sign `(-1)^k`.
    pub fn contract_coordinate(&self, index: usize, coeff: &Rational) -> Result<Multivector> {
        if self.degree == 0 {
            return Err(Error::Precondition("cannot contract a function".into()));
        }
        let mut out = Multivector::zero(self.dim, self.degree - 1);
        for (m, c) in &self.terms {
            let Some(pos) = m.dirs.iter().position(|&j| j == index) else {
                continue;
            };
            let mut dirs = m.dirs.clone();
            dirs.remove(pos);
            out.add_term(Monomial { dirs, exponents: m.exponents.clone() }, c * coeff * sign(pos % 2 == 1));
        }
        Ok(out)
    }

    pub fn divide_by_coordinate(&self, index: usize) -> Result<Multivector> {
        let mut out = Multivector::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            if m.exponents[index] == 0 {
                return Err(Error::NonDivisible { index: index + 1, term: m.render(c) });
            }
            let mut exponents = m.exponents.clone();
            exponents[index] -= 1;
            out.add_term(Monomial { dirs: m.dirs.clone(), exponents }, c.clone());
        }
        Ok(out)
    }

    /// Applies the torus element `t`: each weight-`w` component is multiplied
    /// by `t^w`.
    pub fn rescale(&self, t: &[Rational]) -> Result<Multivector> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: t.len() });
        }
        if let Some(i) = t.iter().position(Zero::is_zero) {
            return Err(Error::ZeroScaling(i + 1));
        }
        let mut out = Multivector::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * torus_character(t, &m.weight()));
        }
        Ok(out)
    }

    pub fn weight_decompose(&self) -> BTreeMap<Weight, Multivector> {
        let mut out: BTreeMap<Weight, Multivector> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight())
                .or_insert_with(|| Multivector::zero(self.dim, self.degree))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous_of(&self, weight: &Weight) -> bool {
        self.terms.keys().all(|m| m.weight() == *weight)
    }

    /// Keeps the terms whose weight satisfies `keep`.
    pub fn filter_weights(&self, mut keep: impl FnMut(&Weight) -> bool) -> Multivector {
        let mut out = Multivector::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            if keep(&m.weight()) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Terms whose direction set is exactly `dirs` (sorted).
    pub fn terms_along<'a>(&'a self, dirs: &'a [usize]) -> impl Iterator<Item = (&'a Monomial, &'a Rational)> + 'a {
        self.terms.iter().filter(move |(m, _)| m.dirs == dirs)
    }
}

/// `t^w` for a weight with entries of either sign.
pub fn torus_character(t: &[Rational], weight: &Weight) -> Rational {
    let mut acc = Rational::one();
    for (ti, &wi) in t.iter().zip(&weight.0) {
        let base = if wi < 0 { ti.recip() } else { ti.clone() };
        for _ in 0..wi.unsigned_abs() {
            acc *= &base;
        }
    }
    acc
}

fn half_bracket(out: &mut Multivector, m1: &Monomial, c1: &Rational, m2: &Monomial, c2: &Rational, negate: bool) {
    let p = m1.dirs.len();
    for (pos, &i) in m1.dirs.iter().enumerate() {
        let a = m2.exponents[i];
        if a == 0 {
            continue;
        }
        let mut left = m1.dirs.clone();
        left.remove(pos);
        let Some((dirs, negative)) = merge_dirs(&left, &m2.dirs) else {
            continue;
        };
        let moved = (p - 1 - pos) % 2 == 1;
        let mut exponents: Vec<u32> = m1.exponents.iter().zip(&m2.exponents).map(|(x, y)| x + y).collect();
        exponents[i] -= 1;
        let coeff = c1 * c2 * Rational::from_integer(BigInt::from(a)) * sign(negative ^ moved ^ negate);
        out.add_term(Monomial { dirs, exponents }, coeff);
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                write!(f, "{}", m.render(c))?;
            } else if c.is_negative() {
                write!(f, " - {}", m.render(&-c.clone()))?;
            } else {
                write!(f, " + {}", m.render(c))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}, p={}: {})", self.dim, self.degree, self)
    }
}

impl Add for &Multivector {
    type Output = Multivector;

    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "degree mismatch in addition");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;

    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self.scaled(&-Rational::one())
    }
}
