//! Log-canonical structures with a torus action, their smoothable weights
//! and the smoothing diagram.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::deform::tail::{enumerate_tail_weights, TailWeightSet};
use crate::error::{Error, Result};
use crate::linalg::{rat, to_i64, RatMatrix, Rational};
use crate::multivec::{Multivector, Weight};

/// Skew matrix of brackets `{x_j, x_k} = lambda_jk x_j x_k` plus the
/// `r x n` matrix of torus weights of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogCanonicalStructure {
    brackets: RatMatrix,
    torus: RatMatrix,
}

/// A weight with exactly two `-1` entries at `border = (j, k)`, `j < k`,
/// satisfying `lambda * theta = scale * (e_j - e_k)` and `beta * theta = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmoothableWeight {
    pub border: (usize, usize),
    pub theta: Weight,
    pub scale: Rational,
}

impl SmoothableWeight {
    /// Entries strictly between the two border positions.
    pub fn interior(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.theta.0.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, &v)| (i, v))
    }
}

impl LogCanonicalStructure {
    pub fn new(brackets: RatMatrix, torus: RatMatrix) -> Result<Self> {
        if !brackets.is_square() {
            return Err(Error::DimensionMismatch { expected: brackets.rows(), found: brackets.cols() });
        }
        if !brackets.is_skew_symmetric() {
            return Err(Error::Precondition("bracket matrix is not skew-symmetric".into()));
        }
        if torus.cols() != brackets.cols() {
            return Err(Error::DimensionMismatch { expected: brackets.cols(), found: torus.cols() });
        }
        Ok(LogCanonicalStructure { brackets, torus })
    }

    pub fn dim(&self) -> usize {
        self.brackets.cols()
    }

    pub fn torus_rank(&self) -> usize {
        self.torus.rows()
    }

    pub fn brackets(&self) -> &RatMatrix {
        &self.brackets
    }

    pub fn torus(&self) -> &RatMatrix {
        &self.torus
    }

    /// `sum_{j<k} lambda_jk x_j x_k d/dx_j ^ d/dx_k`.
    pub fn log_canonical_bivector(&self) -> Multivector {
        let n = self.dim();
        let mut out = Multivector::zero(n, 2);
        for j in 0..n {
            for k in j + 1..n {
                let c = self.brackets.get(j, k);
                if c.is_zero() {
                    continue;
                }
                let mut exps = vec![0; n];
                exps[j] = 1;
                exps[k] = 1;
                out = &out + &Multivector::term(n, c.clone(), exps, &[j, k]);
            }
        }
        out
    }

    /// `lambda * w`, the coefficients of the log-Hamiltonian field of weight `w`.
    pub fn hamiltonian_coefficients(&self, weight: &Weight) -> Vec<Rational> {
        self.brackets.mul_vec(&weight.as_rationals())
    }

    pub fn is_torus_invariant(&self, weight: &Weight) -> bool {
        self.torus.mul_vec(&weight.as_rationals()).iter().all(Zero::is_zero)
    }

    /// The stacked matrix `[lambda; beta]` has trivial kernel.
    pub fn is_t_log_symplectic(&self) -> bool {
        self.brackets.vstack(&self.torus).rank() == self.dim()
    }

    fn require_t_log_symplectic(&self) -> Result<()> {
        if self.is_t_log_symplectic() {
            Ok(())
        } else {
            Err(Error::NotFullRank("[lambda; beta] has a nontrivial kernel".into()))
        }
    }

    /// All smoothable weights, sorted by border.
    pub fn smoothable_weights(&self) -> Result<Vec<SmoothableWeight>> {
        self.require_t_log_symplectic()?;
        let n = self.dim();
        let r = self.torus_rank();
        let mut found = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                // Unknowns (theta_1..theta_n, a): lambda theta - a(e_j - e_k) = 0,
                // beta theta = 0, theta_j = -1.
                let mut system = RatMatrix::zeros(n + r + 1, n + 1);
                let mut rhs = vec![Rational::zero(); n + r + 1];
                for i in 0..n {
                    for l in 0..n {
                        system.set(i, l, self.brackets.get(i, l).clone());
                    }
                }
                system.set(j, n, -Rational::one());
                system.set(k, n, Rational::one());
                for i in 0..r {
                    for l in 0..n {
                        system.set(n + i, l, self.torus.get(i, l).clone());
                    }
                }
                system.set(n + r, j, Rational::one());
                rhs[n + r] = rat(-1);
                let Some(sol) = system.solve_affine(&rhs) else {
                    continue;
                };
                if let Some(w) = accept_candidate(&sol, j, k) {
                    found.push(w);
                }
            }
        }
        Ok(found)
    }

    /// Exhaustive search over `{-1, ..., max_entry}^n` with exactly two `-1`
    /// entries. Used to cross-check [`Self::smoothable_weights`].
    pub fn brute_force_smoothable(&self, max_entry: u32) -> Vec<SmoothableWeight> {
        let n = self.dim();
        let mut found = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                let free: Vec<usize> = (0..n).filter(|&i| i != j && i != k).collect();
                let mut digits = vec![0i64; free.len()];
                loop {
                    let mut w = vec![0i64; n];
                    w[j] = -1;
                    w[k] = -1;
                    for (&i, &d) in free.iter().zip(&digits) {
                        w[i] = d;
                    }
                    let weight = Weight(w);
                    if self.is_torus_invariant(&weight) {
                        let lw = self.hamiltonian_coefficients(&weight);
                        let confined = lw.iter().enumerate().all(|(i, v)| i == j || i == k || v.is_zero());
                        if confined && !lw[j].is_zero() {
                            found.push(SmoothableWeight { border: (j, k), theta: weight, scale: lw[j].clone() });
                        }
                    }
                    if !increment(&mut digits, i64::from(max_entry)) {
                        break;
                    }
                }
            }
        }
        found
    }

    /// Checks that no tail weight has at most one negative entry.
    pub fn check_w1(&self, subset: &[SmoothableWeight], level_cap: usize) -> Result<bool> {
        match enumerate_tail_weights(subset, 1, level_cap) {
            Ok(tails) => Ok(tails.is_empty()),
            Err(Error::UnboundedTail) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Checks that only finitely many levels carry tail weights with at
    /// most two negative entries. `Ok(false)` when the levels are unbounded.
    pub fn check_w2(&self, subset: &[SmoothableWeight], level_cap: usize) -> Result<bool> {
        match enumerate_tail_weights(subset, 2, level_cap) {
            Ok(_) => Ok(true),
            Err(Error::UnboundedTail) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Tail weights with at most `max_negative` entries equal to `-1`.
    pub fn tail_weights(
        &self,
        subset: &[SmoothableWeight],
        max_negative: usize,
        level_cap: usize,
    ) -> Result<TailWeightSet> {
        enumerate_tail_weights(subset, max_negative, level_cap)
    }
}

fn accept_candidate(sol: &[Rational], j: usize, k: usize) -> Option<SmoothableWeight> {
    let n = sol.len() - 1;
    let scale = sol[n].clone();
    if scale.is_zero() || sol[k] != rat(-1) {
        return None;
    }
    let mut theta = Vec::with_capacity(n);
    for (i, v) in sol[..n].iter().enumerate() {
        if i == j || i == k {
            theta.push(-1);
            continue;
        }
        if v.is_negative() {
            return None;
        }
        theta.push(to_i64(v)?);
    }
    Some(SmoothableWeight { border: (j, k), theta: Weight(theta), scale })
}

fn increment(digits: &mut [i64], max: i64) -> bool {
    for d in digits.iter_mut() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Graph on `{0..n-1}` with one edge per smoothable weight, joining its
/// border, and arc counts on interior vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingDiagram {
    pub vertices: usize,
    pub edges: Vec<SmoothingEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingEdge {
    pub border: (usize, usize),
    pub theta: Weight,
    /// Vertex to positive entry of `theta` there.
    pub arcs: BTreeMap<usize, i64>,
}

impl SmoothingDiagram {
    pub fn build(dim: usize, subset: &[SmoothableWeight]) -> Result<Self> {
        let mut sorted = subset.to_vec();
        sorted.sort();
        let mut degree = vec![0usize; dim];
        let mut edges = Vec::with_capacity(sorted.len());
        for w in &sorted {
            let (j, k) = w.border;
            degree[j] += 1;
            degree[k] += 1;
            edges.push(SmoothingEdge { border: w.border, theta: w.theta.clone(), arcs: w.interior().collect() });
        }
        if let Some(v) = degree.iter().position(|&d| d > 2) {
            return Err(Error::Internal(format!("vertex {} meets more than two edges", v + 1)));
        }
        Ok(SmoothingDiagram { vertices: dim, edges })
    }

    /// True when the edge multigraph has no cycle.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.border.0), find(&mut parent, e.border.1));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Graphviz rendering with one-based vertex labels. The output depends
    /// only on the edge set.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph smoothing_diagram {\n  layout=circo;\n  node [shape=circle];\n");
        for v in 1..=self.vertices {
            let _ = writeln!(s, "  {v};");
        }
        for e in &self.edges {
            let mut label = format!("theta={}", e.theta);
            for (v, m) in &e.arcs {
                let _ = write!(label, " arcs@{}={}", v + 1, m);
            }
            let _ = writeln!(s, "  {} -- {} [style=solid, label=\"{}\"];", e.border.0 + 1, e.border.1 + 1, label);
        }
        s.push_str("}\n");
        s
    }
}

/// Rank test for linear independence of the weights.
pub fn is_linearly_independent(subset: &[SmoothableWeight]) -> bool {
    let Some(first) = subset.first() else {
        return true;
    };
    let cols: Vec<Vec<Rational>> = subset.iter().map(|w| w.theta.as_rationals()).collect();
    RatMatrix::from_columns(&cols, first.theta.dim()).rank() == subset.len()
}
