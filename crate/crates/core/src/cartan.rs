//! Generalized Cartan matrices, the action data of their words, the
//! deformations attached to a word, and a checker for the symmetric
//! Poisson CGL axioms.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::actiondata::ActionDatum;
use crate::deform::{deform, DeformConfig, Deformation, Smoothing};
use crate::error::{Error, Result};
use crate::linalg::{rat, RatMatrix, RatVector, Rational};
use crate::multivec::{Monomial, Multivector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcmDiagnostics {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Checks the diagonal, the sign pattern and symmetrizability.
pub fn validate_gcm(matrix: &[Vec<i64>]) -> GcmDiagnostics {
    let mut problems = Vec::new();
    let r = matrix.len();
    if matrix.iter().any(|row| row.len() != r) {
        problems.push("matrix is not square".to_string());
        return GcmDiagnostics { valid: false, problems };
    }
    for i in 0..r {
        if matrix[i][i] != 2 {
            problems.push(format!("diagonal entry a{0}{0} = {1}, expected 2", i + 1, matrix[i][i]));
        }
        for j in 0..r {
            if i != j && matrix[i][j] > 0 {
                problems.push(format!("off-diagonal entry a{}{} = {} is positive", i + 1, j + 1, matrix[i][j]));
            }
        }
    }
    if problems.is_empty() {
        if let Err(e) = find_symmetrizer(matrix) {
            problems.push(e.to_string());
        }
    }
    GcmDiagnostics { valid: problems.is_empty(), problems }
}

/// Smallest positive integers `d` with `d_i a_ij = d_j a_ji`, normalized to
/// coprime entries on each connected component of the Dynkin graph.
pub fn find_symmetrizer(matrix: &[Vec<i64>]) -> Result<Vec<i64>> {
    let r = matrix.len();
    for i in 0..r {
        for j in 0..r {
            if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                return Err(Error::NotSymmetrizable(format!(
                    "a{}{} and a{}{} are not both zero",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    let mut scale: Vec<Option<Rational>> = vec![None; r];
    let mut out = vec![0i64; r];
    for root in 0..r {
        if scale[root].is_some() {
            continue;
        }
        scale[root] = Some(Rational::one());
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let di = scale[i].clone().expect("visited");
            for j in 0..r {
                if i == j || matrix[i][j] == 0 {
                    continue;
                }
                let dj = &di * rat(matrix[i][j]) / rat(matrix[j][i]);
                match &scale[j] {
                    Some(existing) if *existing != dj => {
                        return Err(Error::NotSymmetrizable(format!("inconsistent ratios around vertex {}", j + 1)));
                    }
                    Some(_) => {}
                    None => {
                        scale[j] = Some(dj);
                        component.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        let lcm = component.iter().fold(BigInt::one(), |acc, &i| acc.lcm(scale[i].as_ref().expect("visited").denom()));
        let ints: Vec<BigInt> = component
            .iter()
            .map(|&i| (scale[i].clone().expect("visited") * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        for (&i, v) in component.iter().zip(&ints) {
            out[i] = i64::try_from(v / &gcd).map_err(|_| Error::NotSymmetrizable("symmetrizer overflow".into()))?;
        }
    }
    Ok(out)
}

/// A word in the simple reflections of a symmetrizable GCM. Letters and
/// positions are zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanJob {
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizer: Vec<i64>,
    pub word: Vec<usize>,
    /// First-order coefficients keyed by word position; absent means the
    /// Bott-Samelson preset.
    pub coefficients: Option<BTreeMap<usize, Rational>>,
}

impl CartanJob {
    /// Validates the matrix and word. A missing symmetrizer is computed.
    pub fn new(matrix: Vec<Vec<i64>>, symmetrizer: Option<Vec<i64>>, word: Vec<usize>) -> Result<Self> {
        let diag = validate_gcm(&matrix);
        if !diag.valid {
            return Err(Error::InvalidCartanMatrix(diag.problems.join("; ")));
        }
        let r = matrix.len();
        let symmetrizer = match symmetrizer {
            Some(d) => {
                if d.len() != r || d.iter().any(|&v| v <= 0) {
                    return Err(Error::NotSymmetrizable("symmetrizer must have one positive entry per row".into()));
                }
                for i in 0..r {
                    for j in 0..r {
                        if d[i] * matrix[i][j] != d[j] * matrix[j][i] {
                            return Err(Error::NotSymmetrizable(format!("d does not symmetrize a{}{}", i + 1, j + 1)));
                        }
                    }
                }
                d
            }
            None => find_symmetrizer(&matrix)?,
        };
        if let Some(&bad) = word.iter().find(|&&i| i >= r) {
            return Err(Error::Precondition(format!("word letter {} exceeds rank {}", bad + 1, r)));
        }
        Ok(CartanJob { matrix, symmetrizer, word, coefficients: None })
    }

    pub fn with_coefficients(mut self, coefficients: BTreeMap<usize, Rational>) -> Self {
        self.coefficients = Some(coefficients);
        self
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// The form `d_i a_ij` on root coordinates.
    pub fn form(&self) -> RatMatrix {
        let rows: Vec<Vec<i64>> =
            (0..self.rank()).map(|i| self.matrix[i].iter().map(|&a| self.symmetrizer[i] * a).collect()).collect();
        RatMatrix::from_i64_rows(&rows, self.rank())
    }

    fn simple_root(&self, i: usize) -> RatVector {
        (0..self.rank()).map(|k| rat(i64::from(k == i))).collect()
    }

    /// Characters `s_{i_1} ... s_{i_{j-1}} alpha_{i_j}` in root coordinates.
    pub fn build_datum(&self) -> Result<ActionDatum> {
        let form = self.form();
        let r = self.rank();
        // Reflections only need the form, so an empty character set suffices.
        let reflector = ActionDatum::new(form.clone(), RatMatrix::zeros(r, 0))?;
        let mut columns = Vec::with_capacity(self.word.len());
        for (j, &letter) in self.word.iter().enumerate() {
            let mut v = self.simple_root(letter);
            for &prev in self.word[..j].iter().rev() {
                v = reflector.reflect(&self.simple_root(prev), &v)?;
            }
            columns.push(v);
        }
        let datum = ActionDatum::new(form, RatMatrix::from_columns(&columns, r))?;
        let analysis = datum.analyze()?;
        for (j, &letter) in self.word.iter().enumerate() {
            if analysis.gammas[j] != self.simple_root(letter) {
                return Err(Error::Internal(format!("gamma at position {} is not a simple root", j + 1)));
            }
        }
        Ok(datum)
    }

    /// `c_j = -2 d_{i_j}` on every position with a later repeat of its letter.
    pub fn bott_samelson_c(&self) -> BTreeMap<usize, Rational> {
        (0..self.word.len())
            .filter(|&j| self.word[j + 1..].contains(&self.word[j]))
            .map(|j| (j, rat(-2 * self.symmetrizer[self.word[j]])))
            .collect()
    }

    /// The deformation with first-order term `sum_j c_j V_{theta_j}` over
    /// all linked positions.
    pub fn deformation(&self, config: DeformConfig) -> Result<Deformation> {
        let datum = self.build_datum()?;
        let analysis = datum.analyze()?;
        if analysis.linked_integral != analysis.linked {
            return Err(Error::Internal("Cartan datum is not integral".into()));
        }
        let weights = analysis.smoothable_weights();
        for w in &weights {
            let (j, end) = w.border;
            for k in j + 1..end {
                if w.theta.0[k] != -self.matrix[self.word[k]][self.word[j]] {
                    return Err(Error::Internal(format!("theta at position {} disagrees with the matrix", j + 1)));
                }
            }
        }
        let coefficients = self.coefficients.clone().unwrap_or_else(|| self.bott_samelson_c());
        let mut smoothings = Vec::with_capacity(weights.len());
        for w in weights {
            let c = coefficients
                .get(&w.border.0)
                .cloned()
                .ok_or_else(|| Error::Precondition(format!("missing coefficient for position {}", w.border.0 + 1)))?;
            smoothings.push(Smoothing { weight: w, coefficient: c });
        }
        if let Some(extra) = coefficients.keys().find(|j| !smoothings.iter().any(|s| s.weight.border.0 == **j)) {
            return Err(Error::Precondition(format!("position {} has no later repeat", extra + 1)));
        }
        deform(&datum.induced_structure(), &smoothings, config)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CglCondition {
    /// Coordinates are torus weight vectors and the bracket is invariant.
    TorusWeights,
    /// Nonisotropic and symmetric pairing `chi_j(h_k) = chi_k(h_j)`.
    Gram,
    /// `{x_j, x_k} - lambda_jk x_j x_k` only involves `x_{j+1}..x_{k-1}`.
    Triangular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CglFailure {
    pub condition: CglCondition,
    /// Zero-based pair of coordinates, when the failure is about a bracket.
    pub pair: Option<(usize, usize)>,
    pub monomial: Option<Vec<u32>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CglReport {
    pub passes: bool,
    pub weights: Vec<RatVector>,
    /// `h_k` represented by `B beta_k`, so that `xi(h_k) = <xi, beta_k>`.
    pub h_vectors: Vec<RatVector>,
    pub failures: Vec<CglFailure>,
}

pub fn check_cgl(datum: &ActionDatum, pi: &Multivector) -> Result<CglReport> {
    let n = datum.len();
    if pi.dim() != n || pi.degree() != 2 {
        return Err(Error::Precondition("expected a bivector on the datum's coordinates".into()));
    }
    let weights: Vec<RatVector> = (0..n).map(|j| datum.character(j)).collect();
    let h_vectors: Vec<RatVector> = weights.iter().map(|b| datum.form().mul_vec(b)).collect();
    let mut failures = Vec::new();
    let structure = datum.induced_structure();

    for (m, _) in pi.iter() {
        if !structure.is_torus_invariant(&m.weight()) {
            failures.push(CglFailure {
                condition: CglCondition::TorusWeights,
                pair: Some((m.dirs[0], m.dirs[1])),
                monomial: Some(m.exponents.clone()),
                detail: format!(
                    "term {} * d/dx_{}^d/dx_{} is not torus invariant",
                    m.render_polynomial(),
                    m.dirs[0] + 1,
                    m.dirs[1] + 1
                ),
            });
        }
    }
    for j in 0..n {
        if datum.inner(&weights[j], &weights[j]).is_zero() {
            failures.push(CglFailure {
                condition: CglCondition::Gram,
                pair: Some((j, j)),
                monomial: None,
                detail: format!("chi_{0}(h_{0}) = 0", j + 1),
            });
        }
        for k in j + 1..n {
            let a = crate::linalg::dot(&weights[j], &h_vectors[k]);
            let b = crate::linalg::dot(&weights[k], &h_vectors[j]);
            if a != b {
                failures.push(CglFailure {
                    condition: CglCondition::Gram,
                    pair: Some((j, k)),
                    monomial: None,
                    detail: format!("chi_{}(h_{}) != chi_{}(h_{})", j + 1, k + 1, k + 1, j + 1),
                });
            }
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut expected = vec![0u32; n];
            expected[j] = 1;
            expected[k] = 1;
            let leading = Monomial { dirs: vec![j, k], exponents: expected };
            let lambda = structure.brackets().get(j, k).clone();
            for (m, c) in pi.terms_along(&[j, k]) {
                let remainder = if *m == leading { c - &lambda } else { c.clone() };
                if remainder.is_zero() {
                    continue;
                }
                let outside = m.exponents.iter().enumerate().any(|(i, &e)| e > 0 && (i <= j || i >= k));
                if outside {
                    failures.push(CglFailure {
                        condition: CglCondition::Triangular,
                        pair: Some((j, k)),
                        monomial: Some(m.exponents.clone()),
                        detail: format!("({},{},{})", j + 1, k + 1, m.render_polynomial()),
                    });
                }
            }
            if pi.coefficient(&leading).is_zero() && !lambda.is_zero() {
                failures.push(CglFailure {
                    condition: CglCondition::Triangular,
                    pair: Some((j, k)),
                    monomial: Some(leading.exponents.clone()),
                    detail: format!("({},{},{})", j + 1, k + 1, leading.render_polynomial()),
                });
            }
        }
    }
    Ok(CglReport { passes: failures.is_empty(), weights, h_vectors, failures })
}
