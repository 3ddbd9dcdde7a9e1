//! Torus-action data: a symmetric form on the character space together with
//! the characters of the coordinates. Everything about the induced
//! log-canonical structure is read off the gamma-sequence of iterated
//! reflections.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, is_nonpositive_integer, rat, to_i64, RatMatrix, RatVector, Rational};
use crate::logcan::{LogCanonicalStructure, SmoothableWeight};
use crate::multivec::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDatum {
    form: RatMatrix,
    characters: RatMatrix,
}

impl ActionDatum {
    /// `form` is the `r x r` Gram matrix, `characters` the `r x n` matrix
    /// whose column `j` is the character of `x_j`.
    pub fn new(form: RatMatrix, characters: RatMatrix) -> Result<Self> {
        if !form.is_symmetric() {
            return Err(Error::Precondition("form is not symmetric".into()));
        }
        if characters.rows() != form.rows() {
            return Err(Error::DimensionMismatch { expected: form.rows(), found: characters.rows() });
        }
        if let Some((i, j)) = (0..characters.rows())
            .flat_map(|i| (0..characters.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| !characters.get(i, j).is_integer())
        {
            return Err(Error::Precondition(format!("character entry ({}, {}) is not an integer", i + 1, j + 1)));
        }
        let datum = ActionDatum { form, characters };
        for j in 0..datum.len() {
            let b = datum.character(j);
            if datum.inner(&b, &b).is_zero() {
                return Err(Error::IsotropicVector(j + 1));
            }
        }
        Ok(datum)
    }

    pub fn len(&self) -> usize {
        self.characters.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn torus_rank(&self) -> usize {
        self.form.rows()
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn characters(&self) -> &RatMatrix {
        &self.characters
    }

    pub fn character(&self, j: usize) -> RatVector {
        self.characters.column(j)
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(u, &self.form.mul_vec(v))
    }

    /// `2<beta, xi> / <beta, beta>`.
    pub fn cartan_number(&self, beta: &[Rational], xi: &[Rational]) -> Result<Rational> {
        let norm = self.inner(beta, beta);
        if norm.is_zero() {
            return Err(Error::Precondition("isotropic reflection vector".into()));
        }
        Ok(rat(2) * self.inner(beta, xi) / norm)
    }

    /// `xi - a_{beta, xi} beta`.
    pub fn reflect(&self, beta: &[Rational], xi: &[Rational]) -> Result<RatVector> {
        let a = self.cartan_number(beta, xi)?;
        Ok(xi.iter().zip(beta).map(|(x, b)| x - &a * b).collect())
    }

    /// Log-canonical structure with `lambda_jk = -<beta_j, beta_k>` for `j < k`.
    pub fn induced_structure(&self) -> LogCanonicalStructure {
        let n = self.len();
        let mut brackets = RatMatrix::zeros(n, n);
        for j in 0..n {
            for k in j + 1..n {
                let v = self.inner(&self.character(j), &self.character(k));
                brackets.set(j, k, -v.clone());
                brackets.set(k, j, v);
            }
        }
        LogCanonicalStructure::new(brackets, self.characters.clone()).expect("induced brackets are skew")
    }

    pub fn analyze(&self) -> Result<DatumAnalysis> {
        DatumAnalysis::new(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumPredicates {
    pub distinguished: bool,
    pub integral: bool,
    pub strongly_integral: bool,
}

/// Derived data of an action datum. Indices are zero-based; `next_equal[j]`
/// is the next index whose gamma equals `gamma_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumAnalysis {
    pub datum: ActionDatum,
    pub gammas: Vec<RatVector>,
    pub q: RatMatrix,
    pub q_inv: RatMatrix,
    pub e: RatMatrix,
    pub e_inv: RatMatrix,
    pub d: RatMatrix,
    pub nu: RatMatrix,
    pub next_equal: Vec<Option<usize>>,
    pub prev_equal: Vec<Option<usize>>,
    pub level_sets: Vec<Vec<usize>>,
    /// Indices with a successor.
    pub linked: Vec<usize>,
    /// Linked indices whose interior Cartan numbers are nonpositive integers.
    pub linked_integral: Vec<usize>,
    /// Columns of `Q E`.
    pub thetas: Vec<RatVector>,
}

impl DatumAnalysis {
    fn new(datum: &ActionDatum) -> Result<Self> {
        let n = datum.len();
        let betas: Vec<RatVector> = (0..n).map(|j| datum.character(j)).collect();

        let mut gammas = Vec::with_capacity(n);
        for j in 0..n {
            let mut g = betas[j].clone();
            for i in (0..j).rev() {
                g = datum.reflect(&betas[i], &g).map_err(|_| Error::IsotropicVector(i + 1))?;
            }
            gammas.push(g);
        }

        let mut q = RatMatrix::identity(n);
        let mut q_inv = RatMatrix::identity(n);
        for j in 0..n {
            for k in j + 1..n {
                q.set(j, k, datum.cartan_number(&gammas[j], &gammas[k]).map_err(|_| Error::IsotropicVector(j + 1))?);
                q_inv.set(j, k, datum.cartan_number(&betas[j], &betas[k]).map_err(|_| Error::IsotropicVector(j + 1))?);
            }
        }
        if &q * &q_inv != RatMatrix::identity(n) {
            return Err(Error::Internal("Q Q^-1 != I".into()));
        }
        let gamma_matrix = RatMatrix::from_columns(&gammas, datum.torus_rank());
        if &datum.characters * &q != gamma_matrix {
            return Err(Error::Internal("gamma != beta Q".into()));
        }

        let mut next_equal = vec![None; n];
        let mut prev_equal = vec![None; n];
        let mut level_sets: Vec<Vec<usize>> = Vec::new();
        for j in 0..n {
            next_equal[j] = (j + 1..n).find(|&k| gammas[k] == gammas[j]);
            prev_equal[j] = (0..j).rev().find(|&k| gammas[k] == gammas[j]);
            if prev_equal[j].is_none() {
                level_sets.push((j..n).filter(|&k| gammas[k] == gammas[j]).collect());
            }
        }

        let mut e = RatMatrix::identity(n);
        let mut e_inv = RatMatrix::zeros(n, n);
        for j in 0..n {
            if let Some(k) = next_equal[j] {
                e.set(k, j, -Rational::one());
            }
            for k in (j..n).filter(|&k| gammas[k] == gammas[j]) {
                e_inv.set(k, j, Rational::one());
            }
        }
        let mut d = RatMatrix::zeros(n, n);
        for j in 0..n {
            d.set(j, j, datum.inner(&betas[j], &betas[j]));
        }
        let nu = &d * &q_inv;
        let qe = &q * &e;
        let thetas: Vec<RatVector> = (0..n).map(|j| qe.column(j)).collect();

        let linked: Vec<usize> = (0..n).filter(|&j| next_equal[j].is_some()).collect();
        let mut linked_integral = Vec::new();
        for &j in &linked {
            let end = next_equal[j].expect("linked");
            let mut ok = true;
            for k in j + 1..end {
                ok &= is_nonpositive_integer(&datum.cartan_number(&gammas[k], &gammas[j])?);
            }
            if ok {
                linked_integral.push(j);
            }
        }

        Ok(DatumAnalysis {
            datum: datum.clone(),
            gammas,
            q,
            q_inv,
            e,
            e_inv,
            d,
            nu,
            next_equal,
            prev_equal,
            level_sets,
            linked,
            linked_integral,
            thetas,
        })
    }
}

impl DatumAnalysis {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Distinct gammas in order of first appearance.
    pub fn gamma_support(&self) -> Vec<RatVector> {
        self.level_sets.iter().map(|set| self.gammas[set[0]].clone()).collect()
    }

    pub fn predicates(&self) -> DatumPredicates {
        let support = self.gamma_support();
        let distinguished =
            support.is_empty() || RatMatrix::from_columns(&support, self.datum.torus_rank()).rank() == support.len();
        let integral = self.linked_integral.len() == self.linked.len();
        let mut strongly_integral = true;
        for (a, g) in support.iter().enumerate() {
            for (b, h) in support.iter().enumerate() {
                if a != b {
                    let c = self.datum.cartan_number(g, h).expect("gammas are not isotropic");
                    strongly_integral &= is_nonpositive_integer(&c);
                }
            }
        }
        DatumPredicates { distinguished, integral, strongly_integral }
    }

    /// The weights `theta_j`, `j` linked-integral, with border `(j, next(j))`.
    pub fn smoothable_weights(&self) -> Vec<SmoothableWeight> {
        let structure = self.datum.induced_structure();
        self.linked_integral
            .iter()
            .map(|&j| {
                let theta = Weight(
                    self.thetas[j].iter().map(|v| to_i64(v).expect("linked-integral columns are integral")).collect(),
                );
                let scale = structure.hamiltonian_coefficients(&theta)[j].clone();
                SmoothableWeight { border: (j, self.next_equal[j].expect("linked")), theta, scale }
            })
            .collect()
    }

    /// The unique `w` with `lambda w = a` and `beta w = xi`, if any.
    pub fn solve_weight_equation(&self, a: &[Rational], xi: &[Rational]) -> Option<RatVector> {
        let n = self.len();
        let pairing: Vec<Rational> = (0..n).map(|j| self.datum.inner(xi, &self.datum.character(j)) - &a[j]).collect();
        let scaled: Vec<Rational> = (0..n).map(|j| &pairing[j] / self.d.get(j, j)).collect();
        let gamma_matrix = RatMatrix::from_columns(&self.gammas, self.datum.torus_rank());
        if gamma_matrix.mul_vec(&scaled) != xi {
            return None;
        }
        Some(self.q.mul_vec(&scaled))
    }

    fn require_distinguished(&self) -> Result<()> {
        if self.predicates().distinguished {
            Ok(())
        } else {
            Err(Error::NotDistinguished)
        }
    }

    /// Basis of the kernel of the character matrix: the linked theta columns.
    pub fn ker_beta_basis(&self) -> Result<Vec<RatVector>> {
        self.require_distinguished()?;
        Ok(self.linked.iter().map(|&j| self.thetas[j].clone()).collect())
    }

    /// Coordinates of `w` in [`Self::ker_beta_basis`].
    pub fn ker_beta_coordinates(&self, w: &[Rational]) -> Result<RatVector> {
        self.require_distinguished()?;
        let full = (&self.e_inv * &self.q_inv).mul_vec(w);
        Ok(self.linked.iter().map(|&j| full[j].clone()).collect())
    }

    /// For `f` equal to `-1` at its first and last nonzero positions `j < k`,
    /// runs `eta_j = gamma_j`, `eta_l = s_{gamma_l}(eta_{l-1}) - f_l gamma_l`
    /// and, when `eta_{k-1} = gamma_k`, returns the gamma_l-coordinate of
    /// each `eta_l`, `j <= l < k`. Then `f = sum_l coeff_l theta_l`.
    pub fn eta_decompose(&self, f: &[Rational]) -> Result<Option<BTreeMap<usize, Rational>>> {
        self.require_distinguished()?;
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: f.len() });
        }
        let nonzero: Vec<usize> = (0..f.len()).filter(|&i| !f[i].is_zero()).collect();
        let (Some(&j), Some(&k)) = (nonzero.first(), nonzero.last()) else {
            return Err(Error::MalformedVector("vector is zero".into()));
        };
        if j == k || f[j] != rat(-1) || f[k] != rat(-1) {
            return Err(Error::MalformedVector("end entries must both be -1".into()));
        }
        let support = self.gamma_support();
        let basis = RatMatrix::from_columns(&support, self.datum.torus_rank());
        let level_of: Vec<usize> = (0..self.len())
            .map(|l| support.iter().position(|g| *g == self.gammas[l]).expect("gamma in support"))
            .collect();

        let mut eta = self.gammas[j].clone();
        let mut coords = BTreeMap::new();
        for l in j..k {
            if l > j {
                let reflected = self.datum.reflect(&self.gammas[l], &eta)?;
                eta = reflected.iter().zip(&self.gammas[l]).map(|(e, g)| e - &f[l] * g).collect();
            }
            let expansion =
                basis.solve_affine(&eta).ok_or_else(|| Error::Internal("eta left the gamma span".into()))?;
            coords.insert(l, expansion[level_of[l]].clone());
        }
        Ok((eta == self.gammas[k]).then_some(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn family(p: i64) -> ActionDatum {
        ActionDatum::new(RatMatrix::identity(1), RatMatrix::from_i64_rows(&[vec![p, 1, -1, -p]], 4)).unwrap()
    }

    fn cols(m: &RatMatrix) -> Vec<Vec<Rational>> {
        (0..m.cols()).map(|j| m.column(j)).collect()
    }

    #[test]
    fn gamma_sequence_and_matrices() {
        let an = family(3).analyze().unwrap();
        let g: Vec<Rational> = an.gammas.iter().map(|v| v[0].clone()).collect();
        assert_eq!(g, vec![rat(3), rat(-1), rat(-1), rat(3)]);
        assert_eq!(an.next_equal, vec![Some(3), Some(2), None, None]);
        assert_eq!(*an.q.get(0, 1), ratio(-2, 3));
        assert_eq!(*an.q.get(1, 3), rat(-6));
        assert_eq!(cols(&an.e)[0], vec![rat(1), rat(0), rat(0), rat(-1)]);
        assert_eq!(an.thetas[0], vec![rat(-1), rat(6), rat(6), rat(-1)]);
    }

    #[test]
    fn predicates_of_family() {
        for p in [-3i64, -2, -1, 1, 2, 3] {
            let pr = family(p).analyze().unwrap().predicates();
            assert_eq!(pr.distinguished, p == -1, "p = {p}");
            // At p = -1 all gammas coincide, so both conditions hold vacuously.
            assert_eq!(pr.integral, p > 0 || p == -1, "p = {p}");
            assert_eq!(pr.strongly_integral, p == 1 || p == 2 || p == -1, "p = {p}");
        }
    }

    #[test]
    fn isotropic_character_rejected() {
        let form = RatMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]], 2);
        let chars = RatMatrix::from_i64_rows(&[vec![1], vec![0]], 1);
        assert_eq!(ActionDatum::new(form, chars), Err(Error::IsotropicVector(1)));
    }

    #[test]
    fn weight_equation_recovers_theta() {
        let an = family(1).analyze().unwrap();
        let theta = Weight(vec![0, -1, -1, 0]);
        let a = an.datum.induced_structure().hamiltonian_coefficients(&theta);
        assert_eq!(an.solve_weight_equation(&a, &[rat(0)]), Some(theta.as_rationals()));
        assert_eq!(an.solve_weight_equation(&[rat(1), rat(0), rat(0), rat(0)], &[rat(5)]), None);
    }
}
