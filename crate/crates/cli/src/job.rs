//! Job files: JSON with rationals written as `"p/q"` strings. Coordinates,
//! word letters and positions are one-based in the file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use logpoisson::actiondata::ActionDatum;
use logpoisson::cartan::CartanJob;
use logpoisson::linalg::{RatMatrix, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// A rational that (de)serializes as a reduced `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rat(pub Rational);

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| format!("bad rational {s:?}"))?;
        let den: BigInt = den.parse().map_err(|_| format!("bad rational {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rat(Rational::new(num, den)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    /// Borders `[j, k]` of the smoothable weights to deform along; all of
    /// them when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_cap: Option<usize>,
    /// Entry bound for the brute-force smoothable-weight oracle in `analyze`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_box: Option<u32>,
}

impl JobOptions {
    fn is_default(&self) -> bool {
        *self == JobOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JobFile {
    ActionDatum {
        /// Symmetric `r x r` form.
        form: Vec<Vec<Rat>>,
        /// One integer character of length `r` per coordinate.
        betas: Vec<Vec<Rat>>,
        /// First-order coefficients keyed `"j:k"` or `"j"`; 1 when absent.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        c: BTreeMap<String, Rat>,
        #[serde(default, skip_serializing_if = "JobOptions::is_default")]
        options: JobOptions,
    },
    Cartan {
        gcm: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symmetrizer: Option<Vec<i64>>,
        word: Vec<usize>,
        /// Coefficients keyed by position `"j"` (or `"j:k"`); the
        /// Bott-Samelson preset when absent.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        c: BTreeMap<String, Rat>,
        #[serde(default, skip_serializing_if = "JobOptions::is_default")]
        options: JobOptions,
    },
}

impl JobFile {
    /// Parses and normalizes: subsets are sorted and deduplicated and
    /// coefficient keys are rewritten without spaces.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut job: JobFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        job.normalize()?;
        Ok(job)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("job files serialize");
        s.push('\n');
        s
    }

    pub fn options(&self) -> &JobOptions {
        match self {
            JobFile::ActionDatum { options, .. } | JobFile::Cartan { options, .. } => options,
        }
    }

    pub fn options_mut(&mut self) -> &mut JobOptions {
        match self {
            JobFile::ActionDatum { options, .. } | JobFile::Cartan { options, .. } => options,
        }
    }

    pub fn coefficients_mut(&mut self) -> &mut BTreeMap<String, Rat> {
        match self {
            JobFile::ActionDatum { c, .. } | JobFile::Cartan { c, .. } => c,
        }
    }

    pub fn normalize(&mut self) -> Result<(), CliError> {
        let c = std::mem::take(self.coefficients_mut());
        let mut normalized = BTreeMap::new();
        for (key, value) in c {
            let key = CoefficientKey::from_str(&key)?.to_string();
            if normalized.insert(key.clone(), value).is_some() {
                return Err(CliError::Validation(format!("coefficient {key} given twice")));
            }
        }
        *self.coefficients_mut() = normalized;
        if let Some(subset) = &mut self.options_mut().subset {
            for &[j, k] in subset.iter() {
                if j == 0 || j >= k {
                    return Err(CliError::Validation(format!("subset entry {j}:{k} needs 1 <= j < k")));
                }
            }
            subset.sort();
            subset.dedup();
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        match self {
            JobFile::ActionDatum { form, betas, .. } => {
                let r = form.len();
                for (i, row) in form.iter().enumerate() {
                    if row.len() != r {
                        return Err(CliError::Validation(format!(
                            "form row {} has {} entries, expected {r}",
                            i + 1,
                            row.len()
                        )));
                    }
                }
                for i in 0..r {
                    for j in i + 1..r {
                        if form[i][j] != form[j][i] {
                            return Err(CliError::Validation(format!(
                                "form is not symmetric: entry ({}, {}) = {} but ({}, {}) = {}",
                                i + 1,
                                j + 1,
                                form[i][j],
                                j + 1,
                                i + 1,
                                form[j][i]
                            )));
                        }
                    }
                }
                for (j, b) in betas.iter().enumerate() {
                    if b.len() != r {
                        return Err(CliError::Validation(format!(
                            "beta {} has {} entries, expected {r}",
                            j + 1,
                            b.len()
                        )));
                    }
                    if let Some(i) = b.iter().position(|v| !v.0.is_integer()) {
                        return Err(CliError::Validation(format!(
                            "beta {} entry {} = {} is not an integer",
                            j + 1,
                            i + 1,
                            b[i]
                        )));
                    }
                }
                let form =
                    RatMatrix::from_rows(form.iter().map(|row| row.iter().map(|v| v.0.clone()).collect()).collect(), r);
                let columns: Vec<Vec<Rational>> =
                    betas.iter().map(|b| b.iter().map(|v| v.0.clone()).collect()).collect();
                let datum = ActionDatum::new(form, RatMatrix::from_columns(&columns, r))?;
                Ok(Problem::Datum(datum))
            }
            JobFile::Cartan { gcm, symmetrizer, word, .. } => {
                let r = gcm.len();
                if let Some(i) = gcm.iter().position(|row| row.len() != r) {
                    return Err(CliError::Validation(format!(
                        "gcm row {} has {} entries, expected {r}",
                        i + 1,
                        gcm[i].len()
                    )));
                }
                if let Some(&bad) = word.iter().find(|&&l| l == 0 || l > r) {
                    return Err(CliError::Validation(format!("word letter {bad} is outside 1..={r}")));
                }
                let letters = word.iter().map(|l| l - 1).collect();
                Ok(Problem::Cartan(CartanJob::new(gcm.clone(), symmetrizer.clone(), letters)?))
            }
        }
    }
}

/// The validated mathematical content of a job.
#[derive(Clone, Debug)]
pub enum Problem {
    Datum(ActionDatum),
    Cartan(CartanJob),
}

impl Problem {
    pub fn datum(&self) -> Result<ActionDatum, CliError> {
        match self {
            Problem::Datum(d) => Ok(d.clone()),
            Problem::Cartan(j) => Ok(j.build_datum()?),
        }
    }
}

/// `"j:k"` names a smoothable weight by its border, `"j"` by its left end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientKey {
    Border(usize, usize),
    Left(usize),
}

impl FromStr for CoefficientKey {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Validation(format!("coefficient name {s:?} is not of the form j or j:k"));
        let parse = |t: &str| t.trim().parse::<usize>().ok().filter(|&v| v >= 1);
        match s.split_once(':') {
            Some((j, k)) => {
                let (j, k) = (parse(j).ok_or_else(bad)?, parse(k).ok_or_else(bad)?);
                if j >= k {
                    return Err(bad());
                }
                Ok(CoefficientKey::Border(j, k))
            }
            None => Ok(CoefficientKey::Left(parse(s).ok_or_else(bad)?)),
        }
    }
}

impl fmt::Display for CoefficientKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientKey::Border(j, k) => write!(f, "{j}:{k}"),
            CoefficientKey::Left(j) => write!(f, "{j}"),
        }
    }
}

/// Parses `j:k,j:k` into one-based border pairs.
pub fn parse_subset(s: &str) -> Result<Vec<[usize; 2]>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| match CoefficientKey::from_str(item)? {
            CoefficientKey::Border(j, k) => Ok([j, k]),
            CoefficientKey::Left(_) => Err(CliError::Validation(format!("subset entry {item:?} must be j:k"))),
        })
        .collect()
}

/// Parses `name=p/q`.
pub fn parse_coefficient(s: &str) -> Result<(String, Rat), CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("coefficient {s:?} is not of the form name=p/q")))?;
    let key = CoefficientKey::from_str(name)?;
    let value = Rat::from_str(value).map_err(CliError::Validation)?;
    Ok((key.to_string(), value))
}
