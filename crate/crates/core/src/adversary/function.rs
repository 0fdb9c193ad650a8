//! Partial Boolean functions given by an explicit domain, and adversary matrices over them.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::AdversaryError;

/// Largest domain the spectral routines accept.
pub const MAX_DOMAIN: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialBooleanFunction {
    n: usize,
    alphabet: u8,
    domain: Vec<Vec<u8>>,
    values: Vec<bool>,
}

/// On-disk form: `{n, alphabet?, domain: ["010", …], values: {"010": 0, …}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<u8>,
    pub domain: Vec<String>,
    pub values: BTreeMap<String, u8>,
}

impl PartialBooleanFunction {
    pub fn new(
        n: usize,
        alphabet: u8,
        domain: Vec<Vec<u8>>,
        values: Vec<bool>,
    ) -> Result<Self, AdversaryError> {
        let bad = |m: String| Err(AdversaryError::InvalidFunction(m));
        if !(2..=10).contains(&alphabet) {
            return bad(format!("alphabet size {alphabet} outside 2..=10"));
        }
        if domain.is_empty() {
            return bad("empty domain".into());
        }
        if domain.len() != values.len() {
            return bad(format!(
                "{} inputs but {} values",
                domain.len(),
                values.len()
            ));
        }
        let mut seen = HashSet::new();
        for x in &domain {
            if x.len() != n {
                return bad(format!(
                    "input of length {} in a function of {n} variables",
                    x.len()
                ));
            }
            if x.iter().any(|&s| s >= alphabet) {
                return bad(format!("symbol outside the alphabet in {}", word(x)));
            }
            if !seen.insert(x.clone()) {
                return bad(format!("input {} listed twice", word(x)));
            }
        }
        Ok(PartialBooleanFunction {
            n,
            alphabet,
            domain,
            values,
        })
    }

    /// A total Boolean function on `{0,1}^n`, inputs in increasing binary order
    /// with position 1 as the most significant bit.
    pub fn total(n: usize, f: impl Fn(&[u8]) -> bool) -> Self {
        let domain: Vec<Vec<u8>> = (0..1u32 << n)
            .map(|m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect())
            .collect();
        let values = domain.iter().map(|x| f(x)).collect();
        Self::new(n, 2, domain, values).expect("well-formed total function")
    }

    pub fn or(n: usize) -> Self {
        Self::total(n, |x| x.contains(&1))
    }

    pub fn and(n: usize) -> Self {
        Self::total(n, |x| x.iter().all(|&b| b == 1))
    }

    /// Triangle property of graphs on 3 vertices, one bit per vertex pair.
    pub fn triangle3() -> Self {
        Self::and(3)
    }

    /// `OR_n` restricted to inputs of Hamming weight at most 1.
    pub fn or_promise(n: usize) -> Self {
        let mut domain = vec![vec![0u8; n]];
        for i in 0..n {
            let mut x = vec![0u8; n];
            x[i] = 1;
            domain.push(x);
        }
        let values = (0..=n).map(|i| i > 0).collect();
        Self::new(n, 2, domain, values).expect("well-formed promise function")
    }

    pub fn from_file(file: &FunctionFile) -> Result<Self, AdversaryError> {
        let alphabet = file.alphabet.unwrap_or(2);
        let mut domain = Vec::with_capacity(file.domain.len());
        let mut values = Vec::with_capacity(file.domain.len());
        for s in &file.domain {
            let x = s
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8))
                .collect::<Option<Vec<u8>>>()
                .ok_or_else(|| {
                    AdversaryError::InvalidFunction(format!("input `{s}` is not a digit string"))
                })?;
            let v = match file.values.get(s) {
                Some(0) => false,
                Some(1) => true,
                Some(v) => {
                    return Err(AdversaryError::InvalidFunction(format!(
                        "value {v} for `{s}` is not 0 or 1"
                    )))
                }
                None => {
                    return Err(AdversaryError::InvalidFunction(format!(
                        "no value for `{s}`"
                    )))
                }
            };
            domain.push(x);
            values.push(v);
        }
        if let Some(extra) = file.values.keys().find(|k| !file.domain.contains(k)) {
            return Err(AdversaryError::InvalidFunction(format!(
                "value given for `{extra}` outside the domain"
            )));
        }
        Self::new(file.n, alphabet, domain, values)
    }

    pub fn to_file(&self) -> FunctionFile {
        FunctionFile {
            n: self.n,
            alphabet: (self.alphabet != 2).then_some(self.alphabet),
            domain: self.domain.iter().map(|x| word(x)).collect(),
            values: self
                .domain
                .iter()
                .zip(&self.values)
                .map(|(x, &v)| (word(x), u8::from(v)))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn input(&self, index: usize) -> &[u8] {
        &self.domain[index]
    }

    pub fn value(&self, index: usize) -> bool {
        self.values[index]
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.values[i])
    }

    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.values[i])
    }

    /// Bit `i` set where inputs `x` and `y` differ.
    pub(crate) fn diff_mask(&self, x: usize, y: usize) -> u32 {
        self.domain[x]
            .iter()
            .zip(&self.domain[y])
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn index_of(&self, x: &[u8]) -> Option<usize> {
        self.domain.iter().position(|y| y == x)
    }
}

pub(crate) fn word(x: &[u8]) -> String {
    x.iter().map(|d| char::from(b'0' + d)).collect()
}

/// A square matrix of reals indexed by the domain of a function.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryMatrix {
    dim: usize,
    data: Vec<f64>,
}

/// Matrix file: nested rows or a flat row-major array.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixFile {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl AdversaryMatrix {
    pub fn zeros(dim: usize) -> Self {
        AdversaryMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, AdversaryError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(AdversaryError::InvalidMatrix(
                "rows of unequal length or matrix not square".into(),
            ));
        }
        Ok(AdversaryMatrix {
            dim,
            data: rows.concat(),
        })
    }

    pub fn from_flat(data: Vec<f64>) -> Result<Self, AdversaryError> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(AdversaryError::InvalidMatrix(format!(
                "{} entries do not form a square",
                data.len()
            )));
        }
        Ok(AdversaryMatrix { dim, data })
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self, AdversaryError> {
        match file {
            MatrixFile::Rows(r) => Self::from_rows(r),
            MatrixFile::Flat(d) => Self::from_flat(d.clone()),
        }
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::Rows(
            self.data
                .chunks(self.dim.max(1))
                .map(<[f64]>::to_vec)
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub(crate) fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `uᵀ M w`.
    pub fn bilinear(&self, u: &[f64], w: &[f64]) -> f64 {
        (0..self.dim)
            .filter(|&i| u[i] != 0.0)
            .map(|i| u[i] * self.row(i).iter().zip(w).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }

    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_functions() {
        let or2 = PartialBooleanFunction::or(2);
        assert_eq!(or2.len(), 4);
        assert_eq!(or2.input(1), &[0, 1]);
        assert_eq!(or2.ones().count(), 3);
        let and3 = PartialBooleanFunction::and(3);
        assert_eq!(and3.ones().collect::<Vec<_>>(), vec![7]);
        assert_eq!(PartialBooleanFunction::or_promise(4).len(), 5);
        assert_eq!(or2.diff_mask(0, 3), 0b11);
        assert_eq!(or2.diff_mask(1, 3), 0b01);
    }

    #[test]
    fn file_round_trip() {
        let f = PartialBooleanFunction::or_promise(3);
        let json = serde_json::to_string(&f.to_file()).unwrap();
        let back: FunctionFile = serde_json::from_str(&json).unwrap();
        assert_eq!(PartialBooleanFunction::from_file(&back).unwrap(), f);
    }

    #[test]
    fn malformed_functions_are_rejected() {
        let file: FunctionFile =
            serde_json::from_str(r#"{"n":2,"domain":["01","1"],"values":{"01":0,"1":1}}"#).unwrap();
        assert!(PartialBooleanFunction::from_file(&file).is_err());
        let file: FunctionFile =
            serde_json::from_str(r#"{"n":2,"domain":["01"],"values":{"01":2}}"#).unwrap();
        assert!(PartialBooleanFunction::from_file(&file).is_err());
        let file: FunctionFile =
            serde_json::from_str(r#"{"n":2,"domain":["01","01"],"values":{"01":1}}"#).unwrap();
        assert!(PartialBooleanFunction::from_file(&file).is_err());
    }

    #[test]
    fn matrices_from_either_layout() {
        let nested: MatrixFile = serde_json::from_str("[[0,1],[1,0]]").unwrap();
        let flat: MatrixFile = serde_json::from_str("[0,1,1,0]").unwrap();
        let a = AdversaryMatrix::from_file(&nested).unwrap();
        assert_eq!(a, AdversaryMatrix::from_file(&flat).unwrap());
        assert_eq!(a.get(0, 1), 1.0);
        assert!(AdversaryMatrix::from_flat(vec![1.0, 2.0, 3.0]).is_err());
        assert!(AdversaryMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
