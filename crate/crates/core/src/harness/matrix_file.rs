use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkit::ComplexMatrix;

/// On-disk square complex matrix: separate real and imaginary row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &ComplexMatrix) -> Result<Self> {
        a.ensure_square()?;
        let n = a.rows();
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..n)
                .map(|i| (0..n).map(|j| f(&a[(i, j)])).collect())
                .collect()
        };
        Ok(Self {
            n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        })
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Empty);
        }
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != n || part.iter().any(|row| row.len() != n) {
                return Err(Error::InvalidInstance(format!("`{name}` must be {n}×{n}")));
            }
        }
        let flat = |part: &[Vec<f64>]| part.iter().flatten().copied().collect::<Vec<_>>();
        ComplexMatrix::from_parts(n, n, &flat(&self.re), &flat(&self.im))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::random_matrix;

    #[test]
    fn round_trip_is_lossless() {
        for seed in 0..10 {
            let a = random_matrix(5, 5, seed).scale_real(1e-7 + seed as f64);
            let text = MatrixFile::from_matrix(&a).unwrap().to_json();
            let back = MatrixFile::from_json(&text).unwrap().to_matrix().unwrap();
            assert_eq!(a, back);
        }
    }

    #[test]
    fn parses_literal_document() {
        let f =
            MatrixFile::from_json(r#"{"n":2,"re":[[1,0],[0,1]],"im":[[0,0.5],[-0.5,0]]}"#).unwrap();
        let a = f.to_matrix().unwrap();
        assert_eq!(a[(0, 1)], num_complex::Complex64::new(0.0, 0.5));
    }

    #[test]
    fn rejects_ragged_and_mismatched() {
        let bad = MatrixFile {
            n: 2,
            re: vec![vec![1.0, 0.0], vec![0.0]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(matches!(bad.to_matrix(), Err(Error::InvalidInstance(_))));
        let bad = MatrixFile {
            n: 3,
            re: vec![vec![0.0; 2]; 2],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(bad.to_matrix().is_err());
        let empty = MatrixFile {
            n: 0,
            re: vec![],
            im: vec![],
        };
        assert_eq!(empty.to_matrix(), Err(Error::Empty));
        assert!(MatrixFile::from_json("{\"n\":2}").is_err());
        assert!(MatrixFile::from_json("not json").is_err());
    }

    #[test]
    fn rejects_non_finite() {
        let f = MatrixFile {
            n: 1,
            re: vec![vec![f64::INFINITY]],
            im: vec![vec![0.0]],
        };
        assert!(f.to_matrix().is_err());
    }
}
