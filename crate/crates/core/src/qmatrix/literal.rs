//! Matrix literals: nested rows of entries, each entry either a bare real
//! number or a `[re, im]` pair.

use serde::{Deserialize, Serialize};

use super::{Complex64, ComplexMatrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for Entry {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixLiteral(pub Vec<Vec<Entry>>);

impl MatrixLiteral {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows: Vec<Vec<Complex64>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|e| e.value()).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }
}

impl From<&ComplexMatrix> for MatrixLiteral {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixLiteral(
            m.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(Entry::from).collect())
                .collect(),
        )
    }
}
