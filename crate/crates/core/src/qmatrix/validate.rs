use super::{hermitian_eigenvalues, ComplexMatrix, MatrixError, Result};

/// Default tolerance for every validation in the crate.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// A square matrix with `max |M - M†| ≤ tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl HermitianOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Real linear combination `a·self + b·other`, still Hermitian.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(MatrixError::DimensionMismatch {
                op: "combine",
                left: self.matrix.shape(),
                right: other.matrix.shape(),
            });
        }
        let m = &self.matrix.scale_real(a) + &other.matrix.scale_real(b);
        validate_hermitian(&m, self.tolerance.max(other.tolerance))
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `|v⟩⟨v|` for a normalized vector.
    pub fn pure(v: &[super::Complex64], tolerance: f64) -> Result<Self> {
        validate_density(&ComplexMatrix::projector(v), tolerance)
    }
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    m.max_abs_diff(&m.dagger()).unwrap_or(f64::INFINITY)
}

pub fn validate_hermitian(m: &ComplexMatrix, tolerance: f64) -> Result<HermitianOperator> {
    require_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > tolerance {
        return Err(MatrixError::NotHermitian {
            deviation,
            tolerance,
        });
    }
    Ok(HermitianOperator {
        matrix: m.clone(),
        tolerance,
    })
}

pub fn validate_density(m: &ComplexMatrix, tolerance: f64) -> Result<DensityMatrix> {
    validate_hermitian(m, tolerance)?;
    let deviation = (m.trace()? - super::Complex64::new(1.0, 0.0)).norm();
    if deviation > tolerance {
        return Err(MatrixError::TraceNotOne {
            deviation,
            tolerance,
        });
    }
    let min_eigenvalue = hermitian_eigenvalues(m)?.first().copied().unwrap_or(0.0);
    if min_eigenvalue < -tolerance {
        return Err(MatrixError::NotPositive {
            min_eigenvalue,
            tolerance,
        });
    }
    Ok(DensityMatrix {
        matrix: m.clone(),
        tolerance,
    })
}

/// Checks `max |U U† - I| ≤ tolerance`.
pub fn validate_unitary(m: &ComplexMatrix, tolerance: f64) -> Result<()> {
    require_square(m)?;
    let deviation = m
        .multiply(&m.dagger())?
        .max_abs_diff(&ComplexMatrix::identity(m.rows()))?;
    if deviation > tolerance {
        return Err(MatrixError::NotUnitary {
            deviation,
            tolerance,
        });
    }
    Ok(())
}
