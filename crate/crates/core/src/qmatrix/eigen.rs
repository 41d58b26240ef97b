use super::{ComplexMatrix, MatrixError, Result};

const MAX_SWEEPS: usize = 64;
const OFF_DIAGONAL_TOL: f64 = 1e-10;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled, and diagonalized by
/// cyclic Jacobi rotations. Intended for n ≤ 8. Only the Hermitian part of the
/// input is used.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let size = 2 * n;
    let mut a = vec![0.0; size * size];
    for i in 0..n {
        for j in 0..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[i * size + j] = z.re;
            a[(i + n) * size + (j + n)] = z.re;
            a[i * size + (j + n)] = -z.im;
            a[(i + n) * size + j] = z.im;
        }
    }
    jacobi(&mut a, size);
    let mut values: Vec<f64> = (0..size).map(|i| a[i * size + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(values.into_iter().step_by(2).collect())
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi(a: &mut [f64], n: usize) {
    let scale = a.iter().map(|x| x.abs()).fold(1.0, f64::max);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= OFF_DIAGONAL_TOL * 1e-3 * scale {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::{rotation, Complex64};

    #[test]
    fn pauli_spectra() {
        for m in [
            ComplexMatrix::pauli_x(),
            ComplexMatrix::pauli_y(),
            ComplexMatrix::pauli_z(),
        ] {
            let ev = hermitian_eigenvalues(&m).unwrap();
            assert!(
                (ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12,
                "{ev:?}"
            );
        }
    }

    #[test]
    fn conjugated_diagonal_keeps_its_spectrum() {
        let d = ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]);
        let phase = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let u = rotation(0.3).tensor(&rotation(1.1).multiply(&phase).unwrap());
        let ev = hermitian_eigenvalues(&d.conjugate_by(&u).unwrap()).unwrap();
        for (got, want) in ev.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn pure_state_has_rank_one() {
        let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let ev = hermitian_eigenvalues(&ComplexMatrix::projector(&v)).unwrap();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }
}
