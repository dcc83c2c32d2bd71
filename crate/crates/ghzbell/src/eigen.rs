//! Eigenvalues of small Hermitian matrices via cyclic complex Jacobi.
//!
//! Only eigenvalues are needed (entropy, positivity, trace distance), and
//! only for dimensions up to 32 at the scales this crate simulates, so a
//! compact Jacobi sweep is both sufficient and bitwise deterministic.

use num_complex::Complex;

use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian `dim` x `dim` matrix in row-major order,
/// sorted ascending. The strict lower triangle is ignored; the matrix is
/// treated as the Hermitian completion of its upper triangle.
pub(crate) fn hermitian_eigenvalues<S: Scalar>(dim: usize, entries: &[Complex<S>]) -> Vec<S> {
    assert_eq!(entries.len(), dim * dim, "matrix shape mismatch");
    if dim == 0 {
        return Vec::new();
    }
    let mut a = entries.to_vec();
    for p in 0..dim {
        a[p * dim + p] = Complex::new(a[p * dim + p].re, S::zero());
        for q in (p + 1)..dim {
            a[q * dim + p] = a[p * dim + q].conj();
        }
    }

    let scale = frobenius(dim, &a).max(S::one());
    let threshold = scale * S::epsilon() * S::from_usize(dim).unwrap();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(dim, &a) <= threshold {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                rotate(dim, &mut a, p, q);
            }
        }
    }

    let mut eigs: Vec<S> = (0..dim).map(|p| a[p * dim + p].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalue is NaN"));
    eigs
}

fn frobenius<S: Scalar>(dim: usize, a: &[Complex<S>]) -> S {
    a.iter()
        .take(dim * dim)
        .map(|z| z.norm_sqr())
        .fold(S::zero(), |acc, v| acc + v)
        .sqrt()
}

fn off_diagonal_norm<S: Scalar>(dim: usize, a: &[Complex<S>]) -> S {
    let mut sum = S::zero();
    for p in 0..dim {
        for q in (p + 1)..dim {
            sum = sum + a[p * dim + q].norm_sqr();
        }
    }
    (sum + sum).sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
///
/// With `a[p][q] = h * exp(i*phi)` the unitary acts on the (p, q) plane as
/// `[[c*exp(i*phi), s*exp(i*phi)], [-s, c]]`, reducing the block to the real
/// symmetric case solved by the classic tangent formula.
fn rotate<S: Scalar>(dim: usize, a: &mut [Complex<S>], p: usize, q: usize) {
    let apq = a[p * dim + q];
    let h = apq.norm();
    if h <= S::min_positive_value() {
        a[p * dim + q] = Complex::new(S::zero(), S::zero());
        a[q * dim + p] = Complex::new(S::zero(), S::zero());
        return;
    }
    let phase = apq / h;
    let app = a[p * dim + p].re;
    let aqq = a[q * dim + q].re;

    let tau = (aqq - app) / (h + h);
    let t = if tau >= S::zero() {
        S::one() / (tau + (S::one() + tau * tau).sqrt())
    } else {
        -S::one() / (-tau + (S::one() + tau * tau).sqrt())
    };
    let c = S::one() / (S::one() + t * t).sqrt();
    let s = t * c;

    let vpp = phase * c;
    let vpq = phase * s;

    for k in 0..dim {
        let akp = a[k * dim + p];
        let akq = a[k * dim + q];
        a[k * dim + p] = akp * vpp - akq * s;
        a[k * dim + q] = akp * vpq + akq * c;
    }
    for k in 0..dim {
        let apk = a[p * dim + k];
        let aqk = a[q * dim + k];
        a[p * dim + k] = apk * vpp.conj() - aqk * s;
        a[q * dim + k] = apk * vpq.conj() + aqk * c;
    }

    a[p * dim + p] = Complex::new(a[p * dim + p].re, S::zero());
    a[q * dim + q] = Complex::new(a[q * dim + q].re, S::zero());
    a[p * dim + q] = Complex::new(S::zero(), S::zero());
    a[q * dim + p] = Complex::new(S::zero(), S::zero());
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_matrix_returns_diagonal() {
        let m = vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
        let eigs = hermitian_eigenvalues(2, &m);
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let m = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let eigs = hermitian_eigenvalues(2, &m);
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let m = vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let eigs = hermitian_eigenvalues(2, &m);
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn known_3x3_hermitian() {
        // Eigenvalues of [[2,1,0],[1,3,1],[0,1,4]] are 3 and 3 -+ sqrt(3).
        let m = vec![
            c(2.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(3.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(4.0, 0.0),
        ];
        let eigs = hermitian_eigenvalues(3, &m);
        let expected = [3.0 - 3.0f64.sqrt(), 3.0, 3.0 + 3.0f64.sqrt()];
        for (got, want) in eigs.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn random_hermitian_preserves_trace_and_square_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for dim in [2usize, 5, 8, 16] {
            let mut m = vec![c(0.0, 0.0); dim * dim];
            for p in 0..dim {
                m[p * dim + p] = c(rng.gen::<f64>() * 2.0 - 1.0, 0.0);
                for q in (p + 1)..dim {
                    let z = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    m[p * dim + q] = z;
                    m[q * dim + p] = z.conj();
                }
            }
            let trace: f64 = (0..dim).map(|p| m[p * dim + p].re).sum();
            let sq: f64 = m.iter().map(|z| z.norm_sqr()).sum();
            let eigs = hermitian_eigenvalues(dim, &m);
            let tr_e: f64 = eigs.iter().sum();
            let sq_e: f64 = eigs.iter().map(|x| x * x).sum();
            assert!((trace - tr_e).abs() < 1e-12);
            assert!((sq - sq_e).abs() < 1e-11);
        }
    }
}
