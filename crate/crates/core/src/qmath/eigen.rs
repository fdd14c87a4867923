//! Eigenvalues of small Hermitian matrices.
//!
//! A Hermitian H = A + iB embeds into the real symmetric block matrix
//! [[A, -B], [B, A]], whose spectrum is that of H with every eigenvalue
//! doubled. Cyclic Jacobi rotations on the embedding are ample for the
//! dimensions used here (at most 16, embedding 32).

use num_complex::Complex64;

/// Ascending eigenvalues of the Hermitian matrix given row-major.
pub(crate) fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    let n = 2 * dim;
    let mut m = vec![0.0; n * n];
    for r in 0..dim {
        for c in 0..dim {
            // Symmetrize to scrub roundoff before embedding.
            let h = 0.5 * (entries[r * dim + c] + entries[c * dim + r].conj());
            m[r * n + c] = h.re;
            m[r * n + (c + dim)] = -h.im;
            m[(r + dim) * n + c] = h.im;
            m[(r + dim) * n + (c + dim)] = h.re;
        }
    }
    let mut eigs = jacobi_symmetric(&mut m, n);
    eigs.sort_by(f64::total_cmp);
    // Each eigenvalue of H appears twice in the embedding; adjacent after
    // sorting, so keep every other one.
    eigs.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi sweeps on a dense real symmetric matrix. Returns the
/// unsorted diagonal after convergence.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Vec<f64> {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(1e-300);
    let stop = 1e-28 * scale;
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- Gᵀ A G with G the rotation in the (p, q) plane.
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
    (0..n).map(|i| a[i * n + i]).collect()
}
