//! Dense Hermitian eigendecomposition.
//!
//! Real symmetric matrices go straight to nalgebra's `SymmetricEigen`.
//! Complex Hermitian matrices H = A + iB are solved through the real
//! symmetric embedding [[A, −B], [B, A]], whose spectrum is that of H with
//! every eigenvalue doubled; one complex eigenvector x + iy is recovered per
//! pair and re-orthonormalized inside degenerate clusters.

use super::{ChainEdError, EigenBasis, HamMatrix, Hamiltonian, SpectrumED};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn hermiticity_defect_real(m: &DMatrix<f64>) -> f64 {
    let mut defect: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)]).abs());
            scale = scale.max(m[(i, j)].abs());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        defect / scale
    }
}

fn hermiticity_defect_complex(m: &DMatrix<Complex64>) -> f64 {
    let mut defect: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
            scale = scale.max(m[(i, j)].norm());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        defect / scale
    }
}

fn sorted_eigen_real(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::<f64>::zeros(m.nrows(), m.ncols());
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

fn complex_eigen_via_embedding(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = h.nrows();
    let mut e = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            e[(i, j)] = z.re;
            e[(i + n, j + n)] = z.re;
            e[(i, j + n)] = -z.im;
            e[(i + n, j)] = z.im;
        }
    }
    let (vals2, vecs2) = sorted_eigen_real(&e);

    // Each eigenvalue appears twice; within a near-degenerate cluster the
    // embedded vectors map onto complex candidates that are pairwise parallel
    // (the partner of x+iy is i(x+iy)), so Gram-Schmidt keeps exactly half.
    let scale = vals2.iter().fold(1e-300f64, |acc, &v| acc.max(v.abs()));
    let tol = 1e-9 * scale.max(1.0);
    let mut vals = Vec::with_capacity(n);
    let mut kept: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut idx = 0;
    while idx < 2 * n {
        let mut cluster_end = idx + 1;
        while cluster_end < 2 * n && (vals2[cluster_end] - vals2[idx]).abs() <= tol {
            cluster_end += 1;
        }
        let cluster = &vals2[idx..cluster_end];
        let keep = cluster.len() / 2;
        let mut local: Vec<DVector<Complex64>> = Vec::with_capacity(keep);
        for k in idx..cluster_end {
            if local.len() == keep {
                break;
            }
            let col = vecs2.column(k);
            let mut v = DVector::<Complex64>::from_fn(n, |i, _| Complex64::new(col[i], col[i + n]));
            for u in &local {
                let overlap: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut()
                    .zip(u.iter())
                    .for_each(|(vi, ui)| *vi -= overlap * ui);
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.3 {
                v /= Complex64::new(norm, 0.0);
                local.push(v);
            }
        }
        assert_eq!(local.len(), keep, "embedding pair extraction failed");
        for (offset, v) in local.into_iter().enumerate() {
            vals.push(cluster[2 * offset]);
            kept.push(v);
        }
        idx = cluster_end;
    }
    assert_eq!(vals.len(), n, "embedding returned a wrong eigenvalue count");
    let mut vecs = DMatrix::<Complex64>::zeros(n, n);
    for (k, v) in kept.iter().enumerate() {
        vecs.set_column(k, v);
    }
    (vals, vecs)
}

/// Full eigendecomposition of an assembled Hamiltonian.
///
/// Rejects matrices whose relative Hermiticity defect exceeds 1e-12; returns
/// eigenvalues ascending with matching eigenvector columns.
pub fn diagonalize(h: &Hamiltonian) -> Result<SpectrumED, ChainEdError> {
    match &h.matrix {
        HamMatrix::Real(m) => {
            let defect = hermiticity_defect_real(m);
            if defect > 1e-12 {
                return Err(ChainEdError::NotHermitian(defect));
            }
            let (vals, vecs) = sorted_eigen_real(m);
            Ok(SpectrumED {
                eigenvalues: vals,
                basis: EigenBasis::Real(vecs),
                field: h.field,
                spec: h.spec,
                frame: h.frame,
                field_axis: h.field_axis,
            })
        }
        HamMatrix::Complex(m) => {
            let defect = hermiticity_defect_complex(m);
            if defect > 1e-12 {
                return Err(ChainEdError::NotHermitian(defect));
            }
            let (vals, vecs) = complex_eigen_via_embedding(m);
            Ok(SpectrumED {
                eigenvalues: vals,
                basis: EigenBasis::Complex(vecs),
                field: h.field,
                spec: h.spec,
                frame: h.frame,
                field_axis: h.field_axis,
            })
        }
    }
}
