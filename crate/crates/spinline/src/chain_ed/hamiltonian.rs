//! Dense assembly of the chain Hamiltonian
//!
//!   H = Σ_bonds S_i · J̄ · S_j  −  g μ_B B Σ_i (û · S_i),   S = Pauli,
//!
//! in kelvin units. For a field along a positive coordinate axis the spin
//! frame is rotated (a cyclic axis relabeling) so the Zeeman term becomes
//! −b̄ Σ σ^z and every entry is real; arbitrary tilted axes fall back to a
//! complex Hermitian matrix.

use super::{ChainEdError, ChainSpec};
use crate::constants;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Proper rotation taking the lab frame into the internal frame, restricted
/// to cyclic axis relabelings. `perm[a]` is the internal axis that lab axis
/// `a` maps onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinFrame {
    pub perm: [usize; 3],
}

impl SpinFrame {
    pub const IDENTITY: SpinFrame = SpinFrame { perm: [0, 1, 2] };

    /// Frame whose internal z axis is the given lab coordinate axis.
    fn for_axis(axis: usize) -> SpinFrame {
        match axis {
            0 => SpinFrame { perm: [2, 0, 1] }, // x→z, y→x, z→y
            1 => SpinFrame { perm: [1, 2, 0] }, // x→y, y→z, z→x
            _ => SpinFrame::IDENTITY,
        }
    }

    /// Map a lab-frame vector into the internal frame.
    pub fn to_internal(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for a in 0..3 {
            out[self.perm[a]] = v[a];
        }
        out
    }
}

/// Assembled Hamiltonian plus the frame it was assembled in.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub matrix: HamMatrix,
    pub frame: SpinFrame,
    pub spec: ChainSpec,
    pub field: f64,
    pub field_axis: [f64; 3],
}

#[derive(Debug, Clone)]
pub enum HamMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl HamMatrix {
    pub fn dim(&self) -> usize {
        match self {
            HamMatrix::Real(m) => m.nrows(),
            HamMatrix::Complex(m) => m.nrows(),
        }
    }
}

fn detect_coordinate_axis(axis: [f64; 3]) -> Option<usize> {
    for (k, &c) in axis.iter().enumerate() {
        if (c - 1.0).abs() < 1e-12
            && axis
                .iter()
                .enumerate()
                .all(|(j, &v)| j == k || v.abs() < 1e-12)
        {
            return Some(k);
        }
    }
    None
}

/// Spin-z value (±1) of site `i` in basis state `s` (bit 0 ⇒ ↑).
#[inline]
fn sz(s: usize, i: usize) -> f64 {
    if s & (1 << i) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Build the dense Hamiltonian for `spec` in field `b` (T) along `field_axis`.
///
/// The returned matrix is in kelvin units. Fields along +x̂/+ŷ/+ẑ produce a
/// real symmetric matrix in a rotated spin frame; any other normalized axis
/// produces a complex Hermitian matrix in the lab frame.
pub fn build_hamiltonian(
    spec: &ChainSpec,
    b: f64,
    field_axis: [f64; 3],
) -> Result<Hamiltonian, ChainEdError> {
    spec.validate()?;
    let norm = (field_axis[0].powi(2) + field_axis[1].powi(2) + field_axis[2].powi(2)).sqrt();
    if norm < 1e-12 {
        return Err(ChainEdError::DegenerateAxis);
    }
    let axis = [
        field_axis[0] / norm,
        field_axis[1] / norm,
        field_axis[2] / norm,
    ];

    let b_kelvin = constants::zeeman_energy_kelvin(b, spec.g);
    let d_lab = spec.exchange_diagonal();
    let bonds = spec.bonds();
    let dim = spec.dim();

    // b = 0 removes the only frame-sensitive term.
    let coord = if b == 0.0 {
        Some(2)
    } else {
        detect_coordinate_axis(axis)
    };

    match coord {
        Some(k) => {
            let frame = SpinFrame::for_axis(k);
            // Exchange diagonal expressed on internal axes.
            let mut d = [0.0; 3];
            for a in 0..3 {
                d[frame.perm[a]] = d_lab[a];
            }
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for s in 0..dim {
                let mut diag = 0.0;
                for &(i, j) in &bonds {
                    diag += d[2] * sz(s, i) * sz(s, j);
                    // σ^xσ^x + σ^yσ^y flips both bits.
                    let t = s ^ ((1 << i) | (1 << j));
                    let equal = (s >> i) & 1 == (s >> j) & 1;
                    let amp = if equal { d[0] - d[1] } else { d[0] + d[1] };
                    if amp != 0.0 {
                        h[(t, s)] += amp;
                    }
                }
                for i in 0..spec.n_spins {
                    diag -= b_kelvin * sz(s, i);
                }
                h[(s, s)] += diag;
            }
            Ok(Hamiltonian {
                matrix: HamMatrix::Real(h),
                frame,
                spec: *spec,
                field: b,
                field_axis: axis,
            })
        }
        None => {
            let mut h = DMatrix::<Complex64>::zeros(dim, dim);
            for s in 0..dim {
                let mut diag = 0.0;
                for &(i, j) in &bonds {
                    diag += d_lab[2] * sz(s, i) * sz(s, j);
                    let t = s ^ ((1 << i) | (1 << j));
                    let equal = (s >> i) & 1 == (s >> j) & 1;
                    let amp = if equal {
                        d_lab[0] - d_lab[1]
                    } else {
                        d_lab[0] + d_lab[1]
                    };
                    if amp != 0.0 {
                        h[(t, s)] += Complex64::new(amp, 0.0);
                    }
                }
                for i in 0..spec.n_spins {
                    // −b̄ (u_x σ^x + u_y σ^y + u_z σ^z) on site i.
                    diag -= b_kelvin * axis[2] * sz(s, i);
                    let t = s ^ (1 << i);
                    // σ^x: flip with +1; σ^y: flip with ±i (i on |↑⟩→|↓⟩).
                    let up = (s >> i) & 1 == 0;
                    let sy = if up {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                    h[(t, s)] += -b_kelvin * (Complex64::new(axis[0], 0.0) + axis[1] * sy);
                }
                h[(s, s)] += Complex64::new(diag, 0.0);
            }
            Ok(Hamiltonian {
                matrix: HamMatrix::Complex(h),
                frame: SpinFrame::IDENTITY,
                spec: *spec,
                field: b,
                field_axis: axis,
            })
        }
    }
}
