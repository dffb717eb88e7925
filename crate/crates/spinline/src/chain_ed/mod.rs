//! Finite anisotropic Heisenberg chains: exact diagonalization and the
//! thermodynamic observables built from the full spectrum.
//!
//! Spin operators are Pauli matrices, S_i = (σ_i^x, σ_i^y, σ_i^z), exchange
//! constants are quoted as J/k_B in kelvin, and the exchange tensor is
//! J̄ = diag(J, J(1+ε sin ψ), J(1+ε cos ψ)) in the laboratory frame, with the
//! static field along ŷ by default.
//!
//! In this operator normalization a free spin carries χT = 1 per spin and a
//! free mole of spin-1/2 carries N_A g²μ_B²/4k_B; the factor 4 relative to
//! S = σ/2 conventions is absorbed once, in the emu exporter
//! ([`crate::constants::curie_constant_emu`]).

mod composite;
mod eig;
mod hamiltonian;
pub mod io;
mod powder;
mod thermo;

pub use composite::{composite_susceptibility, dilution_weights, CompositeModel};
pub use eig::diagonalize;
pub use hamiltonian::{build_hamiltonian, HamMatrix, Hamiltonian, SpinFrame};
pub use powder::powder_average_thermo;
pub use thermo::{
    correlator_xx, magnetization, specific_heat, susceptibility, thermo_curve, ThermoPoint,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on chain length: Hilbert dimension 2^n ≤ 1024.
pub const MAX_SPINS: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum ChainEdError {
    #[error("chain must have at least one spin")]
    EmptyChain,
    #[error("n_spins = {0} exceeds the {MAX_SPINS}-spin memory guard")]
    TooManySpins(usize),
    #[error("|epsilon| = {0} is outside the perturbative regime |ε| < 1")]
    AnisotropyOutOfRange(f64),
    #[error("field axis must be a nonzero vector")]
    DegenerateAxis,
    #[error("matrix is not Hermitian: relative asymmetry {0:.3e}")]
    NotHermitian(f64),
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("site index {site} out of range for {n_spins}-spin chain")]
    SiteOutOfRange { site: usize, n_spins: usize },
    #[error("spectrum carries no eigenvectors")]
    MissingEigenvectors,
    #[error("chain-length weights must sum to 1, got {0}")]
    UnnormalizedWeights(f64),
    #[error("radical fraction must lie in (0, 1], got {0}")]
    BadRadicalFraction(f64),
    #[error("temperature grid is empty")]
    EmptyGrid,
    #[error("powder quadrature needs at least 8 nodes, got {0}")]
    TooFewNodes(usize),
}

/// Boundary condition of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Physical dilution-cut chains.
    #[default]
    Open,
    /// Ring closure, for convergence studies.
    Periodic,
}

/// Physical description of one spin chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    /// Number of spins, 1..=10.
    pub n_spins: usize,
    /// Exchange constant J/k_B in kelvin (antiferromagnetic for J > 0).
    pub j: f64,
    /// Dimensionless exchange anisotropy ε, |ε| < 1.
    pub epsilon: f64,
    /// Anisotropy angle ψ in radians.
    pub psi: f64,
    /// g-factor.
    pub g: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(n_spins: usize, j: f64) -> Self {
        ChainSpec {
            n_spins,
            j,
            epsilon: 0.0,
            psi: 0.0,
            g: crate::constants::G_S,
            boundary: Boundary::Open,
        }
    }

    pub fn validate(&self) -> Result<(), ChainEdError> {
        if self.n_spins == 0 {
            return Err(ChainEdError::EmptyChain);
        }
        if self.n_spins > MAX_SPINS {
            return Err(ChainEdError::TooManySpins(self.n_spins));
        }
        if self.epsilon.abs() >= 1.0 {
            return Err(ChainEdError::AnisotropyOutOfRange(self.epsilon.abs()));
        }
        Ok(())
    }

    /// Diagonal of the exchange tensor (J_xx, J_yy, J_zz) in the lab frame.
    pub fn exchange_diagonal(&self) -> [f64; 3] {
        [
            self.j,
            self.j * (1.0 + self.epsilon * self.psi.sin()),
            self.j * (1.0 + self.epsilon * self.psi.cos()),
        ]
    }

    /// Nearest-neighbour bonds under the boundary condition.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_spins;
        let mut bonds: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic && n > 2 {
            bonds.push((n - 1, 0));
        }
        bonds
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_spins
    }
}

/// Eigenbasis storage; real whenever the Hamiltonian could be assembled as a
/// real symmetric matrix (any coordinate-axis field), complex otherwise.
#[derive(Debug, Clone)]
pub enum EigenBasis {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Full eigendecomposition of a chain Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectrumED {
    /// Energies in kelvin, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors, column k for eigenvalue k, in the internal spin frame.
    pub basis: EigenBasis,
    /// Applied field in tesla.
    pub field: f64,
    /// The generating chain description.
    pub spec: ChainSpec,
    /// Lab→internal axis map used during assembly.
    pub frame: SpinFrame,
    /// Field direction in the lab frame.
    pub field_axis: [f64; 3],
}

impl SpectrumED {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ground-state energy (K).
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Boltzmann weights shifted by the ground state, plus their sum.
    pub(crate) fn shifted_weights(&self, beta: f64) -> (Vec<f64>, f64) {
        let e0 = self.ground_energy();
        let w: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&e| (-(beta * (e - e0))).exp())
            .collect();
        let z = w.iter().sum();
        (w, z)
    }
}

pub(crate) fn real_column(m: &DMatrix<f64>, k: usize) -> DVector<f64> {
    m.column(k).into_owned()
}

/// Spin-z value (±1) of site `i` in basis state `s` (bit 0 ⇒ ↑).
#[inline]
pub(crate) fn sz_value(s: usize, i: usize) -> f64 {
    if s & (1 << i) == 0 {
        1.0
    } else {
        -1.0
    }
}
