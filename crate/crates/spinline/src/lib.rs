//! Simulation and data-analysis toolkit for microwave transmission through a
//! one-dimensional waveguide coupled to an ensemble of spin-1/2
//! antiferromagnetic chains.
//!
//! The crate covers three regimes of the spin-photon problem and the analysis
//! pipeline that connects them to measured scattering data:
//!
//! * [`chain_ed`] — finite anisotropic Heisenberg chains, diagonalized exactly,
//!   with specific heat, susceptibility, magnetization and spin correlators,
//!   including powder and chain-length-mixture averages.
//! * [`meanfield`] — two-sublattice Bogolyubov mean-field equilibria, phase
//!   classification (paramagnetic / spin-flop / antiferromagnetic), critical
//!   fields and phase diagrams.
//! * [`llg`] — linearized Landau-Lifshitz-Gilbert dynamics about a mean-field
//!   equilibrium and the complex resonance frequencies it yields.
//! * [`transmission`] — complex S21/S11 spectra from input-output theory:
//!   single spin, transfer-matrix ensembles, the paramagnetic collective line
//!   shape, and the powder-averaged spin-wave line shape.
//! * [`fitfmt`] — background normalization of raw sweeps, complex least-squares
//!   resonance fits, line metrics, and the tanh-law fit of the collective
//!   coupling.
//!
//! Internal conventions: energies in kelvin (E/k_B), angular frequencies
//! internally, linear frequencies (Hz or GHz) on every external surface,
//! fields in tesla, temperatures in kelvin. Spin operators are Pauli matrices.

pub mod chain_ed;
pub mod constants;
pub mod fitfmt;
pub mod llg;
pub mod meanfield;
pub mod quadrature;
pub mod transmission;

pub use constants::{PhysicalConstants, UnitPolicy};
pub use num_complex::Complex64;
