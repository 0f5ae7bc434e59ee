//! Vacuum energies on metric graphs.
//!
//! A free massless scalar field lives on a network of one-dimensional edges
//! glued at nodes. At every node the field is continuous and the outward
//! normal derivatives sum to zero; leaf endpoints carry Dirichlet or Neumann
//! conditions. The spectrum of such a graph is encoded in a secular function
//! `Δ(k)` — either a closed-form sum (`Σ cot`, `Σ tan` for star graphs) or the
//! determinant of the junction-condition matrix — and the regularized
//! zero-point sum `Σ ω_n / 2` follows from a contour integral of `d log Δ`
//! rotated onto the imaginary frequency axis.
//!
//! The crate computes:
//!
//! * closed-form star-graph energies and per-edge forces in 1+1 dimensions
//!   ([`energy::energy_star`], [`energy::force_star`]),
//! * renormalized energies of arbitrary networks from the secular determinant
//!   ([`energy::energy_general`], [`energy::force_general`]),
//! * energies per transverse area and per-edge pressures of star graphs in
//!   higher spacetime dimensions ([`highd`]),
//! * an independent brute-force verification path: real spectral zeros,
//!   normalized eigenmodes, and heat-kernel-regulated mode sums ([`spectrum`]).
//!
//! The core is `no_std` (with `alloc`); IO, file formats, and the command-line
//! front end live in the companion `casimir-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod energy;
pub mod graph;
pub mod highd;
pub mod quad;
pub mod secular;
pub mod special;
pub mod spectrum;

pub(crate) mod math;






