#pragma once

namespace ctoqw {

// Central tolerance record. Every floating-point decision in the library
// reads its epsilon from one of these fields, so a caller can tighten or
// loosen the whole stack in one place (the CLI exposes them as --tol-*).
struct Tolerances {
    double hermiticity       = 1e-10;  // ||a - a^dag||_max for Hermitian checks
    double trace             = 1e-10;  // |tr rho - 1|
    double positivity        = 1e-10;  // min eigenvalue >= -positivity
    double trajectory_positivity = 1e-8;   // looser bound for evolved samples
    double rank_rel          = 1e-9;   // sigma < rank_rel * sigma_max counts as zero
    double sum_identity      = 1e-12;  // ||sum B^dag B - I||_max
    double doubly_stochastic = 1e-12;  // row sums of the transition matrix
    double residual          = 1e-10;  // ||generator(rho_inf)||_max
    double eigenvalue_group  = 1e-9;   // spectral clustering for degenerate CTQW spectra
    double mixed_state_match = 1e-9;   // ||rho_inf - I/n||_max for the maximally-mixed label
    double rk_rel            = 1e-10;  // adaptive integrator relative tolerance
    double rk_abs            = 1e-12;  // adaptive integrator absolute tolerance
};

}  // namespace ctoqw
