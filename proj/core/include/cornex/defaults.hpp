#pragma once

/// Every physical default and tolerance used by the library and the CLI.

namespace cornex::defaults {

// geometry
inline constexpr double local_radius = 0.5;
inline constexpr double derivative_check_step = 1e-4;
inline constexpr double derivative_check_tol = 1e-5;
inline constexpr double chart_roundtrip_tol = 1e-12;

// grids: corner axes span [-L, L] with L = box_factor * local_radius
inline constexpr double box_factor = 4.0;
/// Tangential axes only need to hold the support of the cutoff.
inline constexpr double tangential_box_factor = 1.25;
inline constexpr int corner_nodes = 64;
inline constexpr int tangential_nodes = 32;

// expansion
inline constexpr int depth = 3;
inline constexpr double trace_tol = 1e-8;
inline constexpr double oddness_tol = 1e-10;
inline constexpr double tail_exponent_cap = 40.0;
inline constexpr int tail_samples = 12;
/// Requested tangential smoothness order for structural checks.
inline constexpr double tangential_order = 2.0;

// singular basis and Fourier identity
inline constexpr double ode_residual_tol = 1e-10;
inline constexpr double ode_exclusion_radius = 1e-3;
inline constexpr double quadrature_tol = 1e-13;
inline constexpr int quadrature_depth = 15;
inline constexpr double ft_stability_tol = 0.01;
inline constexpr double ft_residual_tol = 1e-2;
inline constexpr double smooth_variation_tol = 0.1;
inline constexpr double smooth_floor_ratio = 1e-2;
inline constexpr int smooth_order = 4;
/// Orders certified for the discarded cutoff difference; plane ringing dominates above.
inline constexpr int cutoff_factor_order = 2;

// matcher
inline constexpr double ibp_reconstruction_tol = 1e-8;
inline constexpr double coefficient_stability_tol = 0.02;
inline constexpr double imaginary_ratio_tol = 1e-6;

// oracle
inline constexpr int mode_cap = 400;
/// Modes summed by the uniform-data resolvent form, chosen adaptively per point.
inline constexpr int resolvent_mode_cap = 40000;
inline constexpr double cauchy_tol = 1e-6;
inline constexpr double log_signature_sigmas = 5.0;
inline constexpr double fit_window_lo = 0.02;
inline constexpr double fit_window_hi = 0.05;
inline constexpr double fit_window_alt_lo = 0.04;
inline constexpr double fit_window_alt_hi = 0.1;
inline constexpr double agreement_tol = 0.05;
inline constexpr double subtraction_gain = 10.0;

}  // namespace cornex::defaults
