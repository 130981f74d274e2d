#pragma once

// Module defaults. The harness copies these into its tolerance table, where a
// config file may override them per check.
namespace qdiv::tol {

// core-linalg
inline constexpr double support_relative = 1e-12;
inline constexpr double psd_clip_relative = 1e-10;
inline constexpr double hermitian_defect = 1e-12;
inline constexpr double factor_solve = 1e-9;
inline constexpr double polar_residual = 1e-10;

// quantum-objects
inline constexpr double unit_trace = 1e-10;
inline constexpr double completeness = 1e-9;
inline constexpr double traceless = 1e-10;
inline constexpr double probability_clip = 1e-12;

// divergences
inline constexpr double support_containment = 1e-10;
inline constexpr double fidelity_zero = 1e-12;

// monotone-metrics
inline constexpr double series_switch = 1e-6;
inline constexpr double quadrature_converged = 1e-8;
inline constexpr int quadrature_nodes = 64;
inline constexpr int quadrature_node_cap = 1024;

// reverse-test
inline constexpr double reconstruction = 1e-9;
inline constexpr double frame_gram = 1e-10;

// asymptotics
inline constexpr double np_zero_relative = 1e-13;
inline constexpr double grid_step = 1e-3;
inline constexpr int grid_stride = 50;
inline constexpr double grid_margin = 0.05;
inline constexpr double smoothing_psd = 1e-9;
inline constexpr double smoothing_bound_slack = 1e-6;

}  // namespace qdiv::tol
