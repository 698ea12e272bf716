#pragma once

// Default numeric thresholds. Everything here assumes desk-scale problems:
// dimensions at most ~20 and matrices that stay well conditioned, so
// absolute thresholds are adequate.

namespace lorgeo::tol {

inline constexpr double eps_rank = 1e-9;        // eigen/singular-value null cutoff
inline constexpr double eps_causal = 1e-9;      // causal classification of q(v,v)
inline constexpr double eps_jacobi = 1e-9;      // Jacobi identity residual
inline constexpr double eps_rep = 1e-8;         // homomorphism residual of a matrix rep
inline constexpr double eps_skew = 1e-9;        // skewness w.r.t. an ambient form
inline constexpr double eps_nilp = 1e-8;        // ad-nilpotency residual
inline constexpr double eps_abelian = 1e-10;    // Cartan commutativity
inline constexpr double eps_root_cluster = 1e-6;  // identify two root value vectors
inline constexpr double eps_root_sign = 1e-9;   // sign of alpha(t) at |t| = 1
inline constexpr double eps_plane = 1e-8;       // nondegeneracy of a tangent 2-plane
inline constexpr double eps_on_space = 1e-9;    // |q(x) - level| for quadric membership
inline constexpr double fd_step = 1e-5;         // central differences for Christoffels
inline constexpr double fd_step_riemann = 1e-3; // outer derivative of Christoffels
inline constexpr double ode_local_error = 1e-10;  // adaptive RK4 target per step

}  // namespace lorgeo::tol
