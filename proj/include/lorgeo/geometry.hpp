#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "lorgeo/pseudo_linalg.hpp"

namespace lorgeo {

enum class SpaceKind { Minkowski, DeSitter, AntiDeSitter, Quadric };

std::string to_string(SpaceKind k);

/// Model Lorentz space: flat Minkowski R^{1,n}, or a level quadric
/// {q(x) = level} of a flat pseudo-Euclidean ambient space (de Sitter,
/// anti-de Sitter, or a user quadric with nonzero level).
class ModelSpace {
public:
    static ModelSpace minkowski(int n);
    static ModelSpace de_sitter(int n, double radius);
    static ModelSpace anti_de_sitter(int n, double radius);
    static ModelSpace quadric(BilinearForm form, double level);

    SpaceKind kind() const { return kind_; }
    const BilinearForm& ambient_form() const { return form_; }
    double level() const { return level_; }
    int ambient_dim() const { return form_.dim(); }
    int dim() const { return flat() ? form_.dim() : form_.dim() - 1; }
    bool flat() const { return kind_ == SpaceKind::Minkowski; }

    bool contains(const Vector& x, double tol = tol::eps_on_space) const;
    void require_on_space(const Vector& x) const;  // throws PointOffSpace
    bool is_tangent(const Vector& x, const Vector& v, double tol = 1e-8) const;

private:
    ModelSpace(SpaceKind kind, BilinearForm form, double level);
    SpaceKind kind_;
    BilinearForm form_;
    double level_;
};

struct TangentVector {
    Vector base;
    Vector v;
};

/// Basis of the tangent space at x (columns): the full ambient basis for
/// Minkowski, the orthogonal of x for a quadric.
Matrix tangent_basis(const ModelSpace& space, const Vector& x);

/// Gram matrix of the ambient form on tangent_basis(space, x).
BilinearForm metric_at(const ModelSpace& space, const Vector& x);

/// Geodesic through x with initial velocity v, in closed form: straight
/// lines on Minkowski, trig/hyperbolic combinations on quadrics, straight
/// lightlike lines when q(v,v) = 0.
Vector geodesic(const ModelSpace& space, const Vector& x, const Vector& v, double t);

// --- charts and the numeric route -------------------------------------------

/// Scaling chart of a model space around x0: y in R^dim maps to the radial
/// projection of x0 + frame*y onto the quadric (identity chart on
/// Minkowski). Metric and Jacobian are analytic.
class GraphChart {
public:
    GraphChart(ModelSpace space, Vector x0);

    int dim() const { return static_cast<int>(frame_.cols()); }
    const Matrix& frame() const { return frame_; }
    Vector embed(const Vector& y) const;
    Matrix jacobian(const Vector& y) const;
    Matrix metric(const Vector& y) const;
    Vector chart_coords_of_tangent(const Vector& v) const;

private:
    ModelSpace space_;
    Vector x0_;
    Matrix frame_;
};

using MetricField = std::function<Matrix(const Vector&)>;

/// Christoffel symbols of a coordinate metric by central differences;
/// gamma[k](i,j) = Gamma^k_ij.
std::vector<Matrix> christoffel_fd(const MetricField& g, const Vector& y,
                                   double h = tol::fd_step);

/// Adaptive RK4 integration of the geodesic equation of a coordinate
/// metric. Returns the endpoint coordinates.
Vector integrate_geodesic(const MetricField& g, const Vector& y0, const Vector& v0,
                          double t, double local_err = tol::ode_local_error);

/// Numeric counterpart of geodesic(): integrates the geodesic equation in
/// the scaling chart at x. Valid while the geodesic stays inside the chart.
Vector geodesic_numeric(const ModelSpace& space, const Vector& x, const Vector& v,
                        double t);

// --- curvature -----------------------------------------------------------------

/// Sectional curvature of the plane span{u,v} at x, via the Gauss equation
/// of the level quadric (exact route). Throws DegeneratePlane when the
/// plane is degenerate at eps_plane.
double sectional_curvature(const ModelSpace& space, const Vector& x, const Vector& u,
                           const Vector& v);

/// Independent finite-difference route: Christoffels and their derivatives
/// in the scaling chart.
double sectional_curvature_fd(const ModelSpace& space, const Vector& x, const Vector& u,
                              const Vector& v);

struct CurvatureEstimate {
    double kappa_hat = 0.0;
    double max_dev = 0.0;
};

CurvatureEstimate constant_curvature_estimate(const ModelSpace& space, int samples,
                                              std::uint64_t seed);

// --- sampling helpers (seeded, deterministic) ------------------------------------

/// Radial projection of z onto the quadric; rejects near-lightcone draws
/// whose projections land far out and ruin conditioning.
std::optional<Vector> scale_to_quadric(const ModelSpace& space, const Vector& z);

Vector random_point(const ModelSpace& space, std::uint64_t seed, std::uint64_t index);
Vector random_tangent(const ModelSpace& space, const Vector& x, std::mt19937_64& rng);

// --- totally geodesic hypersurfaces ----------------------------------------------

/// Candidate hypersurface given as a parametrized patch c in R^k -> point.
/// Rays are shot from patch points, tangent to the patch, and their
/// distance to the patch is measured by a two-level grid search polished
/// with Gauss-Newton.
bool is_patch_totally_geodesic(const ModelSpace& space,
                               const std::function<Vector(const Vector&)>& patch,
                               int patch_dim, int n_rays, double t_max, double tolerance,
                               double scale);

/// Candidate given implicitly as exp_x(hyperplane) for a codimension-one
/// subspace of the tangent space at x.
bool is_totally_geodesic(const ModelSpace& space, const Vector& x,
                         const Subspace& hyperplane, int n_rays, double t_max,
                         double tolerance);

}  // namespace lorgeo
