#pragma once

#include "lorgeo/geometry.hpp"

namespace lorgeo {

/// Polynomial in one variable, the expression grammar for warping
/// functions: sums of terms c, c*r^k, r^k, r (e.g. "r^2", "1", "2*r + 1").
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);  // coeffs[k] multiplies r^k
    static Polynomial parse(const std::string& expr);
    static Polynomial constant(double c);

    double operator()(double r) const;
    double deriv(double r) const;
    double deriv2(double r) const;
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::string to_string() const;

private:
    std::vector<double> coeffs_;
};

/// Flat Riemannian base factor: Euclidean R^k or the open half line r > 0.
struct BaseSpace {
    enum class Type { Euclidean, HalfLine };
    Type type = Type::HalfLine;
    int k = 1;

    static BaseSpace euclidean(int k);
    static BaseSpace half_line();
    bool contains(const Vector& l) const;
    Matrix metric() const { return Matrix::Identity(k, k); }
};

/// Warped product L x_w N with metric h + w(l) m; w is evaluated on the
/// first base coordinate and must stay positive.
class WarpedProduct {
public:
    WarpedProduct(BaseSpace base, ModelSpace fiber, Polynomial warp);

    const BaseSpace& base() const { return base_; }
    const ModelSpace& fiber() const { return fiber_; }
    const Polynomial& warp() const { return warp_; }
    double warp_at(const Vector& l) const;

    /// Block metric at (l, n) on base coordinates plus the fiber tangent
    /// basis at n; off-diagonal blocks are exactly zero.
    BilinearForm metric_at(const Vector& l, const Vector& n) const;

private:
    BaseSpace base_;
    ModelSpace fiber_;
    Polynomial warp_;
};

BilinearForm wp_metric_at(const WarpedProduct& wp, const Vector& l, const Vector& n);

/// r u for u on the unit de Sitter quadric; the polar parametrization of
/// the spacelike region {q > 0} of R^{1,n}.
Vector minkowski_polar_map(int n, double r, const Vector& u);

/// Inverse (sqrt(q(x)), x / sqrt(q(x))) on {q > 0}.
std::pair<double, Vector> minkowski_polar_inverse(int n, const Vector& x);

/// Compares the Minkowski metric pulled back through the polar map (by
/// finite-difference Jacobians) against dr^2 + w(r) m_dS at seeded samples;
/// returns the max entrywise error. The warp defaults to r^2, the exact
/// factor; passing another polynomial turns this into a negative control.
double verify_polar_pullback(int n, int samples, std::uint64_t seed,
                             const Polynomial& warp = Polynomial::parse("r^2"));

struct LeafCurvatureResult {
    double k1 = 0.0;
    double k2 = 0.0;
    double fiber_curvature = 0.0;
    double ratio_error = 0.0;
};

/// Constant curvature of the leaves {l1} x N and {l2} x N carrying w(l) m,
/// estimated through the geometry module on the rescaled model space, plus
/// the inverse-ratio residual |K1 w(l1) - K2 w(l2)| / |K_N|.
LeafCurvatureResult leaf_curvature_ratio(const WarpedProduct& wp, const Vector& l1,
                                         const Vector& l2, int samples,
                                         std::uint64_t seed);

struct BlockStructureReport {
    bool off_block_ok = false;
    bool base_independent_ok = false;
    bool fiber_proportional_ok = false;
    double worst_off_block = 0.0;
    double worst_base_dependence = 0.0;
    double worst_fiber_residual = 0.0;
    std::vector<double> recovered_factors;  // one per base-point pair, canonical order
    bool all_ok() const { return off_block_ok && base_independent_ok && fiber_proportional_ok; }
};

/// Checks a list of sampled metrics for warped-product block structure:
/// vanishing off blocks, an L-block independent of the fiber point, and
/// N-blocks proportional across base points with a positive factor that
/// does not depend on the fiber point.
BlockStructureReport verify_block_structure(
    const std::vector<std::pair<Vector, Matrix>>& samples, int base_dims, int fiber_dims,
    double tolerance);

}  // namespace lorgeo
