#include "lorgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lorgeo/errors.hpp"
#include "lorgeo/rng.hpp"

namespace lorgeo {

std::string to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::Minkowski: return "minkowski";
        case SpaceKind::DeSitter: return "de_sitter";
        case SpaceKind::AntiDeSitter: return "anti_de_sitter";
        case SpaceKind::Quadric: return "quadric";
    }
    return "?";
}

ModelSpace::ModelSpace(SpaceKind kind, BilinearForm form, double level)
    : kind_(kind), form_(std::move(form)), level_(level) {}

ModelSpace ModelSpace::minkowski(int n) {
    if (n < 1) throw ShapeError("minkowski needs n >= 1");
    return ModelSpace(SpaceKind::Minkowski, BilinearForm::minkowski(n), 0.0);
}

ModelSpace ModelSpace::de_sitter(int n, double radius) {
    if (n < 2) throw ShapeError("de Sitter needs n >= 2");
    if (radius <= 0.0) throw NonPositiveRadius("de Sitter radius must be positive");
    return ModelSpace(SpaceKind::DeSitter, BilinearForm::minkowski(n), radius * radius);
}

ModelSpace ModelSpace::anti_de_sitter(int n, double radius) {
    if (n < 2) throw ShapeError("anti-de Sitter needs n >= 2");
    if (radius <= 0.0) throw NonPositiveRadius("anti-de Sitter radius must be positive");
    Vector d = Vector::Ones(n + 1);
    d(0) = -1.0;
    d(1) = -1.0;
    return ModelSpace(SpaceKind::AntiDeSitter, BilinearForm::diagonal(d), -radius * radius);
}

ModelSpace ModelSpace::quadric(BilinearForm form, double level) {
    if (std::abs(level) < 1e-12)
        throw ShapeError("quadric level must be nonzero (the cone is not a model space)");
    return ModelSpace(SpaceKind::Quadric, std::move(form), level);
}

bool ModelSpace::contains(const Vector& x, double tol) const {
    if (x.size() != ambient_dim()) return false;
    if (flat()) return true;
    return std::abs(form_(x, x) - level_) <= tol * std::max(1.0, std::abs(level_));
}

void ModelSpace::require_on_space(const Vector& x) const {
    if (!contains(x)) throw PointOffSpace("point does not satisfy the quadric equation");
}

bool ModelSpace::is_tangent(const Vector& x, const Vector& v, double tol) const {
    if (flat()) return v.size() == ambient_dim();
    return std::abs(form_(x, v)) <= tol * std::max(1.0, v.norm() * x.norm());
}

Matrix tangent_basis(const ModelSpace& space, const Vector& x) {
    space.require_on_space(x);
    if (space.flat()) return Matrix::Identity(space.ambient_dim(), space.ambient_dim());
    Matrix row = (space.ambient_form().matrix() * x).transpose();
    return linalg::kernel_basis(row, tol::eps_rank * std::max(1.0, x.norm()));
}

BilinearForm metric_at(const ModelSpace& space, const Vector& x) {
    Matrix b = tangent_basis(space, x);
    return restrict_form(space.ambient_form(), Subspace(space.ambient_dim(), b));
}

Vector geodesic(const ModelSpace& space, const Vector& x, const Vector& v, double t) {
    space.require_on_space(x);
    if (space.flat()) return x + t * v;
    if (!space.is_tangent(x, v)) throw NotTangent("geodesic velocity is not tangent");
    double c = space.ambient_form()(v, v);
    double k = c / space.level();
    if (std::abs(c) <= tol::eps_causal) return x + t * v;  // lightlike lines lie on the quadric
    if (k > 0) {
        double w = std::sqrt(k);
        return x * std::cos(w * t) + v * (std::sin(w * t) / w);
    }
    double w = std::sqrt(-k);
    return x * std::cosh(w * t) + v * (std::sinh(w * t) / w);
}

// --- charts ----------------------------------------------------------------------

GraphChart::GraphChart(ModelSpace space, Vector x0)
    : space_(std::move(space)), x0_(std::move(x0)) {
    space_.require_on_space(x0_);
    frame_ = tangent_basis(space_, x0_);
}

Vector GraphChart::embed(const Vector& y) const {
    if (space_.flat()) return x0_ + frame_ * y;
    Vector z = x0_ + frame_ * y;
    double u = space_.ambient_form()(z, z);
    if (u * space_.level() <= 0.0)
        throw Error("scaling chart evaluated outside its domain");
    return z * std::sqrt(space_.level() / u);
}

Matrix GraphChart::jacobian(const Vector& y) const {
    if (space_.flat()) return frame_;
    Vector z = x0_ + frame_ * y;
    double u = space_.ambient_form()(z, z);
    if (u * space_.level() <= 0.0)
        throw Error("scaling chart evaluated outside its domain");
    double s = std::sqrt(space_.level() / u);
    Matrix j(space_.ambient_dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        double zi = space_.ambient_form()(z, frame_.col(i));
        j.col(i) = s * (frame_.col(i) - (zi / u) * z);
    }
    return j;
}

Matrix GraphChart::metric(const Vector& y) const {
    if (space_.flat())
        return frame_.transpose() * space_.ambient_form().matrix() * frame_;
    Vector z = x0_ + frame_ * y;
    double u = space_.ambient_form()(z, z);
    if (u * space_.level() <= 0.0)
        throw Error("scaling chart evaluated outside its domain");
    double s2 = space_.level() / u;
    Matrix g(dim(), dim());
    Vector zb(dim());
    for (int i = 0; i < dim(); ++i) zb(i) = space_.ambient_form()(z, frame_.col(i));
    for (int i = 0; i < dim(); ++i)
        for (int j = i; j < dim(); ++j) {
            double val = s2 * (space_.ambient_form()(frame_.col(i), frame_.col(j)) -
                               zb(i) * zb(j) / u);
            g(i, j) = val;
            g(j, i) = val;
        }
    return g;
}

Vector GraphChart::chart_coords_of_tangent(const Vector& v) const {
    return frame_.colPivHouseholderQr().solve(v);
}

std::vector<Matrix> christoffel_fd(const MetricField& g, const Vector& y, double h) {
    const int n = static_cast<int>(y.size());
    Matrix g0 = g(y);
    Matrix ginv = g0.inverse();
    std::vector<Matrix> dg(static_cast<size_t>(n));  // dg[l] = d g / d y_l
    for (int l = 0; l < n; ++l) {
        Vector yp = y, ym = y;
        yp(l) += h;
        ym(l) -= h;
        dg[static_cast<size_t>(l)] = (g(yp) - g(ym)) / (2.0 * h);
    }
    std::vector<Matrix> gamma(static_cast<size_t>(n), Matrix::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l)
                    sum += ginv(k, l) * (dg[static_cast<size_t>(i)](j, l) +
                                         dg[static_cast<size_t>(j)](i, l) -
                                         dg[static_cast<size_t>(l)](i, j));
                gamma[static_cast<size_t>(k)](i, j) = 0.5 * sum;
                gamma[static_cast<size_t>(k)](j, i) = 0.5 * sum;
            }
    return gamma;
}

namespace {

struct GeodesicState {
    Vector y;
    Vector v;
};

GeodesicState rhs(const MetricField& g, const GeodesicState& s) {
    auto gamma = christoffel_fd(g, s.y);
    const int n = static_cast<int>(s.y.size());
    Vector acc(n);
    for (int k = 0; k < n; ++k) acc(k) = -s.v.dot(gamma[static_cast<size_t>(k)] * s.v);
    return {s.v, acc};
}

GeodesicState rk4_step(const MetricField& g, const GeodesicState& s, double dt) {
    auto add = [](const GeodesicState& a, const GeodesicState& b, double f) {
        return GeodesicState{a.y + f * b.y, a.v + f * b.v};
    };
    GeodesicState k1 = rhs(g, s);
    GeodesicState k2 = rhs(g, add(s, k1, dt / 2));
    GeodesicState k3 = rhs(g, add(s, k2, dt / 2));
    GeodesicState k4 = rhs(g, add(s, k3, dt));
    return GeodesicState{
        s.y + dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
        s.v + dt / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

}  // namespace

Vector integrate_geodesic(const MetricField& g, const Vector& y0, const Vector& v0,
                          double t, double local_err) {
    GeodesicState s{y0, v0};
    double remaining = t;
    double sign = remaining >= 0 ? 1.0 : -1.0;
    remaining = std::abs(remaining);
    if (remaining == 0.0) return y0;
    double dt = remaining / 16.0;
    int guard = 0;
    while (remaining > 1e-14) {
        if (++guard > 100000) throw Error("geodesic integration did not converge");
        double step = std::min(dt, remaining);
        GeodesicState full = rk4_step(g, s, sign * step);
        GeodesicState half = rk4_step(g, s, sign * step / 2);
        half = rk4_step(g, half, sign * step / 2);
        double err = std::max((full.y - half.y).cwiseAbs().maxCoeff(),
                              (full.v - half.v).cwiseAbs().maxCoeff()) /
                     15.0;
        if (err <= local_err || step < 1e-10) {
            s = half;
            remaining -= step;
            if (err > 0)
                dt = step * std::clamp(0.9 * std::pow(local_err / err, 0.2), 0.1, 5.0);
            else
                dt = step * 5.0;
        } else {
            dt = step * std::clamp(0.9 * std::pow(local_err / err, 0.2), 0.1, 1.0);
        }
    }
    return s.y;
}

Vector geodesic_numeric(const ModelSpace& space, const Vector& x, const Vector& v,
                        double t) {
    GraphChart chart(space, x);
    MetricField g = [&chart](const Vector& y) { return chart.metric(y); };
    Vector vy = chart.chart_coords_of_tangent(v);
    Vector y_end = integrate_geodesic(g, Vector::Zero(chart.dim()), vy, t);
    return chart.embed(y_end);
}

// --- curvature ---------------------------------------------------------------------

namespace {

double plane_denominator(const BilinearForm& q, const Vector& u, const Vector& v) {
    return q(u, u) * q(v, v) - q(u, v) * q(u, v);
}

void check_plane(const ModelSpace& space, const Vector& x, Vector& u, Vector& v) {
    space.require_on_space(x);
    if (!space.flat()) {
        if (!space.is_tangent(x, u) || !space.is_tangent(x, v))
            throw NotTangent("plane vectors must be tangent at x");
    }
    if (u.norm() == 0.0 || v.norm() == 0.0) throw DegeneratePlane("zero plane vector");
    u = u / u.norm();
    v = v / v.norm();
    double denom = plane_denominator(space.ambient_form(), u, v);
    if (std::abs(denom) <= tol::eps_plane)
        throw DegeneratePlane("sectional curvature undefined on a degenerate plane");
}

}  // namespace

double sectional_curvature(const ModelSpace& space, const Vector& x, const Vector& u_in,
                           const Vector& v_in) {
    Vector u = u_in, v = v_in;
    check_plane(space, x, u, v);
    if (space.flat()) return 0.0;
    const BilinearForm& q = space.ambient_form();
    double kappa = 1.0 / space.level();
    // Gauss equation of the level quadric: R(u,v)w = kappa (q(v,w) u - q(u,w) v)
    Vector r = kappa * (q(v, v) * u - q(u, v) * v);
    return q(r, u) / plane_denominator(q, u, v);
}

double sectional_curvature_fd(const ModelSpace& space, const Vector& x, const Vector& u_in,
                              const Vector& v_in) {
    Vector u = u_in, v = v_in;
    check_plane(space, x, u, v);
    GraphChart chart(space, x);
    MetricField g = [&chart](const Vector& y) { return chart.metric(y); };
    const int n = chart.dim();
    Vector uc = chart.chart_coords_of_tangent(u);
    Vector vc = chart.chart_coords_of_tangent(v);

    Vector y0 = Vector::Zero(n);
    auto gamma0 = christoffel_fd(g, y0);
    const double h = tol::fd_step_riemann;
    // central differences of the Christoffels, Richardson-extrapolated to
    // remove the h^2 truncation term
    auto dgamma_at = [&](int l, double step) {
        Vector yp = y0, ym = y0;
        yp(l) += step;
        ym(l) -= step;
        auto gp = christoffel_fd(g, yp);
        auto gm = christoffel_fd(g, ym);
        std::vector<Matrix> out(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            out[static_cast<size_t>(k)] =
                (gp[static_cast<size_t>(k)] - gm[static_cast<size_t>(k)]) / (2.0 * step);
        return out;
    };
    std::vector<std::vector<Matrix>> dgamma(static_cast<size_t>(n));
    for (int l = 0; l < n; ++l) {
        auto coarse = dgamma_at(l, h);
        auto fine = dgamma_at(l, h / 2.0);
        dgamma[static_cast<size_t>(l)].resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            dgamma[static_cast<size_t>(l)][static_cast<size_t>(k)] =
                (4.0 * fine[static_cast<size_t>(k)] - coarse[static_cast<size_t>(k)]) / 3.0;
    }

    // w^l = u^i v^j v^k R^l_{kij}, with
    // R(e_i, e_j) e_k = (d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik) e_l
    Vector w = Vector::Zero(n);
    for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double term = dgamma[static_cast<size_t>(i)][static_cast<size_t>(l)](j, k) -
                                  dgamma[static_cast<size_t>(j)][static_cast<size_t>(l)](i, k);
                    for (int m = 0; m < n; ++m)
                        term += gamma0[static_cast<size_t>(l)](i, m) *
                                    gamma0[static_cast<size_t>(m)](j, k) -
                                gamma0[static_cast<size_t>(l)](j, m) *
                                    gamma0[static_cast<size_t>(m)](i, k);
                    sum += uc(i) * vc(j) * vc(k) * term;
                }
        w(l) = sum;
    }
    Matrix g0 = chart.metric(y0);
    double numer = w.dot(g0 * uc);
    double denom = (uc.dot(g0 * uc)) * (vc.dot(g0 * vc)) -
                   (uc.dot(g0 * vc)) * (uc.dot(g0 * vc));
    return numer / denom;
}

// --- sampling --------------------------------------------------------------------

std::optional<Vector> scale_to_quadric(const ModelSpace& space, const Vector& z) {
    double u = space.ambient_form()(z, z);
    // near-lightcone draws scale to far-out points and ruin conditioning
    if (u * space.level() <= 0.0 || std::abs(u) < 0.25 * z.squaredNorm())
        return std::nullopt;
    return z * std::sqrt(space.level() / u);
}

Vector random_point(const ModelSpace& space, std::uint64_t seed, std::uint64_t index) {
    auto rng = engine_for(seed, index);
    const int m = space.ambient_dim();
    if (space.flat()) return gaussian_vector(rng, m);
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto x = scale_to_quadric(space, gaussian_vector(rng, m));
        if (x) return *x;
    }
    throw SamplingFailure("could not draw a point on the quadric");
}

Vector random_tangent(const ModelSpace& space, const Vector& x, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vector v = gaussian_vector(rng, space.ambient_dim());
        if (space.flat()) return v;
        double zx = space.ambient_form()(x, v);
        Vector projected = v - (zx / space.level()) * x;
        if (projected.norm() > 1e-8 * v.norm()) return projected;
    }
    throw SamplingFailure("could not draw a tangent vector");
}

CurvatureEstimate constant_curvature_estimate(const ModelSpace& space, int samples,
                                              std::uint64_t seed) {
    if (samples < 1) throw ShapeError("need at least one sample");
    std::vector<double> values;
    values.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        auto rng = engine_for(seed, static_cast<std::uint64_t>(i));
        bool done = false;
        for (int attempt = 0; attempt < 100 && !done; ++attempt) {
            Vector x;
            if (space.flat()) {
                x = gaussian_vector(rng, space.ambient_dim());
            } else {
                auto scaled = scale_to_quadric(space, gaussian_vector(rng, space.ambient_dim()));
                if (!scaled) continue;
                x = *scaled;
            }
            Vector u_vec = random_tangent(space, x, rng);
            Vector v_vec = random_tangent(space, x, rng);
            try {
                values.push_back(sectional_curvature(space, x, u_vec, v_vec));
                done = true;
            } catch (const DegeneratePlane&) {
                // redraw
            }
        }
        if (!done) throw SamplingFailure("degenerate draws exceeded the retry budget");
    }
    double mean = 0.0;
    for (double k : values) mean += k;
    mean /= static_cast<double>(values.size());
    double dev = 0.0;
    for (double k : values) dev = std::max(dev, std::abs(k - mean));
    return {mean, dev};
}

// --- totally geodesic test ----------------------------------------------------------

namespace {

// deterministic direction set on the unit sphere of R^k
std::vector<Vector> sphere_directions(int k, int count) {
    std::vector<Vector> out;
    if (k == 1) {
        for (int i = 0; i < count; ++i) out.push_back((i % 2 == 0 ? 1.0 : -1.0) * Vector::Ones(1));
        return out;
    }
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        if (k == 2) {
            double th = golden * (i + 1);
            Vector v(2);
            v << std::cos(th), std::sin(th);
            out.push_back(v);
        } else {
            double z = 1.0 - 2.0 * (i + 0.5) / count;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = golden * (i + 1);
            Vector v(3);
            v << r * std::cos(th), r * std::sin(th), z;
            out.push_back(v);
        }
    }
    return out;
}

struct PatchDistance {
    const std::function<Vector(const Vector&)>& patch;
    int k;
    double radius;

    double operator()(const Vector& z) const {
        // level 1: coarse grid over the coefficient ball
        const int per_axis = 9;
        Vector best = Vector::Zero(k);
        double best_d = std::numeric_limits<double>::infinity();
        std::vector<int> idx(static_cast<size_t>(k), 0);
        while (true) {
            Vector c(k);
            for (int i = 0; i < k; ++i)
                c(i) = radius * (2.0 * idx[static_cast<size_t>(i)] / (per_axis - 1) - 1.0);
            double d = (patch(c) - z).norm();
            if (d < best_d) { best_d = d; best = c; }
            int pos = 0;
            while (pos < k && ++idx[static_cast<size_t>(pos)] == per_axis) {
                idx[static_cast<size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == k) break;
        }
        // level 2: refined grid around the best coarse node
        double spacing = 2.0 * radius / (per_axis - 1);
        const int refine = 5;
        Vector seed = best;
        for (int a = 0; a < static_cast<int>(std::pow(refine, k)); ++a) {
            Vector c = seed;
            int rem = a;
            for (int i = 0; i < k; ++i) {
                c(i) += spacing * ((rem % refine) - refine / 2) / (refine - 1);
                rem /= refine;
            }
            double d = (patch(c) - z).norm();
            if (d < best_d) { best_d = d; best = c; }
        }
        // Gauss-Newton polish on |patch(c) - z|^2
        const double h = 1e-6;
        Vector c = best;
        for (int it = 0; it < 12; ++it) {
            Vector r = patch(c) - z;
            Matrix j(r.size(), k);
            for (int i = 0; i < k; ++i) {
                Vector cp = c, cm = c;
                cp(i) += h;
                cm(i) -= h;
                j.col(i) = (patch(cp) - patch(cm)) / (2.0 * h);
            }
            Vector step = (j.transpose() * j)
                              .ldlt()
                              .solve(-(j.transpose() * r));
            if (!step.allFinite()) break;
            double limit = 0.5 * radius;
            if (step.norm() > limit) step *= limit / step.norm();
            Vector cn = c + step;
            if ((patch(cn) - z).norm() < (patch(c) - z).norm())
                c = cn;
            else
                break;
        }
        return std::min(best_d, (patch(c) - z).norm());
    }
};

}  // namespace

bool is_patch_totally_geodesic(const ModelSpace& space,
                               const std::function<Vector(const Vector&)>& patch,
                               int patch_dim, int n_rays, double t_max, double tolerance,
                               double scale) {
    PatchDistance distance{patch, patch_dim, t_max};
    auto starts = sphere_directions(patch_dim, n_rays);
    double worst = 0.0;
    const double h = 1e-5;
    int ray_index = 0;
    for (const Vector& dir : starts) {
        Vector c0 = 0.3 * t_max * dir;
        Vector p = patch(c0);
        // ray velocity tangent to the patch (central differences), direction
        // rotated deterministically over the rays
        Vector u = sphere_directions(patch_dim, n_rays)[static_cast<size_t>(
            (ray_index + n_rays / 2) % n_rays)];
        ++ray_index;
        Matrix j(p.size(), patch_dim);
        for (int i = 0; i < patch_dim; ++i) {
            Vector cp = c0, cm = c0;
            cp(i) += h;
            cm(i) -= h;
            j.col(i) = (patch(cp) - patch(cm)) / (2.0 * h);
        }
        Vector v = j * u;
        if (v.norm() < 1e-12) continue;
        v /= v.norm();
        if (!space.flat()) {
            // clean the finite-difference tangency error
            double zx = space.ambient_form()(p, v);
            v -= (zx / space.level()) * p;
        }
        for (int step = 1; step <= 8; ++step) {
            double t = t_max * step / 8.0;
            Vector gpt = geodesic(space, p, v, t);
            worst = std::max(worst, distance(gpt));
        }
    }
    return worst <= tolerance * scale;
}

bool is_totally_geodesic(const ModelSpace& space, const Vector& x,
                         const Subspace& hyperplane, int n_rays, double t_max,
                         double tolerance) {
    space.require_on_space(x);
    if (hyperplane.ambient_dim() != space.ambient_dim())
        throw DimensionMismatch("hyperplane must be given in ambient coordinates");
    if (hyperplane.dim() != space.dim() - 1)
        throw BadCodimension("hyperplane must have codimension one in the tangent space");
    for (int i = 0; i < hyperplane.dim(); ++i)
        if (!space.is_tangent(x, hyperplane.basis_vector(i)))
            throw NotTangent("hyperplane basis must be tangent at x");
    Matrix h = hyperplane.basis();
    auto patch = [&space, &x, h](const Vector& c) { return geodesic(space, x, h * c, 1.0); };
    double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    return is_patch_totally_geodesic(space, patch, hyperplane.dim(), n_rays, t_max,
                                     tolerance, scale);
}

}  // namespace lorgeo
