#include "lorgeo/warped_product.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "lorgeo/errors.hpp"
#include "lorgeo/rng.hpp"

namespace lorgeo {

// --- warping polynomials -----------------------------------------------------

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

namespace {

double parse_number(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos)
            return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
        return std::stod(s);
    } catch (const std::exception&) {
        throw ParseError("bad number in warp expression: '" + s + "'");
    }
}

}  // namespace

Polynomial Polynomial::parse(const std::string& expr) {
    std::string s;
    for (char c : expr)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty warp expression");

    std::vector<double> coeffs;
    auto add_term = [&coeffs](double c, int k) {
        if (static_cast<int>(coeffs.size()) <= k) coeffs.resize(static_cast<size_t>(k) + 1, 0.0);
        coeffs[static_cast<size_t>(k)] += c;
    };

    size_t pos = 0;
    while (pos < s.size()) {
        double sign = 1.0;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(pos, end - pos);
        if (term.empty()) throw ParseError("dangling sign in warp expression");
        pos = end;

        auto rpos = term.find('r');
        if (rpos == std::string::npos) {
            add_term(sign * parse_number(term), 0);
            continue;
        }
        double coeff = 1.0;
        if (rpos > 0) {
            std::string head = term.substr(0, rpos);
            if (head.back() == '*') head.pop_back();
            if (!head.empty()) coeff = parse_number(head);
        }
        int power = 1;
        if (rpos + 1 < term.size()) {
            if (term[rpos + 1] != '^') throw ParseError("expected '^' after r");
            try {
                size_t used = 0;
                power = std::stoi(term.substr(rpos + 2), &used);
                if (used != term.size() - rpos - 2) throw ParseError("bad exponent");
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError("bad exponent in warp expression: '" + term + "'");
            }
            if (power < 0) throw ParseError("negative powers are not supported");
        }
        add_term(sign * coeff, power);
    }
    return Polynomial(std::move(coeffs));
}

double Polynomial::operator()(double r) const {
    double acc = 0.0;
    for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * r + coeffs_[k];
    return acc;
}

double Polynomial::deriv(double r) const {
    double acc = 0.0;
    for (size_t k = coeffs_.size(); k-- > 1;)
        acc = acc * r + static_cast<double>(k) * coeffs_[k];
    return acc;
}

double Polynomial::deriv2(double r) const {
    double acc = 0.0;
    for (size_t k = coeffs_.size(); k-- > 2;)
        acc = acc * r + static_cast<double>(k) * static_cast<double>(k - 1) * coeffs_[k];
    return acc;
}

std::string Polynomial::to_string() const {
    std::string out;
    for (size_t k = coeffs_.size(); k-- > 0;) {
        if (coeffs_[k] == 0.0 && coeffs_.size() > 1) continue;
        if (!out.empty()) out += coeffs_[k] < 0 ? " - " : " + ";
        else if (coeffs_[k] < 0) out += "-";
        double c = std::abs(coeffs_[k]);
        if (k == 0 || c != 1.0) out += std::to_string(c);
        if (k >= 1) out += "r";
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

// --- warped products -----------------------------------------------------------

BaseSpace BaseSpace::euclidean(int k) {
    if (k < 1) throw ShapeError("Euclidean base needs k >= 1");
    return BaseSpace{Type::Euclidean, k};
}

BaseSpace BaseSpace::half_line() { return BaseSpace{Type::HalfLine, 1}; }

bool BaseSpace::contains(const Vector& l) const {
    if (l.size() != k) return false;
    if (type == Type::HalfLine) return l(0) > 0.0;
    return true;
}

WarpedProduct::WarpedProduct(BaseSpace base, ModelSpace fiber, Polynomial warp)
    : base_(base), fiber_(std::move(fiber)), warp_(std::move(warp)) {}

double WarpedProduct::warp_at(const Vector& l) const {
    if (!base_.contains(l)) throw PointOffSpace("base point outside L");
    double w = warp_(l(0));
    if (w <= 0.0) throw Error("warping function must be positive on L");
    return w;
}

BilinearForm WarpedProduct::metric_at(const Vector& l, const Vector& n) const {
    double w = warp_at(l);
    fiber_.require_on_space(n);
    Matrix fiber_metric = lorgeo::metric_at(fiber_, n).matrix();
    const int kb = base_.k;
    const int kf = static_cast<int>(fiber_metric.rows());
    Matrix g = Matrix::Zero(kb + kf, kb + kf);
    g.topLeftCorner(kb, kb) = base_.metric();
    g.bottomRightCorner(kf, kf) = w * fiber_metric;
    return BilinearForm(g);
}

BilinearForm wp_metric_at(const WarpedProduct& wp, const Vector& l, const Vector& n) {
    return wp.metric_at(l, n);
}

// --- polar decomposition of the spacelike region ---------------------------------

Vector minkowski_polar_map(int n, double r, const Vector& u) {
    if (r <= 0.0) throw NonPositiveRadius("polar radius must be positive");
    ModelSpace ds = ModelSpace::de_sitter(n, 1.0);
    ds.require_on_space(u);
    return r * u;
}

std::pair<double, Vector> minkowski_polar_inverse(int n, const Vector& x) {
    BilinearForm q = BilinearForm::minkowski(n);
    double qx = q(x, x);
    if (qx <= 0.0) throw PointOffSpace("polar inverse requires q(x) > 0");
    double r = std::sqrt(qx);
    return {r, x / r};
}

double verify_polar_pullback(int n, int samples, std::uint64_t seed,
                             const Polynomial& warp) {
    ModelSpace ds = ModelSpace::de_sitter(n, 1.0);
    const BilinearForm& q = ds.ambient_form();
    const double h = 1e-6;
    double worst = 0.0;

    for (int s = 0; s < samples; ++s) {
        auto rng = engine_for(seed, static_cast<std::uint64_t>(s));
        Vector u;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 100) throw SamplingFailure("could not sample the unit quadric");
            auto scaled = scale_to_quadric(ds, gaussian_vector(rng, n + 1));
            if (scaled) {
                u = *scaled;
                break;
            }
        }
        std::uniform_real_distribution<double> radius(0.5, 3.0);
        double r = radius(rng);

        GraphChart chart(ds, u);
        const int d = chart.dim();
        auto f = [&](const Vector& p) -> Vector {  // p = (rho, y)
            return p(0) * chart.embed(p.tail(d));
        };
        Vector p0(1 + d);
        p0.setZero();
        p0(0) = r;

        Matrix jac(n + 1, 1 + d);
        for (int a = 0; a < 1 + d; ++a) {
            Vector pp = p0, pm = p0;
            pp(a) += h;
            pm(a) -= h;
            jac.col(a) = (f(pp) - f(pm)) / (2.0 * h);
        }
        Matrix pullback = jac.transpose() * q.matrix() * jac;

        Matrix expected = Matrix::Zero(1 + d, 1 + d);
        expected(0, 0) = 1.0;
        expected.bottomRightCorner(d, d) = warp(r) * chart.metric(Vector::Zero(d));

        worst = std::max(worst, linalg::max_abs(pullback - expected));
    }
    return worst;
}

// --- leaf curvature and the inverse-ratio law -------------------------------------

namespace {

ModelSpace scaled_fiber(const ModelSpace& fiber, double factor) {
    // (N, c m) is isometric to the level quadric at c * level
    return ModelSpace::quadric(fiber.ambient_form(), fiber.level() * factor);
}

}  // namespace

LeafCurvatureResult leaf_curvature_ratio(const WarpedProduct& wp, const Vector& l1,
                                         const Vector& l2, int samples,
                                         std::uint64_t seed) {
    if (wp.fiber().flat()) throw FlatFiber("the ratio law is vacuous for a flat fiber");
    CurvatureEstimate fiber_est = constant_curvature_estimate(wp.fiber(), samples, seed);
    if (std::abs(fiber_est.kappa_hat) <= 1e-9)
        throw FlatFiber("fiber curvature vanishes");
    if (fiber_est.max_dev > 1e-6 * std::max(1.0, std::abs(fiber_est.kappa_hat)))
        throw NonConstantFiber("fiber curvature is not constant");

    double w1 = wp.warp_at(l1);
    double w2 = wp.warp_at(l2);
    CurvatureEstimate e1 = constant_curvature_estimate(scaled_fiber(wp.fiber(), w1),
                                                       samples, split_seed(seed, 1));
    CurvatureEstimate e2 = constant_curvature_estimate(scaled_fiber(wp.fiber(), w2),
                                                       samples, split_seed(seed, 2));
    LeafCurvatureResult out;
    out.k1 = e1.kappa_hat;
    out.k2 = e2.kappa_hat;
    out.fiber_curvature = fiber_est.kappa_hat;
    out.ratio_error = std::abs(out.k1 * w1 - out.k2 * w2) / std::abs(fiber_est.kappa_hat);
    return out;
}

// --- block structure verification ---------------------------------------------------

namespace {

std::int64_t quantize(double v) { return static_cast<std::int64_t>(std::llround(v * 1e7)); }

std::vector<std::int64_t> key_of(const Vector& v) {
    std::vector<std::int64_t> k(static_cast<size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) k[static_cast<size_t>(i)] = quantize(v(i));
    return k;
}

}  // namespace

BlockStructureReport verify_block_structure(
    const std::vector<std::pair<Vector, Matrix>>& samples, int base_dims, int fiber_dims,
    double tolerance) {
    const int total = base_dims + fiber_dims;
    for (const auto& [pt, g] : samples) {
        // the point is a grouping label: base coordinates first, then any
        // labeling of the fiber point (chart or ambient coordinates)
        if (pt.size() <= base_dims || g.rows() != total || g.cols() != total)
            throw ShapeError("block structure samples have inconsistent dimensions");
    }
    BlockStructureReport report;

    for (const auto& [pt, g] : samples) {
        report.worst_off_block =
            std::max(report.worst_off_block,
                     linalg::max_abs(g.topRightCorner(base_dims, fiber_dims)));
        report.worst_off_block =
            std::max(report.worst_off_block,
                     linalg::max_abs(g.bottomLeftCorner(fiber_dims, base_dims)));
    }
    report.off_block_ok = report.worst_off_block <= tolerance;

    using Key = std::vector<std::int64_t>;
    std::map<Key, std::vector<size_t>> by_base;
    std::map<Key, std::vector<size_t>> by_fiber;
    for (size_t i = 0; i < samples.size(); ++i) {
        const Vector& pt = samples[i].first;
        by_base[key_of(pt.head(base_dims))].push_back(i);
        by_fiber[key_of(pt.tail(pt.size() - base_dims))].push_back(i);
    }

    // the L-block must not depend on the fiber point
    for (const auto& [key, idx] : by_base)
        for (size_t a = 0; a + 1 < idx.size(); ++a) {
            Matrix ha = samples[idx[a]].second.topLeftCorner(base_dims, base_dims);
            Matrix hb = samples[idx[a + 1]].second.topLeftCorner(base_dims, base_dims);
            report.worst_base_dependence =
                std::max(report.worst_base_dependence, linalg::max_abs(ha - hb));
        }
    report.base_independent_ok = report.worst_base_dependence <= tolerance;

    // fiber blocks across base points: positive proportionality factor,
    // independent of the fiber point
    std::map<std::pair<Key, Key>, std::pair<double, double>> factors;  // (min,max)
    bool positive = true;
    for (const auto& [nkey, idx] : by_fiber) {
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = a + 1; b < idx.size(); ++b) {
                const auto& [pa, ga] = samples[idx[a]];
                const auto& [pb, gb] = samples[idx[b]];
                Matrix ma = ga.bottomRightCorner(fiber_dims, fiber_dims);
                Matrix mb = gb.bottomRightCorner(fiber_dims, fiber_dims);
                double denom = (ma.array() * ma.array()).sum();
                if (denom == 0.0) continue;
                double f = (ma.array() * mb.array()).sum() / denom;
                double resid = linalg::max_abs(mb - f * ma) /
                               std::max(1.0, linalg::max_abs(mb));
                report.worst_fiber_residual = std::max(report.worst_fiber_residual, resid);
                if (f <= 0.0) positive = false;
                Key ka = key_of(pa.head(base_dims));
                Key kb = key_of(pb.head(base_dims));
                auto canon = ka < kb ? std::make_pair(ka, kb) : std::make_pair(kb, ka);
                if (canon.first == canon.second) continue;
                if (ka > kb) f = 1.0 / f;
                auto it = factors.find(canon);
                if (it == factors.end())
                    factors.emplace(canon, std::make_pair(f, f));
                else {
                    it->second.first = std::min(it->second.first, f);
                    it->second.second = std::max(it->second.second, f);
                }
            }
    }
    for (const auto& [key, mm] : factors) {
        double spread = mm.second - mm.first;
        report.worst_fiber_residual = std::max(
            report.worst_fiber_residual, spread / std::max(1.0, std::abs(mm.second)));
        report.recovered_factors.push_back(0.5 * (mm.first + mm.second));
    }
    report.fiber_proportional_ok = positive && report.worst_fiber_residual <= tolerance;
    return report;
}

}  // namespace lorgeo
