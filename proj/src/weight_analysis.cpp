#include "lorgeo/weight_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lorgeo/errors.hpp"

namespace lorgeo {

namespace {

struct GradedBasis {
    Matrix p;                    // columns: root-space vectors then zero-space
    std::vector<Vector> value_of;  // root value vector per column (0 for G_0)
};

GradedBasis graded_basis(const RootDecomposition& rd) {
    const int n = rd.algebra_dim;
    GradedBasis g;
    g.p.resize(n, n);
    Eigen::Index at = 0;
    const int rank = rd.rank();
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (int j = 0; j < rd.spaces[r].dim(); ++j) {
            g.p.col(at++) = rd.spaces[r].basis_vector(j);
            g.value_of.push_back(rd.roots[r]);
        }
    for (int j = 0; j < rd.zero_space.dim(); ++j) {
        g.p.col(at++) = rd.zero_space.basis_vector(j);
        g.value_of.push_back(Vector::Zero(rank));
    }
    if (at != n) throw ShapeError("graded basis does not span the algebra");
    return g;
}

bool lex_less(const Vector& a, const Vector& b, double tol) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i) - tol) return true;
        if (a(i) > b(i) + tol) return false;
    }
    return false;
}

}  // namespace

int WeightDecomposition::weight_index(const Vector& lambda, double tol) const {
    for (size_t i = 0; i < weights.size(); ++i)
        if ((weights[i] - lambda).cwiseAbs().maxCoeff() < tol) return static_cast<int>(i);
    return -1;
}

int WeightDecomposition::total_block_dim() const {
    int total = 0;
    for (const auto& b : blocks) total += static_cast<int>(b.size());
    return total;
}

WeightDecomposition sym2_weight_decomposition(const RootDecomposition& rootdec) {
    const int n = rootdec.algebra_dim;
    GradedBasis g = graded_basis(rootdec);
    Matrix dual = g.p.inverse().transpose();  // u_a = dual.col(a)

    // collect weight values of all unordered pairs, clustered
    std::vector<Vector> weights;
    auto find_or_add = [&](const Vector& w) -> size_t {
        for (size_t i = 0; i < weights.size(); ++i)
            if ((weights[i] - w).cwiseAbs().maxCoeff() < tol::eps_root_cluster) return i;
        weights.push_back(w);
        return weights.size() - 1;
    };

    std::vector<std::vector<Matrix>> blocks;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Vector w = g.value_of[static_cast<size_t>(a)] + g.value_of[static_cast<size_t>(b)];
            size_t idx = find_or_add(w);
            if (blocks.size() < weights.size()) blocks.resize(weights.size());
            Matrix q = 0.5 * (dual.col(a) * dual.col(b).transpose() +
                              dual.col(b) * dual.col(a).transpose());
            blocks[idx].push_back(std::move(q));
        }

    // canonical weight order
    std::vector<size_t> order(weights.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return lex_less(weights[x], weights[y], tol::eps_root_cluster);
    });

    WeightDecomposition out{rootdec, {}, {}};
    for (size_t i : order) {
        out.weights.push_back(weights[i]);
        out.blocks.push_back(std::move(blocks[i]));
    }
    if (out.total_block_dim() != n * (n + 1) / 2)
        throw ShapeError("weight blocks do not span Sym^2");
    return out;
}

Matrix project_onto_weight_space(const WeightDecomposition& wd, const Matrix& q,
                                 const Vector& lambda) {
    const int n = wd.rootdec.algebra_dim;
    if (q.rows() != n || q.cols() != n) throw ShapeError("form has wrong dimension");
    int target = wd.weight_index(lambda);
    if (target < 0) throw UnknownWeight("lambda is not a weight of Sym^2");

    GradedBasis g = graded_basis(wd.rootdec);
    Matrix dual = g.p.inverse().transpose();
    Matrix sym = 0.5 * (q + q.transpose());
    Matrix coords = g.p.transpose() * sym * g.p;  // values on graded basis pairs

    Matrix component = Matrix::Zero(n, n);
    const Vector& lam = wd.weights[static_cast<size_t>(target)];
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Vector w = g.value_of[static_cast<size_t>(a)] + g.value_of[static_cast<size_t>(b)];
            if ((w - lam).cwiseAbs().maxCoeff() >= tol::eps_root_cluster) continue;
            double coeff = (a == b ? 1.0 : 2.0) * coords(a, b);
            component += coeff * 0.5 *
                         (dual.col(a) * dual.col(b).transpose() +
                          dual.col(b) * dual.col(a).transpose());
        }
    return component;
}

// --- chambers -------------------------------------------------------------------

namespace {

std::vector<Vector> direction_grid(int dim) {
    std::vector<Vector> dirs;
    if (dim == 1) {
        dirs.push_back(-Vector::Ones(1));
        dirs.push_back(Vector::Ones(1));
    } else if (dim == 2) {
        const int n = 1440;
        for (int k = 0; k < n; ++k) {
            double th = 2.0 * M_PI * (k + 0.318309886183790) / n;  // offset avoids axes
            Vector v(2);
            v << std::cos(th), std::sin(th);
            dirs.push_back(v);
        }
    } else {
        const int nth = 240, nph = 480;
        for (int i = 0; i < nth; ++i) {
            double th = M_PI * (i + 0.381966011250105) / nth;
            for (int j = 0; j < nph; ++j) {
                double ph = 2.0 * M_PI * (j + 0.267949192431123) / nph;
                Vector v(3);
                v << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
                dirs.push_back(v);
            }
        }
    }
    return dirs;
}

}  // namespace

std::vector<Chamber> chambers_of_covectors(const std::vector<Vector>& covectors, int dim) {
    if (dim > 3) throw RankTooLarge("chamber enumeration supports rank <= 3");
    if (dim < 1) throw ShapeError("chamber enumeration needs dimension >= 1");
    for (const auto& cv : covectors)
        if (cv.size() != dim) throw DimensionMismatch("covector of wrong dimension");

    if (covectors.empty()) {
        Chamber whole{Vector::Unit(dim, 0), {}};
        return {whole};
    }

    struct Entry {
        Vector rep;
        double margin;
    };
    std::map<std::vector<int>, Entry> found;
    const double skip = 1e-7;

    for (const Vector& t : direction_grid(dim)) {
        std::vector<int> pattern;
        pattern.reserve(covectors.size());
        double margin = std::numeric_limits<double>::infinity();
        bool on_wall = false;
        for (const auto& cv : covectors) {
            double v = cv.dot(t);
            if (std::abs(v) < skip) { on_wall = true; break; }
            pattern.push_back(v > 0 ? 1 : -1);
            margin = std::min(margin, std::abs(v));
        }
        if (on_wall) continue;
        auto it = found.find(pattern);
        if (it == found.end())
            found.emplace(std::move(pattern), Entry{t, margin});
        else if (margin > it->second.margin + 1e-12)
            it->second = Entry{t, margin};
    }

    // closure under global negation (class property of a central arrangement)
    for (auto it = found.begin(); it != found.end(); ++it) {
        std::vector<int> neg = it->first;
        for (auto& s : neg) s = -s;
        if (!found.count(neg)) found.emplace(std::move(neg), Entry{-it->second.rep, it->second.margin});
    }

    std::vector<Chamber> out;
    out.reserve(found.size());
    for (const auto& [pattern, entry] : found)
        out.push_back(Chamber{entry.rep, pattern});  // map is already in lex order
    return out;
}

std::vector<Chamber> chamber_representatives(const RootDecomposition& rootdec) {
    return chambers_of_covectors(rootdec.roots, rootdec.rank());
}

Subspace negative_weight_subspace(const RootDecomposition& rootdec, const Vector& t,
                                  double eps_sign) {
    if (t.size() != rootdec.rank())
        throw DimensionMismatch("t must be given in Cartan coordinates");
    Vector tn = t;
    if (tn.norm() > 0) tn /= tn.norm();
    std::vector<Matrix> parts;
    Eigen::Index total = 0;
    for (size_t r = 0; r < rootdec.roots.size(); ++r)
        if (rootdec.roots[r].dot(tn) < -eps_sign) {
            parts.push_back(rootdec.spaces[r].basis());
            total += parts.back().cols();
        }
    Matrix basis(rootdec.algebra_dim, total);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        basis.middleCols(at, p.cols()) = p;
        at += p.cols();
    }
    return Subspace(rootdec.algebra_dim, std::move(basis));
}

NegativeDimReport negative_dimension_fact(const LieAlgebra& a,
                                          const RootDecomposition& rootdec) {
    NegativeDimReport report;
    report.sl2r_factor = has_sl2r_factor(a);
    report.min_dim = std::numeric_limits<int>::max();
    auto chambers = chamber_representatives(rootdec);
    for (size_t i = 0; i < chambers.size(); ++i) {
        int d = negative_weight_subspace(rootdec, chambers[i].representative).dim();
        report.chamber_dims.push_back(d);
        if (d < report.min_dim) {
            report.min_dim = d;
            if (d < 2) report.counterexample_chamber = static_cast<int>(i);
        }
    }
    if (chambers.empty()) report.min_dim = 0;
    report.fact_holds = report.min_dim >= 2;
    return report;
}

std::optional<Lemma43Witness> lemma43_witness(const std::vector<Vector>& weights,
                                              const Subspace& v) {
    if (weights.empty()) throw NotGenerating("no weights given");
    const int d = static_cast<int>(weights.front().size());
    const int n = static_cast<int>(weights.size());
    if (v.ambient_dim() != n)
        throw DimensionMismatch("V must live in R^n with one coordinate per weight");
    Matrix stacked(n, d);
    for (int i = 0; i < n; ++i) stacked.row(i) = weights[static_cast<size_t>(i)].transpose();
    if (linalg::rank_of(stacked, tol::eps_rank) != d)
        throw NotGenerating("weights do not span the dual space");

    if (v.dim() == 0) return std::nullopt;

    auto chambers = chambers_of_covectors(weights, d);
    for (size_t ci = 0; ci < chambers.size(); ++ci) {
        const Chamber& ch = chambers[ci];
        for (char side : {'x', 'y'}) {
            std::vector<int> constrained;
            for (int i = 0; i < n; ++i) {
                int s = ch.sign_pattern[static_cast<size_t>(i)];
                if ((side == 'x' && s < 0) || (side == 'y' && s > 0))
                    constrained.push_back(i);
            }
            Matrix rows(static_cast<Eigen::Index>(constrained.size()), v.dim());
            for (size_t r = 0; r < constrained.size(); ++r)
                rows.row(static_cast<Eigen::Index>(r)) = v.basis().row(constrained[r]);
            Matrix ker = constrained.empty()
                             ? Matrix::Identity(v.dim(), v.dim())
                             : linalg::kernel_basis(rows, tol::eps_rank);
            if (ker.cols() == 0) continue;
            Vector w = v.basis() * ker.col(0);
            w.normalize();
            Eigen::Index imax = 0;
            w.cwiseAbs().maxCoeff(&imax);
            if (w(imax) < 0) w = -w;
            return Lemma43Witness{ch.representative, side, w, static_cast<int>(ci)};
        }
    }
    return std::nullopt;
}

}  // namespace lorgeo
