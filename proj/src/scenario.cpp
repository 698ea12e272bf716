#include "lorgeo/scenario.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "lorgeo/errors.hpp"
#include "lorgeo/group_action.hpp"
#include "lorgeo/rng.hpp"
#include "lorgeo/warped_product.hpp"

namespace lorgeo {

namespace {

// --- small JSON helpers ------------------------------------------------------

double number_of(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        auto slash = s.find('/');
        try {
            if (slash != std::string::npos)
                return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
            return std::stod(s);
        } catch (const std::exception&) {
            throw ParseError("bad numeric literal: '" + s + "'");
        }
    }
    throw ParseError("expected a number or a rational string");
}

Vector vector_of(const Json& j) {
    if (!j.is_array()) throw ParseError("expected an array for a vector");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_of(j[i]);
    return v;
}

Matrix matrix_of(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of rows");
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j[0].size()) throw ParseError("ragged matrix rows");
        for (size_t k = 0; k < j[i].size(); ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number_of(j[i][k]);
    }
    return m;
}

Json json_of(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json json_of(const Signature& s) { return Json::array({s.n_pos, s.n_neg, s.n_null}); }

bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- scenario context ---------------------------------------------------------

Json default_tolerances() {
    return Json{{"eps_rank", tol::eps_rank},
                {"eps_causal", tol::eps_causal},
                {"grading_residual", 1e-8},
                {"orthogonality_residual", 1e-9},
                {"covariance_residual", 1e-7},
                {"curvature_max_dev", 1e-5},
                {"curvature_consistency", 1e-5},
                {"geodesic_agreement", 1e-7},
                {"quadric_drift", 1e-8},
                {"polar_pullback", 1e-6},
                {"ratio_error", 1e-6},
                {"block_structure", 1e-9},
                {"equivariance", 1e-7},
                {"phi_restriction", 1e-8},
                {"witness_field", 1e-9},
                {"totally_geodesic", 1e-6},
                {"expect", 1e-6}};
}

struct Context {
    std::uint64_t seed = 0;
    Json tolerances;
    std::optional<BuiltinAlgebra> builtin;
    std::optional<LieAlgebra> algebra;
    std::optional<Subspace> cartan;
    std::optional<ModelSpace> space;
    std::optional<IsometricAction> action;
    std::optional<WarpedProduct> warped;

    double tolerance(const std::string& key) const {
        if (!tolerances.contains(key)) throw ParseError("unknown tolerance key: " + key);
        return tolerances[key].get<double>();
    }
    const LieAlgebra& need_algebra() const {
        if (algebra) return *algebra;
        if (action) return action->algebra();
        throw ParseError("scenario does not declare an algebra");
    }
    const Subspace& need_cartan() const {
        if (!cartan)
            throw ParseError("no split Cartan available (builtin or 'cartan' required)");
        return *cartan;
    }
    const ModelSpace& need_space() const {
        if (space) return *space;
        if (action) return action->space();
        throw ParseError("scenario does not declare a model space");
    }
    const IsometricAction& need_action() const {
        if (!action) throw ParseError("scenario does not declare an action");
        return *action;
    }
    const WarpedProduct& need_warped() const {
        if (!warped) throw ParseError("scenario does not declare a warped product");
        return *warped;
    }
};

ModelSpace parse_space(const Json& j) {
    if (!j.is_object() || !j.contains("type")) throw ParseError("space needs a 'type'");
    std::string type = j["type"].get<std::string>();
    if (type == "minkowski") return ModelSpace::minkowski(j.at("n").get<int>());
    if (type == "de_sitter")
        return ModelSpace::de_sitter(j.at("n").get<int>(),
                                     j.contains("radius") ? number_of(j["radius"]) : 1.0);
    if (type == "anti_de_sitter")
        return ModelSpace::anti_de_sitter(j.at("n").get<int>(),
                                          j.contains("radius") ? number_of(j["radius"]) : 1.0);
    if (type == "quadric")
        return ModelSpace::quadric(BilinearForm(matrix_of(j.at("form"))),
                                   number_of(j.at("level")));
    throw ParseError("unknown space type: " + type);
}

void parse_algebra_into(Context& ctx, const Json& j) {
    if (j.is_string()) {
        ctx.builtin = builtin_algebra(j.get<std::string>());
        ctx.algebra = ctx.builtin->algebra;
        if (ctx.builtin->split_cartan) ctx.cartan = ctx.builtin->split_cartan;
        return;
    }
    if (j.is_object() && j.contains("structure_constants")) {
        const Json& t = j["structure_constants"];
        LieAlgebra::Tensor c;
        for (const auto& plane : t) {
            c.emplace_back();
            for (const auto& row : plane) {
                c.back().emplace_back();
                for (const auto& entry : row) c.back().back().push_back(number_of(entry));
            }
        }
        ctx.algebra = LieAlgebra::from_structure_constants(c);
        if (j.contains("cartan")) {
            Matrix basis = matrix_of(j["cartan"]).transpose();  // rows are vectors
            ctx.cartan = Subspace(ctx.algebra->dim(), basis);
        }
        return;
    }
    throw ParseError("algebra must be a builtin name or {structure_constants: ...}");
}

void parse_action_into(Context& ctx, const Json& j) {
    if (!j.is_object()) throw ParseError("action must be an object");
    ModelSpace space = parse_space(j.at("space"));
    const Json& alg = j.at("algebra");
    if (alg.is_string() && (!j.contains("rep") || j["rep"] == "standard")) {
        ctx.action = IsometricAction::standard(alg.get<std::string>(), space);
        if (!ctx.algebra) {
            ctx.builtin = builtin_algebra(alg.get<std::string>());
            ctx.algebra = ctx.builtin->algebra;
            if (ctx.builtin->split_cartan) ctx.cartan = ctx.builtin->split_cartan;
        }
        return;
    }
    // custom rep matrices over a declared algebra
    Context tmp;
    parse_algebra_into(tmp, alg);
    if (!j.contains("rep") || !j["rep"].is_object() || !j["rep"].contains("matrices"))
        throw ParseError("custom action needs rep.matrices");
    std::vector<Matrix> mats;
    for (const auto& mj : j["rep"]["matrices"]) mats.push_back(matrix_of(mj));
    MatrixRep rep(*tmp.algebra, std::move(mats));
    ctx.action = IsometricAction(*tmp.algebra, std::move(rep), space);
    if (!ctx.algebra) {
        ctx.algebra = tmp.algebra;
        if (tmp.cartan) ctx.cartan = tmp.cartan;
    }
}

void parse_warped_into(Context& ctx, const Json& j) {
    if (!j.is_object()) throw ParseError("warped must be an object");
    const Json& bj = j.at("base");
    BaseSpace base = bj.at("type") == "half_line"
                         ? BaseSpace::half_line()
                         : BaseSpace::euclidean(bj.contains("k") ? bj["k"].get<int>() : 1);
    ModelSpace fiber = parse_space(j.at("fiber"));
    Polynomial warp = Polynomial::parse(j.contains("warp") ? j["warp"].get<std::string>()
                                                           : std::string("1"));
    ctx.warped = WarpedProduct(base, std::move(fiber), std::move(warp));
}

// --- rep descriptors for the intertwiner checks -----------------------------------

MatrixRep rep_of_descriptor(const Context& ctx, const Json& j) {
    const LieAlgebra& a = ctx.need_algebra();
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "standard") {
            if (!ctx.builtin) throw ParseError("'standard' rep needs a builtin algebra");
            return ctx.builtin->standard_rep;
        }
        if (s == "adjoint") return MatrixRep::adjoint(a);
        throw ParseError("unknown rep descriptor: " + s);
    }
    if (j.is_object() && j.contains("trivial"))
        return MatrixRep::trivial(a, j["trivial"].get<int>());
    if (j.is_object() && j.contains("sum")) {
        std::optional<MatrixRep> acc;
        for (const auto& part : j["sum"]) {
            MatrixRep r = rep_of_descriptor(ctx, part);
            acc = acc ? MatrixRep::direct_sum(*acc, r) : r;
        }
        if (!acc) throw ParseError("empty rep sum");
        return *acc;
    }
    if (j.is_object() && j.contains("matrices")) {
        std::vector<Matrix> mats;
        for (const auto& mj : j["matrices"]) mats.push_back(matrix_of(mj));
        return MatrixRep(a, std::move(mats));
    }
    throw ParseError("bad rep descriptor");
}

// --- check handlers ------------------------------------------------------------------

using Handler = std::function<bool(const Context&, const Json&, Json&)>;

struct CheckSpec {
    Handler run;
    std::string doc;
};

bool expect_int(const Json& params, const std::string& key, int actual, Json& values) {
    if (!params.contains("expect") || !params["expect"].contains(key)) return true;
    int want = params["expect"][key].get<int>();
    if (want == actual) return true;
    values["mismatch"].push_back(key);
    return false;
}

bool expect_bool(const Json& params, const std::string& key, bool actual, Json& values) {
    if (!params.contains("expect") || !params["expect"].contains(key)) return true;
    if (params["expect"][key].get<bool>() == actual) return true;
    values["mismatch"].push_back(key);
    return false;
}

bool expect_num(const Json& params, const std::string& key, double actual, double tol,
                Json& values) {
    if (!params.contains("expect") || !params["expect"].contains(key)) return true;
    if (approx(number_of(params["expect"][key]), actual, tol)) return true;
    values["mismatch"].push_back(key);
    return false;
}

bool expect_int_array(const Json& params, const std::string& key,
                      const std::vector<int>& actual, Json& values) {
    if (!params.contains("expect") || !params["expect"].contains(key)) return true;
    std::vector<int> want = params["expect"][key].get<std::vector<int>>();
    if (want == actual) return true;
    values["mismatch"].push_back(key);
    return false;
}

RootDecomposition context_rootdec(const Context& ctx) {
    return root_space_decomposition(ctx.need_algebra(), ctx.need_cartan());
}

bool check_root_decomposition(const Context& ctx, const Json& params, Json& values) {
    RootDecomposition rd = context_rootdec(ctx);
    values["rank"] = rd.rank();
    Json roots = Json::array();
    std::vector<int> dims;
    for (size_t i = 0; i < rd.roots.size(); ++i) {
        roots.push_back(json_of(rd.roots[i]));
        dims.push_back(rd.spaces[i].dim());
    }
    values["roots"] = roots;
    values["space_dims"] = dims;
    values["zero_dim"] = rd.zero_space.dim();
    bool ok = expect_int(params, "root_count", static_cast<int>(rd.roots.size()), values);
    ok = expect_int_array(params, "space_dims", dims, values) && ok;
    ok = expect_int(params, "zero_dim", rd.zero_space.dim(), values) && ok;
    return ok;
}

bool check_bracket_grading(const Context& ctx, const Json& params, Json& values) {
    const LieAlgebra& a = ctx.need_algebra();
    RootDecomposition rd = context_rootdec(ctx);
    // full graded basis, for expansion
    Matrix p(a.dim(), a.dim());
    std::vector<int> owner;  // root index per column, -1 for G_0
    Eigen::Index at = 0;
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (int j = 0; j < rd.spaces[r].dim(); ++j) {
            p.col(at++) = rd.spaces[r].basis_vector(j);
            owner.push_back(static_cast<int>(r));
        }
    for (int j = 0; j < rd.zero_space.dim(); ++j) {
        p.col(at++) = rd.zero_space.basis_vector(j);
        owner.push_back(-1);
    }
    auto qr = p.colPivHouseholderQr();

    double worst = 0.0;
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (size_t s = 0; s < rd.roots.size(); ++s) {
            Vector sum = rd.roots[r] + rd.roots[s];
            int target = rd.root_index(sum);
            bool to_zero = sum.cwiseAbs().maxCoeff() < tol::eps_root_cluster;
            for (int i = 0; i < rd.spaces[r].dim(); ++i)
                for (int j = 0; j < rd.spaces[s].dim(); ++j) {
                    Vector br = a.bracket(rd.spaces[r].basis_vector(i),
                                          rd.spaces[s].basis_vector(j));
                    Vector coeff = qr.solve(br);
                    double off = 0.0;
                    for (size_t col = 0; col < owner.size(); ++col) {
                        bool allowed = to_zero ? owner[col] == -1 : owner[col] == target;
                        if (!allowed) off = std::max(off, std::abs(coeff(static_cast<Eigen::Index>(col))));
                    }
                    worst = std::max(worst, off);
                }
        }
    values["grading_residual"] = worst;

    // Killing orthogonality of root spaces with alpha + beta != 0
    Matrix killing = killing_form(a).matrix();
    double worst_killing = 0.0;
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (size_t s = 0; s < rd.roots.size(); ++s) {
            if ((rd.roots[r] + rd.roots[s]).cwiseAbs().maxCoeff() < tol::eps_root_cluster)
                continue;
            worst_killing = std::max(
                worst_killing, linalg::max_abs(rd.spaces[r].basis().transpose() * killing *
                                               rd.spaces[s].basis()));
        }
    values["killing_orthogonality_residual"] = worst_killing;

    // root vectors are ad-nilpotent
    bool nilpotent_ok = true;
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (int j = 0; j < rd.spaces[r].dim(); ++j)
            if (!is_ad_nilpotent(a, rd.spaces[r].basis_vector(j))) nilpotent_ok = false;
    values["root_vectors_nilpotent"] = nilpotent_ok;

    double tol_g = ctx.tolerance("grading_residual");
    (void)params;
    return worst <= tol_g && worst_killing <= tol_g && nilpotent_ok;
}

bool check_weight_decomposition(const Context& ctx, const Json& params, Json& values) {
    const LieAlgebra& a = ctx.need_algebra();
    RootDecomposition rd = context_rootdec(ctx);
    WeightDecomposition wd = sym2_weight_decomposition(rd);

    Json weights = Json::array();
    std::vector<int> dims;
    for (size_t i = 0; i < wd.weights.size(); ++i) {
        weights.push_back(json_of(wd.weights[i]));
        dims.push_back(static_cast<int>(wd.blocks[i].size()));
    }
    values["weights"] = weights;
    values["block_dims"] = dims;
    values["total"] = wd.total_block_dim();
    const int n = a.dim();
    bool ok = wd.total_block_dim() == n * (n + 1) / 2;

    // orthogonality: q in V_lambda pairs G_alpha, G_beta only when alpha+beta=lambda
    std::vector<std::pair<Vector, Vector>> graded;  // (root value, vector)
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (int j = 0; j < rd.spaces[r].dim(); ++j)
            graded.emplace_back(rd.roots[r], rd.spaces[r].basis_vector(j));
    for (int j = 0; j < rd.zero_space.dim(); ++j)
        graded.emplace_back(Vector::Zero(rd.rank()), rd.zero_space.basis_vector(j));
    double worst_orth = 0.0;
    for (size_t wi = 0; wi < wd.weights.size(); ++wi)
        for (const Matrix& q : wd.blocks[wi])
            for (const auto& [va, xa] : graded)
                for (const auto& [vb, xb] : graded) {
                    if ((va + vb - wd.weights[wi]).cwiseAbs().maxCoeff() <
                        tol::eps_root_cluster)
                        continue;
                    worst_orth = std::max(worst_orth, std::abs(xa.dot(q * xb)));
                }
    values["orthogonality_residual"] = worst_orth;
    ok = ok && worst_orth <= ctx.tolerance("orthogonality_residual");

    // conjugation covariance on sampled Cartan elements
    double worst_cov = 0.0;
    for (int s = 0; s < 3; ++s) {
        auto rng = engine_for(ctx.seed, static_cast<std::uint64_t>(s) + 101);
        Vector coeffs = gaussian_vector(rng, rd.rank());
        if (coeffs.norm() > 1.0) coeffs.normalize();
        Vector h_alg = rd.cartan.basis() * coeffs;
        Matrix conj = a.ad(h_alg).exp();
        for (size_t wi = 0; wi < wd.weights.size(); ++wi) {
            double scale = std::exp(wd.weights[wi].dot(coeffs));
            for (const Matrix& q : wd.blocks[wi]) {
                Matrix pulled = conj.transpose() * q * conj;
                worst_cov = std::max(worst_cov, linalg::max_abs(pulled - scale * q) /
                                                    std::max(1.0, scale * linalg::max_abs(q)));
            }
        }
    }
    values["covariance_residual"] = worst_cov;
    ok = ok && worst_cov <= ctx.tolerance("covariance_residual");

    // projections sum back to the input
    auto rng = engine_for(ctx.seed, 7);
    Matrix probe = Matrix::NullaryExpr(n, n, [&rng]() {
        std::normal_distribution<double> g;
        return g(rng);
    });
    probe = Matrix(0.5 * (probe + probe.transpose()));
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& w : wd.weights) sum += project_onto_weight_space(wd, probe, w);
    values["projection_residual"] = linalg::max_abs(sum - probe);
    ok = ok && linalg::max_abs(sum - probe) <= 1e-10;

    ok = expect_int_array(params, "block_dims", dims, values) && ok;
    ok = expect_int(params, "weight_count", static_cast<int>(wd.weights.size()), values) && ok;
    return ok;
}

bool check_chambers(const Context& ctx, const Json& params, Json& values) {
    RootDecomposition rd = context_rootdec(ctx);
    auto chambers = chamber_representatives(rd);
    values["count"] = chambers.size();
    Json patterns = Json::array();
    for (const auto& ch : chambers) {
        std::string p;
        for (int s : ch.sign_pattern) p += s > 0 ? '+' : '-';
        patterns.push_back(p);
    }
    values["sign_patterns"] = patterns;
    return expect_int(params, "count", static_cast<int>(chambers.size()), values);
}

bool check_negative_weight_dims(const Context& ctx, const Json& params, Json& values) {
    const LieAlgebra& a = ctx.need_algebra();
    RootDecomposition rd = context_rootdec(ctx);
    NegativeDimReport report = negative_dimension_fact(a, rd);
    values["chamber_dims"] = report.chamber_dims;
    values["min_dim"] = report.min_dim;
    values["sl2r_factor"] = report.sl2r_factor;
    values["fact_holds"] = report.fact_holds;
    if (report.counterexample_chamber >= 0)
        values["counterexample_chamber"] = report.counterexample_chamber;
    // The lower bound is asserted only without an sl(2,R) factor; with one
    // the boundary value is reported, not asserted.
    bool ok = report.sl2r_factor || report.fact_holds;
    ok = expect_int(params, "min_dim", report.min_dim, values) && ok;
    ok = expect_bool(params, "fact_holds", report.fact_holds, values) && ok;
    ok = expect_bool(params, "sl2r_factor", report.sl2r_factor, values) && ok;
    return ok;
}

bool check_killing_signature(const Context& ctx, const Json& params, Json& values) {
    Signature sig = killing_form(ctx.need_algebra()).signature();
    values["signature"] = json_of(sig);
    if (params.contains("expect") && params["expect"].contains("signature")) {
        auto want = params["expect"]["signature"].get<std::vector<int>>();
        return want == std::vector<int>{sig.n_pos, sig.n_neg, sig.n_null};
    }
    return true;
}

bool check_semisimple(const Context& ctx, const Json& params, Json& values) {
    bool ss = is_semisimple(ctx.need_algebra());
    values["semisimple"] = ss;
    return expect_bool(params, "semisimple", ss, values);
}

bool check_sl2r_factor(const Context& ctx, const Json& params, Json& values) {
    bool f = has_sl2r_factor(ctx.need_algebra());
    values["sl2r_factor"] = f;
    return expect_bool(params, "sl2r_factor", f, values);
}

bool check_simple_ideals(const Context& ctx, const Json& params, Json& values) {
    const LieAlgebra& a = ctx.need_algebra();
    auto ideals = simple_ideals(a);
    Matrix killing = killing_form(a).matrix();
    std::vector<int> dims;
    Json sigs = Json::array();
    for (const auto& ideal : ideals) {
        dims.push_back(ideal.dim());
        BilinearForm restricted(ideal.basis().transpose() * killing * ideal.basis());
        sigs.push_back(json_of(restricted.signature()));
    }
    values["ideal_dims"] = dims;
    values["killing_signatures"] = sigs;
    return expect_int_array(params, "ideal_dims", dims, values);
}

bool check_invariant_maps(const Context& ctx, const Json& params, Json& values) {
    std::string kind = params.contains("kind") ? params["kind"].get<std::string>()
                                               : std::string("linear");
    int dim = 0;
    if (kind == "linear") {
        MatrixRep rep_e = rep_of_descriptor(ctx, params.at("rep_e"));
        MatrixRep rep_f = rep_of_descriptor(ctx, params.at("rep_f"));
        dim = static_cast<int>(invariant_linear_maps(rep_e, rep_f).size());
    } else if (kind == "antisym") {
        MatrixRep rep_e = rep_of_descriptor(ctx, params.at("rep_e"));
        int dim_f = params.contains("dim_f") ? params["dim_f"].get<int>() : 1;
        dim = dim_f *
              static_cast<int>(invariant_antisym_bilinear_maps(rep_e, dim_f).size());
    } else {
        throw ParseError("invariant_maps kind must be 'linear' or 'antisym'");
    }
    values["dimension"] = dim;
    return expect_int(params, "dimension", dim, values);
}

bool check_invariant_isotropic_line(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    auto line = invariant_isotropic_line(a.space().ambient_form(), a.rep());
    values["found"] = line.has_value();
    if (line) values["line"] = json_of(*line);
    return expect_bool(params, "found", line.has_value(), values);
}

bool check_constant_curvature(const Context& ctx, const Json& params, Json& values) {
    int samples = params.contains("samples") ? params["samples"].get<int>() : 200;
    CurvatureEstimate est = constant_curvature_estimate(ctx.need_space(), samples, ctx.seed);
    values["kappa_hat"] = est.kappa_hat;
    values["max_dev"] = est.max_dev;
    double dev_cap = params.contains("max_dev") ? number_of(params["max_dev"])
                                                : ctx.tolerance("curvature_max_dev");
    bool ok = est.max_dev <= dev_cap;
    ok = expect_num(params, "kappa", est.kappa_hat, dev_cap, values) && ok;
    return ok;
}

bool check_curvature_consistency(const Context& ctx, const Json& params, Json& values) {
    const ModelSpace& space = ctx.need_space();
    int samples = params.contains("samples") ? params["samples"].get<int>() : 100;
    double worst = 0.0;
    int compared = 0;
    for (int i = 0; i < samples; ++i) {
        auto rng = engine_for(ctx.seed, static_cast<std::uint64_t>(i) + 31);
        for (int attempt = 0; attempt < 100; ++attempt) {
            Vector x;
            if (space.flat()) {
                x = gaussian_vector(rng, space.ambient_dim());
            } else {
                auto scaled = scale_to_quadric(space, gaussian_vector(rng, space.ambient_dim()));
                if (!scaled) continue;
                x = *scaled;
            }
            Vector u = random_tangent(space, x, rng);
            Vector v = random_tangent(space, x, rng);
            // skip ill-conditioned planes; finite differences amplify there
            Vector un = u / u.norm(), vn = v / v.norm();
            double denom = space.ambient_form()(un, un) * space.ambient_form()(vn, vn) -
                           std::pow(space.ambient_form()(un, vn), 2);
            if (std::abs(denom) < 1e-2) continue;
            double gauss = sectional_curvature(space, x, u, v);
            double fd = sectional_curvature_fd(space, x, u, v);
            worst = std::max(worst, std::abs(gauss - fd));
            ++compared;
            break;
        }
    }
    values["worst_difference"] = worst;
    values["compared"] = compared;
    return worst <= ctx.tolerance("curvature_consistency") && compared >= samples / 2;
}

bool check_geodesic_consistency(const Context& ctx, const Json& params, Json& values) {
    const ModelSpace& space = ctx.need_space();
    int samples = params.contains("samples") ? params["samples"].get<int>() : 20;
    double worst_agreement = 0.0, worst_drift = 0.0, worst_speed = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto rng = engine_for(ctx.seed, static_cast<std::uint64_t>(i) + 57);
        Vector x = random_point(space, ctx.seed, static_cast<std::uint64_t>(i) + 911);
        Vector v = random_tangent(space, x, rng);
        if (v.norm() > 1.0) v.normalize();
        for (double t : {0.25, 0.5, 0.75, 1.0}) {
            Vector closed = geodesic(space, x, v, t);
            Vector numeric = geodesic_numeric(space, x, v, t);
            worst_agreement = std::max(worst_agreement, (closed - numeric).norm());
        }
        if (!space.flat()) {
            // hyperbolic branches grow like cosh(t); drift is measured
            // relative to the point scale
            double c0 = space.ambient_form()(v, v);
            for (double t : {1.0, 2.5, 5.0, 10.0}) {
                Vector p = geodesic(space, x, v, t);
                worst_drift = std::max(
                    worst_drift, std::abs(space.ambient_form()(p, p) - space.level()) /
                                     std::max(1.0, p.squaredNorm()));
                // velocity by differentiating the closed form
                double h = 1e-6;
                Vector vel = (geodesic(space, x, v, t + h) - geodesic(space, x, v, t - h)) /
                             (2.0 * h);
                worst_speed =
                    std::max(worst_speed, std::abs(space.ambient_form()(vel, vel) - c0) /
                                              std::max(1.0, vel.squaredNorm()));
            }
        }
    }
    values["closed_vs_numeric"] = worst_agreement;
    values["quadric_drift"] = worst_drift;
    values["speed_drift"] = worst_speed;
    return worst_agreement <= ctx.tolerance("geodesic_agreement") &&
           worst_drift <= ctx.tolerance("quadric_drift") &&
           worst_speed <= 1e-6;
}

bool check_totally_geodesic(const Context& ctx, const Json& params, Json& values) {
    const ModelSpace& space = ctx.need_space();
    Vector x = vector_of(params.at("point"));
    Vector u = vector_of(params.at("direction"));
    Matrix tb = tangent_basis(space, x);
    // orthogonal of u inside the tangent space
    Matrix row(1, tb.cols());
    for (Eigen::Index j = 0; j < tb.cols(); ++j)
        row(0, j) = space.ambient_form()(u, tb.col(j));
    Matrix ker = linalg::kernel_basis(row, tol::eps_rank);
    Subspace hyperplane(space.ambient_dim(), tb * ker);
    int n_rays = params.contains("n_rays") ? params["n_rays"].get<int>() : 8;
    double t_max = params.contains("t_max") ? number_of(params["t_max"]) : 1.0;
    double tolerance = params.contains("tol") ? number_of(params["tol"])
                                              : ctx.tolerance("totally_geodesic");
    bool result = is_totally_geodesic(space, x, hyperplane, n_rays, t_max, tolerance);
    values["totally_geodesic"] = result;
    values["hyperplane_dim"] = hyperplane.dim();
    return expect_bool(params, "totally_geodesic", result, values);
}

bool check_polar_pullback(const Context& ctx, const Json& params, Json& values) {
    int n = params.contains("n") ? params["n"].get<int>() : 2;
    int samples = params.contains("samples") ? params["samples"].get<int>() : 100;
    Polynomial warp = Polynomial::parse(
        params.contains("warp") ? params["warp"].get<std::string>() : std::string("r^2"));
    double err = verify_polar_pullback(n, samples, ctx.seed, warp);
    values["max_error"] = err;
    values["warp"] = warp.to_string();
    if (params.contains("expect") && params["expect"].contains("min_error_above"))
        return err >= number_of(params["expect"]["min_error_above"]);
    double cap = params.contains("expect") && params["expect"].contains("max_error_below")
                     ? number_of(params["expect"]["max_error_below"])
                     : ctx.tolerance("polar_pullback");
    return err <= cap;
}

bool check_leaf_curvature_ratio(const Context& ctx, const Json& params, Json& values) {
    const WarpedProduct& wp = ctx.need_warped();
    Vector l1 = vector_of(params.at("l1"));
    Vector l2 = vector_of(params.at("l2"));
    int samples = params.contains("samples") ? params["samples"].get<int>() : 50;
    LeafCurvatureResult result = leaf_curvature_ratio(wp, l1, l2, samples, ctx.seed);
    values["k1"] = result.k1;
    values["k2"] = result.k2;
    values["fiber_curvature"] = result.fiber_curvature;
    values["ratio_error"] = result.ratio_error;
    double rt = ctx.tolerance("ratio_error");
    bool ok = result.ratio_error <= rt;
    ok = expect_num(params, "k1", result.k1, rt, values) && ok;
    ok = expect_num(params, "k2", result.k2, rt, values) && ok;
    return ok;
}

bool check_block_structure(const Context& ctx, const Json& params, Json& values) {
    const WarpedProduct& wp = ctx.need_warped();
    std::vector<Vector> base_points;
    if (params.contains("base_points"))
        for (const auto& bj : params["base_points"]) base_points.push_back(vector_of(bj));
    else
        base_points = {Vector::Ones(1), 2.0 * Vector::Ones(1)};
    int fiber_count = params.contains("fiber_samples") ? params["fiber_samples"].get<int>() : 4;
    bool inject = params.contains("inject_base_dependence") &&
                  params["inject_base_dependence"].get<bool>();

    std::vector<std::pair<Vector, Matrix>> samples;
    for (int i = 0; i < fiber_count; ++i) {
        Vector n = random_point(wp.fiber(), ctx.seed, static_cast<std::uint64_t>(i) + 413);
        for (const Vector& l : base_points) {
            Matrix g = wp.metric_at(l, n).matrix();
            if (inject) g(0, 0) += 0.1 * n(0);  // L-block made fiber-dependent
            Vector pt(l.size() + n.size());
            pt << l, n;
            samples.emplace_back(pt, g);
        }
    }
    BlockStructureReport report = verify_block_structure(
        samples, wp.base().k, wp.fiber().dim(),
        params.contains("tol") ? number_of(params["tol"]) : ctx.tolerance("block_structure"));
    values["off_block_ok"] = report.off_block_ok;
    values["base_independent_ok"] = report.base_independent_ok;
    values["fiber_proportional_ok"] = report.fiber_proportional_ok;
    values["worst_off_block"] = report.worst_off_block;
    values["worst_base_dependence"] = report.worst_base_dependence;
    values["worst_fiber_residual"] = report.worst_fiber_residual;
    bool ok = report.all_ok();
    if (params.contains("expect")) {
        const Json& e = params["expect"];
        ok = true;
        if (e.contains("all_ok")) ok = report.all_ok() == e["all_ok"].get<bool>();
        if (e.contains("base_independent_ok"))
            ok = ok && report.base_independent_ok == e["base_independent_ok"].get<bool>();
    }
    return ok;
}

bool check_gauss_equivariance(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    int pairs = params.contains("pairs") ? params["pairs"].get<int>() : 50;
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        auto rng = engine_for(ctx.seed, static_cast<std::uint64_t>(k) + 2027);
        std::uniform_real_distribution<double> amp(-2.0, 2.0);
        int i = k % a.algebra().dim();
        double s = amp(rng);
        Matrix g = Matrix(s * a.rep().matrices[static_cast<size_t>(i)]).exp();
        Vector x = random_point(a.space(), ctx.seed, static_cast<std::uint64_t>(k) + 4057);
        worst = std::max(worst, equivariance_residual(a, g, x));
    }
    values["worst_residual"] = worst;
    values["pairs"] = pairs;
    return worst <= ctx.tolerance("equivariance");
}

bool check_gauss_rank_identity(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    int samples = params.contains("samples") ? params["samples"].get<int>() : 100;
    int failures = 0;
    for (int k = 0; k < samples; ++k) {
        Vector x = random_point(a.space(), ctx.seed, static_cast<std::uint64_t>(k) + 6131);
        GaussSample phi = gauss_map(a, x);
        Signature sig = phi.phi.signature();
        int rank = sig.n_pos + sig.n_neg;
        int stab = stabilizer_algebra(a, x).dim();
        if (rank + stab != a.algebra().dim()) ++failures;
    }
    values["samples"] = samples;
    values["failures"] = failures;
    return failures == 0;
}

bool check_orbit_types(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    bool ok = true;
    Json results = Json::array();
    for (const auto& item : params.at("points")) {
        Vector x = vector_of(item.at("point"));
        OrbitType t = orbit_causal_type(a, x);
        Json r{{"point", item.at("point")}, {"type", to_string(t)}};
        if (item.contains("expect")) {
            bool match = to_string(t) == item["expect"].get<std::string>();
            r["match"] = match;
            ok = ok && match;
        }
        results.push_back(r);
    }
    values["results"] = results;
    return ok;
}

bool check_stabilizer(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    Vector x = vector_of(params.at("point"));
    Subspace stab = stabilizer_algebra(a, x);
    values["dim"] = stab.dim();
    Json nilp = Json::array();
    for (int j = 0; j < stab.dim(); ++j)
        nilp.push_back(is_ad_nilpotent(a.algebra(), stab.basis_vector(j)));
    values["basis_nilpotent"] = nilp;
    return expect_int(params, "dim", stab.dim(), values);
}

bool check_nonproper_search(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    RootDecomposition rd = context_rootdec(ctx);

    std::vector<Vector> candidates;
    const Json cand = params.contains("candidates") ? params["candidates"] : Json("lattice");
    auto add_lattice = [&]() {
        auto lattice = candidate_lattice(a.space());
        candidates.insert(candidates.end(), lattice.begin(), lattice.end());
    };
    if (cand.is_string() && cand == "lattice") {
        add_lattice();
    } else if (cand.is_object()) {
        if (cand.contains("lattice") && cand["lattice"].get<bool>()) add_lattice();
        if (cand.contains("points"))
            for (const auto& pj : cand["points"]) candidates.push_back(vector_of(pj));
        if (cand.contains("samples")) {
            auto extra = candidate_samples(a.space(), cand["samples"].get<int>(), ctx.seed);
            candidates.insert(candidates.end(), extra.begin(), extra.end());
        }
    } else if (cand.is_array()) {
        for (const auto& pj : cand) candidates.push_back(vector_of(pj));
    } else {
        throw ParseError("bad candidates spec");
    }
    values["candidate_count"] = candidates.size();

    auto witness = nonproper_witness_search(a, rd, candidates);
    values["found"] = witness.has_value();
    if (witness) {
        values["x"] = json_of(witness->x);
        values["X"] = json_of(witness->witness);
        values["x_causal_type"] =
            to_string(causal_type(a.space().ambient_form(), witness->x));
        values["killing_field_norm"] = killing_field(a, witness->witness, witness->x).norm();
        values["dim_negative_space"] = witness->certificate.dim_negative_space;
        values["fact_at_least_two"] = witness->certificate.fact_at_least_two;
        values["phi_restriction_max"] = witness->certificate.phi_restriction_max;
        values["chamber_t"] = json_of(witness->certificate.chamber_t);
        values["sl2r_hypothesis_violated"] = witness->certificate.sl2r_hypothesis_violated;
        values["interpretation"] = "Phi_x restricted to N_t tested identically zero";
        values["ad_nilpotent"] = is_ad_nilpotent(a.algebra(), witness->witness);
    }
    if (params.contains("expect")) {
        std::string want = params["expect"].get<std::string>();
        if (want == "witness") {
            if (!witness) return false;
            return killing_field(a, witness->witness, witness->x).norm() <=
                       ctx.tolerance("witness_field") &&
                   is_ad_nilpotent(a.algebra(), witness->witness);
        }
        if (want == "none") return !witness.has_value();
        throw ParseError("expect must be 'witness' or 'none'");
    }
    return true;
}

bool check_lemma43(const Context& ctx, const Json& params, Json& values) {
    std::vector<Vector> weights;
    for (const auto& wj : params.at("weights")) weights.push_back(vector_of(wj));
    Matrix basis = matrix_of(params.at("v_basis")).transpose();  // rows are vectors
    Subspace v(static_cast<int>(weights.size()), basis);
    auto witness = lemma43_witness(weights, v);
    values["found"] = witness.has_value();
    if (witness) {
        values["t0"] = json_of(witness->t0);
        values["side"] = std::string(1, witness->side);
        values["witness"] = json_of(witness->witness);
        values["chamber_index"] = witness->chamber_index;
    }
    bool ok = expect_bool(params, "found", witness.has_value(), values);
    if (witness && params.contains("expect") && params["expect"].contains("side"))
        ok = ok && std::string(1, witness->side) == params["expect"]["side"].get<std::string>();
    (void)ctx;
    return ok;
}

bool check_isotropy_irreducibility(const Context& ctx, const Json& params, Json& values) {
    const IsometricAction& a = ctx.need_action();
    Vector x = vector_of(params.at("point"));
    bool irr = isotropy_irreducibility(a, x);
    values["irreducible"] = irr;
    return expect_bool(params, "irreducible", irr, values);
}

const std::map<std::string, CheckSpec>& registry() {
    static const std::map<std::string, CheckSpec> reg = {
        {"root_decomposition",
         {check_root_decomposition,
          "root space decomposition; expect: root_count, space_dims, zero_dim"}},
        {"bracket_grading",
         {check_bracket_grading,
          "bracket grading, Killing orthogonality and nilpotency of root vectors"}},
        {"weight_decomposition",
         {check_weight_decomposition,
          "Sym^2 weight blocks; expect: block_dims, weight_count"}},
        {"chambers", {check_chambers, "chamber enumeration; expect: count"}},
        {"negative_weight_dims",
         {check_negative_weight_dims,
          "dim of the negative root-space sum per chamber; expect: min_dim, fact_holds"}},
        {"killing_signature",
         {check_killing_signature, "Killing form signature; expect: signature [p,q,r]"}},
        {"semisimple", {check_semisimple, "Killing nondegeneracy; expect: semisimple"}},
        {"sl2r_factor", {check_sl2r_factor, "sl(2,R) ideal fingerprint; expect: sl2r_factor"}},
        {"simple_ideals",
         {check_simple_ideals, "simple ideal split; expect: ideal_dims"}},
        {"invariant_maps",
         {check_invariant_maps,
          "intertwiner dimensions; params: kind=linear|antisym, rep_e, rep_f, dim_f; "
          "expect: dimension"}},
        {"invariant_isotropic_line",
         {check_invariant_isotropic_line,
          "preserved lightlike line of the action rep; expect: found"}},
        {"constant_curvature",
         {check_constant_curvature,
          "seeded curvature sampling; params: samples; expect: kappa, max_dev"}},
        {"curvature_consistency",
         {check_curvature_consistency,
          "Gauss-equation vs finite-difference curvature; params: samples"}},
        {"geodesic_consistency",
         {check_geodesic_consistency,
          "closed-form vs integrated geodesics, quadric and speed drift"}},
        {"totally_geodesic",
         {check_totally_geodesic,
          "geodesic hypersurface test; params: point, direction, n_rays, t_max, tol"}},
        {"polar_pullback",
         {check_polar_pullback,
          "polar warped-product pullback; params: n, samples, warp; expect: "
          "max_error_below | min_error_above"}},
        {"leaf_curvature_ratio",
         {check_leaf_curvature_ratio,
          "leaf curvatures and the inverse-ratio law; params: l1, l2, samples; expect: "
          "k1, k2"}},
        {"block_structure",
         {check_block_structure,
          "warped block structure of sampled metrics; params: base_points, "
          "fiber_samples, inject_base_dependence"}},
        {"gauss_equivariance",
         {check_gauss_equivariance, "equivariance residual of the Gauss map; params: pairs"}},
        {"gauss_rank_identity",
         {check_gauss_rank_identity,
          "rank(Phi_x) + dim stab = dim G at sampled points; params: samples"}},
        {"orbit_types",
         {check_orbit_types, "causal type of orbits; params: points[{point, expect}]"}},
        {"stabilizer",
         {check_stabilizer, "stabilizer algebra at a point; params: point; expect: dim"}},
        {"nonproper_search",
         {check_nonproper_search,
          "non-compact-stabilizer witness search; params: candidates; expect: "
          "witness|none"}},
        {"lemma43_witness",
         {check_lemma43,
          "diagonal non-properness criterion; params: weights, v_basis; expect: found, "
          "side"}},
        {"isotropy_irreducibility",
         {check_isotropy_irreducibility,
          "irreducibility of the isotropy rep on a Lorentz orbit; params: point"}},
    };
    return reg;
}

}  // namespace

std::vector<std::string> registered_check_names() {
    std::vector<std::string> names;
    for (const auto& [name, spec] : registry()) names.push_back(name);
    return names;
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (c.status != "pass") return false;
    return true;
}

bool Report::any_error() const {
    for (const auto& c : checks)
        if (c.status == "error") return true;
    return false;
}

int Report::exit_code() const {
    if (any_error()) return 2;
    return all_pass() ? 0 : 1;
}

Report run_scenario_bytes(const std::string& bytes, const RunOptions& options) {
    Json scenario;
    try {
        scenario = Json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        // recover line/column from the byte offset
        size_t line = 1, col = 1;
        for (size_t i = 0; i < std::min(bytes.size(), static_cast<size_t>(e.byte)); ++i) {
            if (bytes[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("scenario parse error at line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what());
    }

    Context ctx;
    ctx.seed = options.seed_override
                   ? *options.seed_override
                   : (scenario.contains("seed") ? scenario["seed"].get<std::uint64_t>() : 0);
    ctx.tolerances = default_tolerances();
    if (scenario.contains("tolerances"))
        for (auto& [key, value] : scenario["tolerances"].items()) {
            if (!ctx.tolerances.contains(key))
                throw ParseError("unknown tolerance key: " + key);
            ctx.tolerances[key] = number_of(value);
        }
    for (const auto& [key, value] : options.tolerance_overrides) {
        if (!ctx.tolerances.contains(key)) throw ParseError("unknown tolerance key: " + key);
        ctx.tolerances[key] = value;
    }

    if (scenario.contains("algebra")) parse_algebra_into(ctx, scenario["algebra"]);
    if (scenario.contains("space")) ctx.space = parse_space(scenario["space"]);
    if (scenario.contains("action")) parse_action_into(ctx, scenario["action"]);
    if (scenario.contains("warped")) parse_warped_into(ctx, scenario["warped"]);

    std::vector<std::pair<std::string, Json>> declared;
    if (scenario.contains("checks"))
        for (const auto& cj : scenario["checks"]) {
            std::string name;
            Json params = Json::object();
            if (cj.is_string()) {
                name = cj.get<std::string>();
            } else if (cj.is_object() && cj.contains("check")) {
                name = cj["check"].get<std::string>();
                params = cj;
            } else {
                throw ParseError("each check must be a name or an object with 'check'");
            }
            if (!registry().count(name)) throw UnknownCheck("unknown check: " + name);
            declared.emplace_back(std::move(name), std::move(params));
        }

    Report report;
    report.scenario_name =
        scenario.contains("name") ? scenario["name"].get<std::string>() : "unnamed";
    report.scenario_hash = fnv1a_hex(bytes);
    report.seed = ctx.seed;
    report.tolerances = ctx.tolerances;

    auto run_one = [&ctx](const std::string& name, const Json& params) {
        CheckResult result;
        result.name = name;
        result.values = Json::object();
        auto started = std::chrono::steady_clock::now();
        try {
            bool ok = registry().at(name).run(ctx, params, result.values);
            result.status = ok ? "pass" : "fail";
        } catch (const std::exception& e) {
            result.status = "error";
            result.values["error"] = e.what();
        }
        result.runtime_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - started)
                                .count();
        return result;
    };

    if (options.parallel) {
        std::vector<std::future<CheckResult>> futures;
        futures.reserve(declared.size());
        for (const auto& [name, params] : declared)
            futures.push_back(std::async(std::launch::async, run_one, name, params));
        for (auto& f : futures) report.checks.push_back(f.get());
    } else {
        for (const auto& [name, params] : declared)
            report.checks.push_back(run_one(name, params));
    }
    return report;
}

Report run_scenario(const std::string& path, const RunOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_scenario_bytes(buf.str(), options);
}

std::string emit_report(const Report& report, ReportFormat format, bool with_timings) {
    if (format == ReportFormat::Json) {
        Json out;
        out["scenario"] = report.scenario_name;
        out["scenario_hash"] = report.scenario_hash;
        out["seed"] = report.seed;
        out["tolerances"] = report.tolerances;
        Json checks = Json::array();
        for (const auto& c : report.checks) {
            Json cj;
            cj["name"] = c.name;
            cj["status"] = c.status;
            cj["values"] = c.values;
            if (with_timings) cj["runtime_ms"] = c.runtime_ms;
            checks.push_back(cj);
        }
        out["checks"] = checks;
        out["exit_code"] = report.exit_code();
        return out.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "scenario: " << report.scenario_name << "  (seed " << report.seed << ", hash "
        << report.scenario_hash << ")\n";
    for (const auto& c : report.checks) {
        out << "  [" << c.status << "] " << c.name;
        out << "  " << c.values.dump();
        out << "  (" << c.runtime_ms << " ms)\n";
    }
    out << (report.all_pass() ? "ALL PASS" : (report.any_error() ? "ERROR" : "FAIL"))
        << "\n";
    return out.str();
}

Json list_builtins() {
    Json out;
    out["algebras"] = builtin_algebra_names();
    out["spaces"] = Json::array({
        Json{{"type", "minkowski"}, {"params", "n"}},
        Json{{"type", "de_sitter"}, {"params", "n, radius"}},
        Json{{"type", "anti_de_sitter"}, {"params", "n, radius"}},
        Json{{"type", "quadric"}, {"params", "form (matrix), level"}},
    });
    out["actions"] = Json::array({Json{
        {"rep", "standard"},
        {"doc", "defining rep of a builtin orthogonal algebra on its form space"}}});
    Json checks = Json::object();
    for (const auto& [name, spec] : registry()) checks[name] = spec.doc;
    out["checks"] = checks;
    return out;
}

}  // namespace lorgeo
