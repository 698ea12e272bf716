// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 10 replays the scenario directory twice and compares
// report bytes, so the directory path is taken as argv[1].

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "lorgeo/group_action.hpp"
#include "lorgeo/rng.hpp"
#include "lorgeo/scenario.hpp"
#include "lorgeo/warped_product.hpp"

namespace fs = std::filesystem;
using namespace lorgeo;

namespace {

int failures = 0;

void report(int number, const std::string& what, bool ok,
            const std::string& detail = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << what;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

// 1. Constant sectional curvature on the model spaces.
void criterion_constant_curvature() {
    CurvatureEstimate ds = constant_curvature_estimate(ModelSpace::de_sitter(3, 1.0), 200, 42);
    CurvatureEstimate ads =
        constant_curvature_estimate(ModelSpace::anti_de_sitter(3, 1.0), 200, 42);
    CurvatureEstimate ds2 = constant_curvature_estimate(ModelSpace::de_sitter(3, 2.0), 200, 42);
    CurvatureEstimate mink = constant_curvature_estimate(ModelSpace::minkowski(3), 200, 42);
    bool ok = std::abs(ds.kappa_hat - 1.0) <= 1e-5 && ds.max_dev <= 1e-5 &&
              std::abs(ads.kappa_hat + 1.0) <= 1e-5 && ads.max_dev <= 1e-5 &&
              std::abs(ds2.kappa_hat - 0.25) <= 1e-5 && ds2.max_dev <= 1e-5 &&
              std::abs(mink.kappa_hat) <= 1e-9 && mink.max_dev <= 1e-9;
    report(1, "constant curvature of dS(3,1)=1, AdS(3,1)=-1, dS(3,2)=0.25, Mink=0", ok,
           "kappas " + fmt(ds.kappa_hat) + ", " + fmt(ads.kappa_hat) + ", " +
               fmt(ds2.kappa_hat) + ", " + fmt(mink.kappa_hat));
}

// 2. Polar warped product of the spacelike region, with negative control.
void criterion_polar_pullback() {
    double e2 = verify_polar_pullback(2, 100, 42);
    double e3 = verify_polar_pullback(3, 100, 42);
    double wrong = verify_polar_pullback(2, 100, 42, Polynomial::parse("r"));
    bool ok = e2 <= 1e-6 && e3 <= 1e-6 && wrong >= 0.1;
    report(2, "polar pullback matches dr^2 + r^2 m (and the linear warp fails)", ok,
           "errors " + fmt(e2) + ", " + fmt(e3) + ", control " + fmt(wrong));
}

// 3. Inverse-ratio law for leaf curvatures.
void criterion_leaf_ratio() {
    WarpedProduct wp(BaseSpace::half_line(), ModelSpace::de_sitter(2, 1.0),
                     Polynomial::parse("r^2"));
    Vector l1(1), l2(1);
    l1 << 1.0;
    l2 << 2.0;
    LeafCurvatureResult res = leaf_curvature_ratio(wp, l1, l2, 50, 42);
    bool ok = std::abs(res.k1 - 1.0) <= 1e-6 && std::abs(res.k2 - 0.25) <= 1e-6 &&
              res.ratio_error <= 1e-6;
    report(3, "leaf curvatures (1, 0.25) with inverse-ratio residual <= 1e-6", ok,
           "K1 " + fmt(res.k1) + ", K2 " + fmt(res.k2) + ", ratio_error " +
               fmt(res.ratio_error));
}

// 4. Root and weight machinery of so(1,3).
void criterion_root_weights() {
    BuiltinAlgebra b = builtin_algebra("so(1,3)");
    RootDecomposition rd = root_space_decomposition(b.algebra, *b.split_cartan);
    bool dims_ok = rd.roots.size() == 2 && rd.spaces[0].dim() == 2 &&
                   rd.spaces[1].dim() == 2 && rd.zero_space.dim() == 2;

    // exhaustive grading residual
    Matrix p(6, 6);
    std::vector<int> owner;
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
    double grading = 0.0;
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (size_t s = 0; s < rd.roots.size(); ++s) {
            Vector sum = rd.roots[r] + rd.roots[s];
            int target = rd.root_index(sum);
            bool to_zero = sum.cwiseAbs().maxCoeff() < 1e-6;
            for (int i = 0; i < rd.spaces[r].dim(); ++i)
                for (int j = 0; j < rd.spaces[s].dim(); ++j) {
                    Vector coeff = qr.solve(b.algebra.bracket(
                        rd.spaces[r].basis_vector(i), rd.spaces[s].basis_vector(j)));
                    for (size_t col = 0; col < owner.size(); ++col) {
                        bool allowed = to_zero ? owner[col] == -1
                                               : owner[col] == static_cast<int>(target);
                        if (!allowed)
                            grading = std::max(
                                grading, std::abs(coeff(static_cast<Eigen::Index>(col))));
                    }
                }
        }

    WeightDecomposition wd = sym2_weight_decomposition(rd);
    std::vector<int> block_dims;
    for (const auto& blk : wd.blocks) block_dims.push_back(static_cast<int>(blk.size()));
    bool blocks_ok = block_dims == std::vector<int>{3, 4, 7, 4, 3} &&
                     wd.total_block_dim() == 21;

    // exhaustive weight-block orthogonality
    std::vector<std::pair<Vector, Vector>> graded;
    for (size_t r = 0; r < rd.roots.size(); ++r)
        for (int j = 0; j < rd.spaces[r].dim(); ++j)
            graded.emplace_back(rd.roots[r], rd.spaces[r].basis_vector(j));
    for (int j = 0; j < rd.zero_space.dim(); ++j)
        graded.emplace_back(Vector::Zero(1), rd.zero_space.basis_vector(j));
    double orth = 0.0;
    for (size_t wi = 0; wi < wd.weights.size(); ++wi)
        for (const Matrix& q : wd.blocks[wi])
            for (const auto& [va, xa] : graded)
                for (const auto& [vb, xb] : graded) {
                    if ((va + vb - wd.weights[wi]).cwiseAbs().maxCoeff() < 1e-6) continue;
                    orth = std::max(orth, std::abs(xa.dot(q * xb)));
                }

    bool ok = dims_ok && grading <= 1e-8 && orth <= 1e-8 && blocks_ok;
    report(4, "so(1,3) roots (2,2,2), grading/orthogonality <= 1e-8, blocks (3,4,7,4,3)",
           ok, "grading " + fmt(grading) + ", orthogonality " + fmt(orth));
}

// 5. The negative root-space dimension lower bound, with its boundary.
void criterion_negative_dims() {
    auto run = [](const std::string& name) {
        BuiltinAlgebra b = builtin_algebra(name);
        RootDecomposition rd = root_space_decomposition(b.algebra, *b.split_cartan);
        return negative_dimension_fact(b.algebra, rd);
    };
    NegativeDimReport so13 = run("so(1,3)");
    NegativeDimReport so23 = run("so(2,3)");
    NegativeDimReport sl2 = run("sl(2,R)");
    bool ok = so13.min_dim >= 2 && so23.min_dim >= 2 && !so13.sl2r_factor &&
              !so23.sl2r_factor && sl2.min_dim == 1 && sl2.sl2r_factor;
    report(5, "negative root-space dims >= 2 for so(1,3), so(2,3); = 1 for sl(2,R)", ok,
           "mins " + std::to_string(so13.min_dim) + ", " + std::to_string(so23.min_dim) +
               ", " + std::to_string(sl2.min_dim));
}

// 6. The non-compact-stabilizer witness pipeline.
void criterion_witness_pipeline() {
    BuiltinAlgebra b = builtin_algebra("so(1,3)");
    RootDecomposition rd = root_space_decomposition(b.algebra, *b.split_cartan);

    IsometricAction flat = IsometricAction::standard("so(1,3)", ModelSpace::minkowski(3));
    std::vector<Vector> lightlike;
    for (const Vector& x : candidate_lattice(flat.space()))
        if (causal_type(flat.space().ambient_form(), x) == CausalType::Lightlike)
            lightlike.push_back(x);
    auto witness = nonproper_witness_search(flat, rd, lightlike);

    bool witness_ok = false;
    std::string detail = "no witness";
    if (witness) {
        double field = killing_field(flat, witness->witness, witness->x).norm();
        Matrix adx = b.algebra.ad(witness->witness);
        adx /= adx.norm();
        Matrix power = adx;
        for (int i = 1; i < 6; ++i) power = power * adx;
        double nilp = power.cwiseAbs().maxCoeff();
        witness_ok =
            causal_type(flat.space().ambient_form(), witness->x) == CausalType::Lightlike &&
            field <= 1e-9 && nilp <= 1e-8;
        detail = "field " + fmt(field) + ", (ad X)^6 " + fmt(nilp);
    }

    ModelSpace sheet = ModelSpace::quadric(BilinearForm::minkowski(3), -1.0);
    IsometricAction proper = IsometricAction::standard("so(1,3)", sheet);
    std::vector<Vector> candidates = candidate_lattice(sheet);
    auto extra = candidate_samples(sheet, 500, 42);
    candidates.insert(candidates.end(), extra.begin(), extra.end());
    bool proper_ok = candidates.size() >= 500 &&
                     !nonproper_witness_search(proper, rd, candidates).has_value();

    report(6, "witness on Minkowski (lightlike, nilpotent); none on the hyperbolic sheet",
           witness_ok && proper_ok,
           detail + ", proper candidates " + std::to_string(candidates.size()));
}

// 7. Gauss map contracts on the shipped actions.
void criterion_gauss_contracts() {
    double worst_equiv = 0.0;
    bool rank_ok = true;
    std::vector<IsometricAction> actions;
    actions.push_back(IsometricAction::standard("so(1,2)", ModelSpace::minkowski(2)));
    actions.push_back(IsometricAction::standard("so(1,3)", ModelSpace::minkowski(3)));
    actions.push_back(IsometricAction::standard(
        "so(1,3)", ModelSpace::quadric(BilinearForm::minkowski(3), -1.0)));
    for (const auto& a : actions) {
        for (int k = 0; k < 50; ++k) {
            auto rng = engine_for(42, static_cast<std::uint64_t>(k) + 2027);
            std::uniform_real_distribution<double> amp(-2.0, 2.0);
            int i = k % a.algebra().dim();
            Matrix g = Matrix(amp(rng) * a.rep().matrices[static_cast<size_t>(i)]).exp();
            Vector x = random_point(a.space(), 42, static_cast<std::uint64_t>(k) + 4057);
            worst_equiv = std::max(worst_equiv, equivariance_residual(a, g, x));
        }
        for (int k = 0; k < 100; ++k) {
            Vector x = random_point(a.space(), 42, static_cast<std::uint64_t>(k) + 6131);
            GaussSample s = gauss_map(a, x);
            int rank = s.phi.signature().n_pos + s.phi.signature().n_neg;
            if (rank + stabilizer_algebra(a, x).dim() != a.algebra().dim())
                rank_ok = false;
        }
    }
    bool ok = worst_equiv <= 1e-7 && rank_ok;
    report(7, "equivariance <= 1e-7 on 50 pairs per action; rank identity on 100 samples",
           ok, "worst residual " + fmt(worst_equiv));
}

// 8. Triviality of invariant maps, with the identity positive control.
void criterion_invariant_maps() {
    BuiltinAlgebra so12 = builtin_algebra("so(1,2)");
    BuiltinAlgebra so13 = builtin_algebra("so(1,3)");
    size_t to_trivial =
        invariant_linear_maps(so12.standard_rep, MatrixRep::trivial(so12.algebra, 1)).size();
    size_t antisym = invariant_antisym_bilinear_maps(so13.standard_rep, 1).size();
    size_t self_maps = invariant_linear_maps(so12.standard_rep, so12.standard_rep).size();
    bool ok = to_trivial == 0 && antisym == 0 && self_maps == 1;
    report(8, "invariant linear/antisymmetric maps are trivial; identity control is 1-dim",
           ok,
           "dims " + std::to_string(to_trivial) + ", " + std::to_string(antisym) + ", " +
               std::to_string(self_maps));
}

// 9. sl(2,R)-factor detection across the builtin families.
void criterion_sl2_detection() {
    bool ok = has_sl2r_factor(builtin_algebra("so(1,2)").algebra) &&
              has_sl2r_factor(builtin_algebra("so(2,2)").algebra) &&
              !has_sl2r_factor(builtin_algebra("so(1,3)").algebra) &&
              !has_sl2r_factor(builtin_algebra("so(1,4)").algebra) &&
              !has_sl2r_factor(builtin_algebra("so(2,3)").algebra);
    report(9, "sl(2,R) factors: so(1,2), so(2,2) yes; so(1,3), so(1,4), so(2,3) no", ok);
}

// 10. Determinism: the scenario suite at seed 42, twice, byte for byte.
void criterion_determinism(const std::string& scenario_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(scenario_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    bool ok = !files.empty();
    int all_pass = 0;
    std::string mismatch;
    RunOptions options;
    options.seed_override = 42;
    for (const auto& file : files) {
        std::string first = emit_report(run_scenario(file.string(), options),
                                        ReportFormat::Json);
        std::string second = emit_report(run_scenario(file.string(), options),
                                         ReportFormat::Json);
        Report check = run_scenario(file.string(), options);
        if (first != second) {
            ok = false;
            mismatch = file.filename().string();
        }
        if (check.exit_code() == 0) ++all_pass;
    }
    ok = ok && all_pass == static_cast<int>(files.size());
    report(10, "scenario suite at seed 42 is byte-identical across runs and all-pass", ok,
           std::to_string(all_pass) + "/" + std::to_string(files.size()) + " scenarios" +
               (mismatch.empty() ? "" : ", mismatch in " + mismatch));
}

}  // namespace

int main(int argc, char** argv) {
    std::string scenario_dir = argc > 1 ? argv[1] : "scenarios";
    try {
        criterion_constant_curvature();
        criterion_polar_pullback();
        criterion_leaf_ratio();
        criterion_root_weights();
        criterion_negative_dims();
        criterion_witness_pipeline();
        criterion_gauss_contracts();
        criterion_invariant_maps();
        criterion_sl2_detection();
        criterion_determinism(scenario_dir);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance suite aborted: " << e.what() << "\n";
        return 1;
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                                : "ACCEPTANCE: " + std::to_string(failures) +
                                      " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
