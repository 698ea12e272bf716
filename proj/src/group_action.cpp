#include "lorgeo/group_action.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "lorgeo/errors.hpp"
#include "lorgeo/rng.hpp"

namespace lorgeo {

std::string to_string(OrbitType t) {
    switch (t) {
        case OrbitType::Lorentz: return "lorentz";
        case OrbitType::Spacelike: return "spacelike";
        case OrbitType::Lightlike: return "lightlike";
        case OrbitType::Point: return "point";
    }
    return "?";
}

IsometricAction::IsometricAction(LieAlgebra algebra, MatrixRep rep, ModelSpace space)
    : algebra_(std::move(algebra)), rep_(std::move(rep)), space_(std::move(space)) {
    if (!rep_.algebra.same_structure(algebra_))
        throw AlgebraMismatch("rep does not represent the given algebra");
    if (rep_.rep_dim() != space_.ambient_dim())
        throw DimensionMismatch("rep dimension does not match the ambient space");
    const Matrix& f = space_.ambient_form().matrix();
    for (const auto& m : rep_.matrices)
        if (linalg::max_abs(m.transpose() * f + f * m) > tol::eps_skew *
                std::max(1.0, linalg::max_abs(m)))
            throw NotSkew("action generators are not skew for the ambient form");
}

IsometricAction IsometricAction::standard(const std::string& algebra_name,
                                          ModelSpace space) {
    BuiltinAlgebra b = builtin_algebra(algebra_name);
    return IsometricAction(b.algebra, b.standard_rep, std::move(space));
}

Vector killing_field(const IsometricAction& a, const Vector& x_alg, const Vector& x) {
    a.space().require_on_space(x);
    return a.rep().rho(x_alg) * x;
}

GaussSample gauss_map(const IsometricAction& a, const Vector& x) {
    a.space().require_on_space(x);
    const int n = a.algebra().dim();
    Matrix killing(a.space().ambient_dim(), n);
    for (int i = 0; i < n; ++i) killing.col(i) = a.rep().matrices[static_cast<size_t>(i)] * x;
    Matrix phi = killing.transpose() * a.space().ambient_form().matrix() * killing;
    return GaussSample{x, BilinearForm(phi)};
}

namespace {

// Ad_g on algebra coordinates, from conjugation in the rep: the matrix of
// X -> g rho(X) g^{-1} expanded back in the rep basis.
Matrix adjoint_of_group_element(const IsometricAction& a, const Matrix& g) {
    const int n = a.algebra().dim();
    const int m = a.space().ambient_dim();
    Matrix g_inv = g.inverse();
    Matrix stacked(static_cast<Eigen::Index>(m) * m, n);
    for (int i = 0; i < n; ++i) {
        const Matrix& rho = a.rep().matrices[static_cast<size_t>(i)];
        stacked.col(i) = Eigen::Map<const Vector>(rho.data(), rho.size());
    }
    auto qr = stacked.colPivHouseholderQr();
    Matrix ad(n, n);
    for (int i = 0; i < n; ++i) {
        Matrix conj = g * a.rep().matrices[static_cast<size_t>(i)] * g_inv;
        Vector rhs = Eigen::Map<const Vector>(conj.data(), conj.size());
        Vector coeff = qr.solve(rhs);
        if ((stacked * coeff - rhs).cwiseAbs().maxCoeff() > 1e-7)
            throw NotIsometry("g does not normalize the rep image");
        ad.col(i) = coeff;
    }
    return ad;
}

}  // namespace

double equivariance_residual(const IsometricAction& a, const Matrix& g, const Vector& x) {
    const Matrix& f = a.space().ambient_form().matrix();
    if (linalg::max_abs(g.transpose() * f * g - f) > 1e-8 * std::max(1.0, linalg::max_abs(f)))
        throw NotIsometry("g does not preserve the ambient form");
    Matrix phi_x = gauss_map(a, x).phi.matrix();
    Matrix phi_gx = gauss_map(a, g * x).phi.matrix();
    Matrix ad_g_inv = adjoint_of_group_element(a, Matrix(g.inverse()));
    Matrix pushed = ad_g_inv.transpose() * phi_x * ad_g_inv;
    return linalg::max_abs(pushed - phi_gx);
}

Subspace stabilizer_algebra(const IsometricAction& a, const Vector& x) {
    a.space().require_on_space(x);
    const int n = a.algebra().dim();
    Matrix killing(a.space().ambient_dim(), n);
    for (int i = 0; i < n; ++i) killing.col(i) = a.rep().matrices[static_cast<size_t>(i)] * x;
    Matrix ker = linalg::kernel_basis(killing, tol::eps_rank * std::max(1.0, x.norm()));
    Subspace stab(n, ker);
    if (stab.dim() + linalg::rank_of(killing, tol::eps_rank * std::max(1.0, x.norm())) != n)
        throw Error("rank-nullity failed for the stabilizer computation");
    return stab;
}

OrbitType orbit_causal_type(const IsometricAction& a, const Vector& x) {
    a.space().require_on_space(x);
    const int n = a.algebra().dim();
    Matrix killing(a.space().ambient_dim(), n);
    for (int i = 0; i < n; ++i) killing.col(i) = a.rep().matrices[static_cast<size_t>(i)] * x;
    Matrix tangent = linalg::column_space_basis(killing, tol::eps_rank * std::max(1.0, x.norm()));
    if (tangent.cols() == 0) return OrbitType::Point;
    Signature sig =
        restrict_form(a.space().ambient_form(), Subspace(a.space().ambient_dim(), tangent))
            .signature();
    if (sig.n_null > 0) return OrbitType::Lightlike;
    if (sig.n_neg == 1) return OrbitType::Lorentz;
    return OrbitType::Spacelike;
}

// --- candidates -----------------------------------------------------------------

namespace {

int causal_rank(const ModelSpace& space, const Vector& x) {
    double q = space.ambient_form()(x, x);
    if (std::abs(q) <= tol::eps_causal) return 0;  // lightlike first
    return q < 0 ? 1 : 2;                          // then timelike, then spacelike
}

}  // namespace

std::vector<Vector> candidate_lattice(const ModelSpace& space) {
    const int m = space.ambient_dim();
    std::vector<Vector> raw;
    // all {-1,0,1} directions except the origin, in lexicographic order
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
        Vector v(m);
        int rem = code;
        for (int i = 0; i < m; ++i) {
            v(i) = static_cast<double>(rem % 3 - 1);
            rem /= 3;
        }
        if (v.norm() == 0.0) continue;
        raw.push_back(v);
    }

    std::stable_sort(raw.begin(), raw.end(), [&space](const Vector& a, const Vector& b) {
        return causal_rank(space, a) < causal_rank(space, b);
    });

    std::vector<Vector> out;
    for (double scale : {1.0, 0.5, 2.0}) {
        for (const Vector& v : raw) {
            Vector x = scale * v;
            if (space.flat()) {
                out.push_back(x);
                continue;
            }
            double q = space.ambient_form()(x, x);
            if (q * space.level() <= 1e-9) continue;  // cannot be scaled onto the quadric
            out.push_back(x * std::sqrt(space.level() / q));
        }
        if (!space.flat()) break;  // scaling is redundant on a quadric
    }
    return out;
}

std::vector<Vector> candidate_samples(const ModelSpace& space, int count,
                                      std::uint64_t seed) {
    std::vector<Vector> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(random_point(space, seed, static_cast<std::uint64_t>(i)));
    return out;
}

// --- the witness pipeline ------------------------------------------------------------

std::optional<NonproperWitness> nonproper_witness_search(
    const IsometricAction& a, const RootDecomposition& rootdec,
    const std::vector<Vector>& candidates) {
    if (!is_semisimple(a.algebra()))
        throw NotSemisimple("the witness search requires a semisimple algebra");
    const bool sl2r = has_sl2r_factor(a.algebra());

    auto chambers = chamber_representatives(rootdec);
    struct ChamberData {
        const Chamber* chamber;
        Subspace negative;
    };
    std::vector<ChamberData> data;
    data.reserve(chambers.size());
    for (const auto& ch : chambers)
        data.push_back({&ch, negative_weight_subspace(rootdec, ch.representative)});

    for (const Vector& x : candidates) {
        if (!a.space().contains(x)) continue;
        GaussSample phi = gauss_map(a, x);
        Subspace stab = stabilizer_algebra(a, x);
        if (stab.dim() == 0) continue;
        for (const auto& cd : data) {
            if (cd.negative.dim() == 0) continue;
            Matrix restriction = cd.negative.basis().transpose() * phi.phi.matrix() *
                                 cd.negative.basis();
            double restriction_max = linalg::max_abs(restriction);
            if (restriction_max > 1e-8) continue;  // N_t not isotropic for Phi_x
            Matrix inter = linalg::intersect_column_spans(cd.negative.basis(),
                                                          stab.basis(), tol::eps_rank);
            if (inter.cols() == 0) continue;
            Vector witness = inter.col(0);
            witness.normalize();
            if (killing_field(a, witness, x).norm() > 1e-9 * std::max(1.0, x.norm()))
                continue;
            if (!is_ad_nilpotent(a.algebra(), witness)) continue;
            WitnessCertificate cert;
            cert.chamber_t = cd.chamber->representative;
            cert.sign_pattern = cd.chamber->sign_pattern;
            cert.dim_negative_space = cd.negative.dim();
            cert.fact_at_least_two = cd.negative.dim() >= 2;
            cert.phi_restriction_max = restriction_max;
            cert.sl2r_hypothesis_violated = sl2r;
            return NonproperWitness{x, witness, cert};
        }
    }
    return std::nullopt;
}

// --- isotropy irreducibility ---------------------------------------------------------

bool isotropy_irreducibility(const IsometricAction& a, const Vector& x) {
    if (orbit_causal_type(a, x) != OrbitType::Lorentz)
        throw NotLorentzOrbit("isotropy irreducibility is defined on Lorentz orbits");

    const int n = a.algebra().dim();
    Matrix killing(a.space().ambient_dim(), n);
    for (int i = 0; i < n; ++i) killing.col(i) = a.rep().matrices[static_cast<size_t>(i)] * x;
    Matrix tangent = linalg::column_space_basis(killing, tol::eps_rank);
    const int d = static_cast<int>(tangent.cols());
    Subspace stab = stabilizer_algebra(a, x);
    if (stab.dim() == 0) return d <= 1;

    // induced stabilizer generators on the orbit tangent space
    std::vector<Matrix> induced;
    for (int s = 0; s < stab.dim(); ++s) {
        Matrix rho = a.rep().rho(stab.basis_vector(s));
        double residual = 0.0;
        Matrix r = linalg::restrict_operator(rho, tangent, &residual);
        if (residual > 1e-8) throw Error("stabilizer does not preserve the orbit tangent");
        induced.push_back(std::move(r));
    }

    // eigenspace-lattice search for a common invariant subspace
    std::vector<Matrix> candidates{Matrix::Identity(d, d)};
    for (const auto& g : induced) {
        Eigen::EigenSolver<Matrix> es(g, false);
        std::vector<double> real_evs;
        for (Eigen::Index i = 0; i < d; ++i)
            if (std::abs(es.eigenvalues()(i).imag()) < 1e-8)
                real_evs.push_back(es.eigenvalues()(i).real());
        std::sort(real_evs.begin(), real_evs.end());
        real_evs.erase(std::unique(real_evs.begin(), real_evs.end(),
                                   [](double p, double q) { return std::abs(p - q) < 1e-8; }),
                       real_evs.end());
        std::vector<Matrix> next;
        for (const auto& cand : candidates)
            for (double lambda : real_evs) {
                Matrix eig = linalg::kernel_basis(g - lambda * Matrix::Identity(d, d), 1e-8);
                if (eig.cols() == 0) continue;
                Matrix inter = linalg::intersect_column_spans(cand, eig, 1e-9);
                if (inter.cols() > 0) next.push_back(inter);
            }
        candidates = std::move(next);
        if (candidates.empty()) break;
    }
    for (const auto& cand : candidates)
        if (cand.cols() > 0 && cand.cols() < d) return false;  // proper invariant subspace

    // commutant dimension of the induced rep must look like a division algebra
    Matrix id_d = Matrix::Identity(d, d);
    Matrix comm = linalg::common_kernel(
        d * d, static_cast<int>(induced.size()),
        [&](int i) {
            return Matrix(
                Eigen::kroneckerProduct(id_d, induced[static_cast<size_t>(i)]) -
                Eigen::kroneckerProduct(induced[static_cast<size_t>(i)].transpose(), id_d));
        },
        1e-9);
    int commutant_dim = static_cast<int>(comm.cols());
    return commutant_dim == 1 || commutant_dim == 2 || commutant_dim == 4;
}

}  // namespace lorgeo
