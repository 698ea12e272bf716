#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lorgeo/errors.hpp"
#include "lorgeo/pseudo_linalg.hpp"
#include "lorgeo/rng.hpp"

using namespace lorgeo;

namespace {

Vector vec3(double a, double b, double c) {
    Vector v(3);
    v << a, b, c;
    return v;
}

// Killing matrix of so(1,2) on the basis {M01, M02, M12}, by brute force
// from explicit 3x3 matrix commutators. Used as an oracle for signature().
Matrix so12_killing_oracle() {
    Matrix m01 = Matrix::Zero(3, 3), m02 = Matrix::Zero(3, 3), m12 = Matrix::Zero(3, 3);
    m01 << 0, 1, 0, 1, 0, 0, 0, 0, 0;
    m02 << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    m12 << 0, 0, 0, 0, 0, 1, 0, -1, 0;
    std::vector<Matrix> basis{m01, m02, m12};
    auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
    // expand commutators in the basis: entries (0,1), (0,2), (1,2) identify
    // the coefficients on M01, M02, M12 respectively (epsilon_j = +1 there)
    auto coords = [](const Matrix& c) { return vec3(c(0, 1), c(0, 2), c(1, 2)); };
    std::vector<Matrix> ad(3, Matrix::Zero(3, 3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ad[i].col(j) = coords(comm(basis[i], basis[j]));
    Matrix killing(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) killing(i, j) = (ad[i] * ad[j]).trace();
    return killing;
}

}  // namespace

TEST_CASE("signature of normal forms") {
    CHECK(BilinearForm::diagonal(vec3(-1, 1, 1)).signature() == Signature{2, 1, 0});
    CHECK(BilinearForm(Matrix::Zero(3, 3)).signature() == Signature{0, 0, 3});
    CHECK(BilinearForm::diagonal(vec3(1, 1, 1)).signature() == Signature{3, 0, 0});
}

TEST_CASE("signature of the so(1,2) Killing form") {
    // oracle: eigen-decompose the brute-force Killing matrix
    Matrix killing = so12_killing_oracle();
    Eigen::SelfAdjointEigenSolver<Matrix> es(killing, Eigen::EigenvaluesOnly);
    int pos = 0, neg = 0;
    for (int i = 0; i < 3; ++i) {
        if (es.eigenvalues()(i) > 1e-9) ++pos;
        if (es.eigenvalues()(i) < -1e-9) ++neg;
    }
    REQUIRE(pos == 2);
    REQUIRE(neg == 1);
    CHECK(BilinearForm(killing).signature() == Signature{2, 1, 0});
}

TEST_CASE("causal classification on Minkowski") {
    BilinearForm q = BilinearForm::minkowski(2);
    CHECK(causal_type(q, vec3(1, 0, 0)) == CausalType::Timelike);
    CHECK(causal_type(q, vec3(1, 1, 0)) == CausalType::Lightlike);
    CHECK(causal_type(q, vec3(0, 1, 1)) == CausalType::Spacelike);
    CHECK_THROWS_AS(causal_type(q, Vector::Zero(3)), ZeroVector);
}

TEST_CASE("causal type is scale invariant") {
    BilinearForm q = BilinearForm::minkowski(2);
    auto rng = engine_for(7, 0);
    for (int i = 0; i < 50; ++i) {
        Vector v = gaussian_vector(rng, 3);
        if (v.norm() < 1e-3) continue;
        CausalType t = causal_type(q, v);
        for (double c : {-10.0, -2.0, 0.5, 3.0})
            CHECK(causal_type(q, Vector(c * v)) == t);
    }
}

TEST_CASE("orthogonal complements") {
    BilinearForm q = BilinearForm::minkowski(2);

    SUBCASE("a lightlike line lies in its own complement") {
        Subspace line = Subspace::span_of({vec3(1, 1, 0)});
        Subspace comp = orthogonal_complement(q, line);
        CHECK(comp.dim() == 2);
        CHECK(comp.contains(vec3(1, 1, 0)));
    }
    SUBCASE("a timelike axis") {
        Subspace comp = orthogonal_complement(q, Subspace::span_of({vec3(1, 0, 0)}));
        CHECK(comp.dim() == 2);
        CHECK(comp.contains(vec3(0, 1, 0)));
        CHECK(comp.contains(vec3(0, 0, 1)));
    }
    SUBCASE("everything is orthogonal for the zero form") {
        BilinearForm zero(Matrix::Zero(2, 2));
        Vector e0(2);
        e0 << 1, 0;
        Subspace comp = orthogonal_complement(zero, Subspace::span_of({e0}));
        CHECK(comp.dim() == 2);
    }
    SUBCASE("dimension mismatch is rejected") {
        Vector e0(2);
        e0 << 1, 0;
        CHECK_THROWS_AS(orthogonal_complement(q, Subspace::span_of({e0})),
                        DimensionMismatch);
    }
}

TEST_CASE("restricted forms") {
    BilinearForm q = BilinearForm::minkowski(2);
    CHECK(restrict_form(q, Subspace::span_of({vec3(0, 1, 0), vec3(0, 0, 1)})).signature() ==
          Signature{2, 0, 0});
    CHECK(restrict_form(q, Subspace::span_of({vec3(1, 1, 0)})).signature() ==
          Signature{0, 0, 1});
    CHECK(restrict_form(q, Subspace::span_of({vec3(1, 0, 0), vec3(0, 1, 0)})).signature() ==
          Signature{1, 1, 0});
}

TEST_CASE("maximal isotropic dimensions") {
    Vector lorentz4(4), split4(4);
    lorentz4 << -1, 1, 1, 1;
    split4 << -1, -1, 1, 1;
    CHECK(max_isotropic_dim(BilinearForm::diagonal(lorentz4), Subspace::full(4)) == 1);
    CHECK(max_isotropic_dim(BilinearForm::diagonal(split4), Subspace::full(4)) == 2);
    CHECK(max_isotropic_dim(BilinearForm(Matrix::Zero(2, 2)), Subspace::full(2)) == 2);
}

TEST_CASE("Sylvester invariance under change of basis") {
    auto rng = engine_for(42, 1);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(split_seed(42, static_cast<std::uint64_t>(trial)) % 5);
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = gaussian_vector(rng, 1)(0);
        BilinearForm form(0.5 * (m + m.transpose()));
        Matrix p;
        do {
            p.resize(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) p(i, j) = gaussian_vector(rng, 1)(0);
        } while (std::abs(p.determinant()) < 0.1);
        BilinearForm moved(p.transpose() * form.matrix() * p);
        CHECK(moved.signature() == form.signature());
    }
}

TEST_CASE("complement dimensions for a nondegenerate form") {
    BilinearForm q = BilinearForm::minkowski(3);
    auto rng = engine_for(3, 9);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 1 + static_cast<int>(split_seed(3, static_cast<std::uint64_t>(trial)) % 3);
        Matrix basis(4, k);
        for (int j = 0; j < k; ++j) basis.col(j) = gaussian_vector(rng, 4);
        Subspace s(4, basis);
        CHECK(s.dim() + orthogonal_complement(q, s).dim() == 4);
    }
}

TEST_CASE("isotropic subspaces of a Lorentz form have dimension at most one") {
    Vector lorentz4(4);
    lorentz4 << -1, 1, 1, 1;
    BilinearForm q = BilinearForm::diagonal(lorentz4);
    CHECK(max_isotropic_dim(q, Subspace::full(4)) == 1);
    auto rng = engine_for(17, 2);
    for (int trial = 0; trial < 40; ++trial) {
        int k = 1 + static_cast<int>(split_seed(17, static_cast<std::uint64_t>(trial)) % 3);
        Matrix basis(4, k);
        for (int j = 0; j < k; ++j) basis.col(j) = gaussian_vector(rng, 4);
        Subspace s(4, basis);
        Signature sig = restrict_form(q, s).signature();
        if (sig.n_null == 0 || (sig.n_null <= 1 && sig.n_neg == 0))
            CHECK(max_isotropic_dim(q, s) <= 1);
    }
}

TEST_CASE("degenerate bases are rejected") {
    Matrix dependent(3, 2);
    dependent.col(0) = vec3(1, 2, 3);
    dependent.col(1) = vec3(2, 4, 6);
    CHECK_THROWS_AS(Subspace(3, dependent), DegenerateBasis);
}
