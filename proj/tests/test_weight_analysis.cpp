#include <doctest.h>

#include <set>
#include <unsupported/Eigen/MatrixFunctions>

#include "lorgeo/errors.hpp"
#include "lorgeo/weight_analysis.hpp"

using namespace lorgeo;

namespace {

RootDecomposition decompose(const std::string& name) {
    BuiltinAlgebra b = builtin_algebra(name);
    REQUIRE(b.split_cartan.has_value());
    return root_space_decomposition(b.algebra, *b.split_cartan);
}

Vector scalar(double v) {
    Vector out(1);
    out << v;
    return out;
}

}  // namespace

TEST_CASE("Sym^2 weights of sl(2,R)") {
    RootDecomposition rd = decompose("sl(2,R)");
    WeightDecomposition wd = sym2_weight_decomposition(rd);
    REQUIRE(wd.weights.size() == 5);
    std::vector<double> values;
    std::vector<int> dims;
    for (size_t i = 0; i < wd.weights.size(); ++i) {
        values.push_back(wd.weights[i](0));
        dims.push_back(static_cast<int>(wd.blocks[i].size()));
    }
    CHECK(values[0] == doctest::Approx(-4.0));
    CHECK(values[1] == doctest::Approx(-2.0));
    CHECK(values[2] == doctest::Approx(0.0));
    CHECK(values[3] == doctest::Approx(2.0));
    CHECK(values[4] == doctest::Approx(4.0));
    CHECK(dims == std::vector<int>{1, 1, 2, 1, 1});
    CHECK(wd.total_block_dim() == 6);

    // oracle: conjugation by exp(ad_{tH}) scales each block by e^{lambda t}
    LieAlgebra sl2 = builtin_algebra("sl(2,R)").algebra;
    for (double t : {-0.7, 0.4}) {
        Matrix conj = Matrix(t * sl2.ad(Vector::Unit(3, 0))).exp();
        for (size_t wi = 0; wi < wd.weights.size(); ++wi) {
            double scale = std::exp(wd.weights[wi](0) * t);
            for (const Matrix& q : wd.blocks[wi]) {
                Matrix pulled = conj.transpose() * q * conj;
                CHECK((pulled - scale * q).cwiseAbs().maxCoeff() <
                      1e-7 * std::max(1.0, scale));
            }
        }
    }
}

TEST_CASE("Sym^2 of an abelian algebra is a single zero block") {
    LieAlgebra::Tensor c(2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
    LieAlgebra a = LieAlgebra::from_structure_constants(c);
    RootDecomposition rd = root_space_decomposition(a, Subspace::full(2));
    WeightDecomposition wd = sym2_weight_decomposition(rd);
    REQUIRE(wd.weights.size() == 1);
    CHECK(wd.blocks[0].size() == 3);
}

TEST_CASE("Sym^2 weights of so(1,3)") {
    WeightDecomposition wd = sym2_weight_decomposition(decompose("so(1,3)"));
    std::vector<int> dims;
    for (const auto& b : wd.blocks) dims.push_back(static_cast<int>(b.size()));
    CHECK(dims == std::vector<int>{3, 4, 7, 4, 3});
    CHECK(wd.total_block_dim() == 21);
}

TEST_CASE("weight projections") {
    RootDecomposition rd = decompose("sl(2,R)");
    WeightDecomposition wd = sym2_weight_decomposition(rd);

    SUBCASE("projection is the identity on its own block") {
        const Matrix& q = wd.blocks[3][0];
        Matrix back = project_onto_weight_space(wd, q, wd.weights[3]);
        CHECK((back - q).cwiseAbs().maxCoeff() < 1e-12);
        Matrix other = project_onto_weight_space(wd, q, wd.weights[0]);
        CHECK(other.cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("the Killing form is pure weight zero") {
        Matrix killing = killing_form(builtin_algebra("sl(2,R)").algebra).matrix();
        for (size_t wi = 0; wi < wd.weights.size(); ++wi) {
            Matrix comp = project_onto_weight_space(wd, killing, wd.weights[wi]);
            if (std::abs(wd.weights[wi](0)) < 1e-9)
                CHECK((comp - killing).cwiseAbs().maxCoeff() < 1e-9);
            else
                CHECK(comp.cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SUBCASE("the symmetrized square of a dual root vector has doubled weight") {
        // the E-dual covector squared lives at weight 2*alpha = 4
        Matrix p(3, 3);
        p.col(0) = rd.spaces[0].basis_vector(0);   // weight -2 vector (F)
        p.col(1) = rd.spaces[1].basis_vector(0);   // weight +2 vector (E)
        p.col(2) = rd.zero_space.basis_vector(0);  // H
        Matrix dual = p.inverse().transpose();
        Matrix q = dual.col(1) * dual.col(1).transpose();
        Matrix at4 = project_onto_weight_space(wd, q, scalar(4.0));
        CHECK((at4 - q).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("unknown weights are rejected") {
        CHECK_THROWS_AS(project_onto_weight_space(wd, Matrix::Identity(3, 3), scalar(3.0)),
                        UnknownWeight);
    }
}

TEST_CASE("chamber enumeration") {
    SUBCASE("rank one has two chambers at unit representatives") {
        // roots are listed as (-alpha, +alpha), so the lex-first pattern
        // (-,+) belongs to the chamber t = +1
        auto chambers = chamber_representatives(decompose("so(1,3)"));
        REQUIRE(chambers.size() == 2);
        CHECK(chambers[0].representative(0) == doctest::Approx(1.0));
        CHECK(chambers[1].representative(0) == doctest::Approx(-1.0));
    }
    SUBCASE("sl(3,R) has six chambers") {
        CHECK(chamber_representatives(decompose("sl(3,R)")).size() == 6);
    }
    SUBCASE("so(2,3) has eight chambers") {
        CHECK(chamber_representatives(decompose("so(2,3)")).size() == 8);
    }
    SUBCASE("so(2,2) has four chambers") {
        CHECK(chamber_representatives(decompose("so(2,2)")).size() == 4);
    }
    SUBCASE("patterns are distinct and closed under negation") {
        auto chambers = chamber_representatives(decompose("so(2,3)"));
        std::set<std::vector<int>> patterns;
        for (const auto& ch : chambers) patterns.insert(ch.sign_pattern);
        CHECK(patterns.size() == chambers.size());
        for (const auto& ch : chambers) {
            std::vector<int> neg = ch.sign_pattern;
            for (auto& s : neg) s = -s;
            CHECK(patterns.count(neg) == 1);
        }
    }
    SUBCASE("signs match the representative") {
        auto rd = decompose("so(2,3)");
        for (const auto& ch : chamber_representatives(rd))
            for (size_t r = 0; r < rd.roots.size(); ++r) {
                double v = rd.roots[r].dot(ch.representative);
                CHECK(v * ch.sign_pattern[r] > 1e-9);
            }
    }
    SUBCASE("rank above three is rejected") {
        CHECK_THROWS_AS(chamber_representatives(decompose("sl(5,R)")), RankTooLarge);
    }
}

TEST_CASE("negative weight subspaces") {
    SUBCASE("so(1,3) has a two-dimensional negative sum") {
        RootDecomposition rd = decompose("so(1,3)");
        CHECK(negative_weight_subspace(rd, scalar(1.0)).dim() == 2);
        CHECK(negative_weight_subspace(rd, scalar(-1.0)).dim() == 2);
        CHECK(negative_weight_subspace(rd, scalar(0.0)).dim() == 0);
    }
    SUBCASE("sl(2,R) is the one-dimensional boundary case") {
        RootDecomposition rd = decompose("sl(2,R)");
        CHECK(negative_weight_subspace(rd, scalar(1.0)).dim() == 1);
    }
}

TEST_CASE("the negative-dimension lower bound") {
    SUBCASE("holds for so(1,3)") {
        auto rd = decompose("so(1,3)");
        auto report = negative_dimension_fact(builtin_algebra("so(1,3)").algebra, rd);
        CHECK(report.chamber_dims == std::vector<int>{2, 2});
        CHECK(report.min_dim == 2);
        CHECK_FALSE(report.sl2r_factor);
        CHECK(report.fact_holds);
    }
    SUBCASE("holds for so(2,3) with dimension four") {
        auto rd = decompose("so(2,3)");
        auto report = negative_dimension_fact(builtin_algebra("so(2,3)").algebra, rd);
        CHECK(report.min_dim == 4);
        CHECK(report.fact_holds);
        CHECK_FALSE(report.sl2r_factor);
    }
    SUBCASE("fails exactly at the sl(2,R) boundary") {
        auto rd = decompose("sl(2,R)");
        auto report = negative_dimension_fact(builtin_algebra("sl(2,R)").algebra, rd);
        CHECK(report.min_dim == 1);
        CHECK(report.sl2r_factor);
        CHECK_FALSE(report.fact_holds);
        CHECK(report.counterexample_chamber >= 0);
    }
}

TEST_CASE("the diagonal non-properness witness") {
    std::vector<Vector> weights{scalar(1.0), scalar(-1.0)};

    SUBCASE("a coordinate axis yields a witness") {
        Matrix basis(2, 1);
        basis << 1, 0;
        auto w = lemma43_witness(weights, Subspace(2, basis));
        REQUIRE(w.has_value());
        CHECK(w->t0(0) == doctest::Approx(-1.0));
        CHECK(w->side == 'y');
        CHECK(w->chamber_index == 0);
        CHECK(std::abs(w->witness(0)) == doctest::Approx(1.0));
        CHECK(w->witness(1) == doctest::Approx(0.0));
    }
    SUBCASE("the diagonal line yields none") {
        Matrix basis(2, 1);
        basis << 1, 1;
        CHECK_FALSE(lemma43_witness(weights, Subspace(2, basis)).has_value());
    }
    SUBCASE("the full space always has a witness, on side x of the first chamber") {
        auto w = lemma43_witness(weights, Subspace::full(2));
        REQUIRE(w.has_value());
        CHECK(w->t0(0) == doctest::Approx(-1.0));
        CHECK(w->side == 'x');
        CHECK(w->witness(0) == doctest::Approx(0.0));
        CHECK(w->witness(1) == doctest::Approx(1.0));
    }
    SUBCASE("witness coordinates vanish exactly on the constrained set") {
        std::vector<Vector> w2;
        Vector a(2), b(2), c(2);
        a << 1, 0;
        b << 0, 1;
        c << -1, -1;
        w2 = {a, b, c};
        Matrix basis(3, 2);
        basis << 1, 0, 0, 1, 0, 0;
        auto w = lemma43_witness(w2, Subspace(3, basis));
        REQUIRE(w.has_value());
        for (size_t i = 0; i < w2.size(); ++i) {
            double sign = w2[i].dot(w->t0);
            bool constrained = (w->side == 'x') ? sign < 0 : sign > 0;
            if (constrained) CHECK(std::abs(w->witness(static_cast<Eigen::Index>(i))) <= 1e-12);
        }
    }
    SUBCASE("weights must span the dual") {
        Vector a(2), b(2);
        a << 1, 0;
        b << 2, 0;
        CHECK_THROWS_AS(lemma43_witness({a, b}, Subspace::full(2)), NotGenerating);
    }
    SUBCASE("zero subspaces have no witness") {
        CHECK_FALSE(lemma43_witness(weights, Subspace::zero(2)).has_value());
    }
}
