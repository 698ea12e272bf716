#include <doctest.h>

#include <cmath>

#include "lorgeo/errors.hpp"
#include "lorgeo/rng.hpp"
#include "lorgeo/warped_product.hpp"

using namespace lorgeo;

namespace {

Vector scalar(double v) {
    Vector out(1);
    out << v;
    return out;
}

WarpedProduct half_line_over_de_sitter(const std::string& warp) {
    return WarpedProduct(BaseSpace::half_line(), ModelSpace::de_sitter(2, 1.0),
                         Polynomial::parse(warp));
}

}  // namespace

TEST_CASE("warp polynomial grammar") {
    Polynomial p = Polynomial::parse("r^2");
    CHECK(p(2.0) == doctest::Approx(4.0));
    CHECK(p.deriv(2.0) == doctest::Approx(4.0));
    CHECK(p.deriv2(2.0) == doctest::Approx(2.0));

    CHECK(Polynomial::parse("1")(5.0) == doctest::Approx(1.0));
    CHECK(Polynomial::parse("2*r + 1")(3.0) == doctest::Approx(7.0));
    CHECK(Polynomial::parse("3r^2 - r")(2.0) == doctest::Approx(10.0));
    CHECK(Polynomial::parse("1/2")(9.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Polynomial::parse(""), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("r^-1"), ParseError);
}

TEST_CASE("warped metrics are block diagonal") {
    SUBCASE("a constant warp gives the direct product") {
        WarpedProduct wp = half_line_over_de_sitter("1");
        Vector n(3);
        n << 0, 1, 0;
        Matrix g = wp_metric_at(wp, scalar(3.0), n).matrix();
        Matrix fiber_metric = metric_at(wp.fiber(), n).matrix();
        CHECK(g(0, 0) == doctest::Approx(1.0));
        CHECK((g.bottomRightCorner(2, 2) - fiber_metric).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("the fiber block is scaled by the warp") {
        WarpedProduct wp = half_line_over_de_sitter("r^2");
        Vector n(3);
        n << 0, 1, 0;
        Matrix g = wp_metric_at(wp, scalar(2.0), n).matrix();
        Matrix fiber_metric = metric_at(wp.fiber(), n).matrix();
        CHECK((g.bottomRightCorner(2, 2) - 4.0 * fiber_metric).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(g.topRightCorner(1, 2).cwiseAbs().maxCoeff() == 0.0);
        CHECK(g.bottomLeftCorner(2, 1).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("the base block does not depend on the fiber point") {
        WarpedProduct wp = half_line_over_de_sitter("r^2 + 1");
        Vector n1(3), n2(3);
        n1 << 0, 1, 0;
        n2 << 0, 0, 1;
        Matrix g1 = wp_metric_at(wp, scalar(1.5), n1).matrix();
        Matrix g2 = wp_metric_at(wp, scalar(1.5), n2).matrix();
        CHECK((g1.topLeftCorner(1, 1) - g2.topLeftCorner(1, 1)).cwiseAbs().maxCoeff() ==
              0.0);
    }
    SUBCASE("base and fiber membership are enforced") {
        WarpedProduct wp = half_line_over_de_sitter("r^2");
        Vector n(3);
        n << 0, 1, 0;
        CHECK_THROWS_AS(wp_metric_at(wp, scalar(-1.0), n), PointOffSpace);
        Vector off(3);
        off << 0, 2, 0;
        CHECK_THROWS_AS(wp_metric_at(wp, scalar(1.0), off), PointOffSpace);
    }
}

TEST_CASE("the polar map of the spacelike region") {
    Vector u(3);
    u << 0, 1, 0;
    CHECK((minkowski_polar_map(2, 1.0, u) - u).norm() == 0.0);
    Vector image = minkowski_polar_map(2, 3.0, u);
    CHECK(image(1) == doctest::Approx(3.0));
    CHECK(BilinearForm::minkowski(2)(image, image) == doctest::Approx(9.0));
    CHECK_THROWS_AS(minkowski_polar_map(2, 0.0, u), NonPositiveRadius);
    Vector off(3);
    off << 1, 0, 0;
    CHECK_THROWS_AS(minkowski_polar_map(2, 1.0, off), PointOffSpace);
    CHECK_THROWS_AS(minkowski_polar_inverse(2, off), PointOffSpace);  // timelike input

    SUBCASE("round trips on sampled spacelike points") {
        BilinearForm q = BilinearForm::minkowski(3);
        auto rng = engine_for(19, 0);
        int done = 0;
        while (done < 30) {
            Vector x = gaussian_vector(rng, 4);
            if (q(x, x) <= 0.1) continue;
            auto [r, w] = minkowski_polar_inverse(3, x);
            CHECK((minkowski_polar_map(3, r, w) - x).norm() <= 1e-12 * x.norm());
            ++done;
        }
    }
    SUBCASE("the image remains spacelike") {
        auto rng = engine_for(19, 1);
        ModelSpace ds = ModelSpace::de_sitter(2, 1.0);
        for (int i = 0; i < 20; ++i) {
            Vector w = random_point(ds, 19, static_cast<std::uint64_t>(i));
            Vector image = minkowski_polar_map(2, 0.3 + 0.1 * i, w);
            CHECK(BilinearForm::minkowski(2)(image, image) > 0.0);
        }
        (void)rng;
    }
}

TEST_CASE("polar pullback matches the warped metric") {
    CHECK(verify_polar_pullback(2, 100, 5) <= 1e-6);
    CHECK(verify_polar_pullback(3, 100, 5) <= 1e-6);
    // negative control: the linear warp is wrong by |r^2 - r|
    CHECK(verify_polar_pullback(2, 100, 5, Polynomial::parse("r")) >= 0.1);
}

TEST_CASE("homothety scaling of constant-curvature metrics") {
    // scaling the metric by c divides the sectional curvature by c; the
    // scaled metric is realized as the level quadric at c * level
    ModelSpace ds = ModelSpace::de_sitter(2, 1.0);
    for (double c : {0.25, 0.5, 2.0, 4.0}) {
        ModelSpace scaled = ModelSpace::quadric(ds.ambient_form(), ds.level() * c);
        CurvatureEstimate est = constant_curvature_estimate(scaled, 50, 13);
        CHECK(est.kappa_hat == doctest::Approx(1.0 / c).epsilon(1e-6));
        CHECK(est.max_dev <= 1e-6);
    }
}

TEST_CASE("leaf curvatures and the inverse-ratio law") {
    SUBCASE("unit warp is the direct-product limit") {
        WarpedProduct wp = half_line_over_de_sitter("1");
        LeafCurvatureResult res =
            leaf_curvature_ratio(wp, scalar(1.0), scalar(5.0), 50, 3);
        CHECK(std::abs(res.k1 - res.fiber_curvature) <= 1e-8);
        CHECK(std::abs(res.k2 - res.fiber_curvature) <= 1e-8);
    }
    SUBCASE("constant warp reproduces the fiber curvature scaled once") {
        WarpedProduct wp = half_line_over_de_sitter("4");
        LeafCurvatureResult res =
            leaf_curvature_ratio(wp, scalar(1.0), scalar(7.0), 50, 3);
        CHECK(res.k1 == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(res.k2 == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(res.ratio_error <= 1e-8);
    }
    SUBCASE("de Sitter leaves at warp 1 and 4") {
        WarpedProduct wp = half_line_over_de_sitter("r^2");
        LeafCurvatureResult res =
            leaf_curvature_ratio(wp, scalar(1.0), scalar(2.0), 50, 3);
        CHECK(res.k1 == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(res.k2 == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(res.ratio_error <= 1e-6);
    }
    SUBCASE("anti-de Sitter fiber at warp 2") {
        WarpedProduct wp(BaseSpace::half_line(), ModelSpace::anti_de_sitter(2, 1.0),
                         Polynomial::parse("2"));
        LeafCurvatureResult res =
            leaf_curvature_ratio(wp, scalar(1.0), scalar(3.0), 50, 3);
        CHECK(res.k1 == doctest::Approx(-0.5).epsilon(1e-6));
    }
    SUBCASE("flat fibers are rejected") {
        WarpedProduct wp(BaseSpace::half_line(), ModelSpace::minkowski(2),
                         Polynomial::parse("r^2"));
        CHECK_THROWS_AS(leaf_curvature_ratio(wp, scalar(1.0), scalar(2.0), 20, 3),
                        FlatFiber);
    }
}

TEST_CASE("block structure verification") {
    WarpedProduct wp = half_line_over_de_sitter("r^2");
    std::vector<Vector> fiber_points;
    for (int i = 0; i < 4; ++i)
        fiber_points.push_back(random_point(wp.fiber(), 29, static_cast<std::uint64_t>(i)));

    auto build = [&](bool inject) {
        std::vector<std::pair<Vector, Matrix>> samples;
        for (double r : {1.0, 2.0})
            for (const Vector& n : fiber_points) {
                Matrix g = wp.metric_at(scalar(r), n).matrix();
                if (inject) g(0, 0) += 0.05 * n(1);
                Vector pt(4);
                pt << r, n;
                samples.emplace_back(pt, g);
            }
        return samples;
    };

    SUBCASE("genuine warped samples pass") {
        BlockStructureReport report = verify_block_structure(build(false), 1, 2, 1e-9);
        CHECK(report.all_ok());
        REQUIRE(report.recovered_factors.size() == 1);
        CHECK(report.recovered_factors[0] == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("an injected fiber-dependent base block is caught") {
        BlockStructureReport report = verify_block_structure(build(true), 1, 2, 1e-9);
        CHECK_FALSE(report.base_independent_ok);
        CHECK(report.off_block_ok);
    }
    SUBCASE("polar-coordinate samples pass with the squared factor") {
        ModelSpace ds = ModelSpace::de_sitter(2, 1.0);
        Vector u0(3);
        u0 << 0, 1, 0;
        GraphChart chart(ds, u0);
        std::vector<Vector> ys = {Vector::Zero(2), 0.2 * Vector::Ones(2)};
        std::vector<std::pair<Vector, Matrix>> samples;
        for (double r : {1.0, 1.5})
            for (const Vector& y : ys) {
                Matrix g = Matrix::Zero(3, 3);
                g(0, 0) = 1.0;
                g.bottomRightCorner(2, 2) = r * r * chart.metric(y);
                Vector pt(3);
                pt << r, y;
                samples.emplace_back(pt, g);
            }
        BlockStructureReport report = verify_block_structure(samples, 1, 2, 1e-9);
        CHECK(report.all_ok());
        REQUIRE(report.recovered_factors.size() == 1);
        CHECK(report.recovered_factors[0] == doctest::Approx(2.25).epsilon(1e-9));
    }
    SUBCASE("shape mismatches are rejected") {
        std::vector<std::pair<Vector, Matrix>> bad{{Vector::Zero(3), Matrix::Zero(2, 2)}};
        CHECK_THROWS_AS(verify_block_structure(bad, 1, 2, 1e-9), ShapeError);
    }
}
