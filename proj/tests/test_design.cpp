#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "eopt/design.hpp"
#include "eopt/tcheb.hpp"
#include "eopt/weight.hpp"
#include "test_support.hpp"

using eopt::Design;
using eopt::SymMatrix;
using eopt::TchebFunction;
using eopt::TchebPoints;
using eopt::WeightFn;

namespace {

Design make_design(std::vector<double> x, std::vector<double> rho) {
    return Design{std::move(x), std::move(rho)};
}

Design build(int m, const char* w_text, bool exact, int alpha = 0, int beta = 0) {
    const WeightFn w = WeightFn::parse(w_text);
    const TchebFunction tf = exact ? eopt::exact_tcheb_function(m, alpha, beta)
                                   : eopt::approx_tcheb_function(m, w, -1, 1);
    return tcheb_design(tf, find_tcheb_points(tf, m)).design;
}

}  // namespace

TEST_CASE("fisher matrix") {
    const Design mu = make_design({-1.0, 0.0, 1.0}, {0.2, 0.6, 0.2});
    const SymMatrix m = fisher_matrix(mu, 3);
    const double expected[3][3] = {{1.0, 0.0, 0.4}, {0.0, 0.4, 0.0}, {0.4, 0.0, 0.4}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.at(i, j) == Catch::Approx(expected[i][j]).margin(1e-15));

    // single-point design: rank one outer product scaled by w
    const WeightFn w = WeightFn::parse("exp(x)");
    const Design point = make_design({0.5}, {1.0});
    const SymMatrix r1 = fisher_matrix(point, 4, &w);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(r1.at(i, j) ==
                  Catch::Approx(std::exp(0.5) * std::pow(0.5, i + j)).epsilon(1e-14));

    CHECK_THROWS_AS(fisher_matrix(mu, 0), std::domain_error);
    const WeightFn bad = WeightFn::parse("1/x");
    CHECK_THROWS_AS(fisher_matrix(make_design({0.0}, {1.0}), 2, &bad), eopt::EvalError);

    // reference-table design for w = (1-x)(1+x), m = 3
    const WeightFn w11 = WeightFn::parse("(1-x)*(1+x)");
    const Design table = make_design({-0.8660, 0.0, 0.8660}, {0.3137, 0.3725, 0.3137});
    CHECK(min_eigenvalue(fisher_matrix(table, 3, &w11)) == Catch::Approx(5.882e-2).epsilon(1e-3));
}

TEST_CASE("smallest eigenvalue") {
    SymMatrix eye(5);
    for (int i = 0; i < 5; ++i) eye.set(i, i, 1.0);
    CHECK(min_eigenvalue(eye) == Catch::Approx(1.0).epsilon(1e-14));

    SymMatrix diag(3);
    diag.set(0, 0, 3.0);
    diag.set(1, 1, 0.5);
    diag.set(2, 2, 7.0);
    CHECK(min_eigenvalue(diag) == Catch::Approx(0.5).epsilon(1e-14));

    SymMatrix m(3);
    m.set(0, 0, 1.0);
    m.set(1, 1, 0.4);
    m.set(2, 2, 0.4);
    m.set(0, 2, 0.4);
    CHECK(min_eigenvalue(m) == Catch::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("eigenvalues agree with the bisection oracle") {
    eopt::Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const SymMatrix m = testsup::random_symmetric(n, rng);
        const double jac = min_eigenvalue(m);
        const double ora = testsup::min_eigenvalue_bisection(m);
        CHECK(jac == Catch::Approx(ora).margin(1e-10));
    }
}

TEST_CASE("criteria record") {
    Design mu = make_design({-1.0, 0.0, 1.0}, {0.2, 0.6, 0.2});
    const auto id_like = criteria(mu, 3, nullptr);
    CHECK(id_like.e_value == Catch::Approx(0.2).epsilon(1e-12));
    REQUIRE(id_like.a_value.has_value());
    // identity matrix: everything is 1
    Design unit = make_design({-1.0, 0.0, 1.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    SymMatrix eye(4);
    for (int i = 0; i < 4; ++i) eye.set(i, i, 1.0);
    const auto eigs = eopt::symmetric_eigenvalues(eye);
    CHECK(eigs.front() == 1.0);
    CHECK(eigs.back() == 1.0);

    // a one-point design cannot support three parameters
    const auto singular = criteria(make_design({0.3}, {1.0}), 3, nullptr);
    CHECK_FALSE(singular.a_value.has_value());
    CHECK(singular.d_value == 0.0);
    CHECK(singular.e_value <= 1e-12);
    CHECK_THROWS_AS(singular.phi(1.0), eopt::SingularityError);

    const auto fine = criteria(mu, 3, nullptr);
    // by hand: M = [[1,0,.4],[0,.4,0],[.4,0,.4]] has tr(M^-1) = 25/3
    CHECK(*fine.a_value == Catch::Approx(25.0 / 9.0).epsilon(1e-12));
    CHECK(fine.d_value == Catch::Approx(std::cbrt(0.4 * 0.24)).epsilon(1e-12));
    CHECK(fine.phi(1.0) == Catch::Approx(*fine.a_value).epsilon(1e-12));
    CHECK(fine.phi(100.0) >= fine.phi(1.0) - 1e-12);  // increasing toward 1/lambda_min
    CHECK_THROWS_AS(fine.phi(0.0), std::domain_error);
}

TEST_CASE("design construction from alternation points") {
    SECTION("constant weight closed form") {
        const TchebFunction tf = eopt::exact_tcheb_function(3, 0, 0);
        const auto result = tcheb_design(tf, find_tcheb_points(tf, 3));
        REQUIRE(result.design.size() == 3);
        CHECK(result.design.support[0] == -1.0);
        CHECK(result.design.support[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(result.design.support[2] == 1.0);
        CHECK(result.design.masses[0] == Catch::Approx(0.2).epsilon(1e-12));
        CHECK(result.design.masses[1] == Catch::Approx(0.6).epsilon(1e-12));
        CHECK(result.design.masses[2] == Catch::Approx(0.2).epsilon(1e-12));
        CHECK(result.mass_sum_raw == Catch::Approx(1.0).margin(1e-10));
    }

    SECTION("exponential weight matches the reference table") {
        const Design mu = build(3, "exp(x)", false);
        CHECK(mu.support[0] == Catch::Approx(-1.0).margin(5e-4));
        CHECK(mu.support[1] == Catch::Approx(0.2405).margin(5e-4));
        CHECK(mu.support[2] == Catch::Approx(1.0).margin(5e-4));
        CHECK(mu.masses[0] == Catch::Approx(0.3204).margin(5e-4));
        CHECK(mu.masses[1] == Catch::Approx(0.5360).margin(5e-4));
        CHECK(mu.masses[2] == Catch::Approx(0.1436).margin(5e-4));
    }

    SECTION("square-root weight matches the reference table") {
        const Design mu = build(3, "(1-x)^0.5*(2+x)^0.5", false);
        CHECK(mu.support[0] == Catch::Approx(-1.0).margin(5e-4));
        CHECK(mu.support[1] == Catch::Approx(-0.1252).margin(5e-4));
        CHECK(mu.support[2] == Catch::Approx(0.9215).margin(5e-4));
        CHECK(mu.masses[0] == Catch::Approx(0.1721).margin(5e-4));
        CHECK(mu.masses[1] == Catch::Approx(0.4896).margin(5e-4));
        CHECK(mu.masses[2] == Catch::Approx(0.3383).margin(5e-4));
    }

    SECTION("masses sum to one") {
        for (const char* w : {"1", "exp(x)", "(1-x)^0.5*(2+x)^0.5"}) {
            for (int m : {3, 6, 10}) {
                const Design mu = build(m, w, false);
                double sum = 0.0;
                for (double r : mu.masses) {
                    CHECK(r >= 0.0);
                    sum += r;
                }
                CHECK(sum == Catch::Approx(1.0).margin(1e-12));
            }
        }
    }

    SECTION("infeasible coefficient vector is rejected") {
        TchebFunction tf;
        tf.gamma = {2.0, 0.0, 1.0};
        TchebPoints pts{{-1.0, 0.0, 1.0}, {1.0, -1.0, 1.0}};
        CHECK_THROWS_AS(tcheb_design(tf, pts), eopt::InfeasibilityError);
    }

    SECTION("singular interpolation matrix is a structure error") {
        TchebFunction tf;
        tf.gamma = {-1.0, 0.0, 2.0};
        TchebPoints pts{{0.0, 0.0, 1.0}, {1.0, -1.0, 1.0}};
        CHECK_THROWS_AS(tcheb_design(tf, pts), eopt::StructureError);
    }
}

TEST_CASE("efficiency ratio") {
    const WeightFn w1 = WeightFn::parse("1");
    const Design mu = build(3, "1", true, 0, 0);
    CHECK(e_efficiency(mu, mu, 3, &w1) == 1.0);

    // closed-form reference vs orthogonalization route
    for (int alpha : {0, 1}) {
        for (int beta : {0, 1}) {
            static const char* alias[2][2] = {{"1", "1+x"}, {"1-x", "(1-x)*(1+x)"}};
            const WeightFn w = WeightFn::parse(alias[alpha][beta]);
            for (int m : {3, 10}) {
                const Design approx = build(m, alias[alpha][beta], false);
                const Design exact = build(m, alias[alpha][beta], true, alpha, beta);
                const double eff = e_efficiency(approx, exact, m, &w);
                INFO("alpha=" << alpha << " beta=" << beta << " m=" << m);
                CHECK(std::abs(1.0 - eff) <= 1e-8);
            }
        }
    }

    const Design degenerate = make_design({0.5}, {1.0});
    CHECK_THROWS_AS(e_efficiency(mu, degenerate, 3, &w1), std::domain_error);
}

TEST_CASE("reference search") {
    const WeightFn w = WeightFn::parse("1");

    SECTION("budget one returns the seed design unchanged") {
        const Design seed = build(3, "1", false);
        const Design out = random_search_baseline(3, w, -1, 1, 1, 12345);
        CHECK(out.support == seed.support);
        CHECK(out.masses == seed.masses);
    }

    SECTION("deterministic and worker-count independent") {
        const Design a = random_search_baseline(3, w, -1, 1, 4000, 9, 1);
        const Design b = random_search_baseline(3, w, -1, 1, 4000, 9, 1);
        const Design c = random_search_baseline(3, w, -1, 1, 4000, 9, 4);
        CHECK(a.support == b.support);
        CHECK(a.masses == b.masses);
        CHECK(a.support == c.support);
        CHECK(a.masses == c.masses);
    }

    SECTION("different seeds explore differently but stay monotone") {
        const Design seed = build(3, "exp(x)", false);
        const WeightFn we = WeightFn::parse("exp(x)");
        const double lam0 = min_eigenvalue(fisher_matrix(seed, 3, &we));
        for (std::uint64_t s : {1ull, 2ull, 3ull}) {
            const Design out = random_search_baseline(3, we, -1, 1, 3000, s);
            CHECK(min_eigenvalue(fisher_matrix(out, 3, &we)) >= lam0);
            CHECK(e_efficiency(seed, out, 3, &we) <= 1.0 + 1e-9);
        }
    }

    SECTION("constant weight search stays at the optimum level") {
        const Design out = random_search_baseline(3, w, -1, 1, 200000, 1);
        CHECK(min_eigenvalue(fisher_matrix(out, 3, nullptr)) >= 0.1999);
    }

    CHECK_THROWS_AS(random_search_baseline(3, w, -1, 1, 0, 1), std::domain_error);
}

TEST_CASE("least-squares estimator") {
    SECTION("interpolation recovers coefficients exactly") {
        const std::vector<double> theta = {1.0, -2.0, 0.5};
        eopt::RegressionData data;
        data.m = 3;
        data.conditions = {-1.0, 0.3, 0.9};
        for (double x : data.conditions)
            data.responses.push_back(theta[0] + theta[1] * x + theta[2] * x * x);
        const auto fit = blue_estimate(data);
        for (int k = 0; k < 3; ++k)
            CHECK(fit.theta_hat[static_cast<std::size_t>(k)] ==
                  Catch::Approx(theta[static_cast<std::size_t>(k)]).margin(1e-10));
    }

    SECTION("three-point line fit") {
        eopt::RegressionData data;
        data.m = 2;
        data.conditions = {-1.0, 0.0, 1.0};
        data.responses = {0.0, 1.0, 2.0};
        const auto fit = blue_estimate(data);
        CHECK(fit.theta_hat[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(fit.theta_hat[1] == Catch::Approx(1.0).margin(1e-12));
        // covariance factor is the inverse of X^T X = diag(3, 2)
        CHECK(fit.covariance_factor[0] == Catch::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(fit.covariance_factor[3] == Catch::Approx(0.5).epsilon(1e-12));
        CHECK(fit.covariance_factor[1] == Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("weighted fit keeps residuals w-orthogonal to the basis") {
        const WeightFn w = WeightFn::parse("exp(x)");
        eopt::RegressionData data;
        data.m = 3;
        data.conditions = {-0.9, -0.4, 0.0, 0.3, 0.7, 1.0};
        data.responses = {1.2, 0.4, -0.1, 0.2, 0.9, 1.7};
        const auto fit = blue_estimate(data, &w);
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < data.conditions.size(); ++i) {
                const double x = data.conditions[i];
                const double pred = fit.theta_hat[0] + fit.theta_hat[1] * x + fit.theta_hat[2] * x * x;
                dot += w(x) * std::pow(x, j) * (data.responses[i] - pred);
            }
            CHECK(dot == Catch::Approx(0.0).margin(1e-10));
        }
    }

    SECTION("rank deficiency raises") {
        eopt::RegressionData dup;
        dup.m = 2;
        dup.conditions = {0.5, 0.5};
        dup.responses = {1.0, 1.0};
        CHECK_THROWS_AS(blue_estimate(dup), eopt::SingularityError);

        eopt::RegressionData tiny;
        tiny.m = 3;
        tiny.conditions = {0.0, 1.0};
        tiny.responses = {1.0, 1.0};
        CHECK_THROWS_AS(blue_estimate(tiny), std::domain_error);
    }
}

TEST_CASE("mirror and symmetry laws") {
    SECTION("w = 1+x mirrors w = 1-x") {
        for (int m : {3, 10}) {
            const Design down = build(m, "1-x", true, 1, 0);
            const Design up = build(m, "1+x", true, 0, 1);
            for (int i = 0; i < m; ++i) {
                const std::size_t j = static_cast<std::size_t>(m - 1 - i);
                CHECK(up.support[static_cast<std::size_t>(i)] ==
                      Catch::Approx(-down.support[j]).margin(1e-8));
                CHECK(up.masses[static_cast<std::size_t>(i)] ==
                      Catch::Approx(down.masses[j]).margin(1e-8));
            }
        }
    }

    SECTION("symmetric weights give symmetric designs") {
        for (const char* w : {"1", "(1-x)*(1+x)"}) {
            for (int m : {3, 6, 10}) {
                const Design mu = build(m, w, false);
                for (int i = 0; i < m; ++i) {
                    const std::size_t j = static_cast<std::size_t>(m - 1 - i);
                    INFO("w=" << w << " m=" << m);
                    CHECK(mu.support[static_cast<std::size_t>(i)] ==
                          Catch::Approx(-mu.support[j]).margin(1e-8));
                    CHECK(mu.masses[static_cast<std::size_t>(i)] ==
                          Catch::Approx(mu.masses[j]).margin(1e-8));
                }
            }
        }
    }
}

TEST_CASE("information matrices are positive semidefinite") {
    eopt::Rng rng(31);
    const WeightFn w = WeightFn::parse("exp(x)");
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        Design mu;
        double sum = 0.0;
        double x = -1.0;
        for (int i = 0; i < n; ++i) {
            x += rng.uniform(0.01, 2.0 / n);
            mu.support.push_back(std::min(x, 1.0 - 1e-6 * (n - i)));
            const double r = rng.uniform(0.0, 1.0);
            mu.masses.push_back(r);
            sum += r;
        }
        for (double& r : mu.masses) r /= sum;
        const int m = 2 + static_cast<int>(rng.below(4));
        CHECK(min_eigenvalue(fisher_matrix(mu, m, &w)) >= -1e-10);
    }
}

TEST_CASE("normalized coefficients tie the eigenvalue to the design") {
    // lambda_min * (gamma^T gamma) = 1 on the closed-form family.
    for (int alpha : {0, 1}) {
        for (int beta : {0, 1}) {
            for (int m = 3; m <= 10; ++m) {
                const TchebFunction tf = eopt::exact_tcheb_function(m, alpha, beta);
                const auto result = tcheb_design(tf, find_tcheb_points(tf, m));
                const double lam =
                    min_eigenvalue(fisher_matrix(result.design, m, &tf.weight));
                double gg = 0.0;
                for (double g : tf.gamma) gg += g * g;
                INFO("alpha=" << alpha << " beta=" << beta << " m=" << m);
                CHECK(lam * gg == Catch::Approx(1.0).margin(1e-6));
            }
        }
    }

    // spot value: constant weight, m = 10, lambda = 1/598417
    const TchebFunction tf = eopt::exact_tcheb_function(10, 0, 0);
    const auto result = tcheb_design(tf, find_tcheb_points(tf, 10));
    const double lam = min_eigenvalue(fisher_matrix(result.design, 10, nullptr));
    CHECK(lam == Catch::Approx(1.0 / 598417.0).epsilon(1e-3));
    CHECK(lam == Catch::Approx(1.671e-6).epsilon(1e-3));
}

TEST_CASE("scaling the weight rescales the eigenvalue only") {
    const WeightFn w = WeightFn::parse("(1-x)*(1+x)");
    const WeightFn w_half = WeightFn::parse("0.5*(1-x)*(1+x)");
    const Design a = [&] {
        const TchebFunction tf = eopt::approx_tcheb_function(4, w, -1, 1);
        return tcheb_design(tf, find_tcheb_points(tf, 4)).design;
    }();
    const Design b = [&] {
        const TchebFunction tf = eopt::approx_tcheb_function(4, w_half, -1, 1);
        return tcheb_design(tf, find_tcheb_points(tf, 4)).design;
    }();
    for (int i = 0; i < 4; ++i) {
        CHECK(a.support[static_cast<std::size_t>(i)] ==
              Catch::Approx(b.support[static_cast<std::size_t>(i)]).margin(1e-10));
        CHECK(a.masses[static_cast<std::size_t>(i)] ==
              Catch::Approx(b.masses[static_cast<std::size_t>(i)]).margin(1e-10));
    }
    const double lam_a = min_eigenvalue(fisher_matrix(a, 4, &w));
    const double lam_b = min_eigenvalue(fisher_matrix(b, 4, &w_half));
    CHECK(lam_b == Catch::Approx(0.5 * lam_a).epsilon(1e-10));
}

TEST_CASE("design validation") {
    CHECK_THROWS_AS(eopt::validate_design(Design{{0.0, 0.0}, {0.5, 0.5}}, -1, 1),
                    std::domain_error);
    CHECK_THROWS_AS(eopt::validate_design(Design{{0.0, 1.0}, {0.5, 0.4}}, -1, 1),
                    std::domain_error);
    CHECK_THROWS_AS(eopt::validate_design(Design{{0.0, 2.0}, {0.5, 0.5}}, -1, 1),
                    std::domain_error);
    CHECK_NOTHROW(eopt::validate_design(Design{{-1.0, 1.0}, {0.5, 0.5}}, -1, 1));
}
