#include "germ/analysis.hpp"
#include "germ/rng.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>
#include <limits>

using namespace germ;
using germ::test::make_problem;

TEST_CASE("excess bound examples") {
    CHECK(thm2_excess_bound(2, 0.0) == doctest::Approx(4.532230067546424).epsilon(1e-12));
    CHECK(thm2_excess_bound(200, 0.0) == doctest::Approx(0.7443240492042449).epsilon(1e-12));
    CHECK(thm2_excess_bound(50, 0.05) == doctest::Approx(1.9275796157736083).epsilon(1e-12));
    CHECK_THROWS_AS(thm2_excess_bound(0, 0.0), std::invalid_argument);
}

TEST_CASE("bernstein certificate examples") {
    CHECK(bernstein_min_B(make_problem({0.5, 0.5}, {{0.0, 0.0}, {1.0, 1.0}}), 0.0).minimal_B == 1.0);
    CHECK(bernstein_min_B(make_problem({0.5, 0.5}, {{0.0, 0.0}, {1.0, 0.0}}), 0.0).minimal_B == 0.5);
    CHECK(bernstein_min_B(make_problem({0.5, 0.5}, {{0.0, 0.0}, {1.0, 1.0}}), 1.0).minimal_B == 1.0);
    const auto s2 = bernstein_min_B(germ::test::s2(), 0.0);
    CHECK(s2.minimal_B == 1.0);
    CHECK(s2.hstar_index == 0);
    CHECK(std::isinf(bernstein_min_B(germ::test::s2(), 0.5).minimal_B));
    CHECK(bernstein_min_B(make_problem({0.5, 0.5}, {{0.3, 0.7}}), 1.0).minimal_B == 0.0);
    CHECK_THROWS_AS(bernstein_min_B(germ::test::s2(), 1.5), std::invalid_argument);
}

TEST_CASE("bernstein certificate matches enumeration") {
    // tests/oracles/derive.py
    const auto p = germ::test::s5();
    CHECK(bernstein_min_B(p, 0.0).minimal_B == doctest::Approx(0.17).epsilon(1e-12));
    CHECK(bernstein_min_B(p, 0.5).minimal_B == doctest::Approx(0.5375872022286243).epsilon(1e-12));
    CHECK(bernstein_min_B(p, 1.0).minimal_B == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(bernstein_min_B(p, 1.0).hstar_index == 1);
    CHECK(bernstein_min_B(germ::test::s6(), 1.0).minimal_B == doctest::Approx(6.25));
}

TEST_CASE("pairwise empirical bernstein slack") {
    const std::vector<double> same{0.2, 0.9};
    CHECK(empirical_bernstein_rhs(same, same, 2, 0.5) == doctest::Approx(13.862944).epsilon(1e-6));
    const std::vector<double> a{1.0, 1.0}, b{0.0, 0.0};
    CHECK(empirical_bernstein_rhs(a, b, 1, 1.0 / std::exp(1.0)) == doctest::Approx(11.068155684894803).epsilon(1e-12));
    double last = std::numeric_limits<double>::infinity();
    for (std::size_t n = 2; n < 100; ++n) {
        const double s = empirical_bernstein_rhs_from_squares(n, 0.25 * static_cast<double>(n), 3, 0.1);
        CHECK(s < last);
        last = s;
    }
    CHECK_THROWS_AS(empirical_bernstein_rhs(same, a, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(empirical_bernstein_rhs(std::vector<double>{0.1}, std::vector<double>{0.2}, 2, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(empirical_bernstein_rhs(same, std::vector<double>{0.1}, 2, 0.1), std::invalid_argument);
}

TEST_CASE("minimizer bound examples") {
    CHECK(minimizer_bound(1.0, 1.0, 0.0) == doctest::Approx(5.0));
    CHECK(minimizer_bound(4.0, 1.0, 0.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(minimizer_bound(0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(minimizer_bound(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("minimizer bound dominates a grid minimum") {
    Rng rng(2024);
    for (int t = 0; t < 200; ++t) {
        const double A = 0.01 + 10.0 * rng.uniform();
        const double B = 0.01 + 10.0 * rng.uniform();
        const double beta = 0.99 * rng.uniform();
        double best = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 20000; ++i) {
            const double eta = 0.5 * i / 20000.0;
            best = std::min(best, A * std::pow(eta, 1.0 / (1.0 - beta)) + B / eta);
        }
        CHECK(best <= minimizer_bound(A, B, beta) + 1e-9);
    }
}
