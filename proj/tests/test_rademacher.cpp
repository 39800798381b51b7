#include "germ/rademacher.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>

using namespace germ;
using germ::test::make_problem;

TEST_CASE("rademacher sup examples") {
    LossTable half({{0.5, 0.5}});
    CHECK(rademacher_sup(half, Sample{0, 1}, std::vector<int>{1, -1}) == 0.0);
    CHECK(rademacher_sup(half, Sample{0, 1}, std::vector<int>{1, 1}) == 0.5);
    LossTable zero_one({{0.0, 0.0}, {1.0, 1.0}});
    CHECK(rademacher_sup(zero_one, Sample{0, 1, 1, 0}, std::vector<int>{-1, -1, -1, -1}) == 0.0);
    CHECK_THROWS_AS(rademacher_sup(half, Sample{0}, std::vector<int>{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(rademacher_sup(half, Sample{0}, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("empirical estimator") {
    LossTable zero({{0.0, 0.0}});
    CHECK(rbar_from_signs(zero, Sample{0, 1}, std::vector<int>{1, -1}) == doctest::Approx(1.177410).epsilon(1e-6));
    LossTable half({{0.5, 0.5}});
    CHECK(rbar_from_signs(half, Sample{0, 1}, std::vector<int>{1, 1}) == doctest::Approx(1.677410).epsilon(1e-6));
    Rng rng(1);
    LossTable ones({{1.0, 1.0}});
    for (std::size_t k = 1; k < 60; ++k) CHECK(rbar_empirical(ones, Sample(k, 0), rng) >= 0.0);
}

TEST_CASE("massart bound") {
    CHECK(rbar_massart(1, 7) == 0.0);
    CHECK(rbar_massart(2, 2) == doctest::Approx(0.832555).epsilon(1e-6));
    CHECK(rbar_massart(16, 8) == doctest::Approx(0.832555).epsilon(1e-6));
    CHECK_THROWS_AS(rbar_massart(2, 0), std::invalid_argument);
}

TEST_CASE("exact rademacher") {
    CHECK(exact_rademacher(make_problem({0.3, 0.7}, {{0.5, 0.5}}), 1) == 0.0);
    const double c = 0.6;
    CHECK(exact_rademacher(make_problem({0.3, 0.7}, {{0.0, 0.0}, {c, c}}), 1) == doctest::Approx(c / 2));
    CHECK(exact_rademacher(make_problem({0.3, 0.7}, {{0.0, 0.0}, {0.0, 0.0}}), 1) == 0.0);

    // Independent enumeration (tests/oracles/derive.py).
    const auto p = germ::test::s5();
    CHECK(exact_rademacher(p, 1) == doctest::Approx(0.29).epsilon(1e-12));
    CHECK(exact_rademacher(p, 2) == doctest::Approx(0.176).epsilon(1e-12));
    CHECK(exact_rademacher(p, 3) == doctest::Approx(0.1505125).epsilon(1e-12));
    CHECK(exact_rademacher(p, 4) == doctest::Approx(0.12662625).epsilon(1e-12));
}

TEST_CASE("count route agrees with brute force") {
    for (const auto& p : {germ::test::s2(), germ::test::s3(), germ::test::s5(), germ::test::s6()})
        for (std::size_t k = 1; k <= 5; ++k)
            CHECK(exact_rademacher_by_counts(p, k) == doctest::Approx(exact_rademacher(p, k)).epsilon(1e-12));
}

TEST_CASE("massart dominates the exact value") {
    for (const auto& p : {germ::test::s2(), germ::test::s3(), germ::test::s5(), germ::test::s6()})
        for (std::size_t k = 1; k <= 30; ++k)
            CHECK(exact_rademacher_by_counts(p, k) <= rbar_massart(p.class_size(), k) + 1e-12);
}

TEST_CASE("enumeration guard") {
    const auto p = germ::test::s5();
    CHECK_THROWS_AS(exact_rademacher(p, 12), ResourceError);
    CHECK_THROWS_AS(exact_rademacher_by_counts(p, 400), ResourceError);
}

TEST_CASE("deviation radius") {
    CHECK(prop1_radius(100, 0.05) == doctest::Approx(0.2716203031481239).epsilon(1e-12));
    CHECK(prop1_radius(2, 0.5) == doctest::Approx(1.177410).epsilon(1e-6));
    for (std::size_t n = 1; n < 50; ++n) CHECK(prop1_radius(n + 1, 0.1) < prop1_radius(n, 0.1));
    CHECK_THROWS_AS(prop1_radius(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(prop1_radius(10, 1.0), std::invalid_argument);
}

TEST_CASE("deviation exceedance stays below delta") {
    const auto p = germ::test::s5();
    for (double d : {0.1, 0.25, 0.5}) {
        CHECK(prop1_exceedance(p, 4, d) == 0.0);
        for (std::size_t k = 1; k <= 6; ++k) CHECK(prop1_exceedance(p, k, d) <= d);
    }
}

TEST_CASE("empirical estimator covers the exact value") {
    for (const auto& p : {germ::test::s2(), germ::test::s3(), germ::test::s5()})
        for (std::size_t k = 1; k <= 6; ++k)
            CHECK(rbar_coverage(p, k) >= 1.0 - 1.0 / static_cast<double>(k));
}

TEST_CASE("user constants") {
    CHECK_THROWS_AS(validate_mode(UserConstant{{}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_mode(UserConstant{{0.1, -0.1}}), std::invalid_argument);
    CHECK_NOTHROW(validate_mode(UserConstant{{0.1}}));
}
