#include "germ/oracle.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>
#include <sstream>

using namespace germ;
using germ::test::make_problem;

namespace {

GermAlgorithm massart(std::size_t h) { return GermAlgorithm{GapSpec::uniform(MassartDeterministic{}, h)}; }
GermAlgorithm bernstein(std::size_t h) { return GermAlgorithm{GapSpec::bernstein(h)}; }

} // namespace

TEST_CASE("single hypothesis curve is constant") {
    const auto p = make_problem({0.5, 0.5}, {{0.3, 0.7}});
    const auto c = exact_risk_curve(p, massart(1), 6);
    REQUIRE(c.values.size() == 7);
    CHECK(c.ns.front() == 0);
    for (double v : c.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(check_monotone(c, kExactMonotoneTolerance).verdict == Verdict::Monotone);
}

TEST_CASE("closed gate gives the initial risk") {
    const auto p = germ::test::s5();
    const auto c = exact_risk_curve(p, GermAlgorithm{GapSpec::fixed({1.5}, 3), LearnerRule::erm_lowest_index(), 2}, 5);
    for (double v : c.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("plain ERM curve values") {
    const auto s2 = exact_risk_curve(germ::test::s2(), PlainErm{}, 1);
    REQUIRE(s2.values.size() == 1);
    CHECK(s2.ns.front() == 1);
    CHECK(s2.values.front() == doctest::Approx(0.5));

    // Independent enumeration in tests/oracles/derive.py.
    const std::vector<double> s3{0.162, 0.1044, 0.12744, 0.099792, 0.1108512, 0.0961056};
    const auto c3 = exact_risk_curve(germ::test::s3(), PlainErm{}, 6);
    for (std::size_t i = 0; i < s3.size(); ++i) CHECK(c3.values[i] == doctest::Approx(s3[i]).epsilon(1e-13));
    const std::vector<double> s5{0.438, 0.4186, 0.42456, 0.413538, 0.3963788};
    const auto c5 = exact_risk_curve(germ::test::s5(), PlainErm{}, 5);
    for (std::size_t i = 0; i < s5.size(); ++i) CHECK(c5.values[i] == doctest::Approx(s5[i]).epsilon(1e-13));
    CHECK(check_monotone(c5, kExactMonotoneTolerance).verdict == Verdict::Violated);
}

TEST_CASE("gated curves against enumeration") {
    // Zero Rademacher constants open the gate from k = 10 on.
    const auto zero = GermAlgorithm{GapSpec::uniform(UserConstant{{0.0}}, 2)};
    const auto c = exact_risk_curve(germ::test::s6(), zero, 12);
    for (std::size_t n = 0; n <= 9; ++n) CHECK(c.values[n] == doctest::Approx(0.58).epsilon(1e-13));
    for (std::size_t n = 10; n <= 12; ++n) CHECK(c.values[n] == doctest::Approx(0.5793107132689639).epsilon(1e-13));
    const auto c5 = exact_risk_curve(germ::test::s5(), GermAlgorithm{GapSpec::uniform(UserConstant{{0.0}}, 3)}, 8);
    CHECK(c5.values.back() == doctest::Approx(0.46).epsilon(1e-12));
}

TEST_CASE("GERM exact curves are non-increasing") {
    for (const auto& p : {germ::test::s2(), germ::test::s3(), germ::test::s5(), germ::test::s6()}) {
        for (const Algorithm& a : {Algorithm{massart(p.class_size())}, Algorithm{bernstein(p.class_size())}}) {
            const auto c = exact_risk_curve(p, a, 7);
            CHECK(check_monotone(c, kExactMonotoneTolerance).verdict == Verdict::Monotone);
        }
    }
}

TEST_CASE("prefix consistency and worker invariance") {
    const auto p = germ::test::s5();
    const Algorithm a = GermAlgorithm{GapSpec::fixed({0.2}, 3)};
    const auto full = exact_risk_curve(p, a, 7);
    const auto part = exact_risk_curve(p, a, 5);
    for (std::size_t i = 0; i < part.values.size(); ++i) CHECK(part.values[i] == doctest::Approx(full.values[i]).epsilon(1e-13));
    for (std::size_t w : {2, 3, 8}) {
        const auto c = exact_risk_curve(p, a, 7, w);
        CHECK(c.values == full.values);
    }
}

TEST_CASE("oracle guards") {
    CHECK_THROWS_AS(exact_risk_curve(germ::test::s5(), GermAlgorithm{GapSpec::uniform(EmpiricalMcDiarmid{}, 3)}, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_risk_curve(germ::test::s5(), massart(3), 16), ResourceError);
}

TEST_CASE("monotonicity verdicts") {
    RiskCurve c;
    c.ns = {1, 2, 3};
    c.values = {0.5, 0.4, 0.45};
    auto r = check_monotone(c, 1e-12);
    CHECK(r.verdict == Verdict::Violated);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].n == 3);
    CHECK(r.violations[0].increase == doctest::Approx(0.05));
    c.values = {0.5, 0.4, 0.4 + 1e-13};
    CHECK(check_monotone(c, 1e-12).verdict == Verdict::Monotone);
    c.values = {0.3, 0.3, 0.3};
    CHECK(check_monotone(c, 0.0).verdict == Verdict::Monotone);

    c.kind = CurveKind::MonteCarlo;
    c.replications = 100;
    c.values = {0.5, 0.52, 0.5};
    c.std_errors = {0.01, 0.01, 0.01};
    r = check_monotone_pooled(c, 3.0);
    CHECK(r.verdict == Verdict::Monotone);
    CHECK(r.pooled_stderr);
    r = check_monotone_pooled(c, 1.0);
    CHECK(r.verdict == Verdict::Violated);
}

TEST_CASE("witness search") {
    Rng rng(1);
    CHECK(!find_erm_nonmonotone(2, 1, 6, 50, rng).problem);
    CHECK(!find_erm_nonmonotone(2, 2, 6, 0, rng).problem);
    Rng seeded(7);
    const auto w = find_erm_nonmonotone(2, 2, 6, 10000, seeded);
    REQUIRE(w.problem);
    CHECK(w.attempts == 2);
    const auto& p = *w.problem;
    CHECK(p.distribution()[0] == 0.2);
    CHECK(p.loss()(0, 0) == 0.05);
    CHECK(p.loss()(0, 1) == 0.55);
    CHECK(p.loss()(1, 0) == 0.45);
    CHECK(p.loss()(1, 1) == 0.0);
}

TEST_CASE("pairwise empirical bernstein coverage") {
    // tests/oracles/derive.py
    CHECK(exact_bernstein_pairwise_coverage(germ::test::s5(), 4, 0.1) == doctest::Approx(1.0));
    for (std::size_t n = 2; n <= 8; ++n) CHECK(exact_bernstein_pairwise_coverage(germ::test::s3(), n, 0.1) >= 0.9);
}

TEST_CASE("curve CSV round trip") {
    RiskCurve c;
    c.ns = {10, 20};
    c.values = {0.1 + 0.2, 1.0 / 3.0};
    c.std_errors = {1e-3, 2.5e-17};
    c.kind = CurveKind::MonteCarlo;
    c.problem = "S5";
    c.algo = "germ:empirical";
    c.seed = 18446744073709551615ull;
    c.replications = 7;
    std::stringstream s;
    write_curve_csv(c, s);
    CHECK(s.str().rfind("n,value,stderr,kind,problem,algo,seed\n", 0) == 0);
    const auto back = read_curve_csv(s);
    CHECK(back.ns == c.ns);
    CHECK(back.values == c.values);
    CHECK(back.std_errors == c.std_errors);
    CHECK(back.kind == CurveKind::MonteCarlo);
    CHECK(back.problem == "S5");
    CHECK(back.algo == "germ:empirical");
    CHECK(back.seed == c.seed);

    RiskCurve bad = c;
    bad.problem = "a,b";
    std::stringstream t;
    CHECK_THROWS_AS(write_curve_csv(bad, t), std::invalid_argument);
    std::stringstream junk("n,value\n1,2\n");
    CHECK_THROWS_AS(read_curve_csv(junk), std::invalid_argument);
}

TEST_CASE("algorithm specs") {
    for (const std::string s : {"erm", "germ:massart", "germ:empirical", "germ:bernstein", "germ:bernstein:init=1",
                                "germ:constant=0.1;0.2:start=3", "germ:fixed=0.5"})
        CHECK(describe(parse_algorithm(s, 3)) == s);
    CHECK(is_deterministic(parse_algorithm("germ:massart", 3)));
    CHECK(!is_deterministic(parse_algorithm("germ:empirical", 3)));
    CHECK(is_deterministic(parse_algorithm("erm", 3)));
    CHECK_THROWS_AS(parse_algorithm("germ:massart:init=3", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_algorithm("sgd", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_algorithm("germ:constant=", 3), std::invalid_argument);
}
