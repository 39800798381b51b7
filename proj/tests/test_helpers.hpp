#pragma once

#include "germ/problem.hpp"

#include <vector>

namespace germ::test {

inline LearningProblem make_problem(std::vector<double> probs, const std::vector<std::vector<double>>& rows,
                                    std::string name = "t") {
    return LearningProblem(DiscreteDistribution(std::move(probs)), LossTable(rows), std::move(name));
}

inline LearningProblem s2() { return make_problem({0.5, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}, "S2"); }
inline LearningProblem s3() { return make_problem({0.2, 0.8}, {{0.05, 0.55}, {0.45, 0.0}}, "S3"); }
inline LearningProblem s5() {
    return make_problem({0.5, 0.3, 0.2}, {{0.2, 0.6, 0.9}, {0.5, 0.1, 0.4}, {0.7, 0.5, 0.0}}, "S5");
}
inline LearningProblem s6() { return make_problem({0.42, 0.58}, {{0.0, 1.0}, {1.0, 0.0}}, "S6"); }

} // namespace germ::test
