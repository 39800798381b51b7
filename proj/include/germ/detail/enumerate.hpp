#pragma once

#include "germ/problem.hpp"

#include <span>
#include <vector>

namespace germ::detail {

// sup_h sum_z sign_sums[z] * loss(h,z) / k. Integer sign sums per outcome make
// the result independent of the order in which signs were accumulated.
double sup_from_sign_sums(const LossTable& loss, std::span<const long long> sign_sums, std::size_t k);

double rbar_slack(std::size_t k);

// Visits every sequence in Z^n with positive probability, in lexicographic
// order, together with its product probability.
template <class Visit>
void for_each_sequence(const DiscreteDistribution& dist, std::size_t n, Visit&& visit) {
    std::vector<Outcome> support;
    for (Outcome z = 0; z < dist.size(); ++z)
        if (dist[z] > 0.0) support.push_back(z);

    std::vector<Outcome> seq(n);
    std::vector<double> weight(n + 1, 1.0);
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (depth == n) {
            visit(std::span<const Outcome>(seq), weight[n]);
            return;
        }
        for (Outcome z : support) {
            seq[depth] = z;
            weight[depth + 1] = weight[depth] * dist[z];
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);
}

} // namespace germ::detail
