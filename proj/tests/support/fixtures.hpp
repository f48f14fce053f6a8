#pragma once

// Seeded data-generating processes with known ground truth, used as oracles
// by the estimator, refuter and acceptance tests.

#include <cstdint>
#include <random>

#include "dataset.hpp"
#include "graph.hpp"

namespace causal::testing {

struct GeneratedProblem {
    Dataset data;
    CausalGraph graph;
    double truth = 0.0;
};

// Binary instrument with a strong latent confounder (U stays out of the
// dataset):
//   U ~ N(0,1), Z ~ Bernoulli(0.5), eps ~ N(0,1)
//   T = 1{2.5 U + 2 (Z - 0.5) + eps_t > 0}
//   Y = beta T + 2.5 U + eps_y
// The naive difference in means is biased upward by about 3.5.
inline GeneratedProblem iv_confounded_problem(std::size_t n, double beta, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> t(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = normal(engine);
        z[i] = coin(engine) ? 1.0 : 0.0;
        double index = 2.5 * u + 2.0 * (z[i] - 0.5) + normal(engine);
        t[i] = index > 0.0 ? 1.0 : 0.0;
        y[i] = beta * t[i] + 2.5 * u + normal(engine);
    }
    Dataset data = Dataset::from_columns(
        {Column{"T", std::move(t)}, Column{"Y", std::move(y)}, Column{"Z", std::move(z)}}, "T",
        "Y");
    CausalGraph graph = GraphBuilder()
                            .node("U", false)
                            .edge("Z", "T")
                            .edge("U", "T")
                            .edge("U", "Y")
                            .edge("T", "Y")
                            .build();
    return {std::move(data), std::move(graph), beta};
}

// Canonical front-door SEM (U latent, truth = a*b):
//   T = U + 0.2 eps_t, M = a T + eps_m, Y = b M + U + eps_y
inline GeneratedProblem frontdoor_problem(std::size_t n, double a, double b,
                                          std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> t(n), m(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = normal(engine);
        t[i] = u + 0.2 * normal(engine);
        m[i] = a * t[i] + normal(engine);
        y[i] = b * m[i] + u + normal(engine);
    }
    Dataset data = Dataset::from_columns(
        {Column{"T", std::move(t)}, Column{"M", std::move(m)}, Column{"Y", std::move(y)}}, "T",
        "Y");
    CausalGraph graph = GraphBuilder()
                            .node("U", false)
                            .edge("U", "T")
                            .edge("U", "Y")
                            .edge("T", "M")
                            .edge("M", "Y")
                            .build();
    return {std::move(data), std::move(graph), a * b};
}

struct MediationProblem {
    Dataset data;
    CausalGraph graph;
    double nde = 0.0;
    double nie = 0.0;
};

// Linear mediation SEM: T ~ N(0,1); M = a T + eps; Y = c' T + b M + eps.
inline MediationProblem mediation_problem(std::size_t n, double a, double b, double c_prime,
                                          std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> t(n), m(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = normal(engine);
        m[i] = a * t[i] + normal(engine);
        y[i] = c_prime * t[i] + b * m[i] + normal(engine);
    }
    Dataset data = Dataset::from_columns(
        {Column{"T", std::move(t)}, Column{"M", std::move(m)}, Column{"Y", std::move(y)}}, "T",
        "Y");
    CausalGraph graph = GraphBuilder().edge("T", "M").edge("M", "Y").edge("T", "Y").build();
    return {std::move(data), std::move(graph), c_prime, a * b};
}

// Sharp regression-discontinuity data: R ~ U(-1, 1), T = 1{R >= 0},
// Y = slope R + jump T + noise_sd eps.
inline GeneratedProblem rdd_problem(std::size_t n, double jump, double slope, double noise_sd,
                                    std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> r(n), t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = uniform(engine);
        t[i] = r[i] >= 0.0 ? 1.0 : 0.0;
        y[i] = slope * r[i] + jump * t[i] + noise_sd * normal(engine);
    }
    Dataset data = Dataset::from_columns(
        {Column{"T", std::move(t)}, Column{"Y", std::move(y)}, Column{"R", std::move(r)}}, "T",
        "Y");
    CausalGraph graph = GraphBuilder().edge("R", "T").edge("T", "Y").build();
    return {std::move(data), std::move(graph), jump};
}

// Binary treatment independent of a standard-normal outcome.
inline Dataset null_problem(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = coin(engine) ? 1.0 : 0.0;
        y[i] = normal(engine);
    }
    return Dataset::from_columns({Column{"T", std::move(t)}, Column{"Y", std::move(y)}}, "T",
                                 "Y");
}

}  // namespace causal::testing
