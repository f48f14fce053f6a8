#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "refute.hpp"
#include "support/fixtures.hpp"

using namespace causal;

namespace {

struct Problem {
    Dataset data;
    CausalGraph graph;
    Estimand estimand;
    EffectEstimate estimate;
};

// The well-specified benchmark: beta = 10, three observed confounders.
Problem ols_problem(int n = 20000, std::uint64_t seed = 42) {
    SyntheticSpec spec;
    spec.n = static_cast<std::size_t>(n);
    spec.beta = 10.0;
    spec.num_common_causes = 3;
    spec.treatment_is_binary = true;
    spec.noise_sd = 1.0;
    spec.seed = seed;
    SyntheticData synthetic = generate_linear_dataset(spec);
    IdentificationResult ident = identify_effect(synthetic.graph, "T", "Y");
    REQUIRE(ident.identified);
    EstimationConfig cfg;
    cfg.method = "backdoor.linear_regression";
    cfg.bootstrap_reps = 0;
    cfg.permutation_reps = 0;
    EffectEstimate est = estimate_effect(synthetic.data, ident.estimands[0], cfg);
    return {std::move(synthetic.data), std::move(synthetic.graph), ident.estimands[0],
            std::move(est)};
}

RefuterConfig fast_config(int replications = 30, std::uint64_t seed = 0) {
    RefuterConfig cfg;
    cfg.replications = replications;
    cfg.seed = seed;
    cfg.estimation.bootstrap_reps = 0;
    cfg.estimation.permutation_reps = 0;
    return cfg;
}

}  // namespace

TEST_CASE("refute_random_common_cause: estimate survives an irrelevant confounder") {
    Problem problem = ols_problem();
    RefutationResult result = refute_random_common_cause(
        problem.data, problem.graph, problem.estimand, problem.estimate, fast_config());
    CHECK(result.passed);
    CHECK(std::abs(result.new_effect - 10.0) < 0.3);
    CHECK(result.replication_effects.size() == 30);

    // deterministic single replication
    RefuterConfig one = fast_config(1, 9);
    RefutationResult first = refute_random_common_cause(
        problem.data, problem.graph, problem.estimand, problem.estimate, one);
    RefutationResult second = refute_random_common_cause(
        problem.data, problem.graph, problem.estimand, problem.estimate, one);
    REQUIRE(first.replication_effects.size() == 1);
    CHECK(first.replication_effects[0] == second.replication_effects[0]);
}

TEST_CASE("refute_random_common_cause: exact effect stays exact") {
    std::vector<double> t, y;
    for (int i = 0; i < 60; ++i) {
        t.push_back(i % 2);
        y.push_back(static_cast<double>(i % 2));
    }
    Dataset d = Dataset::from_columns({Column{"T", t}, Column{"Y", y}}, "T", "Y");
    CausalGraph g = GraphBuilder().edge("T", "Y").build();
    IdentificationResult ident = identify_effect(g, "T", "Y");
    EstimationConfig cfg;
    cfg.method = "backdoor.linear_regression";
    cfg.bootstrap_reps = 0;
    cfg.permutation_reps = 0;
    EffectEstimate est = estimate_effect(d, ident.estimands[0], cfg);
    RefutationResult result =
        refute_random_common_cause(d, g, ident.estimands[0], est, fast_config(10));
    CHECK(result.passed);
    for (double effect : result.replication_effects) {
        CHECK(effect == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("refute_placebo_treatment: effect collapses to zero") {
    Problem problem = ols_problem();
    RefutationResult result = refute_placebo_treatment(
        problem.data, problem.graph, problem.estimand, problem.estimate, fast_config());
    CHECK(result.passed);
    CHECK(std::abs(result.new_effect) < 0.3);
}

TEST_CASE("refute_placebo_treatment: constant outcome gives exactly zero effects") {
    std::vector<double> t, y;
    for (int i = 0; i < 40; ++i) {
        t.push_back(i % 2);
        y.push_back(4.0);
    }
    Dataset d = Dataset::from_columns({Column{"T", t}, Column{"Y", y}}, "T", "Y");
    CausalGraph g = GraphBuilder().edge("T", "Y").build();
    IdentificationResult ident = identify_effect(g, "T", "Y");
    EstimationConfig cfg;
    cfg.method = "backdoor.linear_regression";
    cfg.bootstrap_reps = 0;
    cfg.permutation_reps = 0;
    EffectEstimate est = estimate_effect(d, ident.estimands[0], cfg);
    RefutationResult result =
        refute_placebo_treatment(d, g, ident.estimands[0], est, fast_config(10));
    for (double effect : result.replication_effects) CHECK(std::abs(effect) < 1e-12);
    CHECK(result.passed);
}

TEST_CASE("placebo and dummy replication means scale with the spread") {
    // OLS under permuted treatment / noise outcome: replication mean stays
    // within 4 sd / sqrt(R) of zero.
    Problem problem = ols_problem(4000, 17);
    RefuterConfig cfg = fast_config(50, 2);
    for (auto* refuter : {&refute_placebo_treatment, &refute_dummy_outcome}) {
        RefutationResult result =
            (*refuter)(problem.data, problem.graph, problem.estimand, problem.estimate, cfg);
        auto [mean, variance] = std::pair<double, double>{0.0, 0.0};
        double sum = 0.0;
        for (double v : result.replication_effects) sum += v;
        mean = sum / static_cast<double>(result.replication_effects.size());
        double ss = 0.0;
        for (double v : result.replication_effects) ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / (result.replication_effects.size() - 1.0));
        CHECK(std::abs(mean) <
              4.0 * sd / std::sqrt(static_cast<double>(result.replication_effects.size())));
    }
}

TEST_CASE("refuters abort when more than half of the replications fail") {
    // A single-row dataset cannot support the two-column OLS re-fit, so
    // every dummy-outcome replication errors out.
    Dataset d = Dataset::from_columns({Column{"T", {1.0}}, Column{"Y", {2.0}}}, "T", "Y");
    CausalGraph g = GraphBuilder().edge("T", "Y").build();
    Estimand e;
    e.kind = EstimandKind::kBackdoor;
    e.treatment = "T";
    e.outcome = "Y";
    EffectEstimate est;
    est.value = 0.0;
    est.method = "backdoor.linear_regression";
    est.estimand = e;
    CHECK_THROWS_AS(refute_dummy_outcome(d, g, e, est, fast_config(10)), Error);
}

TEST_CASE("refute_dummy_outcome: effect collapses to zero") {
    Problem problem = ols_problem();
    RefutationResult result = refute_dummy_outcome(problem.data, problem.graph,
                                                   problem.estimand, problem.estimate,
                                                   fast_config());
    CHECK(result.passed);
    CHECK(std::abs(result.new_effect) < 0.2);

    // same seed reproduces the same distribution
    RefutationResult again = refute_dummy_outcome(problem.data, problem.graph, problem.estimand,
                                                  problem.estimate, fast_config());
    CHECK(result.replication_effects == again.replication_effects);
}

TEST_CASE("refute_simulated_outcome: recovers the simulated effect") {
    Problem problem = ols_problem();
    RefuterConfig cfg = fast_config();
    cfg.simulated_beta = 10.0;
    RefutationResult result = refute_simulated_outcome(problem.data, problem.graph,
                                                       problem.estimand, problem.estimate, cfg);
    CHECK(result.passed);
    CHECK(std::abs(result.new_effect - 10.0) < 0.3);

    cfg.simulated_beta = 0.0;
    RefutationResult null_result = refute_simulated_outcome(
        problem.data, problem.graph, problem.estimand, problem.estimate, cfg);
    CHECK(std::abs(null_result.new_effect) < 0.3);
}

TEST_CASE("refute_simulated_outcome: noiseless data returns the beta exactly") {
    std::vector<double> t, w, y;
    for (int i = 0; i < 50; ++i) {
        double ti = i % 2;
        double wi = 0.1 * i;
        t.push_back(ti);
        w.push_back(wi);
        y.push_back(10.0 * ti + 2.0 * wi);  // no noise at all
    }
    Dataset d = Dataset::from_columns({Column{"T", t}, Column{"Y", y}, Column{"W", w}}, "T", "Y");
    CausalGraph g = GraphBuilder().edge("W", "T").edge("W", "Y").edge("T", "Y").build();
    IdentificationResult ident = identify_effect(g, "T", "Y");
    EstimationConfig est_cfg;
    est_cfg.method = "backdoor.linear_regression";
    est_cfg.bootstrap_reps = 0;
    est_cfg.permutation_reps = 0;
    EffectEstimate est = estimate_effect(d, ident.estimands[0], est_cfg);

    RefuterConfig cfg = fast_config(10);
    cfg.simulated_beta = 7.0;
    RefutationResult result = refute_simulated_outcome(d, g, ident.estimands[0], est, cfg);
    for (double effect : result.replication_effects) {
        CHECK(effect == doctest::Approx(7.0).epsilon(1e-9));
    }
    CHECK(result.passed);

    // non-backdoor estimands are rejected
    Estimand iv;
    iv.kind = EstimandKind::kInstrumentalVariable;
    iv.treatment = "T";
    iv.outcome = "Y";
    iv.instruments = {"W"};
    CHECK_THROWS_AS(refute_simulated_outcome(d, g, iv, est, cfg), Error);
}

TEST_CASE("refute_unobserved_common_cause: honest problem stays inside the band") {
    Problem problem = ols_problem();
    RefuterConfig cfg = fast_config();
    RefutationResult result = refute_unobserved_common_cause(
        problem.data, problem.graph, problem.estimand, problem.estimate, cfg);
    CHECK(result.passed);
    CHECK(result.replication_effects.size() == 9);  // default 3x3 grid
    for (double effect : result.replication_effects) CHECK(std::abs(effect - 10.0) < 2.0);
    CHECK_FALSE(result.p_value.has_value());
    CHECK(result.detail.count("effect[st=0.5,sy=0.5]") == 1);
}

TEST_CASE("refute_unobserved_common_cause: zero strengths reproduce the original") {
    Problem problem = ols_problem(4000, 3);
    RefuterConfig cfg = fast_config();
    cfg.sensitivity_grid = {{0.0, 0.0}};
    RefutationResult result = refute_unobserved_common_cause(
        problem.data, problem.graph, problem.estimand, problem.estimate, cfg);
    REQUIRE(result.replication_effects.size() == 1);
    CHECK(std::abs(result.replication_effects[0] - problem.estimate.value) < 0.05);
    CHECK(result.passed);
}

TEST_CASE("refute_unobserved_common_cause: pure confounding bias is flagged") {
    // beta = 0 with strong confounding, analyzed with an empty adjustment
    // set: the apparent effect is entirely bias and the refuter must fail.
    SyntheticSpec spec;
    spec.n = 20000;
    spec.beta = 0.0;
    spec.num_common_causes = 3;
    spec.treatment_is_binary = true;
    spec.noise_sd = 1.0;
    spec.seed = 42;
    SyntheticData synthetic = generate_linear_dataset(spec);
    // wrong model: confounders declared isolated, so nothing is adjusted
    CausalGraph wrong = GraphBuilder()
                            .edge("T", "Y")
                            .node("W0")
                            .node("W1")
                            .node("W2")
                            .build();
    IdentificationResult ident = identify_effect(wrong, "T", "Y");
    REQUIRE(ident.identified);
    REQUIRE(ident.estimands[0].adjustment.empty());
    EstimationConfig est_cfg;
    est_cfg.method = "backdoor.linear_regression";
    est_cfg.bootstrap_reps = 0;
    est_cfg.permutation_reps = 0;
    EffectEstimate est = estimate_effect(synthetic.data, ident.estimands[0], est_cfg);
    CHECK(std::abs(est.value) > 2.0);  // pure omitted-variable bias

    RefutationResult result = refute_unobserved_common_cause(
        synthetic.data, wrong, ident.estimands[0], est, fast_config());
    CHECK_FALSE(result.passed);
}

TEST_CASE("refute_data_subset: stable on subsets, strict preconditions") {
    Problem problem = ols_problem();
    RefuterConfig cfg = fast_config();
    RefutationResult result = refute_data_subset(problem.data, problem.graph, problem.estimand,
                                                 problem.estimate, cfg);
    CHECK(result.passed);

    // fraction 1.0 reproduces the estimate exactly in every replication
    cfg.subset_fraction = 1.0;
    RefutationResult full = refute_data_subset(problem.data, problem.graph, problem.estimand,
                                               problem.estimate, cfg);
    for (double effect : full.replication_effects) {
        CHECK(effect == doctest::Approx(problem.estimate.value).epsilon(1e-12));
    }
    CHECK(full.passed);

    Problem tiny = ols_problem(5, 1);
    cfg.subset_fraction = 0.8;
    CHECK_THROWS_AS(refute_data_subset(tiny.data, tiny.graph, tiny.estimand, tiny.estimate, cfg),
                    Error);
}

TEST_CASE("refute_bootstrap: resampling keeps the estimate, degenerate case passes") {
    Problem problem = ols_problem();
    RefutationResult result = refute_bootstrap(problem.data, problem.graph, problem.estimand,
                                               problem.estimate, fast_config());
    CHECK(result.passed);

    RefutationResult again = refute_bootstrap(problem.data, problem.graph, problem.estimand,
                                              problem.estimate, fast_config());
    CHECK(result.replication_effects == again.replication_effects);
}

TEST_CASE("refuters leave their inputs untouched") {
    Problem problem = ols_problem(2000, 8);
    Dataset data_copy = problem.data;
    CausalGraph graph_copy = problem.graph;
    Estimand estimand_copy = problem.estimand;
    RefuterConfig cfg = fast_config(5);
    for (const auto& name : refuter_names()) {
        (void)run_refuter(name, problem.data, problem.graph, problem.estimand, problem.estimate,
                          cfg);
        CHECK(problem.data == data_copy);
        CHECK(problem.graph == graph_copy);
        CHECK(problem.estimand == estimand_copy);
    }
}

TEST_CASE("run_refuters: ordering, determinism, unknown names") {
    Problem problem = ols_problem(2000, 8);
    RefuterConfig cfg = fast_config(5);
    std::vector<RefutationResult> one =
        run_refuters({"placebo_treatment"}, problem.data, problem.graph, problem.estimand,
                     problem.estimate, cfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].refuter == "placebo_treatment");

    try {
        run_refuters({"nonsense"}, problem.data, problem.graph, problem.estimand,
                     problem.estimate, cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("placebo_treatment") != std::string::npos);
    }

    std::vector<std::string> names{"bootstrap", "placebo_treatment"};
    auto a = run_refuters(names, problem.data, problem.graph, problem.estimand,
                          problem.estimate, cfg);
    auto b = run_refuters(names, problem.data, problem.graph, problem.estimand,
                          problem.estimate, cfg);
    REQUIRE(a.size() == 2);
    CHECK(a[0].refuter == "bootstrap");
    CHECK(a[1].refuter == "placebo_treatment");
    CHECK(a[0].replication_effects == b[0].replication_effects);
    CHECK(a[1].replication_effects == b[1].replication_effects);
}

TEST_CASE("placebo refuter catches an estimator that ignores the treatment") {
    // Regression discontinuity reads only the running variable and the
    // outcome, so permuting the treatment leaves its estimate at the
    // original value in every replication. The refuter must fail: the
    // placebo distribution sits at 7, nowhere near zero.
    testing::GeneratedProblem problem = testing::rdd_problem(2000, 7.0, 1.0, 0.1, 21);
    IdentificationResult ident = identify_effect(problem.graph, "T", "Y");
    REQUIRE(ident.identified);
    const Estimand* iv_estimand = nullptr;
    for (const auto& e : ident.estimands) {
        if (e.kind == EstimandKind::kInstrumentalVariable) iv_estimand = &e;
    }
    REQUIRE(iv_estimand != nullptr);

    EstimationConfig est_cfg;
    est_cfg.method = "iv.regression_discontinuity";
    est_cfg.bootstrap_reps = 0;
    est_cfg.permutation_reps = 0;
    est_cfg.rdd_cutoff = 0.0;
    est_cfg.rdd_bandwidth = 0.5;
    est_cfg.rdd_running_variable = "R";
    EffectEstimate est = estimate_effect(problem.data, *iv_estimand, est_cfg);
    CHECK(std::abs(est.value - 7.0) < 0.2);

    RefuterConfig cfg = fast_config(10);
    cfg.estimation = est_cfg;
    RefutationResult result = refute_placebo_treatment(problem.data, problem.graph,
                                                       *iv_estimand, est, cfg);
    CHECK_FALSE(result.passed);
    for (double effect : result.replication_effects) CHECK(effect == est.value);
}
