#include <doctest.h>

#include <random>

#include "error.hpp"
#include "identify.hpp"
#include "support/oracles.hpp"

using namespace causal;

namespace {

CausalGraph single_confounder() {
    return GraphBuilder().edge("W", "T").edge("W", "Y").edge("T", "Y").build();
}

CausalGraph frontdoor_graph() {
    return GraphBuilder()
        .node("U", false)
        .edge("U", "T")
        .edge("U", "Y")
        .edge("T", "M")
        .edge("M", "Y")
        .build();
}

CausalGraph bow_graph() {
    return GraphBuilder().node("U", false).edge("U", "T").edge("U", "Y").edge("T", "Y").build();
}

}  // namespace

TEST_CASE("identify_effect: single confounder yields one backdoor estimand") {
    IdentificationResult result = identify_effect(single_confounder(), "T", "Y");
    CHECK(result.identified);
    REQUIRE(result.estimands.size() == 1);
    CHECK(result.estimands[0].kind == EstimandKind::kBackdoor);
    CHECK(result.estimands[0].adjustment == NodeSet{"W"});
}

TEST_CASE("identify_effect: front-door graph has no backdoor estimand") {
    IdentificationResult result = identify_effect(frontdoor_graph(), "T", "Y");
    CHECK(result.identified);
    REQUIRE(result.estimands.size() == 2);
    CHECK(result.estimands[0].kind == EstimandKind::kFrontdoor);
    CHECK(result.estimands[0].mediators == NodeSet{"M"});
    // the mediation legs are identified here as well
    CHECK(result.estimands[1].kind == EstimandKind::kMediation);
    CHECK(result.estimands[1].adjustment.empty());
}

TEST_CASE("identify_effect: bow graph is not identified") {
    IdentificationResult result = identify_effect(bow_graph(), "T", "Y");
    CHECK_FALSE(result.identified);
    CHECK(result.estimands.empty());
}

TEST_CASE("identify_effect: six canonical graphs match the hand-derived table") {
    SUBCASE("single confounder") {
        auto r = identify_effect(single_confounder(), "T", "Y");
        REQUIRE(r.estimands.size() == 1);
        CHECK(r.estimands[0].kind == EstimandKind::kBackdoor);
        CHECK(r.estimands[0].adjustment == NodeSet{"W"});
    }
    SUBCASE("mediator chain") {
        auto r = identify_effect(GraphBuilder().edge("T", "M").edge("M", "Y").build(), "T", "Y");
        REQUIRE(r.estimands.size() == 3);
        CHECK(r.estimands[0].kind == EstimandKind::kBackdoor);
        CHECK(r.estimands[0].adjustment.empty());
        CHECK(r.estimands[1].kind == EstimandKind::kFrontdoor);
        CHECK(r.estimands[1].mediators == NodeSet{"M"});
        CHECK(r.estimands[2].kind == EstimandKind::kMediation);
        CHECK(r.estimands[2].mediators == NodeSet{"M"});
        CHECK(r.estimands[2].adjustment.empty());
    }
    SUBCASE("M-bias with latent sources") {
        auto g = GraphBuilder()
                     .node("A", false)
                     .node("B", false)
                     .edge("A", "T")
                     .edge("A", "M")
                     .edge("B", "M")
                     .edge("B", "Y")
                     .edge("T", "Y")
                     .build();
        auto r = identify_effect(g, "T", "Y");
        REQUIRE(r.estimands.size() == 1);
        CHECK(r.estimands[0].kind == EstimandKind::kBackdoor);
        CHECK(r.estimands[0].adjustment.empty());  // adjusting on M would open the path
    }
    SUBCASE("textbook instrumental variable") {
        auto g = GraphBuilder()
                     .node("U", false)
                     .edge("Z", "T")
                     .edge("U", "T")
                     .edge("U", "Y")
                     .edge("T", "Y")
                     .build();
        auto r = identify_effect(g, "T", "Y");
        REQUIRE(r.estimands.size() == 1);
        CHECK(r.estimands[0].kind == EstimandKind::kInstrumentalVariable);
        CHECK(r.estimands[0].instruments == NodeSet{"Z"});
    }
    SUBCASE("canonical front-door") {
        auto r = identify_effect(frontdoor_graph(), "T", "Y");
        REQUIRE(r.estimands.size() == 2);
        CHECK(r.estimands[0].kind == EstimandKind::kFrontdoor);
        CHECK(r.estimands[0].mediators == NodeSet{"M"});
        CHECK(r.estimands[1].kind == EstimandKind::kMediation);
    }
    SUBCASE("mediation triangle") {
        auto g = GraphBuilder().edge("T", "M").edge("M", "Y").edge("T", "Y").build();
        auto r = identify_effect(g, "T", "Y");
        REQUIRE(r.estimands.size() == 2);
        CHECK(r.estimands[0].kind == EstimandKind::kBackdoor);
        CHECK(r.estimands[0].adjustment.empty());
        CHECK(r.estimands[1].kind == EstimandKind::kMediation);
        CHECK(r.estimands[1].mediators == NodeSet{"M"});
        CHECK(r.estimands[1].adjustment.empty());
    }
}

TEST_CASE("identify_effect: warnings and errors") {
    CausalGraph g = GraphBuilder().edge("Y", "T").edge("W", "T").edge("W", "Y").build();
    IdentificationResult r = identify_effect(g, "T", "Y");  // Y is an ancestor of T
    REQUIRE(!r.warnings.empty());
    CHECK(r.warnings[0].find("ancestor") != std::string::npos);
    // a result still comes back; with Y itself on the back-door path the
    // effect is unidentified here
    CHECK_FALSE(r.identified);

    CHECK_THROWS_AS(identify_effect(g, "T", "missing"), Error);
    CHECK_THROWS_AS(identify_effect(g, "T", "T"), Error);
    CausalGraph latent_t =
        GraphBuilder().node("T", false).edge("T", "Y").build();
    CHECK_THROWS_AS(identify_effect(latent_t, "T", "Y"), Error);
}

TEST_CASE("identify_effect: oversized candidate pool falls back to the canonical set") {
    GraphBuilder builder;
    builder.edge("T", "Y");
    for (int i = 0; i < 13; ++i) {
        std::string w = "W" + std::to_string(i);
        builder.edge(w, "T").edge(w, "Y");
    }
    IdentificationResult r = identify_effect(builder.build(), "T", "Y");
    CHECK(r.identified);
    REQUIRE(!r.estimands.empty());
    CHECK(r.estimands[0].kind == EstimandKind::kBackdoor);
    CHECK(r.estimands[0].adjustment.size() == 13);  // the full canonical set
    bool warned = false;
    for (const auto& warning : r.warnings) {
        warned = warned || warning.find("canonical") != std::string::npos;
    }
    CHECK(warned);
}

TEST_CASE("identify_effect: every estimand re-checks against graph_core") {
    std::mt19937_64 engine(4242);
    for (int trial = 0; trial < 200; ++trial) {
        CausalGraph g = testing::random_dag(engine, 6, 0.4, 0.25);
        const auto& nodes = g.nodes();
        for (std::size_t ti = 0; ti < nodes.size(); ++ti) {
            for (std::size_t yi = 0; yi < nodes.size(); ++yi) {
                if (ti == yi) continue;
                const std::string& t = nodes[ti];
                const std::string& y = nodes[yi];
                if (!g.is_observed(t) || !g.is_observed(y)) continue;
                IdentificationResult r = identify_effect(g, t, y);
                CHECK(r.identified == !r.estimands.empty());
                for (const auto& e : r.estimands) {
                    switch (e.kind) {
                        case EstimandKind::kBackdoor:
                            CHECK(is_valid_backdoor_set(g, t, y, e.adjustment));
                            break;
                        case EstimandKind::kFrontdoor:
                            CHECK(is_valid_frontdoor_set(g, t, y, e.mediators));
                            break;
                        case EstimandKind::kInstrumentalVariable:
                            CHECK(!e.instruments.empty());
                            for (const auto& z : e.instruments) {
                                CHECK(is_instrument(g, t, y, z));
                            }
                            break;
                        case EstimandKind::kMediation:
                            CHECK(!e.mediators.empty());
                            break;
                    }
                }
            }
        }
    }
}

TEST_CASE("identify_effect: deterministic and stable under isolated nodes") {
    CausalGraph g = single_confounder();
    IdentificationResult first = identify_effect(g, "T", "Y");
    IdentificationResult second = identify_effect(g, "T", "Y");
    REQUIRE(first.estimands.size() == second.estimands.size());
    for (std::size_t i = 0; i < first.estimands.size(); ++i) {
        CHECK(first.estimands[i] == second.estimands[i]);
    }

    CausalGraph with_isolated =
        GraphBuilder().edge("W", "T").edge("W", "Y").edge("T", "Y").node("Lonely").build();
    IdentificationResult shifted = identify_effect(with_isolated, "T", "Y");
    REQUIRE(shifted.estimands.size() == first.estimands.size());
    for (std::size_t i = 0; i < first.estimands.size(); ++i) {
        CHECK(shifted.estimands[i] == first.estimands[i]);
    }
}

TEST_CASE("identify_effect: a fresh common cause extends the canonical set") {
    std::mt19937_64 engine(77);
    for (int trial = 0; trial < 100; ++trial) {
        CausalGraph g = testing::random_dag(engine, 5, 0.45);
        const auto& nodes = g.nodes();
        std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
        std::size_t ti = pick(engine), yi = pick(engine);
        if (ti == yi) continue;
        const std::string& t = nodes[ti];
        const std::string& y = nodes[yi];
        IdentificationResult before = identify_effect(g, t, y);

        GraphBuilder builder;
        for (const auto& name : g.nodes()) builder.node(name, g.is_observed(name));
        for (const auto& [from, to] : g.edges()) builder.edge(from, to);
        builder.edge("Wnew", t).edge("Wnew", y);
        CausalGraph grown = builder.build();

        NodeSet canonical_before = canonical_backdoor_set(g, t, y);
        NodeSet canonical_after = canonical_backdoor_set(grown, t, y);
        NodeSet expected = canonical_before;
        expected.insert("Wnew");
        CHECK(canonical_after == expected);
        if (before.identified) CHECK(identify_effect(grown, t, y).identified);
    }
}

TEST_CASE("describe_estimand formats each kind") {
    Estimand backdoor;
    backdoor.kind = EstimandKind::kBackdoor;
    backdoor.treatment = "T";
    backdoor.outcome = "Y";
    backdoor.adjustment = {"W"};
    std::string text = describe_estimand(backdoor);
    CHECK(text.find("E[Y|T") != std::string::npos);
    CHECK(text.find("W") != std::string::npos);

    Estimand iv = backdoor;
    iv.kind = EstimandKind::kInstrumentalVariable;
    iv.adjustment = {};
    iv.instruments = {"Z"};
    text = describe_estimand(iv);
    CHECK(text.find("Wald") != std::string::npos);
    CHECK(text.find("Z") != std::string::npos);

    Estimand fd = backdoor;
    fd.kind = EstimandKind::kFrontdoor;
    fd.adjustment = {};
    fd.mediators = {"M"};
    text = describe_estimand(fd);
    CHECK(text.find("stage 1") != std::string::npos);
    CHECK(text.find("stage 2") != std::string::npos);
}
