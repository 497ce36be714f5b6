#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "syntro/bifurcation.hpp"
#include "syntro/io.hpp"
#include "syntro/serialize.hpp"
#include "syntro/svg.hpp"

using namespace syntro;

TEST_CASE("regime report JSON round-trips") {
    const GrowthModel model = fixtures::model_a();
    const ChemostatConfig config = fixtures::config33(0.95);
    const RegimeReport report = classify_regime(model, config, 0.95);

    const nlohmann::json doc = nlohmann::json::parse(to_json(report).dump());
    const RegimeReport back = regime_report_from_json(doc);

    CHECK(back.D == report.D);
    CHECK(back.case_label == report.case_label);
    CHECK(back.near_degenerate == report.near_degenerate);
    REQUIRE(back.equilibria.size() == report.equilibria.size());
    for (std::size_t i = 0; i < report.equilibria.size(); ++i) {
        CHECK(back.equilibria[i].kind == report.equilibria[i].kind);
        CHECK(back.equilibria[i].location.x1 == report.equilibria[i].location.x1);
        CHECK(back.equilibria[i].stability == report.equilibria[i].stability);
        CHECK(back.equilibria[i].eigenvalues[0] == report.equilibria[i].eigenvalues[0]);
        CHECK(back.equilibria[i].jacobian.a21 == report.equilibria[i].jacobian.a21);
    }
    CHECK(back.predicted_attractors == report.predicted_attractors);
    CHECK(back.thresholds.D1 == report.thresholds.D1);
    REQUIRE(back.thresholds.D3.has_value());
    CHECK(*back.thresholds.D3 == *report.thresholds.D3);
    CHECK_FALSE(back.thresholds.D4.has_value());
}

TEST_CASE("branch diagram JSON round-trips") {
    const GrowthModel model = fixtures::model_a();
    const ChemostatConfig config = fixtures::config33(0.5);
    const BranchDiagram diagram = sweep(model, config, 0.5, 1.1, 61);

    const nlohmann::json doc = nlohmann::json::parse(to_json(diagram).dump());
    const BranchDiagram back = branch_diagram_from_json(doc);

    REQUIRE(back.samples.size() == diagram.samples.size());
    CHECK(back.samples.front().D == diagram.samples.front().D);
    REQUIRE(back.events.size() == diagram.events.size());
    for (std::size_t k = 0; k < diagram.events.size(); ++k) {
        CHECK(back.events[k].D == diagram.events[k].D);
        CHECK(back.events[k].kind == diagram.events[k].kind);
        CHECK(back.events[k].witnesses.size() == diagram.events[k].witnesses.size());
    }
}

TEST_CASE("malformed report documents are rejected") {
    CHECK_THROWS_AS(regime_report_from_json(nlohmann::json::parse(R"({"D":0.5})")),
                    nlohmann::json::exception);
    CHECK_THROWS_AS(equilibrium_kind_from_string("F9"), std::invalid_argument);
    CHECK_THROWS_AS(stability_from_string("sort of stable"), std::invalid_argument);
}

TEST_CASE("seventeen significant digits round-trip exactly") {
    for (double v : {3.141592653589793, 8.0 / 9.0, 1e-300, -0.1, 6.02e23}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}

TEST_CASE("branch CSV and nullcline CSV headers") {
    const GrowthModel model = fixtures::model_a();
    const ChemostatConfig config = fixtures::config33(0.5);
    const BranchDiagram diagram = sweep(model, config, 0.5, 0.55, 6);
    CHECK(branch_csv(diagram).rfind("D,kind,x1,x2,stability\n", 0) == 0);
    const std::string nullclines = nullclines_csv(model, config, 0.5, 50);
    CHECK(nullclines.rfind("x1,x2,branch\n", 0) == 0);
    CHECK(nullclines.find("gamma1") != std::string::npos);
    CHECK(nullclines.find("gamma2") != std::string::npos);
}

TEST_CASE("phase portrait SVG is well formed") {
    const GrowthModel model = fixtures::model_a();
    const ChemostatConfig config = fixtures::config33(0.95);
    const RegimeReport regime = classify_regime(model, config, 0.95);
    const std::string svg = phase_portrait_svg(model, config, 0.95, regime);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);   // nullclines drawn
    CHECK(svg.find("circle") != std::string::npos);     // equilibria drawn
}
