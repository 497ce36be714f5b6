#include "syntro/serialize.hpp"

#include <sstream>
#include <stdexcept>

#include "syntro/io.hpp"

namespace syntro {

using nlohmann::json;

namespace {

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& v) {
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) throw std::invalid_argument("expected number or null");
    return v.get<double>();
}

template <class Enum, class FromString>
Enum enum_from(const json& v, FromString&& parse, const char* what) {
    if (!v.is_string()) throw std::invalid_argument(std::string("expected string ") + what);
    return parse(v.get<std::string>());
}

}  // namespace

EquilibriumKind equilibrium_kind_from_string(const std::string& s) {
    if (s == "F0") return EquilibriumKind::F0;
    if (s == "F1_boundary") return EquilibriumKind::F1_boundary;
    if (s == "F2_boundary") return EquilibriumKind::F2_boundary;
    if (s == "F_star") return EquilibriumKind::F_star;
    throw std::invalid_argument("unknown equilibrium kind '" + s + "'");
}

Stability stability_from_string(const std::string& s) {
    if (s == "stable_node") return Stability::stable_node;
    if (s == "unstable_node") return Stability::unstable_node;
    if (s == "saddle") return Stability::saddle;
    if (s == "nonhyperbolic") return Stability::nonhyperbolic;
    throw std::invalid_argument("unknown stability '" + s + "'");
}

RegimeCase regime_case_from_string(const std::string& s) {
    if (s == "case1") return RegimeCase::case1;
    if (s == "case2a") return RegimeCase::case2a;
    if (s == "case2b") return RegimeCase::case2b;
    if (s == "case2c") return RegimeCase::case2c;
    if (s == "case2d") return RegimeCase::case2d;
    if (s == "case3") return RegimeCase::case3;
    throw std::invalid_argument("unknown regime case '" + s + "'");
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "F1_vanishes") return EventKind::F1_vanishes;
    if (s == "F2_vanishes") return EventKind::F2_vanishes;
    if (s == "F1_exchanges_stability") return EventKind::F1_exchanges_stability;
    if (s == "F2_exchanges_stability") return EventKind::F2_exchanges_stability;
    if (s == "saddle_node") return EventKind::saddle_node;
    if (s == "F0_exchanges") return EventKind::F0_exchanges;
    throw std::invalid_argument("unknown event kind '" + s + "'");
}

json to_json(const Thresholds& thresholds) {
    return json{{"D1", thresholds.D1},
                {"D2", thresholds.D2},
                {"D3", optional_to_json(thresholds.D3)},
                {"D4", optional_to_json(thresholds.D4)},
                {"xi1", optional_to_json(thresholds.xi1)},
                {"xi2", optional_to_json(thresholds.xi2)}};
}

json to_json(const EquilibriumRecord& record) {
    json j{{"kind", to_string(record.kind)},
           {"x1", record.location.x1},
           {"x2", record.location.x2},
           {"jacobian", json::array({record.jacobian.a11, record.jacobian.a12,
                                     record.jacobian.a21, record.jacobian.a22})},
           {"eigenvalues",
            json::array({json::array({record.eigenvalues[0].real(),
                                      record.eigenvalues[0].imag()}),
                         json::array({record.eigenvalues[1].real(),
                                      record.eigenvalues[1].imag()})})},
           {"stability", to_string(record.stability)},
           {"residual", record.residual}};
    if (record.slope1) j["slope1"] = *record.slope1;
    if (record.slope2) j["slope2"] = *record.slope2;
    return j;
}

json to_json(const RegimeReport& report) {
    json equilibria = json::array();
    for (const auto& r : report.equilibria) equilibria.push_back(to_json(r));
    json attractors = json::array();
    for (const auto& kind : report.predicted_attractors) attractors.push_back(to_string(kind));
    return json{{"D", report.D},
                {"thresholds", to_json(report.thresholds)},
                {"case", to_string(report.case_label)},
                {"equilibria", equilibria},
                {"predicted_attractors", attractors},
                {"near_degenerate", report.near_degenerate}};
}

json to_json(const BranchDiagram& diagram) {
    json samples = json::array();
    for (const auto& sample : diagram.samples) {
        json equilibria = json::array();
        for (const auto& r : sample.report.equilibria) equilibria.push_back(to_json(r));
        samples.push_back(json{{"D", sample.D},
                               {"case", to_string(sample.report.case_label)},
                               {"equilibria", equilibria}});
    }
    json events = json::array();
    for (const auto& event : diagram.events) {
        json witnesses = json::array();
        for (const auto& w : event.witnesses) witnesses.push_back(to_json(w));
        json e{{"D", event.D}, {"kind", to_string(event.kind)}, {"witnesses", witnesses}};
        if (event.point) {
            e["point"] = json::array({event.point->x1, event.point->x2});
        }
        events.push_back(std::move(e));
    }
    return json{{"samples", samples}, {"events", events}};
}

json to_json(const HypothesisReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back(json{{"hypothesis", v.hypothesis},
                                  {"s1", v.s1},
                                  {"s2", v.s2},
                                  {"observed", v.observed}});
    }
    return json{{"pass", report.pass},
                {"violations", violations},
                {"finite_difference_partials", report.finite_difference_partials}};
}

namespace {

EquilibriumRecord record_from_json(const json& j) {
    EquilibriumRecord r;
    r.kind = enum_from<EquilibriumKind>(j.at("kind"), equilibrium_kind_from_string, "kind");
    r.location = {j.at("x1").get<double>(), j.at("x2").get<double>()};
    const auto& J = j.at("jacobian");
    if (!J.is_array() || J.size() != 4) throw std::invalid_argument("bad jacobian");
    r.jacobian = Mat2{J[0].get<double>(), J[1].get<double>(), J[2].get<double>(),
                      J[3].get<double>()};
    const auto& ev = j.at("eigenvalues");
    if (!ev.is_array() || ev.size() != 2) throw std::invalid_argument("bad eigenvalues");
    for (int k = 0; k < 2; ++k) {
        if (!ev[k].is_array() || ev[k].size() != 2) {
            throw std::invalid_argument("bad eigenvalue entry");
        }
        r.eigenvalues[k] = {ev[k][0].get<double>(), ev[k][1].get<double>()};
    }
    r.stability = enum_from<Stability>(j.at("stability"), stability_from_string, "stability");
    r.residual = j.at("residual").get<double>();
    if (j.contains("slope1")) r.slope1 = j.at("slope1").get<double>();
    if (j.contains("slope2")) r.slope2 = j.at("slope2").get<double>();
    return r;
}

Thresholds thresholds_from_json(const json& j) {
    Thresholds t;
    t.D1 = j.at("D1").get<double>();
    t.D2 = j.at("D2").get<double>();
    t.D3 = optional_from_json(j.at("D3"));
    t.D4 = optional_from_json(j.at("D4"));
    t.xi1 = optional_from_json(j.at("xi1"));
    t.xi2 = optional_from_json(j.at("xi2"));
    return t;
}

}  // namespace

RegimeReport regime_report_from_json(const json& doc) {
    RegimeReport report;
    report.D = doc.at("D").get<double>();
    report.thresholds = thresholds_from_json(doc.at("thresholds"));
    report.case_label =
        enum_from<RegimeCase>(doc.at("case"), regime_case_from_string, "case");
    for (const auto& j : doc.at("equilibria")) {
        report.equilibria.push_back(record_from_json(j));
    }
    for (const auto& j : doc.at("predicted_attractors")) {
        report.predicted_attractors.push_back(
            enum_from<EquilibriumKind>(j, equilibrium_kind_from_string, "attractor"));
    }
    report.near_degenerate = doc.at("near_degenerate").get<bool>();
    return report;
}

BranchDiagram branch_diagram_from_json(const json& doc) {
    BranchDiagram diagram;
    for (const auto& j : doc.at("samples")) {
        BranchSample sample;
        sample.D = j.at("D").get<double>();
        sample.report.D = sample.D;
        sample.report.case_label =
            enum_from<RegimeCase>(j.at("case"), regime_case_from_string, "case");
        for (const auto& r : j.at("equilibria")) {
            sample.report.equilibria.push_back(record_from_json(r));
        }
        diagram.samples.push_back(std::move(sample));
    }
    for (const auto& j : doc.at("events")) {
        BifurcationEvent event;
        event.D = j.at("D").get<double>();
        event.kind = enum_from<EventKind>(j.at("kind"), event_kind_from_string, "kind");
        for (const auto& w : j.at("witnesses")) {
            event.witnesses.push_back(record_from_json(w));
        }
        if (j.contains("point")) {
            const auto& p = j.at("point");
            event.point = PlanarState{p[0].get<double>(), p[1].get<double>()};
        }
        diagram.events.push_back(std::move(event));
    }
    return diagram;
}

std::string branch_csv(const BranchDiagram& diagram) {
    std::ostringstream out;
    out << "D,kind,x1,x2,stability\n";
    for (const auto& sample : diagram.samples) {
        for (const auto& r : sample.report.equilibria) {
            out << format_g17(sample.D) << ',' << to_string(r.kind) << ','
                << format_g17(r.location.x1) << ',' << format_g17(r.location.x2) << ','
                << to_string(r.stability) << '\n';
        }
    }
    return out.str();
}

std::string nullclines_csv(const GrowthModel& model, const ChemostatConfig& config,
                           double D, int samples) {
    std::ostringstream out;
    out << "x1,x2,branch\n";
    for (int which = 1; which <= 2; ++which) {
        const auto line = nullcline_polyline(model, config, which, D, samples);
        const char* branch = which == 1 ? "gamma1" : "gamma2";
        for (const auto& p : line) {
            out << format_g17(p.x1) << ',' << format_g17(p.x2) << ',' << branch << '\n';
        }
    }
    return out.str();
}

}  // namespace syntro
