#include "syntro/growth.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace syntro {

namespace {

void require_nonnegative(double s1, double s2) {
    if (s1 < 0.0 || s2 < 0.0) {
        throw std::invalid_argument("substrate concentrations must be nonnegative");
    }
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
}

GrowthPartials finite_difference(const GrowthFn& f, double s1, double s2) {
    GrowthPartials p;
    const double h1 = 1e-6 * (1.0 + std::abs(s1));
    const double h2 = 1e-6 * (1.0 + std::abs(s2));
    // One-sided at the axes, where the function is undefined for negative
    // arguments.
    if (s1 >= h1)
        p.d_s1 = (f(s1 + h1, s2) - f(s1 - h1, s2)) / (2.0 * h1);
    else
        p.d_s1 = (f(s1 + h1, s2) - f(s1, s2)) / h1;
    if (s2 >= h2)
        p.d_s2 = (f(s1, s2 + h2) - f(s1, s2 - h2)) / (2.0 * h2);
    else
        p.d_s2 = (f(s1, s2 + h2) - f(s1, s2)) / h2;
    return p;
}

std::map<std::string, GrowthFamilyFactory>& registry() {
    static std::map<std::string, GrowthFamilyFactory> families = [] {
        std::map<std::string, GrowthFamilyFactory> m;
        // Variant with both species limited by s1; keeps the Monod product
        // form but breaks the inhibition sign pattern (fails H2 and H4).
        // Registered so the violation-reporting path is reachable from a
        // plain config file.
        m["monod_shared_substrate"] = [](const MonodParams& p) {
            p.validate();
            auto f1 = [p](double s1, double s2) {
                require_nonnegative(s1, s2);
                return p.m1 * s1 / ((p.K1 + s1) * (p.L1 + s2));
            };
            auto f2 = [p](double s1, double s2) {
                require_nonnegative(s1, s2);
                return p.m2 * s1 / ((p.K2 + s1) * (p.L2 + s2));
            };
            auto d1 = [p](double s1, double s2) {
                require_nonnegative(s1, s2);
                GrowthPartials g;
                g.d_s1 = p.m1 * p.K1 / ((p.K1 + s1) * (p.K1 + s1) * (p.L1 + s2));
                g.d_s2 = -p.m1 * s1 / ((p.K1 + s1) * (p.L1 + s2) * (p.L1 + s2));
                return g;
            };
            auto d2 = [p](double s1, double s2) {
                require_nonnegative(s1, s2);
                GrowthPartials g;
                g.d_s1 = p.m2 * p.K2 / ((p.K2 + s1) * (p.K2 + s1) * (p.L2 + s2));
                g.d_s2 = -p.m2 * s1 / ((p.K2 + s1) * (p.L2 + s2) * (p.L2 + s2));
                return g;
            };
            return GrowthModel::custom("monod_shared_substrate", f1, f2, d1, d2);
        };
        return m;
    }();
    return families;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void MonodParams::validate() const {
    require_positive(m1, "m1");
    require_positive(K1, "K1");
    require_positive(L1, "L1");
    require_positive(m2, "m2");
    require_positive(K2, "K2");
    require_positive(L2, "L2");
}

GrowthModel GrowthModel::monod_product(const MonodParams& params) {
    params.validate();
    GrowthModel model;
    model.family_ = "monod_product";
    model.monod_ = params;
    model.analytic_partials_ = true;
    return model;
}

GrowthModel GrowthModel::custom(std::string family, GrowthFn f1, GrowthFn f2,
                                PartialsFn d1, PartialsFn d2) {
    if (family.empty()) throw std::invalid_argument("custom family needs a name");
    if (!f1 || !f2) throw std::invalid_argument("custom family needs both rate functions");
    if (static_cast<bool>(d1) != static_cast<bool>(d2)) {
        throw std::invalid_argument("provide analytic partials for both rates or neither");
    }
    GrowthModel model;
    model.family_ = std::move(family);
    model.f1_ = std::move(f1);
    model.f2_ = std::move(f2);
    model.d1_ = std::move(d1);
    model.d2_ = std::move(d2);
    model.analytic_partials_ = static_cast<bool>(model.d1_);
    return model;
}

double GrowthModel::value(int which, double s1, double s2) const {
    require_nonnegative(s1, s2);
    if (monod_) {
        const MonodParams& p = *monod_;
        if (which == 1) return p.m1 * s1 / ((p.K1 + s1) * (p.L1 + s2));
        if (which == 2) return p.m2 * s2 / ((p.K2 + s2) * (p.L2 + s1));
    } else {
        if (which == 1) return f1_(s1, s2);
        if (which == 2) return f2_(s1, s2);
    }
    throw std::invalid_argument("growth function index must be 1 or 2");
}

GrowthPartials GrowthModel::partials(int which, double s1, double s2) const {
    require_nonnegative(s1, s2);
    if (monod_) {
        const MonodParams& p = *monod_;
        GrowthPartials g;
        if (which == 1) {
            const double a = p.K1 + s1, b = p.L1 + s2;
            g.d_s1 = p.m1 * p.K1 / (a * a * b);
            g.d_s2 = -p.m1 * s1 / (a * b * b);
            return g;
        }
        if (which == 2) {
            const double a = p.K2 + s2, b = p.L2 + s1;
            g.d_s1 = -p.m2 * s2 / (a * b * b);
            g.d_s2 = p.m2 * p.K2 / (a * a * b);
            return g;
        }
    } else {
        if (which == 1) return d1_ ? d1_(s1, s2) : finite_difference(f1_, s1, s2);
        if (which == 2) return d2_ ? d2_(s1, s2) : finite_difference(f2_, s1, s2);
    }
    throw std::invalid_argument("growth function index must be 1 or 2");
}

void register_growth_family(const std::string& name, GrowthFamilyFactory factory) {
    if (name == "monod_product") {
        throw std::invalid_argument("monod_product is the builtin family");
    }
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[name] = std::move(factory);
}

std::vector<std::string> registered_growth_families() {
    std::lock_guard<std::mutex> lock(registry_mutex());
    std::vector<std::string> names{"monod_product"};
    for (const auto& [name, factory] : registry()) names.push_back(name);
    return names;
}

void ChemostatConfig::validate() const {
    require_positive(D, "D");
    require_positive(s1_in, "s1_in");
    require_positive(s2_in, "s2_in");
    if (yields) {
        require_positive(yields->k1, "k1");
        require_positive(yields->k2, "k2");
        require_positive(yields->k3, "k3");
    }
}

ScaledInflows scale_parameters(double S1_in, double S2_in, const Yields& yields) {
    require_positive(S1_in, "S1_in");
    require_positive(S2_in, "S2_in");
    require_positive(yields.k1, "k1");
    require_positive(yields.k2, "k2");
    require_positive(yields.k3, "k3");
    return ScaledInflows{yields.k1 / yields.k3 * S1_in, S2_in};
}

GridSpec default_grid(const ChemostatConfig& config) {
    config.validate();
    return GridSpec{2.0 * config.s1_in, 2.0 * (config.s1_in + config.s2_in), 50, 50};
}

HypothesisReport check_hypotheses(const GrowthModel& model, const GridSpec& grid) {
    if (grid.n1 < 1 || grid.n2 < 1 || grid.s1_max < 0.0 || grid.s2_max < 0.0) {
        throw std::invalid_argument("grid must have positive extent and at least one sample");
    }
    HypothesisReport report;
    report.finite_difference_partials = !model.has_analytic_partials();

    auto record = [&report](const char* id, double s1, double s2, double observed) {
        if (report.violations.size() < HypothesisReport::max_recorded_violations) {
            report.violations.push_back({id, s1, s2, observed});
        }
    };

    auto coord = [](double max, int n, int i) {
        return n > 1 ? max * static_cast<double>(i) / (n - 1) : 0.0;
    };

    for (int i = 0; i < grid.n1; ++i) {
        const double s1 = coord(grid.s1_max, grid.n1, i);
        for (int j = 0; j < grid.n2; ++j) {
            const double s2 = coord(grid.s2_max, grid.n2, j);
            const double v1 = model.value(1, s1, s2);
            const double v2 = model.value(2, s1, s2);
            if (!std::isfinite(v1) || v1 < 0.0) record("H1", s1, s2, v1);
            if (!std::isfinite(v2) || v2 < 0.0) record("H1", s1, s2, v2);
            // Obligate-substrate axes vanish exactly, not just approximately.
            if (s1 == 0.0 && v1 != 0.0) record("H2", s1, s2, v1);
            if (s2 == 0.0 && v2 != 0.0) record("H2", s1, s2, v2);
            if (s1 > 0.0 && s2 > 0.0) {
                const GrowthPartials g1 = model.partials(1, s1, s2);
                const GrowthPartials g2 = model.partials(2, s1, s2);
                if (!(g1.d_s1 > 0.0)) record("H3", s1, s2, g1.d_s1);
                if (!(g1.d_s2 < 0.0)) record("H3", s1, s2, g1.d_s2);
                if (!(g2.d_s1 < 0.0)) record("H4", s1, s2, g2.d_s1);
                if (!(g2.d_s2 > 0.0)) record("H4", s1, s2, g2.d_s2);
            }
        }
    }
    report.pass = report.violations.empty();
    return report;
}

namespace {

using nlohmann::json;

double positive_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) {
        throw std::invalid_argument("missing field '" + key + "' in " + where);
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw std::invalid_argument("field '" + key + "' in " + where + " must be a number");
    }
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("field '" + key + "' in " + where + " must be positive");
    }
    return x;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument("unknown field '" + it.key() + "' in " + where);
        }
    }
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    reject_unknown(doc, {"growth", "D", "s1_in", "s2_in", "yields"}, "config");
    if (!doc.contains("growth") || !doc.at("growth").is_object()) {
        throw std::invalid_argument("missing object field 'growth' in config");
    }
    const json& growth = doc.at("growth");
    reject_unknown(growth, {"family", "m1", "K1", "L1", "m2", "K2", "L2"}, "growth");
    if (!growth.contains("family") || !growth.at("family").is_string()) {
        throw std::invalid_argument("missing string field 'family' in growth");
    }
    MonodParams params;
    params.m1 = positive_number(growth, "m1", "growth");
    params.K1 = positive_number(growth, "K1", "growth");
    params.L1 = positive_number(growth, "L1", "growth");
    params.m2 = positive_number(growth, "m2", "growth");
    params.K2 = positive_number(growth, "K2", "growth");
    params.L2 = positive_number(growth, "L2", "growth");

    const std::string family = growth.at("family").get<std::string>();
    std::optional<GrowthModel> model;
    if (family == "monod_product") {
        model = GrowthModel::monod_product(params);
    } else {
        std::lock_guard<std::mutex> lock(registry_mutex());
        auto it = registry().find(family);
        if (it == registry().end()) {
            throw std::invalid_argument("unknown growth family '" + family + "'");
        }
        model = it->second(params);
    }

    ChemostatConfig config;
    config.D = positive_number(doc, "D", "config");
    config.s1_in = positive_number(doc, "s1_in", "config");
    config.s2_in = positive_number(doc, "s2_in", "config");
    if (doc.contains("yields")) {
        const json& yields = doc.at("yields");
        if (!yields.is_object()) throw std::invalid_argument("'yields' must be an object");
        reject_unknown(yields, {"k1", "k2", "k3"}, "yields");
        Yields y;
        y.k1 = positive_number(yields, "k1", "yields");
        y.k2 = positive_number(yields, "k2", "yields");
        y.k3 = positive_number(yields, "k3", "yields");
        config.yields = y;
    }
    config.validate();
    return Scenario{std::move(*model), config};
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str());
}

}  // namespace syntro
