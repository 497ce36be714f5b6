#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace syntro {

/// Partial derivatives of a growth-rate function with respect to the two
/// substrate concentrations.
struct GrowthPartials {
    double d_s1 = 0.0;
    double d_s2 = 0.0;
};

/// Parameters of the built-in Monod-type product family
///
///   f1(s1, s2) = m1 s1 / ((K1 + s1)(L1 + s2))
///   f2(s1, s2) = m2 s2 / ((K2 + s2)(L2 + s1))
///
/// Species 1 is limited by s1 and inhibited by s2; species 2 is limited by
/// s2 and inhibited by s1. All six parameters must be strictly positive.
struct MonodParams {
    double m1 = 0.0, K1 = 0.0, L1 = 0.0;
    double m2 = 0.0, K2 = 0.0, L2 = 0.0;

    void validate() const;  ///< throws std::invalid_argument on nonpositive entries
};

using GrowthFn = std::function<double(double s1, double s2)>;
using PartialsFn = std::function<GrowthPartials(double s1, double s2)>;

/// Pair of per-capita growth-rate functions (f1, f2) together with their
/// partial derivatives. Evaluation is pure and instances are immutable, so a
/// model can be shared across threads without synchronization.
///
/// Custom families are registered in code and may omit analytic partials, in
/// which case central finite differences are substituted and flagged in
/// HypothesisReport.
class GrowthModel {
public:
    static GrowthModel monod_product(const MonodParams& params);
    static GrowthModel custom(std::string family, GrowthFn f1, GrowthFn f2,
                              PartialsFn d1 = {}, PartialsFn d2 = {});

    /// f_which(s1, s2). which is 1 or 2; s1, s2 must be nonnegative.
    double value(int which, double s1, double s2) const;

    /// (d f_which / d s1, d f_which / d s2) at (s1, s2).
    GrowthPartials partials(int which, double s1, double s2) const;

    const std::string& family() const { return family_; }
    bool has_analytic_partials() const { return analytic_partials_; }
    const MonodParams* monod_params() const { return monod_ ? &*monod_ : nullptr; }

private:
    GrowthModel() = default;

    std::string family_;
    std::optional<MonodParams> monod_;
    GrowthFn f1_, f2_;
    PartialsFn d1_, d2_;
    bool analytic_partials_ = true;
};

/// Factory invoked when a config names a registered (non-builtin) family.
using GrowthFamilyFactory = std::function<GrowthModel(const MonodParams&)>;

void register_growth_family(const std::string& name, GrowthFamilyFactory factory);
std::vector<std::string> registered_growth_families();

/// Yield coefficients of the unscaled model.
struct Yields {
    double k1 = 1.0, k2 = 1.0, k3 = 1.0;
};

/// Operating conditions: dilution rate and inflow concentrations (already in
/// scaled units), plus the optional yields of the unscaled model.
struct ChemostatConfig {
    double D = 0.0;
    double s1_in = 0.0;
    double s2_in = 0.0;
    std::optional<Yields> yields;

    void validate() const;  ///< throws std::invalid_argument unless D, s1_in, s2_in > 0
};

/// Inflow concentrations after the change of variables that removes the
/// yield coefficients: s1_in = (k1/k3) S1_in, s2_in = S2_in.
struct ScaledInflows {
    double s1_in = 0.0;
    double s2_in = 0.0;
};

ScaledInflows scale_parameters(double S1_in, double S2_in, const Yields& yields);

/// Sampling rectangle [0, s1_max] x [0, s2_max] with n1 x n2 uniform points.
struct GridSpec {
    double s1_max = 0.0;
    double s2_max = 0.0;
    int n1 = 50;
    int n2 = 50;
};

/// Default rectangle [0, 2 s1_in] x [0, 2 (s1_in + s2_in)] at 50 x 50.
GridSpec default_grid(const ChemostatConfig& config);

struct HypothesisViolation {
    std::string hypothesis;  ///< "H1".."H4"
    double s1 = 0.0, s2 = 0.0;
    double observed = 0.0;
};

/// Result of sampling the qualitative hypotheses: vanishing on the obligate
/// axes (exact), positivity/finiteness, and the monotonicity sign pattern of
/// the partial derivatives at interior grid points.
struct HypothesisReport {
    bool pass = false;
    std::vector<HypothesisViolation> violations;
    bool finite_difference_partials = false;

    static constexpr std::size_t max_recorded_violations = 200;
};

HypothesisReport check_hypotheses(const GrowthModel& model, const GridSpec& grid);

/// A growth model together with the operating conditions it is analyzed
/// under; the unit read from a JSON config.
struct Scenario {
    GrowthModel model;
    ChemostatConfig config;
};

/// Parses the JSON config document
///
///   {"growth":{"family":"monod_product","m1":8,"K1":1,"L1":2,
///              "m2":4,"K2":2,"L2":1},
///    "D":0.5,"s1_in":3,"s2_in":3,"yields":{"k1":1,"k2":1,"k3":1}}
///
/// Field names are exact; unknown fields are rejected. "yields" is optional.
/// Families other than monod_product are looked up in the registry.
/// Throws nlohmann::json::parse_error on malformed JSON and
/// std::invalid_argument on schema violations.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::filesystem::path& path);

}  // namespace syntro
