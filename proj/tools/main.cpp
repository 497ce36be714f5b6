// Command-line frontend: every analysis of the toolkit as a subcommand over
// a JSON scenario config. Exit codes: 0 success, 1 failed hypothesis check,
// 2 input error, 3 dilution rate at a bifurcation.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "syntro/basins.hpp"
#include "syntro/bifurcation.hpp"
#include "syntro/dynamics.hpp"
#include "syntro/equilibria.hpp"
#include "syntro/growth.hpp"
#include "syntro/io.hpp"
#include "syntro/serialize.hpp"
#include "syntro/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1u;
    int threads = 0;
};

std::vector<double> parse_components(const std::string& text, std::size_t expected,
                                     const char* what) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("cannot parse ") + what + " component '" +
                                        item + "'");
        }
    }
    if (values.size() != expected) {
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(expected) +
                                    " comma-separated components");
    }
    return values;
}

std::vector<double> uniform_times(double t_end, int samples) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(samples));
    for (int i = 1; i <= samples; ++i) {
        times.push_back(t_end * static_cast<double>(i) / samples);
    }
    return times;
}

class ManifestWriter {
public:
    ManifestWriter(std::string subcommand, const GlobalArgs& args)
        : start_(std::chrono::steady_clock::now()) {
        doc_["subcommand"] = std::move(subcommand);
        doc_["config"] = args.config_path;
        doc_["version"] = kVersion;
        doc_["parameters"] = json::object();
        doc_["outputs"] = json::array();
        out_dir_ = args.out_dir;
    }

    template <class T>
    void parameter(const std::string& key, const T& value) {
        doc_["parameters"][key] = value;
    }

    fs::path emit(const std::string& name, const std::string& content) {
        const fs::path path = fs::path(out_dir_) / name;
        syntro::write_file_atomic(path, content);
        doc_["outputs"].push_back(path.string());
        return path;
    }

    void finish() {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        doc_["duration_seconds"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
        syntro::write_file_atomic(fs::path(out_dir_) / "manifest.json", doc_.dump(2) + "\n");
    }

private:
    json doc_;
    std::string out_dir_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<syntro::EquilibriumRecord> equilibria_at(const syntro::Scenario& scenario,
                                                     double D) {
    return syntro::classify_regime_unchecked(scenario.model, scenario.config, D).equilibria;
}

int cmd_check(const GlobalArgs& args) {
    const syntro::Scenario scenario = syntro::load_scenario_file(args.config_path);
    const syntro::HypothesisReport report =
        syntro::check_hypotheses(scenario.model, syntro::default_grid(scenario.config));
    std::cout << syntro::to_json(report).dump(2) << "\n";
    return report.pass ? 0 : 1;
}

int cmd_analyze(const GlobalArgs& args, std::optional<double> D_flag) {
    const syntro::Scenario scenario = syntro::load_scenario_file(args.config_path);
    const double D = D_flag.value_or(scenario.config.D);
    const syntro::RegimeReport report =
        syntro::classify_regime(scenario.model, scenario.config, D);
    std::cout << syntro::to_json(report).dump(2) << "\n";
    return 0;
}

int cmd_simulate(const GlobalArgs& args, const std::string& init_full,
                 const std::string& init_reduced, std::optional<double> t_end_flag,
                 int samples, const std::string& out_name) {
    if (init_full.empty() == init_reduced.empty()) {
        throw std::invalid_argument("pass exactly one of --init and --init-reduced");
    }
    const syntro::Scenario scenario = syntro::load_scenario_file(args.config_path);
    const double D = scenario.config.D;
    const double t_end = t_end_flag.value_or(200.0 / D);
    if (!(t_end > 0.0)) throw std::invalid_argument("t-end must be positive");
    if (samples < 1) throw std::invalid_argument("samples must be positive");

    ManifestWriter manifest("simulate", args);
    manifest.parameter("D", D);
    manifest.parameter("t_end", t_end);
    manifest.parameter("samples", samples);

    syntro::IntegrateOptions opts;
    opts.sample_times = uniform_times(t_end, samples);

    const auto equilibria = equilibria_at(scenario, D);
    json summary;
    summary["t_end"] = t_end;

    if (!init_full.empty()) {
        const auto c = parse_components(init_full, 4, "--init");
        const syntro::FullState initial{c[0], c[1], c[2], c[3]};
        const syntro::FullTrajectory traj =
            syntro::integrate_full(scenario.model, scenario.config, initial, t_end, opts);
        manifest.emit(out_name, syntro::to_csv(traj));
        const auto attractor = syntro::detect_attractor(
            scenario.model, scenario.config, D, syntro::project(traj.final_state()),
            equilibria);
        const auto conservation = syntro::conservation_error(scenario.config, traj);
        summary["attractor"] = attractor ? json(syntro::to_string(*attractor)) : json(nullptr);
        summary["termination"] = syntro::to_string(traj.termination);
        summary["final"] = {traj.final_state().s1, traj.final_state().x1,
                            traj.final_state().s2, traj.final_state().x2};
        summary["conservation_deviation"] = {{"z1", conservation.z1},
                                             {"z2", conservation.z2}};
    } else {
        const auto c = parse_components(init_reduced, 2, "--init-reduced");
        const syntro::PlanarState initial{c[0], c[1]};
        const syntro::PlanarTrajectory traj = syntro::integrate_reduced(
            scenario.model, scenario.config, initial, t_end, opts);
        manifest.emit(out_name, syntro::to_csv(traj));
        const auto attractor = syntro::detect_attractor(scenario.model, scenario.config, D,
                                                        traj, equilibria);
        summary["attractor"] = attractor ? json(syntro::to_string(*attractor)) : json(nullptr);
        summary["termination"] = syntro::to_string(traj.termination);
        summary["final"] = {traj.final_state().x1, traj.final_state().x2};
    }
    manifest.finish();
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const GlobalArgs& args, double d_min, double d_max,
              std::optional<int> samples_flag) {
    const syntro::Scenario scenario = syntro::load_scenario_file(args.config_path);
    if (!(0.0 < d_min && d_min < d_max)) {
        throw std::invalid_argument("need 0 < --d-min < --d-max");
    }
    const int samples =
        samples_flag.value_or(std::max(2, static_cast<int>(std::lround(400.0 * (d_max - d_min)))));

    ManifestWriter manifest("sweep", args);
    manifest.parameter("d_min", d_min);
    manifest.parameter("d_max", d_max);
    manifest.parameter("samples", samples);
    manifest.parameter("threads", args.threads);

    const syntro::BranchDiagram diagram = syntro::sweep(
        scenario.model, scenario.config, d_min, d_max, samples, args.threads);
    manifest.emit("sweep.json", syntro::to_json(diagram).dump(2) + "\n");
    manifest.emit("sweep.csv", syntro::branch_csv(diagram));
    manifest.finish();

    json events = json::array();
    for (const auto& event : diagram.events) {
        events.push_back({{"D", event.D}, {"kind", syntro::to_string(event.kind)}});
    }
    std::cout << json{{"events", events}, {"samples", samples}}.dump(2) << "\n";
    return 0;
}

int cmd_basins(const GlobalArgs& args, std::optional<double> D_flag, int resolution,
               bool svg, int probes) {
    const syntro::Scenario scenario = syntro::load_scenario_file(args.config_path);
    const double D = D_flag.value_or(scenario.config.D);
    if (resolution < 1) throw std::invalid_argument("resolution must be positive");

    ManifestWriter manifest("basins", args);
    manifest.parameter("D", D);
    manifest.parameter("resolution", json::array({resolution, resolution}));
    manifest.parameter("threads", args.threads);
    manifest.parameter("seed", args.seed);

    const syntro::BasinGrid grid = syntro::classify_basins(
        scenario.model, scenario.config, D, resolution, resolution, args.threads);
    manifest.emit("basins.csv", syntro::to_csv(grid));
    manifest.emit("nullclines.csv",
                  syntro::nullclines_csv(scenario.model, grid.config, D));

    const syntro::RegimeReport regime =
        syntro::classify_regime(scenario.model, scenario.config, D);

    json summary;
    summary["D"] = D;
    summary["case"] = syntro::to_string(regime.case_label);
    json attractors = json::array();
    for (const auto& r : grid.attractors) attractors.push_back(syntro::to_string(r.kind));
    summary["attractors"] = attractors;
    summary["unresolved_fraction"] = grid.unresolved_fraction();

    std::optional<syntro::Separatrix> separatrix;
    if (grid.attractors.size() >= 2) {
        for (const auto& r : regime.equilibria) {
            if (r.kind == syntro::EquilibriumKind::F_star &&
                r.stability == syntro::Stability::saddle) {
                separatrix = syntro::compute_separatrix(scenario.model, scenario.config, D, r);
                manifest.emit("separatrix.csv", syntro::to_csv(*separatrix));
                break;
            }
        }
    }
    if (separatrix && probes > 0) {
        const syntro::ProbeCheck check = syntro::probe_separatrix(
            scenario.model, scenario.config, D, *separatrix, grid.attractors, probes, 1e-3,
            args.seed, args.threads);
        summary["probe_check"] = {{"requested", check.requested},
                                  {"used", check.used},
                                  {"split", check.split},
                                  {"clean", check.clean()}};
    }
    if (svg) {
        manifest.emit("basins.svg",
                      syntro::phase_portrait_svg(scenario.model, scenario.config, D, regime,
                                                 &grid, separatrix ? &*separatrix : nullptr));
    }
    manifest.finish();
    std::cout << summary.dump(2) << "\n";
    return 0;
}

template <class F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const syntro::at_bifurcation_error& e) {
        std::cerr << "error: " << e.what() << " (" << e.threshold() << " = " << e.value()
                  << ")\n";
        return 3;
    } catch (const json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qualitative and numerical analysis of a two-species cross-feeding chemostat"};
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("--config", args.config_path, "scenario config (JSON)")->required();
    app.add_option("--out", args.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", args.seed, "seed for random probe placement")
        ->capture_default_str();
    app.add_option("--threads", args.threads, "worker threads (0 = all)")
        ->capture_default_str();

    auto* check = app.add_subcommand("check", "verify the growth-model hypotheses");
    check->fallthrough();

    auto* analyze = app.add_subcommand("analyze", "thresholds, equilibria and regime");
    analyze->fallthrough();
    std::optional<double> analyze_D;
    analyze->add_option("--D", analyze_D, "dilution rate (default: config)");

    auto* simulate = app.add_subcommand("simulate", "integrate the full or reduced system");
    simulate->fallthrough();
    std::string init_full, init_reduced, out_name = "trajectory.csv";
    std::optional<double> t_end;
    int samples = 200;
    simulate->add_option("--init", init_full, "full initial state s1,x1,s2,x2");
    simulate->add_option("--init-reduced", init_reduced, "reduced initial state x1,x2");
    simulate->add_option("--t-end", t_end, "integration horizon (default 200/D)");
    simulate->add_option("--samples", samples, "output rows after t=0")
        ->capture_default_str();
    simulate->add_option("--out-file", out_name, "trajectory file name")
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "dilution-rate sweep with event refinement");
    sweep->fallthrough();
    double d_min = 0.0, d_max = 0.0;
    std::optional<int> sweep_samples;
    sweep->add_option("--d-min", d_min, "lower end of the sweep")->required();
    sweep->add_option("--d-max", d_max, "upper end of the sweep")->required();
    sweep->add_option("--samples", sweep_samples, "sample count (default 400 per unit)");

    auto* basins = app.add_subcommand("basins", "basins of attraction and separatrix");
    basins->fallthrough();
    std::optional<double> basins_D;
    int resolution = 100, probes = 0;
    bool svg = false;
    basins->add_option("--D", basins_D, "dilution rate (default: config)");
    basins->add_option("--resolution", resolution, "grid cells per axis")
        ->capture_default_str();
    basins->add_flag("--svg", svg, "write a phase-portrait SVG");
    basins->add_option("--probes", probes, "separatrix probe pairs (0 = off)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (check->parsed()) return guarded([&] { return cmd_check(args); });
    if (analyze->parsed()) return guarded([&] { return cmd_analyze(args, analyze_D); });
    if (simulate->parsed()) {
        return guarded([&] {
            return cmd_simulate(args, init_full, init_reduced, t_end, samples, out_name);
        });
    }
    if (sweep->parsed()) {
        return guarded([&] { return cmd_sweep(args, d_min, d_max, sweep_samples); });
    }
    if (basins->parsed()) {
        return guarded([&] { return cmd_basins(args, basins_D, resolution, svg, probes); });
    }
    return 2;
}
