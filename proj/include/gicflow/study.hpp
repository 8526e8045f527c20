// Batch-study shell behind the CLI: loads a grid, runs the requested
// analysis, and writes a deterministic output tree plus a run manifest.
// Subcommand logic lives here so it is directly testable; tools/gicflow.cpp
// only parses arguments.
#pragma once

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gicflow/format.hpp"
#include "gicflow/gic_metrics.hpp"
#include "gicflow/gic_solver.hpp"
#include "gicflow/gmd_source.hpp"
#include "gicflow/grid_io.hpp"
#include "gicflow/grid_model.hpp"
#include "gicflow/gsu_topology.hpp"
#include "gicflow/version.hpp"
#include "gicflow/viz.hpp"

namespace gicflow {

enum class ScenarioMode { GsusIn, GsusOut, Both };

inline const char* to_string(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::GsusIn: return "in";
        case ScenarioMode::GsusOut: return "out";
        case ScenarioMode::Both: return "both";
    }
    throw Error("unknown scenario mode");
}

struct StudyConfig {
    std::string grid_path;
    std::string out_dir = "out";
    FieldScenario field{8.0, 90.0, 1.0, 1.0};  // the standard intense-storm scenario
    GsuSearchConfig gsu;
    ScenarioMode mode = ScenarioMode::GsusIn;
    double threshold_a_per_phase = 75.0;
    double delta_bin_width_a = 1.0;
    bool deterministic = false;  // fixed manifest stamp for reproducible trees
    VizConfig viz;
};

namespace study_detail {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open grid file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) throw Error("failed reading grid file \"" + path + "\"");
    return buffer.str();
}

class OutputTree {
  public:
    explicit OutputTree(const std::string& root) : root_(root) {
        std::filesystem::create_directories(root_);
    }

    void write(const std::string& relative_path, const std::string& content) {
        std::filesystem::path target = root_ / relative_path;
        std::filesystem::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        out << content;
        if (!out) throw Error("failed writing \"" + target.string() + "\"");
        written_.push_back(relative_path);
    }

    const std::vector<std::string>& written() const { return written_; }

  private:
    std::filesystem::path root_;
    std::vector<std::string> written_;
};

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline json parameters_json(const StudyConfig& config) {
    json p;
    p["field_v_per_km"] = config.field.magnitude_v_per_km;
    p["field_direction_deg"] = config.field.direction_deg;
    p["alpha"] = config.field.alpha;
    p["beta"] = config.field.beta;
    p["min_transmission_kv"] = config.gsu.min_transmission_kv;
    p["max_bus_counter"] = config.gsu.max_bus_counter;
    p["gsu_mode"] = to_string(config.mode);
    p["effective_gic_threshold_a"] = config.threshold_a_per_phase;
    p["delta_bin_width_a"] = config.delta_bin_width_a;
    p["deterministic"] = config.deterministic;
    return p;
}

inline void write_manifest(OutputTree& tree, const StudyConfig& config,
                           const std::string& command,
                           std::chrono::steady_clock::time_point started) {
    json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command"] = command;
    manifest["grid"] = config.grid_path;
    manifest["parameters"] = parameters_json(config);
    manifest["outputs"] = tree.written();
    if (config.deterministic) {
        manifest["started_at"] = "1970-01-01T00:00:00Z";
        manifest["wall_time_ms"] = 0;
    } else {
        manifest["started_at"] = timestamp_utc();
        manifest["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now() - started)
                                       .count();
    }
    tree.write("manifest.json", manifest.dump(2) + "\n");
}

inline void write_solution_tree(OutputTree& tree, const std::string& prefix,
                                const GicSolution& solution) {
    std::ostringstream transformers, branches, nodes;
    write_solution_csv(solution, transformers, branches, nodes);
    tree.write(prefix + "transformers.csv", transformers.str());
    tree.write(prefix + "branches.csv", branches.str());
    tree.write(prefix + "nodes.csv", nodes.str());
}

inline json stats_json(const DeltaStats& s) {
    return json{{"count", s.count},
                {"mean_abs", s.mean_abs},
                {"std_abs", s.std_abs},
                {"max_abs", s.max_abs}};
}

inline std::string histogram_csv(const DeltaDistribution& dist) {
    std::ostringstream out;
    out << "bin_low_a,bin_high_a,count\n";
    for (std::size_t i = 0; i < dist.bins.size(); ++i)
        out << format_double(static_cast<double>(i) * dist.bin_width_a) << ','
            << format_double(static_cast<double>(i + 1) * dist.bin_width_a) << ',' << dist.bins[i]
            << '\n';
    return out.str();
}

struct LoadedStudy {
    GridModel model_in;           // as provided (GSUs of offline generators untouched)
    GridModel model_out;          // statuses synchronized to generator statuses
    GsuReport report;
};

inline LoadedStudy load_study(const StudyConfig& config) {
    LoadedStudy study;
    study.model_in = parse_grid(read_file(config.grid_path));
    study.report = identify_gsus(study.model_in, config.gsu);
    study.model_out = synchronize_gsu_status(study.model_in, study.report);
    return study;
}

inline json gsu_report_json(const GsuReport& report) {
    json doc;
    doc["min_transmission_kv"] = report.config.min_transmission_kv;
    doc["max_bus_counter"] = report.config.max_bus_counter;
    json generators = json::array();
    for (const auto& g : report.generators) {
        json r;
        r["generator_id"] = g.generator_id;
        r["classification"] = to_string(g.classification);
        r["gsu_transformer_ids"] = g.gsu_transformer_ids;
        r["buses_visited"] = g.buses_visited;
        generators.push_back(std::move(r));
    }
    doc["generators"] = std::move(generators);
    doc["shared_gsus"] = report.shared_gsus;
    GsuHistogram h = gsu_count_histogram(report);
    doc["classification_tallies"] = {{"direct_transmission", h.direct_transmission},
                                     {"gsus_found", h.gsus_found},
                                     {"no_path_within_bound", h.no_path_within_bound}};
    return doc;
}

}  // namespace study_detail

// Solves the selected scenario(s) and writes the three result CSVs plus the
// manifest. Returns a process exit status.
inline int cmd_solve(const StudyConfig& config, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    try {
        study_detail::LoadedStudy study = study_detail::load_study(config);
        study_detail::OutputTree tree(config.out_dir);
        if (config.mode == ScenarioMode::Both) {
            write_solution_tree(tree, "gsus_in/", solve_scenario(study.model_in, config.field));
            write_solution_tree(tree, "gsus_out/", solve_scenario(study.model_out, config.field));
        } else {
            const GridModel& model =
                config.mode == ScenarioMode::GsusOut ? study.model_out : study.model_in;
            GicSolution solution = solve_scenario(model, config.field);
            for (const auto& w : solution.diagnostics.floating_component_warnings)
                log << "warning: " << w << '\n';
            write_solution_tree(tree, "", solution);
        }
        study_detail::write_manifest(tree, config, "solve", started);
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

// Runs the GSUs-in / GSUs-out pair from one parsed model and one
// identification pass, then writes both solution trees, the comparison
// tables, and the delta distributions.
inline int cmd_compare(const StudyConfig& config, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    try {
        study_detail::LoadedStudy study = study_detail::load_study(config);
        study_detail::OutputTree tree(config.out_dir);

        GicSolution sol_in = solve_scenario(study.model_in, config.field);
        GicSolution sol_out = solve_scenario(study.model_out, config.field);
        write_solution_tree(tree, "gsus_in/", sol_in);
        write_solution_tree(tree, "gsus_out/", sol_out);

        ScenarioDiff diff = compare_scenarios(sol_in, sol_out, study.model_in, study.model_out,
                                              config.threshold_a_per_phase);

        {
            std::ostringstream out;
            out << "quantity,value\n";
            out << "qloss_gsus_in_mvar," << format_double(diff.qloss_in_mvar) << '\n';
            out << "qloss_gsus_out_mvar," << format_double(diff.qloss_out_mvar) << '\n';
            out << "difference_mvar," << format_double(diff.qloss_difference_mvar) << '\n';
            out << "error_pct," << format_fixed(diff.qloss_error_pct, 1) << '\n';
            tree.write("qloss_table.csv", out.str());
        }
        {
            std::ostringstream out;
            out << "area,error_pct\n";
            for (const auto& [area, pct] : diff.per_area_error_pct)
                out << area << ',' << format_fixed(pct, 1) << '\n';
            tree.write("area_errors.csv", out.str());
        }
        {
            std::ostringstream out;
            out << "scenario,count_above_threshold,count_at_threshold\n";
            out << "gsus_in," << diff.threshold_count_in << ','
                << diff.threshold_boundary_in.size() << '\n';
            out << "gsus_out," << diff.threshold_count_out << ','
                << diff.threshold_boundary_out.size() << '\n';
            tree.write("threshold_counts.csv", out.str());
        }
        DeltaDistribution neutral =
            delta_distribution(sol_in, sol_out, DeltaQuantity::NeutralGic,
                               config.delta_bin_width_a);
        DeltaDistribution branch = delta_distribution(sol_in, sol_out, DeltaQuantity::BranchGic,
                                                      config.delta_bin_width_a);
        tree.write("neutral_delta_hist.csv", study_detail::histogram_csv(neutral));
        tree.write("branch_delta_hist.csv", study_detail::histogram_csv(branch));
        {
            using study_detail::json;
            json doc;
            doc["common_transformers"] = diff.common_transformers;
            doc["qloss_gsus_in_mvar"] = diff.qloss_in_mvar;
            doc["qloss_gsus_out_mvar"] = diff.qloss_out_mvar;
            doc["qloss_difference_mvar"] = diff.qloss_difference_mvar;
            doc["qloss_error_pct"] = diff.qloss_error_pct;
            doc["per_area_error_pct"] = diff.per_area_error_pct;
            doc["effective_gic_threshold_a"] = config.threshold_a_per_phase;
            doc["threshold_count_gsus_in"] = diff.threshold_count_in;
            doc["threshold_count_gsus_out"] = diff.threshold_count_out;
            doc["threshold_boundary_gsus_in"] = diff.threshold_boundary_in;
            doc["threshold_boundary_gsus_out"] = diff.threshold_boundary_out;
            doc["neutral_delta_stats"] = study_detail::stats_json(diff.neutral_delta_stats);
            doc["branch_delta_stats"] = study_detail::stats_json(diff.branch_delta_stats);
            tree.write("comparison.json", doc.dump(2) + "\n");
        }
        study_detail::write_manifest(tree, config, "compare", started);
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

// Writes the identification report (JSON) and the GSU-count histogram (CSV).
inline int cmd_identify_gsus(const StudyConfig& config, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    try {
        GridModel model = parse_grid(study_detail::read_file(config.grid_path));
        GsuReport report = identify_gsus(model, config.gsu);
        study_detail::OutputTree tree(config.out_dir);
        tree.write("gsu_report.json", study_detail::gsu_report_json(report).dump(2) + "\n");
        {
            GsuHistogram histogram = gsu_count_histogram(report);
            std::ostringstream out;
            out << "gsu_count,generator_count\n";
            for (const auto& [count, generators] : histogram.generators_by_gsu_count)
                out << count << ',' << generators << '\n';
            tree.write("gsu_histogram.csv", out.str());
        }
        study_detail::write_manifest(tree, config, "identify-gsus", started);
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

// Renders the requested scenario(s); mode `both` additionally renders the
// difference view at the same scale.
inline int cmd_viz(const StudyConfig& config, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    try {
        study_detail::LoadedStudy study = study_detail::load_study(config);
        study_detail::OutputTree tree(config.out_dir);
        if (config.mode == ScenarioMode::Both) {
            GicSolution sol_in = solve_scenario(study.model_in, config.field);
            GicSolution sol_out = solve_scenario(study.model_out, config.field);
            RenderResult in = render_solution(study.model_in, sol_in, config.viz);
            RenderResult out = render_solution(study.model_out, sol_out, config.viz);
            RenderResult diff = render_diff(study.model_in, sol_in, sol_out, config.viz);
            tree.write("gsus_in.svg", in.svg);
            tree.write("gsus_in.geojson", in.geojson);
            tree.write("gsus_out.svg", out.svg);
            tree.write("gsus_out.geojson", out.geojson);
            tree.write("diff.svg", diff.svg);
            tree.write("diff.geojson", diff.geojson);
        } else {
            const GridModel& model =
                config.mode == ScenarioMode::GsusOut ? study.model_out : study.model_in;
            RenderResult r = render_solution(model, solve_scenario(model, config.field),
                                             config.viz);
            tree.write("solution.svg", r.svg);
            tree.write("solution.geojson", r.geojson);
        }
        study_detail::write_manifest(tree, config, "viz", started);
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace gicflow
