// GDV-style geographic rendering of solutions and scenario differences.
//
// Substations become ovals whose AREA is proportional to the encoded value
// (|ground GIC| or |Qloss|); area rather than radius, so large flows are not
// visually overstated. Ground-flow color: green into the ground, red out.
// Difference views: green where the value decreased, red where it increased,
// drawn at the same size scale as the corresponding absolute view. Branch
// flows are black arrows along the line, length proportional to |GIC| and
// oriented by sign. Output is a self-contained SVG 1.1 document plus a
// GeoJSON FeatureCollection; both are byte-deterministic.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gicflow/format.hpp"
#include "gicflow/grid_model.hpp"
#include "gicflow/solution.hpp"

namespace gicflow {

enum class VizMode { GroundGic, SubstationQloss, Diff };

struct VizConfig {
    VizMode mode = VizMode::GroundGic;
    double oval_scale_km2_per_unit = 3.0;  // km^2 per ampere (or per Mvar)
    double arrow_scale_km_per_a = 0.6;     // arrow length km per ampere (per phase)
    double min_glyph_value = 0.1;          // floor hiding numerical-noise glyphs
    double oval_aspect = 1.6;              // rx / ry
    // equirectangular projection; center defaults to the substation centroid
    std::optional<std::pair<double, double>> center_lat_lon;
    double km_per_degree = 111.0;
    std::string color_increase = "red";
    std::string color_decrease = "green";
    std::string color_arrow = "black";
};

struct RenderResult {
    std::string svg;
    std::string geojson;
};

namespace viz_detail {

struct Projector {
    double lat0 = 0.0, lon0 = 0.0, km_per_deg = 111.0, cos_lat0 = 1.0;
    std::pair<double, double> operator()(double lat, double lon) const {
        return {km_per_deg * cos_lat0 * (lon - lon0), km_per_deg * (lat0 - lat)};
    }
};

struct SubstationGlyph {
    std::string id;
    double lat = 0.0, lon = 0.0;
    double value = 0.0;  // signed encoded quantity
};

struct ArrowGlyph {
    std::string id;
    double from_lat = 0, from_lon = 0, to_lat = 0, to_lon = 0;
    double gic_a_per_phase = 0.0;  // signed from->to
};

struct Scene {
    std::string quantity;  // "ground_gic_a" | "qloss_mvar" with "_delta" suffix for diffs
    bool is_diff = false;
    std::vector<SubstationGlyph> substations;  // sorted by id
    std::vector<ArrowGlyph> arrows;            // sorted by id
};

inline const Substation& substation_or_throw(const ModelIndex& index, const std::string& id) {
    const Substation* s = index.substation(id);
    if (s == nullptr) throw Error("viz: unknown substation \"" + id + "\"");
    if (std::isnan(s->latitude_deg) || std::isnan(s->longitude_deg))
        throw Error("viz: substation \"" + id + "\" has no coordinates");
    return *s;
}

// per-substation Qloss, attributed to the high-side bus's substation
inline std::map<std::string, double> substation_qloss(const GridModel& model,
                                                      const GicSolution& solution) {
    ModelIndex index(model);
    std::map<std::string, double> out;
    for (const auto& s : model.substations) out[s.id] = 0.0;
    std::map<std::string, std::string> high_substation;
    for (const auto& t : model.transformers) {
        const Bus* high = index.bus(t.bus_high);
        if (high != nullptr) high_substation[t.id] = high->substation_id;
    }
    for (const auto& t : solution.transformers) {
        auto it = high_substation.find(t.id);
        if (it != high_substation.end()) out[it->second] += t.qloss_mvar;
    }
    return out;
}

inline std::map<std::string, double> ground_gic_by_substation(const GridModel& model,
                                                              const GicSolution& solution) {
    std::map<std::string, double> out;
    for (const auto& s : model.substations) out[s.id] = 0.0;
    for (const auto& g : solution.grounds) out[g.substation_id] = g.gic_a;
    return out;
}

inline Scene build_scene(const GridModel& model, const std::map<std::string, double>& values,
                         const GicSolution* flows, const std::string& quantity, bool is_diff) {
    ModelIndex index(model);
    Scene scene;
    scene.quantity = quantity;
    scene.is_diff = is_diff;

    auto substations = model.substations;
    std::sort(substations.begin(), substations.end(),
              [](const Substation& a, const Substation& b) { return a.id < b.id; });
    for (const auto& s : substations) {
        if (std::isnan(s.latitude_deg) || std::isnan(s.longitude_deg))
            throw Error("viz: substation \"" + s.id + "\" has no coordinates");
        double v = 0.0;
        if (auto it = values.find(s.id); it != values.end()) v = it->second;
        scene.substations.push_back({s.id, s.latitude_deg, s.longitude_deg, v});
    }

    if (flows != nullptr) {
        for (const auto& b : flows->branches) {  // already sorted by id
            const Bus* from = index.bus(b.from_bus);
            const Bus* to = index.bus(b.to_bus);
            if (from == nullptr || to == nullptr) continue;
            const Substation& sf = substation_or_throw(index, from->substation_id);
            const Substation& st = substation_or_throw(index, to->substation_id);
            scene.arrows.push_back({b.id, sf.latitude_deg, sf.longitude_deg, st.latitude_deg,
                                    st.longitude_deg, b.gic_a_per_phase});
        }
    }
    return scene;
}

inline Projector make_projector(const Scene& scene, const VizConfig& config) {
    Projector p;
    p.km_per_deg = config.km_per_degree;
    if (config.center_lat_lon) {
        p.lat0 = config.center_lat_lon->first;
        p.lon0 = config.center_lat_lon->second;
    } else if (!scene.substations.empty()) {
        for (const auto& s : scene.substations) {
            p.lat0 += s.lat;
            p.lon0 += s.lon;
        }
        p.lat0 /= static_cast<double>(scene.substations.size());
        p.lon0 /= static_cast<double>(scene.substations.size());
    }
    p.cos_lat0 = std::cos(p.lat0 * std::numbers::pi / 180.0);
    return p;
}

inline std::string render_svg(const Scene& scene, const VizConfig& config) {
    if (!(config.oval_scale_km2_per_unit > 0.0) || !(config.arrow_scale_km_per_a > 0.0) ||
        !(config.oval_aspect > 0.0) || !(config.km_per_degree > 0.0))
        throw Error("viz: scales must be > 0");
    Projector project = make_projector(scene, config);

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    bool first = true;
    for (const auto& s : scene.substations) {
        auto [x, y] = project(s.lat, s.lon);
        if (first) {
            min_x = max_x = x;
            min_y = max_y = y;
            first = false;
        }
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    const double margin = 50.0;  // km
    min_x -= margin;
    min_y -= margin;
    max_x += margin;
    max_y += margin;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
        << format_double(min_x) << ' ' << format_double(min_y) << ' '
        << format_double(max_x - min_x) << ' ' << format_double(max_y - min_y) << "\">\n";
    svg << "  <desc>" << scene.quantity << (scene.is_diff ? " (difference view)" : "")
        << "</desc>\n";

    // context: thin branch traces under the glyphs
    for (const auto& a : scene.arrows) {
        auto [x1, y1] = project(a.from_lat, a.from_lon);
        auto [x2, y2] = project(a.to_lat, a.to_lon);
        svg << "  <line class=\"branch\" data-id=\"" << a.id << "\" x1=\"" << format_double(x1)
            << "\" y1=\"" << format_double(y1) << "\" x2=\"" << format_double(x2) << "\" y2=\""
            << format_double(y2) << "\" stroke=\"#c8c8c8\" stroke-width=\"1.5\"/>\n";
    }

    for (const auto& s : scene.substations) {
        if (std::abs(s.value) < config.min_glyph_value) continue;
        auto [x, y] = project(s.lat, s.lon);
        const double area = std::abs(s.value) * config.oval_scale_km2_per_unit;
        const double r = std::sqrt(area / std::numbers::pi);
        const double rx = r * std::sqrt(config.oval_aspect);
        const double ry = r / std::sqrt(config.oval_aspect);
        // diff view: green = decreased, red = increased; absolute ground
        // flow: green = into the ground (positive), red = out of it
        const bool green = scene.is_diff ? s.value < 0.0 : s.value >= 0.0;
        const std::string& fill =
            (scene.quantity == "qloss_mvar" && !scene.is_diff)
                ? config.color_increase  // absolute losses are all positive: red
                : (green ? config.color_decrease : config.color_increase);
        svg << "  <ellipse class=\"substation\" data-id=\"" << s.id << "\" data-value=\""
            << format_double(s.value) << "\" cx=\"" << format_double(x) << "\" cy=\""
            << format_double(y) << "\" rx=\"" << format_double(rx) << "\" ry=\""
            << format_double(ry) << "\" fill=\"" << fill << "\" fill-opacity=\"0.65\"/>\n";
    }

    for (const auto& a : scene.arrows) {
        if (std::abs(a.gic_a_per_phase) < config.min_glyph_value) continue;
        auto [x1, y1] = project(a.from_lat, a.from_lon);
        auto [x2, y2] = project(a.to_lat, a.to_lon);
        double dx = x2 - x1, dy = y2 - y1;
        double len = std::hypot(dx, dy);
        if (len == 0.0) continue;
        double ux = dx / len, uy = dy / len;
        if (a.gic_a_per_phase < 0.0) {
            ux = -ux;
            uy = -uy;
        }
        const double mx = 0.5 * (x1 + x2), my = 0.5 * (y1 + y2);
        const double half = 0.5 * std::abs(a.gic_a_per_phase) * config.arrow_scale_km_per_a;
        const double tip_x = mx + ux * half, tip_y = my + uy * half;
        const double tail_x = mx - ux * half, tail_y = my - uy * half;
        const double head = std::min(half, 6.0);
        const double px = -uy, py = ux;  // unit normal for the arrow head
        svg << "  <line class=\"flow\" data-id=\"" << a.id << "\" data-value=\""
            << format_double(a.gic_a_per_phase) << "\" x1=\"" << format_double(tail_x)
            << "\" y1=\"" << format_double(tail_y) << "\" x2=\"" << format_double(tip_x)
            << "\" y2=\"" << format_double(tip_y) << "\" stroke=\"" << config.color_arrow
            << "\" stroke-width=\"2\"/>\n";
        svg << "  <path class=\"flow-head\" data-id=\"" << a.id << "\" d=\"M "
            << format_double(tip_x) << ' ' << format_double(tip_y) << " L "
            << format_double(tip_x - ux * head + px * head * 0.5) << ' '
            << format_double(tip_y - uy * head + py * head * 0.5) << " L "
            << format_double(tip_x - ux * head - px * head * 0.5) << ' '
            << format_double(tip_y - uy * head - py * head * 0.5) << " Z\" fill=\""
            << config.color_arrow << "\"/>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

inline std::string render_geojson(const Scene& scene, const VizConfig& config) {
    using nlohmann::json;
    json features = json::array();
    for (const auto& s : scene.substations) {
        const bool green = scene.is_diff ? s.value < 0.0 : s.value >= 0.0;
        const std::string color =
            (scene.quantity == "qloss_mvar" && !scene.is_diff)
                ? config.color_increase
                : (green ? config.color_decrease : config.color_increase);
        json f;
        f["type"] = "Feature";
        f["geometry"] = {{"type", "Point"}, {"coordinates", {s.lon, s.lat}}};
        f["properties"] = {{"kind", "substation"},
                           {"id", s.id},
                           {"quantity", scene.quantity + (scene.is_diff ? "_delta" : "")},
                           {"value", s.value},
                           {"area_km2", std::abs(s.value) * config.oval_scale_km2_per_unit},
                           {"color", color},
                           {"below_floor", std::abs(s.value) < config.min_glyph_value}};
        features.push_back(std::move(f));
    }
    for (const auto& a : scene.arrows) {
        json f;
        f["type"] = "Feature";
        f["geometry"] = {{"type", "LineString"},
                         {"coordinates", {{a.from_lon, a.from_lat}, {a.to_lon, a.to_lat}}}};
        f["properties"] = {{"kind", "branch"},
                           {"id", a.id},
                           {"quantity", std::string("gic_a_per_phase") +
                                            (scene.is_diff ? "_delta" : "")},
                           {"value", a.gic_a_per_phase},
                           {"below_floor",
                            std::abs(a.gic_a_per_phase) < config.min_glyph_value}};
        features.push_back(std::move(f));
    }
    json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    return doc.dump(2) + "\n";
}

}  // namespace viz_detail

// Renders one solution. GroundGic mode encodes per-substation ground flow;
// SubstationQloss encodes GIC-driven reactive losses aggregated per
// substation.
inline RenderResult render_solution(const GridModel& model, const GicSolution& solution,
                                    const VizConfig& config) {
    const bool qloss = config.mode == VizMode::SubstationQloss;
    auto values = qloss ? viz_detail::substation_qloss(model, solution)
                        : viz_detail::ground_gic_by_substation(model, solution);
    viz_detail::Scene scene = viz_detail::build_scene(
        model, values, &solution, qloss ? "qloss_mvar" : "ground_gic_a", false);
    return {viz_detail::render_svg(scene, config), viz_detail::render_geojson(scene, config)};
}

// Renders out-minus-in differences at the same size scale as the absolute
// view. Branch arrows carry the per-phase GIC delta.
inline RenderResult render_diff(const GridModel& model, const GicSolution& sol_in,
                                const GicSolution& sol_out, const VizConfig& config) {
    if (sol_in.branches.size() != sol_out.branches.size() ||
        sol_in.transformers.size() != sol_out.transformers.size())
        throw Error("render_diff: solutions are not comparable");

    const bool qloss = config.mode == VizMode::SubstationQloss;
    auto values_in = qloss ? viz_detail::substation_qloss(model, sol_in)
                           : viz_detail::ground_gic_by_substation(model, sol_in);
    auto values_out = qloss ? viz_detail::substation_qloss(model, sol_out)
                            : viz_detail::ground_gic_by_substation(model, sol_out);
    std::map<std::string, double> delta;
    for (const auto& [id, v_out] : values_out) delta[id] = v_out - values_in.at(id);

    GicSolution flow_delta = sol_out;
    for (std::size_t i = 0; i < flow_delta.branches.size(); ++i) {
        if (flow_delta.branches[i].id != sol_in.branches[i].id)
            throw Error("render_diff: branch sets differ");
        flow_delta.branches[i].gic_a_per_phase -= sol_in.branches[i].gic_a_per_phase;
    }

    viz_detail::Scene scene = viz_detail::build_scene(
        model, delta, &flow_delta, qloss ? "qloss_mvar" : "ground_gic_a", true);
    return {viz_detail::render_svg(scene, config), viz_detail::render_geojson(scene, config)};
}

}  // namespace gicflow
