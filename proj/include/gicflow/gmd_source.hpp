// Converts a uniform electric field scenario into per-branch induced EMFs.
//
// Direction convention, used everywhere in gicflow: degrees clockwise from
// geographic north, so 0 = northward and 90 = eastward. A branch EMF is
// signed from->to positive.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gicflow/grid_model.hpp"

namespace gicflow {

struct FieldScenario {
    double magnitude_v_per_km = 0.0;
    double direction_deg = 90.0;  // clockwise from north; 90 = eastward
    double alpha = 1.0;           // storm scaling factors, multiplicative
    double beta = 1.0;

    double normalized_direction_deg() const {
        double d = std::fmod(direction_deg, 360.0);
        if (d < 0.0) d += 360.0;
        return d;
    }
};

struct BranchEmf {
    std::string branch_id;
    double emf_volts = 0.0;  // from->to positive
};

// (cos, sin) of the field direction. Quadrant angles are returned exactly so
// an eastward field contributes exactly zero to a north-south branch.
inline std::pair<double, double> direction_cos_sin(double direction_deg) {
    double d = std::fmod(direction_deg, 360.0);
    if (d < 0.0) d += 360.0;
    if (d == 0.0) return {1.0, 0.0};
    if (d == 90.0) return {0.0, 1.0};
    if (d == 180.0) return {-1.0, 0.0};
    if (d == 270.0) return {0.0, -1.0};
    double r = d * std::numbers::pi / 180.0;
    return {std::cos(r), std::sin(r)};
}

// Northward/eastward displacement in km of the to-end relative to the
// from-end. Explicit branch lengths win; otherwise the fixed mid-latitude
// approximation over the endpoint substation coordinates:
//   L_N = (111.133 - 0.56 cos 2p) dphi
//   L_E = (111.5065 - 0.1872 cos 2p) cos p dlambda
// with p the mean latitude and dphi, dlambda in degrees.
inline std::pair<double, double> geodesic_lengths(const ModelIndex& index, const Branch& branch) {
    if (branch.length_north_km.has_value() || branch.length_east_km.has_value())
        return {branch.length_north_km.value_or(0.0), branch.length_east_km.value_or(0.0)};

    const Bus* from = index.bus(branch.from_bus);
    const Bus* to = index.bus(branch.to_bus);
    if (from == nullptr || to == nullptr)
        throw Error("branch \"" + branch.id + "\" references an unknown bus");
    const Substation* s_from = index.substation(from->substation_id);
    const Substation* s_to = index.substation(to->substation_id);
    if (s_from == nullptr || s_to == nullptr)
        throw Error("branch \"" + branch.id + "\" endpoints reference unknown substations");

    const double lat1 = s_from->latitude_deg, lon1 = s_from->longitude_deg;
    const double lat2 = s_to->latitude_deg, lon2 = s_to->longitude_deg;
    if (std::isnan(lat1) || std::isnan(lon1) || std::isnan(lat2) || std::isnan(lon2))
        throw Error("branch \"" + branch.id +
                    "\" has no explicit lengths and endpoint coordinates are missing");

    const double mean_lat_rad = 0.5 * (lat1 + lat2) * std::numbers::pi / 180.0;
    const double cos2p = std::cos(2.0 * mean_lat_rad);
    const double dphi = lat2 - lat1;
    const double dlambda = lon2 - lon1;
    const double north = (111.133 - 0.56 * cos2p) * dphi;
    const double east = (111.5065 - 0.1872 * cos2p) * std::cos(mean_lat_rad) * dlambda;
    return {north, east};
}

inline std::pair<double, double> geodesic_lengths(const GridModel& model, const Branch& branch) {
    ModelIndex index(model);
    return geodesic_lengths(index, branch);
}

// Per-branch induced EMF for every in-service branch:
//   emf = alpha * beta * |E| * (cos(dir) * L_N + sin(dir) * L_E)
// Transformer windings have no geographic extent and receive no EMF.
inline std::vector<BranchEmf> induced_emfs(const GridModel& model, const FieldScenario& scenario) {
    auto [c, s] = direction_cos_sin(scenario.direction_deg);
    const double scale = scenario.alpha * scenario.beta * scenario.magnitude_v_per_km;
    ModelIndex index(model);

    std::vector<BranchEmf> out;
    out.reserve(model.branches.size());
    for (const auto& branch : model.branches) {
        if (!branch.in_service) continue;
        auto [north, east] = geodesic_lengths(index, branch);
        out.push_back({branch.id, scale * (c * north + s * east)});
    }
    return out;
}

}  // namespace gicflow
