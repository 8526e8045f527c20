// Result records produced by a GIC solve. Branch flows are reported in
// amperes per phase; winding and neutral currents are three-phase totals.
// Neutral and substation ground currents are signed positive into ground.
#pragma once

#include <string>
#include <vector>

namespace gicflow {

enum class DcNodeKind { Bus, Neutral };

inline const char* to_string(DcNodeKind k) {
    return k == DcNodeKind::Bus ? "bus" : "neutral";
}

struct NodeResult {
    std::string id;  // bus id, or substation id for a neutral
    DcNodeKind kind = DcNodeKind::Bus;
    double dc_voltage_v = 0.0;
};

struct BranchResult {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double gic_a_per_phase = 0.0;  // signed, from->to positive
};

struct TransformerResult {
    std::string id;
    bool in_service = true;
    // Three-phase totals through each conducting winding, signed positive
    // from the winding's bus terminal toward the neutral (series: high->low).
    double winding_high_gic_a = 0.0;  // gwye high or auto series
    double winding_low_gic_a = 0.0;   // gwye low or auto common
    double neutral_gic_a = 0.0;       // into ground positive
    double effective_gic_a_per_phase = 0.0;
    double qloss_mvar = 0.0;
};

struct SubstationGroundResult {
    std::string substation_id;
    double gic_a = 0.0;  // into ground positive
};

struct SolveDiagnostics {
    int components = 0;
    int components_solved = 0;
    // Components with no earth path: legitimate (delta-isolated islands) but
    // worth a warning when they carry field injections.
    std::vector<std::string> floating_component_warnings;
    double max_kcl_residual_a = 0.0;
    double kcl_tolerance_a = 0.0;
};

struct GicSolution {
    std::vector<NodeResult> nodes;                  // sorted by (id, kind)
    std::vector<BranchResult> branches;             // sorted by id, every model branch
    std::vector<TransformerResult> transformers;    // sorted by id, every model transformer
    std::vector<SubstationGroundResult> grounds;    // sorted by substation id
    SolveDiagnostics diagnostics;
};

}  // namespace gicflow
