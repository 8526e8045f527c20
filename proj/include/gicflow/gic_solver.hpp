// DC GIC network construction and the nodal solve.
//
// Model: the three phases are lumped, so a line of R ohms per phase becomes
// one edge of conductance 3/R, winding paths likewise, and per-phase flows
// are reported as the lumped edge current divided by 3. Earth is the
// eliminated reference; a substation grounding resistance contributes a
// diagonal term at the neutral node (or pins the neutral to earth when it is
// exactly zero). Branch EMFs enter as Norton current injections at the line
// terminals. Each connected component is solved independently with a sparse
// symmetric factorization; components with no earth path are reported
// floating, with zero currents and a warning when they carry injections.
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gicflow/gic_metrics.hpp"
#include "gicflow/gmd_source.hpp"
#include "gicflow/grid_model.hpp"
#include "gicflow/parallel.hpp"
#include "gicflow/solution.hpp"

namespace gicflow {

enum class DcEdgeKind { Line, WindingHigh, WindingLow };

struct DcNode {
    std::string id;  // bus id or substation id
    DcNodeKind kind = DcNodeKind::Bus;
    double ground_conductance = 0.0;  // diagonal earth term, neutrals only
    bool pinned = false;              // grounding resistance exactly 0: held at earth potential
};

struct DcEdge {
    DcEdgeKind kind = DcEdgeKind::Line;
    std::size_t device = 0;  // position in DcNetwork::branches or ::transformers
    int node_a = -1;         // line: from bus; winding: bus terminal; series: high bus
    int node_b = -1;         // line: to bus; winding: neutral; series: low bus
    double conductance = 0.0;
};

struct BranchSolveInfo {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    int edge = -1;  // -1 when the branch conducts nothing (out of service / dead end)
};

struct TransformerSolveInfo {
    Transformer device;  // snapshot; solve needs configuration, k factor, id
    double kv_high = 0.0;
    double kv_low = 0.0;
    double v_pu_high = 1.0;
    int edge_high = -1;  // gwye high winding or auto series winding
    int edge_low = -1;   // gwye low winding or auto common winding
};

struct DcNetwork {
    std::vector<DcNode> nodes;
    std::vector<DcEdge> edges;
    std::vector<BranchSolveInfo> branches;            // sorted by id, every model branch
    std::vector<TransformerSolveInfo> transformers;   // sorted by id, every model transformer
    std::vector<std::pair<std::string, int>> ground_nodes;  // substation id -> node, sorted
    std::unordered_map<std::string, std::size_t> branch_position;  // id -> index in branches
};

// EMF-free conductance network per the lumped-phase rules above. Sources
// attach at solve time. Devices that are out of service, or whose terminal
// buses are out of service, contribute nothing.
inline DcNetwork build_network(const GridModel& model) {
    DcNetwork net;
    ModelIndex index(model);

    std::unordered_map<std::string, int> bus_node;
    std::unordered_map<std::string, int> neutral_node;

    auto live_bus = [&](const std::string& id) -> const Bus* {
        const Bus* b = index.bus(id);
        return (b != nullptr && b->in_service) ? b : nullptr;
    };
    auto bus_node_for = [&](const Bus& bus) -> int {
        auto it = bus_node.find(bus.id);
        if (it != bus_node.end()) return it->second;
        int n = static_cast<int>(net.nodes.size());
        net.nodes.push_back({bus.id, DcNodeKind::Bus, 0.0, false});
        bus_node.emplace(bus.id, n);
        return n;
    };
    auto neutral_node_for = [&](const std::string& substation_id) -> int {
        auto it = neutral_node.find(substation_id);
        if (it != neutral_node.end()) return it->second;
        const Substation* s = index.substation(substation_id);
        if (s == nullptr) throw Error("unknown neutral substation \"" + substation_id + "\"");
        DcNode node{substation_id, DcNodeKind::Neutral, 0.0, false};
        if (s->grounded()) {
            if (s->grounding_resistance_ohms == 0.0)
                node.pinned = true;
            else
                node.ground_conductance = 1.0 / s->grounding_resistance_ohms;
        }
        int n = static_cast<int>(net.nodes.size());
        net.nodes.push_back(std::move(node));
        neutral_node.emplace(substation_id, n);
        if (s->grounded()) net.ground_nodes.emplace_back(substation_id, n);
        return n;
    };

    for (const auto& branch : model.branches)
        net.branches.push_back({branch.id, branch.from_bus, branch.to_bus, -1});
    std::sort(net.branches.begin(), net.branches.end(),
              [](const BranchSolveInfo& a, const BranchSolveInfo& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < net.branches.size(); ++i)
        net.branch_position.emplace(net.branches[i].id, i);

    for (const auto& transformer : model.transformers) {
        TransformerSolveInfo info;
        info.device = transformer;
        if (const Bus* high = index.bus(transformer.bus_high)) {
            info.kv_high = high->nominal_kv;
            info.v_pu_high = high->voltage_pu;
        }
        if (const Bus* low = index.bus(transformer.bus_low)) info.kv_low = low->nominal_kv;
        net.transformers.push_back(std::move(info));
    }
    std::sort(net.transformers.begin(), net.transformers.end(),
              [](const TransformerSolveInfo& a, const TransformerSolveInfo& b) {
                  return a.device.id < b.device.id;
              });

    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        auto& info = net.branches[i];
        const Branch* branch = index.branch(info.id);
        if (!branch->in_service) continue;
        const Bus* from = live_bus(branch->from_bus);
        const Bus* to = live_bus(branch->to_bus);
        if (from == nullptr || to == nullptr || from == to) continue;
        if (!(branch->resistance_per_phase_ohms > 0.0))
            throw Error("in-service branch \"" + info.id + "\" has non-positive resistance");
        info.edge = static_cast<int>(net.edges.size());
        net.edges.push_back({DcEdgeKind::Line, i, bus_node_for(*from), bus_node_for(*to),
                             3.0 / branch->resistance_per_phase_ohms});
    }

    for (std::size_t i = 0; i < net.transformers.size(); ++i) {
        auto& info = net.transformers[i];
        const Transformer& t = info.device;
        if (!t.in_service) continue;
        const Bus* high = live_bus(t.bus_high);
        const Bus* low = live_bus(t.bus_low);

        auto winding_edge = [&](DcEdgeKind kind, const Bus& bus, int far_node, double r_ohms,
                                const char* which) -> int {
            if (!(r_ohms > 0.0))
                throw Error("transformer \"" + t.id + "\" " + which +
                            " winding conducts but has no resistance");
            int e = static_cast<int>(net.edges.size());
            net.edges.push_back({kind, i, bus_node_for(bus), far_node, 3.0 / r_ohms});
            return e;
        };

        switch (t.configuration) {
            case TransformerConfig::DeltaDelta:
                break;
            case TransformerConfig::GwyeDelta:
            case TransformerConfig::GwyeDeltaGsu:
                if (high != nullptr)
                    info.edge_high =
                        winding_edge(DcEdgeKind::WindingHigh, *high,
                                     neutral_node_for(t.neutral_substation),
                                     t.r_winding_high_ohms, "high");
                break;
            case TransformerConfig::GwyeGwye: {
                if (high != nullptr)
                    info.edge_high =
                        winding_edge(DcEdgeKind::WindingHigh, *high,
                                     neutral_node_for(t.neutral_substation),
                                     t.r_winding_high_ohms, "high");
                if (low != nullptr)
                    info.edge_low =
                        winding_edge(DcEdgeKind::WindingLow, *low,
                                     neutral_node_for(t.neutral_substation),
                                     t.r_winding_low_ohms, "low");
                break;
            }
            case TransformerConfig::Auto: {
                // series winding needs both terminals; the common winding only
                // needs the low terminal to reach the neutral
                if (high != nullptr && low != nullptr)
                    info.edge_high = winding_edge(DcEdgeKind::WindingHigh, *high,
                                                  bus_node_for(*low), t.r_winding_high_ohms,
                                                  "series");
                if (low != nullptr)
                    info.edge_low =
                        winding_edge(DcEdgeKind::WindingLow, *low,
                                     neutral_node_for(t.neutral_substation),
                                     t.r_winding_low_ohms, "common");
                break;
            }
        }
    }

    std::sort(net.ground_nodes.begin(), net.ground_nodes.end());
    return net;
}

// Component label per node, over conduction edges only (earth never merges
// components). Labels are dense, assigned in node order.
inline std::vector<int> component_labels(const DcNetwork& network) {
    detail::UnionFind uf(static_cast<int>(network.nodes.size()));
    for (const auto& e : network.edges) uf.unite(e.node_a, e.node_b);
    std::vector<int> labels(network.nodes.size(), -1);
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < network.nodes.size(); ++i) {
        int root = uf.find(static_cast<int>(i));
        auto [it, inserted] = relabel.emplace(root, static_cast<int>(relabel.size()));
        labels[i] = it->second;
    }
    return labels;
}

// Solves the network under the given branch EMFs and recovers every flow
// quantity plus effective GIC and Qloss per transformer.
inline GicSolution solve(const DcNetwork& network, const std::vector<BranchEmf>& emfs) {
    const std::size_t node_count = network.nodes.size();

    // Norton injections from branch EMFs
    std::vector<double> injection(node_count, 0.0);
    std::vector<double> edge_emf(network.edges.size(), 0.0);
    for (const auto& emf : emfs) {
        auto it = network.branch_position.find(emf.branch_id);
        if (it == network.branch_position.end())
            throw Error("EMF references unknown branch \"" + emf.branch_id + "\"");
        int e = network.branches[it->second].edge;
        if (e < 0) continue;  // branch conducts nothing; no path, no injection
        const DcEdge& edge = network.edges[e];
        edge_emf[e] += emf.emf_volts;
        injection[edge.node_a] -= edge.conductance * emf.emf_volts;
        injection[edge.node_b] += edge.conductance * emf.emf_volts;
    }

    const std::vector<int> labels = component_labels(network);
    int component_count = 0;
    for (int l : labels) component_count = std::max(component_count, l + 1);

    std::vector<std::vector<int>> component_nodes(component_count);
    for (std::size_t i = 0; i < node_count; ++i)
        component_nodes[labels[i]].push_back(static_cast<int>(i));
    std::vector<std::vector<const DcEdge*>> component_edges(component_count);
    for (const auto& e : network.edges) component_edges[labels[e.node_a]].push_back(&e);

    std::vector<char> grounded(component_count, 0);
    for (std::size_t i = 0; i < node_count; ++i)
        if (network.nodes[i].pinned || network.nodes[i].ground_conductance > 0.0)
            grounded[labels[i]] = 1;

    GicSolution solution;
    solution.diagnostics.components = component_count;
    std::vector<double> voltage(node_count, 0.0);
    std::vector<std::string> warnings(component_count);
    std::vector<char> solved(component_count, 0);

    parallel_for_index(static_cast<std::size_t>(component_count), [&](std::size_t c) {
        const auto& nodes = component_nodes[c];
        if (!grounded[c]) {
            for (int n : nodes) {
                if (injection[n] != 0.0) {
                    warnings[c] = "component containing node \"" + network.nodes[nodes.front()].id +
                                  "\" has no earth path; its " + std::to_string(nodes.size()) +
                                  " node(s) carry field injections and are reported with zero "
                                  "currents";
                    break;
                }
            }
            return;
        }

        // unknowns: component nodes that are not pinned to earth
        std::vector<int> unknown;
        std::vector<int> local(node_count, -1);
        for (int n : nodes) {
            if (network.nodes[n].pinned) continue;
            local[n] = static_cast<int>(unknown.size());
            unknown.push_back(n);
        }
        if (unknown.empty()) {
            solved[c] = 1;  // every node pinned; voltages are all zero
            return;
        }

        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(component_edges[c].size() * 4 + unknown.size());
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknown.size()));
        for (std::size_t k = 0; k < unknown.size(); ++k) {
            int n = unknown[k];
            if (network.nodes[n].ground_conductance > 0.0)
                triplets.emplace_back(k, k, network.nodes[n].ground_conductance);
            rhs[static_cast<Eigen::Index>(k)] = injection[n];
        }
        for (const DcEdge* e : component_edges[c]) {
            int a = local[e->node_a], b = local[e->node_b];
            if (a >= 0) triplets.emplace_back(a, a, e->conductance);
            if (b >= 0) triplets.emplace_back(b, b, e->conductance);
            if (a >= 0 && b >= 0) {
                triplets.emplace_back(a, b, -e->conductance);
                triplets.emplace_back(b, a, -e->conductance);
            }
        }

        Eigen::SparseMatrix<double> matrix(static_cast<Eigen::Index>(unknown.size()),
                                           static_cast<Eigen::Index>(unknown.size()));
        matrix.setFromTriplets(triplets.begin(), triplets.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factorization(matrix);
        if (factorization.info() != Eigen::Success)
            throw Error("sparse factorization failed on a grounded component");
        Eigen::VectorXd x = factorization.solve(rhs);
        if (factorization.info() != Eigen::Success)
            throw Error("sparse solve failed on a grounded component");
        for (std::size_t k = 0; k < unknown.size(); ++k)
            voltage[unknown[k]] = x[static_cast<Eigen::Index>(k)];
        solved[c] = 1;
    });

    for (int c = 0; c < component_count; ++c) {
        if (solved[c]) ++solution.diagnostics.components_solved;
        if (!warnings[c].empty())
            solution.diagnostics.floating_component_warnings.push_back(warnings[c]);
    }

    // lumped three-phase current per edge; floating components stay at zero
    std::vector<double> edge_current(network.edges.size(), 0.0);
    for (std::size_t e = 0; e < network.edges.size(); ++e) {
        const DcEdge& edge = network.edges[e];
        if (!solved[labels[edge.node_a]]) continue;
        edge_current[e] = edge.conductance *
                          (voltage[edge.node_a] - voltage[edge.node_b] + edge_emf[e]);
    }

    // KCL residual over solved, unpinned nodes: net edge outflow plus ground
    // outflow must equal the Norton injection
    {
        std::vector<double> outflow(node_count, 0.0);
        for (std::size_t e = 0; e < network.edges.size(); ++e) {
            const DcEdge& edge = network.edges[e];
            outflow[edge.node_a] += edge_current[e];
            outflow[edge.node_b] -= edge_current[e];
        }
        double max_injection = 0.0;
        for (double b : injection) max_injection = std::max(max_injection, std::abs(b));
        double max_residual = 0.0;
        for (std::size_t n = 0; n < node_count; ++n) {
            if (!solved[labels[n]] || network.nodes[n].pinned) continue;
            double residual =
                outflow[n] + network.nodes[n].ground_conductance * voltage[n];
            max_residual = std::max(max_residual, std::abs(residual));
        }
        solution.diagnostics.max_kcl_residual_a = max_residual;
        solution.diagnostics.kcl_tolerance_a = 1e-9 * std::max(1.0, max_injection);
    }

    solution.branches.reserve(network.branches.size());
    for (const auto& info : network.branches) {
        BranchResult r{info.id, info.from_bus, info.to_bus, 0.0};
        if (info.edge >= 0) r.gic_a_per_phase = edge_current[info.edge] / 3.0;
        solution.branches.push_back(std::move(r));
    }

    solution.transformers.reserve(network.transformers.size());
    for (const auto& info : network.transformers) {
        const Transformer& t = info.device;
        TransformerResult r;
        r.id = t.id;
        r.in_service = t.in_service;
        if (info.edge_high >= 0) r.winding_high_gic_a = edge_current[info.edge_high];
        if (info.edge_low >= 0) r.winding_low_gic_a = edge_current[info.edge_low];
        switch (t.configuration) {
            case TransformerConfig::GwyeDelta:
            case TransformerConfig::GwyeDeltaGsu:
                r.neutral_gic_a = r.winding_high_gic_a;
                break;
            case TransformerConfig::GwyeGwye:
                r.neutral_gic_a = r.winding_high_gic_a + r.winding_low_gic_a;
                break;
            case TransformerConfig::Auto:
                r.neutral_gic_a = r.winding_low_gic_a;  // only the common winding meets it
                break;
            case TransformerConfig::DeltaDelta:
                break;
        }
        if (t.in_service && (info.edge_high >= 0 || info.edge_low >= 0)) {
            r.effective_gic_a_per_phase = effective_gic(t, r.winding_high_gic_a,
                                                        r.winding_low_gic_a, info.kv_high,
                                                        info.kv_low);
            r.qloss_mvar = qloss_mvar(t, r.effective_gic_a_per_phase, info.v_pu_high);
        }
        solution.transformers.push_back(std::move(r));
    }

    // ground flow per substation: V * g through the grounding resistance, or
    // the winding inflow sum when the neutral is pinned at earth potential
    {
        std::vector<double> neutral_inflow(node_count, 0.0);
        for (std::size_t e = 0; e < network.edges.size(); ++e) {
            const DcEdge& edge = network.edges[e];
            if (edge.kind != DcEdgeKind::Line &&
                network.nodes[edge.node_b].kind == DcNodeKind::Neutral)
                neutral_inflow[edge.node_b] += edge_current[e];
        }
        for (const auto& [substation_id, n] : network.ground_nodes) {
            double gic = network.nodes[n].pinned
                             ? neutral_inflow[n]
                             : voltage[n] * network.nodes[n].ground_conductance;
            if (!solved[labels[n]]) gic = 0.0;
            solution.grounds.push_back({substation_id, gic});
        }
    }

    solution.nodes.reserve(node_count);
    for (std::size_t n = 0; n < node_count; ++n)
        solution.nodes.push_back({network.nodes[n].id, network.nodes[n].kind, voltage[n]});
    std::sort(solution.nodes.begin(), solution.nodes.end(),
              [](const NodeResult& a, const NodeResult& b) {
                  return std::tie(a.id, a.kind) < std::tie(b.id, b.kind);
              });

    return solution;
}

// Convenience entry point: field scenario -> EMFs -> network -> solution.
inline GicSolution solve_scenario(const GridModel& model, const FieldScenario& scenario) {
    DcNetwork network = build_network(model);
    return solve(network, induced_emfs(model, scenario));
}

}  // namespace gicflow
