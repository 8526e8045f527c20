// Generator step-up transformer identification and status synchronization.
//
// A generator sitting below transmission level is connected to the grid
// through one or more step-up transformers. Grid data rarely flags them, so
// they are found topologically: a bounded breadth-first search outward from
// the generator bus that records every transformer on a path to a
// transmission-level bus and never expands past transmission level.
#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gicflow/grid_model.hpp"
#include "gicflow/parallel.hpp"

namespace gicflow {

struct GsuSearchConfig {
    double min_transmission_kv = 40.0;
    int max_bus_counter = 20;  // distinct buses dequeued before giving up
};

enum class GsuClassification {
    DirectTransmission,  // generator bus is already at transmission level
    GsusFound,
    NoPathWithinBound,
};

inline const char* to_string(GsuClassification c) {
    switch (c) {
        case GsuClassification::DirectTransmission: return "direct-transmission";
        case GsuClassification::GsusFound: return "gsus-found";
        case GsuClassification::NoPathWithinBound: return "no-path-within-bound";
    }
    throw Error("unknown gsu classification");
}

struct GeneratorGsuResult {
    std::string generator_id;
    GsuClassification classification = GsuClassification::NoPathWithinBound;
    std::vector<std::string> gsu_transformer_ids;  // sorted
    int buses_visited = 0;                         // distinct buses dequeued
};

struct GsuReport {
    GsuSearchConfig config;
    std::vector<GeneratorGsuResult> generators;  // ordered by generator id
    // Audit trail: GSUs serving more than one generator. The status rule for
    // these (out only when every owner is out) is conservative, so they are
    // surfaced for manual review.
    std::map<std::string, std::vector<std::string>> shared_gsus;  // transformer -> generators

    std::set<std::string> all_gsu_transformers() const {
        std::set<std::string> out;
        for (const auto& g : generators)
            out.insert(g.gsu_transformer_ids.begin(), g.gsu_transformer_ids.end());
        return out;
    }
};

namespace detail {

// Adjacency over in-service devices and in-service buses only: the search
// runs on the grid as operated. Transformer edges carry the transformer
// position so traversals can collect it.
struct GsuGraph {
    struct Edge {
        std::size_t neighbor;          // bus position in model.buses
        int transformer = -1;          // position in model.transformers, -1 for a branch
    };
    std::vector<std::vector<Edge>> adjacency;  // by bus position
    std::vector<bool> bus_live;
};

inline GsuGraph build_gsu_graph(const GridModel& model, const ModelIndex& index) {
    GsuGraph g;
    g.adjacency.resize(model.buses.size());
    g.bus_live.resize(model.buses.size());
    for (std::size_t i = 0; i < model.buses.size(); ++i) g.bus_live[i] = model.buses[i].in_service;

    auto link = [&](const std::string& a, const std::string& b, int transformer) {
        auto pa = index.bus_position(a), pb = index.bus_position(b);
        if (!pa || !pb || *pa == *pb) return;
        if (!g.bus_live[*pa] || !g.bus_live[*pb]) return;
        g.adjacency[*pa].push_back({*pb, transformer});
        g.adjacency[*pb].push_back({*pa, transformer});
    };

    for (const auto& br : model.branches)
        if (br.in_service) link(br.from_bus, br.to_bus, -1);
    for (std::size_t t = 0; t < model.transformers.size(); ++t)
        if (model.transformers[t].in_service)
            link(model.transformers[t].bus_high, model.transformers[t].bus_low,
                 static_cast<int>(t));
    return g;
}

}  // namespace detail

// Classifies one generator and collects its step-up transformers.
//
// Rules, in order:
//  - A generator whose own bus is at or above the transmission threshold is
//    DirectTransmission; nothing to search.
//  - Otherwise BFS outward, never expanding past a transmission-level bus
//    and bounding distinct dequeued buses by the counter. Every traversed
//    edge is examined, even when its far bus was already discovered, so
//    parallel units are all seen. A traversed transformer joins the GSU set
//    when its far side is a transmission-level bus or reaches one within the
//    searched region (computed as backward reachability from the landing
//    edges over the traversed subgraph).
//  - If the counter runs out before any transmission bus is reached the
//    generator is NoPathWithinBound.
inline GeneratorGsuResult classify_generator(const GridModel& model, const ModelIndex& index,
                                             const detail::GsuGraph& graph,
                                             const Generator& generator,
                                             const GsuSearchConfig& config) {
    GeneratorGsuResult result;
    result.generator_id = generator.id;

    auto start = index.bus_position(generator.bus);
    if (!start) throw Error("generator \"" + generator.id + "\" references unknown bus");
    if (model.buses[*start].nominal_kv >= config.min_transmission_kv) {
        result.classification = GsuClassification::DirectTransmission;
        return result;
    }

    const std::size_t n = model.buses.size();
    std::vector<char> discovered(n, 0);
    std::vector<char> expanded(n, 0);  // dequeued: its edges were traversed
    std::vector<char> reaches(n, 0);   // can reach transmission within the region
    struct Traversal {
        std::size_t from, to;
        int transformer;
    };
    std::vector<Traversal> traversed;

    std::deque<std::size_t> queue{*start};
    discovered[*start] = 1;
    int dequeued = 0;
    while (!queue.empty() && dequeued < config.max_bus_counter) {
        std::size_t u = queue.front();
        queue.pop_front();
        ++dequeued;
        expanded[u] = 1;
        for (const auto& edge : graph.adjacency[u]) {
            const Bus& far = model.buses[edge.neighbor];
            if (far.nominal_kv >= config.min_transmission_kv) {
                reaches[u] = 1;  // landing edge; never search past transmission
                if (edge.transformer >= 0) {
                    traversed.push_back({u, edge.neighbor, edge.transformer});
                    reaches[edge.neighbor] = 1;
                }
                continue;
            }
            traversed.push_back({u, edge.neighbor, edge.transformer});
            if (!discovered[edge.neighbor]) {
                discovered[edge.neighbor] = 1;
                queue.push_back(edge.neighbor);
            }
        }
    }

    // propagate reach backward over the traversed subgraph (undirected: a
    // traversal u->v also witnesses the v->u step for any onward path)
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& t : traversed) {
            if (model.buses[t.to].nominal_kv >= config.min_transmission_kv) continue;
            if (reaches[t.to] && !reaches[t.from]) {
                reaches[t.from] = 1;
                changed = true;
            }
            if (reaches[t.from] && expanded[t.from] && !reaches[t.to] && expanded[t.to]) {
                // both ends expanded: the edge is usable in either direction
                reaches[t.to] = 1;
                changed = true;
            }
        }
    }

    std::set<std::string> gsus;
    for (const auto& t : traversed) {
        if (t.transformer < 0) continue;
        const bool far_is_transmission =
            model.buses[t.to].nominal_kv >= config.min_transmission_kv;
        if (far_is_transmission || (expanded[t.to] && reaches[t.to]))
            gsus.insert(model.transformers[t.transformer].id);
    }

    result.buses_visited = dequeued;
    if (gsus.empty()) {
        result.classification = GsuClassification::NoPathWithinBound;
    } else {
        result.classification = GsuClassification::GsusFound;
        result.gsu_transformer_ids.assign(gsus.begin(), gsus.end());
    }
    return result;
}

// Runs the classification for every generator. Searches are independent and
// run concurrently over the shared immutable model; results are merged in
// generator-id order.
inline GsuReport identify_gsus(const GridModel& model, const GsuSearchConfig& config = {}) {
    if (!(config.min_transmission_kv > 0.0))
        throw Error("minimum transmission kV must be > 0");
    if (config.max_bus_counter <= 0) throw Error("maximum bus counter must be > 0");

    ModelIndex index(model);
    detail::GsuGraph graph = detail::build_gsu_graph(model, index);

    GsuReport report;
    report.config = config;
    report.generators.resize(model.generators.size());
    parallel_for_index(model.generators.size(), [&](std::size_t i) {
        report.generators[i] =
            classify_generator(model, index, graph, model.generators[i], config);
    });
    std::sort(report.generators.begin(), report.generators.end(),
              [](const GeneratorGsuResult& a, const GeneratorGsuResult& b) {
                  return a.generator_id < b.generator_id;
              });

    std::map<std::string, std::vector<std::string>> owners;
    for (const auto& g : report.generators)
        for (const auto& t : g.gsu_transformer_ids) owners[t].push_back(g.generator_id);
    for (auto& [t, gens] : owners)
        if (gens.size() > 1) report.shared_gsus.emplace(t, gens);
    return report;
}

struct GsuHistogram {
    std::map<int, int> generators_by_gsu_count;
    int direct_transmission = 0;
    int gsus_found = 0;
    int no_path_within_bound = 0;
};

// Counts generators by the size of their GSU set. DirectTransmission and
// NoPathWithinBound land in the 0 bucket; the classification tallies keep
// them distinguishable.
inline GsuHistogram gsu_count_histogram(const GsuReport& report) {
    GsuHistogram histogram;
    for (const auto& g : report.generators) {
        ++histogram.generators_by_gsu_count[static_cast<int>(g.gsu_transformer_ids.size())];
        switch (g.classification) {
            case GsuClassification::DirectTransmission: ++histogram.direct_transmission; break;
            case GsuClassification::GsusFound: ++histogram.gsus_found; break;
            case GsuClassification::NoPathWithinBound: ++histogram.no_path_within_bound; break;
        }
    }
    return histogram;
}

// Applies generator statuses to their identified GSUs: a GSU is taken out of
// service exactly when every generator it serves is out of service (the
// conservative rule for shared units). Identified transformers are flagged
// is_gsu. Branch and generator statuses are never touched. Idempotent for a
// fixed report.
inline GridModel synchronize_gsu_status(const GridModel& model, const GsuReport& report) {
    std::map<std::string, bool> any_owner_online;  // gsu transformer -> or over owners
    std::map<std::string, bool> generator_online;
    for (const auto& g : model.generators) generator_online[g.id] = g.in_service;
    for (const auto& g : report.generators) {
        auto it = generator_online.find(g.generator_id);
        const bool online = it != generator_online.end() && it->second;
        for (const auto& t : g.gsu_transformer_ids) {
            auto [slot, inserted] = any_owner_online.emplace(t, online);
            if (!inserted) slot->second = slot->second || online;
        }
    }

    GridModel out = model;
    for (auto& t : out.transformers) {
        auto it = any_owner_online.find(t.id);
        if (it == any_owner_online.end()) continue;
        t.is_gsu = true;
        t.in_service = it->second;
    }
    return out;
}

}  // namespace gicflow
