// Validated in-memory transmission grid representation shared by every
// analysis in gicflow. All types are plain values; a GridModel is treated as
// immutable once built, so every operation here is a pure function and safe
// to call concurrently.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gicflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neutral-to-earth DC resistance of +infinity means the substation has no
// earth path at all ("ungrounded").
constexpr double kUngrounded = std::numeric_limits<double>::infinity();

struct Substation {
    std::string id;
    std::string name;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double grounding_resistance_ohms = kUngrounded;
    std::string area;

    bool grounded() const { return std::isfinite(grounding_resistance_ohms); }
};

struct Bus {
    std::string id;
    std::string substation_id;
    double nominal_kv = 0.0;
    std::string area;
    double voltage_pu = 1.0;  // engine runs without an AC solution; 1.0 flat profile
    bool in_service = true;
};

struct Branch {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double resistance_per_phase_ohms = 0.0;  // DC, per phase
    bool in_service = true;
    // Explicit routing overrides the substation-coordinate geodesic.
    std::optional<double> length_north_km;
    std::optional<double> length_east_km;
};

enum class TransformerConfig {
    GwyeDelta,
    GwyeGwye,
    DeltaDelta,
    Auto,
    GwyeDeltaGsu,
};

inline const char* to_string(TransformerConfig c) {
    switch (c) {
        case TransformerConfig::GwyeDelta: return "gwye-delta";
        case TransformerConfig::GwyeGwye: return "gwye-gwye";
        case TransformerConfig::DeltaDelta: return "delta-delta";
        case TransformerConfig::Auto: return "auto";
        case TransformerConfig::GwyeDeltaGsu: return "gwye-delta-gsu";
    }
    throw Error("unknown transformer configuration");
}

inline TransformerConfig transformer_config_from_string(const std::string& s) {
    if (s == "gwye-delta") return TransformerConfig::GwyeDelta;
    if (s == "gwye-gwye") return TransformerConfig::GwyeGwye;
    if (s == "delta-delta") return TransformerConfig::DeltaDelta;
    if (s == "auto") return TransformerConfig::Auto;
    if (s == "gwye-delta-gsu") return TransformerConfig::GwyeDeltaGsu;
    throw Error("unknown transformer configuration: \"" + s + "\"");
}

// For Auto, r_winding_high is the series winding and r_winding_low the common
// winding. Winding resistances are DC ohms per phase.
struct Transformer {
    std::string id;
    std::string bus_high;
    std::string bus_low;
    TransformerConfig configuration = TransformerConfig::GwyeGwye;
    double r_winding_high_ohms = 0.0;
    double r_winding_low_ohms = 0.0;
    std::string neutral_substation;
    double k_factor_mvar_per_a = 0.0;  // GIC reactive-loss coefficient, data-driven
    bool in_service = true;
    bool is_gsu = false;  // may be set by gsu identification

    bool high_is_wye() const {
        return configuration == TransformerConfig::GwyeDelta ||
               configuration == TransformerConfig::GwyeGwye ||
               configuration == TransformerConfig::GwyeDeltaGsu;
    }
    bool low_is_wye() const { return configuration == TransformerConfig::GwyeGwye; }
    bool has_neutral() const { return configuration != TransformerConfig::DeltaDelta; }
};

struct Generator {
    std::string id;
    std::string bus;
    double mw_capacity = 0.0;
    bool in_service = true;
};

struct GridMetadata {
    std::string name;
    std::string source;
    // Unrecognized document fields captured by the parser so serialization can
    // round-trip them (JSON text; empty when none).
    std::string extensions;
};

struct GridModel {
    GridMetadata metadata;
    std::vector<Substation> substations;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Transformer> transformers;
    std::vector<Generator> generators;
};

// Id -> position lookup over one model. Built on demand by operations; the
// model itself stays a plain aggregate.
class ModelIndex {
  public:
    explicit ModelIndex(const GridModel& model) : model_(&model) {
        for (std::size_t i = 0; i < model.substations.size(); ++i)
            substation_.emplace(model.substations[i].id, i);
        for (std::size_t i = 0; i < model.buses.size(); ++i)
            bus_.emplace(model.buses[i].id, i);
        for (std::size_t i = 0; i < model.branches.size(); ++i)
            branch_.emplace(model.branches[i].id, i);
        for (std::size_t i = 0; i < model.transformers.size(); ++i)
            transformer_.emplace(model.transformers[i].id, i);
    }

    const Substation* substation(const std::string& id) const {
        auto it = substation_.find(id);
        return it == substation_.end() ? nullptr : &model_->substations[it->second];
    }
    const Bus* bus(const std::string& id) const {
        auto it = bus_.find(id);
        return it == bus_.end() ? nullptr : &model_->buses[it->second];
    }
    const Branch* branch(const std::string& id) const {
        auto it = branch_.find(id);
        return it == branch_.end() ? nullptr : &model_->branches[it->second];
    }
    const Transformer* transformer(const std::string& id) const {
        auto it = transformer_.find(id);
        return it == transformer_.end() ? nullptr : &model_->transformers[it->second];
    }
    std::optional<std::size_t> bus_position(const std::string& id) const {
        auto it = bus_.find(id);
        if (it == bus_.end()) return std::nullopt;
        return it->second;
    }

  private:
    const GridModel* model_;
    std::unordered_map<std::string, std::size_t> substation_, bus_, branch_, transformer_;
};

struct Violation {
    std::string code;     // stable machine-readable tag
    std::string subject;  // id of the offending record
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline void check_unique_ids(const std::vector<std::string>& ids, const char* collection,
                             std::vector<Violation>& out) {
    std::map<std::string, int> seen;
    for (const auto& id : ids) ++seen[id];
    for (const auto& [id, n] : seen) {
        if (n > 1)
            out.push_back({"duplicate-id", id,
                           std::string(collection) + " id \"" + id + "\" appears " +
                               std::to_string(n) + " times"});
    }
}

}  // namespace detail

// Collects every invariant violation in the model. Violations are data, not
// failures; an empty report means the model is well-formed. The report is
// sorted, so the result is independent of collection ordering.
inline ValidationReport validate(const GridModel& model) {
    std::vector<Violation> v;

    {
        std::vector<std::string> ids;
        for (const auto& s : model.substations) ids.push_back(s.id);
        detail::check_unique_ids(ids, "substation", v);
        ids.clear();
        for (const auto& b : model.buses) ids.push_back(b.id);
        detail::check_unique_ids(ids, "bus", v);
        ids.clear();
        for (const auto& b : model.branches) ids.push_back(b.id);
        detail::check_unique_ids(ids, "branch", v);
        ids.clear();
        for (const auto& t : model.transformers) ids.push_back(t.id);
        detail::check_unique_ids(ids, "transformer", v);
        ids.clear();
        for (const auto& g : model.generators) ids.push_back(g.id);
        detail::check_unique_ids(ids, "generator", v);
    }

    ModelIndex index(model);

    for (const auto& s : model.substations) {
        if (!(s.latitude_deg >= -90.0 && s.latitude_deg <= 90.0))
            v.push_back({"invalid-coordinates", s.id,
                         "substation \"" + s.id + "\" latitude out of [-90, 90]"});
        if (!(s.longitude_deg >= -180.0 && s.longitude_deg <= 180.0))
            v.push_back({"invalid-coordinates", s.id,
                         "substation \"" + s.id + "\" longitude out of [-180, 180]"});
        if (std::isnan(s.grounding_resistance_ohms) || s.grounding_resistance_ohms < 0.0)
            v.push_back({"negative-grounding-resistance", s.id,
                         "substation \"" + s.id + "\" grounding resistance must be >= 0 (or +inf)"});
    }

    for (const auto& b : model.buses) {
        if (!(b.nominal_kv > 0.0))
            v.push_back({"invalid-kv", b.id, "bus \"" + b.id + "\" nominal kV must be > 0"});
        if (index.substation(b.substation_id) == nullptr)
            v.push_back({"dangling-reference", b.id,
                         "bus \"" + b.id + "\" references unknown substation \"" +
                             b.substation_id + "\""});
    }

    for (const auto& br : model.branches) {
        if (index.bus(br.from_bus) == nullptr)
            v.push_back({"dangling-reference", br.id,
                         "branch \"" + br.id + "\" references unknown bus \"" + br.from_bus +
                             "\""});
        if (index.bus(br.to_bus) == nullptr)
            v.push_back({"dangling-reference", br.id,
                         "branch \"" + br.id + "\" references unknown bus \"" + br.to_bus +
                             "\""});
        if (br.from_bus == br.to_bus)
            v.push_back({"self-loop", br.id,
                         "branch \"" + br.id + "\" connects bus \"" + br.from_bus +
                             "\" to itself"});
        if (br.in_service && !(br.resistance_per_phase_ohms > 0.0))
            v.push_back({"non-positive-resistance", br.id,
                         "in-service branch \"" + br.id + "\" needs resistance > 0"});
    }

    for (const auto& t : model.transformers) {
        const Bus* high = index.bus(t.bus_high);
        const Bus* low = index.bus(t.bus_low);
        if (high == nullptr)
            v.push_back({"dangling-reference", t.id,
                         "transformer \"" + t.id + "\" references unknown bus \"" + t.bus_high +
                             "\""});
        if (low == nullptr)
            v.push_back({"dangling-reference", t.id,
                         "transformer \"" + t.id + "\" references unknown bus \"" + t.bus_low +
                             "\""});
        if (high != nullptr && low != nullptr && high->nominal_kv < low->nominal_kv)
            v.push_back({"kv-order", t.id,
                         "transformer \"" + t.id + "\" high-side kV below low-side kV"});
        if (t.has_neutral() && index.substation(t.neutral_substation) == nullptr)
            v.push_back({"dangling-reference", t.id,
                         "transformer \"" + t.id + "\" references unknown neutral substation \"" +
                             t.neutral_substation + "\""});
        const bool needs_high = t.high_is_wye() || t.configuration == TransformerConfig::Auto;
        const bool needs_low = t.low_is_wye() || t.configuration == TransformerConfig::Auto;
        if (needs_high && !(t.r_winding_high_ohms > 0.0))
            v.push_back({"invalid-winding-resistance", t.id,
                         "transformer \"" + t.id + "\" high/series winding needs resistance > 0"});
        if (needs_low && !(t.r_winding_low_ohms > 0.0))
            v.push_back({"invalid-winding-resistance", t.id,
                         "transformer \"" + t.id + "\" low/common winding needs resistance > 0"});
        if (t.k_factor_mvar_per_a < 0.0)
            v.push_back({"negative-k-factor", t.id,
                         "transformer \"" + t.id + "\" k factor must be >= 0"});
    }

    for (const auto& g : model.generators) {
        if (index.bus(g.bus) == nullptr)
            v.push_back({"dangling-reference", g.id,
                         "generator \"" + g.id + "\" references unknown bus \"" + g.bus + "\""});
        if (g.mw_capacity < 0.0)
            v.push_back({"negative-capacity", g.id,
                         "generator \"" + g.id + "\" MW capacity must be >= 0"});
    }

    std::sort(v.begin(), v.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.code, a.subject, a.message) < std::tie(b.code, b.subject, b.message);
    });
    return ValidationReport{std::move(v)};
}

namespace detail {

// DC conduction graph over buses and substation neutrals. Earth is not a
// node: grounding never merges components (it is the per-component reference).
struct ConductionGraph {
    // node numbering: [0, buses) in-service buses, then neutrals
    std::vector<std::string> bus_ids;
    std::unordered_map<std::string, int> bus_node;
    std::unordered_map<std::string, int> neutral_node;  // substation id -> node
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;

    int neutral_for(const std::string& substation_id) {
        auto it = neutral_node.find(substation_id);
        if (it != neutral_node.end()) return it->second;
        int n = node_count++;
        neutral_node.emplace(substation_id, n);
        return n;
    }
};

inline ConductionGraph conduction_graph(const GridModel& model) {
    ConductionGraph g;
    ModelIndex index(model);
    for (const auto& b : model.buses) {
        if (!b.in_service) continue;
        g.bus_node.emplace(b.id, g.node_count);
        g.bus_ids.push_back(b.id);
        ++g.node_count;
    }
    auto bus_node = [&](const std::string& id) -> int {
        auto it = g.bus_node.find(id);
        return it == g.bus_node.end() ? -1 : it->second;
    };
    for (const auto& br : model.branches) {
        if (!br.in_service) continue;
        int a = bus_node(br.from_bus), b = bus_node(br.to_bus);
        if (a < 0 || b < 0 || a == b) continue;
        g.edges.emplace_back(a, b);
    }
    for (const auto& t : model.transformers) {
        if (!t.in_service) continue;
        int high = bus_node(t.bus_high), low = bus_node(t.bus_low);
        switch (t.configuration) {
            case TransformerConfig::DeltaDelta:
                break;  // delta blocks DC entirely
            case TransformerConfig::GwyeDelta:
            case TransformerConfig::GwyeDeltaGsu:
                if (high >= 0) g.edges.emplace_back(high, g.neutral_for(t.neutral_substation));
                break;
            case TransformerConfig::GwyeGwye: {
                int n = -1;
                if (high >= 0 || low >= 0) n = g.neutral_for(t.neutral_substation);
                if (high >= 0) g.edges.emplace_back(high, n);
                if (low >= 0) g.edges.emplace_back(low, n);
                break;
            }
            case TransformerConfig::Auto:
                if (high >= 0 && low >= 0) {
                    g.edges.emplace_back(high, low);
                    g.edges.emplace_back(low, g.neutral_for(t.neutral_substation));
                }
                break;
        }
    }
    return g;
}

class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[b] = a;
    }

  private:
    std::vector<int> parent_;
};

}  // namespace detail

// Partition of in-service buses by DC electrical connectivity through
// in-service branches and transformer windings that conduct DC (delta
// windings block; gwye windings couple through the substation neutral).
// Components are returned with sorted bus ids, ordered by their smallest id.
inline std::vector<std::vector<std::string>> connected_components(const GridModel& model) {
    detail::ConductionGraph g = detail::conduction_graph(model);
    detail::UnionFind uf(g.node_count);
    for (const auto& [a, b] : g.edges) uf.unite(a, b);

    std::map<int, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < g.bus_ids.size(); ++i)
        groups[uf.find(static_cast<int>(i))].push_back(g.bus_ids[i]);

    std::vector<std::vector<std::string>> components;
    components.reserve(groups.size());
    for (auto& [root, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        components.push_back(std::move(ids));
    }
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

}  // namespace gicflow
