// Grid interchange format (JSON) and result CSV writers.
//
// The document is self-describing: top-level schema_version, metadata, and
// one array per collection whose record fields mirror the model types by
// name. Coordinates are degrees, resistances ohms, field magnitudes V/km.
// An ungrounded substation serializes grounding_resistance as the string
// "inf" (JSON numbers cannot carry infinity). Unknown fields anywhere in the
// document are preserved across a parse/serialize round-trip.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gicflow/format.hpp"
#include "gicflow/grid_model.hpp"
#include "gicflow/solution.hpp"

namespace gicflow {

inline constexpr const char* kGridSchemaVersion = "gicflow-grid-1";

// Parse failure, annotated with the byte position (syntax) or the offending
// record (schema); the document is never partially accepted.
struct ParseError : Error {
    using Error::Error;
};

namespace detail {

using nlohmann::json;

// Tracks which fields a record consumed so the rest can be preserved.
class RecordReader {
  public:
    RecordReader(const json& record, std::string where)
        : record_(record), where_(std::move(where)) {
        if (!record.is_object()) throw ParseError(where_ + ": expected an object");
    }

    const json* find(const char* key) {
        consumed_.insert(key);
        auto it = record_.find(key);
        return it == record_.end() ? nullptr : &*it;
    }

    std::string require_string(const char* key) {
        const json* v = find(key);
        if (v == nullptr || !v->is_string())
            throw ParseError(where_ + ": missing or non-string field \"" + key + "\"");
        return v->get<std::string>();
    }
    std::string optional_string(const char* key, const std::string& fallback = {}) {
        const json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_string())
            throw ParseError(where_ + ": field \"" + key + "\" must be a string");
        return v->get<std::string>();
    }
    double require_number(const char* key) {
        const json* v = find(key);
        if (v == nullptr || !v->is_number())
            throw ParseError(where_ + ": missing or non-numeric field \"" + key + "\"");
        return v->get<double>();
    }
    double optional_number(const char* key, double fallback) {
        const json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_number())
            throw ParseError(where_ + ": field \"" + key + "\" must be a number");
        return v->get<double>();
    }
    std::optional<double> optional_number(const char* key) {
        const json* v = find(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_number())
            throw ParseError(where_ + ": field \"" + key + "\" must be a number");
        return v->get<double>();
    }
    bool optional_bool(const char* key, bool fallback) {
        const json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_boolean())
            throw ParseError(where_ + ": field \"" + key + "\" must be a boolean");
        return v->get<bool>();
    }
    // number, or the string "inf" for an ungrounded substation
    double grounding(const char* key) {
        const json* v = find(key);
        if (v == nullptr)
            throw ParseError(where_ + ": missing field \"" + key + "\"");
        if (v->is_number()) return v->get<double>();
        if (v->is_string() && v->get<std::string>() == "inf") return kUngrounded;
        throw ParseError(where_ + ": field \"" + key + "\" must be a number or \"inf\"");
    }

    json leftovers() const {
        json extra = json::object();
        for (auto it = record_.begin(); it != record_.end(); ++it)
            if (!consumed_.count(it.key())) extra[it.key()] = it.value();
        return extra;
    }

  private:
    const json& record_;
    std::string where_;
    std::set<std::string> consumed_;
};

inline const json* array_field(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) return nullptr;
    if (!it->is_array())
        throw ParseError(std::string("top-level field \"") + key + "\" must be an array");
    return &*it;
}

inline json grounding_to_json(double ohms) {
    if (std::isinf(ohms)) return json("inf");
    return json(ohms);
}

}  // namespace detail

// Parses and validates a grid document. Any syntax error, schema error, or
// model-invariant violation throws ParseError; no partial model escapes.
inline GridModel parse_grid(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("grid document syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("grid document must be a JSON object");

    auto version = doc.find("schema_version");
    if (version == doc.end() || !version->is_string())
        throw ParseError("grid document is missing schema_version");
    if (version->get<std::string>() != kGridSchemaVersion)
        throw ParseError("unsupported schema_version \"" + version->get<std::string>() +
                         "\" (expected \"" + kGridSchemaVersion + "\")");

    GridModel model;
    json extensions = json::object();

    if (auto it = doc.find("metadata"); it != doc.end()) {
        detail::RecordReader r(*it, "metadata");
        model.metadata.name = r.optional_string("name");
        model.metadata.source = r.optional_string("source");
        json extra = r.leftovers();
        if (!extra.empty()) extensions["metadata"] = extra;
    }

    auto record_extra = [&extensions](const char* collection, const std::string& id,
                                      json extra) {
        if (!extra.empty()) extensions[collection][id] = std::move(extra);
    };

    if (const json* arr = detail::array_field(doc, "substations")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            detail::RecordReader r((*arr)[i], "substations[" + std::to_string(i) + "]");
            Substation s;
            s.id = r.require_string("id");
            s.name = r.optional_string("name");
            s.latitude_deg = r.require_number("latitude");
            s.longitude_deg = r.require_number("longitude");
            s.grounding_resistance_ohms = r.grounding("grounding_resistance");
            s.area = r.optional_string("area");
            record_extra("substations", s.id, r.leftovers());
            model.substations.push_back(std::move(s));
        }
    }
    if (const json* arr = detail::array_field(doc, "buses")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            detail::RecordReader r((*arr)[i], "buses[" + std::to_string(i) + "]");
            Bus b;
            b.id = r.require_string("id");
            b.substation_id = r.require_string("substation_id");
            b.nominal_kv = r.require_number("nominal_kv");
            b.area = r.optional_string("area");
            b.voltage_pu = r.optional_number("voltage_pu", 1.0);
            b.in_service = r.optional_bool("in_service", true);
            record_extra("buses", b.id, r.leftovers());
            model.buses.push_back(std::move(b));
        }
    }
    if (const json* arr = detail::array_field(doc, "branches")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            detail::RecordReader r((*arr)[i], "branches[" + std::to_string(i) + "]");
            Branch b;
            b.id = r.require_string("id");
            b.from_bus = r.require_string("from_bus");
            b.to_bus = r.require_string("to_bus");
            b.resistance_per_phase_ohms = r.require_number("resistance_per_phase");
            b.in_service = r.optional_bool("in_service", true);
            b.length_north_km = r.optional_number("length_north_km");
            b.length_east_km = r.optional_number("length_east_km");
            record_extra("branches", b.id, r.leftovers());
            model.branches.push_back(std::move(b));
        }
    }
    if (const json* arr = detail::array_field(doc, "transformers")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            detail::RecordReader r((*arr)[i], "transformers[" + std::to_string(i) + "]");
            Transformer t;
            t.id = r.require_string("id");
            t.bus_high = r.require_string("bus_high");
            t.bus_low = r.require_string("bus_low");
            try {
                t.configuration = transformer_config_from_string(r.require_string("configuration"));
            } catch (const Error& e) {
                throw ParseError("transformers[" + std::to_string(i) + "]: " + e.what());
            }
            t.r_winding_high_ohms = r.optional_number("r_winding_high", 0.0);
            t.r_winding_low_ohms = r.optional_number("r_winding_low", 0.0);
            t.neutral_substation = r.optional_string("neutral_substation");
            t.k_factor_mvar_per_a = r.optional_number("k_factor", 0.0);
            t.in_service = r.optional_bool("in_service", true);
            t.is_gsu = r.optional_bool("is_gsu", false);
            record_extra("transformers", t.id, r.leftovers());
            model.transformers.push_back(std::move(t));
        }
    }
    if (const json* arr = detail::array_field(doc, "generators")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            detail::RecordReader r((*arr)[i], "generators[" + std::to_string(i) + "]");
            Generator g;
            g.id = r.require_string("id");
            g.bus = r.require_string("bus");
            g.mw_capacity = r.optional_number("mw_capacity", 0.0);
            g.in_service = r.optional_bool("in_service", true);
            record_extra("generators", g.id, r.leftovers());
            model.generators.push_back(std::move(g));
        }
    }

    {
        // top-level unknowns
        static const std::set<std::string> known = {
            "schema_version", "metadata",     "substations", "buses",
            "branches",       "transformers", "generators"};
        for (auto it = doc.begin(); it != doc.end(); ++it)
            if (!known.count(it.key())) extensions["document"][it.key()] = it.value();
    }
    if (!extensions.empty()) model.metadata.extensions = extensions.dump();

    ValidationReport report = validate(model);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "grid document failed validation with " << report.violations.size()
            << " violation(s):";
        for (const auto& v : report.violations) msg << "\n  [" << v.code << "] " << v.message;
        throw ParseError(msg.str());
    }
    return model;
}

// Deterministic serialization: records sorted by id, object keys sorted by
// the JSON library, shortest-round-trip numbers. parse_grid(serialize_grid(m))
// reproduces m exactly.
inline std::string serialize_grid(const GridModel& model) {
    using detail::json;

    json extensions = json::object();
    if (!model.metadata.extensions.empty()) {
        try {
            extensions = json::parse(model.metadata.extensions);
        } catch (const json::parse_error&) {
            throw Error("model metadata extensions are not valid JSON");
        }
    }
    auto extra_for = [&extensions](const char* collection, const std::string& id) -> json {
        if (auto c = extensions.find(collection); c != extensions.end()) {
            if (auto r = c->find(id); r != c->end()) return *r;
        }
        return json::object();
    };
    auto merge = [](json record, const json& extra) {
        for (auto it = extra.begin(); it != extra.end(); ++it) record[it.key()] = it.value();
        return record;
    };

    json doc;
    doc["schema_version"] = kGridSchemaVersion;
    {
        json meta;
        meta["name"] = model.metadata.name;
        meta["source"] = model.metadata.source;
        if (auto m = extensions.find("metadata"); m != extensions.end()) meta = merge(meta, *m);
        doc["metadata"] = meta;
    }

    auto sorted_copy = [](const auto& records) {
        auto copy = records;
        std::sort(copy.begin(), copy.end(),
                  [](const auto& a, const auto& b) { return a.id < b.id; });
        return copy;
    };

    doc["substations"] = json::array();
    for (const auto& s : sorted_copy(model.substations)) {
        json r;
        r["id"] = s.id;
        r["name"] = s.name;
        r["latitude"] = s.latitude_deg;
        r["longitude"] = s.longitude_deg;
        r["grounding_resistance"] = detail::grounding_to_json(s.grounding_resistance_ohms);
        r["area"] = s.area;
        doc["substations"].push_back(merge(std::move(r), extra_for("substations", s.id)));
    }
    doc["buses"] = json::array();
    for (const auto& b : sorted_copy(model.buses)) {
        json r;
        r["id"] = b.id;
        r["substation_id"] = b.substation_id;
        r["nominal_kv"] = b.nominal_kv;
        r["area"] = b.area;
        r["voltage_pu"] = b.voltage_pu;
        r["in_service"] = b.in_service;
        doc["buses"].push_back(merge(std::move(r), extra_for("buses", b.id)));
    }
    doc["branches"] = json::array();
    for (const auto& b : sorted_copy(model.branches)) {
        json r;
        r["id"] = b.id;
        r["from_bus"] = b.from_bus;
        r["to_bus"] = b.to_bus;
        r["resistance_per_phase"] = b.resistance_per_phase_ohms;
        r["in_service"] = b.in_service;
        if (b.length_north_km) r["length_north_km"] = *b.length_north_km;
        if (b.length_east_km) r["length_east_km"] = *b.length_east_km;
        doc["branches"].push_back(merge(std::move(r), extra_for("branches", b.id)));
    }
    doc["transformers"] = json::array();
    for (const auto& t : sorted_copy(model.transformers)) {
        json r;
        r["id"] = t.id;
        r["bus_high"] = t.bus_high;
        r["bus_low"] = t.bus_low;
        r["configuration"] = to_string(t.configuration);
        r["r_winding_high"] = t.r_winding_high_ohms;
        r["r_winding_low"] = t.r_winding_low_ohms;
        r["neutral_substation"] = t.neutral_substation;
        r["k_factor"] = t.k_factor_mvar_per_a;
        r["in_service"] = t.in_service;
        r["is_gsu"] = t.is_gsu;
        doc["transformers"].push_back(merge(std::move(r), extra_for("transformers", t.id)));
    }
    doc["generators"] = json::array();
    for (const auto& g : sorted_copy(model.generators)) {
        json r;
        r["id"] = g.id;
        r["bus"] = g.bus;
        r["mw_capacity"] = g.mw_capacity;
        r["in_service"] = g.in_service;
        doc["generators"].push_back(merge(std::move(r), extra_for("generators", g.id)));
    }
    if (auto d = extensions.find("document"); d != extensions.end())
        for (auto it = d->begin(); it != d->end(); ++it) doc[it.key()] = it.value();

    return doc.dump(2) + "\n";
}

// Three result tables with documented headers, rows sorted by id, newline
// terminated, no locale formatting.
inline void write_transformers_csv(const GicSolution& solution, std::ostream& out) {
    out << "id,neutral_gic_a,effective_gic_a_per_phase,qloss_mvar,in_service\n";
    for (const auto& t : solution.transformers)
        out << t.id << ',' << format_double(t.neutral_gic_a) << ','
            << format_double(t.effective_gic_a_per_phase) << ',' << format_double(t.qloss_mvar)
            << ',' << (t.in_service ? "true" : "false") << '\n';
}

inline void write_branches_csv(const GicSolution& solution, std::ostream& out) {
    out << "id,from_bus,to_bus,gic_a_per_phase\n";
    for (const auto& b : solution.branches)
        out << b.id << ',' << b.from_bus << ',' << b.to_bus << ','
            << format_double(b.gic_a_per_phase) << '\n';
}

inline void write_nodes_csv(const GicSolution& solution, std::ostream& out) {
    out << "node_id,kind,dc_voltage_v\n";
    for (const auto& n : solution.nodes)
        out << n.id << ',' << to_string(n.kind) << ',' << format_double(n.dc_voltage_v) << '\n';
}

inline void write_solution_csv(const GicSolution& solution, std::ostream& transformers,
                               std::ostream& branches, std::ostream& nodes) {
    write_transformers_csv(solution, transformers);
    write_branches_csv(solution, branches);
    write_nodes_csv(solution, nodes);
    if (!transformers || !branches || !nodes) throw Error("failed writing solution CSV");
}

}  // namespace gicflow
