// Seeded random grid generators for property tests.
//
// make_random_model produces small, valid, solvable-by-construction models:
// all transmission buses hang off one spanning tree of lines, substation
// groundings are finite (occasionally exactly zero, exercising the pinned
// neutral path), and at least one grounded wye path always exists, so no
// component carrying injections ever floats. make_round_trip_model loosens
// that (ungrounded substations, out-of-service devices) for format tests.
#pragma once

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gicflow/gmd_source.hpp"
#include "gicflow/grid_model.hpp"

namespace gicflow::test {

namespace gen_detail {

inline std::string tag(const char* prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
    return buf;
}

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace gen_detail

struct RandomModelOptions {
    int min_substations = 2;
    int max_substations = 7;
    bool solvable = true;  // finite groundings, one connected transmission tree
};

inline GridModel make_random_model(unsigned seed, const RandomModelOptions& options = {}) {
    using namespace gen_detail;
    std::mt19937 rng(seed);
    GridModel m;
    m.metadata.name = "random-" + std::to_string(seed);

    const int n_sub = pick(rng, options.min_substations, options.max_substations);
    const double hv_levels[] = {115.0, 161.0, 230.0, 345.0, 500.0};
    const double lv_levels[] = {13.8, 18.0, 34.5};

    std::vector<std::string> hv_bus(n_sub);
    std::vector<std::vector<std::string>> lv_buses(n_sub);
    std::vector<double> hv_kv(n_sub);
    std::vector<std::vector<double>> lv_kv(n_sub);

    int bus_counter = 0;
    for (int s = 0; s < n_sub; ++s) {
        Substation sub;
        sub.id = tag("S", s);
        sub.name = "sub-" + std::to_string(s);
        sub.latitude_deg = uniform(rng, 28.0, 45.0);
        sub.longitude_deg = uniform(rng, -105.0, -85.0);
        if (options.solvable)
            sub.grounding_resistance_ohms = chance(rng, 0.1) ? 0.0 : uniform(rng, 0.05, 1.5);
        else if (chance(rng, 0.15))
            sub.grounding_resistance_ohms = kUngrounded;
        else
            sub.grounding_resistance_ohms = uniform(rng, 0.05, 1.5);
        sub.area = chance(rng, 0.5) ? "east" : "west";
        m.substations.push_back(sub);

        Bus hv;
        hv.id = tag("B", bus_counter++);
        hv.substation_id = sub.id;
        hv.nominal_kv = hv_levels[pick(rng, 0, 4)];
        hv.area = sub.area;
        hv.voltage_pu = uniform(rng, 0.95, 1.05);
        hv.in_service = options.solvable ? true : !chance(rng, 0.1);
        hv_bus[s] = hv.id;
        hv_kv[s] = hv.nominal_kv;
        m.buses.push_back(hv);

        const int extra = pick(rng, 0, 2);
        for (int k = 0; k < extra; ++k) {
            Bus lv;
            lv.id = tag("B", bus_counter++);
            lv.substation_id = sub.id;
            lv.nominal_kv = lv_levels[pick(rng, 0, 2)];
            lv.area = sub.area;
            lv.voltage_pu = uniform(rng, 0.95, 1.05);
            lv.in_service = true;
            lv_buses[s].push_back(lv.id);
            lv_kv[s].push_back(lv.nominal_kv);
            m.buses.push_back(lv);
        }
    }

    // spanning tree over the transmission buses, plus a few extra ties
    int branch_counter = 0;
    auto add_line = [&](int a, int b) {
        Branch line;
        line.id = tag("L", branch_counter++);
        line.from_bus = hv_bus[a];
        line.to_bus = hv_bus[b];
        line.resistance_per_phase_ohms = uniform(rng, 0.5, 8.0);
        line.in_service = options.solvable ? true : !chance(rng, 0.1);
        if (chance(rng, 0.5)) {
            line.length_north_km = uniform(rng, -150.0, 150.0);
            line.length_east_km = uniform(rng, -150.0, 150.0);
        }
        m.branches.push_back(line);
    };
    for (int s = 1; s < n_sub; ++s) add_line(s, pick(rng, 0, s - 1));
    const int extra_lines = pick(rng, 0, n_sub / 2);
    for (int k = 0; k < extra_lines && n_sub >= 2; ++k) {
        int a = pick(rng, 0, n_sub - 1);
        int b = pick(rng, 0, n_sub - 1);
        if (a != b) add_line(a, b);
    }

    int transformer_counter = 0;
    int generator_counter = 0;
    auto add_transformer = [&](int s, std::size_t lv_index, TransformerConfig config) {
        Transformer t;
        t.id = tag("T", transformer_counter++);
        t.bus_high = hv_bus[s];
        t.bus_low = lv_buses[s][lv_index];
        t.configuration = config;
        t.r_winding_high_ohms = uniform(rng, 0.2, 1.5);
        t.r_winding_low_ohms = uniform(rng, 0.2, 1.5);
        t.neutral_substation = m.substations[s].id;
        t.k_factor_mvar_per_a = uniform(rng, 0.5, 2.0);
        t.in_service = options.solvable ? true : !chance(rng, 0.1);
        m.transformers.push_back(t);
    };
    for (int s = 0; s < n_sub; ++s) {
        for (std::size_t k = 0; k < lv_buses[s].size(); ++k) {
            const double roll = uniform(rng, 0.0, 1.0);
            TransformerConfig config = TransformerConfig::GwyeDelta;
            if (roll < 0.30)
                config = TransformerConfig::GwyeDeltaGsu;
            else if (roll < 0.55)
                config = TransformerConfig::GwyeGwye;
            else if (roll < 0.70)
                config = TransformerConfig::Auto;
            else if (roll < 0.80)
                config = TransformerConfig::DeltaDelta;
            add_transformer(s, k, config);
            if (chance(rng, 0.15)) add_transformer(s, k, config);  // parallel unit

            if (chance(rng, 0.8)) {
                Generator g;
                g.id = tag("G", generator_counter++);
                g.bus = lv_buses[s][k];
                g.mw_capacity = uniform(rng, 10.0, 800.0);
                g.in_service = !chance(rng, 0.3);
                m.generators.push_back(g);
            }
        }
        if (chance(rng, 0.15)) {
            Generator g;
            g.id = tag("G", generator_counter++);
            g.bus = hv_bus[s];
            g.mw_capacity = uniform(rng, 50.0, 1200.0);
            g.in_service = !chance(rng, 0.3);
            m.generators.push_back(g);
        }
    }

    if (options.solvable) {
        // guarantee a grounded wye path on the tree component
        bool has_grounded_wye = false;
        for (const auto& t : m.transformers)
            if (t.in_service && t.high_is_wye()) has_grounded_wye = true;
        if (!has_grounded_wye || m.substations[0].grounding_resistance_ohms == kUngrounded) {
            Bus anchor;
            anchor.id = tag("B", bus_counter++);
            anchor.substation_id = m.substations[0].id;
            anchor.nominal_kv = 13.8;
            anchor.area = m.substations[0].area;
            m.buses.push_back(anchor);
            Transformer t;
            t.id = tag("T", transformer_counter++);
            t.bus_high = hv_bus[0];
            t.bus_low = anchor.id;
            t.configuration = TransformerConfig::GwyeDelta;
            t.r_winding_high_ohms = 0.5;
            t.r_winding_low_ohms = 0.5;
            t.neutral_substation = m.substations[0].id;
            t.k_factor_mvar_per_a = 1.0;
            m.transformers.push_back(t);
        }
    }
    return m;
}

// Richer variant for parse/serialize round-trip properties.
inline GridModel make_round_trip_model(unsigned seed) {
    RandomModelOptions options;
    options.solvable = false;
    GridModel m = make_random_model(seed, options);
    std::mt19937 rng(seed ^ 0x9e3779b9u);
    m.metadata.source = gen_detail::chance(rng, 0.5) ? "generated" : "";
    return m;
}

inline FieldScenario make_random_field(unsigned seed) {
    std::mt19937 rng(seed);
    FieldScenario f;
    f.magnitude_v_per_km = gen_detail::uniform(rng, 0.5, 10.0);
    f.direction_deg = gen_detail::uniform(rng, 0.0, 360.0);
    f.alpha = gen_detail::chance(rng, 0.3) ? gen_detail::uniform(rng, 0.5, 1.5) : 1.0;
    f.beta = gen_detail::chance(rng, 0.3) ? gen_detail::uniform(rng, 0.5, 1.5) : 1.0;
    return f;
}

// Large deterministic grid for the performance/determinism checks: keeps
// adding substations (one transmission bus plus up to two lower-voltage
// buses, transformers, generators) until the bus target is met.
inline GridModel make_large_grid(unsigned seed, int min_buses) {
    using namespace gen_detail;
    std::mt19937 rng(seed);
    GridModel m;
    m.metadata.name = "large-" + std::to_string(min_buses);

    const double hv_levels[] = {115.0, 230.0, 345.0, 500.0};
    std::vector<std::string> hv_bus;
    int bus_counter = 0, branch_counter = 0, transformer_counter = 0, generator_counter = 0;

    while (bus_counter < min_buses) {
        const int s = static_cast<int>(m.substations.size());
        Substation sub;
        sub.id = tag("S", s);
        sub.latitude_deg = uniform(rng, 28.0, 47.0);
        sub.longitude_deg = uniform(rng, -115.0, -80.0);
        sub.grounding_resistance_ohms = uniform(rng, 0.05, 1.0);
        sub.area = "area-" + std::to_string(s % 19);
        m.substations.push_back(sub);

        Bus hv;
        hv.id = tag("B", bus_counter++);
        hv.substation_id = sub.id;
        hv.nominal_kv = hv_levels[pick(rng, 0, 3)];
        hv.area = sub.area;
        m.buses.push_back(hv);
        hv_bus.push_back(hv.id);

        if (s > 0) {
            Branch line;
            line.id = tag("L", branch_counter++);
            line.from_bus = hv_bus[pick(rng, std::max(0, s - 4), s - 1)];
            line.to_bus = hv.id;
            line.resistance_per_phase_ohms = uniform(rng, 0.5, 6.0);
            m.branches.push_back(line);
            if (chance(rng, 0.3)) {
                Branch tie;
                tie.id = tag("L", branch_counter++);
                tie.from_bus = hv_bus[pick(rng, 0, s - 1)];
                tie.to_bus = hv.id;
                tie.resistance_per_phase_ohms = uniform(rng, 0.5, 6.0);
                if (tie.from_bus != tie.to_bus) m.branches.push_back(tie);
            }
        }

        const int extra = pick(rng, 0, 2);
        for (int k = 0; k < extra; ++k) {
            Bus lv;
            lv.id = tag("B", bus_counter++);
            lv.substation_id = sub.id;
            lv.nominal_kv = k == 0 ? 13.8 : 34.5;
            lv.area = sub.area;
            m.buses.push_back(lv);

            Transformer t;
            t.id = tag("T", transformer_counter++);
            t.bus_high = hv.id;
            t.bus_low = lv.id;
            t.configuration =
                chance(rng, 0.6) ? TransformerConfig::GwyeDeltaGsu : TransformerConfig::GwyeGwye;
            t.r_winding_high_ohms = uniform(rng, 0.2, 1.0);
            t.r_winding_low_ohms = uniform(rng, 0.2, 1.0);
            t.neutral_substation = sub.id;
            t.k_factor_mvar_per_a = uniform(rng, 0.5, 2.0);
            m.transformers.push_back(t);

            if (chance(rng, 0.8)) {
                Generator g;
                g.id = tag("G", generator_counter++);
                g.bus = lv.id;
                g.mw_capacity = uniform(rng, 20.0, 900.0);
                g.in_service = !chance(rng, 0.3);  // offline units drive the GSU scenarios
                m.generators.push_back(g);
            }
        }
    }
    return m;
}

}  // namespace gicflow::test
