// Shared test fixtures. The two-substation loop has a closed-form solution
// (hand loop analysis, frozen in the solver tests); the six-bus grid is the
// bundled mixed fixture behind the golden files; the GSU fixture exercises
// every identification case in one model.
#pragma once

#include <cstdio>
#include <string>

#include "gicflow/grid_model.hpp"

namespace gicflow::test {

// Two grounded substations joined by one 100 km east-west line.
//
//   earth -- 0.2 -- NA -- 0.1 -- BA ====line 1.0==== BB -- 0.1 -- NB -- 0.2 -- earth
//
// (lumped three-phase ohms; windings 0.3 per phase, line 3.0 per phase).
// 8 V/km eastward gives 800 V around the loop; loop resistance 1.6 ohms;
// 500 A ground loop, 166.67 A per phase on the line, neutrals -500/+500 A.
inline GridModel two_substation_loop() {
    GridModel m;
    m.metadata.name = "two-substation-loop";
    m.substations = {
        {"SA", "Alpha", 30.0, -100.0, 0.2, "west"},
        {"SB", "Bravo", 30.0, -99.0, 0.2, "east"},
    };
    m.buses = {
        {"BA", "SA", 345.0, "west", 1.0, true},
        {"BAL", "SA", 13.8, "west", 1.0, true},
        {"BB", "SB", 345.0, "east", 1.0, true},
        {"BBL", "SB", 13.8, "east", 1.0, true},
    };
    m.branches = {
        {"L1", "BA", "BB", 3.0, true, 0.0, 100.0},
    };
    m.transformers = {
        {"TA", "BA", "BAL", TransformerConfig::GwyeGwye, 0.3, 0.3, "SA", 1.5, true, false},
        {"TB", "BB", "BBL", TransformerConfig::GwyeGwye, 0.3, 0.3, "SB", 1.5, true, false},
    };
    return m;
}

// Hand analysis of the loop under 8 V/km eastward, frozen as the oracle for
// the solver tests (all exact rationals):
struct LoopExpectation {
    static constexpr double kLoopCurrentA = 500.0;
    static constexpr double kBranchPerPhaseA = 500.0 / 3.0;
    static constexpr double kVoltageBusA = -150.0;
    static constexpr double kVoltageBusB = 150.0;
    static constexpr double kVoltageNeutralA = -100.0;
    static constexpr double kVoltageNeutralB = 100.0;
    static constexpr double kNeutralGicA_A = -500.0;  // out of the ground at SA
    static constexpr double kNeutralGicB_A = 500.0;   // into the ground at SB
    static constexpr double kEffectivePerPhaseA = 500.0 / 3.0;
};

// Three 345 kV substations meshed by three lines (two with explicit lengths,
// one geodesic), one GwyeGwye down to 161 kV, and two GSUs; generator G2 is
// offline, so the GSUs-out scenario retires its GSU T1.
inline GridModel six_bus_fixture() {
    GridModel m;
    m.metadata.name = "sixbus";
    m.metadata.source = "bundled fixture";
    m.substations = {
        {"S1", "Mesa", 31.0, -97.5, 0.2, "West"},
        {"S2", "Llano", 31.3, -96.4, 0.15, "North"},
        {"S3", "Brazos", 30.6, -96.9, 0.25, "South"},
    };
    m.buses = {
        {"B1", "S1", 345.0, "West", 1.0, true},
        {"B2", "S2", 345.0, "North", 1.02, true},
        {"B3", "S3", 345.0, "South", 0.98, true},
        {"B5", "S1", 161.0, "West", 1.0, true},
        {"BG2", "S2", 13.8, "North", 1.0, true},
        {"BG3", "S3", 13.8, "South", 1.0, true},
    };
    m.branches = {
        {"L1", "B1", "B2", 3.0, true, 0.0, 120.0},
        {"L2", "B2", "B3", 2.5, true, -40.0, 60.0},
        {"L3", "B1", "B3", 4.0, true, std::nullopt, std::nullopt},  // geodesic
    };
    m.transformers = {
        {"T1", "B2", "BG2", TransformerConfig::GwyeDeltaGsu, 0.25, 0.0, "S2", 1.1, true, false},
        {"T2", "B3", "BG3", TransformerConfig::GwyeDeltaGsu, 0.3, 0.0, "S3", 1.2, true, false},
        {"T3", "B1", "B5", TransformerConfig::GwyeGwye, 0.4, 0.6, "S1", 0.9, true, false},
    };
    m.generators = {
        {"G2", "BG2", 500.0, false},  // offline: its GSU T1 is the scenario lever
        {"G3", "BG3", 300.0, true},
    };
    return m;
}

// Identification fixture: a 12-bus core with a direct-connected generator, a
// one-GSU unit (shared by an online and an offline generator), a
// two-parallel-GSU unit, a chained 13.8/34.5/230 unit, an isolated 34.5 kV
// island, plus a 25-bus 13.8 kV distribution ring that exhausts the bus
// counter.
inline GridModel gsu_fixture() {
    GridModel m;
    m.metadata.name = "gsu-fixture";
    m.substations = {
        {"SA", "Able", 35.0, -90.0, 0.3, "core"},
        {"SB", "Baker", 35.2, -89.5, 0.25, "core"},
        {"SC", "Charlie", 35.25, -89.45, 0.2, "core"},
        {"SD", "Dog", 35.1, -89.2, 0.2, "core"},
        {"SE", "Easy", 34.8, -89.8, 0.35, "core"},
        {"SF", "Fox", 34.5, -90.5, 0.3, "island"},
        {"SG", "George", 35.4, -89.0, 0.3, "core"},
        {"SH", "How", 35.6, -88.7, 0.3, "core"},
        {"SI", "Item", 35.8, -88.4, 0.3, "core"},
        {"SP", "Pocket", 34.0, -91.0, 0.4, "pocket"},
    };
    m.buses = {
        {"TS1", "SA", 230.0, "core", 1.0, true},
        {"T115", "SA", 115.0, "core", 1.0, true},
        {"TS2", "SB", 230.0, "core", 1.0, true},
        {"GB1", "SC", 13.8, "core", 1.0, true},
        {"GC1", "SD", 13.8, "core", 1.0, true},
        {"GD1", "SE", 13.8, "core", 1.0, true},
        {"GD2", "SE", 34.5, "core", 1.0, true},
        {"GE1", "SF", 34.5, "island", 1.0, true},
        {"GE2", "SF", 34.5, "island", 1.0, true},
        {"TS3", "SG", 230.0, "core", 1.0, true},
        {"TS4", "SH", 230.0, "core", 1.0, true},
        {"TS5", "SI", 230.0, "core", 1.0, true},
    };
    m.branches = {
        {"TL1", "TS1", "TS2", 2.0, true, 0.0, 80.0},
        {"TL2", "TS2", "TS3", 2.2, true, 20.0, 40.0},
        {"TL3", "TS3", "TS4", 2.4, true, 25.0, 30.0},
        {"TL4", "TS4", "TS5", 2.6, true, 25.0, 30.0},
        {"IL1", "GE1", "GE2", 1.0, true, 5.0, 5.0},
    };
    m.transformers = {
        {"TAU", "TS1", "T115", TransformerConfig::Auto, 0.3, 0.2, "SA", 1.0, true, false},
        {"TB", "TS2", "GB1", TransformerConfig::GwyeDeltaGsu, 0.2, 0.0, "SC", 1.0, true, false},
        {"TC1", "TS2", "GC1", TransformerConfig::GwyeDeltaGsu, 0.25, 0.0, "SD", 1.0, true,
         false},
        {"TC2", "TS2", "GC1", TransformerConfig::GwyeDeltaGsu, 0.25, 0.0, "SD", 1.0, true,
         false},
        {"TD1", "GD2", "GD1", TransformerConfig::GwyeGwye, 0.3, 0.4, "SE", 1.0, true, false},
        {"TD2", "TS1", "GD2", TransformerConfig::GwyeDeltaGsu, 0.3, 0.0, "SE", 1.0, true,
         false},
    };
    m.generators = {
        {"GenA", "TS1", 800.0, true},    // direct at 230 kV
        {"GenF", "T115", 120.0, true},   // direct at 115 kV
        {"GenB", "GB1", 400.0, false},   // offline; shares TB with GenB2
        {"GenB2", "GB1", 350.0, true},
        {"GenC", "GC1", 600.0, true},    // two parallel GSUs
        {"GenD", "GD1", 200.0, false},   // chained through 34.5 kV
        {"GenE", "GE1", 50.0, true},     // island, queue exhausts
        {"GenP", "P01", 30.0, true},     // 25-bus ring, counter terminates
    };
    // 25-bus distribution ring
    for (int i = 1; i <= 25; ++i) {
        char bus[8];
        std::snprintf(bus, sizeof(bus), "P%02d", i);
        m.buses.push_back({bus, "SP", 13.8, "pocket", 1.0, true});
    }
    for (int i = 1; i <= 25; ++i) {
        char id[8], from[8], to[8];
        std::snprintf(id, sizeof(id), "PR%02d", i);
        std::snprintf(from, sizeof(from), "P%02d", i);
        std::snprintf(to, sizeof(to), "P%02d", i % 25 + 1);
        m.branches.push_back({id, from, to, 0.8, true, 1.0, 1.0});
    }
    return m;
}

}  // namespace gicflow::test
