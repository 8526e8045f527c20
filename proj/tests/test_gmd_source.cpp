#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "gicflow/gmd_source.hpp"
#include "support/fixtures.hpp"
#include "support/model_gen.hpp"

using namespace gicflow;
using Catch::Approx;

namespace {

// Independent great-circle oracle for the mid-latitude approximation: the
// north component from the meridian arc, the east component from the
// parallel arc at the mean latitude (haversine, spherical earth).
constexpr double kEarthRadiusKm = 6371.0088;

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    auto rad = [](double d) { return d * std::numbers::pi / 180.0; };
    double dlat = rad(lat2 - lat1), dlon = rad(lon2 - lon1);
    double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(rad(lat1)) * std::cos(rad(lat2)) * std::sin(dlon / 2) *
                   std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(a));
}

GridModel coordinate_pair(double lat1, double lon1, double lat2, double lon2) {
    GridModel m;
    m.substations = {{"SA", "", lat1, lon1, 0.5, ""}, {"SB", "", lat2, lon2, 0.5, ""}};
    m.buses = {{"A", "SA", 345, "", 1.0, true}, {"B", "SB", 345, "", 1.0, true}};
    m.branches = {{"L", "A", "B", 1.0, true, std::nullopt, std::nullopt}};
    return m;
}

}  // namespace

TEST_CASE("coincident endpoints give zero lengths", "[gmd_source]") {
    GridModel m = coordinate_pair(31.5, -97.0, 31.5, -97.0);
    auto [north, east] = geodesic_lengths(m, m.branches[0]);
    CHECK(north == 0.0);
    CHECK(east == 0.0);
}

TEST_CASE("explicit lengths pass through unchanged", "[gmd_source]") {
    GridModel m = coordinate_pair(31.5, -97.0, 35.0, -95.0);
    m.branches[0].length_north_km = 10.0;
    m.branches[0].length_east_km = -5.0;
    auto [north, east] = geodesic_lengths(m, m.branches[0]);
    CHECK(north == 10.0);
    CHECK(east == -5.0);

    // one explicit component implies the other is zero
    m.branches[0].length_north_km.reset();
    auto [north2, east2] = geodesic_lengths(m, m.branches[0]);
    CHECK(north2 == 0.0);
    CHECK(east2 == -5.0);
}

TEST_CASE("mid-latitude approximation tracks the great-circle oracle", "[gmd_source]") {
    // one degree of longitude at mean latitude 30
    GridModel m = coordinate_pair(30.0, -97.0, 30.0, -96.0);
    auto [north, east] = geodesic_lengths(m, m.branches[0]);
    CHECK(north == 0.0);
    double oracle = haversine_km(30.0, -97.0, 30.0, -96.0);
    CHECK(std::abs(east - oracle) / oracle < 0.005);

    // a north displacement and a mixed displacement
    GridModel n = coordinate_pair(30.0, -97.0, 31.0, -97.0);
    auto [north_n, east_n] = geodesic_lengths(n, n.branches[0]);
    CHECK(east_n == 0.0);
    double oracle_n = haversine_km(30.0, -97.0, 31.0, -97.0);
    CHECK(std::abs(north_n - oracle_n) / oracle_n < 0.005);

    GridModel x = coordinate_pair(42.0, -93.0, 41.3, -91.8);
    auto [north_x, east_x] = geodesic_lengths(x, x.branches[0]);
    double oracle_north = haversine_km(42.0, -93.0, 41.3, -93.0);
    double oracle_east = haversine_km(41.65, -93.0, 41.65, -91.8);
    CHECK(std::abs(std::abs(north_x) - oracle_north) / oracle_north < 0.005);
    CHECK(std::abs(std::abs(east_x) - oracle_east) / oracle_east < 0.005);
    CHECK(north_x < 0.0);  // moved south
    CHECK(east_x > 0.0);   // moved east
}

TEST_CASE("missing coordinates raise an error", "[gmd_source]") {
    GridModel m = coordinate_pair(31.5, -97.0, 35.0, -95.0);
    m.substations[1].latitude_deg = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(geodesic_lengths(m, m.branches[0]), Error);
}

TEST_CASE("eastward field on an east extent gives E times L", "[gmd_source]") {
    GridModel m = coordinate_pair(30.0, -97.0, 30.0, -96.0);
    m.branches[0].length_north_km = 55.0;  // irrelevant under a pure east field
    m.branches[0].length_east_km = 100.0;
    FieldScenario field{8.0, 90.0, 1.0, 1.0};
    auto emfs = induced_emfs(m, field);
    REQUIRE(emfs.size() == 1);
    CHECK(emfs[0].branch_id == "L");
    CHECK(emfs[0].emf_volts == 800.0);  // exact: cos(90) is exactly 0 here
}

TEST_CASE("eastward field is orthogonal to a north-south branch", "[gmd_source]") {
    GridModel m = coordinate_pair(30.0, -97.0, 31.0, -97.0);
    m.branches[0].length_north_km = 140.0;
    m.branches[0].length_east_km = 0.0;
    auto emfs = induced_emfs(m, FieldScenario{8.0, 90.0, 1.0, 1.0});
    REQUIRE(emfs.size() == 1);
    CHECK(emfs[0].emf_volts == 0.0);  // exactly
}

TEST_CASE("zero magnitude gives exactly zero EMFs", "[gmd_source]") {
    GridModel m = test::six_bus_fixture();
    for (const auto& emf : induced_emfs(m, FieldScenario{0.0, 37.0, 1.0, 1.0}))
        CHECK(emf.emf_volts == 0.0);
}

TEST_CASE("out-of-service branches receive no EMF", "[gmd_source]") {
    GridModel m = test::six_bus_fixture();
    m.branches[1].in_service = false;
    auto emfs = induced_emfs(m, FieldScenario{8.0, 90.0, 1.0, 1.0});
    REQUIRE(emfs.size() == 2);
    for (const auto& emf : emfs) CHECK(emf.branch_id != "L2");
}

TEST_CASE("EMF is linear in magnitude and scaling factors", "[gmd_source]") {
    GridModel m = test::six_bus_fixture();
    for (unsigned seed : {11u, 12u, 13u}) {
        FieldScenario f = test::make_random_field(seed);
        FieldScenario doubled = f;
        doubled.magnitude_v_per_km *= 2.0;
        auto base = induced_emfs(m, f);
        auto twice = induced_emfs(m, doubled);
        REQUIRE(base.size() == twice.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(twice[i].emf_volts == Approx(2.0 * base[i].emf_volts).margin(0.0).epsilon(1e-15));

        FieldScenario scaled = f;
        scaled.alpha = 0.5;
        scaled.beta = 3.0;
        auto alt = induced_emfs(m, scaled);
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(alt[i].emf_volts ==
                  Approx(1.5 / (f.alpha * f.beta) * base[i].emf_volts).epsilon(1e-12));
    }
}

TEST_CASE("direction decomposition: emf(theta) = cos·emf(0) + sin·emf(90)", "[gmd_source]") {
    GridModel m = test::six_bus_fixture();
    for (double theta : {17.0, 45.0, 133.0, 284.5}) {
        auto at_theta = induced_emfs(m, FieldScenario{8.0, theta, 1.0, 1.0});
        auto north = induced_emfs(m, FieldScenario{8.0, 0.0, 1.0, 1.0});
        auto east = induced_emfs(m, FieldScenario{8.0, 90.0, 1.0, 1.0});
        double c = std::cos(theta * std::numbers::pi / 180.0);
        double s = std::sin(theta * std::numbers::pi / 180.0);
        for (std::size_t i = 0; i < at_theta.size(); ++i) {
            double expected = c * north[i].emf_volts + s * east[i].emf_volts;
            CHECK(at_theta[i].emf_volts == Approx(expected).epsilon(1e-12).margin(1e-12));
        }
    }
}

TEST_CASE("reversing branch endpoints negates the EMF", "[gmd_source]") {
    GridModel m = test::six_bus_fixture();
    GridModel r = m;
    for (auto& br : r.branches) {
        std::swap(br.from_bus, br.to_bus);
        if (br.length_north_km) br.length_north_km = -*br.length_north_km;
        if (br.length_east_km) br.length_east_km = -*br.length_east_km;
    }
    auto forward = induced_emfs(m, FieldScenario{8.0, 63.0, 1.0, 1.0});
    auto reversed = induced_emfs(r, FieldScenario{8.0, 63.0, 1.0, 1.0});
    REQUIRE(forward.size() == reversed.size());
    for (std::size_t i = 0; i < forward.size(); ++i)
        CHECK(reversed[i].emf_volts == Approx(-forward[i].emf_volts).margin(1e-12));
}

TEST_CASE("direction normalization wraps into [0, 360)", "[gmd_source]") {
    CHECK(FieldScenario{1.0, -90.0, 1, 1}.normalized_direction_deg() == 270.0);
    CHECK(FieldScenario{1.0, 450.0, 1, 1}.normalized_direction_deg() == 90.0);
    auto [c, s] = direction_cos_sin(-270.0);  // same as 90: exact east
    CHECK(c == 0.0);
    CHECK(s == 1.0);
}
