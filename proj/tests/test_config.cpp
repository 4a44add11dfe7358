#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "surfsim/config.hpp"

using namespace surfsim;
using nlohmann::json;

TEST_CASE("config round-trips through serialization") {
    RunConfig c;
    c.noise.T1 = 12345;
    c.noise.alpha0 = 0.07;
    c.rounds = 2;
    c.crosstalk.kt_region = 0.03;
    c.crosstalk.compensated = true;
    c.crosstalk.moved_pair = {QubitId{3, 3, QubitRole::X_ANCILLA}, QubitId{2, 4, QubitRole::DATA}};
    c.crosstalk.moved_fraction = 0.25;
    c.engine.workers = 4;
    c.engine.seed = 99;
    c.fast_cycle = true;
    c.output_directory = "elsewhere";
    c.formats = {"json"};
    c.sweep_k_values = {0.0, 0.01};
    const RunConfig back = parse_config(serialize_config(c));
    CHECK(back.noise.T1 == c.noise.T1);
    CHECK(back.noise.alpha0 == c.noise.alpha0);
    CHECK(back.rounds == c.rounds);
    CHECK(back.crosstalk.kt_region == c.crosstalk.kt_region);
    CHECK(back.crosstalk.compensated == c.crosstalk.compensated);
    REQUIRE(back.crosstalk.moved_pair.has_value());
    CHECK(back.crosstalk.moved_pair->first == c.crosstalk.moved_pair->first);
    CHECK(back.crosstalk.moved_fraction == c.crosstalk.moved_fraction);
    CHECK(back.engine.workers == 4);
    CHECK(back.engine.seed == 99);
    CHECK(back.fast_cycle);
    CHECK(back.output_directory == "elsewhere");
    CHECK(back.formats == c.formats);
    CHECK(back.sweep_k_values == c.sweep_k_values);
    // Round-trip is a fixed point.
    CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_config(json{{"wat", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"noise", {{"T2", 100}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"crosstalk", {{"strength", 0.03}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"engine", {{"threads", 8}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"experiment", {{"round_count", 2}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"output", {{"format", "json"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"sweep", {{"ks", {0.1}}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"moving", {{"qubits", {1, 2}}}}}), std::invalid_argument);
}

TEST_CASE("invalid values are rejected with clear errors") {
    CHECK_THROWS_AS(parse_config(json{{"noise", {{"T1", -5.0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"noise", {{"eps_RO", 1.5}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"rounds", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"engine", {{"workers", -1}}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json{{"output", {{"formats", {"xml"}}}}}),
                    std::invalid_argument);
    // Qubits must be layout coordinates.
    CHECK_THROWS_AS(parse_config(json{{"moving", {{"pair", {{9, 9}, {2, 4}}}}}}),
                    std::invalid_argument);
}

TEST_CASE("fast cycle swaps in the fast measurement and depletion times") {
    RunConfig c;
    c.fast_cycle = true;
    const NoiseParameters p = c.effective_noise();
    CHECK(p.tau_m == c.noise.tau_m_fast);
    CHECK(p.tau_d == c.noise.tau_d_fast);
    c.fast_cycle = false;
    CHECK(c.effective_noise().tau_m == c.noise.tau_m);
}

TEST_CASE("load_config reads a file and reports missing ones") {
    const auto path = std::filesystem::temp_directory_path() / "surfsim-config-test.json";
    {
        std::ofstream out(path);
        out << R"({"rounds": 2, "crosstalk": {"kt_region": 0.01}})";
    }
    const RunConfig c = load_config(path.string());
    CHECK(c.rounds == 2);
    CHECK(c.crosstalk.kt_region == 0.01);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config(path.string()), std::invalid_argument);
}
