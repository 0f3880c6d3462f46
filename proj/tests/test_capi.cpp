#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <string>

#include "eamcr/eamcr.h"

namespace {

std::string data_path(const char* name) {
    return std::string(EAMCR_DATA_DIR) + "/" + name;
}

struct Owned {
    char* s = nullptr;
    ~Owned() { eamcr_string_free(s); }
    std::string str() const { return s == nullptr ? std::string() : std::string(s); }
};

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strcmp(eamcr_version(), EAMCR_VERSION) == 0);
    CHECK(std::strcmp(eamcr_status_name(EAMCR_OK), "ok") == 0);
    CHECK(std::strcmp(eamcr_status_name(EAMCR_E_VALIDATION), "validation") == 0);
}

TEST_CASE("profile loading and validation through the C surface") {
    eamcr_profiles* profiles = nullptr;
    REQUIRE(eamcr_profiles_load(data_path("profiles_oneplus7.json").c_str(), &profiles) ==
            EAMCR_OK);
    REQUIRE(profiles != nullptr);

    Owned report;
    int errors = -1;
    int warnings = -1;
    CHECK(eamcr_profiles_validate(profiles, &report.s, &errors, &warnings) == EAMCR_OK);
    CHECK(errors == 0);
    CHECK(warnings == 0);
    CHECK(report.str().empty());

    Owned csv;
    CHECK(eamcr_dlei_table_csv(profiles, "eardrum", &csv.s) == EAMCR_OK);
    CHECK(csv.str().rfind("model,accelerator,accuracy,mean_energy_mwh,dlei\n", 0) == 0);
    CHECK(csv.str().find("ResNet,CPU_SINGLE") != std::string::npos);

    Owned missing_task;
    CHECK(eamcr_dlei_table_csv(profiles, "no-such-task", &missing_task.s) ==
          EAMCR_E_UNKNOWN_TASK);
    CHECK(std::string(eamcr_last_error()).find("no-such-task") != std::string::npos);

    eamcr_profiles_free(profiles);
}

TEST_CASE("load failures surface status and message") {
    eamcr_profiles* profiles = nullptr;
    CHECK(eamcr_profiles_load("/nonexistent/file.json", &profiles) == EAMCR_E_IO);
    CHECK(profiles == nullptr);
    CHECK(std::string(eamcr_last_error()).find("nonexistent") != std::string::npos);
    CHECK(eamcr_profiles_load(nullptr, &profiles) == EAMCR_E_INVALID_ARG);
}

TEST_CASE("parse-then-validate lists diagnostics that load would reject") {
    std::string path = "/tmp/eamcr_capi_invalid.json";
    {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        const char* doc = R"({
          "device_name": "d", "voltage_v": 3.85, "idle_ma": 0.0,
          "models": [{"name": "m", "task": "t", "accuracy": 1.2, "model_size_mb": 1.0,
            "runtimes": [{"accelerator": "GPU", "latency_ms": 0.0, "power_mw": 2000.0, "discharge_ma": 519.5}]}]
        })";
        std::fputs(doc, f);
        std::fclose(f);
    }

    eamcr_profiles* strict = nullptr;
    CHECK(eamcr_profiles_load(path.c_str(), &strict) == EAMCR_E_VALIDATION);

    eamcr_profiles* lenient = nullptr;
    REQUIRE(eamcr_profiles_parse(path.c_str(), &lenient) == EAMCR_OK);
    Owned report;
    int errors = 0;
    int warnings = 0;
    CHECK(eamcr_profiles_validate(lenient, &report.s, &errors, &warnings) == EAMCR_OK);
    CHECK(errors == 2);  // accuracy range + zero latency
    CHECK(report.str().find("accuracy") != std::string::npos);
    CHECK(report.str().find("latency_ms") != std::string::npos);
    eamcr_profiles_free(lenient);
    std::remove(path.c_str());
}

TEST_CASE("simulation and comparison through the C surface") {
    eamcr_profiles* profiles = nullptr;
    REQUIRE(eamcr_profiles_load(data_path("profiles_oneplus7.json").c_str(), &profiles) ==
            EAMCR_OK);

    eamcr_scenario* scenario = nullptr;
    REQUIRE(eamcr_scenario_load(data_path("scenarios/compare_skin_cpu.json").c_str(),
                                &scenario) == EAMCR_OK);
    CHECK(eamcr_scenario_policy_count(scenario) == 7);

    eamcr_sim_result* result = nullptr;
    REQUIRE(eamcr_simulate(profiles, scenario, 0, &result) == EAMCR_OK);
    Owned json;
    Owned series;
    Owned svg;
    CHECK(eamcr_sim_result_json(result, &json.s) == EAMCR_OK);
    CHECK(json.str().find("\"operating_time_s\"") != std::string::npos);
    CHECK(eamcr_sim_result_series_csv(result, &series.s) == EAMCR_OK);
    CHECK(series.str().rfind("timestamp_s,remaining_mah,active_model\n", 0) == 0);
    CHECK(eamcr_sim_result_svg(result, &svg.s) == EAMCR_OK);
    CHECK(svg.str().rfind("<svg", 0) == 0);
    eamcr_sim_result_free(result);

    CHECK(eamcr_simulate(profiles, scenario, 99, &result) == EAMCR_E_INVALID_ARG);

    eamcr_comparison* comparison = nullptr;
    REQUIRE(eamcr_compare(profiles, scenario, &comparison) == EAMCR_OK);
    Owned cmp_json;
    Owned cmp_csv;
    Owned cmp_svg;
    CHECK(eamcr_comparison_json(comparison, &cmp_json.s) == EAMCR_OK);
    CHECK(cmp_json.str().find("\"mean_fixed_operating_time_s\"") != std::string::npos);
    CHECK(eamcr_comparison_summary_csv(comparison, &cmp_csv.s) == EAMCR_OK);
    CHECK(cmp_csv.str().rfind("policy,operating_time_s,inference_count,utility,mean_dlei\n",
                              0) == 0);
    CHECK(cmp_csv.str().find("EAMCR,") != std::string::npos);
    CHECK(eamcr_comparison_svg(comparison, &cmp_svg.s) == EAMCR_OK);
    CHECK(cmp_svg.str().find("stroke-dasharray") != std::string::npos);
    eamcr_comparison_free(comparison);

    // Determinism at the API boundary: a fresh run emits identical bytes.
    eamcr_comparison* again = nullptr;
    REQUIRE(eamcr_compare(profiles, scenario, &again) == EAMCR_OK);
    Owned again_json;
    CHECK(eamcr_comparison_json(again, &again_json.s) == EAMCR_OK);
    CHECK(again_json.str() == cmp_json.str());
    eamcr_comparison_free(again);

    // Seed override changes the handle state without reloading.
    CHECK(eamcr_scenario_set_seed(scenario, 1234) == EAMCR_OK);

    eamcr_scenario_free(scenario);
    eamcr_profiles_free(profiles);
}

TEST_CASE("formula helpers") {
    double value = 0.0;
    CHECK(eamcr_energy_per_inference_mj(2400.0, 155.0, &value) == EAMCR_OK);
    CHECK(value == 372.0);
    CHECK(eamcr_energy_per_inference_mj(-5.0, 155.0, &value) == EAMCR_E_DOMAIN);

    CHECK(eamcr_dlei(0.9, 360.0, &value) == EAMCR_OK);
    CHECK(value == 9.0);
    CHECK(eamcr_dlei(1.5, 360.0, &value) == EAMCR_E_DOMAIN);

    CHECK(eamcr_estimated_usage_time_h(2000.0, 500.0, &value) == EAMCR_OK);
    CHECK(value == 4.0);
    CHECK(eamcr_estimated_usage_time_h(2000.0, 0.0, &value) == EAMCR_E_DOMAIN);

    const uint8_t x[4] = {1, 1, 0, 0};
    const uint8_t y[4] = {1, 0, 1, 0};
    CHECK(eamcr_jaccard_index(2, 2, x, y, &value) == EAMCR_OK);
    CHECK(value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(eamcr_jaccard_index(2, 2, nullptr, y, &value) == EAMCR_E_INVALID_ARG);
}
