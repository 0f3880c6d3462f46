#include "eamcr/eamcr.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "eamcr/energy.hpp"
#include "eamcr/metrics.hpp"
#include "eamcr/profiles.hpp"
#include "eamcr/report.hpp"
#include "eamcr/sim.hpp"

struct eamcr_profiles {
    eamcr::ProfileSet set;
};

struct eamcr_scenario {
    eamcr::Scenario scenario;
};

struct eamcr_sim_result {
    eamcr::SimResult result;
};

struct eamcr_comparison {
    eamcr::ComparisonReport report;
};

namespace {

thread_local std::string g_last_error;

eamcr_status status_from(eamcr::ErrorCode code) {
    switch (code) {
        case eamcr::ErrorCode::IoError: return EAMCR_E_IO;
        case eamcr::ErrorCode::ParseError: return EAMCR_E_PARSE;
        case eamcr::ErrorCode::ValidationError: return EAMCR_E_VALIDATION;
        case eamcr::ErrorCode::DomainError: return EAMCR_E_DOMAIN;
        case eamcr::ErrorCode::UnknownTask: return EAMCR_E_UNKNOWN_TASK;
        case eamcr::ErrorCode::NoCandidates: return EAMCR_E_NO_CANDIDATES;
        case eamcr::ErrorCode::UnknownModel: return EAMCR_E_UNKNOWN_MODEL;
        case eamcr::ErrorCode::DimensionMismatch: return EAMCR_E_DIMENSION;
        case eamcr::ErrorCode::EmptyInput: return EAMCR_E_EMPTY;
        case eamcr::ErrorCode::InfeasibleScenario: return EAMCR_E_INFEASIBLE;
        case eamcr::ErrorCode::UsageError: return EAMCR_E_USAGE;
    }
    return EAMCR_E_INTERNAL;
}

eamcr_status fail(eamcr_status status, const char* message) {
    g_last_error = message;
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
eamcr_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return EAMCR_OK;
    } catch (const eamcr::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return EAMCR_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return EAMCR_E_INTERNAL;
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

eamcr_status emit_string(const std::string& s, char** out) {
    *out = copy_string(s);
    if (*out == nullptr) return fail(EAMCR_E_INTERNAL, "out of memory");
    return EAMCR_OK;
}

}  // namespace

extern "C" {

const char* eamcr_version(void) { return EAMCR_VERSION; }

const char* eamcr_status_name(eamcr_status status) {
    switch (status) {
        case EAMCR_OK: return "ok";
        case EAMCR_E_IO: return "io";
        case EAMCR_E_PARSE: return "parse";
        case EAMCR_E_VALIDATION: return "validation";
        case EAMCR_E_DOMAIN: return "domain";
        case EAMCR_E_UNKNOWN_TASK: return "unknown-task";
        case EAMCR_E_NO_CANDIDATES: return "no-candidates";
        case EAMCR_E_UNKNOWN_MODEL: return "unknown-model";
        case EAMCR_E_DIMENSION: return "dimension-mismatch";
        case EAMCR_E_EMPTY: return "empty-input";
        case EAMCR_E_INFEASIBLE: return "infeasible-scenario";
        case EAMCR_E_USAGE: return "usage";
        case EAMCR_E_INVALID_ARG: return "invalid-argument";
        case EAMCR_E_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* eamcr_last_error(void) { return g_last_error.c_str(); }

void eamcr_string_free(char* s) { std::free(s); }

eamcr_status eamcr_profiles_load(const char* path, eamcr_profiles** out) {
    if (path == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "path and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = new eamcr_profiles{eamcr::load_profiles(path)}; });
}

eamcr_status eamcr_profiles_parse(const char* path, eamcr_profiles** out) {
    if (path == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "path and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = new eamcr_profiles{eamcr::parse_profiles_file(path)}; });
}

void eamcr_profiles_free(eamcr_profiles* profiles) { delete profiles; }

eamcr_status eamcr_profiles_validate(const eamcr_profiles* profiles, char** report_out,
                                     int* error_count, int* warning_count) {
    if (profiles == nullptr || report_out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "profiles and report_out must not be NULL");
    }
    *report_out = nullptr;
    return guarded([&] {
        auto diagnostics = eamcr::validate_profiles(profiles->set);
        int errors = 0;
        int warnings = 0;
        for (const auto& d : diagnostics) {
            (d.severity == eamcr::Severity::Error ? errors : warnings) += 1;
        }
        if (error_count != nullptr) *error_count = errors;
        if (warning_count != nullptr) *warning_count = warnings;
        if (emit_string(eamcr::diagnostics_text(diagnostics), report_out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_dlei_table_csv(const eamcr_profiles* profiles, const char* task,
                                  char** csv_out) {
    if (profiles == nullptr || task == nullptr || csv_out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "profiles, task and csv_out must not be NULL");
    }
    *csv_out = nullptr;
    return guarded([&] {
        auto rows = eamcr::dlei_table(profiles->set, task);
        if (emit_string(eamcr::dlei_table_csv(rows), csv_out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_scenario_load(const char* path, eamcr_scenario** out) {
    if (path == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "path and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = new eamcr_scenario{eamcr::load_scenario(path)}; });
}

void eamcr_scenario_free(eamcr_scenario* scenario) { delete scenario; }

eamcr_status eamcr_scenario_set_seed(eamcr_scenario* scenario, uint64_t seed) {
    if (scenario == nullptr) return fail(EAMCR_E_INVALID_ARG, "scenario must not be NULL");
    scenario->scenario.workload.seed = seed;
    return EAMCR_OK;
}

int eamcr_scenario_policy_count(const eamcr_scenario* scenario) {
    if (scenario == nullptr) return 0;
    return static_cast<int>(scenario->scenario.policies.size());
}

eamcr_status eamcr_simulate(const eamcr_profiles* profiles, const eamcr_scenario* scenario,
                            int policy_index, eamcr_sim_result** out) {
    if (profiles == nullptr || scenario == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "profiles, scenario and out must not be NULL");
    }
    *out = nullptr;
    const eamcr::Scenario& s = scenario->scenario;
    if (policy_index < 0 || static_cast<std::size_t>(policy_index) >= s.policies.size()) {
        return fail(EAMCR_E_INVALID_ARG, "policy_index out of range");
    }
    return guarded([&] {
        *out = new eamcr_sim_result{eamcr::run_simulation(
            profiles->set, s.task, s.accelerator, s.battery, s.policies[policy_index],
            s.workload, s.options)};
    });
}

void eamcr_sim_result_free(eamcr_sim_result* result) { delete result; }

eamcr_status eamcr_sim_result_json(const eamcr_sim_result* result, char** out) {
    if (result == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "result and out must not be NULL");
    }
    return guarded([&] {
        if (emit_string(eamcr::sim_result_json(result->result), out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_sim_result_series_csv(const eamcr_sim_result* result, char** out) {
    if (result == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "result and out must not be NULL");
    }
    return guarded([&] {
        if (emit_string(eamcr::energy_series_csv(result->result), out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_sim_result_svg(const eamcr_sim_result* result, char** out) {
    if (result == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "result and out must not be NULL");
    }
    return guarded([&] {
        if (emit_string(eamcr::sim_result_svg(result->result), out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_compare(const eamcr_profiles* profiles, const eamcr_scenario* scenario,
                           eamcr_comparison** out) {
    if (profiles == nullptr || scenario == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "profiles, scenario and out must not be NULL");
    }
    *out = nullptr;
    const eamcr::Scenario& s = scenario->scenario;
    return guarded([&] {
        *out = new eamcr_comparison{
            eamcr::compare_policies(profiles->set, s.task, s.accelerator, s.battery,
                                    s.policies, s.workload, s.options, s.scenario_id)};
    });
}

void eamcr_comparison_free(eamcr_comparison* comparison) { delete comparison; }

eamcr_status eamcr_comparison_json(const eamcr_comparison* comparison, char** out) {
    if (comparison == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "comparison and out must not be NULL");
    }
    return guarded([&] {
        if (emit_string(eamcr::comparison_json(comparison->report), out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_comparison_summary_csv(const eamcr_comparison* comparison, char** out) {
    if (comparison == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "comparison and out must not be NULL");
    }
    return guarded([&] {
        if (emit_string(eamcr::comparison_summary_csv(comparison->report), out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_comparison_svg(const eamcr_comparison* comparison, char** out) {
    if (comparison == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "comparison and out must not be NULL");
    }
    return guarded([&] {
        if (emit_string(eamcr::comparison_svg(comparison->report), out) != EAMCR_OK) {
            throw std::bad_alloc();
        }
    });
}

eamcr_status eamcr_energy_per_inference_mj(double power_mw, double latency_ms, double* out) {
    if (out == nullptr) return fail(EAMCR_E_INVALID_ARG, "out must not be NULL");
    return guarded([&] {
        eamcr::RuntimeProfile rt;
        rt.latency_ms = latency_ms;
        rt.power_mw = power_mw;
        rt.discharge_ma = 1.0;
        if (!(latency_ms > 0) || !(power_mw > 0)) {
            throw eamcr::Error(eamcr::ErrorCode::DomainError,
                               "power_mw and latency_ms must be > 0");
        }
        *out = eamcr::energy_per_inference(rt);
    });
}

eamcr_status eamcr_dlei(double accuracy, double energy_mj, double* out) {
    if (out == nullptr) return fail(EAMCR_E_INVALID_ARG, "out must not be NULL");
    return guarded([&] { *out = eamcr::dlei(accuracy, energy_mj); });
}

eamcr_status eamcr_estimated_usage_time_h(double remaining_mah, double effective_discharge_ma,
                                          double* out) {
    if (out == nullptr) return fail(EAMCR_E_INVALID_ARG, "out must not be NULL");
    return guarded([&] {
        eamcr::BatteryState battery;
        battery.design_capacity_mah = remaining_mah;
        battery.remaining_mah = remaining_mah;
        battery.voltage_v = 1.0;
        eamcr::EffectiveLoad load;
        load.effective_discharge_ma = effective_discharge_ma;
        *out = eamcr::estimated_usage_time_h(battery, load);
    });
}

eamcr_status eamcr_jaccard_index(uint32_t width, uint32_t height, const uint8_t* x,
                                 const uint8_t* y, double* out) {
    if (x == nullptr || y == nullptr || out == nullptr) {
        return fail(EAMCR_E_INVALID_ARG, "x, y and out must not be NULL");
    }
    return guarded([&] {
        std::size_t n = static_cast<std::size_t>(width) * height;
        eamcr::BinaryMask mx;
        mx.width = width;
        mx.height = height;
        mx.bits.assign(x, x + n);
        eamcr::BinaryMask my;
        my.width = width;
        my.height = height;
        my.bits.assign(y, y + n);
        *out = eamcr::jaccard_index(mx, my);
    });
}

}  // extern "C"
