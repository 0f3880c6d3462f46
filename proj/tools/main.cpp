// eamcr command-line tool. Talks to the core exclusively through the
// public C interface (eamcr/eamcr.h); everything here is argument
// handling and file plumbing.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eamcr/eamcr.h"

namespace {

int exit_code_for(eamcr_status status) {
    if (status == EAMCR_OK) return 0;
    if (status == EAMCR_E_IO || status == EAMCR_E_PARSE) return 1;
    return 2;
}

int report_failure(eamcr_status status) {
    std::cerr << "eamcr: error (" << eamcr_status_name(status) << "): " << eamcr_last_error()
              << "\n";
    return exit_code_for(status);
}

// --out is a stem; the matching extension is appended unless already there.
std::string out_path(const std::string& stem, const std::string& ext) {
    if (stem.size() >= ext.size() &&
        stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
        return stem;
    }
    return stem + ext;
}

bool write_file(const std::string& path, const char* contents, int verbosity) {
    std::ofstream outfile(path, std::ios::binary | std::ios::trunc);
    if (!outfile) {
        std::cerr << "eamcr: error: cannot write " << path << "\n";
        return false;
    }
    outfile << contents;
    outfile.flush();
    if (!outfile) {
        std::cerr << "eamcr: error: failed writing " << path << "\n";
        return false;
    }
    if (verbosity > 0) std::cerr << "wrote " << path << "\n";
    return true;
}

struct StringGuard {
    char* value = nullptr;
    ~StringGuard() { eamcr_string_free(value); }
};

struct ProfilesGuard {
    eamcr_profiles* value = nullptr;
    ~ProfilesGuard() { eamcr_profiles_free(value); }
};

struct ScenarioGuard {
    eamcr_scenario* value = nullptr;
    ~ScenarioGuard() { eamcr_scenario_free(value); }
};

int cmd_validate(const std::string& profiles_path, int verbosity) {
    ProfilesGuard profiles;
    eamcr_status status = eamcr_profiles_parse(profiles_path.c_str(), &profiles.value);
    if (status != EAMCR_OK) return report_failure(status);

    StringGuard report;
    int errors = 0;
    int warnings = 0;
    status = eamcr_profiles_validate(profiles.value, &report.value, &errors, &warnings);
    if (status != EAMCR_OK) return report_failure(status);

    if (report.value != nullptr && report.value[0] != '\0') {
        std::cout << report.value;
    }
    if (errors > 0) {
        std::cerr << "eamcr: " << errors << " error(s), " << warnings << " warning(s)\n";
        return 2;
    }
    if (verbosity > 0 || warnings > 0) {
        std::cerr << "eamcr: ok (" << warnings << " warning(s))\n";
    }
    return 0;
}

int cmd_dlei(const std::string& profiles_path, const std::string& task,
             const std::string& out, int verbosity) {
    ProfilesGuard profiles;
    eamcr_status status = eamcr_profiles_load(profiles_path.c_str(), &profiles.value);
    if (status != EAMCR_OK) return report_failure(status);

    StringGuard csv;
    status = eamcr_dlei_table_csv(profiles.value, task.c_str(), &csv.value);
    if (status != EAMCR_OK) return report_failure(status);

    if (!write_file(out_path(out, ".csv"), csv.value, verbosity)) return 1;
    return 0;
}

int load_inputs(const std::string& profiles_path, const std::string& scenario_path,
                bool seed_set, std::uint64_t seed, ProfilesGuard& profiles,
                ScenarioGuard& scenario) {
    eamcr_status status = eamcr_profiles_load(profiles_path.c_str(), &profiles.value);
    if (status != EAMCR_OK) return report_failure(status);
    status = eamcr_scenario_load(scenario_path.c_str(), &scenario.value);
    if (status != EAMCR_OK) return report_failure(status);
    if (seed_set) eamcr_scenario_set_seed(scenario.value, seed);
    return 0;
}

int cmd_simulate(const std::string& profiles_path, const std::string& scenario_path,
                 const std::string& out, const std::string& format, bool seed_set,
                 std::uint64_t seed, int verbosity) {
    ProfilesGuard profiles;
    ScenarioGuard scenario;
    int rc = load_inputs(profiles_path, scenario_path, seed_set, seed, profiles, scenario);
    if (rc != 0) return rc;

    eamcr_sim_result* result = nullptr;
    eamcr_status status = eamcr_simulate(profiles.value, scenario.value, 0, &result);
    if (status != EAMCR_OK) return report_failure(status);

    StringGuard json;
    StringGuard csv;
    StringGuard svg;
    status = eamcr_sim_result_json(result, &json.value);
    if (status == EAMCR_OK) status = eamcr_sim_result_series_csv(result, &csv.value);
    if (status == EAMCR_OK && format == "svg") {
        status = eamcr_sim_result_svg(result, &svg.value);
    }
    eamcr_sim_result_free(result);
    if (status != EAMCR_OK) return report_failure(status);

    if (verbosity > 1) std::cerr << json.value;
    if (!write_file(out_path(out, ".json"), json.value, verbosity)) return 1;
    if (!write_file(out_path(out, ".csv"), csv.value, verbosity)) return 1;
    if (svg.value != nullptr && !write_file(out_path(out, ".svg"), svg.value, verbosity)) {
        return 1;
    }
    return 0;
}

int cmd_compare(const std::string& profiles_path, const std::string& scenario_path,
                const std::string& out, const std::string& format, bool seed_set,
                std::uint64_t seed, int verbosity) {
    ProfilesGuard profiles;
    ScenarioGuard scenario;
    int rc = load_inputs(profiles_path, scenario_path, seed_set, seed, profiles, scenario);
    if (rc != 0) return rc;

    if (eamcr_scenario_policy_count(scenario.value) < 2) {
        std::cerr << "eamcr: error: compare needs a scenario with at least 2 policies\n";
        return 2;
    }

    eamcr_comparison* comparison = nullptr;
    eamcr_status status = eamcr_compare(profiles.value, scenario.value, &comparison);
    if (status != EAMCR_OK) return report_failure(status);

    StringGuard json;
    StringGuard csv;
    StringGuard svg;
    status = eamcr_comparison_json(comparison, &json.value);
    if (status == EAMCR_OK) status = eamcr_comparison_summary_csv(comparison, &csv.value);
    if (status == EAMCR_OK && format == "svg") {
        status = eamcr_comparison_svg(comparison, &svg.value);
    }
    eamcr_comparison_free(comparison);
    if (status != EAMCR_OK) return report_failure(status);

    if (verbosity > 1) std::cerr << csv.value;
    if (!write_file(out_path(out, ".json"), json.value, verbosity)) return 1;
    if (!write_file(out_path(out, ".csv"), csv.value, verbosity)) return 1;
    if (svg.value != nullptr && !write_file(out_path(out, ".svg"), svg.value, verbosity)) {
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware model selection: profile validation, efficiency tables, "
                 "battery simulation and policy comparison"};
    app.set_version_flag("--version", eamcr_version());
    app.require_subcommand(1);

    int verbosity = 0;
    app.add_flag("-v", verbosity, "increase verbosity (repeatable)");

    std::string profiles_path;
    std::string scenario_path;
    std::string task;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;

    CLI::App* validate = app.add_subcommand("validate", "check a profile corpus");
    validate->fallthrough();
    validate->add_option("--profiles", profiles_path, "profile corpus (JSON)")->required();

    CLI::App* dlei = app.add_subcommand("dlei", "write the efficiency-index table");
    dlei->fallthrough();
    dlei->add_option("--profiles", profiles_path, "profile corpus (JSON)")->required();
    dlei->add_option("--task", task, "task identifier")->required();
    dlei->add_option("--out", out, "output stem (writes <out>.csv)")->required();
    dlei->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv"}));

    auto add_run_options = [&](CLI::App* cmd) {
        cmd->fallthrough();
        cmd->add_option("--profiles", profiles_path, "profile corpus (JSON)")->required();
        cmd->add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
        cmd->add_option("--out", out, "output stem (writes <out>.json/.csv[/.svg])")
            ->required();
        cmd->add_option("--format", format, "csv|json|svg (svg adds a chart)")
            ->check(CLI::IsMember({"csv", "json", "svg"}));
        cmd->add_option("--seed", seed, "override the workload seed")
            ->each([&](const std::string&) { seed_set = true; });
    };

    CLI::App* simulate =
        app.add_subcommand("simulate", "run the first policy of a scenario");
    add_run_options(simulate);

    CLI::App* compare = app.add_subcommand("compare", "run every policy of a scenario");
    add_run_options(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (validate->parsed()) return cmd_validate(profiles_path, verbosity);
    if (dlei->parsed()) return cmd_dlei(profiles_path, task, out, verbosity);
    if (simulate->parsed()) {
        return cmd_simulate(profiles_path, scenario_path, out, format, seed_set, seed,
                            verbosity);
    }
    if (compare->parsed()) {
        return cmd_compare(profiles_path, scenario_path, out, format, seed_set, seed,
                           verbosity);
    }
    return 2;
}
