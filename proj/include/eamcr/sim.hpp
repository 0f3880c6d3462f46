#ifndef EAMCR_SIM_HPP
#define EAMCR_SIM_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eamcr/energy.hpp"
#include "eamcr/engine.hpp"
#include "eamcr/profiles.hpp"

namespace eamcr {

enum class ArrivalKind { FixedRate, Poisson, Trace };

std::string_view arrival_kind_name(ArrivalKind kind);

struct Workload {
    ArrivalKind arrival_kind = ArrivalKind::FixedRate;
    double rate_per_s = 0.0;           // FIXED_RATE / POISSON; 0 = no requests
    std::vector<double> trace;         // TRACE: strictly increasing, < horizon
    double horizon_s = 0.0;
    std::uint64_t seed = 0;
};

// Deterministic function of (kind, rate, seed, horizon, trace).
std::vector<double> generate_arrivals(const Workload& workload);

struct Policy {
    enum class Kind { Fixed, Eamcr };

    Kind kind = Kind::Fixed;
    std::string model_name;  // Fixed only
    EngineConfig engine;     // Eamcr only

    std::string label() const;  // "FIXED(name)" / "EAMCR"

    static Policy fixed(std::string model_name);
    static Policy eamcr(EngineConfig config);
};

struct SeriesPoint {
    double timestamp_s = 0.0;
    double remaining_mah = 0.0;
    std::string model_name;  // model serving at this instant
};

struct LoggedDecision {
    double timestamp_s = 0.0;
    std::int64_t arrival_index = -1;  // -1 = initial pre-workload decision
    Decision decision;
};

struct SimOptions {
    // Multiplicative latency/energy perturbation in [0.95, 1.05], one
    // deterministic seeded draw per arrival. Disable for exact arithmetic.
    bool noise = true;
};

struct SimResult {
    Policy policy;
    double operating_time_s = 0.0;  // until exhaustion or horizon
    std::uint64_t inference_count = 0;
    double utility = 0.0;           // sum of serving-model accuracies
    std::vector<SeriesPoint> energy_series;   // every event + minute samples
    std::vector<LoggedDecision> decision_log; // entries only when model/mode changes
    std::vector<InferenceOutcome> outcomes;
    double total_idle_drain_mah = 0.0;
    double final_remaining_mah = 0.0;
    bool exhausted = false;
    double mean_dlei = 0.0;  // mean over served inferences; 0 when none
    std::vector<std::string> warnings;  // engine notes (e.g. region relaxed)
};

// Event loop over the workload arrivals: idle drain integrates between
// events, each arrival synthesizes an inference from the serving model's
// runtime profile and feeds statistics back (EAMCR). Terminates at battery
// exhaustion or the horizon. Single-threaded and deterministic.
SimResult run_simulation(const ProfileSet& profiles, std::string_view task,
                         AcceleratorKind accelerator, const BatteryState& battery0,
                         const Policy& policy, const Workload& workload,
                         const SimOptions& options = {});

struct PolicySummary {
    std::string label;
    double operating_time_s = 0.0;
    std::uint64_t inference_count = 0;
    double utility = 0.0;
    double mean_dlei = 0.0;
};

struct ComparisonReport {
    std::string scenario_id;
    std::vector<SimResult> results;    // one per policy, input order
    std::vector<PolicySummary> summary;
    double mean_fixed_operating_time_s = 0.0;  // arithmetic mean of FIXED runs
};

// Runs every policy against the identical seeded workload and initial
// battery. Requires at least two policies.
ComparisonReport compare_policies(const ProfileSet& profiles, std::string_view task,
                                  AcceleratorKind accelerator, const BatteryState& battery0,
                                  const std::vector<Policy>& policies, const Workload& workload,
                                  const SimOptions& options = {},
                                  std::string_view scenario_id = {});

// Scenario file (JSON; schema in the README).
struct Scenario {
    std::string scenario_id;
    std::string task;
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    BatteryState battery;
    Workload workload;
    std::vector<Policy> policies;
    SimOptions options;
};

Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace eamcr

#endif
