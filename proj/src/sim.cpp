#include "eamcr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <json.hpp>

namespace eamcr {

using nlohmann::json;

std::string_view arrival_kind_name(ArrivalKind kind) {
    switch (kind) {
        case ArrivalKind::FixedRate: return "FIXED_RATE";
        case ArrivalKind::Poisson: return "POISSON";
        case ArrivalKind::Trace: return "TRACE";
    }
    return "UNKNOWN";
}

Policy Policy::fixed(std::string model_name) {
    Policy p;
    p.kind = Kind::Fixed;
    p.model_name = std::move(model_name);
    return p;
}

Policy Policy::eamcr(EngineConfig config) {
    Policy p;
    p.kind = Kind::Eamcr;
    p.engine = std::move(config);
    return p;
}

std::string Policy::label() const {
    return kind == Kind::Fixed ? "FIXED(" + model_name + ")" : "EAMCR";
}

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kSeriesSampleIntervalS = 60.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// 53-bit uniform in [0, 1); avoids the implementation-defined stdlib
// distributions so sequences are identical everywhere.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

// Arrival lists are materialized up front; refuse workloads that would
// not fit in memory anyway.
constexpr double kMaxArrivals = 5e7;

std::vector<double> generate_arrivals(const Workload& workload) {
    if (!(workload.horizon_s > 0)) {
        throw Error(ErrorCode::ValidationError, "workload horizon_s must be > 0");
    }
    if (workload.arrival_kind != ArrivalKind::Trace &&
        workload.rate_per_s * workload.horizon_s > kMaxArrivals) {
        throw Error(ErrorCode::ValidationError,
                    "workload implies more than 5e7 arrivals; reduce rate_per_s or "
                    "horizon_s");
    }
    std::vector<double> arrivals;
    switch (workload.arrival_kind) {
        case ArrivalKind::FixedRate: {
            if (workload.rate_per_s < 0) {
                throw Error(ErrorCode::ValidationError, "workload rate_per_s must be >= 0");
            }
            if (workload.rate_per_s == 0) break;
            for (std::uint64_t k = 1;; ++k) {
                double t = static_cast<double>(k) / workload.rate_per_s;
                if (t >= workload.horizon_s) break;
                arrivals.push_back(t);
            }
            break;
        }
        case ArrivalKind::Poisson: {
            if (workload.rate_per_s < 0) {
                throw Error(ErrorCode::ValidationError, "workload rate_per_s must be >= 0");
            }
            if (workload.rate_per_s == 0) break;
            std::mt19937_64 gen(splitmix64(workload.seed));
            double t = 0.0;
            for (;;) {
                double gap = -std::log1p(-uniform01(gen)) / workload.rate_per_s;
                t += std::max(gap, 1e-12);
                if (t >= workload.horizon_s) break;
                arrivals.push_back(t);
            }
            break;
        }
        case ArrivalKind::Trace: {
            double prev = -1.0;
            for (double t : workload.trace) {
                if (t < 0 || t <= prev) {
                    throw Error(ErrorCode::ValidationError,
                                "trace timestamps must be nonnegative and strictly increasing");
                }
                if (t >= workload.horizon_s) {
                    throw Error(ErrorCode::ValidationError,
                                "trace timestamp " + std::to_string(t) +
                                    " is not below the horizon");
                }
                prev = t;
            }
            arrivals = workload.trace;
            break;
        }
    }
    return arrivals;
}

namespace {

double request_rate_hint(const Workload& workload, std::size_t arrival_count) {
    if (workload.arrival_kind == ArrivalKind::Trace) {
        return static_cast<double>(arrival_count) / workload.horizon_s;
    }
    return workload.rate_per_s;
}

// Single-run state: battery bookkeeping plus the recorded series/log.
class SimulationRun {
public:
    SimulationRun(const ProfileSet& profiles, std::string_view task,
                  AcceleratorKind accelerator, const BatteryState& battery0,
                  const Policy& policy, const Workload& workload, const SimOptions& options)
        : profiles_(profiles),
          accelerator_(accelerator),
          battery0_(battery0),
          workload_(workload),
          options_(options) {
        if (battery0.remaining_mah <= 0) {
            throw Error(ErrorCode::InfeasibleScenario, "initial battery charge is empty");
        }
        if (battery0.remaining_mah > battery0.design_capacity_mah) {
            throw Error(ErrorCode::ValidationError,
                        "remaining_mah exceeds design_capacity_mah");
        }
        if (!(battery0.voltage_v > 0)) {
            throw Error(ErrorCode::ValidationError, "battery voltage_v must be > 0");
        }

        result_.policy = policy;
        arrivals_ = generate_arrivals(workload);
        rate_hint_ = request_rate_hint(workload, arrivals_.size());

        if (policy.kind == Policy::Kind::Eamcr) {
            EngineConfig config = policy.engine;
            config.accelerator = accelerator;
            engine_.emplace(std::move(config), profiles, task,
                            battery0.design_capacity_mah);
        } else {
            auto pool = candidates(profiles, task, accelerator);
            auto it = std::find_if(pool.begin(), pool.end(), [&](const ModelProfile& m) {
                return m.name == policy.model_name;
            });
            if (it == pool.end()) {
                throw Error(ErrorCode::NoCandidates,
                            "model \"" + policy.model_name + "\" has no " +
                                std::string(accelerator_name(accelerator)) +
                                " runtime for task \"" + std::string(task) + "\"");
            }
            fixed_model_ = *it;
        }
    }

    SimResult run() {
        remaining_ = battery0_.remaining_mah;
        if (options_.noise) {
            noise_gen_.emplace(splitmix64(workload_.seed ^ 0x6E6F697365ULL));
        }

        decide(0.0, -1);
        sample(0.0);

        std::uint64_t sum_count = 0;
        double sum_dlei = 0.0;
        bool stopped = false;

        for (std::size_t k = 0; k < arrivals_.size(); ++k) {
            double t = arrivals_[k];
            if (!advance_idle(t)) {
                stopped = true;
                break;
            }
            decide(t, static_cast<std::int64_t>(k));

            const RuntimeProfile& rt = *current_model_->runtime(accelerator_);
            double factor = noise_gen_ ? 0.95 + 0.1 * uniform01(*noise_gen_) : 1.0;
            double latency_ms = rt.latency_ms * factor;
            double energy_mj = rt.power_mw * latency_ms / 1000.0;
            double drain_mah = mj_to_mah(energy_mj, battery0_.voltage_v);

            if (remaining_ < drain_mah - kExhaustedEpsilonMah) {
                // Not enough charge to complete another inference: the run
                // ends here, nothing is served or drained.
                sample(t);
                finish(t, true);
                stopped = true;
                break;
            }

            remaining_ = std::max(0.0, remaining_ - drain_mah);

            InferenceOutcome outcome;
            outcome.model_name = current_model_->name;
            outcome.accelerator = accelerator_;
            outcome.latency_ms = latency_ms;
            outcome.energy_mj = energy_mj;
            outcome.drain_mah = drain_mah;
            outcome.timestamp_s = t;

            result_.inference_count += 1;
            result_.utility += current_model_->accuracy;
            sum_dlei += dlei(current_model_->accuracy, energy_mj);
            sum_count += 1;
            if (engine_) engine_->record_feedback(outcome);
            result_.outcomes.push_back(std::move(outcome));

            sample(t);
            if (remaining_ <= kExhaustedEpsilonMah) {
                finish(t, true);
                stopped = true;
                break;
            }
        }

        if (!stopped) {
            if (advance_idle(workload_.horizon_s)) {
                sample(workload_.horizon_s);
                finish(workload_.horizon_s, false);
            }
        }

        result_.mean_dlei = sum_count > 0 ? sum_dlei / static_cast<double>(sum_count) : 0.0;
        result_.final_remaining_mah = remaining_;
        if (engine_) result_.warnings = engine_->warnings();
        return std::move(result_);
    }

private:
    void decide(double t, std::int64_t arrival_index) {
        Decision d;
        if (engine_) {
            BatteryState battery = battery0_;
            battery.remaining_mah = remaining_;
            engine_->observe_battery(battery);
            d = engine_->select_model(battery, rate_hint_);
            current_model_ = &*std::find_if(
                engine_->candidate_pool().begin(), engine_->candidate_pool().end(),
                [&](const ModelProfile& m) { return m.name == d.model_name; });
        } else {
            current_model_ = &*fixed_model_;
            d.model_name = fixed_model_->name;
            d.accelerator = accelerator_;
            d.mode = EngineMode::OpenAccess;
            d.rationale = DecisionRationale::UserChoice;
            const RuntimeProfile& rt = *fixed_model_->runtime(accelerator_);
            EffectiveLoad load = effective_load(rt, profiles_.idle_ma, rate_hint_);
            d.estimated_usage_h = load.effective_discharge_ma > 0
                                      ? remaining_ / load.effective_discharge_ma
                                      : std::numeric_limits<double>::infinity();
        }
        const std::vector<LoggedDecision>& log = result_.decision_log;
        if (log.empty() || log.back().decision.model_name != d.model_name ||
            log.back().decision.mode != d.mode) {
            result_.decision_log.push_back({t, arrival_index, std::move(d)});
        }
    }

    // Integrates idle drain from the last event up to t_target, emitting
    // minute samples along the way. Returns false when the battery dies
    // before t_target (the run is finalized at the death time).
    bool advance_idle(double t_target) {
        double idle_ma = profiles_.idle_ma;
        double dt_h = (t_target - t_prev_) / kSecondsPerHour;
        double needed = idle_ma * dt_h;

        if (idle_ma > 0 && needed >= remaining_ - kExhaustedEpsilonMah) {
            double t_death = t_prev_ + remaining_ / idle_ma * kSecondsPerHour;
            emit_minutes(t_death, idle_ma);
            result_.total_idle_drain_mah += remaining_;
            remaining_ = 0.0;
            sample(t_death);
            finish(t_death, true);
            return false;
        }

        emit_minutes(t_target, idle_ma);
        result_.total_idle_drain_mah += needed;
        remaining_ -= needed;
        t_prev_ = t_target;
        return true;
    }

    void emit_minutes(double t_until, double idle_ma) {
        while (next_minute_ < t_until) {
            double drained = idle_ma * (next_minute_ - t_prev_) / kSecondsPerHour;
            result_.energy_series.push_back(
                {next_minute_, std::max(0.0, remaining_ - drained), current_model_->name});
            next_minute_ += kSeriesSampleIntervalS;
        }
    }

    void sample(double t) {
        result_.energy_series.push_back({t, remaining_, current_model_->name});
        if (next_minute_ <= t) {
            next_minute_ = (std::floor(t / kSeriesSampleIntervalS) + 1.0) *
                           kSeriesSampleIntervalS;
        }
    }

    void finish(double t, bool exhausted) {
        result_.operating_time_s = t;
        result_.exhausted = exhausted;
        t_prev_ = t;
    }

    const ProfileSet& profiles_;
    AcceleratorKind accelerator_;
    BatteryState battery0_;
    Workload workload_;
    SimOptions options_;

    std::vector<double> arrivals_;
    double rate_hint_ = 0.0;
    std::optional<DecisionEngine> engine_;
    std::optional<ModelProfile> fixed_model_;
    const ModelProfile* current_model_ = nullptr;
    std::optional<std::mt19937_64> noise_gen_;

    double remaining_ = 0.0;
    double t_prev_ = 0.0;
    double next_minute_ = kSeriesSampleIntervalS;
    SimResult result_;
};

}  // namespace

SimResult run_simulation(const ProfileSet& profiles, std::string_view task,
                         AcceleratorKind accelerator, const BatteryState& battery0,
                         const Policy& policy, const Workload& workload,
                         const SimOptions& options) {
    SimulationRun run(profiles, task, accelerator, battery0, policy, workload, options);
    return run.run();
}

ComparisonReport compare_policies(const ProfileSet& profiles, std::string_view task,
                                  AcceleratorKind accelerator, const BatteryState& battery0,
                                  const std::vector<Policy>& policies, const Workload& workload,
                                  const SimOptions& options, std::string_view scenario_id) {
    if (policies.size() < 2) {
        throw Error(ErrorCode::UsageError, "policy comparison requires at least 2 policies");
    }
    ComparisonReport report;
    report.scenario_id = scenario_id;

    double fixed_sum = 0.0;
    std::size_t fixed_count = 0;
    for (const Policy& policy : policies) {
        SimResult result =
            run_simulation(profiles, task, accelerator, battery0, policy, workload, options);
        if (policy.kind == Policy::Kind::Fixed) {
            fixed_sum += result.operating_time_s;
            fixed_count += 1;
        }
        report.summary.push_back({policy.label(), result.operating_time_s,
                                  result.inference_count, result.utility, result.mean_dlei});
        report.results.push_back(std::move(result));
    }
    report.mean_fixed_operating_time_s =
        fixed_count > 0 ? fixed_sum / static_cast<double>(fixed_count) : 0.0;
    return report;
}

namespace {

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : object.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* key) { return item.key() == key; });
        if (!known) {
            throw Error(ErrorCode::ParseError, where + ": unknown key \"" + item.key() + "\"");
        }
    }
}

const json& require(const json& object, const char* key, const std::string& where) {
    auto it = object.find(key);
    if (it == object.end()) {
        throw Error(ErrorCode::ParseError, where + ": missing key \"" + key + "\"");
    }
    return *it;
}

double number_at(const json& object, const char* key, const std::string& where) {
    const json& value = require(object, key, where);
    if (!value.is_number()) {
        throw Error(ErrorCode::ParseError, where + "." + key + ": expected a number");
    }
    return value.get<double>();
}

std::string string_at(const json& object, const char* key, const std::string& where) {
    const json& value = require(object, key, where);
    if (!value.is_string()) {
        throw Error(ErrorCode::ParseError, where + "." + key + ": expected a string");
    }
    return value.get<std::string>();
}

EngineConfig parse_engine_config(const json& node) {
    reject_unknown_keys(node,
                        {"threshold_mah", "accuracy_region", "planned_hours",
                         "feedback_alpha", "user_model_choice", "active_only_discharge"},
                        "engine");
    EngineConfig config;
    config.threshold_mah = number_at(node, "threshold_mah", "engine");
    config.planned_hours = number_at(node, "planned_hours", "engine");
    if (node.contains("active_only_discharge")) {
        const json& flag = node["active_only_discharge"];
        if (!flag.is_boolean()) {
            throw Error(ErrorCode::ParseError,
                        "engine.active_only_discharge: expected a boolean");
        }
        config.active_only_discharge = flag.get<bool>();
    }
    if (node.contains("accuracy_region")) {
        const json& region = node["accuracy_region"];
        if (!region.is_array() || region.size() != 2 || !region[0].is_number() ||
            !region[1].is_number()) {
            throw Error(ErrorCode::ParseError,
                        "engine.accuracy_region: expected [lo, hi] numbers");
        }
        config.accuracy_region = {region[0].get<double>(), region[1].get<double>()};
    }
    if (node.contains("feedback_alpha")) {
        config.feedback_alpha = number_at(node, "feedback_alpha", "engine");
    }
    if (node.contains("user_model_choice")) {
        config.user_model_choice = string_at(node, "user_model_choice", "engine");
    }
    return config;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("scenario file: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, "scenario file: top level must be an object");
    }
    reject_unknown_keys(doc,
                        {"scenario_id", "task", "accelerator", "battery", "workload",
                         "policies", "engine", "noise"},
                        "scenario file");

    Scenario scenario;
    if (doc.contains("scenario_id")) {
        scenario.scenario_id = string_at(doc, "scenario_id", "scenario file");
    }
    scenario.task = string_at(doc, "task", "scenario file");
    scenario.accelerator =
        parse_accelerator(string_at(doc, "accelerator", "scenario file"));

    const json& battery = require(doc, "battery", "scenario file");
    reject_unknown_keys(battery, {"design_capacity_mah", "remaining_mah", "voltage_v"},
                        "battery");
    scenario.battery.design_capacity_mah =
        number_at(battery, "design_capacity_mah", "battery");
    scenario.battery.remaining_mah = number_at(battery, "remaining_mah", "battery");
    scenario.battery.voltage_v = number_at(battery, "voltage_v", "battery");

    const json& workload = require(doc, "workload", "scenario file");
    reject_unknown_keys(workload, {"arrival_kind", "rate_per_s", "trace", "horizon_s", "seed"},
                        "workload");
    std::string kind = string_at(workload, "arrival_kind", "workload");
    if (kind == "FIXED_RATE") {
        scenario.workload.arrival_kind = ArrivalKind::FixedRate;
    } else if (kind == "POISSON") {
        scenario.workload.arrival_kind = ArrivalKind::Poisson;
    } else if (kind == "TRACE") {
        scenario.workload.arrival_kind = ArrivalKind::Trace;
    } else {
        throw Error(ErrorCode::ValidationError,
                    "workload.arrival_kind: unknown kind \"" + kind + "\"");
    }
    if (workload.contains("rate_per_s")) {
        scenario.workload.rate_per_s = number_at(workload, "rate_per_s", "workload");
    } else if (scenario.workload.arrival_kind != ArrivalKind::Trace) {
        throw Error(ErrorCode::ParseError, "workload: missing key \"rate_per_s\"");
    }
    if (workload.contains("trace")) {
        const json& trace = workload["trace"];
        if (!trace.is_array()) {
            throw Error(ErrorCode::ParseError, "workload.trace: expected an array");
        }
        for (const json& t : trace) {
            if (!t.is_number()) {
                throw Error(ErrorCode::ParseError, "workload.trace: expected numbers");
            }
            scenario.workload.trace.push_back(t.get<double>());
        }
    } else if (scenario.workload.arrival_kind == ArrivalKind::Trace) {
        throw Error(ErrorCode::ParseError, "workload: missing key \"trace\"");
    }
    if (workload.contains("horizon_s")) {
        scenario.workload.horizon_s = number_at(workload, "horizon_s", "workload");
    } else {
        scenario.workload.horizon_s = 43200.0;  // 12 simulated hours
    }
    if (workload.contains("seed")) {
        const json& seed = workload["seed"];
        if (!seed.is_number_unsigned()) {
            throw Error(ErrorCode::ParseError,
                        "workload.seed: expected an unsigned integer");
        }
        scenario.workload.seed = seed.get<std::uint64_t>();
    }

    if (doc.contains("noise")) {
        const json& noise = doc["noise"];
        if (!noise.is_boolean()) {
            throw Error(ErrorCode::ParseError, "scenario file.noise: expected a boolean");
        }
        scenario.options.noise = noise.get<bool>();
    }

    const json& policies = require(doc, "policies", "scenario file");
    if (!policies.is_array() || policies.empty()) {
        throw Error(ErrorCode::ValidationError,
                    "scenario file.policies: expected a non-empty array");
    }
    bool needs_engine = false;
    for (std::size_t i = 0; i < policies.size(); ++i) {
        const json& p = policies[i];
        std::string where = "policies[" + std::to_string(i) + "]";
        if (!p.is_object()) {
            throw Error(ErrorCode::ParseError, where + ": expected an object");
        }
        reject_unknown_keys(p, {"kind", "model"}, where);
        std::string pkind = string_at(p, "kind", where);
        if (pkind == "FIXED") {
            scenario.policies.push_back(Policy::fixed(string_at(p, "model", where)));
        } else if (pkind == "EAMCR") {
            needs_engine = true;
            scenario.policies.push_back(Policy::eamcr({}));
        } else {
            throw Error(ErrorCode::ValidationError,
                        where + ".kind: unknown policy kind \"" + pkind + "\"");
        }
    }
    if (needs_engine) {
        EngineConfig config = parse_engine_config(require(doc, "engine", "scenario file"));
        config.accelerator = scenario.accelerator;
        for (Policy& p : scenario.policies) {
            if (p.kind == Policy::Kind::Eamcr) p.engine = config;
        }
    }
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open scenario file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "error reading scenario file: " + path);
    }
    return parse_scenario_text(buffer.str());
}

}  // namespace eamcr
