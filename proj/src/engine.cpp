#include "eamcr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace eamcr {

std::string_view mode_name(EngineMode mode) {
    switch (mode) {
        case EngineMode::OpenAccess: return "OPEN_ACCESS";
        case EngineMode::EnergyEfficient: return "ENERGY_EFFICIENT";
    }
    return "UNKNOWN";
}

std::string_view rationale_name(DecisionRationale rationale) {
    switch (rationale) {
        case DecisionRationale::UserChoice: return "USER_CHOICE";
        case DecisionRationale::AccuracyMaxFeasible: return "ACCURACY_MAX_FEASIBLE";
        case DecisionRationale::DleiFallback: return "DLEI_FALLBACK";
    }
    return "UNKNOWN";
}

namespace {

std::string num(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

}  // namespace

DecisionEngine::DecisionEngine(EngineConfig config, const ProfileSet& profiles,
                               std::string_view task, double design_capacity_mah)
    : config_(std::move(config)), task_(task), idle_ma_(profiles.idle_ma) {
    if (!(config_.threshold_mah > 0)) {
        throw Error(ErrorCode::ValidationError,
                    "threshold_mah " + num(config_.threshold_mah) + " must be > 0");
    }
    if (config_.threshold_mah > design_capacity_mah) {
        throw Error(ErrorCode::ValidationError,
                    "threshold_mah " + num(config_.threshold_mah) +
                        " exceeds design capacity " + num(design_capacity_mah) + " mAh");
    }
    const AccuracyRegion& region = config_.accuracy_region;
    if (!(region.lo <= region.hi) || region.lo < 0.0 || region.hi > 1.0) {
        throw Error(ErrorCode::ValidationError,
                    "accuracy_region [" + num(region.lo) + ", " + num(region.hi) +
                        "] must be a closed subinterval of [0, 1]");
    }
    if (!(config_.planned_hours > 0)) {
        throw Error(ErrorCode::ValidationError,
                    "planned_hours " + num(config_.planned_hours) + " must be > 0");
    }
    if (!(config_.feedback_alpha > 0.0 && config_.feedback_alpha <= 1.0)) {
        throw Error(ErrorCode::ValidationError,
                    "feedback_alpha " + num(config_.feedback_alpha) + " outside (0, 1]");
    }

    candidates_ = candidates(profiles, task_, config_.accelerator);
    if (candidates_.empty()) {
        throw Error(ErrorCode::NoCandidates,
                    "no model of task \"" + task_ + "\" runs on " +
                        std::string(accelerator_name(config_.accelerator)));
    }
    for (const ModelProfile& m : candidates_) {
        const RuntimeProfile& rt = *m.runtime(config_.accelerator);
        ModelStats stats;
        stats.model_name = m.name;
        stats.accelerator = config_.accelerator;
        stats.ema_latency_ms = rt.latency_ms;
        stats.ema_energy_mj = energy_per_inference(rt);
        stats.ema_discharge_ma = rt.discharge_ma;
        stats.observation_count = 0;
        stats_.emplace(m.name, std::move(stats));
    }
}

EngineMode DecisionEngine::observe_battery(const BatteryState& battery) {
    if (mode_ == EngineMode::OpenAccess &&
        battery.remaining_mah <= config_.threshold_mah) {
        mode_ = EngineMode::EnergyEfficient;
    }
    return mode_;
}

EngineMode DecisionEngine::reset_on_recharge(const BatteryState& battery) {
    if (battery.remaining_mah > config_.threshold_mah) {
        mode_ = EngineMode::OpenAccess;
    }
    return mode_;
}

const ModelStats& DecisionEngine::stats(std::string_view model_name) const {
    auto it = stats_.find(model_name);
    if (it == stats_.end()) {
        throw Error(ErrorCode::UnknownModel,
                    "model \"" + std::string(model_name) + "\" is not in the candidate pool");
    }
    return it->second;
}

double DecisionEngine::usage_time_h(const ModelStats& stats, const BatteryState& battery,
                                    double request_rate_per_s) const {
    EffectiveLoad load;
    if (config_.active_only_discharge) {
        load.request_rate_per_s = request_rate_per_s;
        load.duty_cycle = 1.0;
        load.effective_discharge_ma = stats.ema_discharge_ma;
    } else {
        load = effective_load_from(stats.ema_latency_ms, stats.ema_discharge_ma, idle_ma_,
                                   request_rate_per_s);
    }
    if (!(load.effective_discharge_ma > 0)) {
        return std::numeric_limits<double>::infinity();
    }
    return estimated_usage_time_h(battery, load);
}

Decision DecisionEngine::make_decision(const ModelProfile& model, DecisionRationale rationale,
                                       const BatteryState& battery,
                                       double request_rate_per_s) const {
    Decision d;
    d.model_name = model.name;
    d.accelerator = config_.accelerator;
    d.mode = mode_;
    d.rationale = rationale;
    d.estimated_usage_h = usage_time_h(stats(model.name), battery, request_rate_per_s);
    return d;
}

Decision DecisionEngine::select_model(const BatteryState& battery,
                                      double request_rate_per_s) {
    if (candidates_.empty()) {
        throw Error(ErrorCode::NoCandidates, "candidate pool is empty");
    }

    if (mode_ == EngineMode::OpenAccess) {
        if (config_.user_model_choice) {
            auto it = std::find_if(candidates_.begin(), candidates_.end(),
                                   [&](const ModelProfile& m) {
                                       return m.name == *config_.user_model_choice;
                                   });
            if (it != candidates_.end()) {
                return make_decision(*it, DecisionRationale::UserChoice, battery,
                                     request_rate_per_s);
            }
        }
        return make_decision(candidates_.front(), DecisionRationale::AccuracyMaxFeasible,
                             battery, request_rate_per_s);
    }

    // Energy-efficient mode. Candidates are already accuracy-descending, so
    // the first feasible one is the accuracy maximum over the feasible set.
    std::vector<const ModelProfile*> pool;
    for (const ModelProfile& m : candidates_) {
        if (config_.accuracy_region.contains(m.accuracy)) pool.push_back(&m);
    }
    if (pool.empty()) {
        // The pool is static, so this condition never clears; warn once.
        if (!region_relaxed_) {
            region_relaxed_ = true;
            warnings_.push_back("accuracy region [" + num(config_.accuracy_region.lo) +
                                ", " + num(config_.accuracy_region.hi) +
                                "] excludes every candidate of task \"" + task_ +
                                "\"; relaxed to [0, 1]");
        }
        for (const ModelProfile& m : candidates_) pool.push_back(&m);
    }

    for (const ModelProfile* m : pool) {
        if (usage_time_h(stats(m->name), battery, request_rate_per_s) >=
            config_.planned_hours) {
            return make_decision(*m, DecisionRationale::AccuracyMaxFeasible, battery,
                                 request_rate_per_s);
        }
    }

    const ModelProfile* best = nullptr;
    double best_dlei = -1.0;
    for (const ModelProfile* m : pool) {
        double value = dlei(m->accuracy, stats(m->name).ema_energy_mj);
        bool better = value > best_dlei;
        if (value == best_dlei && best != nullptr) {
            better = m->accuracy > best->accuracy ||
                     (m->accuracy == best->accuracy && m->name < best->name);
        }
        if (best == nullptr || better) {
            best = m;
            best_dlei = value;
        }
    }
    return make_decision(*best, DecisionRationale::DleiFallback, battery, request_rate_per_s);
}

const ModelStats& DecisionEngine::record_feedback(const InferenceOutcome& outcome) {
    if (outcome.accelerator != config_.accelerator) {
        throw Error(ErrorCode::UnknownModel,
                    "outcome accelerator " + std::string(accelerator_name(outcome.accelerator)) +
                        " does not match engine accelerator " +
                        std::string(accelerator_name(config_.accelerator)));
    }
    auto it = stats_.find(outcome.model_name);
    if (it == stats_.end()) {
        throw Error(ErrorCode::UnknownModel,
                    "model \"" + outcome.model_name + "\" is not in the candidate pool");
    }
    if (!(outcome.latency_ms > 0) || !(outcome.energy_mj > 0) || !(outcome.drain_mah > 0)) {
        throw Error(ErrorCode::DomainError, "inference outcome must have positive "
                                            "latency, energy and drain");
    }

    // Observed average current over the inference window: drain over
    // latency expressed in hours.
    double observed_discharge_ma = outcome.drain_mah * 3.6e6 / outcome.latency_ms;

    ModelStats& stats = it->second;
    double a = config_.feedback_alpha;
    stats.ema_latency_ms = (1.0 - a) * stats.ema_latency_ms + a * outcome.latency_ms;
    stats.ema_energy_mj = (1.0 - a) * stats.ema_energy_mj + a * outcome.energy_mj;
    stats.ema_discharge_ma = (1.0 - a) * stats.ema_discharge_ma + a * observed_discharge_ma;
    stats.observation_count += 1;
    return stats;
}

}  // namespace eamcr
