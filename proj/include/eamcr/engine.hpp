#ifndef EAMCR_ENGINE_HPP
#define EAMCR_ENGINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eamcr/energy.hpp"
#include "eamcr/profiles.hpp"

namespace eamcr {

// Two operating modes: in open access the user (or the accuracy ranking)
// picks freely; once the battery falls to the configured threshold the
// engine latches into energy-efficient selection and stays there until an
// explicit recharge notification.
enum class EngineMode { OpenAccess, EnergyEfficient };

std::string_view mode_name(EngineMode mode);

struct AccuracyRegion {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double accuracy) const { return lo <= accuracy && accuracy <= hi; }
    bool operator==(const AccuracyRegion&) const = default;
};

struct EngineConfig {
    double threshold_mah = 0.0;       // switch point; inclusive (<= triggers)
    AccuracyRegion accuracy_region{};
    double planned_hours = 0.0;       // operation the user still needs
    double feedback_alpha = 0.2;      // EMA weight for feedback statistics
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    std::optional<std::string> user_model_choice;  // open-access pick
    // Sensitivity switch: base usage-time estimates on the raw active
    // current instead of the duty-cycle-weighted effective load.
    bool active_only_discharge = false;
};

// Per-model feedback statistics. EMAs start at the static profile values
// (count 0) so the first selection has something to reason with.
struct ModelStats {
    std::string model_name;
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    double ema_latency_ms = 0.0;
    double ema_energy_mj = 0.0;
    double ema_discharge_ma = 0.0;
    std::uint64_t observation_count = 0;
};

enum class DecisionRationale {
    UserChoice,
    AccuracyMaxFeasible,
    DleiFallback,
};

std::string_view rationale_name(DecisionRationale rationale);

struct Decision {
    std::string model_name;
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    EngineMode mode = EngineMode::OpenAccess;
    DecisionRationale rationale = DecisionRationale::AccuracyMaxFeasible;
    double estimated_usage_h = 0.0;  // +inf when effective discharge is zero
};

// Runtime model-selection engine. Single-owner mutation only: one engine
// instance must not be driven from multiple threads. Distinct instances
// are fully independent.
class DecisionEngine {
public:
    // Validates the config against the device (threshold within design
    // capacity) and resolves the candidate pool for (task, accelerator).
    // Raises ValidationError / UnknownTask / NoCandidates.
    DecisionEngine(EngineConfig config, const ProfileSet& profiles,
                   std::string_view task, double design_capacity_mah);

    // Latching threshold check: open access -> energy efficient when
    // remaining <= threshold. Never reverts on its own.
    EngineMode observe_battery(const BatteryState& battery);

    // Picks the model to serve the next inference. Open access honors the
    // user choice (when eligible) or the accuracy maximum; energy-efficient
    // mode takes the most accurate candidate, within the accuracy region,
    // whose estimated usage time covers planned_hours, and degrades to the
    // best EMA-DLEI candidate when none qualifies.
    Decision select_model(const BatteryState& battery, double request_rate_per_s);

    // EMA update from a completed inference. Raises UnknownModel for a
    // (model, accelerator) pair outside the candidate pool.
    const ModelStats& record_feedback(const InferenceOutcome& outcome);

    // Recharge notification: returns to open access when remaining rose
    // above the threshold. Feedback statistics are retained.
    EngineMode reset_on_recharge(const BatteryState& battery);

    EngineMode mode() const { return mode_; }
    const EngineConfig& config() const { return config_; }
    const std::string& task() const { return task_; }
    const std::vector<ModelProfile>& candidate_pool() const { return candidates_; }
    const ModelStats& stats(std::string_view model_name) const;

    // Notes emitted by select_model (e.g. accuracy region relaxed).
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    double usage_time_h(const ModelStats& stats, const BatteryState& battery,
                        double request_rate_per_s) const;
    Decision make_decision(const ModelProfile& model, DecisionRationale rationale,
                           const BatteryState& battery, double request_rate_per_s) const;

    EngineConfig config_;
    std::string task_;
    double idle_ma_ = 0.0;
    EngineMode mode_ = EngineMode::OpenAccess;
    bool region_relaxed_ = false;
    std::vector<ModelProfile> candidates_;  // accuracy-descending order
    std::map<std::string, ModelStats, std::less<>> stats_;
    std::vector<std::string> warnings_;
};

}  // namespace eamcr

#endif
