#ifndef EAMCR_ENERGY_HPP
#define EAMCR_ENERGY_HPP

#include <cstdint>
#include <string>

#include "eamcr/profiles.hpp"

namespace eamcr {

// 1 mWh = 3600 mJ; 1 mAh at nominal voltage V = 3600 * V mJ.
inline constexpr double kMjPerMwh = 3600.0;

// Below this the battery cannot power anything measurable; used as the
// exhaustion cutoff so exact-arithmetic sizing survives float rounding.
inline constexpr double kExhaustedEpsilonMah = 1e-9;

struct BatteryState {
    double design_capacity_mah = 0.0;
    double remaining_mah = 0.0;
    double voltage_v = 0.0;  // nominal, constant

    bool operator==(const BatteryState&) const = default;
};

// One synthesized (or measured) inference.
struct InferenceOutcome {
    std::string model_name;
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    double latency_ms = 0.0;
    double energy_mj = 0.0;   // actual energy demand of this inference
    double drain_mah = 0.0;   // charge taken from the battery
    double timestamp_s = 0.0;
};

// Workload-averaged current draw for one runtime under a request rate.
struct EffectiveLoad {
    double request_rate_per_s = 0.0;
    double duty_cycle = 0.0;              // fraction of wall time inferring
    double effective_discharge_ma = 0.0;  // idle + duty * (active - idle)
};

// power_mw * latency_ms / 1000, in millijoules.
double energy_per_inference(const RuntimeProfile& rt);

double mj_to_mwh(double energy_mj);

// Charge equivalent of `energy_mj` at nominal voltage. DomainError on
// non-positive voltage.
double mj_to_mah(double energy_mj, double voltage_v);

// Deep-learning efficiency index: accuracy per mWh. Higher is better.
// DomainError when energy_mj <= 0 or accuracy outside [0,1].
double dlei(double accuracy, double energy_mj);

// remaining_mah / effective_discharge_ma, in hours. DomainError when the
// effective discharge is not positive.
double estimated_usage_time_h(const BatteryState& battery, const EffectiveLoad& load);

struct DrainResult {
    BatteryState state;
    bool exhausted = false;  // floor was reached
};

// Coulomb-counting step: subtract drain_mah, floored at zero.
DrainResult apply_drain(const BatteryState& battery, double drain_mah);

EffectiveLoad effective_load(const RuntimeProfile& rt, double idle_ma,
                             double request_rate_per_s);

// Same computation from raw figures (used with feedback EMAs).
EffectiveLoad effective_load_from(double latency_ms, double discharge_ma,
                                  double idle_ma, double request_rate_per_s);

}  // namespace eamcr

#endif
