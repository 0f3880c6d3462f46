#include "eamcr/energy.hpp"

#include <algorithm>
#include <sstream>

namespace eamcr {

namespace {

std::string num(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

}  // namespace

double energy_per_inference(const RuntimeProfile& rt) {
    return rt.power_mw * rt.latency_ms / 1000.0;
}

double mj_to_mwh(double energy_mj) { return energy_mj / kMjPerMwh; }

double mj_to_mah(double energy_mj, double voltage_v) {
    if (!(voltage_v > 0)) {
        throw Error(ErrorCode::DomainError, "voltage " + num(voltage_v) + " must be > 0");
    }
    return energy_mj / (kMjPerMwh * voltage_v);
}

double dlei(double accuracy, double energy_mj) {
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
        throw Error(ErrorCode::DomainError, "accuracy " + num(accuracy) + " outside [0, 1]");
    }
    if (!(energy_mj > 0)) {
        throw Error(ErrorCode::DomainError, "energy " + num(energy_mj) + " mJ must be > 0");
    }
    return accuracy / mj_to_mwh(energy_mj);
}

double estimated_usage_time_h(const BatteryState& battery, const EffectiveLoad& load) {
    if (!(load.effective_discharge_ma > 0)) {
        throw Error(ErrorCode::DomainError, "effective discharge " +
                                                num(load.effective_discharge_ma) +
                                                " mA must be > 0");
    }
    return battery.remaining_mah / load.effective_discharge_ma;
}

DrainResult apply_drain(const BatteryState& battery, double drain_mah) {
    if (drain_mah < 0) {
        throw Error(ErrorCode::DomainError, "drain " + num(drain_mah) + " mAh must be >= 0");
    }
    double left = battery.remaining_mah - drain_mah;
    DrainResult result;
    result.state = battery;
    result.state.remaining_mah = std::max(0.0, left);
    result.exhausted = left <= kExhaustedEpsilonMah;
    return result;
}

EffectiveLoad effective_load_from(double latency_ms, double discharge_ma, double idle_ma,
                                  double request_rate_per_s) {
    EffectiveLoad load;
    load.request_rate_per_s = request_rate_per_s;
    load.duty_cycle = std::min(1.0, request_rate_per_s * latency_ms / 1000.0);
    load.effective_discharge_ma =
        std::max(idle_ma, idle_ma + load.duty_cycle * (discharge_ma - idle_ma));
    return load;
}

EffectiveLoad effective_load(const RuntimeProfile& rt, double idle_ma,
                             double request_rate_per_s) {
    return effective_load_from(rt.latency_ms, rt.discharge_ma, idle_ma, request_rate_per_s);
}

}  // namespace eamcr
