#ifndef EAMCR_REPORT_HPP
#define EAMCR_REPORT_HPP

#include <string>
#include <vector>

#include "eamcr/metrics.hpp"
#include "eamcr/profiles.hpp"
#include "eamcr/sim.hpp"

namespace eamcr {

// Locale-independent, at most 6 significant digits, '.' decimal point.
std::string format_number(double value);

std::string diagnostics_text(const std::vector<Diagnostic>& diagnostics);

// header: model,accelerator,accuracy,mean_energy_mwh,dlei
std::string dlei_table_csv(const std::vector<DleiRow>& rows);

// header: timestamp_s,remaining_mah,active_model
std::string energy_series_csv(const SimResult& result);

std::string sim_result_json(const SimResult& result);
std::string sim_result_svg(const SimResult& result);

std::string comparison_json(const ComparisonReport& report);
// header: policy,operating_time_s,inference_count,utility,mean_dlei
std::string comparison_summary_csv(const ComparisonReport& report);
std::string comparison_svg(const ComparisonReport& report);

}  // namespace eamcr

#endif
