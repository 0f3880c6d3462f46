#include "eamcr/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace eamcr {

using nlohmann::json;

std::string format_number(double value) {
    if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 6);
    return std::string(buf, end);
}

namespace {

// Fixed two decimals for SVG coordinates; locale-free.
std::string coord(double value) {
    char buf[64];
    auto [end, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 2);
    return std::string(buf, end);
}

json number_or_null(double value) {
    if (!std::isfinite(value)) return nullptr;
    return value;
}

json decision_json(const LoggedDecision& logged) {
    return {{"timestamp_s", logged.timestamp_s},
            {"arrival_index", logged.arrival_index},
            {"model", logged.decision.model_name},
            {"accelerator", std::string(accelerator_name(logged.decision.accelerator))},
            {"mode", std::string(mode_name(logged.decision.mode))},
            {"rationale", std::string(rationale_name(logged.decision.rationale))},
            {"estimated_usage_h", number_or_null(logged.decision.estimated_usage_h)}};
}

json policy_json(const Policy& policy) {
    json out = {{"kind", policy.kind == Policy::Kind::Fixed ? "FIXED" : "EAMCR"}};
    if (policy.kind == Policy::Kind::Fixed) out["model"] = policy.model_name;
    return out;
}

json result_body_json(const SimResult& result) {
    json decisions = json::array();
    for (const LoggedDecision& d : result.decision_log) decisions.push_back(decision_json(d));
    return {{"policy", policy_json(result.policy)},
            {"label", result.policy.label()},
            {"operating_time_s", result.operating_time_s},
            {"inference_count", result.inference_count},
            {"utility", result.utility},
            {"mean_dlei", result.mean_dlei},
            {"exhausted", result.exhausted},
            {"final_remaining_mah", result.final_remaining_mah},
            {"total_idle_drain_mah", result.total_idle_drain_mah},
            {"series_points", result.energy_series.size()},
            {"warnings", result.warnings},
            {"decisions", std::move(decisions)}};
}

}  // namespace

std::string diagnostics_text(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream out;
    for (const Diagnostic& d : diagnostics) {
        out << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.field
            << ": " << d.message << "\n";
    }
    return out.str();
}

std::string dlei_table_csv(const std::vector<DleiRow>& rows) {
    std::string out = "model,accelerator,accuracy,mean_energy_mwh,dlei\n";
    for (const DleiRow& row : rows) {
        out += row.model_name;
        out += ',';
        out += accelerator_name(row.accelerator);
        out += ',';
        out += format_number(row.accuracy);
        out += ',';
        out += format_number(row.mean_energy_mwh);
        out += ',';
        out += format_number(row.dlei);
        out += '\n';
    }
    return out;
}

std::string energy_series_csv(const SimResult& result) {
    std::string out = "timestamp_s,remaining_mah,active_model\n";
    for (const SeriesPoint& p : result.energy_series) {
        out += format_number(p.timestamp_s);
        out += ',';
        out += format_number(p.remaining_mah);
        out += ',';
        out += p.model_name;
        out += '\n';
    }
    return out;
}

std::string sim_result_json(const SimResult& result) {
    return result_body_json(result).dump(2) + "\n";
}

std::string comparison_json(const ComparisonReport& report) {
    json results = json::array();
    for (const SimResult& r : report.results) results.push_back(result_body_json(r));
    json summary = json::array();
    for (const PolicySummary& s : report.summary) {
        summary.push_back({{"policy", s.label},
                           {"operating_time_s", s.operating_time_s},
                           {"inference_count", s.inference_count},
                           {"utility", s.utility},
                           {"mean_dlei", s.mean_dlei}});
    }
    json doc = {{"scenario_id", report.scenario_id},
                {"mean_fixed_operating_time_s", report.mean_fixed_operating_time_s},
                {"summary", std::move(summary)},
                {"results", std::move(results)}};
    return doc.dump(2) + "\n";
}

std::string comparison_summary_csv(const ComparisonReport& report) {
    std::string out = "policy,operating_time_s,inference_count,utility,mean_dlei\n";
    for (const PolicySummary& s : report.summary) {
        out += s.label;
        out += ',';
        out += format_number(s.operating_time_s);
        out += ',';
        out += std::to_string(s.inference_count);
        out += ',';
        out += format_number(s.utility);
        out += ',';
        out += format_number(s.mean_dlei);
        out += '\n';
    }
    return out;
}

namespace {

constexpr double kSvgWidth = 960.0;
constexpr double kSvgHeight = 540.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 180.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;
constexpr std::size_t kMaxCurvePoints = 600;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct ChartScale {
    double t_max = 1.0;
    double y_max = 1.0;

    double x(double t) const {
        return kMarginLeft + (kSvgWidth - kMarginLeft - kMarginRight) * (t / t_max);
    }
    double y(double v) const {
        return kSvgHeight - kMarginBottom -
               (kSvgHeight - kMarginTop - kMarginBottom) * (v / y_max);
    }
};

std::vector<const SeriesPoint*> downsample(const std::vector<SeriesPoint>& series) {
    std::vector<const SeriesPoint*> points;
    if (series.empty()) return points;
    std::size_t stride = (series.size() + kMaxCurvePoints - 1) / kMaxCurvePoints;
    for (std::size_t i = 0; i < series.size(); i += stride) points.push_back(&series[i]);
    if (points.back() != &series.back()) points.push_back(&series.back());
    return points;
}

void append_axes(std::string& svg, const ChartScale& scale, const std::string& title) {
    svg += "<rect width=\"" + coord(kSvgWidth) + "\" height=\"" + coord(kSvgHeight) +
           "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + coord(kSvgWidth / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" +
           title + "</text>\n";

    double x0 = kMarginLeft;
    double x1 = kSvgWidth - kMarginRight;
    double y0 = kSvgHeight - kMarginBottom;
    double y1 = kMarginTop;
    svg += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" + coord(x1) +
           "\" y2=\"" + coord(y0) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" + coord(x0) +
           "\" y2=\"" + coord(y1) + "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 6; ++i) {
        double t = scale.t_max * i / 6.0;
        double x = scale.x(t);
        svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(y0) + "\" x2=\"" + coord(x) +
               "\" y2=\"" + coord(y0 + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(y0 + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_number(t) + "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        double v = scale.y_max * i / 5.0;
        double y = scale.y(v);
        svg += "<line x1=\"" + coord(x0 - 5) + "\" y1=\"" + coord(y) + "\" x2=\"" +
               coord(x0) + "\" y2=\"" + coord(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + coord(x0 - 9) + "\" y=\"" + coord(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_number(v) + "</text>\n";
    }
    svg += "<text x=\"" + coord((x0 + x1) / 2) + "\" y=\"" + coord(kSvgHeight - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">time "
           "(s)</text>\n";
    svg += "<text x=\"18\" y=\"" + coord((y0 + y1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 18 " +
           coord((y0 + y1) / 2) + ")\">remaining capacity (mAh)</text>\n";
}

void append_curve(std::string& svg, const ChartScale& scale,
                  const std::vector<SeriesPoint>& series, const char* color) {
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"";
    for (const SeriesPoint* p : downsample(series)) {
        svg += coord(scale.x(p->timestamp_s));
        svg += ',';
        svg += coord(scale.y(p->remaining_mah));
        svg += ' ';
    }
    svg += "\"/>\n";
}

void append_legend_row(std::string& svg, std::size_t index, const std::string& label,
                       const char* color, bool dashed) {
    double y = kMarginTop + 14.0 + 18.0 * static_cast<double>(index);
    double x = kSvgWidth - kMarginRight + 14.0;
    svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(y - 4) + "\" x2=\"" +
           coord(x + 22) + "\" y2=\"" + coord(y - 4) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"";
    if (dashed) svg += " stroke-dasharray=\"6 4\"";
    svg += "/>\n<text x=\"" + coord(x + 28) + "\" y=\"" + coord(y) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
}

std::string chart(const std::vector<const SimResult*>& results, const std::string& title,
                  double mean_fixed_s, bool draw_mean) {
    ChartScale scale;
    for (const SimResult* r : results) {
        for (const SeriesPoint& p : r->energy_series) {
            scale.t_max = std::max(scale.t_max, p.timestamp_s);
            scale.y_max = std::max(scale.y_max, p.remaining_mah);
        }
    }
    if (draw_mean) scale.t_max = std::max(scale.t_max, mean_fixed_s);

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      coord(kSvgWidth) + "\" height=\"" + coord(kSvgHeight) +
                      "\" viewBox=\"0 0 " + coord(kSvgWidth) + " " + coord(kSvgHeight) +
                      "\">\n";
    append_axes(svg, scale, title);

    std::size_t palette_size = sizeof(kPalette) / sizeof(kPalette[0]);
    for (std::size_t i = 0; i < results.size(); ++i) {
        append_curve(svg, scale, results[i]->energy_series, kPalette[i % palette_size]);
        append_legend_row(svg, i, results[i]->policy.label(), kPalette[i % palette_size],
                          false);
    }
    if (draw_mean) {
        double x = scale.x(mean_fixed_s);
        svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(kSvgHeight - kMarginBottom) +
               "\" x2=\"" + coord(x) + "\" y2=\"" + coord(kMarginTop) +
               "\" stroke=\"#444444\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
        append_legend_row(svg, results.size(), "mean of FIXED", "#444444", true);
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

std::string sim_result_svg(const SimResult& result) {
    return chart({&result}, "Remaining capacity, " + result.policy.label(), 0.0, false);
}

std::string comparison_svg(const ComparisonReport& report) {
    std::vector<const SimResult*> results;
    results.reserve(report.results.size());
    for (const SimResult& r : report.results) results.push_back(&r);
    std::string title = report.scenario_id.empty()
                            ? std::string("Policy comparison")
                            : "Policy comparison, " + report.scenario_id;
    return chart(results, title, report.mean_fixed_operating_time_s, true);
}

}  // namespace eamcr
