#ifndef EAMCR_PROFILES_HPP
#define EAMCR_PROFILES_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eamcr/errors.hpp"

namespace eamcr {

enum class AcceleratorKind {
    CpuSingle,  // single-threaded CPU
    CpuMulti,   // multi-threaded CPU
    Gpu,
    Nnapi,
};

// Wire names: CPU_SINGLE, CPU_MULTI, GPU, NNAPI. Anything else fails.
AcceleratorKind parse_accelerator(std::string_view name);
std::string_view accelerator_name(AcceleratorKind kind);

// Measured per-accelerator runtime characteristics of one model.
struct RuntimeProfile {
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    double latency_ms = 0.0;    // per-inference wall time
    double power_mw = 0.0;      // average active power
    double discharge_ma = 0.0;  // active current draw

    bool operator==(const RuntimeProfile&) const = default;
};

struct ModelProfile {
    std::string name;
    std::string task;           // e.g. eardrum, fingernail, skin-lesion
    double accuracy = 0.0;      // in [0,1]
    double model_size_mb = 0.0;
    std::map<AcceleratorKind, RuntimeProfile> runtimes;

    bool operator==(const ModelProfile&) const = default;

    // nullptr when the model has no profile for the accelerator.
    const RuntimeProfile* runtime(AcceleratorKind kind) const;
};

// One device's measured corpus. Immutable after load; safe to share
// across concurrent readers.
struct ProfileSet {
    std::string device_name;
    double voltage_v = 0.0;  // nominal battery voltage, constant
    double idle_ma = 0.0;    // background draw between inferences
    std::vector<ModelProfile> models;

    bool operator==(const ProfileSet&) const = default;
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string field;  // dotted path, e.g. "models[2].accuracy"
    std::string message;
};

// Relative tolerance for the discharge-vs-power/voltage cross-check.
// Measured current may legitimately disagree with nominal voltage, so a
// mismatch is a warning, not an error.
inline constexpr double kDischargeConsistencyTolerance = 0.05;

// Parses the profile JSON document (schema in the README). Structural
// problems (bad JSON, wrong types, unknown keys) raise ParseError;
// unrepresentable values (bad accelerator token, duplicate accelerator
// rows) raise ValidationError. Value-range checks are validate_profiles'.
ProfileSet parse_profiles_text(const std::string& text);

// File variant of parse_profiles_text. Raises IoError / ParseError.
ProfileSet parse_profiles_file(const std::string& path);

// Reads, parses, and validates. Raises IoError / ParseError /
// ValidationError (first error diagnostic, naming field and value).
ProfileSet load_profiles(const std::string& path);

// Returns every diagnostic, hard errors and warnings, in document order.
// Empty result means every invariant holds.
std::vector<Diagnostic> validate_profiles(const ProfileSet& set);

// Canonical JSON in the same schema load_profiles accepts.
std::string serialize_profiles(const ProfileSet& set);

// Models of `task` runnable on `accelerator`, ordered by descending
// accuracy, ties by ascending per-inference energy, then name.
// Raises UnknownTask when no model carries the task at all.
std::vector<ModelProfile> candidates(const ProfileSet& set, std::string_view task,
                                     AcceleratorKind accelerator);

}  // namespace eamcr

#endif
