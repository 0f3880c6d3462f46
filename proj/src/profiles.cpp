#include "eamcr/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eamcr/energy.hpp"

namespace eamcr {

using nlohmann::json;

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return "io";
        case ErrorCode::ParseError: return "parse";
        case ErrorCode::ValidationError: return "validation";
        case ErrorCode::DomainError: return "domain";
        case ErrorCode::UnknownTask: return "unknown-task";
        case ErrorCode::NoCandidates: return "no-candidates";
        case ErrorCode::UnknownModel: return "unknown-model";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::EmptyInput: return "empty-input";
        case ErrorCode::InfeasibleScenario: return "infeasible-scenario";
        case ErrorCode::UsageError: return "usage";
    }
    return "unknown";
}

AcceleratorKind parse_accelerator(std::string_view name) {
    if (name == "CPU_SINGLE") return AcceleratorKind::CpuSingle;
    if (name == "CPU_MULTI") return AcceleratorKind::CpuMulti;
    if (name == "GPU") return AcceleratorKind::Gpu;
    if (name == "NNAPI") return AcceleratorKind::Nnapi;
    throw Error(ErrorCode::ValidationError,
                "unknown accelerator \"" + std::string(name) +
                    "\" (expected CPU_SINGLE, CPU_MULTI, GPU or NNAPI)");
}

std::string_view accelerator_name(AcceleratorKind kind) {
    switch (kind) {
        case AcceleratorKind::CpuSingle: return "CPU_SINGLE";
        case AcceleratorKind::CpuMulti: return "CPU_MULTI";
        case AcceleratorKind::Gpu: return "GPU";
        case AcceleratorKind::Nnapi: return "NNAPI";
    }
    return "UNKNOWN";
}

const RuntimeProfile* ModelProfile::runtime(AcceleratorKind kind) const {
    auto it = runtimes.find(kind);
    return it == runtimes.end() ? nullptr : &it->second;
}

namespace {

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : object.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* key) { return item.key() == key; });
        if (!known) {
            throw Error(ErrorCode::ParseError,
                        where + ": unknown key \"" + item.key() + "\"");
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

double as_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        throw Error(ErrorCode::ParseError, where + ": expected a number");
    }
    return value.get<double>();
}

std::string as_string(const json& value, const std::string& where) {
    if (!value.is_string()) {
        throw Error(ErrorCode::ParseError, where + ": expected a string");
    }
    return value.get<std::string>();
}

std::string trimmed(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

}  // namespace

ProfileSet parse_profiles_text(const std::string& text) {
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB &&
        static_cast<unsigned char>(text[2]) == 0xBF) {
        throw Error(ErrorCode::ParseError, "profile file must be UTF-8 without BOM");
    }

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("profile file: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, "profile file: top level must be an object");
    }
    reject_unknown_keys(doc, {"device_name", "voltage_v", "idle_ma", "models"}, "profile file");

    ProfileSet set;
    set.device_name = as_string(require(doc, "device_name", "profile file"), "device_name");
    set.voltage_v = as_number(require(doc, "voltage_v", "profile file"), "voltage_v");
    set.idle_ma = as_number(require(doc, "idle_ma", "profile file"), "idle_ma");

    const json& models = require(doc, "models", "profile file");
    if (!models.is_array()) {
        throw Error(ErrorCode::ParseError, "models: expected an array");
    }

    for (std::size_t i = 0; i < models.size(); ++i) {
        const json& m = models[i];
        std::string where = "models[" + std::to_string(i) + "]";
        if (!m.is_object()) {
            throw Error(ErrorCode::ParseError, where + ": expected an object");
        }
        reject_unknown_keys(m, {"name", "task", "accuracy", "model_size_mb", "runtimes"}, where);

        ModelProfile model;
        model.name = as_string(require(m, "name", where), where + ".name");
        model.task = as_string(require(m, "task", where), where + ".task");
        model.accuracy = as_number(require(m, "accuracy", where), where + ".accuracy");
        model.model_size_mb =
            as_number(require(m, "model_size_mb", where), where + ".model_size_mb");

        const json& runtimes = require(m, "runtimes", where);
        if (!runtimes.is_array()) {
            throw Error(ErrorCode::ParseError, where + ".runtimes: expected an array");
        }
        for (std::size_t j = 0; j < runtimes.size(); ++j) {
            const json& r = runtimes[j];
            std::string rwhere = where + ".runtimes[" + std::to_string(j) + "]";
            if (!r.is_object()) {
                throw Error(ErrorCode::ParseError, rwhere + ": expected an object");
            }
            reject_unknown_keys(r, {"accelerator", "latency_ms", "power_mw", "discharge_ma"},
                                rwhere);
            RuntimeProfile rt;
            try {
                rt.accelerator = parse_accelerator(
                    as_string(require(r, "accelerator", rwhere), rwhere + ".accelerator"));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ValidationError) throw;
                throw Error(ErrorCode::ValidationError, rwhere + ".accelerator: " + e.what());
            }
            rt.latency_ms = as_number(require(r, "latency_ms", rwhere), rwhere + ".latency_ms");
            rt.power_mw = as_number(require(r, "power_mw", rwhere), rwhere + ".power_mw");
            rt.discharge_ma =
                as_number(require(r, "discharge_ma", rwhere), rwhere + ".discharge_ma");

            if (!model.runtimes.emplace(rt.accelerator, rt).second) {
                throw Error(ErrorCode::ValidationError,
                            rwhere + ": duplicate runtime for accelerator " +
                                std::string(accelerator_name(rt.accelerator)));
            }
        }
        set.models.push_back(std::move(model));
    }
    return set;
}

std::vector<Diagnostic> validate_profiles(const ProfileSet& set) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string field, std::string message) {
        out.push_back({Severity::Error, std::move(field), std::move(message)});
    };
    auto warning = [&](std::string field, std::string message) {
        out.push_back({Severity::Warning, std::move(field), std::move(message)});
    };

    if (set.device_name.empty()) error("device_name", "must not be empty");
    if (!(set.voltage_v > 0)) {
        error("voltage_v", "value " + trimmed(set.voltage_v) + " must be > 0");
    }
    if (set.idle_ma < 0) {
        error("idle_ma", "value " + trimmed(set.idle_ma) + " must be >= 0");
    }

    std::set<std::pair<std::string, std::string>> seen;  // (task, name)
    for (std::size_t i = 0; i < set.models.size(); ++i) {
        const ModelProfile& m = set.models[i];
        std::string where = "models[" + std::to_string(i) + "]";
        if (m.name.empty()) error(where + ".name", "must not be empty");
        if (m.task.empty()) error(where + ".task", "must not be empty");
        if (!(m.accuracy >= 0.0 && m.accuracy <= 1.0)) {
            error(where + ".accuracy",
                  "accuracy " + trimmed(m.accuracy) + " outside [0, 1]");
        }
        if (!(m.model_size_mb > 0)) {
            error(where + ".model_size_mb",
                  "value " + trimmed(m.model_size_mb) + " must be > 0");
        }
        if (m.runtimes.empty()) {
            error(where + ".runtimes", "model carries no runtime profile");
        }
        if (!seen.emplace(m.task, m.name).second) {
            error(where + ".name", "duplicate model \"" + m.name + "\" in task \"" +
                                       m.task + "\"");
        }
        for (const auto& [kind, rt] : m.runtimes) {
            std::string rwhere =
                where + ".runtimes[" + std::string(accelerator_name(kind)) + "]";
            if (!(rt.latency_ms > 0)) {
                error(rwhere + ".latency_ms",
                      "value " + trimmed(rt.latency_ms) + " must be > 0");
            }
            if (!(rt.power_mw > 0)) {
                error(rwhere + ".power_mw",
                      "value " + trimmed(rt.power_mw) + " must be > 0");
            }
            if (!(rt.discharge_ma > 0)) {
                error(rwhere + ".discharge_ma",
                      "value " + trimmed(rt.discharge_ma) + " must be > 0");
            }
            if (rt.discharge_ma > 0 && rt.power_mw > 0 && set.voltage_v > 0) {
                double expected = rt.power_mw / set.voltage_v;
                double deviation = std::abs(rt.discharge_ma - expected) / rt.discharge_ma;
                if (deviation > kDischargeConsistencyTolerance) {
                    warning(rwhere + ".discharge_ma",
                            "discharge " + trimmed(rt.discharge_ma) + " mA deviates " +
                                trimmed(deviation * 100.0) + "% from power_mw/voltage_v (" +
                                trimmed(expected) + " mA)");
                }
            }
        }
    }
    return out;
}

ProfileSet parse_profiles_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open profile file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "error reading profile file: " + path);
    }
    return parse_profiles_text(buffer.str());
}

ProfileSet load_profiles(const std::string& path) {
    ProfileSet set = parse_profiles_file(path);
    for (const Diagnostic& d : validate_profiles(set)) {
        if (d.severity == Severity::Error) {
            throw Error(ErrorCode::ValidationError, d.field + ": " + d.message);
        }
    }
    return set;
}

std::string serialize_profiles(const ProfileSet& set) {
    json models = json::array();
    for (const ModelProfile& m : set.models) {
        json runtimes = json::array();
        for (const auto& [kind, rt] : m.runtimes) {
            runtimes.push_back({{"accelerator", std::string(accelerator_name(kind))},
                                {"latency_ms", rt.latency_ms},
                                {"power_mw", rt.power_mw},
                                {"discharge_ma", rt.discharge_ma}});
        }
        models.push_back({{"name", m.name},
                          {"task", m.task},
                          {"accuracy", m.accuracy},
                          {"model_size_mb", m.model_size_mb},
                          {"runtimes", std::move(runtimes)}});
    }
    json doc = {{"device_name", set.device_name},
                {"voltage_v", set.voltage_v},
                {"idle_ma", set.idle_ma},
                {"models", std::move(models)}};
    return doc.dump(2) + "\n";
}

std::vector<ModelProfile> candidates(const ProfileSet& set, std::string_view task,
                                     AcceleratorKind accelerator) {
    bool task_exists = false;
    std::vector<ModelProfile> out;
    for (const ModelProfile& m : set.models) {
        if (m.task != task) continue;
        task_exists = true;
        if (m.runtime(accelerator) != nullptr) out.push_back(m);
    }
    if (!task_exists) {
        throw Error(ErrorCode::UnknownTask,
                    "no model carries task \"" + std::string(task) + "\"");
    }
    std::sort(out.begin(), out.end(), [&](const ModelProfile& a, const ModelProfile& b) {
        if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
        double ea = energy_per_inference(*a.runtime(accelerator));
        double eb = energy_per_inference(*b.runtime(accelerator));
        if (ea != eb) return ea < eb;
        return a.name < b.name;
    });
    return out;
}

}  // namespace eamcr
