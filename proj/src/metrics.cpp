#include "eamcr/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eamcr/energy.hpp"

namespace eamcr {

BinaryMask BinaryMask::zeros(std::uint32_t width, std::uint32_t height) {
    BinaryMask mask;
    mask.width = width;
    mask.height = height;
    mask.bits.assign(static_cast<std::size_t>(width) * height, 0);
    return mask;
}

double jaccard_index(const BinaryMask& x, const BinaryMask& y) {
    if (x.width != y.width || x.height != y.height) {
        throw Error(ErrorCode::DimensionMismatch,
                    "mask dimensions differ: " + std::to_string(x.width) + "x" +
                        std::to_string(x.height) + " vs " + std::to_string(y.width) + "x" +
                        std::to_string(y.height));
    }
    std::size_t expected = static_cast<std::size_t>(x.width) * x.height;
    if (x.bits.size() != expected || y.bits.size() != expected) {
        throw Error(ErrorCode::ValidationError, "mask bit count does not match dimensions");
    }
    std::uint64_t intersection = 0;
    std::uint64_t unions = 0;
    for (std::size_t i = 0; i < expected; ++i) {
        bool a = x.bits[i] != 0;
        bool b = y.bits[i] != 0;
        intersection += a && b;
        unions += a || b;
    }
    if (unions == 0) return 1.0;  // both empty: identical sets
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

namespace {

// Pulls the next whitespace/comment-delimited token of a PBM header.
std::string next_token(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#') {
        ++pos;
    }
    if (start == pos) {
        throw Error(ErrorCode::ParseError, "pbm: unexpected end of header");
    }
    return bytes.substr(start, pos - start);
}

std::uint32_t parse_dim(const std::string& token) {
    std::uint32_t value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') {
            throw Error(ErrorCode::ParseError, "pbm: bad dimension \"" + token + "\"");
        }
        value = value * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (value == 0) {
        throw Error(ErrorCode::ParseError, "pbm: dimensions must be positive");
    }
    return value;
}

}  // namespace

BinaryMask parse_pbm_text(const std::string& bytes) {
    std::size_t pos = 0;
    std::string magic = next_token(bytes, pos);
    if (magic != "P1" && magic != "P4") {
        throw Error(ErrorCode::ParseError, "pbm: expected P1 or P4, got \"" + magic + "\"");
    }
    std::uint32_t width = parse_dim(next_token(bytes, pos));
    std::uint32_t height = parse_dim(next_token(bytes, pos));

    BinaryMask mask = BinaryMask::zeros(width, height);
    if (magic == "P1") {
        std::size_t count = 0;
        while (count < mask.bits.size()) {
            while (pos < bytes.size()) {
                char c = bytes[pos];
                if (c == '#') {
                    while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                } else if (std::isspace(static_cast<unsigned char>(c))) {
                    ++pos;
                } else {
                    break;
                }
            }
            if (pos >= bytes.size()) {
                throw Error(ErrorCode::ParseError, "pbm: truncated pixel data");
            }
            char c = bytes[pos++];
            if (c != '0' && c != '1') {
                throw Error(ErrorCode::ParseError, std::string("pbm: bad pixel '") + c + "'");
            }
            mask.bits[count++] = c == '1' ? 1 : 0;
        }
    } else {
        // P4: single whitespace byte after the header, then packed rows,
        // each padded to a whole byte, most significant bit first.
        if (pos >= bytes.size() ||
            !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            throw Error(ErrorCode::ParseError, "pbm: missing header terminator");
        }
        ++pos;
        std::size_t row_bytes = (width + 7) / 8;
        if (bytes.size() - pos < row_bytes * height) {
            throw Error(ErrorCode::ParseError, "pbm: truncated pixel data");
        }
        for (std::uint32_t y = 0; y < height; ++y) {
            for (std::uint32_t x = 0; x < width; ++x) {
                unsigned char byte =
                    static_cast<unsigned char>(bytes[pos + y * row_bytes + x / 8]);
                mask.bits[static_cast<std::size_t>(y) * width + x] =
                    (byte >> (7 - x % 8)) & 1u;
            }
        }
    }
    return mask;
}

BinaryMask load_pbm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open pbm file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_pbm_text(buffer.str());
}

std::vector<DleiRow> dlei_table(const ProfileSet& profiles, std::string_view task) {
    bool task_exists = false;
    std::vector<DleiRow> rows;
    for (const ModelProfile& m : profiles.models) {
        if (m.task != task) continue;
        task_exists = true;
        for (const auto& [kind, rt] : m.runtimes) {
            DleiRow row;
            row.model_name = m.name;
            row.accelerator = kind;
            row.accuracy = m.accuracy;
            double energy_mj = energy_per_inference(rt);
            row.mean_energy_mwh = mj_to_mwh(energy_mj);
            row.dlei = dlei(m.accuracy, energy_mj);
            rows.push_back(std::move(row));
        }
    }
    if (!task_exists) {
        throw Error(ErrorCode::UnknownTask,
                    "no model carries task \"" + std::string(task) + "\"");
    }
    std::sort(rows.begin(), rows.end(), [](const DleiRow& a, const DleiRow& b) {
        if (a.accelerator != b.accelerator) return a.accelerator < b.accelerator;
        if (a.dlei != b.dlei) return a.dlei > b.dlei;
        return a.model_name < b.model_name;
    });
    return rows;
}

namespace {

Stats compute_stats(const std::vector<double>& values) {
    Stats s;
    s.min = values.front();
    s.max = values.front();
    double sum = 0.0;
    for (double v : values) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

}  // namespace

RunAggregate aggregate(const std::vector<SimResult>& results) {
    if (results.empty()) {
        throw Error(ErrorCode::EmptyInput, "aggregate requires at least one result");
    }
    std::vector<double> operating;
    std::vector<double> utility;
    operating.reserve(results.size());
    utility.reserve(results.size());
    for (const SimResult& r : results) {
        operating.push_back(r.operating_time_s);
        utility.push_back(r.utility);
    }
    RunAggregate out;
    out.count = results.size();
    out.operating_time_s = compute_stats(operating);
    out.utility = compute_stats(utility);
    return out;
}

}  // namespace eamcr
