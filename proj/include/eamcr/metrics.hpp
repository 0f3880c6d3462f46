#ifndef EAMCR_METRICS_HPP
#define EAMCR_METRICS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eamcr/profiles.hpp"
#include "eamcr/sim.hpp"

namespace eamcr {

struct BinaryMask {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> bits;  // row-major, nonzero = set

    static BinaryMask zeros(std::uint32_t width, std::uint32_t height);
    bool get(std::uint32_t x, std::uint32_t y) const { return bits[y * width + x] != 0; }
    void set(std::uint32_t x, std::uint32_t y, bool value) { bits[y * width + x] = value ? 1 : 0; }
};

// |X n Y| / |X u Y| over set bits. Two all-zero masks are identical sets,
// so the empty/empty case is 1.0. DimensionMismatch on unequal shapes.
double jaccard_index(const BinaryMask& x, const BinaryMask& y);

// PBM readers (P1 ascii, P4 packed); fixture ingestion only.
BinaryMask parse_pbm_text(const std::string& bytes);
BinaryMask load_pbm(const std::string& path);

struct DleiRow {
    std::string model_name;
    AcceleratorKind accelerator = AcceleratorKind::CpuSingle;
    double accuracy = 0.0;
    double mean_energy_mwh = 0.0;
    double dlei = 0.0;
};

// One row per (model, runtime) of the task, sorted by accelerator then
// descending DLEI (name as the final tie-break). Raises UnknownTask.
std::vector<DleiRow> dlei_table(const ProfileSet& profiles, std::string_view task);

struct Stats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;  // sample (n-1); 0 when n == 1
};

struct RunAggregate {
    std::size_t count = 0;
    Stats operating_time_s;
    Stats utility;
};

// Summary over repeated runs. Raises EmptyInput on an empty list.
RunAggregate aggregate(const std::vector<SimResult>& results);

}  // namespace eamcr

#endif
