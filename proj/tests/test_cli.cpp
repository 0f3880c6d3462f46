#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string kCli = EAMCR_CLI_PATH;
const std::string kData = EAMCR_DATA_DIR;
const std::string kGolden = EAMCR_GOLDEN_DIR;

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() /
               ("eamcr_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    static int& counter() {
        static int n = 0;
        return n;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    std::string command = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

std::string profiles() { return kData + "/profiles_oneplus7.json"; }

}  // namespace

TEST_CASE("validate exit codes") {
    CHECK(run("validate --profiles " + profiles()) == 0);
    CHECK(run("validate --profiles /nonexistent/corpus.json") == 1);

    TempDir dir;
    write(dir.file("bad_accuracy.json"), R"({
      "device_name": "d", "voltage_v": 3.85, "idle_ma": 0.0,
      "models": [{"name": "m", "task": "t", "accuracy": 1.2, "model_size_mb": 1.0,
        "runtimes": [{"accelerator": "GPU", "latency_ms": 100.0, "power_mw": 2000.0, "discharge_ma": 519.5}]}]
    })");
    CHECK(run("validate --profiles " + dir.file("bad_accuracy.json")) == 2);

    write(dir.file("not_json.json"), "this is not json");
    CHECK(run("validate --profiles " + dir.file("not_json.json")) == 1);

    // Warnings allowed at exit 0: discharge 10% off nominal.
    write(dir.file("warn.json"), R"({
      "device_name": "d", "voltage_v": 3.85, "idle_ma": 0.0,
      "models": [{"name": "m", "task": "t", "accuracy": 0.9, "model_size_mb": 1.0,
        "runtimes": [{"accelerator": "GPU", "latency_ms": 100.0, "power_mw": 2000.0, "discharge_ma": 571.4}]}]
    })");
    CHECK(run("validate --profiles " + dir.file("warn.json")) == 0);
}

TEST_CASE("usage errors") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("dlei --task eardrum") == 2);  // missing required flags
    TempDir dir;
    CHECK(run("dlei --profiles " + profiles() + " --task eardrum --out " +
              dir.file("t") + " --format svg") == 2);
}

TEST_CASE("dlei table emission") {
    TempDir dir;
    std::string out = dir.file("dlei_eardrum");
    CHECK(run("dlei --profiles " + profiles() + " --task eardrum --out " + out) == 0);
    std::string first = slurp(out + ".csv");
    CHECK(first.rfind("model,accelerator,accuracy,mean_energy_mwh,dlei\n", 0) == 0);
    // Anchored ResNet rows: 1477.05 mJ -> 0.410292 mWh; 372 mJ -> 0.103333 mWh.
    CHECK(first.find("ResNet,CPU_SINGLE,0.918,0.410292,") != std::string::npos);
    CHECK(first.find("ResNet,GPU,0.918,0.103333,") != std::string::npos);

    CHECK(run("dlei --profiles " + profiles() + " --task eardrum --out " + out) == 0);
    CHECK(slurp(out + ".csv") == first);  // byte-identical rerun

    CHECK(run("dlei --profiles " + profiles() + " --task nope --out " + out) == 2);
}

TEST_CASE("simulate writes json, csv and optional svg") {
    TempDir dir;
    std::string scenario = kData + "/scenarios/simulate_skin_cpu.json";
    std::string out = dir.file("sim");
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + scenario + " --out " +
              out + " --format svg") == 0);

    std::string json = slurp(out + ".json");
    std::string csv = slurp(out + ".csv");
    std::string svg = slurp(out + ".svg");
    CHECK(json.find("\"label\": \"EAMCR\"") != std::string::npos);
    CHECK(csv.rfind("timestamp_s,remaining_mah,active_model\n", 0) == 0);
    CHECK(svg.rfind("<svg", 0) == 0);

    // Exactly one model change: Inception first, EfficientNetB0 after the
    // threshold crossing.
    CHECK(json.find("\"model\": \"Inception\"") != std::string::npos);
    CHECK(json.find("\"model\": \"EfficientNetB0\"") != std::string::npos);
    CHECK(csv.find(",Inception\n") != std::string::npos);
    CHECK(csv.find(",EfficientNetB0\n") != std::string::npos);

    std::string out2 = dir.file("sim2");
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + scenario + " --out " +
              out2 + " --format svg") == 0);
    CHECK(slurp(out2 + ".json") == json);
    CHECK(slurp(out2 + ".csv") == csv);
    CHECK(slurp(out2 + ".svg") == svg);

    CHECK(run("simulate --profiles " + profiles() + " --scenario /nonexistent.json --out " +
              out) == 1);
}

TEST_CASE("compare writes reports and enforces the two-policy floor") {
    TempDir dir;
    std::string scenario = kData + "/scenarios/compare_skin_cpu.json";
    std::string out = dir.file("cmp");
    CHECK(run("compare --profiles " + profiles() + " --scenario " + scenario + " --out " +
              out + " --format svg") == 0);

    std::string csv = slurp(out + ".csv");
    CHECK(csv.rfind("policy,operating_time_s,inference_count,utility,mean_dlei\n", 0) == 0);
    CHECK(slurp(out + ".svg").find("stroke-dasharray") != std::string::npos);

    // EAMCR operating time beats the mean of the FIXED policies in the file.
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    double mean_fixed = 0.0;
    int fixed_count = 0;
    double adaptive = -1.0;
    while (std::getline(lines, line)) {
        std::size_t comma = line.find(',');
        std::string label = line.substr(0, comma);
        double operating = std::stod(line.substr(comma + 1));
        if (label.rfind("FIXED(", 0) == 0) {
            mean_fixed += operating;
            ++fixed_count;
        } else if (label == "EAMCR") {
            adaptive = operating;
        }
    }
    REQUIRE(fixed_count == 6);
    mean_fixed /= fixed_count;
    CHECK(adaptive >= mean_fixed);

    // Single-policy scenario is a usage error for compare.
    CHECK(run("compare --profiles " + profiles() + " --scenario " + kData +
              "/scenarios/simulate_skin_cpu.json --out " + out) == 2);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(run("--help") == 0);
    CHECK(run("simulate --help") == 0);
    CHECK(run("--version") == 0);
}

TEST_CASE("verbosity flags are accepted after the subcommand") {
    CHECK(run("validate --profiles " + profiles() + " -v") == 0);
    TempDir dir;
    CHECK(run("dlei --profiles " + profiles() + " --task eardrum --out " +
              dir.file("v") + " -vv") == 0);
    // Verbose chatter goes to stderr; the artifact bytes are unchanged.
    CHECK(slurp(dir.file("v.csv")) == slurp(kGolden + "/dlei_eardrum.csv"));
}

TEST_CASE("zero-rate workload runs idle to the horizon") {
    TempDir dir;
    write(dir.file("idle.json"), R"({
      "task": "skin-lesion",
      "accelerator": "CPU_MULTI",
      "battery": {"design_capacity_mah": 4000.0, "remaining_mah": 4000.0, "voltage_v": 3.85},
      "workload": {"arrival_kind": "FIXED_RATE", "rate_per_s": 0.0, "horizon_s": 43200.0},
      "policies": [{"kind": "FIXED", "model": "Inception"}],
      "noise": false
    })");
    std::string out = dir.file("idle");
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + dir.file("idle.json") +
              " --out " + out) == 0);
    std::string json = slurp(out + ".json");
    CHECK(json.find("\"inference_count\": 0") != std::string::npos);
    CHECK(json.find("\"operating_time_s\": 43200.0") != std::string::npos);
    CHECK(json.find("\"exhausted\": false") != std::string::npos);
}

TEST_CASE("shipped full-scale scenarios run to completion") {
    TempDir dir;
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + kData +
              "/scenarios/simulate_skin_th1500.json --out " + dir.file("th1500")) == 0);
    std::string json = slurp(dir.file("th1500.json"));
    // One mode switch at the 1500 mAh crossing, then the efficient model.
    CHECK(json.find("\"mode\": \"OPEN_ACCESS\"") != std::string::npos);
    CHECK(json.find("\"mode\": \"ENERGY_EFFICIENT\"") != std::string::npos);
    CHECK(json.find("\"model\": \"Inception\"") != std::string::npos);
    CHECK(json.find("\"model\": \"EfficientNetB0\"") != std::string::npos);

    CHECK(run("compare --profiles " + profiles() + " --scenario " + kData +
              "/scenarios/compare_skin_cpu_full.json --out " + dir.file("full") +
              " --format svg") == 0);
    CHECK(slurp(dir.file("full.csv")).find("EAMCR,") != std::string::npos);

    CHECK(run("compare --profiles " + profiles() + " --scenario " + kData +
              "/scenarios/compare_skin_gpu.json --out " + dir.file("gpu")) == 0);
}

TEST_CASE("seed override changes poisson output deterministically") {
    TempDir dir;
    write(dir.file("poisson.json"), R"({
      "scenario_id": "poisson-smoke",
      "task": "skin-lesion",
      "accelerator": "CPU_MULTI",
      "battery": {"design_capacity_mah": 40.0, "remaining_mah": 40.0, "voltage_v": 3.85},
      "workload": {"arrival_kind": "POISSON", "rate_per_s": 0.5, "horizon_s": 1800.0, "seed": 5},
      "policies": [{"kind": "FIXED", "model": "Inception"}],
      "noise": true
    })");
    std::string a = dir.file("a");
    std::string b = dir.file("b");
    std::string c = dir.file("c");
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + dir.file("poisson.json") +
              " --out " + a) == 0);
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + dir.file("poisson.json") +
              " --out " + b + " --seed 99") == 0);
    CHECK(run("simulate --profiles " + profiles() + " --scenario " + dir.file("poisson.json") +
              " --out " + c + " --seed 99") == 0);
    CHECK(slurp(a + ".csv") != slurp(b + ".csv"));
    CHECK(slurp(b + ".csv") == slurp(c + ".csv"));
}

TEST_CASE("golden outputs match the checked-in files") {
    TempDir dir;
    CHECK(run("dlei --profiles " + profiles() + " --task eardrum --out " +
              dir.file("dlei_eardrum")) == 0);
    CHECK(slurp(dir.file("dlei_eardrum.csv")) == slurp(kGolden + "/dlei_eardrum.csv"));

    CHECK(run("simulate --profiles " + profiles() + " --scenario " + kData +
              "/scenarios/simulate_skin_cpu.json --out " + dir.file("simulate_skin_cpu") +
              " --format svg") == 0);
    for (const char* ext : {".json", ".csv", ".svg"}) {
        CHECK(slurp(dir.file("simulate_skin_cpu") + ext) ==
              slurp(kGolden + "/simulate_skin_cpu" + ext));
    }

    CHECK(run("compare --profiles " + profiles() + " --scenario " + kData +
              "/scenarios/compare_skin_cpu.json --out " + dir.file("compare_skin_cpu") +
              " --format svg") == 0);
    for (const char* ext : {".json", ".csv", ".svg"}) {
        CHECK(slurp(dir.file("compare_skin_cpu") + ext) ==
              slurp(kGolden + "/compare_skin_cpu" + ext));
    }
}
