#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quantsine {

inline constexpr char k_version[] = "quantsine 1.0.0";
inline constexpr int k_csv_schema = 1;

// User-facing knobs; anything unset falls back to the experiment's defaults,
// which are recorded in the CSV metadata after resolution.
struct ExperimentConfig {
    std::string experiment;
    std::optional<int> bits;
    std::optional<double> delta;
    std::optional<double> amp_min;
    std::optional<double> amp_max;
    std::optional<int> amp_steps;
    std::optional<int> lambda;
    std::optional<int> n_samples;
    std::optional<std::int64_t> records;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma;
    std::optional<double> offset;
    std::string out;  // CSV path; empty writes <experiment>.csv
};

struct SweepTable {
    std::vector<std::pair<std::string, std::string>> metadata;  // key, value
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Throws std::invalid_argument on unknown keys or unparsable values.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

// Flat key=value file, full-line or trailing '#' comments.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

// Rebuilds the configuration from the "# key=value" metadata block of an
// emitted CSV, for byte-identical re-runs.
ExperimentConfig config_from_csv_metadata(std::istream& csv);

std::vector<std::string> list_experiments();

SweepTable run_experiment(const ExperimentConfig& cfg);

// '.' decimal separator, ',' field separator, LF line ends, 17 significant digits
void write_csv(const SweepTable& table, std::ostream& os);

// Self-check suites: "fast" (< 1 min) or "full" (< 30 min). The report is
// byte-stable for a given build: no timestamps, no durations. Returns true
// when every check passes.
bool verify(const std::string& suite, std::ostream& report);

}  // namespace quantsine
