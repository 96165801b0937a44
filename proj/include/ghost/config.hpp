#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghost/forward.hpp"
#include "ghost/sensing.hpp"
#include "ghost/solver.hpp"

namespace ghost {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReconMethod { Gi, Cs, Both };

// Flat, validated run configuration. Presets fill every key; a config file
// overrides per key; CLI flags override last. Unknown keys are rejected by
// name.
struct RunConfig {
    std::string preset = "paper";

    OpticalLayout layout;
    SlitGeometry slit;
    std::string object_type = "double_slit";  // or "none"

    std::size_t realizations = 0;   // m
    std::uint64_t master_seed = 0;
    unsigned threads = 0;

    ReconMethod method = ReconMethod::Both;
    std::size_t roi_pixels = 64;    // ROI side in reference pixels

    SolverParams solver;
    NormalizeMode cs_normalize = NormalizeMode::RowMean;
    std::size_t cs_realizations = 0;  // records used by CS (0 = all)

    std::string out_dir = "out";
    std::string input_dir;

    std::string sweep_parameter;      // "L1" | "reference_pixel_pitch" | "m"
    std::vector<double> sweep_values;

    std::string estimate_path;        // metrics command

    void validate() const;
    TransmissionMask build_object(double pitch, std::size_t dims) const;
};

RunConfig preset_config(const std::string& name);  // "paper" | "fast"

// Parse a JSON config document on top of `base`. Throws ConfigError naming
// the offending key.
RunConfig parse_config(const std::string& json_text, const RunConfig& base);
RunConfig load_config_file(const std::string& path, const RunConfig& base);

// Resolved config echoed as a JSON object (manifest payload).
std::string config_to_json(const RunConfig& cfg);

}  // namespace ghost
