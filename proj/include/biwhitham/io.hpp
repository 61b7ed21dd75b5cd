#pragma once

#include <map>
#include <string>
#include <vector>

#include "biwhitham/continuation.hpp"
#include "biwhitham/spectral.hpp"

namespace biwhitham {

// Full run description: discretization, seed, step control, stopping rule,
// solver settings, and output options.  Serialized as flat key=value text
// where the keys match the field names.
struct RunConfig {
    int n_modes = 512;
    int wave_number = 1;
    double epsilon0 = 1e-2;
    double h0 = 1e-2;
    double h_min = 1e-8;
    double h_max = 0.1;
    double gap_threshold_rel = 1e-3;
    int max_steps = 2000;
    double newton_tol = 1e-12;
    int newton_max_iter = 25;
    std::string output_dir = ".";
    bool emit_svg = false;
    bool refine_terminal = false;

    bool operator==(const RunConfig&) const = default;
};

ContinuationConfig to_continuation_config(const RunConfig& config);

// Parses flat key=value text ('#' starts a comment); absent keys keep their
// defaults, unknown keys raise an error listing the valid ones, and override
// entries (e.g. from command-line flags) are applied on top of the file.
RunConfig parse_config_text(const std::string& text,
                            const std::map<std::string, std::string>& overrides = {});
RunConfig parse_config_file(const std::string& path,
                            const std::map<std::string, std::string>& overrides = {});
std::string config_to_text(const RunConfig& config);
void write_config_file(const RunConfig& config, const std::string& path);

// One CSV row per accepted branch point.
struct BranchRow {
    int index = 0;
    double arclength = 0.0;
    double c = 0.0;
    double waveheight = 0.0;
    double crest = 0.0;
    double gap = 0.0;
    double step = 0.0;
    int newton_iters = 0;

    bool operator==(const BranchRow&) const = default;
};

// Writes the branch table with 17 significant digits per real entry, so the
// read-back values are bit-for-bit identical.
void write_branch_csv(const Branch& branch, const std::string& path);
std::vector<BranchRow> read_branch_csv(const std::string& path);

const char* termination_name(Termination termination);

// Branch metadata: the full run configuration, the termination reason, the
// toolkit version, and the point count, as JSON.  Round-trips losslessly.
void write_branch_metadata(const Branch& branch, const RunConfig& config,
                           const std::string& path);
struct BranchMetadata {
    RunConfig config;
    std::string termination;
    std::string version;
    int n_points = 0;
};
BranchMetadata read_branch_metadata(const std::string& path);

// Profile document: n_modes, c, gamma, nodes, values, plus a metadata object
// carrying the toolkit version and any extra named scalars (gap, waveheight,
// thresholds, ...).  Values round-trip bit-for-bit.
void write_profile_json(const WaveProfile& profile, const CollocationGrid& grid,
                        const std::string& path,
                        const std::map<std::string, double>& extra_metadata = {});
struct LoadedProfile {
    WaveProfile profile;
    int n_modes = 0;
    double gamma = 0.0;
    Vector nodes;
    std::string version;
    std::map<std::string, double> metadata;
};
LoadedProfile read_profile_json(const std::string& path);

// Deterministic standalone SVG renderings: same input, same bytes.
std::string branch_svg(const Branch& branch);
std::string profiles_svg(const std::vector<WaveProfile>& profiles, const CollocationGrid& grid);
void write_text_file(const std::string& content, const std::string& path);

}  // namespace biwhitham
