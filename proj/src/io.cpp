#include "biwhitham/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "biwhitham/profile.hpp"
#include "biwhitham/version.hpp"

namespace biwhitham {

namespace {

using nlohmann::json;

const std::vector<std::string> config_keys = {
    "n_modes",     "wave_number",       "epsilon0",  "h0",
    "h_min",       "h_max",             "gap_threshold_rel", "max_steps",
    "newton_tol",  "newton_max_iter",   "output_dir", "emit_svg",
    "refine_terminal"};

// Shortest-width formatting with 17 significant digits: every finite double
// parses back to the identical bit pattern, independent of locale.
std::string format_real(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_real(const std::string& text, const std::string& key) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw std::runtime_error("config: key '" + key + "' has a malformed real value '" + text + "'");
    }
    return value;
}

int parse_int(const std::string& text, const std::string& key) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw std::runtime_error("config: key '" + key + "' has a malformed integer value '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw std::runtime_error("config: key '" + key + "' has a malformed boolean value '" + text + "'");
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "n_modes") config.n_modes = parse_int(value, key);
    else if (key == "wave_number") config.wave_number = parse_int(value, key);
    else if (key == "epsilon0") config.epsilon0 = parse_real(value, key);
    else if (key == "h0") config.h0 = parse_real(value, key);
    else if (key == "h_min") config.h_min = parse_real(value, key);
    else if (key == "h_max") config.h_max = parse_real(value, key);
    else if (key == "gap_threshold_rel") config.gap_threshold_rel = parse_real(value, key);
    else if (key == "max_steps") config.max_steps = parse_int(value, key);
    else if (key == "newton_tol") config.newton_tol = parse_real(value, key);
    else if (key == "newton_max_iter") config.newton_max_iter = parse_int(value, key);
    else if (key == "output_dir") config.output_dir = value;
    else if (key == "emit_svg") config.emit_svg = parse_bool(value, key);
    else if (key == "refine_terminal") config.refine_terminal = parse_bool(value, key);
    else {
        std::string known;
        for (const auto& k : config_keys) {
            known += known.empty() ? k : ", " + k;
        }
        throw std::runtime_error("config: unknown key '" + key + "' (valid keys: " + known + ")");
    }
}

void validate(const RunConfig& config) {
    if (config.n_modes < 8) {
        throw std::runtime_error("config: n_modes must be >= 8");
    }
    if (config.wave_number < 1) {
        throw std::runtime_error("config: wave_number must be >= 1");
    }
    if (2 * config.wave_number >= config.n_modes) {
        throw std::runtime_error("config: n_modes must exceed twice wave_number");
    }
    if (!(config.epsilon0 > 0.0)) {
        throw std::runtime_error("config: epsilon0 must be positive");
    }
    if (!(config.h_min > 0.0)) {
        throw std::runtime_error("config: h_min must be positive");
    }
    if (!(config.h_min <= config.h0)) {
        throw std::runtime_error("config: h0 must be >= h_min");
    }
    if (!(config.h0 <= config.h_max)) {
        throw std::runtime_error("config: h_max must be >= h0");
    }
    if (!(config.gap_threshold_rel > 0.0 && config.gap_threshold_rel < 1.0)) {
        throw std::runtime_error("config: gap_threshold_rel must lie in (0, 1)");
    }
    if (config.max_steps < 1) {
        throw std::runtime_error("config: max_steps must be >= 1");
    }
    if (!(config.newton_tol > 0.0)) {
        throw std::runtime_error("config: newton_tol must be positive");
    }
    if (config.newton_max_iter < 1) {
        throw std::runtime_error("config: newton_max_iter must be >= 1");
    }
    if (config.output_dir.empty()) {
        throw std::runtime_error("config: output_dir must not be empty");
    }
}

json config_to_json(const RunConfig& config) {
    json j;
    j["n_modes"] = config.n_modes;
    j["wave_number"] = config.wave_number;
    j["epsilon0"] = config.epsilon0;
    j["h0"] = config.h0;
    j["h_min"] = config.h_min;
    j["h_max"] = config.h_max;
    j["gap_threshold_rel"] = config.gap_threshold_rel;
    j["max_steps"] = config.max_steps;
    j["newton_tol"] = config.newton_tol;
    j["newton_max_iter"] = config.newton_max_iter;
    j["output_dir"] = config.output_dir;
    j["emit_svg"] = config.emit_svg;
    j["refine_terminal"] = config.refine_terminal;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig config;
    config.n_modes = j.at("n_modes").get<int>();
    config.wave_number = j.at("wave_number").get<int>();
    config.epsilon0 = j.at("epsilon0").get<double>();
    config.h0 = j.at("h0").get<double>();
    config.h_min = j.at("h_min").get<double>();
    config.h_max = j.at("h_max").get<double>();
    config.gap_threshold_rel = j.at("gap_threshold_rel").get<double>();
    config.max_steps = j.at("max_steps").get<int>();
    config.newton_tol = j.at("newton_tol").get<double>();
    config.newton_max_iter = j.at("newton_max_iter").get<int>();
    config.output_dir = j.at("output_dir").get<std::string>();
    config.emit_svg = j.at("emit_svg").get<bool>();
    config.refine_terminal = j.at("refine_terminal").get<bool>();
    return config;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Fixed-precision coordinate formatting for SVG geometry.
std::string format_coord(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string format_label(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
    return std::string(buf, res.ptr);
}

struct Frame {
    double x_min, x_max, y_min, y_max;
    static constexpr double width = 720.0;
    static constexpr double height = 480.0;
    static constexpr double margin = 56.0;

    double sx(double x) const {
        return margin + (x - x_min) / (x_max - x_min) * (width - 2.0 * margin);
    }
    double sy(double y) const {
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2.0 * margin);
    }
};

void pad_range(double& lo, double& hi) {
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

void append_axes(std::ostringstream& svg, const Frame& frame, const std::string& x_label,
                 const std::string& y_label) {
    svg << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";
    svg << "<rect x=\"" << format_coord(Frame::margin) << "\" y=\"" << format_coord(Frame::margin)
        << "\" width=\"" << format_coord(Frame::width - 2 * Frame::margin) << "\" height=\""
        << format_coord(Frame::height - 2 * Frame::margin)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = frame.x_min + (frame.x_max - frame.x_min) * t / 4.0;
        const double fy = frame.y_min + (frame.y_max - frame.y_min) * t / 4.0;
        const double px = frame.sx(fx);
        const double py = frame.sy(fy);
        svg << "<line x1=\"" << format_coord(px) << "\" y1=\"" << format_coord(Frame::height - Frame::margin)
            << "\" x2=\"" << format_coord(px) << "\" y2=\""
            << format_coord(Frame::height - Frame::margin + 5) << "\" stroke=\"#000000\"/>\n";
        svg << "<text x=\"" << format_coord(px) << "\" y=\""
            << format_coord(Frame::height - Frame::margin + 18)
            << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">"
            << format_label(fx) << "</text>\n";
        svg << "<line x1=\"" << format_coord(Frame::margin - 5) << "\" y1=\"" << format_coord(py)
            << "\" x2=\"" << format_coord(Frame::margin) << "\" y2=\"" << format_coord(py)
            << "\" stroke=\"#000000\"/>\n";
        svg << "<text x=\"" << format_coord(Frame::margin - 8) << "\" y=\"" << format_coord(py + 4)
            << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">"
            << format_label(fy) << "</text>\n";
    }
    svg << "<text x=\"" << format_coord(Frame::width / 2) << "\" y=\""
        << format_coord(Frame::height - 14)
        << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << format_coord(Frame::height / 2)
        << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << format_coord(Frame::height / 2) << ")\">" << y_label << "</text>\n";
}

}  // namespace

ContinuationConfig to_continuation_config(const RunConfig& config) {
    ContinuationConfig cc;
    cc.n_modes = config.n_modes;
    cc.wave_number = config.wave_number;
    cc.epsilon0 = config.epsilon0;
    cc.h0 = config.h0;
    cc.h_min = config.h_min;
    cc.h_max = config.h_max;
    cc.gap_threshold_rel = config.gap_threshold_rel;
    cc.max_steps = config.max_steps;
    cc.newton.tolerance = config.newton_tol;
    cc.newton.max_iterations = config.newton_max_iter;
    return cc;
}

RunConfig parse_config_text(const std::string& text,
                            const std::map<std::string, std::string>& overrides) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     " is not of the form key=value");
        }
        apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    for (const auto& [key, value] : overrides) {
        apply_key(config, key, value);
    }
    validate(config);
    return config;
}

RunConfig parse_config_file(const std::string& path,
                            const std::map<std::string, std::string>& overrides) {
    return parse_config_text(read_file(path), overrides);
}

std::string config_to_text(const RunConfig& config) {
    std::ostringstream out;
    out << "n_modes = " << config.n_modes << "\n";
    out << "wave_number = " << config.wave_number << "\n";
    out << "epsilon0 = " << format_real(config.epsilon0) << "\n";
    out << "h0 = " << format_real(config.h0) << "\n";
    out << "h_min = " << format_real(config.h_min) << "\n";
    out << "h_max = " << format_real(config.h_max) << "\n";
    out << "gap_threshold_rel = " << format_real(config.gap_threshold_rel) << "\n";
    out << "max_steps = " << config.max_steps << "\n";
    out << "newton_tol = " << format_real(config.newton_tol) << "\n";
    out << "newton_max_iter = " << config.newton_max_iter << "\n";
    out << "output_dir = " << config.output_dir << "\n";
    out << "emit_svg = " << (config.emit_svg ? "true" : "false") << "\n";
    out << "refine_terminal = " << (config.refine_terminal ? "true" : "false") << "\n";
    return out.str();
}

void write_config_file(const RunConfig& config, const std::string& path) {
    write_text_file(config_to_text(config), path);
}

void write_branch_csv(const Branch& branch, const std::string& path) {
    std::ostringstream out;
    out << "index,arclength,c,waveheight,crest,gap,step,newton_iters\n";
    for (std::size_t i = 0; i < branch.points.size(); ++i) {
        const BranchPoint& p = branch.points[i];
        out << i << ',' << format_real(p.arclength) << ',' << format_real(p.profile.c) << ','
            << format_real(p.waveheight) << ',' << format_real(p.profile.values[0]) << ','
            << format_real(p.gap) << ',' << format_real(p.step_used) << ',' << p.newton_iterations
            << "\n";
    }
    write_text_file(out.str(), path);
}

std::vector<BranchRow> read_branch_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("branch csv: empty file: " + path);
    }
    if (trim(line) != "index,arclength,c,waveheight,crest,gap,step,newton_iters") {
        throw std::runtime_error("branch csv: unexpected header in " + path);
    }
    std::vector<BranchRow> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 8) {
            throw std::runtime_error("branch csv: malformed row in " + path);
        }
        BranchRow row;
        row.index = parse_int(fields[0], "index");
        row.arclength = parse_real(fields[1], "arclength");
        row.c = parse_real(fields[2], "c");
        row.waveheight = parse_real(fields[3], "waveheight");
        row.crest = parse_real(fields[4], "crest");
        row.gap = parse_real(fields[5], "gap");
        row.step = parse_real(fields[6], "step");
        row.newton_iters = parse_int(fields[7], "newton_iters");
        rows.push_back(row);
    }
    return rows;
}

const char* termination_name(Termination termination) {
    switch (termination) {
        case Termination::gap_below_threshold: return "gap_below_threshold";
        case Termination::max_steps: return "max_steps";
        case Termination::step_underflow: return "step_underflow";
    }
    throw std::logic_error("termination_name: unknown termination");
}

void write_branch_metadata(const Branch& branch, const RunConfig& config,
                           const std::string& path) {
    json j;
    j["config"] = config_to_json(config);
    j["termination"] = termination_name(branch.termination);
    j["version"] = toolkit_version;
    j["n_points"] = static_cast<int>(branch.points.size());
    write_text_file(j.dump(2) + "\n", path);
}

BranchMetadata read_branch_metadata(const std::string& path) {
    const json j = json::parse(read_file(path));
    BranchMetadata meta;
    meta.config = config_from_json(j.at("config"));
    meta.termination = j.at("termination").get<std::string>();
    meta.version = j.at("version").get<std::string>();
    meta.n_points = j.at("n_points").get<int>();
    return meta;
}

void write_profile_json(const WaveProfile& profile, const CollocationGrid& grid,
                        const std::string& path,
                        const std::map<std::string, double>& extra_metadata) {
    if (profile.values.size() != grid.n_modes) {
        throw std::invalid_argument("write_profile_json: profile does not match grid");
    }
    json j;
    j["n_modes"] = grid.n_modes;
    j["c"] = profile.c;
    j["gamma"] = gamma_crest(profile.c);
    j["nodes"] = std::vector<double>(grid.nodes.data(), grid.nodes.data() + grid.nodes.size());
    j["values"] =
        std::vector<double>(profile.values.data(), profile.values.data() + profile.values.size());
    json meta;
    meta["version"] = toolkit_version;
    for (const auto& [key, value] : extra_metadata) {
        meta[key] = value;
    }
    j["metadata"] = meta;
    write_text_file(j.dump(2) + "\n", path);
}

LoadedProfile read_profile_json(const std::string& path) {
    const json j = json::parse(read_file(path));
    LoadedProfile loaded;
    loaded.n_modes = j.at("n_modes").get<int>();
    loaded.profile.c = j.at("c").get<double>();
    loaded.gamma = j.at("gamma").get<double>();
    const auto nodes = j.at("nodes").get<std::vector<double>>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != loaded.n_modes ||
        static_cast<int>(nodes.size()) != loaded.n_modes) {
        throw std::runtime_error("profile json: lengths do not match n_modes in " + path);
    }
    loaded.nodes = Eigen::Map<const Vector>(nodes.data(), nodes.size());
    loaded.profile.values = Eigen::Map<const Vector>(values.data(), values.size());
    const json& meta = j.at("metadata");
    loaded.version = meta.at("version").get<std::string>();
    for (const auto& [key, value] : meta.items()) {
        if (value.is_number()) {
            loaded.metadata[key] = value.get<double>();
        }
    }
    return loaded;
}

std::string branch_svg(const Branch& branch) {
    if (branch.points.empty()) {
        throw std::invalid_argument("branch_svg: branch has no points");
    }
    Frame frame{branch.points[0].profile.c, branch.points[0].profile.c,
                branch.points[0].waveheight, branch.points[0].waveheight};
    for (const BranchPoint& p : branch.points) {
        frame.x_min = std::min(frame.x_min, p.profile.c);
        frame.x_max = std::max(frame.x_max, p.profile.c);
        frame.y_min = std::min(frame.y_min, p.waveheight);
        frame.y_max = std::max(frame.y_max, p.waveheight);
    }
    pad_range(frame.x_min, frame.x_max);
    pad_range(frame.y_min, frame.y_max);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n";
    append_axes(svg, frame, "wavespeed c", "waveheight");
    svg << "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < branch.points.size(); ++i) {
        if (i) svg << ' ';
        svg << format_coord(frame.sx(branch.points[i].profile.c)) << ','
            << format_coord(frame.sy(branch.points[i].waveheight));
    }
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

std::string profiles_svg(const std::vector<WaveProfile>& profiles, const CollocationGrid& grid) {
    if (profiles.empty()) {
        throw std::invalid_argument("profiles_svg: no profiles given");
    }
    for (const WaveProfile& p : profiles) {
        if (p.values.size() != grid.n_modes) {
            throw std::invalid_argument("profiles_svg: profile does not match grid");
        }
    }
    Frame frame{-pi, pi, profiles[0].values.minCoeff(), profiles[0].values.maxCoeff()};
    for (const WaveProfile& p : profiles) {
        frame.y_min = std::min(frame.y_min, p.values.minCoeff());
        frame.y_max = std::max(frame.y_max, p.values.maxCoeff());
    }
    pad_range(frame.y_min, frame.y_max);

    // Fixed palette cycled over the profiles, darkest first.
    const std::vector<std::string> palette = {"#1f4e8c", "#9c2f2f", "#2f7d32", "#7b4fa6",
                                              "#b07615", "#306f7a"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n";
    append_axes(svg, frame, "x", "wave profile");
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const Vector& v = profiles[k].values;
        svg << "<polyline fill=\"none\" stroke=\"" << palette[k % palette.size()]
            << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        // Even waves: mirror the half-period samples to render on [-pi, pi].
        for (int m = grid.n_modes - 1; m >= 0; --m) {
            if (!first) svg << ' ';
            svg << format_coord(frame.sx(-grid.nodes[m])) << ',' << format_coord(frame.sy(v[m]));
            first = false;
        }
        for (int m = 0; m < grid.n_modes; ++m) {
            svg << ' ' << format_coord(frame.sx(grid.nodes[m])) << ','
                << format_coord(frame.sy(v[m]));
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string& content, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed while writing: " + path);
    }
}

}  // namespace biwhitham
