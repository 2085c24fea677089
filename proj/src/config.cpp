#include "rendezvous/config.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace rendezvous {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, int line, int col,
                             const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": " << what;
    throw ConfigError(os.str());
}

// Minimal TOML-style reader: [section] headers, key = value pairs,
// numbers, strings, booleans and (nested) arrays. Arrays may span lines.
class TomlReader {
public:
    TomlReader(std::string path, std::istream& in) : path_(std::move(path)), in_(in) {}

    json parse() {
        json root = json::object();
        json* section = &root;
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            strip_comment(line);
            std::size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '[') {
                const std::size_t end = line.find(']', pos);
                if (end == std::string::npos) {
                    parse_fail(path_, line_no_, static_cast<int>(pos) + 1,
                               "unterminated section header");
                }
                const std::string name = trim(line.substr(pos + 1, end - pos - 1));
                if (name.empty()) {
                    parse_fail(path_, line_no_, static_cast<int>(pos) + 1,
                               "empty section name");
                }
                section = &root[name];
                if (section->is_null()) *section = json::object();
                continue;
            }
            const std::size_t eq = line.find('=', pos);
            if (eq == std::string::npos) {
                parse_fail(path_, line_no_, static_cast<int>(pos) + 1,
                           "expected 'key = value'");
            }
            const std::string key = trim(line.substr(pos, eq - pos));
            if (key.empty()) {
                parse_fail(path_, line_no_, static_cast<int>(pos) + 1, "empty key");
            }
            std::string value = trim(line.substr(eq + 1));
            // Gather continuation lines until array brackets balance.
            while (bracket_depth(value) > 0) {
                std::string more;
                if (!std::getline(in_, more)) {
                    parse_fail(path_, line_no_, 1, "unterminated array");
                }
                ++line_no_;
                strip_comment(more);
                value += " " + trim(more);
            }
            std::size_t vpos = 0;
            (*section)[key] = parse_value(value, vpos);
            skip_ws(value, vpos);
            if (vpos != value.size()) {
                parse_fail(path_, line_no_, static_cast<int>(eq + 2 + vpos),
                           "trailing characters after value");
            }
        }
        return root;
    }

private:
    static std::string trim(const std::string& s) {
        const std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static void strip_comment(std::string& line) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line.erase(i);
                return;
            }
        }
    }

    static int bracket_depth(const std::string& s) {
        int depth = 0;
        bool in_string = false;
        for (char ch : s) {
            if (ch == '"') in_string = !in_string;
            if (in_string) continue;
            if (ch == '[') ++depth;
            if (ch == ']') --depth;
        }
        return depth;
    }

    static void skip_ws(const std::string& s, std::size_t& pos) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    json parse_value(const std::string& s, std::size_t& pos) {
        skip_ws(s, pos);
        if (pos >= s.size()) {
            parse_fail(path_, line_no_, static_cast<int>(pos) + 1, "missing value");
        }
        const char ch = s[pos];
        if (ch == '[') {
            ++pos;
            json arr = json::array();
            skip_ws(s, pos);
            if (pos < s.size() && s[pos] == ']') {
                ++pos;
                return arr;
            }
            while (true) {
                arr.push_back(parse_value(s, pos));
                skip_ws(s, pos);
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < s.size() && s[pos] == ']') {
                    ++pos;
                    return arr;
                }
                parse_fail(path_, line_no_, static_cast<int>(pos) + 1,
                           "expected ',' or ']' in array");
            }
        }
        if (ch == '"') {
            const std::size_t end = s.find('"', pos + 1);
            if (end == std::string::npos) {
                parse_fail(path_, line_no_, static_cast<int>(pos) + 1,
                           "unterminated string");
            }
            json out = s.substr(pos + 1, end - pos - 1);
            pos = end + 1;
            return out;
        }
        if (s.compare(pos, 4, "true") == 0) {
            pos += 4;
            return true;
        }
        if (s.compare(pos, 5, "false") == 0) {
            pos += 5;
            return false;
        }
        std::size_t end = pos;
        while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) &&
               s[end] != ',' && s[end] != ']') {
            ++end;
        }
        const std::string token = s.substr(pos, end - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument("bad number");
            pos = end;
            return v;
        } catch (const std::exception&) {
            parse_fail(path_, line_no_, static_cast<int>(pos) + 1,
                       "invalid value '" + token + "'");
        }
    }

    std::string path_;
    std::istream& in_;
    int line_no_ = 0;
};

double require_number(const json& obj, const std::string& field, const std::string& ctx) {
    if (!obj.contains(field)) {
        throw ConfigError(ctx + ": missing required field '" + field + "'");
    }
    if (!obj[field].is_number()) {
        throw ConfigError(ctx + ": field '" + field + "' must be a number");
    }
    return obj[field].get<double>();
}

double number_or(const json& obj, const std::string& field, double fallback,
                 const std::string& ctx) {
    if (!obj.contains(field)) return fallback;
    if (!obj[field].is_number()) {
        throw ConfigError(ctx + ": field '" + field + "' must be a number");
    }
    return obj[field].get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known) {
            if (it.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
        }
    }
}

Eigen::MatrixXd parse_matrix(const json& rows, const std::string& ctx) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
        throw ConfigError(ctx + ": expected an array of rows");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index m = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd out(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != m) {
            throw ConfigError(ctx + ": ragged matrix rows");
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            out(i, j) = rows[i][j].get<double>();
        }
    }
    return out;
}

ScenarioConfig from_json(const json& root, const std::string& name) {
    const std::string ctx = "scenario '" + name + "'";
    reject_unknown(root,
                   {"schema_version", "n", "h", "epsilon", "max_steps", "master_seed",
                    "monte_carlo_runs", "gain_mode", "initial_states", "initial_estimates",
                    "initial_covariance", "noise", "topology", "weights", "drive", "name"},
                   ctx);

    ScenarioConfig c;
    c.name = root.value("name", name);
    c.schema_version = static_cast<int>(number_or(root, "schema_version", 1, ctx));
    if (c.schema_version != 1) {
        throw ConfigError(ctx + ": unsupported schema_version");
    }
    c.n = static_cast<int>(require_number(root, "n", ctx));
    c.h = require_number(root, "h", ctx);
    c.epsilon = number_or(root, "epsilon", c.epsilon, ctx);
    c.max_steps = static_cast<int>(number_or(root, "max_steps", c.max_steps, ctx));
    c.master_seed =
        static_cast<std::uint64_t>(number_or(root, "master_seed", 42, ctx));
    c.monte_carlo_runs =
        static_cast<int>(number_or(root, "monte_carlo_runs", c.monte_carlo_runs, ctx));
    c.initial_covariance = number_or(root, "initial_covariance", c.initial_covariance, ctx);

    if (root.contains("gain_mode")) {
        const std::string mode = root["gain_mode"].get<std::string>();
        if (mode == "local") {
            c.gain_mode = GainMode::Local;
        } else if (mode == "global") {
            c.gain_mode = GainMode::Global;
        } else {
            throw ConfigError(ctx + ": gain_mode must be 'local' or 'global'");
        }
    }

    if (!root.contains("initial_states") || !root["initial_states"].is_array()) {
        throw ConfigError(ctx + ": missing required field 'initial_states'");
    }
    for (const json& row : root["initial_states"]) {
        if (!row.is_array() || row.size() < 2 || row.size() > 3) {
            throw ConfigError(ctx + ": initial_states entries must be [x, y] or [x, y, theta]");
        }
        RobotState s;
        s.x = row[0].get<double>();
        s.y = row[1].get<double>();
        s.theta = row.size() == 3 ? row[2].get<double>() : 0.0;
        c.initial_states.push_back(s);
    }
    if (root.contains("initial_estimates")) {
        for (const json& row : root["initial_estimates"]) {
            if (!row.is_array() || row.size() != 2) {
                throw ConfigError(ctx + ": initial_estimates entries must be [x, y]");
            }
            c.initial_estimates.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
    }

    if (root.contains("noise")) {
        const json& noise = root["noise"];
        reject_unknown(noise,
                       {"process_var_x", "process_var_y", "meas_var_odom", "meas_var_imu"},
                       ctx + " [noise]");
        c.noise.process_var_x = number_or(noise, "process_var_x", 1e-8, ctx);
        c.noise.process_var_y = number_or(noise, "process_var_y", 1e-8, ctx);
        c.noise.meas_var_odom = number_or(noise, "meas_var_odom", 1e-6, ctx);
        c.noise.meas_var_imu = number_or(noise, "meas_var_imu", 1e-4, ctx);
    } else {
        c.noise = NoiseSpec{1e-8, 1e-8, 1e-6, 1e-4};
    }

    if (root.contains("topology")) {
        const json& topo = root["topology"];
        reject_unknown(topo, {"preset", "adjacency"}, ctx + " [topology]");
        if (topo.contains("adjacency")) {
            c.topology.adjacency = parse_matrix(topo["adjacency"], ctx + " [topology]");
        } else if (topo.contains("preset")) {
            c.topology.preset = topo["preset"].get<std::string>();
        }
    }

    if (root.contains("weights")) {
        const json& w = root["weights"];
        reject_unknown(w, {"q_state", "r_input", "q_terminal", "horizon"}, ctx + " [weights]");
        c.weights.q_state = number_or(w, "q_state", 1.0, ctx);
        c.weights.r_input = number_or(w, "r_input", 1.0, ctx);
        c.weights.q_terminal = number_or(w, "q_terminal", 1.0, ctx);
        c.weights.horizon = static_cast<int>(number_or(w, "horizon", 0, ctx));
    }

    if (root.contains("drive")) {
        const json& d = root["drive"];
        reject_unknown(d, {"wheelbase", "wheel_speed_limit", "heading_gain"}, ctx + " [drive]");
        c.drive.wheelbase = number_or(d, "wheelbase", c.drive.wheelbase, ctx);
        c.drive.wheel_speed_limit =
            number_or(d, "wheel_speed_limit", c.drive.wheel_speed_limit, ctx);
        c.drive.heading_gain = number_or(d, "heading_gain", c.drive.heading_gain, ctx);
    }

    c.validate();
    return c;
}

} // namespace

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path + "'");
    }
    TomlReader reader(path, in);
    return from_json(reader.parse(), path);
}

bool is_preset(const std::string& name) {
    return name == "paper-sec5-low-noise" || name == "paper-sec5-high-noise";
}

ScenarioConfig preset_scenario(const std::string& name) {
    if (!is_preset(name)) {
        throw ConfigError("unknown preset '" + name + "'");
    }
    ScenarioConfig c;
    c.name = name;
    c.n = 4;
    c.h = 0.1;
    c.initial_states = {
        {0.2, -0.065, 0.0},
        {-0.2, -0.065, 0.0},
        {-0.2, 0.065, 0.0},
        {0.2, 0.065, 0.0},
    };
    // Estimates start at the true poses; no process noise is modeled for
    // these runs, only the two sensor covariances.
    c.noise.process_var_x = 0.0;
    c.noise.process_var_y = 0.0;
    if (name == "paper-sec5-low-noise") {
        c.noise.meas_var_odom = 1e-6;
        c.noise.meas_var_imu = 1e-4;
    } else {
        c.noise.meas_var_odom = 1e-3;
        c.noise.meas_var_imu = 1e-2;
    }
    c.topology.preset = "complete";
    c.gain_mode = GainMode::Local;
    c.epsilon = 0.005;
    c.max_steps = 600;
    c.master_seed = 42;
    c.monte_carlo_runs = 200;
    c.validate();
    return c;
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
    if (is_preset(name_or_path)) {
        return preset_scenario(name_or_path);
    }
    return load_scenario(name_or_path);
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["schema_version"] = c.schema_version;
    j["n"] = c.n;
    j["h"] = c.h;
    j["epsilon"] = c.epsilon;
    j["max_steps"] = c.max_steps;
    j["master_seed"] = c.master_seed;
    j["monte_carlo_runs"] = c.monte_carlo_runs;
    j["initial_covariance"] = c.initial_covariance;
    j["gain_mode"] = c.gain_mode == GainMode::Local ? "local" : "global";
    for (const RobotState& s : c.initial_states) {
        j["initial_states"].push_back({s.x, s.y, s.theta});
    }
    for (const auto& [x, y] : c.initial_estimates) {
        j["initial_estimates"].push_back({x, y});
    }
    j["noise"] = {{"process_var_x", c.noise.process_var_x},
                  {"process_var_y", c.noise.process_var_y},
                  {"meas_var_odom", c.noise.meas_var_odom},
                  {"meas_var_imu", c.noise.meas_var_imu}};
    if (c.topology.adjacency.size() > 0) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < c.topology.adjacency.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < c.topology.adjacency.cols(); ++k) {
                row.push_back(c.topology.adjacency(i, k));
            }
            rows.push_back(row);
        }
        j["topology"] = {{"adjacency", rows}};
    } else {
        j["topology"] = {{"preset", c.topology.preset}};
    }
    j["weights"] = {{"q_state", c.weights.q_state},
                    {"r_input", c.weights.r_input},
                    {"q_terminal", c.weights.q_terminal},
                    {"horizon", c.weights.horizon}};
    j["drive"] = {{"wheelbase", c.drive.wheelbase},
                  {"wheel_speed_limit", c.drive.wheel_speed_limit},
                  {"heading_gain", c.drive.heading_gain}};
    return j;
}

std::string config_hash(const ScenarioConfig& config) {
    const std::string canon = config_to_json(config).dump();
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char ch : canon) {
        hash ^= ch;
        hash *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace rendezvous
