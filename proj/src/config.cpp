#include "susy/config.hpp"

#include "susy/family.hpp"
#include "susy/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace susy {

std::string command_name(Command c) {
    switch (c) {
        case Command::catalog: return "catalog";
        case Command::factorize: return "factorize";
        case Command::spectrum: return "spectrum";
        case Command::extend: return "extend";
        case Command::deform: return "deform";
        case Command::verify: return "verify";
        case Command::scan: return "scan";
    }
    return "?";
}

namespace {

const std::map<std::string, Command>& command_table() {
    static const std::map<std::string, Command> t = {
        {"catalog", Command::catalog}, {"factorize", Command::factorize},
        {"spectrum", Command::spectrum}, {"extend", Command::extend},
        {"deform", Command::deform},   {"verify", Command::verify},
        {"scan", Command::scan}};
    return t;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Collector {
    std::vector<std::string> errors;

    void fail(int line, const std::string& msg) {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        os << msg;
        errors.push_back(os.str());
    }

    bool parse_double(int line, const std::string& key, const std::string& v, double& out) {
        try {
            std::size_t pos = 0;
            out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return true;
        } catch (const std::exception&) {
            fail(line, key + ": expected a number, got '" + v + "'");
            return false;
        }
    }

    bool parse_int(int line, const std::string& key, const std::string& v, int& out) {
        try {
            std::size_t pos = 0;
            out = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return true;
        } catch (const std::exception&) {
            fail(line, key + ": expected an integer, got '" + v + "'");
            return false;
        }
    }

    bool parse_bool(int line, const std::string& key, const std::string& v, bool& out) {
        if (v == "true" || v == "on" || v == "1") {
            out = true;
            return true;
        }
        if (v == "false" || v == "off" || v == "0") {
            out = false;
            return true;
        }
        fail(line, key + ": expected true/false, got '" + v + "'");
        return false;
    }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(errors.empty() ? "invalid configuration"
                                        : "invalid configuration: " + errors.front() +
                                              (errors.size() > 1 ? " (+" +
                                                                       std::to_string(errors.size() - 1) +
                                                                       " more)"
                                                                 : "")),
      errors_(std::move(errors)) {}

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    Collector col;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            col.fail(lineno, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) {
            col.fail(lineno, "empty key");
            continue;
        }

        if (key == "command") {
            auto it = command_table().find(val);
            if (it == command_table().end())
                col.fail(lineno, "unknown command '" + val + "'");
            else
                cfg.command = it->second;
        } else if (key == "family") {
            cfg.family = val;
        } else if (key == "family_params") {
            cfg.family_params.clear();
            std::istringstream vs(val);
            std::string item;
            while (std::getline(vs, item, ',')) {
                double d = 0.0;
                if (col.parse_double(lineno, key, trim(item), d)) cfg.family_params.push_back(d);
            }
        } else if (key == "lambda") {
            col.parse_double(lineno, key, val, cfg.lambda);
        } else if (key == "alpha") {
            col.parse_double(lineno, key, val, cfg.alpha);
        } else if (key == "eigenindex") {
            col.parse_int(lineno, key, val, cfg.eigenindex);
        } else if (key == "stages") {
            col.parse_int(lineno, key, val, cfg.stages);
        } else if (key == "margin") {
            col.parse_int(lineno, key, val, cfg.margin);
        } else if (key == "pole_window") {
            col.parse_double(lineno, key, val, cfg.pole_window);
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "grid.a") {
            col.parse_double(lineno, key, val, cfg.grid.a);
        } else if (key == "grid.b") {
            col.parse_double(lineno, key, val, cfg.grid.b);
        } else if (key == "grid.n") {
            col.parse_int(lineno, key, val, cfg.grid.n);
        } else if (key == "solver.k_levels") {
            col.parse_int(lineno, key, val, cfg.solver.k_levels);
        } else if (key == "solver.richardson") {
            col.parse_bool(lineno, key, val, cfg.solver.richardson);
        } else if (key == "tolerances.residual") {
            col.parse_double(lineno, key, val, cfg.tolerances.residual);
        } else if (key == "tolerances.spectral") {
            col.parse_double(lineno, key, val, cfg.tolerances.spectral);
        } else {
            col.fail(lineno, "unknown key '" + key + "'");
        }
    }

    // semantic validation, aggregated
    if (cfg.grid.n < 3) col.fail(0, "grid.n must be >= 3");
    if (!(cfg.grid.b > cfg.grid.a)) col.fail(0, "grid.b must exceed grid.a");
    if (cfg.alpha == 0.0) col.fail(0, "alpha must be nonzero (the shifted parameter mu must differ from lambda)");
    if (cfg.eigenindex < 0) col.fail(0, "eigenindex must be >= 0");
    if (cfg.stages < 0) col.fail(0, "stages must be >= 0");
    if (cfg.stages > 6) col.fail(0, "stages must be <= 6");
    if (cfg.solver.k_levels < 1) col.fail(0, "solver.k_levels must be >= 1");
    if (!(cfg.tolerances.residual > 0.0)) col.fail(0, "tolerances.residual must be positive");
    if (!(cfg.tolerances.spectral > 0.0)) col.fail(0, "tolerances.spectral must be positive");
    if (cfg.margin < 0) col.fail(0, "margin must be >= 0");
    if (!(cfg.pole_window >= 0.0)) col.fail(0, "pole_window must be >= 0");
    if (cfg.output_dir.empty()) col.fail(0, "output_dir must not be empty");
    try {
        const auto& fam = lookup_family(cfg.family);
        if (!cfg.family_params.empty()) fam.validate_params(ParameterPoint{cfg.family_params});
    } catch (const std::exception& e) {
        col.fail(0, e.what());
    }

    if (!col.errors.empty()) throw ConfigError(std::move(col.errors));
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "command = " << command_name(c.command) << "\n";
    os << "family = " << c.family << "\n";
    if (!c.family_params.empty()) {
        os << "family_params = ";
        for (std::size_t i = 0; i < c.family_params.size(); ++i) {
            if (i) os << ", ";
            os << format_double(c.family_params[i]);
        }
        os << "\n";
    }
    os << "lambda = " << format_double(c.lambda) << "\n";
    os << "alpha = " << format_double(c.alpha) << "\n";
    os << "eigenindex = " << c.eigenindex << "\n";
    os << "stages = " << c.stages << "\n";
    os << "margin = " << c.margin << "\n";
    os << "pole_window = " << format_double(c.pole_window) << "\n";
    os << "output_dir = " << c.output_dir << "\n";
    os << "grid.a = " << format_double(c.grid.a) << "\n";
    os << "grid.b = " << format_double(c.grid.b) << "\n";
    os << "grid.n = " << c.grid.n << "\n";
    os << "solver.k_levels = " << c.solver.k_levels << "\n";
    os << "solver.richardson = " << (c.solver.richardson ? "true" : "false") << "\n";
    os << "tolerances.residual = " << format_double(c.tolerances.residual) << "\n";
    os << "tolerances.spectral = " << format_double(c.tolerances.spectral) << "\n";
    return os.str();
}

}  // namespace susy
