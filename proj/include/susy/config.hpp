#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace susy {

enum class Command { catalog, factorize, spectrum, extend, deform, verify, scan };

std::string command_name(Command c);

/// One batch run. Flat key-value text with one nesting level for
/// grid/solver/tolerances; all defaults are embedded in the binary.
struct RunConfig {
    Command command = Command::verify;
    std::string family = "harmonic_oscillator";
    std::vector<double> family_params;  // empty: family defaults
    double lambda = 1.0;
    double alpha = 1.0;
    int eigenindex = 1;
    int stages = 1;
    struct {
        double a = -8.0;
        double b = 8.0;
        int n = 2001;
    } grid;
    struct {
        int k_levels = 5;
        bool richardson = true;
    } solver;
    struct {
        double residual = 2e-2;
        double spectral = 1e-4;
    } tolerances;
    int margin = 2;             // boundary points excluded from residuals
    double pole_window = 0.5;   // pole exclusion half-width, x units
    std::string output_dir = "out";
};

/// Carries every validation problem found, not just the first.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

RunConfig default_config();

/// Parses and fully validates; throws ConfigError listing all problems.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);

/// Canonical text form; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& c);

}  // namespace susy
