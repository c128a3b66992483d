#pragma once

#include "susy/grid.hpp"
#include "susy/residual.hpp"

#include <string>
#include <utility>
#include <vector>

namespace susy {

/// Shortest round-trippable decimal form of a double ("%.17g").
std::string format_double(double v);

/// Flat key-value report, written in insertion order so identical runs
/// produce byte-identical files.
class ReportWriter {
  public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
    void add(const std::string& key, bool value);
    void add_residual(const std::string& prefix, const ResidualReport& r);

    std::string str() const;
    void write(const std::string& path) const;

  private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

/// Tab-separated numeric table with a '#'-prefixed header line.
void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& data);

/// Convenience: two-column (x, value) table of a grid function.
void write_table(const std::string& path, const std::string& value_name, const GridFunction& f);

}  // namespace susy
