#include "susy/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace susy {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ReportWriter::add(const std::string& key, const std::string& value) {
    lines_.emplace_back(key, value);
}
void ReportWriter::add(const std::string& key, double value) { add(key, format_double(value)); }
void ReportWriter::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void ReportWriter::add(const std::string& key, bool value) {
    add(key, std::string(value ? "true" : "false"));
}

void ReportWriter::add_residual(const std::string& prefix, const ResidualReport& r) {
    add(prefix + ".max_abs", r.max_abs);
    add(prefix + ".mean_abs", r.mean_abs);
    add(prefix + ".argmax_x", r.argmax_x);
    add(prefix + ".margin", r.excluded_margin);
}

std::string ReportWriter::str() const {
    std::ostringstream os;
    for (const auto& [k, v] : lines_) os << k << " = " << v << "\n";
    return os.str();
}

void ReportWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << str();
}

void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "#";
    for (const auto& c : columns) out << "\t" << c;
    out << "\n";
    if (data.empty()) return;
    const std::size_t rows = data.front().size();
    for (const auto& col : data) {
        if (col.size() != rows) throw std::invalid_argument("write_table: ragged columns");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < data.size(); ++c) {
            if (c) out << "\t";
            out << format_double(data[c][r]);
        }
        out << "\n";
    }
}

void write_table(const std::string& path, const std::string& value_name, const GridFunction& f) {
    std::vector<double> xs(f.size()), vs(f.size());
    for (int i = 0; i < f.size(); ++i) {
        xs[i] = f.x(i);
        vs[i] = f[i];
    }
    write_table(path, {"x", value_name}, {xs, vs});
}

}  // namespace susy
