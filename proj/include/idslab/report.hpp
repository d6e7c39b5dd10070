#ifndef IDSLAB_REPORT_HPP
#define IDSLAB_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace idslab {

// Locale-independent shortest-faithful decimal text for CSV cells.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // rhs + tolerance - lhs
  bool holds = false;

  nlohmann::json to_json() const {
    return {{"name", name},           {"lhs", lhs},
            {"rhs", rhs},             {"tolerance", tolerance},
            {"margin", margin},       {"holds", holds}};
  }
};

struct Curve {
  std::string name;                       // file stem
  std::vector<std::string> columns;       // header row
  std::vector<std::vector<double>> rows;
};

// Structured record of one verification run. Serialization is stable
// (sorted JSON keys, fixed float formatting), which is what makes rerun
// outputs byte-comparable.
struct ExperimentReport {
  std::string id;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json per_sample = nlohmann::json::array();
  nlohmann::json aggregates = nlohmann::json::object();
  std::vector<BoundCheck> checks;
  std::vector<Curve> curves;
  bool verdict = true;

  // Asserts lhs <= rhs + tolerance.
  BoundCheck& add_check(std::string name, double lhs, double rhs,
                        double tolerance) {
    BoundCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.tolerance = tolerance;
    c.margin = rhs + tolerance - lhs;
    c.holds = lhs <= rhs + tolerance;
    verdict = verdict && c.holds;
    checks.push_back(std::move(c));
    return checks.back();
  }

  nlohmann::json to_json() const {
    nlohmann::json checks_json = nlohmann::json::array();
    for (const auto& c : checks) checks_json.push_back(c.to_json());
    return {{"experiment", id},        {"inputs", inputs},
            {"per_sample", per_sample}, {"aggregates", aggregates},
            {"checks", checks_json},   {"verdict", verdict}};
  }
};

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

inline std::string curve_to_csv(const Curve& curve) {
  std::string text;
  for (std::size_t i = 0; i < curve.columns.size(); ++i) {
    if (i) text += ',';
    text += curve.columns[i];
  }
  text += '\n';
  for (const auto& row : curve.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += format_double(row[i]);
    }
    text += '\n';
  }
  return text;
}

// One CSV per curve; file names derive from the curve names, which are
// fixed per experiment id. Returns the paths written.
inline std::vector<std::filesystem::path> emit_plot_data(
    const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const Curve& curve : report.curves) {
    const std::filesystem::path path = dir / (curve.name + ".csv");
    write_text_file(path, curve_to_csv(curve));
    written.push_back(path);
  }
  return written;
}

// report.json plus all plot curves.
inline std::vector<std::filesystem::path> write_report(
    const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const std::filesystem::path json_path = dir / "report.json";
  write_text_file(json_path, report.to_json().dump(2) + "\n");
  written.push_back(json_path);
  auto curves = emit_plot_data(report, dir);
  written.insert(written.end(), curves.begin(), curves.end());
  return written;
}

}  // namespace idslab

#endif  // IDSLAB_REPORT_HPP
