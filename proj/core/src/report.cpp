#include "hitspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <algorithm>
#include <ostream>

#include "hitspec/error.hpp"

namespace hitspec {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void CurveTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw InputError("curve table: row width mismatch");
  rows.push_back(std::move(row));
}

void CurveTable::write_csv(std::ostream& out) const {
  for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << columns[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
}

void VerificationReport::add_quantity(std::string name, double value, std::string route) {
  quantities.push_back({std::move(name), value, std::move(route)});
}

bool VerificationReport::assert_that(std::string name, bool ok, double lhs, double rhs,
                                     double tolerance, std::string detail) {
  assertions.push_back({std::move(name), ok, lhs, rhs, tolerance, std::move(detail)});
  return ok;
}

bool VerificationReport::passed() const { return failures() == 0; }

std::size_t VerificationReport::failures() const {
  std::size_t n = 0;
  for (const auto& a : assertions) n += a.passed ? 0 : 1;
  return n;
}

double VerificationReport::quantity(const std::string& name) const {
  for (const auto& q : quantities) {
    if (q.name == name) return q.value;
  }
  throw InputError("report " + check + " has no quantity " + name);
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["name"] = check;
  j["inputs"] = inputs;
  j["tolerances"] = tolerances;
  auto& qs = j["quantities"] = nlohmann::json::array();
  for (const auto& q : quantities) {
    qs.push_back({{"name", q.name}, {"value", json_number(q.value)}, {"route", q.route}});
  }
  auto& as = j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions) {
    nlohmann::json entry = {{"name", a.name},
                            {"pass", a.passed},
                            {"lhs", json_number(a.lhs)},
                            {"rhs", json_number(a.rhs)},
                            {"tolerance", json_number(a.tolerance)}};
    if (!a.detail.empty()) entry["detail"] = a.detail;
    as.push_back(std::move(entry));
  }
  j["notes"] = notes;
  j["passed"] = passed();
  j["runtime_seconds"] = runtime_seconds;
  return j;
}

double relative_difference(double a, double b) {
  if (a == b) return 0.0;
  if (std::isnan(a) || std::isnan(b) || std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::infinity();
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

bool relatively_close(double a, double b, double tol) { return relative_difference(a, b) <= tol; }

double relative_slack(double lhs, double rhs) {
  const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
  if (scale == 0.0) return 0.0;
  if (std::isinf(scale)) return lhs == rhs ? 0.0 : (rhs > lhs ? 1.0 : -1.0);
  return (rhs - lhs) / scale;
}

}  // namespace hitspec
