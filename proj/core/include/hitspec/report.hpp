#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hitspec {

struct Quantity {
  std::string name;
  double value = 0.0;
  std::string route;
};

struct Assertion {
  std::string name;
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// Column-oriented table written as CSV.
struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  void write_csv(std::ostream& out) const;
};

struct VerificationReport {
  std::string check;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<Quantity> quantities;
  std::vector<Assertion> assertions;
  nlohmann::json tolerances = nlohmann::json::object();
  std::vector<std::string> notes;
  CurveTable curves;
  double runtime_seconds = 0.0;

  void add_quantity(std::string name, double value, std::string route);
  // Records the assertion and returns its verdict.
  bool assert_that(std::string name, bool passed, double lhs, double rhs, double tolerance,
                   std::string detail = {});
  bool passed() const;
  std::size_t failures() const;
  // First quantity with this name; throws InputError if absent.
  double quantity(const std::string& name) const;

  nlohmann::json to_json() const;
};

// Non-finite doubles become the strings "inf", "-inf", "nan".
nlohmann::json json_number(double v);

// Relative agreement |a - b| <= tol * max(|a|, |b|); two equal infinities agree.
bool relatively_close(double a, double b, double tol);
double relative_difference(double a, double b);

// (rhs - lhs) / max(|lhs|, |rhs|), zero when both sides vanish. Non-negative
// exactly when lhs <= rhs.
double relative_slack(double lhs, double rhs);

}  // namespace hitspec
