#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "hitspec/report.hpp"

namespace hitspec::cli {

enum ExitStatus : int {
  kPassed = 0,
  kAssertionFailed = 1,
  kInvalidInput = 2,
  kNumericFailure = 3,
};

struct CheckOutcome {
  std::string check;
  std::optional<VerificationReport> report;
  ExitStatus status = kPassed;
  std::string error;
};

// Runs one check; library errors propagate.
VerificationReport run_check(const std::string& check, const RunConfig& config);

// Runs the checks on min(workers, checks) threads; errors are captured per check.
std::vector<CheckOutcome> run_checks(const RunConfig& config, const std::vector<std::string>& checks);

// report-<check>.json and curves-<check>.csv for every completed check,
// plus config.ini with the effective configuration.
void write_outputs(const RunConfig& config, const std::vector<CheckOutcome>& outcomes);

// The worst status: invalid input, then numeric failure, then assertion failure.
ExitStatus combined_status(const std::vector<CheckOutcome>& outcomes);

void print_summary(std::ostream& out, const std::vector<CheckOutcome>& outcomes);
nlohmann::json summary_json(const std::vector<CheckOutcome>& outcomes);

nlohmann::json list_models_json(const std::string& tag = {});
void print_models(std::ostream& out, const std::string& tag = {});

// Residual max_i |e_1(i) sqrt(m(I)) - 1| of a bottom eigenvector against
// the normalized constant, with the sign of e_1 fixed by its sum.
double constant_vector_residual(const SpectralDecomposition& dec);

}  // namespace hitspec::cli
