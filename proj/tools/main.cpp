#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using namespace hitspec::cli;

struct Flags {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool json = false;
  std::string tag;
};

RunConfig effective_config(const Flags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) config = load_config(flags.config_path);
  if (flags.out) config.output_dir = *flags.out;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.workers) config.workers = *flags.workers;
  validate(config);
  return config;
}

int execute(const Flags& flags, const std::optional<std::string>& single_check) {
  const RunConfig config = effective_config(flags);
  std::vector<std::string> checks = single_check ? std::vector<std::string>{*single_check} : config.checks;
  if (checks.empty()) throw ConfigError("no checks requested; set 'checks' in the config");
  RunConfig recorded = config;
  recorded.checks = checks;
  const auto outcomes = run_checks(recorded, checks);
  write_outputs(recorded, outcomes);
  if (flags.json) {
    std::cout << summary_json(outcomes).dump(2) << '\n';
  } else {
    print_summary(std::cout, outcomes);
  }
  return combined_status(outcomes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and Monte Carlo checks for hitting times of one-dimensional diffusions"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", flags.out, "Output directory (overrides output_dir)");
  app.add_option("--seed", flags.seed, "Random seed (overrides seed)");
  app.add_option("--workers", flags.workers, "Worker threads (overrides workers)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", flags.json, "Machine-readable output on stdout");

  std::optional<std::string> single;
  const std::vector<std::pair<std::string, std::string>> checks{
      {"spectrum", "Eigenvalues of the discretized generator"},
      {"moments", "Hitting-time moments by the Dynkin recursion"},
      {"verify-equality", "Solve, spectral and time-integral routes of the modulated moment"},
      {"verify-nash-killed", "Nash inequality for the killed semigroup"},
      {"verify-nash-whole", "Nash inequality on the whole line via a split point"},
      {"verify-decay", "Variance decay slope of the reflected semigroup"},
      {"threshold-study", "Convergence of the Nash functional under truncation"},
      {"simulate-hitting", "Monte Carlo hitting-time moments"},
      {"deviation", "Monte Carlo deviation probabilities of occupation averages"}};
  for (const auto& [name, help] : checks) {
    app.add_subcommand(name, help)->callback([&single, n = name] { single = n; });
  }
  app.add_subcommand("run", "Run every check listed in the config");
  auto* list = app.add_subcommand("list-models", "Show the model catalog");
  list->add_option("--tag", flags.tag, "Only models carrying this tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (list->parsed()) {
      if (flags.json) {
        std::cout << list_models_json(flags.tag).dump(2) << '\n';
      } else {
        print_models(std::cout, flags.tag);
      }
      return kPassed;
    }
    return execute(flags, single);
  } catch (const hitspec::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}
