#include "pbclab/cli.hpp"

#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "pbc/errors.hpp"
#include "pbc/io.hpp"

namespace pbclab {
namespace {

void emit(const Result& result, const ExperimentConfig& config, std::ostream& out) {
  std::string text;
  if (config.format == "csv") {
    if (!result.csv) throw CLI::ValidationError("--format", "csv output is only available for tabular results");
    text = *result.csv;
  } else {
    text = pbc::canonical_json(result.body.dump()) + "\n";
  }
  if (config.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output_path, std::ios::binary);
  if (!file) throw pbc::ParseError("cannot open output file", config.output_path);
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Position-based coding and hypothesis-testing laboratory", "pbclab"};
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig config;
  app.add_option("--seed", config.seed, "Seed for every sampled quantity")->capture_default_str();
  app.add_option("--out", config.output_path, "Write the result here instead of stdout");
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--tol-check", config.tol_check, "Slack for inequality sweeps");
  app.add_option("--tol-bound", config.tol_bound, "Allowed excess of an exact error over its bound")
      ->capture_default_str();
  app.add_option("--tol-residual", config.tol_residual, "Allowed identity residual")->capture_default_str();
  app.add_option("--tol-region", config.tol_region, "Region membership tolerance")->capture_default_str();

  Action action;
  register_state_commands(app, config, action);
  register_p2p_commands(app, config, action);
  register_mac_commands(app, config, action);
  register_check_commands(app, config, action);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    const Result result = action();
    emit(result, config, out);
    return result.check_failed ? kCheckFailed : kOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const pbc::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const pbc::BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace pbclab
