#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "taubethe/cli.hpp"

namespace tc = taubethe::cli;

namespace {

int input_failure(const std::string& command, const std::string& message, const std::string& out) {
  tc::json rep = {{"schema", tc::kSchema},
                  {"version", tc::kVersion},
                  {"command", command},
                  {"error", {{"kind", "InvalidInput"}, {"message", message}}},
                  {"passed", false},
                  {"exit_code", tc::kInputError}};
  const std::string text = tc::dump_report(rep);
  if (out.empty()) std::cout << text;
  else std::ofstream(out) << text;
  std::cerr << "taubethe: " << message << "\n";
  return tc::kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bethe-ansatz scalar products as KP tau functions"};
  app.set_version_flag("--version", tc::kVersion);
  std::string command, config_path, out_path;
  std::optional<double> perturb;
  std::optional<int> precision;
  std::optional<std::uint64_t> seed;
  std::string names;
  for (const auto& n : tc::command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "one of: " + names)->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--perturb", perturb, "relative perturbation of the Bethe roots (tau-check)");
  app.add_option("--precision", precision, "working precision in bits (128 or 256)");
  app.add_option("--seed", seed, "seed for the solver and sampled points");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tc::kInputError;
  }

  const auto cmd = tc::parse_command(command);
  if (!cmd) return input_failure(command, "unknown command '" + command + "'", out_path);

  tc::json doc;
  {
    std::ifstream in(config_path);
    if (!in) return input_failure(command, "cannot open config '" + config_path + "'", out_path);
    try {
      doc = tc::json::parse(in);
    } catch (const tc::json::exception& e) {
      return input_failure(command, std::string("malformed JSON: ") + e.what(), out_path);
    }
  }

  const auto result = tc::run(*cmd, doc, tc::RunOptions{perturb, precision, seed});
  const std::string text = tc::dump_report(result.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "taubethe: cannot write '" << out_path << "'\n";
      return tc::kInputError;
    }
    out << text;
  }
  if (result.report.contains("error")) std::cerr << "taubethe: " << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}
