#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taubethe/cli.hpp"

using namespace taubethe::cli;

namespace {

json chain_config(int n, int m, std::uint64_t seed = 7) {
  const char* zs[] = {"0.9+0.3i", "-0.4+1.1i", "1.2-0.5i", "-1.0-0.6i", "0.3+0.8i", "0.7-1.0i"};
  json z = json::array();
  for (int i = 0; i < m; ++i) z.push_back(zs[i]);
  return {{"M", m}, {"N", n}, {"q", "0.55+0.5i"}, {"z", z}, {"seed", seed}, {"num_solutions", 1}};
}

json strip_time(json r) {
  r.erase("wall_time_s");
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("command names round trip") {
  for (const auto& n : command_names()) {
    const auto c = parse_command(n);
    REQUIRE(c.has_value());
    CHECK(command_name(*c) == n);
  }
  CHECK_FALSE(parse_command("nonsense").has_value());
  CHECK(command_names().size() == 7u);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(chain_config(2, 3)));
  auto bad = chain_config(2, 3);
  bad["N"] = 4;
  CHECK_THROWS_AS(parse_config(bad), taubethe::Error);
  CHECK(run(Command::BetheSolve, bad).exit_code == kInputError);
  bad = chain_config(2, 3);
  bad["z"].erase(0);
  CHECK(run(Command::BetheSolve, bad).exit_code == kInputError);
  bad = chain_config(2, 3);
  bad.erase("q");
  CHECK(run(Command::BetheSolve, bad).exit_code == kInputError);
  bad = chain_config(2, 3);
  bad["q"] = "abc";
  CHECK(run(Command::BetheSolve, bad).exit_code == kInputError);
  bad = chain_config(2, 3);
  bad["seed"] = -3;
  CHECK(run(Command::BetheSolve, bad).exit_code == kInputError);
  bad = chain_config(2, 3);
  bad["tolerances"] = {{"tau", -1.0}};
  CHECK(run(Command::BetheSolve, bad).exit_code == kInputError);
  CHECK(run(Command::BetheSolve, json::array()).exit_code == kInputError);
  CHECK(run(Command::BetheSolve, chain_config(2, 3), RunOptions{std::nullopt, 64, std::nullopt}).exit_code == kInputError);
  CHECK(run(Command::BetheSolve, chain_config(2, 3), RunOptions{1e-2, std::nullopt, std::nullopt}).exit_code == kInputError);
  CHECK(run(Command::TauCheck, chain_config(2, 3), RunOptions{-1.0, std::nullopt, std::nullopt}).exit_code == kInputError);
}

TEST_CASE("report envelope") {
  const auto r = run(Command::BetheSolve, chain_config(2, 3));
  CHECK(r.report.at("schema") == 1);
  CHECK(r.report.at("command") == "bethe-solve");
  CHECK(r.report.at("version") == kVersion);
  CHECK(r.report.contains("wall_time_s"));
  CHECK(r.report.at("exit_code") == r.exit_code);
  CHECK(r.report.at("passed") == (r.exit_code == kPass));
  const auto bad = run(Command::BetheSolve, json::object());
  CHECK(bad.report.at("schema") == 1);
  CHECK(bad.report.contains("error"));
}

TEST_CASE("every command passes on a small chain") {
  for (const auto& n : command_names()) {
    CAPTURE(n);
    const auto c = *parse_command(n);
    const auto r = run(c, c == Command::Dwpf ? chain_config(1, 1) : chain_config(2, 3));
    CHECK(r.exit_code == kPass);
    CHECK(r.report.at("passed") == true);
  }
}

TEST_CASE("tau-check: Bethe roots pass and perturbed roots fail") {
  const auto ok = run(Command::TauCheck, chain_config(2, 3));
  CHECK(ok.exit_code == kPass);
  CHECK(ok.report["results"]["is_tau"] == true);
  const auto pert = run(Command::TauCheck, chain_config(2, 3), RunOptions{1e-2, std::nullopt, std::nullopt});
  CHECK(pert.exit_code == kMathFailure);
  CHECK(pert.report["results"]["is_tau"] == false);
  for (const auto& e : pert.report["results"]["expansions"]) {
    CHECK(e["verdict"]["is_tau"] == false);
    CHECK(e["kappa_path_verdict"]["is_tau"] == true);
    CHECK(e.contains("perturbed_y"));
  }
}

TEST_CASE("dwpf needs a square chain") {
  const auto r = run(Command::Dwpf, chain_config(2, 3));
  CHECK(r.exit_code == kInputError);
  CHECK(r.report["error"]["kind"] == "DimensionMismatch");
  CHECK(run(Command::Dwpf, chain_config(3, 3)).exit_code == kPass);
}

TEST_CASE("sectors without isolated solutions report non-convergence") {
  const auto r = run(Command::BetheSolve, chain_config(2, 2));
  CHECK(r.exit_code == kNoConvergence);
  CHECK(r.report["error"]["kind"] == "NoConvergence");
}

TEST_CASE("precision override") {
  auto r = run(Command::BetheSolve, chain_config(1, 2), RunOptions{std::nullopt, 256, std::nullopt});
  CHECK(r.exit_code == kPass);
  CHECK(r.report["precision_bits"] == 256);
}

TEST_CASE("identity-check") {
  const auto r = run(Command::IdentityCheck, chain_config(1, 1));
  CHECK(r.exit_code == kPass);
  CHECK(r.report["verdicts"]["exact_identities"] == true);
  for (const auto& [name, c] : r.report["results"].items()) {
    CAPTURE(name);
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("reports are deterministic and round trip through JSON") {
  const auto a = run(Command::ScalarProduct, chain_config(2, 3, 11));
  const auto b = run(Command::ScalarProduct, chain_config(2, 3, 11));
  CHECK(strip_time(a.report) == strip_time(b.report));
  const auto text = dump_report(a.report);
  CHECK(dump_report(json::parse(text)) == text);
  const auto s1 = run(Command::ScalarProduct, chain_config(2, 3, 11), RunOptions{std::nullopt, std::nullopt, 5});
  CHECK(s1.report["seed"] == 5);
}

TEST_CASE("binary: exit codes and output file") {
  const char* bin = std::getenv("TAUBETHE_BIN");
  if (!bin) {
    MESSAGE("TAUBETHE_BIN not set; skipping binary checks");
    return;
  }
  const auto dir = std::filesystem::temp_directory_path() / "taubethe_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "cfg.json";
  const auto bad = dir / "bad.json";
  const auto out = dir / "out.json";
  std::ofstream(cfg) << chain_config(2, 3).dump();
  std::ofstream(bad) << "{ not json";
  const std::string b = std::string("\"") + bin + "\"";
  const std::string quiet = " >/dev/null 2>&1";
  CHECK(shell(b + " bethe-solve --config " + cfg.string() + " --out " + out.string() + quiet) == 0);
  const auto rep = json::parse(slurp(out));
  CHECK(rep["schema"] == 1);
  CHECK(slurp(out) == dump_report(rep));
  CHECK(shell(b + " tau-check --config " + cfg.string() + " --perturb 1e-2" + quiet) == 1);
  CHECK(shell(b + " nonsense --config " + cfg.string() + quiet) == 2);
  CHECK(shell(b + " bethe-solve --config " + bad.string() + quiet) == 2);
  CHECK(shell(b + " bethe-solve --config " + (dir / "missing.json").string() + quiet) == 2);
  CHECK(shell(b + " bethe-solve" + quiet) == 2);
  std::ofstream(cfg) << chain_config(2, 2).dump();
  CHECK(shell(b + " bethe-solve --config " + cfg.string() + quiet) == 3);
  std::filesystem::remove_all(dir);
}
