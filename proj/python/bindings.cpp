#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "taubethe/cli.hpp"

namespace py = pybind11;
namespace tc = taubethe::cli;

namespace {

py::tuple run_command(const std::string& command, const std::string& config, std::optional<double> perturb,
                      std::optional<int> precision, std::optional<std::uint64_t> seed) {
  const auto cmd = tc::parse_command(command);
  if (!cmd) throw py::value_error("unknown command '" + command + "'");
  tc::json doc;
  try {
    doc = tc::json::parse(config);
  } catch (const tc::json::exception& e) {
    throw py::value_error(std::string("malformed JSON: ") + e.what());
  }
  tc::RunResult r;
  {
    py::gil_scoped_release release;
    r = tc::run(*cmd, doc, tc::RunOptions{perturb, precision, seed});
  }
  return py::make_tuple(tc::dump_report(r.report), r.exit_code);
}

}  // namespace

PYBIND11_MODULE(_taubethe, m) {
  m.doc() = "Bethe-ansatz scalar products as KP tau functions";
  m.attr("__version__") = tc::kVersion;
  m.attr("SCHEMA") = tc::kSchema;
  m.def("command_names", &tc::command_names, "Names accepted by run().");
  m.def("run", &run_command, py::arg("command"), py::arg("config"), py::arg("perturb") = py::none(),
        py::arg("precision") = py::none(), py::arg("seed") = py::none(),
        "Run one command on a JSON config string; returns (report_json, exit_code).");
}
