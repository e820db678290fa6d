// Command-line front end: runs one pipeline stage over a sample set and
// writes a JSON report. Exit status 0 iff every assertion passed.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bicontact/errors.hpp"
#include "bicontact/examples.hpp"
#include "bicontact/report.hpp"

namespace {

bicontact::Point parse_point(const std::string& text) {
  bicontact::Point p;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    p.push_back(std::stod(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bicontact;
  CLI::App app{"Invariants of bi-contact structures on coframed 3- and 4-manifolds"};
  app.set_version_flag("--version", std::string(kToolVersion));

  RunConfig cfg;
  std::vector<std::string> params, at;
  std::string box, out;
  app.add_option("command", cfg.command, "check | invariants | classify | taut | curvature | fourdim | normal-form | example")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("input", cfg.input, "coframe file (or the example name for `example`)");
  app.add_option("--example", cfg.example, "built-in example instead of a file")
      ->check(CLI::IsMember(example_names()));
  app.add_option("--param", params, "k=v parameter override (repeatable)");
  app.add_option("--order", cfg.order, "jet order K")->capture_default_str();
  app.add_option("--tol-shallow", cfg.tol.shallow, "tolerance for first-derivative identities")
      ->capture_default_str();
  app.add_option("--tol-deep", cfg.tol.deep, "tolerance for deeper identities")->capture_default_str();
  app.add_option("--points", cfg.points, "number of sample points")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  app.add_option("--box", box, "sampling box lo:hi,...");
  app.add_option("--at", at, "explicit sample point x,y,z[,w] (repeatable)");
  app.add_option("--out", out, "report path (default stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage problems share the error status; --help and --version still exit 0
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& kv : params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--param expects k=v, got '" + kv + "'");
      cfg.params.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!box.empty()) cfg.box = parse_box(box);
    for (const auto& p : at) cfg.at.push_back(parse_point(p));
  } catch (const std::exception& e) {
    std::cerr << "bicontact: " << e.what() << "\n";
    return 2;
  }

  Report rep = run(cfg);
  std::string text = to_json_text(rep.json);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "bicontact: cannot write " << out << "\n";
      return 2;
    }
    f << text;
  }
  if (!rep.pass) std::cerr << "bicontact: assertions failed (see summary/errors in the report)\n";
  return rep.exit_code;
}
