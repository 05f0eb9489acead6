// hfk: knot Floer homology of small grid diagrams.
//
// Exit codes: 0 ok, 1 internal error, 2 bad input, 3 size guard.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "khmut/grid.hpp"
#include "khmut/io.hpp"

using namespace khmut;
using nlohmann::json;

namespace {

struct GridArgs {
  std::string file, flavor = "hat", json_out;
  bool tau = false, delta = false;
  int max_hat = 8, max_minus = 6, truncation = 8;
};

int cmd_grid(const GridArgs& a) {
  // with --json - the JSON owns stdout
  static std::ostream null(nullptr);
  std::ostream& out = a.json_out == "-" ? null : std::cout;
  const GridDiagram g = grid_from_json(parse_json_text(read_file(a.file), a.file));
  GridOptions opt;
  opt.max_size_hat = a.max_hat;
  opt.max_size_minus = a.max_minus;
  opt.truncation = a.truncation;
  json j = {{"grid", grid_to_json(g)}, {"components", g.num_components()}};
  out << "grid " << g.size << "x" << g.size << ", " << g.num_components() << " component(s)\n";
  if (a.flavor == "hat") {
    const BigradedDims h = hat_hfk(g, opt);
    out << format_hfk_grid(h) << "total " << h.total() << '\n';
    if (a.delta) out << "delta " << format_delta(hfk_delta_collapse(h)) << '\n';
    j["hfk"] = hfk_json(h);
  } else {
    const MinusHFK m = minus_hfk(g, opt);
    out << "towers " << format_table(m.towers) << '\n';
    for (const auto& [k, gens] : m.torsion) out << "torsion U^" << k << " " << format_table(gens) << '\n';
    out << "truncated at U^" << m.truncation << (m.stable() ? " (stable at +2)" : " (NOT stable at +2)") << '\n';
    out << format_hfk_grid(m.truncated());
    if (a.delta) out << "delta " << format_delta(hfk_delta_collapse(m.truncated())) << '\n';
    j["hfk"] = minus_json(m);
  }
  if (a.tau) {
    const int t = tau(g, opt);
    out << "tau " << t << '\n';
    j["tau"] = t;
  }
  if (a.json_out == "-") {
    std::cout << j.dump(2) << '\n';
  } else if (!a.json_out.empty()) {
    std::ofstream file(a.json_out);
    if (!file) throw ParseError("cannot write " + a.json_out);
    file << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knot Floer homology from grid diagrams"};
  app.require_subcommand(1);
  GridArgs ga;
  auto* grid = app.add_subcommand("grid", "HFK of a grid {\"size\",\"O\",\"X\"}");
  grid->add_option("--file", ga.file, "grid JSON")->required();
  grid->add_option("--flavor", ga.flavor, "hat or minus")->check(CLI::IsMember({"hat", "minus"}));
  grid->add_flag("--tau", ga.tau, "report tau (knots only)");
  grid->add_flag("--delta", ga.delta, "print the delta-graded collapse");
  grid->add_option("--max-size", ga.max_hat, "largest grid for the hat flavor");
  grid->add_option("--max-size-minus", ga.max_minus, "largest grid for the minus flavor and tau");
  grid->add_option("--truncation", ga.truncation, "U-power for truncated minus dims");
  grid->add_option("--json", ga.json_out, "write JSON here ('-' for stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return cmd_grid(ga);
  } catch (const SizeGuardError& e) {
    std::cerr << "hfk: " << e.what() << '\n';
    return 3;
  } catch (const GridError& e) {
    std::cerr << "hfk: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "hfk: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hfk: " << e.what() << '\n';
    return 1;
  }
}
