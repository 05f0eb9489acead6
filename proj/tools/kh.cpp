// kh: Khovanov homology of PD fixtures, twist families and mutant pairs.
//
// Exit codes: 0 ok, 1 internal error, 2 bad input, 3 size guard.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "khmut/diagram.hpp"
#include "khmut/io.hpp"
#include "khmut/khovanov.hpp"
#include "khmut/lee.hpp"
#include "khmut/skein.hpp"

using namespace khmut;
using nlohmann::json;

namespace {

struct Loaded {
  PlanarDiagram d;
  json meta;  // the fixture object, or null for bare PD text
};

Loaded load_diagram(const std::string& path) {
  const std::string text = read_file(path);
  Loaded out{parse_pd(text), nullptr};
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') out.meta = parse_json_text(text, path);
  return out;
}

KhOptions options_from_env(const std::string& order) {
  KhOptions opt;
  if (const char* env = std::getenv("KH_MAX_CROSSINGS")) {
    try {
      opt.max_crossings = std::stoi(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("KH_MAX_CROSSINGS is not an integer: ") + env);
    }
  }
  if (order == "greedy") opt.order = CrossingOrder::Greedy;
  return opt;
}

// With --json - the JSON owns stdout and the text report is dropped.
std::ostream& text_out(const std::string& json_out) {
  static std::ostream null(nullptr);
  if (json_out == "-") return null;
  return std::cout;
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// -- kh compute ---------------------------------------------------------------

struct ComputeArgs {
  std::string pd, ring = "Q", json_out, order = "input";
  bool reduced = false, delta = false, euler = false, lee = false;
};

int cmd_compute(const ComputeArgs& a) {
  std::ostream& out = text_out(a.json_out);
  const KhOptions opt = options_from_env(a.order);
  const Ring ring = parse_ring(a.ring);
  const PlanarDiagram d = load_diagram(a.pd).d;
  const BigradedDims b = a.reduced ? reduced_kh(d, ring, opt) : kh(d, ring, opt);
  out << format_table(b) << '\n';
  out << "total " << b.total() << '\n';
  if (a.delta) out << "delta " << format_delta(delta_collapse(b)) << '\n';
  if (a.euler) out << "euler " << graded_euler_characteristic(b).str() << '\n';
  json j = kh_json(b, ring, a.reduced);
  if (a.lee) {
    if (ring != Ring::Q) throw ParseError("--lee needs --ring Q");
    const LeeDecomposition dec = lee_decomposition(lee_complex(d, opt));
    j["lee"] = lee_json(dec, d.is_knot());
    if (j["lee"]["s"].is_null())
      out << "s undefined (" << d.num_components() << " components)\n";
    else
      out << "s " << j["lee"]["s"].get<int>() << '\n';
  }
  write_json(a.json_out, j);
  return 0;
}

// -- kh family ----------------------------------------------------------------

struct FamilyArgs {
  std::string base, sweep, json_out, templ = "auto", order = "input";
  int twists = -1;
  int jobs = 1;
  bool no_s = false;
};

std::pair<int, int> parse_sweep(const std::string& s) {
  static const std::regex re(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ParseError("--sweep expects a..b, got '" + s + "'");
  const int a = std::stoi(m[1]), b = std::stoi(m[2]);
  if (a > b) throw ParseError("--sweep range is empty");
  return {a, b};
}

struct FamilyRow {
  int n = 0;
  BigradedDims kh;
  std::optional<int> s;
};

int cmd_family(const FamilyArgs& a) {
  std::ostream& out = text_out(a.json_out);
  const KhOptions opt = options_from_env(a.order);
  const Loaded base = load_diagram(a.base);
  if (!base.d.band_site()) throw ParseError(a.base + ": fixture has no band_site");
  int lo = 0, hi = 0;
  if (!a.sweep.empty()) {
    std::tie(lo, hi) = parse_sweep(a.sweep);
  } else {
    if (a.twists < 0) throw ParseError("give --twists n or --sweep a..b");
    lo = hi = a.twists;
  }
  std::optional<Family> fam;
  if (a.templ == "K") fam = Family::K;
  else if (a.templ == "Ktau") fam = Family::KTau;
  else if (a.templ == "auto") {
    if (base.meta.is_object() && base.meta.contains("family")) {
      const std::string f = base.meta["family"].get<std::string>();
      if (f == "K") fam = Family::K;
      if (f == "Ktau") fam = Family::KTau;
    }
  } else if (a.templ != "none") {
    throw ParseError("--template must be K, Ktau, auto or none");
  }

  auto work = [&](int n) {
    FamilyRow row;
    row.n = n;
    const PlanarDiagram d = generate_family({base.d, *base.d.band_site(), n});
    row.kh = kh<Rational>(d, opt);
    if (!a.no_s) row.s = s_if_knot(d, Ring::Q, opt);
    return row;
  };
  std::vector<FamilyRow> rows;
  if (a.jobs <= 1) {
    for (int n = lo; n <= hi; ++n) rows.push_back(work(n));
  } else {
    // Each n is independent; at most `jobs` in flight.
    std::vector<std::future<FamilyRow>> pending;
    for (int n = lo; n <= hi; ++n) {
      pending.push_back(std::async(std::launch::async, work, n));
      if (static_cast<int>(pending.size()) >= a.jobs) {
        rows.push_back(pending.front().get());
        pending.erase(pending.begin());
      }
    }
    for (auto& f : pending) rows.push_back(f.get());
  }

  json rows_json = json::array();
  bool all_match = true;
  for (const auto& r : rows) {
    out << "n=" << r.n << "  total " << r.kh.total();
    if (r.s) out << "  s " << *r.s;
    json j = {{"n", r.n}, {"kh", kh_json(r.kh, Ring::Q, false)}, {"s", r.s ? json(*r.s) : json(nullptr)}};
    if (fam && r.n >= 8) {
      const bool ok = r.kh == closed_form(*fam, r.n);
      all_match = all_match && ok;
      j["template"] = family_name(*fam);
      j["template_match"] = ok;
      out << "  template " << (ok ? "match" : "MISMATCH");
    } else {
      j["template_match"] = nullptr;
    }
    out << '\n' << "  " << format_table(r.kh) << '\n';
    rows_json.push_back(j);
  }
  write_json(a.json_out, rows_json);
  return all_match ? 0 : 4;
}

// -- kh compare ---------------------------------------------------------------

struct CompareArgs {
  std::string a, b, ring = "Q", json_out, order = "input";
};

int cmd_compare(const CompareArgs& a) {
  std::ostream& out = text_out(a.json_out);
  const KhOptions opt = options_from_env(a.order);
  const Ring ring = parse_ring(a.ring);
  const ComparisonReport r = compare_kh(load_diagram(a.a).d, load_diagram(a.b).d, ring, opt);
  json rep = comparison_json(r);
  rep["a"] = a.a;
  rep["b"] = a.b;
  auto s_str = [](const std::optional<int>& s) { return s ? std::to_string(*s) : std::string("-"); };
  out << "A " << a.a << "\n  " << format_table(r.kh_a) << '\n';
  out << "B " << a.b << "\n  " << format_table(r.kh_b) << '\n';
  out << "total " << r.kh_a.total() << " " << r.kh_b.total() << '\n';
  out << "bigraded_equal " << r.bigraded_equal() << '\n';
  out << "delta_a " << format_delta(r.delta_a()) << '\n';
  out << "delta_b " << format_delta(r.delta_b()) << '\n';
  out << "delta_swap " << r.delta_swap() << '\n';
  out << "euler_equal " << r.euler_equal() << '\n';
  out << "s " << s_str(r.s_a) << " " << s_str(r.s_b) << '\n';
  write_json(a.json_out, rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology of knot diagrams"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Kh of one diagram");
  compute->add_option("--pd", ca.pd, "PD fixture (JSON or PD[...] text)")->required();
  compute->add_option("--ring", ca.ring, "Q or F2")->check(CLI::IsMember({"Q", "F2"}));
  compute->add_flag("--reduced", ca.reduced, "reduced homology at the fixture basepoint");
  compute->add_flag("--delta", ca.delta, "print the delta-graded collapse");
  compute->add_flag("--euler", ca.euler, "print the graded Euler characteristic");
  compute->add_flag("--lee", ca.lee, "also compute Lee homology, s and the pages");
  compute->add_option("--json", ca.json_out, "write JSON here ('-' for stdout)");
  compute->add_option("--order", ca.order, "crossing order")->check(CLI::IsMember({"input", "greedy"}));

  FamilyArgs fa;
  auto* family = app.add_subcommand("family", "twist family K_n from a fixture with a band site");
  family->add_option("--base", fa.base, "base fixture")->required();
  family->add_option("--twists", fa.twists, "number of twists n");
  family->add_option("--sweep", fa.sweep, "range a..b of n");
  family->add_option("--template", fa.templ, "closed form to check for n >= 8: K, Ktau, auto, none");
  family->add_option("--jobs", fa.jobs, "parallel jobs")->check(CLI::PositiveNumber);
  family->add_flag("--no-s", fa.no_s, "skip the s-invariant");
  family->add_option("--json", fa.json_out, "write JSON here ('-' for stdout)");
  family->add_option("--order", fa.order, "crossing order")->check(CLI::IsMember({"input", "greedy"}));

  CompareArgs pa;
  auto* compare = app.add_subcommand("compare", "compare two diagrams");
  compare->add_option("--a", pa.a, "first diagram")->required();
  compare->add_option("--b", pa.b, "second diagram")->required();
  compare->add_option("--ring", pa.ring, "Q or F2")->check(CLI::IsMember({"Q", "F2"}));
  compare->add_option("--json", pa.json_out, "write JSON here ('-' for stdout)");
  compare->add_option("--order", pa.order, "crossing order")->check(CLI::IsMember({"input", "greedy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (compute->parsed()) return cmd_compute(ca);
    if (family->parsed()) return cmd_family(fa);
    if (compare->parsed()) return cmd_compare(pa);
  } catch (const SizeGuardError& e) {
    std::cerr << "kh: " << e.what() << '\n';
    return 3;
  } catch (const DiagramError& e) {
    std::cerr << "kh: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "kh: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kh: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
