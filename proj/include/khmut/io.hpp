#pragma once

// Text and JSON renderings of the computed invariants.
//
// Khovanov tables use the R^i_q token notation, e.g. `1^{-7}_{-13} 2^0_1`,
// sorted by (i, q), with braces only around multi-character indices.
// JSON objects come out with sorted keys, so dump() is canonical.

#include <cctype>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "khmut/graded.hpp"
#include "khmut/grid.hpp"
#include "khmut/khovanov.hpp"
#include "khmut/lee.hpp"
#include "khmut/skein.hpp"

namespace khmut {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace io_detail {

inline std::string script(int v) {
  const std::string s = std::to_string(v);
  return s.size() == 1 ? s : "{" + s + "}";
}

}  // namespace io_detail

inline std::string format_table(const BigradedDims& b) {
  std::string out;
  for (const auto& [key, v] : b.cells()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v) + "^" + io_detail::script(key.first) + "_" + io_detail::script(key.second);
  }
  return out;
}

/// Inverse of format_table; also accepts unbraced multi-character indices
/// such as `1^-7_-13`.
inline BigradedDims parse_table(const std::string& text) {
  BigradedDims out;
  std::istringstream in(text);
  std::string tok;
  auto fail = [&](const std::string& why) { throw ParseError("bad table token '" + tok + "': " + why); };
  while (in >> tok) {
    std::size_t pos = 0;
    auto number = [&](bool braced_ok) {
      bool braced = braced_ok && pos < tok.size() && tok[pos] == '{';
      if (braced) ++pos;
      std::size_t start = pos;
      if (pos < tok.size() && (tok[pos] == '-' || tok[pos] == '+')) ++pos;
      while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(tok[start])))) fail("expected a number");
      const int v = std::stoi(tok.substr(start, pos - start));
      if (braced) {
        if (pos >= tok.size() || tok[pos] != '}') fail("missing '}'");
        ++pos;
      }
      return v;
    };
    const int d = number(false);
    if (pos >= tok.size() || tok[pos] != '^') fail("expected '^'");
    ++pos;
    const int i = number(true);
    if (pos >= tok.size() || tok[pos] != '_') fail("expected '_'");
    ++pos;
    const int q = number(true);
    if (pos != tok.size()) fail("trailing characters");
    if (d < 0) fail("negative dimension");
    out.add(i, q, d);
  }
  return out;
}

inline std::string format_delta(const DeltaGradedDims& d) {
  std::string out;
  for (const auto& [delta, v] : d) {
    if (v == 0) continue;
    if (!out.empty()) out += ' ';
    out += std::to_string(delta) + ":" + std::to_string(v);
  }
  return out;
}

inline nlohmann::json dims_json(const BigradedDims& b) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [key, v] : b.cells()) a.push_back({key.first, key.second, v});
  return a;
}

inline BigradedDims dims_from_json(const nlohmann::json& a) {
  BigradedDims out;
  try {
    for (const auto& t : a) out.add(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad dims array: ") + e.what());
  }
  return out;
}

inline nlohmann::json delta_json(const DeltaGradedDims& d) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [delta, v] : d)
    if (v != 0) a.push_back({delta, v});
  return a;
}

inline nlohmann::json poly_json(const LaurentPoly& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) a.push_back({e, c});
  return a;
}

inline nlohmann::json kh_json(const BigradedDims& b, Ring ring, bool reduced) {
  return {{"ring", ring == Ring::Q ? "Q" : "F2"},
          {"reduced", reduced},
          {"dims", dims_json(b)},
          {"total", b.total()},
          {"delta", delta_json(delta_collapse(b))},
          {"euler", poly_json(graded_euler_characteristic(b))}};
}

/// Lee homology collapsed to the homological grading, s when defined, and
/// the pages E_1, E_5, ... up to the first one equal to E_infinity.
inline nlohmann::json lee_json(const LeeDecomposition& dec, bool knot) {
  nlohmann::json j;
  std::map<int, std::int64_t> by_i;
  for (const auto& [key, v] : dec.free.cells()) by_i[key.first] += v;
  j["lee_dims"] = nlohmann::json::array();
  for (const auto& [i, v] : by_i) j["lee_dims"].push_back({i, v});
  if (knot && dec.free.total() == 2 && dec.free.row(0).total() == 2)
    j["s"] = dec.free.cells().begin()->first.second + 1;
  else
    j["s"] = nullptr;
  j["link"] = !knot;
  j["pages"] = nlohmann::json::object();
  for (int r = 1;; r += 4) {
    const SpectralPage p = page_from_decomposition(dec, r);
    j["pages"][std::to_string(r)] = dims_json(p.dims);
    if (p.dims == dec.free) break;
  }
  return j;
}

inline nlohmann::json les_json(const std::string& triple, const LESReport& rep) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : rep.violations) v.push_back({{"kind", x.kind}, {"i", x.i}, {"q", x.q}, {"detail", x.detail}});
  return {{"triple", triple}, {"pass", rep.pass}, {"violations", v}};
}

/// HFK dims as a Maslov-by-Alexander grid: rows m descending, columns a ascending.
inline std::string format_hfk_grid(const BigradedDims& h) {
  if (h.empty()) return "(zero)\n";
  int mlo = h.cells().begin()->first.first, mhi = h.cells().rbegin()->first.first;
  int alo = h.cells().begin()->first.second, ahi = alo;
  for (const auto& [key, v] : h.cells()) {
    alo = std::min(alo, key.second);
    ahi = std::max(ahi, key.second);
  }
  auto cell = [](std::int64_t v) { return v == 0 ? std::string() : v == 1 ? std::string("F") : "F^" + std::to_string(v); };
  std::size_t w = 3;
  for (const auto& [key, v] : h.cells()) w = std::max(w, cell(v).size() + 1);
  std::ostringstream out;
  out << std::setw(4) << "m\\a";
  for (int a = alo; a <= ahi; ++a) out << std::setw(static_cast<int>(w)) << a;
  out << '\n';
  for (int m = mhi; m >= mlo; --m) {
    out << std::setw(4) << m;
    for (int a = alo; a <= ahi; ++a) out << std::setw(static_cast<int>(w)) << cell(h.at(m, a));
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json hfk_json(const BigradedDims& h) {
  return {{"flavor", "hat"}, {"dims", dims_json(h)}, {"total", h.total()}, {"delta", delta_json(hfk_delta_collapse(h))}};
}

inline nlohmann::json minus_json(const MinusHFK& m) {
  nlohmann::json tors = nlohmann::json::array();
  for (const auto& [k, gens] : m.torsion)
    for (const auto& [key, v] : gens.cells()) tors.push_back({k, key.first, key.second, v});
  return {{"flavor", "minus"},
          {"towers", dims_json(m.towers)},
          {"torsion", tors},
          {"truncation", m.truncation},
          {"truncated", dims_json(m.truncated())},
          {"stable", m.stable()}};
}

inline std::optional<int> s_if_knot(const PlanarDiagram& d, Ring ring, const KhOptions& opt = {}) {
  if (ring != Ring::Q || !d.is_knot()) return std::nullopt;
  return s_invariant(d, opt);
}

/// Raw tables of a pair; every flag is derived from them on demand.
struct ComparisonReport {
  Ring ring = Ring::Q;
  BigradedDims kh_a, kh_b;
  std::optional<int> s_a, s_b;

  bool total_equal() const { return kh_a.total() == kh_b.total(); }
  bool bigraded_equal() const { return kh_a == kh_b; }
  DeltaGradedDims delta_a() const { return delta_collapse(kh_a); }
  DeltaGradedDims delta_b() const { return delta_collapse(kh_b); }
  bool delta_swap() const {
    DeltaGradedDims flipped;
    for (const auto& [d, v] : delta_b()) flipped[-d] += v;
    return delta_a() == flipped;
  }
  bool euler_equal() const { return graded_euler_characteristic(kh_a) == graded_euler_characteristic(kh_b); }
};

inline ComparisonReport compare_kh(const PlanarDiagram& a, const PlanarDiagram& b, Ring ring, const KhOptions& opt = {}) {
  return {ring, kh(a, ring, opt), kh(b, ring, opt), s_if_knot(a, ring, opt), s_if_knot(b, ring, opt)};
}

inline nlohmann::json comparison_json(const ComparisonReport& r) {
  auto s = [](const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"ring", ring_name(r.ring)},
          {"total", {r.kh_a.total(), r.kh_b.total()}},
          {"total_equal", r.total_equal()},
          {"bigraded_equal", r.bigraded_equal()},
          {"delta_a", delta_json(r.delta_a())},
          {"delta_b", delta_json(r.delta_b())},
          {"delta_swap", r.delta_swap()},
          {"euler_equal", r.euler_equal()},
          {"s", {s(r.s_a), s(r.s_b)}},
          {"kh_a", dims_json(r.kh_a)},
          {"kh_b", dims_json(r.kh_b)}};
}

/// Reads a file into a string; ParseError if it cannot be opened.
inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + what + ": " + e.what());
  }
}

}  // namespace khmut
