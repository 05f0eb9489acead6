#pragma once

// Planar diagrams given by PD codes.
//
// A crossing X[a,b,c,d] lists the four incident arcs counterclockwise,
// starting from the incoming under-strand; a->c is the under-strand and b,d
// carry the over-strand. The crossing is positive (right-handed) when the
// over-strand runs d->b. Smoothing 0 joins (a,b),(c,d); smoothing 1 joins
// (b,c),(d,a). For a positive crossing the 0-smoothing is the oriented one.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace khmut {

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Slot {
  int crossing = -1;
  int pos = -1;
  friend bool operator==(const Slot&, const Slot&) = default;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

class PlanarDiagram;

/// Crossing-level resolution data of one full smoothing.
struct SmoothedState {
  std::vector<bool> vertex;        // 0/1 choice per crossing
  std::vector<int> circle_of_arc;  // dense arc index -> circle id
  int circle_count = 0;            // includes crossingless loops
};

class PlanarDiagram {
 public:
  using Tuple = std::array<int, 4>;

  PlanarDiagram() : free_loops_(1) { derive(); }

  /// Validates and orients a PD code. free_loops counts extra crossingless
  /// unknotted components.
  static PlanarDiagram from_pd(std::vector<Tuple> crossings, int free_loops = 0,
                               std::optional<int> basepoint = std::nullopt,
                               std::optional<std::pair<int, int>> band_site = std::nullopt) {
    PlanarDiagram d;
    d.x_ = std::move(crossings);
    d.free_loops_ = free_loops;
    d.basepoint_ = basepoint;
    d.band_site_ = band_site;
    if (d.x_.empty() && free_loops <= 0) throw DiagramError("empty diagram");
    d.derive();
    return d;
  }

  /// Crossingless diagram of the unlink with the given number of components.
  static PlanarDiagram unknot(int components = 1) {
    PlanarDiagram d;
    d.free_loops_ = components;
    d.derive();
    return d;
  }

  const std::vector<Tuple>& crossings() const { return x_; }
  int num_crossings() const { return static_cast<int>(x_.size()); }
  int free_loops() const { return free_loops_; }
  int sign(int c) const { return sign_.at(static_cast<std::size_t>(c)); }
  int n_plus() const { return static_cast<int>(std::count(sign_.begin(), sign_.end(), 1)); }
  int n_minus() const { return static_cast<int>(std::count(sign_.begin(), sign_.end(), -1)); }
  int writhe() const { return n_plus() - n_minus(); }
  int num_components() const { return components_; }
  bool is_knot() const { return components_ == 1; }
  std::optional<int> basepoint() const { return basepoint_; }
  std::optional<std::pair<int, int>> band_site() const { return band_site_; }
  void set_basepoint(std::optional<int> arc) {
    if (arc && !endpoints_.count(*arc)) throw DiagramError("basepoint arc not in diagram");
    basepoint_ = arc;
  }
  void set_band_site(std::optional<std::pair<int, int>> site) { band_site_ = site; }

  /// Arc labels in increasing order.
  std::vector<int> arcs() const {
    std::vector<int> out;
    for (const auto& [a, e] : endpoints_) out.push_back(a);
    return out;
  }
  int num_arcs() const { return static_cast<int>(endpoints_.size()); }
  int arc_index(int label) const { return arc_index_.at(label); }
  /// The two crossing slots where an arc ends.
  const std::array<Slot, 2>& endpoints(int arc) const { return endpoints_.at(arc); }
  Slot other_end(Slot s) const {
    const auto& e = endpoints_.at(x_[static_cast<std::size_t>(s.crossing)][static_cast<std::size_t>(s.pos)]);
    return e[0] == s ? e[1] : e[0];
  }
  /// True when the strand flows into the crossing at this slot.
  bool incoming(Slot s) const {
    return incoming_[static_cast<std::size_t>(s.crossing)][static_cast<std::size_t>(s.pos)];
  }

  /// Slot pairs joined by a smoothing of a crossing.
  static std::array<std::pair<int, int>, 2> smoothing_pairs(int choice) {
    if (choice == 0) return {{{0, 1}, {2, 3}}};
    return {{{1, 2}, {3, 0}}};
  }

  /// Circles of the full smoothing at a cube vertex.
  SmoothedState smoothing(const std::vector<bool>& vertex) const {
    if (vertex.size() != x_.size()) throw DiagramError("smoothing: vertex size mismatch");
    std::vector<int> parent(endpoints_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      return a;
    };
    for (std::size_t c = 0; c < x_.size(); ++c)
      for (auto [p, q] : smoothing_pairs(vertex[c] ? 1 : 0)) {
        int a = find(arc_index(x_[c][static_cast<std::size_t>(p)])), b = find(arc_index(x_[c][static_cast<std::size_t>(q)]));
        parent[static_cast<std::size_t>(a)] = b;
      }
    SmoothedState st;
    st.vertex = vertex;
    st.circle_of_arc.assign(endpoints_.size(), -1);
    std::map<int, int> ids;
    for (std::size_t a = 0; a < endpoints_.size(); ++a) {
      auto [it, fresh] = ids.try_emplace(find(static_cast<int>(a)), static_cast<int>(ids.size()));
      st.circle_of_arc[a] = it->second;
    }
    st.circle_count = static_cast<int>(ids.size()) + free_loops_;
    return st;
  }

  /// Faces of the planar graph; each face is the cyclic list of corners
  /// (crossing, k) meaning the region between slots k and k+1.
  std::vector<std::vector<Slot>> faces() const {
    std::set<Slot> seen;
    std::vector<std::vector<Slot>> out;
    for (int c = 0; c < num_crossings(); ++c)
      for (int k = 0; k < 4; ++k) {
        Slot start{c, k};
        if (seen.count(start)) continue;
        std::vector<Slot> face;
        Slot cur = start;
        do {
          seen.insert(cur);
          face.push_back(cur);
          cur = other_end(Slot{cur.crossing, (cur.pos + 1) % 4});
        } while (!(cur == start));
        out.push_back(std::move(face));
      }
    return out;
  }

  std::string to_pd_string() const {
    std::ostringstream os;
    os << "PD[";
    for (std::size_t c = 0; c < x_.size(); ++c) {
      if (c) os << ",";
      os << "X[" << x_[c][0] << "," << x_[c][1] << "," << x_[c][2] << "," << x_[c][3] << "]";
    }
    os << "]";
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["pd"] = nlohmann::json::array();
    for (const auto& t : x_) j["pd"].push_back(t);
    if (free_loops_) j["free_loops"] = free_loops_;
    if (basepoint_) j["basepoint"] = *basepoint_;
    if (band_site_) j["band_site"] = {band_site_->first, band_site_->second};
    return j;
  }

  friend bool operator==(const PlanarDiagram& a, const PlanarDiagram& b) {
    return a.x_ == b.x_ && a.free_loops_ == b.free_loops_;
  }

 private:
  std::vector<Tuple> x_;
  int free_loops_ = 0;
  std::optional<int> basepoint_;
  std::optional<std::pair<int, int>> band_site_;

  std::vector<int> sign_;
  std::vector<std::array<bool, 4>> incoming_;
  std::map<int, std::array<Slot, 2>> endpoints_;
  std::map<int, int> arc_index_;
  int components_ = 0;

  void derive() {
    endpoints_.clear();
    arc_index_.clear();
    std::map<int, int> count;
    for (int c = 0; c < num_crossings(); ++c)
      for (int k = 0; k < 4; ++k) {
        int a = x_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
        int n = count[a]++;
        if (n >= 2) throw DiagramError("arc " + std::to_string(a) + " appears more than twice");
        endpoints_[a][static_cast<std::size_t>(n)] = Slot{c, k};
      }
    for (const auto& [a, n] : count)
      if (n != 2) throw DiagramError("arc " + std::to_string(a) + " appears " + std::to_string(n) + " time(s)");
    for (const auto& [a, e] : endpoints_) arc_index_.emplace(a, static_cast<int>(arc_index_.size()));
    if (basepoint_ && !endpoints_.count(*basepoint_)) throw DiagramError("basepoint arc not in diagram");
    if (band_site_ && (!endpoints_.count(band_site_->first) || !endpoints_.count(band_site_->second)))
      throw DiagramError("band site arc not in diagram");

    // Orientation: walk each strand component; under-strands enter at slot 0.
    incoming_.assign(x_.size(), {false, false, false, false});
    std::vector<std::array<bool, 4>> visited(x_.size(), {false, false, false, false});
    components_ = free_loops_;
    auto walk = [&](Slot enter) {
      Slot cur = enter;
      do {
        auto& v = visited[static_cast<std::size_t>(cur.crossing)];
        if (v[static_cast<std::size_t>(cur.pos)]) throw DiagramError("inconsistent strand orientation");
        v[static_cast<std::size_t>(cur.pos)] = true;
        incoming_[static_cast<std::size_t>(cur.crossing)][static_cast<std::size_t>(cur.pos)] = true;
        Slot out{cur.crossing, (cur.pos + 2) % 4};
        visited[static_cast<std::size_t>(out.crossing)][static_cast<std::size_t>(out.pos)] = true;
        cur = other_end(out);
      } while (!(cur == enter));
    };
    // Components with an under-crossing are oriented by it; pure over-strands
    // are oriented arbitrarily.
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < num_crossings(); ++c)
        for (int k = 0; k < 4; ++k) {
          if (pass == 0 && k != 0) continue;
          if (visited[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]) continue;
          walk(Slot{c, k});
          ++components_;
        }
    for (int c = 0; c < num_crossings(); ++c) {
      const auto& in = incoming_[static_cast<std::size_t>(c)];
      if (!in[0] || in[2]) throw DiagramError("crossing " + std::to_string(c) + ": under-strand orientation is inconsistent");
      if (in[1] == in[3]) throw DiagramError("crossing " + std::to_string(c) + ": over-strand orientation is inconsistent");
    }
    sign_.resize(x_.size());
    for (std::size_t c = 0; c < x_.size(); ++c) sign_[c] = incoming_[c][3] ? 1 : -1;
  }
};

// ---------------------------------------------------------------------------
// Slot-graph rebuilding: every operation that changes the diagram works on
// crossing slots joined pairwise, then relabels arcs consecutively along the
// orientation of each component.

namespace detail {

struct SlotGraph {
  std::vector<std::array<int, 4>> slots;  // per crossing, global slot ids ccw; 0/2 under
  std::map<int, int> partner;             // slot id <-> slot id
  std::map<int, bool> prefer_incoming;    // orientation hints by slot id
  int free_loops = 0;
  std::map<int, int> carries;             // slot id -> old arc label (for basepoint tracking)
};

inline SlotGraph to_slot_graph(const PlanarDiagram& d) {
  SlotGraph g;
  g.free_loops = d.free_loops();
  for (int c = 0; c < d.num_crossings(); ++c) {
    std::array<int, 4> s{};
    for (int k = 0; k < 4; ++k) {
      s[static_cast<std::size_t>(k)] = 4 * c + k;
      g.prefer_incoming[4 * c + k] = d.incoming(Slot{c, k});
      g.carries[4 * c + k] = d.crossings()[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
    g.slots.push_back(s);
  }
  for (int c = 0; c < d.num_crossings(); ++c)
    for (int k = 0; k < 4; ++k) {
      Slot o = d.other_end(Slot{c, k});
      g.partner[4 * c + k] = 4 * o.crossing + o.pos;
    }
  return g;
}

inline PlanarDiagram from_slot_graph(const SlotGraph& g, std::optional<int> old_basepoint) {
  std::map<int, std::pair<int, int>> where;  // slot id -> (crossing, pos)
  for (int c = 0; c < static_cast<int>(g.slots.size()); ++c)
    for (int k = 0; k < 4; ++k) where[g.slots[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]] = {c, k};

  std::map<int, bool> entered;
  std::map<int, int> label_into;  // slot id entered -> arc label
  int next_label = 1;
  std::vector<std::array<int, 4>> tuples(g.slots.size());
  std::optional<int> basepoint;

  auto component_from = [&](int start_enter) {
    int cur = start_enter;
    do {
      entered[cur] = true;
      label_into[cur] = next_label;
      const int from = g.partner.at(cur);
      if (old_basepoint && !basepoint) {
        auto a = g.carries.find(cur), b = g.carries.find(from);
        if ((a != g.carries.end() && a->second == *old_basepoint) || (b != g.carries.end() && b->second == *old_basepoint))
          basepoint = next_label;
      }
      ++next_label;
      auto [c, k] = where.at(cur);
      int out = g.slots[static_cast<std::size_t>(c)][static_cast<std::size_t>((k + 2) % 4)];
      cur = g.partner.at(out);
    } while (cur != start_enter);
  };

  std::set<int> done;
  for (int c = 0; c < static_cast<int>(g.slots.size()); ++c)
    for (int k = 0; k < 4; ++k) {
      int s = g.slots[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
      if (entered.count(s)) continue;
      int out = g.slots[static_cast<std::size_t>(c)][static_cast<std::size_t>((k + 2) % 4)];
      if (entered.count(out)) continue;
      // Pick the direction agreeing with the first orientation hint on this component.
      bool flow_in = true;
      auto hint = g.prefer_incoming.find(s);
      if (hint != g.prefer_incoming.end()) flow_in = hint->second;
      component_from(flow_in ? s : g.partner.at(s));
    }

  for (int c = 0; c < static_cast<int>(g.slots.size()); ++c) {
    auto s = g.slots[static_cast<std::size_t>(c)];
    if (entered.count(s[2])) std::rotate(s.begin(), s.begin() + 2, s.end());
    for (int k = 0; k < 4; ++k) {
      int id = s[static_cast<std::size_t>(k)];
      auto it = label_into.find(id);
      tuples[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] =
          it != label_into.end() ? it->second : label_into.at(g.partner.at(id));
    }
  }
  return PlanarDiagram::from_pd(std::move(tuples), g.free_loops, basepoint);
}

}  // namespace detail

inline PlanarDiagram mirror(const PlanarDiagram& d) {
  std::vector<PlanarDiagram::Tuple> out;
  for (int c = 0; c < d.num_crossings(); ++c) {
    const auto& t = d.crossings()[static_cast<std::size_t>(c)];
    // The over-strand becomes the under-strand, listed from its incoming end.
    if (d.incoming(Slot{c, 3})) out.push_back({t[3], t[0], t[1], t[2]});
    else out.push_back({t[1], t[2], t[3], t[0]});
  }
  PlanarDiagram m = PlanarDiagram::from_pd(std::move(out), d.free_loops(), d.basepoint(), d.band_site());
  return m;
}

/// Replaces one crossing by its 0- or 1-smoothing.
inline PlanarDiagram resolve(const PlanarDiagram& d, int crossing, int choice) {
  if (crossing < 0 || crossing >= d.num_crossings()) throw DiagramError("resolve: crossing index out of range");
  if (choice != 0 && choice != 1) throw DiagramError("resolve: choice must be 0 or 1");
  detail::SlotGraph g = detail::to_slot_graph(d);
  const auto gone = g.slots[static_cast<std::size_t>(crossing)];
  std::map<int, int> joined;  // within the removed crossing
  for (auto [p, q] : PlanarDiagram::smoothing_pairs(choice)) {
    joined[gone[static_cast<std::size_t>(p)]] = gone[static_cast<std::size_t>(q)];
    joined[gone[static_cast<std::size_t>(q)]] = gone[static_cast<std::size_t>(p)];
  }
  auto in_gone = [&](int s) { return s / 4 == crossing; };
  std::map<int, int> partner;
  std::set<int> touched;
  for (const auto& [s, t0] : g.partner) {
    if (in_gone(s)) continue;
    int t = t0;
    while (in_gone(t)) {
      touched.insert(t);
      int across = joined.at(t);
      touched.insert(across);
      t = g.partner.at(across);
    }
    partner[s] = t;
  }
  // Loops made only of the removed crossing's slots.
  std::set<int> seen = touched;
  for (int s : gone) {
    if (seen.count(s)) continue;
    int cur = s;
    while (!seen.count(cur)) {
      seen.insert(cur);
      int across = joined.at(cur);
      seen.insert(across);
      cur = g.partner.at(across);
    }
    ++g.free_loops;
  }
  g.slots.erase(g.slots.begin() + crossing);
  g.partner = std::move(partner);
  PlanarDiagram out = detail::from_slot_graph(g, d.basepoint());
  return out;
}

/// Inserts a Reidemeister-I kink of the given sign on an arc.
inline PlanarDiagram add_kink(const PlanarDiagram& d, int arc, int sign) {
  if (d.num_crossings() == 0) {
    // crossingless unknot component: a one-crossing kink diagram
    PlanarDiagram base = sign > 0 ? PlanarDiagram::from_pd({{1, 1, 2, 2}}) : PlanarDiagram::from_pd({{1, 2, 2, 1}});
    return PlanarDiagram::from_pd(base.crossings(), d.free_loops() - 1);
  }
  detail::SlotGraph g = detail::to_slot_graph(d);
  const auto ends = d.endpoints(arc);
  const Slot head = d.incoming(ends[0]) ? ends[0] : ends[1];
  const Slot tail = head == ends[0] ? ends[1] : ends[0];
  const int h = 4 * head.crossing + head.pos, t = 4 * tail.crossing + tail.pos;
  const int base = 4 * d.num_crossings();
  // strand enters at slot 0 (under), loops out of slot 2 back into the over
  // strand, and leaves through the remaining over slot.
  std::array<int, 4> s{base, base + 1, base + 2, base + 3};
  g.slots.push_back(s);
  g.partner[t] = base;
  g.partner[base] = t;
  const int loop_in = sign > 0 ? base + 3 : base + 1;
  const int exit = sign > 0 ? base + 1 : base + 3;
  g.partner[base + 2] = loop_in;
  g.partner[loop_in] = base + 2;
  g.partner[exit] = h;
  g.partner[h] = exit;
  g.prefer_incoming[base] = true;
  return detail::from_slot_graph(g, d.basepoint());
}

/// Closure of a braid word: generator +i is a positive crossing between
/// strands i and i+1 (1-based), -i a negative one.
inline PlanarDiagram from_braid(int strands, const std::vector<int>& word) {
  if (strands < 1) throw DiagramError("from_braid: need at least one strand");
  std::vector<int> initial(static_cast<std::size_t>(strands)), cur;
  std::iota(initial.begin(), initial.end(), 1);
  cur = initial;
  int next = strands + 1;
  std::vector<PlanarDiagram::Tuple> x;
  for (int g : word) {
    int i = std::abs(g);
    if (i < 1 || i >= strands) throw DiagramError("from_braid: generator out of range");
    int bl = cur[static_cast<std::size_t>(i - 1)], br = cur[static_cast<std::size_t>(i)];
    int tl = next++, tr = next++;
    if (g > 0) x.push_back({br, tr, tl, bl});
    else x.push_back({bl, br, tr, tl});
    cur[static_cast<std::size_t>(i - 1)] = tl;
    cur[static_cast<std::size_t>(i)] = tr;
  }
  int loops = 0;
  std::map<int, int> rename;
  for (int p = 0; p < strands; ++p) {
    if (cur[static_cast<std::size_t>(p)] == initial[static_cast<std::size_t>(p)]) ++loops;
    else rename[cur[static_cast<std::size_t>(p)]] = initial[static_cast<std::size_t>(p)];
  }
  for (auto& t : x)
    for (auto& a : t)
      if (auto it = rename.find(a); it != rename.end()) a = it->second;
  if (x.empty()) return PlanarDiagram::unknot(loops);
  // relabel consecutively
  return detail::from_slot_graph(detail::to_slot_graph(PlanarDiagram::from_pd(std::move(x), loops)), std::nullopt);
}

// ---------------------------------------------------------------------------
// Band twisting.

struct FamilySpec {
  PlanarDiagram base;
  std::pair<int, int> band_site;  // two arcs bounding a common face
  int n = 0;
};

namespace detail {

struct BandEdge {
  int start;  // slot id where the face walk along this edge begins
  int end;
};

// Face walk keeps the face on the right of each edge; see PlanarDiagram::faces.
inline std::pair<BandEdge, BandEdge> locate_band(const PlanarDiagram& d, int arc_a, int arc_b) {
  if (arc_a == arc_b) throw DiagramError("band site needs two distinct arcs");
  for (const auto& face : d.faces()) {
    std::optional<BandEdge> ea, eb;
    for (const Slot& corner : face) {
      Slot from{corner.crossing, (corner.pos + 1) % 4};
      Slot to = d.other_end(from);
      int arc = d.crossings()[static_cast<std::size_t>(from.crossing)][static_cast<std::size_t>(from.pos)];
      BandEdge e{4 * from.crossing + from.pos, 4 * to.crossing + to.pos};
      if (arc == arc_a && !ea) ea = e;
      if (arc == arc_b && !eb) eb = e;
    }
    if (ea && eb) return {*ea, *eb};
  }
  throw DiagramError("band site arcs do not bound a common face");
}

}  // namespace detail

/// K_n: n positive half-twists inserted between the band-site arcs. Added
/// crossings are appended after the base crossings in insertion order.
inline PlanarDiagram generate_family(const FamilySpec& spec) {
  if (spec.n < 0) throw DiagramError("generate_family: negative twist count");
  if (spec.base.num_crossings() == 0) throw DiagramError("generate_family: invalid band site");
  auto [a, b] = detail::locate_band(spec.base, spec.band_site.first, spec.band_site.second);
  detail::SlotGraph g = detail::to_slot_graph(spec.base);
  PlanarDiagram current = spec.base;
  for (int step = 0; step < spec.n; ++step) {
    const int base = 4 * static_cast<int>(g.slots.size()) + 1000000;  // fresh ids
    const int sw = base, se = base + 1, ne = base + 2, nw = base + 3;
    detail::SlotGraph trial;
    std::optional<PlanarDiagram> chosen;
    for (int hand = 0; hand < 2 && !chosen; ++hand) {
      trial = g;
      trial.partner[a.start] = sw;
      trial.partner[sw] = a.start;
      trial.partner[nw] = a.end;
      trial.partner[a.end] = nw;
      trial.partner[b.start] = ne;
      trial.partner[ne] = b.start;
      trial.partner[se] = b.end;
      trial.partner[b.end] = se;
      trial.slots.push_back(hand == 0 ? std::array<int, 4>{sw, se, ne, nw} : std::array<int, 4>{se, ne, nw, sw});
      PlanarDiagram cand = detail::from_slot_graph(trial, std::nullopt);
      if (cand.sign(cand.num_crossings() - 1) > 0) chosen = cand;
    }
    if (!chosen) throw DiagramError("generate_family: could not insert a positive twist");
    g = trial;
    current = *chosen;
    a = detail::BandEdge{nw, a.end};
    b = detail::BandEdge{b.start, ne};
  }
  if (spec.n == 0) return spec.base;
  current.set_band_site(std::nullopt);
  return current;
}

/// (D, D0, D1) at one crossing with its crossing-sign bookkeeping.
struct SkeinTriple {
  PlanarDiagram d, d0, d1;
  int crossing = -1;
};

inline SkeinTriple skein_triple(const PlanarDiagram& d, int crossing) {
  if (crossing < 0 || crossing >= d.num_crossings()) throw DiagramError("skein_triple: crossing index out of range");
  if (d.sign(crossing) < 0) throw DiagramError("skein_triple: crossing must be positive");
  return SkeinTriple{d, resolve(d, crossing, 0), resolve(d, crossing, 1), crossing};
}

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

inline std::string strip_ws(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

inline std::vector<PlanarDiagram::Tuple> parse_pd_brackets(const std::string& text) {
  std::string s = strip_ws(text);
  auto fail = [&](const std::string& why) { throw DiagramError("malformed PD code: " + why); };
  if (s.rfind("PD[", 0) != 0 || s.back() != ']') fail("expected PD[...]");
  std::string body = s.substr(3, s.size() - 4);
  std::vector<PlanarDiagram::Tuple> out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    if (body.compare(pos, 2, "X[") != 0) fail("expected X[ at offset " + std::to_string(pos));
    std::size_t close = body.find(']', pos);
    if (close == std::string::npos) fail("unterminated X[");
    std::string inner = body.substr(pos + 2, close - pos - 2);
    PlanarDiagram::Tuple t{};
    std::stringstream ss(inner);
    std::string tok;
    int k = 0;
    while (std::getline(ss, tok, ',')) {
      if (k >= 4) fail("crossing with more than four arcs");
      try {
        std::size_t used = 0;
        t[static_cast<std::size_t>(k)] = std::stoi(tok, &used);
        if (used != tok.size()) fail("bad arc label '" + tok + "'");
      } catch (const std::logic_error&) {
        fail("bad arc label '" + tok + "'");
      }
      ++k;
    }
    if (k != 4) fail("crossing with fewer than four arcs");
    out.push_back(t);
    pos = close + 1;
    if (pos < body.size()) {
      if (body[pos] != ',') fail("expected ',' between crossings");
      ++pos;
      if (pos == body.size()) fail("trailing ','");
    }
  }
  return out;
}

}  // namespace detail

inline PlanarDiagram diagram_from_json(const nlohmann::json& j) {
  try {
    std::vector<PlanarDiagram::Tuple> x;
    const nlohmann::json& pd = j.is_array() ? j : j.at("pd");
    if (pd.is_string()) x = detail::parse_pd_brackets(pd.get<std::string>());
    else
      for (const auto& t : pd) {
        if (!t.is_array() || t.size() != 4) throw DiagramError("malformed PD code: crossing must have four arcs");
        x.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()});
      }
    int loops = j.is_object() ? j.value("free_loops", 0) : 0;
    std::optional<int> bp;
    std::optional<std::pair<int, int>> band;
    if (j.is_object() && j.contains("basepoint") && !j["basepoint"].is_null()) bp = j["basepoint"].get<int>();
    if (j.is_object() && j.contains("band_site") && !j["band_site"].is_null()) {
      const auto& b = j["band_site"];
      if (!b.is_array() || b.size() != 2) throw DiagramError("band_site must list two arcs");
      band = std::make_pair(b[0].get<int>(), b[1].get<int>());
    }
    return PlanarDiagram::from_pd(std::move(x), loops, bp, band);
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("malformed diagram JSON: ") + e.what());
  }
}

/// Accepts `PD[X[a,b,c,d],...]`, a JSON array of 4-tuples, or the JSON object
/// form {"pd": ..., "basepoint": arc, "band_site": [arc, arc]}.
inline PlanarDiagram parse_pd(const std::string& text) {
  std::string s = detail::strip_ws(text);
  if (s.empty()) throw DiagramError("malformed PD code: empty input");
  if (s[0] == '[' || s[0] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(s);
    } catch (const nlohmann::json::exception& e) {
      throw DiagramError(std::string("malformed diagram JSON: ") + e.what());
    }
    return diagram_from_json(j);
  }
  return PlanarDiagram::from_pd(detail::parse_pd_brackets(s));
}

}  // namespace khmut
