#ifndef GERGM_CATALOG_HPP
#define GERGM_CATALOG_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gergm/error.hpp"
#include "gergm/graph.hpp"

namespace gergm {

inline constexpr int kGraphlets = 30;
inline constexpr int kOrbits = 73;
inline constexpr int kEdgeOrbits = 69;  // ids 1..69
inline constexpr int kMaxSize = 5;

/// Bit position of the pair {a, b} (a < b) inside an adjacency mask. Masks of
/// k nodes occupy the first k(k-1)/2 bits, so adding node k only appends bits.
constexpr int pair_slot(int a, int b) noexcept { return b * (b - 1) / 2 + a; }
constexpr int pair_count(int k) noexcept { return k * (k - 1) / 2; }

struct SignRow {
  std::vector<int> positive;
  std::vector<int> negative;
  friend bool operator==(const SignRow&, const SignRow&) = default;
};
using SignTable = std::array<SignRow, kGraphlets>;

namespace detail {

struct GraphletReference {
  int size;
  int edge_count;
  std::array<std::array<int, 2>, 10> edges;
  std::array<int, 5> orbits;  // node orbit of each slot
};

// One labeled representative per graphlet together with the orbit of each node.
inline constexpr std::array<GraphletReference, kGraphlets> kReference{{
    {2, 1, {{{0, 1}}}, {0, 0}},
    {3, 2, {{{0, 1}, {0, 2}}}, {2, 1, 1}},
    {3, 3, {{{0, 1}, {0, 2}, {1, 2}}}, {3, 3, 3}},
    {4, 3, {{{0, 1}, {0, 3}, {1, 2}}}, {5, 5, 4, 4}},
    {4, 3, {{{0, 1}, {0, 2}, {0, 3}}}, {7, 6, 6, 6}},
    {4, 4, {{{0, 2}, {0, 3}, {1, 2}, {1, 3}}}, {8, 8, 8, 8}},
    {4, 4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}}}, {11, 10, 10, 9}},
    {4, 5, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}}, {13, 13, 12, 12}},
    {4, 6, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}}, {14, 14, 14, 14}},
    {5, 4, {{{0, 2}, {0, 4}, {1, 2}, {1, 3}}}, {16, 16, 17, 15, 15}},
    {5, 4, {{{0, 1}, {0, 3}, {0, 4}, {1, 2}}}, {21, 20, 18, 19, 19}},
    {5, 4, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}}}, {23, 22, 22, 22, 22}},
    {5, 5, {{{0, 1}, {0, 2}, {0, 4}, {1, 2}, {1, 3}}}, {26, 26, 25, 24, 24}},
    {5, 5, {{{0, 1}, {0, 4}, {1, 2}, {1, 3}, {2, 3}}}, {28, 30, 29, 29, 27}},
    {5, 5, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}}}, {33, 32, 32, 31, 31}},
    {5, 5, {{{0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}}}, {34, 34, 34, 34, 34}},
    {5, 5, {{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}}}, {38, 36, 37, 37, 35}},
    {5, 6, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}}}, {42, 41, 40, 40, 39}},
    {5, 6, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 4}, {2, 3}}}, {44, 43, 43, 43, 43}},
    {5, 6, {{{0, 1}, {0, 2}, {0, 4}, {1, 2}, {1, 3}, {2, 3}}}, {47, 48, 48, 46, 45}},
    {5, 6, {{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}}, {50, 50, 49, 49, 49}},
    {5, 6, {{{0, 1}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}}}, {53, 53, 51, 51, 52}},
    {5, 7, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}}, {55, 55, 54, 54, 54}},
    {5, 7, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {2, 3}}}, {58, 57, 57, 57, 56}},
    {5, 7, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}}}, {61, 60, 60, 59, 59}},
    {5, 7, {{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}}}, {63, 63, 64, 64, 62}},
    {5, 8, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}}}, {67, 67, 66, 66, 65}},
    {5, 8, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}}, {69, 68, 68, 68, 68}},
    {5, 9, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}}, {71, 71, 71, 70, 70}},
    {5, 10, {{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}}, {72, 72, 72, 72, 72}},
}};

struct EdgeOrbitReference {
  int graphlet;
  int a, b;  // one edge of the orbit, as slots of the graphlet's representative
};

// E1..E69 in order.
inline constexpr std::array<EdgeOrbitReference, kEdgeOrbits> kEdgeReference{{
    {0, 0, 1},  {1, 0, 1},  {2, 0, 1},  {3, 0, 3},  {3, 0, 1},  {4, 0, 1},  {5, 0, 2},  {6, 1, 2},  {6, 0, 1},
    {6, 0, 3},  {7, 0, 2},  {7, 0, 1},  {8, 0, 1},  {9, 0, 4},  {9, 0, 2},  {10, 1, 2}, {10, 0, 3}, {10, 0, 1},
    {11, 0, 1}, {12, 0, 2}, {12, 0, 1}, {12, 0, 4}, {13, 2, 3}, {13, 1, 2}, {13, 0, 4}, {13, 0, 1}, {14, 1, 2},
    {14, 0, 1}, {14, 0, 3}, {15, 0, 3}, {16, 1, 2}, {16, 0, 2}, {16, 0, 4}, {17, 1, 2}, {17, 0, 1}, {17, 0, 2},
    {17, 0, 4}, {18, 1, 4}, {18, 0, 1}, {19, 1, 3}, {19, 1, 2}, {19, 0, 1}, {19, 0, 4}, {20, 0, 2}, {21, 0, 4},
    {21, 0, 1}, {21, 0, 3}, {21, 2, 3}, {22, 0, 2}, {22, 0, 1}, {23, 0, 1}, {23, 1, 2}, {23, 0, 4}, {24, 1, 4},
    {24, 0, 3}, {24, 0, 1}, {24, 1, 2}, {25, 0, 2}, {25, 2, 3}, {25, 0, 4}, {26, 0, 4}, {26, 0, 1}, {26, 0, 2},
    {26, 2, 3}, {27, 1, 3}, {27, 0, 1}, {28, 0, 3}, {28, 0, 1}, {29, 0, 1},
}};

}  // namespace detail

/// The published graphlet / edge-orbit sign relation, row per graphlet.
inline const SignTable& embedded_sign_table() {
  static const SignTable table{{
      {{1}, {}},
      {{2}, {3}},
      {{3}, {}},
      {{4, 5}, {7, 9}},
      {{6}, {8}},
      {{7}, {12}},
      {{8, 9, 10}, {11}},
      {{11, 12}, {13}},
      {{13}, {}},
      {{14, 15}, {21, 24, 30, 32}},
      {{16, 17, 18}, {20, 23, 28, 31}},
      {{19}, {27}},
      {{20, 21, 22}, {36, 40, 48}},
      {{23, 24, 25, 26}, {39, 42, 47}},
      {{27, 28, 29}, {34, 38}},
      {{30}, {46}},
      {{31, 32, 33}, {35, 41, 44, 45}},
      {{34, 35, 36, 37}, {49, 52, 54}},
      {{38, 39}, {57}},
      {{40, 41, 42, 43}, {51, 55, 60}},
      {{44}, {50, 59}},
      {{45, 46, 47, 48}, {56, 58}},
      {{49, 50}, {64}},
      {{51, 52, 53}, {61}},
      {{54, 55, 56, 57}, {63, 65}},
      {{58, 59, 60}, {62, 66}},
      {{61, 62, 63, 64}, {67}},
      {{65, 66}, {68}},
      {{67, 68}, {69}},
      {{69}, {}},
  }};
  return table;
}

/// Classification of one labeled adjacency mask.
struct MaskClass {
  std::int8_t graphlet = -1;                 // -1 when disconnected
  std::array<std::uint8_t, kMaxSize> orbit{};  // node orbit per slot
  std::array<std::uint8_t, 10> edge_orbit{};   // edge orbit per pair slot, 0 for non-edges
};

class Catalog {
 public:
  /// Process-wide instance, built on first use.
  static const Catalog& instance() {
    static const Catalog catalog;
    return catalog;
  }

  const MaskClass& classify(int k, std::uint32_t mask) const noexcept { return table_[k][mask]; }

  int graphlet_size(int g) const noexcept { return detail::kReference[g].size; }
  int orbit_owner(int orbit) const noexcept { return orbit_owner_[orbit]; }
  int edge_orbit_owner(int e) const noexcept { return detail::kEdgeReference[e - 1].graphlet; }
  std::span<const int> orbits_of(int g) const noexcept { return orbits_of_[g]; }
  std::span<const int> edge_orbits_of(int g) const noexcept { return edge_orbits_of_[g]; }
  std::uint32_t representative(int g) const noexcept { return rep_mask_[g]; }
  std::uint32_t canonical(int k, std::uint32_t mask) const noexcept { return canon_[k][mask]; }

  /// Node permutations p (slot v -> p[v]) fixing the representative of g.
  const std::vector<std::array<int, kMaxSize>>& automorphisms(int g) const noexcept { return aut_[g]; }

  const SignTable& sign_table() const noexcept { return signs_; }

 private:
  Catalog() { build(); }

  static bool connected(int k, std::uint32_t mask) {
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
      std::uint32_t next = 0;
      for (int a = 0; a < k; ++a) {
        if (!(frontier >> a & 1)) continue;
        for (int b = 0; b < k; ++b)
          if (a != b && (mask >> pair_slot(std::min(a, b), std::max(a, b)) & 1)) next |= 1u << b;
      }
      frontier = next & ~seen;
      seen |= next;
    }
    return seen == (1u << k) - 1;
  }

  static std::uint32_t permute(int k, std::uint32_t mask, const std::array<int, kMaxSize>& p) {
    std::uint32_t out = 0;
    for (int b = 1; b < k; ++b)
      for (int a = 0; a < b; ++a)
        if (mask >> pair_slot(a, b) & 1) out |= 1u << pair_slot(std::min(p[a], p[b]), std::max(p[a], p[b]));
    return out;
  }

  static std::vector<std::array<int, kMaxSize>> permutations(int k) {
    std::vector<std::array<int, kMaxSize>> out;
    std::array<int, kMaxSize> p{};
    std::iota(p.begin(), p.begin() + k, 0);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.begin() + k));
    return out;
  }

  void build();
  void derive_sign_table();
  static void check(bool ok, const std::string& what) {
    if (!ok) throw ConsistencyError("catalog: " + what);
  }

  std::array<std::vector<MaskClass>, kMaxSize + 1> table_;
  std::array<std::vector<std::uint32_t>, kMaxSize + 1> canon_;
  std::array<std::uint32_t, kGraphlets> rep_mask_{};
  std::array<int, kOrbits> orbit_owner_{};
  std::array<std::vector<int>, kGraphlets> orbits_of_;
  std::array<std::vector<int>, kGraphlets> edge_orbits_of_;
  std::array<std::vector<std::array<int, kMaxSize>>, kGraphlets> aut_;
  std::array<std::array<std::uint8_t, 10>, kGraphlets> rep_edge_orbit_{};
  SignTable signs_;
};

inline void Catalog::build() {
  // Canonical forms and connected classes per size.
  std::array<std::map<std::uint32_t, int>, kMaxSize + 1> class_of_canon;
  const std::array<int, kMaxSize + 1> expected_classes{0, 0, 1, 2, 6, 21};
  std::array<std::vector<std::array<int, kMaxSize>>, kMaxSize + 1> perms;
  for (int k = 2; k <= kMaxSize; ++k) {
    perms[k] = permutations(k);
    const std::uint32_t masks = 1u << pair_count(k);
    canon_[k].assign(masks, 0);
    table_[k].assign(masks, MaskClass{});
    int classes = 0;
    for (std::uint32_t m = 0; m < masks; ++m) {
      std::uint32_t best = m;
      for (const auto& p : perms[k]) best = std::min(best, permute(k, m, p));
      canon_[k][m] = best;
      if (best == m && connected(k, m)) {
        class_of_canon[k][m] = -1;
        ++classes;
      }
    }
    check(classes == expected_classes[k], "size " + std::to_string(k) + " has " + std::to_string(classes) +
                                              " connected classes, expected " + std::to_string(expected_classes[k]));
  }

  // Attach graphlet ids through the reference representatives.
  orbit_owner_.fill(-1);
  for (int g = 0; g < kGraphlets; ++g) {
    const auto& ref = detail::kReference[g];
    std::uint32_t mask = 0;
    for (int e = 0; e < ref.edge_count; ++e) mask |= 1u << pair_slot(ref.edges[e][0], ref.edges[e][1]);
    check(connected(ref.size, mask), "reference of G" + std::to_string(g) + " is disconnected");
    rep_mask_[g] = mask;
    int& id = class_of_canon[ref.size][canon_[ref.size][mask]];
    check(id == -1, "G" + std::to_string(g) + " duplicates another reference");
    id = g;

    // Automorphisms; reference orbit labels must coincide with the orbit partition.
    for (const auto& p : perms[ref.size])
      if (permute(ref.size, mask, p) == mask) aut_[g].push_back(p);
    for (int u = 0; u < ref.size; ++u)
      for (int v = 0; v < ref.size; ++v) {
        bool same = false;
        for (const auto& p : aut_[g]) same = same || p[u] == v;
        check(same == (ref.orbits[u] == ref.orbits[v]),
              "node orbits of G" + std::to_string(g) + " disagree with its automorphism group");
      }
    for (int u = 0; u < ref.size; ++u) {
      const int o = ref.orbits[u];
      check(orbit_owner_[o] == -1 || orbit_owner_[o] == g, "orbit " + std::to_string(o) + " owned twice");
      if (orbit_owner_[o] == -1) orbits_of_[g].push_back(o);
      orbit_owner_[o] = g;
    }
    std::sort(orbits_of_[g].begin(), orbits_of_[g].end());
  }
  for (int o = 0; o < kOrbits; ++o) check(orbit_owner_[o] != -1, "orbit " + std::to_string(o) + " has no owner");

  // Edge orbits: each reference edge tags its whole automorphism class.
  for (int e = 1; e <= kEdgeOrbits; ++e) {
    const auto& ref = detail::kEdgeReference[e - 1];
    check(rep_mask_[ref.graphlet] >> pair_slot(ref.a, ref.b) & 1, "E" + std::to_string(e) + " is not an edge");
    for (const auto& p : aut_[ref.graphlet]) {
      auto& cell = rep_edge_orbit_[ref.graphlet][pair_slot(std::min(p[ref.a], p[ref.b]), std::max(p[ref.a], p[ref.b]))];
      check(cell == 0 || cell == e, "E" + std::to_string(e) + " overlaps another edge orbit");
      cell = static_cast<std::uint8_t>(e);
    }
    edge_orbits_of_[ref.graphlet].push_back(e);
  }
  int edge_orbit_total = 0;
  for (int g = 0; g < kGraphlets; ++g) {
    for (int s = 0; s < pair_count(detail::kReference[g].size); ++s)
      check((rep_mask_[g] >> s & 1) == (rep_edge_orbit_[g][s] != 0),
            "edges of G" + std::to_string(g) + " not covered by its edge orbits");
    edge_orbit_total += static_cast<int>(edge_orbits_of_[g].size());
  }
  check(edge_orbit_total == kEdgeOrbits, "edge orbit total is not 69");

  // Dense lookup for every labeled mask.
  for (int k = 2; k <= kMaxSize; ++k) {
    for (std::uint32_t m = 0; m < table_[k].size(); ++m) {
      auto it = class_of_canon[k].find(canon_[k][m]);
      if (it == class_of_canon[k].end() || !connected(k, m)) continue;
      const int g = it->second;
      check(g >= 0, "connected class without a graphlet id");
      MaskClass& mc = table_[k][m];
      mc.graphlet = static_cast<std::int8_t>(g);
      for (const auto& p : perms[k]) {
        if (permute(k, m, p) != rep_mask_[g]) continue;
        for (int v = 0; v < k; ++v) mc.orbit[v] = static_cast<std::uint8_t>(detail::kReference[g].orbits[p[v]]);
        for (int b = 1; b < k; ++b)
          for (int a = 0; a < b; ++a)
            if (m >> pair_slot(a, b) & 1)
              mc.edge_orbit[pair_slot(a, b)] =
                  rep_edge_orbit_[g][pair_slot(std::min(p[a], p[b]), std::max(p[a], p[b]))];
        break;
      }
    }
  }

  derive_sign_table();
  const SignTable& published = embedded_sign_table();
  for (int g = 0; g < kGraphlets; ++g) {
    check(signs_[g].positive == published[g].positive,
          "derived positive list of G" + std::to_string(g) + " differs from the embedded table");
    check(signs_[g].negative == published[g].negative,
          "derived negative list of G" + std::to_string(g) + " differs from the embedded table");
  }
}

inline void Catalog::derive_sign_table() {
  for (auto& row : signs_) row = {};
  for (int e = 1; e <= kEdgeOrbits; ++e) {
    const auto& ref = detail::kEdgeReference[e - 1];
    const int k = detail::kReference[ref.graphlet].size;
    signs_[ref.graphlet].positive.push_back(e);
    const std::uint32_t removed = rep_mask_[ref.graphlet] & ~(1u << pair_slot(ref.a, ref.b));
    if (const int h = table_[k][removed].graphlet; h >= 0) signs_[h].negative.push_back(e);
  }
  for (auto& row : signs_) {
    std::sort(row.positive.begin(), row.positive.end());
    std::sort(row.negative.begin(), row.negative.end());
  }
}

/// Result of classifying the subgraph induced by an ordered node list.
struct InducedClass {
  int graphlet = -1;
  std::array<int, kMaxSize> orbit{};       // per position in the query
  std::array<int, 10> edge_orbit{};        // per pair slot of query positions
};

inline std::uint32_t induced_mask(const Graph& g, std::span<const node_t> nodes) {
  std::uint32_t mask = 0;
  for (std::size_t b = 1; b < nodes.size(); ++b)
    for (std::size_t a = 0; a < b; ++a)
      if (g.has_edge(nodes[a], nodes[b])) mask |= 1u << pair_slot(static_cast<int>(a), static_cast<int>(b));
  return mask;
}

inline InducedClass classify_induced(const Graph& g, std::span<const node_t> nodes) {
  const int k = static_cast<int>(nodes.size());
  if (k < 2 || k > kMaxSize) throw SizeError("induced subgraph must have 2 to 5 nodes, got " + std::to_string(k));
  for (int a = 0; a < k; ++a) {
    if (nodes[a] >= g.node_count()) throw IndexError("node index " + std::to_string(nodes[a]) + " out of range");
    for (int b = 0; b < a; ++b)
      if (nodes[a] == nodes[b]) throw ValueError("repeated node " + std::to_string(nodes[a]) + " in induced set");
  }
  const MaskClass& mc = Catalog::instance().classify(k, induced_mask(g, nodes));
  InducedClass out;
  out.graphlet = mc.graphlet;
  if (mc.graphlet < 0) return out;
  for (int v = 0; v < k; ++v) out.orbit[v] = mc.orbit[v];
  for (int s = 0; s < pair_count(k); ++s) out.edge_orbit[s] = mc.edge_orbit[s];
  return out;
}

/// Writes a sign table as `graphlet,positive,negative` rows; lists are
/// space-separated edge orbits and `-` marks an empty list.
inline void write_sign_table(std::ostream& out, const SignTable& table) {
  auto list = [&](const std::vector<int>& xs) {
    if (xs.empty()) {
      out << '-';
      return;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " E" : "E") << xs[i];
  };
  out << "graphlet,positive,negative\n";
  for (int g = 0; g < kGraphlets; ++g) {
    out << 'G' << g << ',';
    list(table[g].positive);
    out << ',';
    list(table[g].negative);
    out << '\n';
  }
}

}  // namespace gergm

#endif  // GERGM_CATALOG_HPP
