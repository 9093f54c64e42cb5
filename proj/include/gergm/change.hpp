#ifndef GERGM_CHANGE_HPP
#define GERGM_CHANGE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gergm/catalog.hpp"
#include "gergm/census.hpp"
#include "gergm/error.hpp"
#include "gergm/graph.hpp"
#include "gergm/model.hpp"

namespace gergm {

/// Enumerates every node set S containing i and j with |S| <= max_size that is
/// connected once (i, j) is an edge. Each set is reported once, as a node list
/// starting with i, j together with its adjacency mask in that state (bit 0 is
/// the pair i, j and is always set).
///
/// This is ESU rooted at the dyad: i and j act as one root whose neighborhood
/// is N(i) | N(j), and candidates must be exclusive neighbors of the newest
/// member.
class AffectedSets {
 public:
  template <class Visitor>
  void run(const Graph& g, node_t i, node_t j, int max_size, Visitor&& visit) {
    if (i >= g.node_count() || j >= g.node_count()) throw IndexError("dyad node index out of range");
    if (i == j) throw LoopError("dyad (" + std::to_string(i) + ", " + std::to_string(i) + ") is a self-loop");
    if (max_size < 2 || max_size > kMaxSize) throw SizeError("affected set size must be in [2, 5]");
    sub_[0] = i;
    sub_[1] = j;
    visit(std::span<const node_t>(sub_.data(), 2), std::uint32_t{1});
    if (max_size == 2) return;
    auto& ext = ext_[2];
    ext.clear();
    auto a = g.neighbors(i), b = g.neighbors(j);
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
      node_t u;
      if (q == b.size() || (p < a.size() && a[p] < b[q]))
        u = a[p++];
      else if (p == a.size() || b[q] < a[p])
        u = b[q++];
      else
        u = a[p++], ++q;
      if (u != i && u != j) ext.push_back(u);
    }
    extend(g, 2, 1u, max_size, visit);
  }

 private:
  template <class Visitor>
  void extend(const Graph& g, int size, std::uint32_t mask, int max_size, Visitor& visit) {
    const auto& ext = ext_[size];
    for (std::size_t idx = 0; idx < ext.size(); ++idx) {
      const node_t w = ext[idx];
      std::uint32_t m = mask;
      for (int a = 0; a < size; ++a)
        if (g.has_edge(sub_[a], w)) m |= 1u << pair_slot(a, size);
      sub_[size] = w;
      visit(std::span<const node_t>(sub_.data(), size + 1), m);
      if (size + 1 == max_size) continue;
      auto& next = ext_[size + 1];
      next.assign(ext.begin() + static_cast<std::ptrdiff_t>(idx) + 1, ext.end());
      for (node_t u : g.neighbors(w)) {
        bool exclusive = true;
        for (int a = 0; a < size && exclusive; ++a) exclusive = sub_[a] != u && !g.has_edge(sub_[a], u);
        if (exclusive) next.push_back(u);
      }
      extend(g, size + 1, m, max_size, visit);
    }
  }

  std::array<node_t, kMaxSize> sub_{};
  std::array<std::vector<node_t>, kMaxSize + 1> ext_;
};

template <class Visitor>
void for_each_affected_set(const Graph& g, node_t i, node_t j, int max_size, Visitor&& visit) {
  AffectedSets walker;
  walker.run(g, i, j, max_size, visit);
}

/// t(y+) - t(y-) for one dyad at the graphlet and orbit level.
struct ToggleDelta {
  GraphletCounts graphlet{};
  std::array<std::int64_t, kEdgeOrbits + 1> edge_orbit_hits{};  // sets per orbit of (i, j) in y+
  std::vector<node_t> touched;                                  // nodes with a row below
  std::vector<std::array<std::int32_t, kOrbits>> rows;          // orbit degree change per touched node
};

/// Classifies every affected set in both edge states and accumulates the
/// differences. Buffers are reused across calls.
class ChangeEngine {
 public:
  const ToggleDelta& compute(const Graph& g, node_t i, node_t j, int max_size, bool node_rows) {
    const Catalog& cat = Catalog::instance();
    if (slot_of_.size() != g.node_count())
      slot_of_.assign(g.node_count(), -1);
    else
      for (node_t v : delta_.touched) slot_of_[v] = -1;
    delta_.graphlet.fill(0);
    delta_.edge_orbit_hits.fill(0);
    delta_.touched.clear();
    walker_.run(g, i, j, max_size, [&](std::span<const node_t> nodes, std::uint32_t mask) {
      const int k = static_cast<int>(nodes.size());
      const MaskClass& plus = cat.classify(k, mask);
      const MaskClass& minus = cat.classify(k, mask & ~1u);
      ++delta_.graphlet[plus.graphlet];
      ++delta_.edge_orbit_hits[plus.edge_orbit[0]];
      if (minus.graphlet >= 0) --delta_.graphlet[minus.graphlet];
      if (!node_rows) return;
      for (int a = 0; a < k; ++a) {
        auto& row = row_for(nodes[a]);
        ++row[plus.orbit[a]];
        if (minus.graphlet >= 0) --row[minus.orbit[a]];
      }
    });
    return delta_;
  }

  const ToggleDelta& last() const noexcept { return delta_; }

 private:
  std::array<std::int32_t, kOrbits>& row_for(node_t v) {
    std::int32_t& slot = slot_of_[v];
    if (slot < 0) {
      slot = static_cast<std::int32_t>(delta_.touched.size());
      delta_.touched.push_back(v);
      if (delta_.rows.size() < delta_.touched.size()) delta_.rows.emplace_back();
      delta_.rows[slot].fill(0);
    }
    return delta_.rows[slot];
  }

  AffectedSets walker_;
  ToggleDelta delta_;
  std::vector<std::int32_t> slot_of_;
};

/// Orbit degree vectors kept in step with a graph across committed toggles.
/// `tracked_size` 4 maintains orbits 0..14, 5 maintains all 73.
struct GdvCache {
  OrbitDegreeMatrix gd;
  std::uint64_t graph_version = 0;
  int tracked_size = 4;

  GdvCache() = default;
  explicit GdvCache(const Graph& g, int tracked = 4)
      : gd(full_census(g, tracked).gdv), graph_version(g.version()), tracked_size(tracked) {
    if (tracked != 4 && tracked != 5) throw SizeError("GDV cache tracks graphlet order 4 or 5");
  }

  int tracked_orbits() const noexcept { return tracked_size == 5 ? kOrbits : kDistOrbits; }
  bool matches(const Graph& g) const noexcept {
    return graph_version == g.version() && gd.node_count() == g.node_count();
  }
};

/// Model-level change scores: statistic(after toggle) - statistic(before).
class ChangeStatistics {
 public:
  explicit ChangeStatistics(Model model) : model_(std::move(model)), out_(model_.size()), signed_(model_.size()) {}

  const Model& model() const noexcept { return model_; }

  /// `add` states the intended toggle and must agree with the current graph.
  /// A cache is required when the model has grorbitDist terms; when given,
  /// orbit deltas are retained so commit() can update it.
  std::span<const double> evaluate(const Graph& g, node_t i, node_t j, bool add, const GdvCache* cache = nullptr) {
    model_.check_graph(g);
    if (i >= g.node_count() || j >= g.node_count()) throw IndexError("dyad node index out of range");
    if (i == j) throw LoopError("dyad (" + std::to_string(i) + ", " + std::to_string(i) + ") is a self-loop");
    if (g.has_edge(i, j) == add)
      throw StateError(std::string("cannot ") + (add ? "add" : "remove") + " dyad (" + std::to_string(i) + ", " +
                       std::to_string(j) + "): edge is already " + (add ? "present" : "absent"));
    if (cache && !cache->matches(g)) throw StateError("GDV cache is stale for this graph");
    if (!cache && model_.needs_cache()) throw StateError("grorbitDist terms need a GDV cache");

    const int depth = std::max(model_.order(), cache ? cache->tracked_size : 2);
    const bool rows = model_.has_node_terms() || cache != nullptr;
    const ToggleDelta& d = engine_.compute(g, i, j, depth, rows);
    const int s = add ? 1 : -1;
    std::fill(out_.begin(), out_.end(), 0.0);
    for (const ResolvedTerm& t : model_.terms()) accumulate(t, d, s, cache);
    pending_ = Pending{true, i, j, add, g.version(), cache};
    return out_;
  }

  std::span<const double> evaluate(const Graph& g, node_t i, node_t j, const GdvCache* cache = nullptr) {
    return evaluate(g, i, j, !g.has_edge(i, j), cache);
  }

  /// Change statistic t(y+) - t(y-) for the dyad, whatever its current state.
  std::span<const double> delta(const Graph& g, node_t i, node_t j, const GdvCache* cache = nullptr) {
    const bool add = !g.has_edge(i, j);
    auto v = evaluate(g, i, j, add, cache);
    for (std::size_t k = 0; k < v.size(); ++k) signed_[k] = add ? v[k] : -v[k];
    return signed_;
  }

  /// Applies the toggle evaluated last and brings the cache up to date.
  void commit(Graph& g, GdvCache* cache = nullptr) {
    if (!pending_.valid || pending_.version != g.version() || pending_.cache != cache ||
        g.has_edge(pending_.i, pending_.j) == pending_.add)
      throw StateError("commit without a matching evaluation");
    g.toggle(pending_.i, pending_.j);
    if (cache) {
      const ToggleDelta& d = engine_.last();
      const int s = pending_.add ? 1 : -1;
      const int orbits = cache->tracked_orbits();
      for (std::size_t k = 0; k < d.touched.size(); ++k)
        for (int o = 0; o < orbits; ++o) cache->gd(d.touched[k], o) += s * d.rows[k][o];
      cache->graph_version = g.version();
    }
    pending_.valid = false;
  }

  const ToggleDelta& toggle_delta() const noexcept { return engine_.last(); }

 private:
  struct Pending {
    bool valid = false;
    node_t i = 0, j = 0;
    bool add = false;
    std::uint64_t version = 0;
    const GdvCache* cache = nullptr;
  };

  void accumulate(const ResolvedTerm& t, const ToggleDelta& d, int s, const GdvCache* cache) {
    const auto& spec = t.spec;
    switch (spec.family) {
      case Family::edges:
        out_[t.offset] = s * static_cast<double>(d.graphlet[0]);
        break;
      case Family::graphlet_count:
        for (std::size_t k = 0; k < spec.graphlets.size(); ++k)
          out_[t.offset + k] = s * static_cast<double>(d.graphlet[spec.graphlets[k]]);
        break;
      case Family::orbit_cov:
        for (std::size_t k = 0; k < spec.orbits.size(); ++k) {
          double sum = 0.0;
          for (std::size_t r = 0; r < d.touched.size(); ++r)
            if (const auto c = d.rows[r][spec.orbits[k]]) sum += t.values[d.touched[r]] * c;
          out_[t.offset + k] = s * sum;
        }
        break;
      case Family::orbit_factor:
        for (std::size_t r = 0; r < d.touched.size(); ++r) {
          const std::uint32_t code = t.codes[d.touched[r]];
          if (t.column_of_code[code] < 0) continue;
          for (std::size_t k = 0; k < spec.orbits.size(); ++k)
            if (const auto c = d.rows[r][spec.orbits[k]]) out_[t.factor_index(k, code)] += s * c;
        }
        break;
      case Family::orbit_dist:
        for (std::size_t r = 0; r < d.touched.size(); ++r)
          for (std::size_t k = 0; k < spec.orbits.size(); ++k) {
            const std::int64_t c = s * d.rows[r][spec.orbits[k]];
            if (c == 0) continue;
            const std::int64_t before = cache->gd(d.touched[r], spec.orbits[k]);
            if (auto idx = t.dist_index(k, before); idx != SIZE_MAX) out_[idx] -= 1.0;
            if (auto idx = t.dist_index(k, before + c); idx != SIZE_MAX) out_[idx] += 1.0;
          }
        break;
    }
  }

  Model model_;
  ChangeEngine engine_;
  std::vector<double> out_, signed_;
  Pending pending_;
};

}  // namespace gergm

#endif  // GERGM_CHANGE_HPP
