#ifndef GERGM_CENSUS_HPP
#define GERGM_CENSUS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gergm/catalog.hpp"
#include "gergm/graph.hpp"

namespace gergm {

using GraphletCounts = std::array<std::int64_t, kGraphlets>;

/// Graphlet degree vectors of all nodes, row-major n x 73.
class OrbitDegreeMatrix {
 public:
  OrbitDegreeMatrix() = default;
  explicit OrbitDegreeMatrix(std::size_t n) : n_(n), data_(n * kOrbits, 0) {}

  std::size_t node_count() const noexcept { return n_; }
  std::int64_t& operator()(node_t v, int orbit) noexcept { return data_[v * kOrbits + orbit]; }
  std::int64_t operator()(node_t v, int orbit) const noexcept { return data_[v * kOrbits + orbit]; }
  std::span<const std::int64_t> row(node_t v) const noexcept { return {data_.data() + v * kOrbits, kOrbits}; }

  std::int64_t column_sum(int orbit) const noexcept {
    std::int64_t s = 0;
    for (std::size_t v = 0; v < n_; ++v) s += data_[v * kOrbits + orbit];
    return s;
  }

  friend bool operator==(const OrbitDegreeMatrix&, const OrbitDegreeMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> data_;
};

struct Census {
  GraphletCounts counts{};
  OrbitDegreeMatrix gdv;
};

namespace detail {

// ESU enumeration: every connected node set of size <= max_size is visited
// once, rooted at its smallest node.
class CensusWalker {
 public:
  CensusWalker(const Graph& g, int max_size, Census& out)
      : g_(g), max_size_(max_size), out_(out), catalog_(Catalog::instance()) {}

  void run() {
    for (node_t v = 0; v < g_.node_count(); ++v) {
      sub_[0] = v;
      ext_[1].clear();
      for (node_t u : g_.neighbors(v))
        if (u > v) ext_[1].push_back(u);
      extend(1, 0);
    }
  }

 private:
  void extend(int size, std::uint32_t mask) {
    const node_t root = sub_[0];
    const auto& ext = ext_[size];
    for (std::size_t idx = 0; idx < ext.size(); ++idx) {
      const node_t w = ext[idx];
      std::uint32_t m = mask;
      for (int a = 0; a < size; ++a)
        if (g_.has_edge(sub_[a], w)) m |= 1u << pair_slot(a, size);
      sub_[size] = w;
      record(size + 1, m);
      if (size + 1 == max_size_) continue;
      auto& next = ext_[size + 1];
      next.assign(ext.begin() + static_cast<std::ptrdiff_t>(idx) + 1, ext.end());
      for (node_t u : g_.neighbors(w)) {
        if (u <= root) continue;
        bool exclusive = true;
        for (int a = 0; a < size && exclusive; ++a) exclusive = sub_[a] != u && !g_.has_edge(sub_[a], u);
        if (exclusive) next.push_back(u);
      }
      extend(size + 1, m);
    }
  }

  void record(int k, std::uint32_t mask) {
    const MaskClass& mc = catalog_.classify(k, mask);
    ++out_.counts[mc.graphlet];
    for (int a = 0; a < k; ++a) ++out_.gdv(sub_[a], mc.orbit[a]);
  }

  const Graph& g_;
  int max_size_;
  Census& out_;
  const Catalog& catalog_;
  std::array<node_t, kMaxSize> sub_{};
  std::array<std::vector<node_t>, kMaxSize + 1> ext_;
};

}  // namespace detail

/// Exact graphlet counts and orbit degrees of every node, from scratch.
/// `max_size` limits the graphlet order (2..5); larger graphlets stay zero.
inline Census full_census(const Graph& g, int max_size = kMaxSize) {
  if (max_size < 2 || max_size > kMaxSize) throw SizeError("census order must be in [2, 5]");
  Census out{{}, OrbitDegreeMatrix(g.node_count())};
  detail::CensusWalker(g, max_size, out).run();
  return out;
}

}  // namespace gergm

#endif  // GERGM_CENSUS_HPP
