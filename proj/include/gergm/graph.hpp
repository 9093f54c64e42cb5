#ifndef GERGM_GRAPH_HPP
#define GERGM_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gergm/error.hpp"

namespace gergm {

using node_t = std::uint32_t;

struct ToggleReceipt {
  bool was_present;
};

/// Undirected simple graph on a fixed node set.
///
/// Adjacency is stored twice: a bit matrix for O(1) pair tests and sorted
/// neighbor arrays for iteration. Very large graphs skip the bit matrix and
/// fall back to binary search in the shorter neighbor array.
class Graph {
 public:
  static constexpr std::size_t kMaxMatrixNodes = 1u << 14;

  Graph() = default;

  explicit Graph(std::size_t n) : Graph(default_labels(n)) {}

  explicit Graph(std::vector<std::string> labels) : labels_(std::move(labels)), adj_(labels_.size()) {
    const std::size_t n = labels_.size();
    if (n <= kMaxMatrixNodes) {
      words_ = (n + 63) / 64;
      bits_.assign(words_ * n, 0);
    }
    index_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!index_.emplace(labels_[v], static_cast<node_t>(v)).second)
        throw ValueError("duplicate node label '" + labels_[v] + "'");
    }
  }

  std::size_t node_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t dyad_count() const noexcept { return node_count() * (node_count() - (node_count() > 0)) / 2; }
  double density() const noexcept {
    return dyad_count() == 0 ? 0.0 : static_cast<double>(edge_count_) / static_cast<double>(dyad_count());
  }

  /// Incremented by every successful mutation; lets caches detect staleness.
  std::uint64_t version() const noexcept { return version_; }

  bool has_edge(node_t i, node_t j) const noexcept {
    if (i == j) return false;
    if (words_ != 0) return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1u;
    const auto& a = adj_[i].size() <= adj_[j].size() ? adj_[i] : adj_[j];
    const node_t other = adj_[i].size() <= adj_[j].size() ? j : i;
    return std::binary_search(a.begin(), a.end(), other);
  }

  std::span<const node_t> neighbors(node_t v) const noexcept { return adj_[v]; }
  std::size_t degree(node_t v) const noexcept { return adj_[v].size(); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(node_t v) const { return labels_.at(v); }

  std::optional<node_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  ToggleReceipt toggle(node_t i, node_t j) {
    check_dyad(i, j);
    const bool present = has_edge(i, j);
    set(i, j, !present);
    return {present};
  }

  /// Returns true if the adjacency changed.
  bool set_edge(node_t i, node_t j, bool present) {
    check_dyad(i, j);
    if (has_edge(i, j) == present) return false;
    set(i, j, present);
    return true;
  }

  bool add_edge(node_t i, node_t j) { return set_edge(i, j, true); }
  bool remove_edge(node_t i, node_t j) { return set_edge(i, j, false); }

  /// Edges as (i, j) with i < j, in lexicographic order.
  std::vector<std::pair<node_t, node_t>> edges() const {
    std::vector<std::pair<node_t, node_t>> out;
    out.reserve(edge_count_);
    for (node_t i = 0; i < node_count(); ++i)
      for (node_t j : adj_[i])
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  /// Structural equality (node count and adjacency); labels are ignored.
  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

 private:
  static std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out(n);
    for (std::size_t v = 0; v < n; ++v) out[v] = std::to_string(v);
    return out;
  }

  void check_dyad(node_t i, node_t j) const {
    if (i >= node_count() || j >= node_count())
      throw IndexError("node index out of range: (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") with " + std::to_string(node_count()) + " nodes");
    if (i == j) throw LoopError("self-loop on node " + std::to_string(i) + " violates the loopless contract");
  }

  void set(node_t i, node_t j, bool present) {
    if (words_ != 0) {
      const std::uint64_t bi = std::uint64_t{1} << (j & 63), bj = std::uint64_t{1} << (i & 63);
      if (present) {
        bits_[i * words_ + (j >> 6)] |= bi;
        bits_[j * words_ + (i >> 6)] |= bj;
      } else {
        bits_[i * words_ + (j >> 6)] &= ~bi;
        bits_[j * words_ + (i >> 6)] &= ~bj;
      }
    }
    auto update = [present](std::vector<node_t>& list, node_t x) {
      auto it = std::lower_bound(list.begin(), list.end(), x);
      if (present)
        list.insert(it, x);
      else
        list.erase(it);
    };
    update(adj_[i], j);
    update(adj_[j], i);
    edge_count_ = present ? edge_count_ + 1 : edge_count_ - 1;
    ++version_;
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, node_t> index_;
  std::vector<std::vector<node_t>> adj_;
  std::vector<std::uint64_t> bits_;
  std::size_t words_ = 0;
  std::size_t edge_count_ = 0;
  std::uint64_t version_ = 0;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

}  // namespace detail

/// Parses an undirected edge list.
///
/// One edge per line as two whitespace-separated node identifiers; `#` starts a
/// comment. A line `%nodes a b c ...` declares nodes up front (isolates or a
/// fixed ordering). Nodes are indexed in order of first appearance. Repeated
/// or reversed duplicates collapse to one edge with a single warning.
inline Graph read_edge_list(std::istream& in, const std::string& source = "<stream>") {
  std::vector<std::string> labels;
  std::unordered_map<std::string, node_t> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<node_t>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::vector<std::pair<node_t, node_t>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front() == "%nodes") {
      for (std::size_t t = 1; t < tokens.size(); ++t) intern(tokens[t]);
      continue;
    }
    if (tokens.size() != 2)
      throw ParseError(lineno, source + ": expected two node identifiers, found " + std::to_string(tokens.size()) +
                                   " tokens");
    if (tokens[0] == tokens[1])
      throw LoopError(source + ": line " + std::to_string(lineno) + ": self-loop on '" + tokens[0] +
                      "' violates the loopless contract");
    const node_t a = intern(tokens[0]);
    pairs.emplace_back(a, intern(tokens[1]));
  }

  Graph g(std::move(labels));
  std::size_t duplicates = 0;
  for (auto [a, b] : pairs)
    if (!g.add_edge(a, b)) ++duplicates;
  if (duplicates > 0)
    warn(source + ": " + std::to_string(duplicates) + " duplicate edge line(s) collapsed");
  return g;
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  return read_edge_list(in, path);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "%nodes";
  for (const auto& label : g.labels()) out << ' ' << label;
  out << '\n';
  for (auto [i, j] : g.edges()) out << g.label(i) << ' ' << g.label(j) << '\n';
}

}  // namespace gergm

#endif  // GERGM_GRAPH_HPP
