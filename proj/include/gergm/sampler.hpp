#ifndef GERGM_SAMPLER_HPP
#define GERGM_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>
#include <vector>

#include "gergm/change.hpp"
#include "gergm/census.hpp"
#include "gergm/error.hpp"
#include "gergm/graph.hpp"
#include "gergm/model.hpp"

namespace gergm {

struct SamplerConfig {
  std::uint64_t burnin = 10000;
  std::uint64_t interval = 100;
  std::uint64_t sample_size = 100;
  std::uint64_t seed = 0;
  double tie_probability = 0.0;        // 0 = uniform dyad proposal
  std::uint64_t debug_check_every = 0;  // 0 disables recount checks
  unsigned chains = 1;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of chain c: splitmix64(master + golden * (c + 1)).
inline std::uint64_t chain_seed(std::uint64_t master, unsigned chain) {
  return splitmix64(master + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(chain) + 1));
}

namespace detail {

// Edge set with O(1) uniform draws, for the tie / no-tie proposal.
class EdgeIndex {
 public:
  explicit EdgeIndex(const Graph& g) {
    for (auto [i, j] : g.edges()) insert(i, j);
  }
  std::size_t size() const noexcept { return edges_.size(); }
  std::pair<node_t, node_t> operator[](std::size_t k) const { return edges_[k]; }
  void toggle(node_t i, node_t j) {
    if (i > j) std::swap(i, j);
    auto it = pos_.find(key(i, j));
    if (it == pos_.end()) {
      insert(i, j);
      return;
    }
    const std::size_t k = it->second;
    pos_.erase(it);
    if (k + 1 != edges_.size()) {
      edges_[k] = edges_.back();
      pos_[key(edges_[k].first, edges_[k].second)] = k;
    }
    edges_.pop_back();
  }

 private:
  static std::uint64_t key(node_t i, node_t j) { return (std::uint64_t{i} << 32) | j; }
  void insert(node_t i, node_t j) {
    pos_[key(i, j)] = edges_.size();
    edges_.emplace_back(i, j);
  }
  std::vector<std::pair<node_t, node_t>> edges_;
  std::unordered_map<std::uint64_t, std::size_t> pos_;
};

}  // namespace detail

/// One Metropolis-Hastings chain over graphs on a fixed node set.
class Chain {
 public:
  Chain(const Model& model, const Graph& g0, const SamplerConfig& cfg, std::uint64_t seed)
      : scorer_(model),
        graph_(g0),
        rng_(seed),
        theta_(model.theta()),
        tie_p_(cfg.tie_probability),
        check_every_(cfg.debug_check_every) {
    model.check_graph(g0);
    if (graph_.node_count() < 2) throw SizeError("sampling needs at least two nodes");
    if (!(tie_p_ >= 0.0 && tie_p_ <= 1.0)) throw ValueError("tie probability must lie in [0, 1]");
    if (model.needs_cache()) cache_.emplace(graph_, 4);
    if (tie_p_ > 0.0) edges_.emplace(graph_);
    stats_ = model.observed_statistics(graph_);
  }

  /// Proposes one toggle; returns whether it was accepted.
  bool step() {
    const std::size_t n = graph_.node_count();
    const double dyads = static_cast<double>(graph_.dyad_count());
    node_t i, j;
    if (edges_ && edges_->size() > 0 && unit_(rng_) < tie_p_) {
      std::tie(i, j) = (*edges_)[std::uniform_int_distribution<std::size_t>(0, edges_->size() - 1)(rng_)];
    } else {
      i = static_cast<node_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_));
      j = static_cast<node_t>(std::uniform_int_distribution<std::size_t>(0, n - 2)(rng_));
      if (j >= i) ++j;
    }
    const bool present = graph_.has_edge(i, j);
    const GdvCache* cache = cache_ ? &*cache_ : nullptr;
    auto change = scorer_.evaluate(graph_, i, j, !present, cache);
    double log_ratio = dot(theta_, change);
    if (edges_) {
      // q(d | y) = (1 - p) / D + p [d in y] / |E(y)|, uniform only when y is empty.
      auto q = [&](bool in, std::size_t m) {
        return m == 0 ? 1.0 / dyads : (1.0 - tie_p_) / dyads + (in ? tie_p_ / static_cast<double>(m) : 0.0);
      };
      const std::size_t m = edges_->size(), m_after = present ? m - 1 : m + 1;
      log_ratio += std::log(q(!present, m_after)) - std::log(q(present, m));
    }
    ++proposals_;
    if (!(log_ratio >= 0.0 || unit_(rng_) < std::exp(log_ratio))) return false;
    for (std::size_t k = 0; k < stats_.size(); ++k) stats_[k] += change[k];
    scorer_.commit(graph_, cache_ ? &*cache_ : nullptr);
    if (edges_) edges_->toggle(i, j);
    ++accepted_;
    if (check_every_ && accepted_ % check_every_ == 0) verify();
    return true;
  }

  /// Recounts from scratch and compares with the incremental state.
  void verify() const {
    const auto fresh = scorer_.model().observed_statistics(graph_);
    for (std::size_t k = 0; k < fresh.size(); ++k)
      if (std::abs(fresh[k] - stats_[k]) > 1e-9 * std::max(1.0, std::abs(fresh[k])))
        throw ConsistencyError("statistic '" + scorer_.model().names()[k] + "' drifted from a full recount");
    if (cache_ && cache_->gd != full_census(graph_, cache_->tracked_size).gdv)
      throw ConsistencyError("GDV cache drifted from a full census");
  }

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<double>& statistics() const noexcept { return stats_; }
  std::uint64_t proposals() const noexcept { return proposals_; }
  std::uint64_t accepted() const noexcept { return accepted_; }

 private:
  ChangeStatistics scorer_;
  Graph graph_;
  std::optional<GdvCache> cache_;
  std::optional<detail::EdgeIndex> edges_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::vector<double> theta_;
  std::vector<double> stats_;
  double tie_p_;
  std::uint64_t check_every_;
  std::uint64_t proposals_ = 0, accepted_ = 0;
};

struct SimulationResult {
  std::vector<std::vector<double>> statistics;  // one row per retained sample
  std::vector<Graph> graphs;                    // only when graphs are kept
  std::vector<Graph> final_graphs;              // last state of each chain
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / proposals : 0.0; }
};

/// Runs `cfg.chains` independent chains from g0. The retained samples are
/// split across chains (earlier chains take the remainder), each chain runs
/// its own burn-in, and rows are concatenated in chain order.
inline SimulationResult simulate(const Graph& g0, const Model& model, const SamplerConfig& cfg,
                                 bool keep_graphs = false) {
  if (!model.has_theta()) throw StateError("simulation needs model coefficients");
  if (cfg.interval == 0) throw ValueError("sampling interval must be positive");
  const unsigned chains = std::max(1u, cfg.chains);
  std::vector<SimulationResult> parts(chains);
  std::vector<std::exception_ptr> errors(chains);
  auto run_chain = [&](unsigned c) {
    try {
      const std::uint64_t share = cfg.sample_size / chains + (c < cfg.sample_size % chains ? 1 : 0);
      Chain chain(model, g0, cfg, chain_seed(cfg.seed, c));
      SimulationResult& out = parts[c];
      for (std::uint64_t t = 0; t < cfg.burnin; ++t) chain.step();
      for (std::uint64_t s = 0; s < share; ++s) {
        for (std::uint64_t t = 0; t < cfg.interval; ++t) chain.step();
        out.statistics.push_back(chain.statistics());
        if (keep_graphs) out.graphs.push_back(chain.graph());
      }
      out.final_graphs.push_back(chain.graph());
      out.proposals = chain.proposals();
      out.accepted = chain.accepted();
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (chains == 1) {
    run_chain(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned c = 0; c < chains; ++c) threads.emplace_back(run_chain, c);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  SimulationResult out;
  for (auto& p : parts) {
    for (auto& row : p.statistics) out.statistics.push_back(std::move(row));
    for (auto& g : p.graphs) out.graphs.push_back(std::move(g));
    for (auto& g : p.final_graphs) out.final_graphs.push_back(std::move(g));
    out.proposals += p.proposals;
    out.accepted += p.accepted;
  }
  return out;
}

}  // namespace gergm

#endif  // GERGM_SAMPLER_HPP
