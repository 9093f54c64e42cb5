#ifndef GERGM_GOF_HPP
#define GERGM_GOF_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gergm/census.hpp"
#include "gergm/error.hpp"
#include "gergm/graph.hpp"
#include "gergm/inference.hpp"
#include "gergm/model.hpp"
#include "gergm/sampler.hpp"

namespace gergm {

/// Number of nodes of each degree 0..n-1.
inline std::vector<double> degree_distribution(const Graph& g) {
  std::vector<double> out(std::max<std::size_t>(g.node_count(), 1), 0.0);
  for (node_t v = 0; v < g.node_count(); ++v) out[g.degree(v)] += 1.0;
  return out;
}

/// Dyads by geodesic distance 1..n-1; the last entry counts unreachable pairs.
inline std::vector<double> geodesic_distribution(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(std::max<std::size_t>(n, 1), 0.0);
  std::vector<int> dist(n);
  std::vector<node_t> queue;
  for (node_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (node_t u : g.neighbors(queue[h]))
        if (dist[u] < 0) {
          dist[u] = dist[queue[h]] + 1;
          queue.push_back(u);
        }
    for (node_t t = s + 1; t < n; ++t) {
      if (dist[t] < 0)
        out[n - 1] += 1.0;
      else
        out[dist[t] - 1] += 1.0;
    }
  }
  return out;
}

/// Edges by number of shared partners 0..n-2.
inline std::vector<double> shared_partner_distribution(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(std::max<std::size_t>(n, 2) - 1, 0.0);
  for (auto [i, j] : g.edges()) {
    auto a = g.neighbors(i), b = g.neighbors(j);
    std::size_t common = 0, p = 0, q = 0;
    while (p < a.size() && q < b.size()) {
      if (a[p] < b[q])
        ++p;
      else if (b[q] < a[p])
        ++q;
      else
        ++common, ++p, ++q;
    }
    out[common] += 1.0;
  }
  return out;
}

/// Node triples with 0, 1, 2 and 3 edges among them.
inline std::vector<double> triad_census(const Graph& g) {
  const double n = static_cast<double>(g.node_count());
  double triangles = 0.0, wedges = 0.0;
  for (auto [i, j] : g.edges())
    for (node_t k : g.neighbors(i))
      if (k > j && g.has_edge(j, k)) triangles += 1.0;
  for (node_t v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    wedges += d * (d - 1.0) / 2.0;
  }
  const double two = wedges - 3.0 * triangles;
  const double one = static_cast<double>(g.edge_count()) * (n - 2.0) - 2.0 * two - 3.0 * triangles;
  const double all = n * (n - 1.0) * (n - 2.0) / 6.0;
  return {all - one - two - triangles, one, two, triangles};
}

inline std::vector<double> graphlet_distribution(const Graph& g) {
  const Census c = full_census(g);
  return {c.counts.begin(), c.counts.end()};
}

enum class GofFamily { degree, distance, esp, triadcensus, graphlets };

inline const char* gof_family_name(GofFamily f) {
  switch (f) {
    case GofFamily::degree: return "degree";
    case GofFamily::distance: return "distance";
    case GofFamily::esp: return "esp";
    case GofFamily::triadcensus: return "triadcensus";
    case GofFamily::graphlets: return "graphlets";
  }
  return "?";
}

inline GofFamily parse_gof_family(const std::string& s) {
  for (auto f : {GofFamily::degree, GofFamily::distance, GofFamily::esp, GofFamily::triadcensus, GofFamily::graphlets})
    if (s == gof_family_name(f)) return f;
  throw ValueError("unknown GOF family '" + s + "'");
}

inline std::vector<double> gof_statistics(const Graph& g, GofFamily f) {
  switch (f) {
    case GofFamily::degree: return degree_distribution(g);
    case GofFamily::distance: return geodesic_distribution(g);
    case GofFamily::esp: return shared_partner_distribution(g);
    case GofFamily::triadcensus: return triad_census(g);
    case GofFamily::graphlets: return graphlet_distribution(g);
  }
  return {};
}

/// R type-7 quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) return NAN;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Two-sided Monte Carlo p-value with the +1 correction:
/// min(1, 2 min(#{sim <= obs} + 1, #{sim >= obs} + 1) / (nsim + 1)).
inline double monte_carlo_p_value(std::size_t at_most, std::size_t at_least, std::size_t nsim) {
  const double tail = static_cast<double>(std::min(at_most, at_least) + 1);
  return std::min(1.0, 2.0 * tail / static_cast<double>(nsim + 1));
}

inline constexpr std::array<double, 7> kGofProbs{0.0, 0.025, 0.25, 0.5, 0.75, 0.975, 1.0};

struct GofRow {
  GofFamily family;
  std::string bin;
  double observed = 0.0;
  std::array<double, 7> quantiles{};  // min, 2.5%, 25%, 50%, 75%, 97.5%, max
  double mean = 0.0;
  double p_value = 1.0;
  bool outside = false;  // observed outside the [2.5%, 97.5%] band
};

struct GofReport {
  std::vector<GofRow> rows;
  std::size_t nsim = 0;
  std::uint64_t seed = 0;

  double fraction_inside() const {
    if (rows.empty()) return 1.0;
    std::size_t inside = 0;
    for (const auto& r : rows) inside += r.outside ? 0 : 1;
    return static_cast<double>(inside) / static_cast<double>(rows.size());
  }
};

namespace detail {

inline std::string bin_label(GofFamily f, std::size_t k, std::size_t length) {
  switch (f) {
    case GofFamily::distance: return k + 1 == length ? "Inf" : std::to_string(k + 1);
    case GofFamily::triadcensus: return std::to_string(k) + "-edge";
    case GofFamily::graphlets: return "G" + std::to_string(k);
    default: return std::to_string(k);
  }
}

}  // namespace detail

/// Tabulates one family: observed value and simulated quantiles per bin.
/// Trailing bins that are zero everywhere are dropped; the unreachable bucket
/// of the distance family is always kept.
inline std::vector<GofRow> gof_table(GofFamily f, const std::vector<double>& observed,
                                     const std::vector<std::vector<double>>& simulated) {
  std::size_t length = observed.size();
  std::size_t last = 0;
  const std::size_t scan = f == GofFamily::distance ? length - 1 : length;
  for (std::size_t k = 0; k < scan; ++k) {
    bool any = observed[k] != 0.0;
    for (const auto& s : simulated) any = any || s[k] != 0.0;
    if (any) last = k + 1;
  }
  std::vector<GofRow> rows;
  auto add = [&](std::size_t k) {
    GofRow row;
    row.family = f;
    row.bin = detail::bin_label(f, k, length);
    row.observed = observed[k];
    std::vector<double> xs;
    xs.reserve(simulated.size());
    for (const auto& s : simulated) xs.push_back(s[k]);
    std::sort(xs.begin(), xs.end());
    for (std::size_t q = 0; q < kGofProbs.size(); ++q) row.quantiles[q] = quantile_sorted(xs, kGofProbs[q]);
    double sum = 0.0;
    std::size_t le = 0, ge = 0;
    for (double x : xs) {
      sum += x;
      le += x <= row.observed;
      ge += x >= row.observed;
    }
    row.mean = xs.empty() ? NAN : sum / static_cast<double>(xs.size());
    row.p_value = monte_carlo_p_value(le, ge, xs.size());
    row.outside = row.observed < row.quantiles[1] || row.observed > row.quantiles[5];
    rows.push_back(row);
  };
  for (std::size_t k = 0; k < last; ++k) add(k);
  if (f == GofFamily::distance) add(length - 1);
  return rows;
}

struct GofConfig {
  SamplerConfig sampler;  // sample_size is the number of simulated networks
  std::vector<GofFamily> families{GofFamily::degree, GofFamily::distance, GofFamily::esp, GofFamily::triadcensus};
};

/// Simulates networks at the fitted coefficients, starting from g, and
/// compares each family with the observed network.
inline GofReport gof(const FittedModel& fit, const Graph& g, const GofConfig& cfg) {
  if (cfg.sampler.sample_size < 2) throw ValueError("GOF needs at least two simulated networks");
  const auto sim = simulate(g, fit.model, cfg.sampler, true);
  GofReport report;
  report.nsim = sim.graphs.size();
  report.seed = cfg.sampler.seed;
  for (GofFamily f : cfg.families) {
    std::vector<std::vector<double>> simulated;
    simulated.reserve(sim.graphs.size());
    for (const auto& s : sim.graphs) simulated.push_back(gof_statistics(s, f));
    for (auto& row : gof_table(f, gof_statistics(g, f), simulated)) report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::string gof_csv(const GofReport& r) {
  std::ostringstream out;
  out << "family,bin,observed,min,q025,q25,median,q75,q975,max,mean,p_value,outside\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  for (const auto& row : r.rows) {
    out << gof_family_name(row.family) << ',' << row.bin << ',' << num(row.observed);
    for (double q : row.quantiles) out << ',' << num(q);
    out << ',' << num(row.mean) << ',' << num(row.p_value) << ',' << (row.outside ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::string gof_text(const GofReport& r) {
  std::ostringstream out;
  char line[256];
  GofFamily current{};
  bool first = true;
  for (const auto& row : r.rows) {
    if (first || row.family != current) {
      out << (first ? "" : "\n") << "Goodness-of-fit for " << gof_family_name(row.family) << "\n";
      std::snprintf(line, sizeof line, "%-8s %10s %10s %10s %10s %10s %10s %10s %10s\n", "bin", "obs", "min", "2.5%",
                    "median", "mean", "97.5%", "max", "p-value");
      out << line;
      current = row.family;
      first = false;
    }
    std::snprintf(line, sizeof line, "%-8s %10.6g %10.6g %10.6g %10.6g %10.6g %10.6g %10.6g %10.6g%s\n",
                  row.bin.c_str(), row.observed, row.quantiles[0], row.quantiles[1], row.quantiles[3], row.mean,
                  row.quantiles[5], row.quantiles[6], row.p_value, row.outside ? " *" : "");
    out << line;
  }
  std::snprintf(line, sizeof line, "\n%zu simulations, %.1f%% of bins inside the 95%% band\n", r.nsim,
                100.0 * r.fraction_inside());
  out << line;
  return out.str();
}

struct QuantileResult {
  std::string name;
  double observed = 0.0;
  double quantile = 0.0;  // fraction of simulated values <= observed
  double p_value = 1.0;
  bool degenerate = false;
};

/// Locates the observed value of each holdout statistic within its
/// distribution under the reduced fit.
inline std::vector<QuantileResult> quantile_test(const Graph& g, const FittedModel& reduced, const TermSpec& holdout,
                                                 const AttributeSet& attrs, const SamplerConfig& cfg) {
  if (cfg.sample_size < 1) throw ValueError("quantile test needs simulated networks");
  const Model hold({holdout}, attrs, g.node_count());
  for (const auto& name : hold.names())
    if (std::find(reduced.model.names().begin(), reduced.model.names().end(), name) != reduced.model.names().end())
      throw ValueError("holdout statistic '" + name + "' is already in the reduced model");

  std::vector<TermSpec> specs = reduced.model.specs();
  specs.push_back(holdout);
  Model joint(specs, attrs, g.node_count());
  std::vector<double> theta = reduced.theta();
  theta.resize(joint.size(), 0.0);
  joint.set_theta(theta);

  const auto observed = joint.observed_statistics(g);
  const auto sim = simulate(g, joint, cfg);
  const std::size_t offset = reduced.model.size();
  std::vector<QuantileResult> out;
  for (std::size_t k = 0; k < hold.size(); ++k) {
    QuantileResult r;
    r.name = hold.names()[k];
    r.observed = observed[offset + k];
    std::size_t le = 0, ge = 0;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& row : sim.statistics) {
      const double x = row[offset + k];
      le += x <= r.observed;
      ge += x >= r.observed;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const std::size_t nsim = sim.statistics.size();
    r.p_value = monte_carlo_p_value(le, ge, nsim);
    if (lo == hi) {
      r.degenerate = true;
      r.quantile = r.observed < lo ? 0.0 : r.observed > lo ? 1.0 : 0.5;
      warn("quantile test: simulated '" + r.name + "' is constant; reference distribution is degenerate");
    } else {
      r.quantile = static_cast<double>(le) / static_cast<double>(nsim);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gergm

#endif  // GERGM_GOF_HPP
