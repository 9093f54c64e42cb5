#ifndef GERGM_MODEL_HPP
#define GERGM_MODEL_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gergm/attributes.hpp"
#include "gergm/census.hpp"
#include "gergm/error.hpp"
#include "gergm/graph.hpp"
#include "gergm/terms.hpp"

namespace gergm {

/// Terms bound to a node set, plus optional coefficients.
class Model {
 public:
  Model() = default;

  Model(const std::vector<TermSpec>& terms, const AttributeSet& attrs, std::size_t node_count)
      : node_count_(node_count) {
    std::set<std::string> seen;
    for (const auto& spec : terms) {
      ResolvedTerm r = resolve_term(spec, attrs, node_count);
      r.offset = names_.size();
      for (const auto& name : r.names) {
        if (!seen.insert(name).second) throw NameError("duplicate statistic '" + name + "' in model");
        names_.push_back(name);
      }
      order_ = std::max(order_, r.order);
      has_node_terms_ = has_node_terms_ || r.spec.family == Family::orbit_cov ||
                        r.spec.family == Family::orbit_factor || r.spec.family == Family::orbit_dist;
      has_dist_ = has_dist_ || r.spec.family == Family::orbit_dist;
      terms_.push_back(std::move(r));
    }
    if (names_.empty()) throw ValueError("model has no statistics");
  }

  Model(const std::vector<TermSpec>& terms, const AttributeSet& attrs, const Graph& g)
      : Model(terms, attrs, g.node_count()) {}

  std::size_t size() const noexcept { return names_.size(); }
  std::size_t node_count() const noexcept { return node_count_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<ResolvedTerm>& terms() const noexcept { return terms_; }
  std::vector<TermSpec> specs() const {
    std::vector<TermSpec> out;
    for (const auto& t : terms_) out.push_back(t.spec);
    return out;
  }

  /// Largest graphlet order any statistic depends on.
  int order() const noexcept { return order_; }
  bool has_node_terms() const noexcept { return has_node_terms_; }
  bool needs_cache() const noexcept { return has_dist_; }

  bool has_theta() const noexcept { return !theta_.empty(); }
  const std::vector<double>& theta() const {
    if (theta_.empty()) throw StateError("model has no coefficients");
    return theta_;
  }
  void set_theta(std::vector<double> theta) {
    if (theta.size() != size())
      throw ShapeError("theta has " + std::to_string(theta.size()) + " entries, model has " + std::to_string(size()) +
                       " statistics");
    for (double x : theta)
      if (!std::isfinite(x)) throw ValueError("theta must be finite");
    theta_ = std::move(theta);
  }
  Model with_theta(std::vector<double> theta) const {
    Model m = *this;
    m.set_theta(std::move(theta));
    return m;
  }

  void check_graph(const Graph& g) const {
    if (g.node_count() != node_count_)
      throw SizeError("model is bound to " + std::to_string(node_count_) + " nodes, graph has " +
                      std::to_string(g.node_count()));
  }

  std::vector<double> statistics(const Census& c) const {
    std::vector<double> out(size());
    for (const auto& t : terms_) term_statistics(t, c, out);
    return out;
  }

  /// Exact statistics of `g` by full census.
  std::vector<double> observed_statistics(const Graph& g) const {
    check_graph(g);
    return statistics(full_census(g, order_));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : terms_) j["terms"].push_back(gergm::to_json(t.spec));
    if (has_theta()) j["theta"] = theta_;
    return j;
  }

  static Model from_json(const nlohmann::json& j, const AttributeSet& attrs, std::size_t node_count) {
    if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
      throw ValueError("model JSON needs a 'terms' array");
    std::vector<TermSpec> specs;
    for (const auto& t : j.at("terms")) specs.push_back(term_from_json(t));
    Model m(specs, attrs, node_count);
    if (j.contains("theta") && !j.at("theta").is_null()) m.set_theta(j.at("theta").get<std::vector<double>>());
    return m;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<ResolvedTerm> terms_;
  std::vector<std::string> names_;
  std::vector<double> theta_;
  int order_ = 2;
  bool has_node_terms_ = false;
  bool has_dist_ = false;
};

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValueError(path + ": invalid JSON: " + e.what());
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ShapeError("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double logistic(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// P(Y_ij = 1 | rest) for change statistics `delta` = t(y+) - t(y-).
inline double conditional_edge_probability(std::span<const double> delta, std::span<const double> theta) {
  for (double x : theta)
    if (!std::isfinite(x)) throw ValueError("theta must be finite");
  return logistic(dot(delta, theta));
}

}  // namespace gergm

#endif  // GERGM_MODEL_HPP
