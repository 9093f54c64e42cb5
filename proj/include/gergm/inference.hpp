#ifndef GERGM_INFERENCE_HPP
#define GERGM_INFERENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "gergm/change.hpp"
#include "gergm/error.hpp"
#include "gergm/graph.hpp"
#include "gergm/model.hpp"
#include "gergm/sampler.hpp"

namespace gergm {

enum class Convergence { converged, max_iter, failed };

inline const char* convergence_name(Convergence c) {
  switch (c) {
    case Convergence::converged: return "converged";
    case Convergence::max_iter: return "max_iter";
    case Convergence::failed: return "failed";
  }
  return "?";
}

struct FittedModel {
  Model model;  // theta filled
  std::string method;
  std::vector<double> std_errors;
  int iterations = 0;
  std::vector<double> loglik_improvements;
  Convergence convergence = Convergence::failed;
  std::string diagnostic;
  std::size_t dyads = 0;
  std::optional<double> loglik;  // log-likelihood (pseudo for MPLE)
  double null_deviance = 0.0;
  std::optional<double> residual_deviance, aic, bic;
  std::uint64_t seed = 0;

  const std::vector<double>& theta() const { return model.theta(); }

  nlohmann::json to_json() const {
    nlohmann::json j = model.to_json();
    j["method"] = method;
    j["names"] = model.names();
    j["std_errors"] = std_errors;
    j["iterations"] = iterations;
    j["loglik_improvements"] = loglik_improvements;
    j["convergence"] = convergence_name(convergence);
    if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
    j["dyads"] = dyads;
    j["null_deviance"] = null_deviance;
    auto opt = [&](const char* key, const std::optional<double>& v) { j[key] = v ? nlohmann::json(*v) : nlohmann::json(); };
    opt("loglik", loglik);
    opt("residual_deviance", residual_deviance);
    opt("aic", aic);
    opt("bic", bic);
    j["seed"] = seed;
    return j;
  }

  static FittedModel from_json(const nlohmann::json& j, const AttributeSet& attrs, std::size_t node_count) {
    FittedModel f;
    f.model = Model::from_json(j, attrs, node_count);
    if (!f.model.has_theta()) throw ValueError("fit file has no theta");
    f.method = j.value("method", "");
    f.std_errors = j.value("std_errors", std::vector<double>(f.model.size(), 0.0));
    f.iterations = j.value("iterations", 0);
    f.loglik_improvements = j.value("loglik_improvements", std::vector<double>{});
    const std::string c = j.value("convergence", "failed");
    f.convergence = c == "converged" ? Convergence::converged : c == "max_iter" ? Convergence::max_iter
                                                                               : Convergence::failed;
    f.diagnostic = j.value("diagnostic", "");
    f.dyads = j.value("dyads", std::size_t{0});
    f.null_deviance = j.value("null_deviance", 0.0);
    auto opt = [&](const char* key) -> std::optional<double> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<double>();
    };
    f.loglik = opt("loglik");
    f.residual_deviance = opt("residual_deviance");
    f.aic = opt("aic");
    f.bic = opt("bic");
    f.seed = j.value("seed", std::uint64_t{0});
    return f;
  }
};

/// Fills deviance, AIC and BIC from the log-likelihood, if known.
inline void set_information_criteria(FittedModel& f) {
  const double p = static_cast<double>(f.model.size());
  f.null_deviance = 2.0 * static_cast<double>(f.dyads) * std::log(2.0);
  if (!f.loglik) {
    f.residual_deviance = f.aic = f.bic = std::nullopt;
    return;
  }
  f.residual_deviance = -2.0 * *f.loglik;
  f.aic = *f.residual_deviance + 2.0 * p;
  f.bic = *f.residual_deviance + p * std::log(static_cast<double>(f.dyads));
}

namespace detail {

inline Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows, std::size_t p) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < p; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline std::vector<double> standard_errors(const Eigen::MatrixXd& information) {
  Eigen::MatrixXd cov = information.completeOrthogonalDecomposition().pseudoInverse();
  std::vector<double> se(static_cast<std::size_t>(cov.rows()));
  for (Eigen::Index k = 0; k < cov.rows(); ++k) se[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, cov(k, k)));
  return se;
}

}  // namespace detail

/// Dyad-level design for pseudo-likelihood: unique change-statistic rows with
/// the number of dyads sharing each row and how many of them are edges.
struct DyadDesign {
  std::vector<std::vector<double>> rows;
  std::vector<double> weight;
  std::vector<double> edges;
  std::size_t dyads = 0;
};

inline DyadDesign dyad_design(const Graph& g, const Model& model) {
  model.check_graph(g);
  ChangeStatistics scorer(model);
  std::optional<GdvCache> cache;
  if (model.needs_cache()) cache.emplace(g, 4);
  std::map<std::vector<double>, std::pair<double, double>> groups;
  const std::size_t n = g.node_count();
  for (node_t i = 0; i < n; ++i)
    for (node_t j = i + 1; j < n; ++j) {
      auto d = scorer.delta(g, i, j, cache ? &*cache : nullptr);
      auto& cell = groups[std::vector<double>(d.begin(), d.end())];
      cell.first += 1.0;
      cell.second += g.has_edge(i, j) ? 1.0 : 0.0;
    }
  DyadDesign out;
  out.dyads = g.dyad_count();
  for (auto& [row, cell] : groups) {
    out.rows.push_back(row);
    out.weight.push_back(cell.first);
    out.edges.push_back(cell.second);
  }
  return out;
}

namespace detail {

struct LogisticFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd information;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Newton iterations with step halving for grouped logistic regression:
// y edges out of w dyads per design row.
inline LogisticFit logistic_irls(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, const Eigen::VectorXd& y) {
  auto loglik = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = X * b;
    double s = 0.0;
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
      const double e = eta(r);
      const double log1pexp = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
      s += y(r) * e - w(r) * log1pexp;
    }
    return s;
  };
  auto information = [&](const Eigen::VectorXd& b, Eigen::VectorXd* grad) {
    const Eigen::VectorXd eta = X * b;
    Eigen::VectorXd mu(eta.size()), v(eta.size());
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
      const double pr = logistic(eta(r));
      mu(r) = w(r) * pr;
      v(r) = w(r) * pr * (1.0 - pr);
    }
    if (grad) *grad = X.transpose() * (y - mu);
    return Eigen::MatrixXd(X.transpose() * v.asDiagonal() * X);
  };

  LogisticFit fit;
  fit.beta = Eigen::VectorXd::Zero(X.cols());
  double ll = loglik(fit.beta);
  const int max_iter = 100;
  for (; fit.iterations < max_iter;) {
    Eigen::VectorXd grad;
    const Eigen::MatrixXd info = information(fit.beta, &grad);
    const Eigen::VectorXd step = info.ldlt().solve(grad);
    double t = 1.0, next = loglik(fit.beta + step);
    while (!(next >= ll - 1e-12 * std::abs(ll)) && t > 1e-8) {
      t *= 0.5;
      next = loglik(fit.beta + t * step);
    }
    fit.beta += t * step;
    ++fit.iterations;
    const double change = next - ll;
    ll = next;
    if ((t * step).cwiseAbs().maxCoeff() < 1e-10 || std::abs(change) < 1e-13 * std::max(1.0, std::abs(ll))) {
      fit.converged = true;
      break;
    }
  }
  fit.information = information(fit.beta, nullptr);
  fit.loglik = ll;
  return fit;
}

// Columns whose change statistic does not depend on the rest of the graph:
// edges, graphlet 0 and orbit 0 of the attribute terms.
inline std::vector<Eigen::Index> dyad_independent_columns(const Model& model) {
  std::vector<Eigen::Index> out;
  for (const auto& t : model.terms()) {
    const auto& s = t.spec;
    auto at = [&](std::size_t k) { out.push_back(static_cast<Eigen::Index>(t.offset + k)); };
    switch (s.family) {
      case Family::edges: at(0); break;
      case Family::graphlet_count:
        for (std::size_t k = 0; k < s.graphlets.size(); ++k)
          if (s.graphlets[k] == 0) at(k);
        break;
      case Family::orbit_cov:
        for (std::size_t k = 0; k < s.orbits.size(); ++k)
          if (s.orbits[k] == 0) at(k);
        break;
      case Family::orbit_factor:
        for (std::size_t k = 0; k < s.orbits.size(); ++k)
          if (s.orbits[k] == 0)
            for (int c = 0; c < t.columns; ++c) at(k * static_cast<std::size_t>(t.columns) + static_cast<std::size_t>(c));
        break;
      case Family::orbit_dist: break;
    }
  }
  return out;
}

}  // namespace detail

/// Maximum pseudo-likelihood by Newton iterations (IRLS) on the dyad design.
inline FittedModel mple(const Graph& g, const Model& model) {
  const DyadDesign design = dyad_design(g, model);
  const std::size_t p = model.size();
  const Eigen::MatrixXd X = detail::rows_to_matrix(design.rows, p);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(design.weight.data(), design.weight.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(design.edges.data(), design.edges.size());

  FittedModel fit;
  fit.method = "mple";
  fit.dyads = design.dyads;
  fit.convergence = Convergence::max_iter;

  // Collinearity: rank of the weighted design.
  Eigen::MatrixXd Xw = w.cwiseSqrt().asDiagonal() * X;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < p) {
    std::string names;
    for (Eigen::Index k = qr.rank(); k < static_cast<Eigen::Index>(p); ++k)
      names += (names.empty() ? "" : ", ") + model.names()[static_cast<std::size_t>(qr.colsPermutation().indices()(k))];
    throw RankError("singular information matrix: statistic(s) " + names +
                    " are constant or collinear with the others across dyads");
  }

  const double edges_total = y.sum(), w_total = w.sum();
  detail::LogisticFit lf;
  if (edges_total == 0.0 || edges_total == w_total) {
    fit.convergence = Convergence::failed;
    fit.diagnostic = std::string("perfect separation: every dyad is ") + (edges_total == 0.0 ? "empty" : "an edge");
    lf.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    lf.information = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  } else {
    lf = detail::logistic_irls(X, w, y);
    fit.iterations = lf.iterations;
    if ((X * lf.beta).cwiseAbs().maxCoeff() > 35.0) {
      fit.convergence = Convergence::failed;
      fit.diagnostic = "perfect or quasi-complete separation: fitted probabilities reach 0 or 1";
    } else {
      fit.convergence = lf.converged ? Convergence::converged : Convergence::max_iter;
    }
  }
  fit.model = model.with_theta(detail::to_vector(lf.beta));
  fit.std_errors = detail::standard_errors(lf.information);
  fit.loglik = lf.loglik;
  set_information_criteria(fit);
  return fit;
}

/// Coefficients of the dyad-independent statistics fitted by MPLE (their
/// exact MLE with the rest held at zero); the remaining coefficients are 0.
/// Empty when there are no such statistics or the fit separates.
inline std::optional<std::vector<double>> dyad_independent_start(const Graph& g, const Model& model) {
  const auto cols = detail::dyad_independent_columns(model);
  if (cols.empty()) return std::nullopt;
  const DyadDesign design = dyad_design(g, model);
  const Eigen::MatrixXd full = detail::rows_to_matrix(design.rows, model.size());
  Eigen::MatrixXd X(full.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) X.col(static_cast<Eigen::Index>(k)) = full.col(cols[k]);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(design.weight.data(), design.weight.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(design.edges.data(), design.edges.size());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w.cwiseSqrt().asDiagonal() * X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols() || y.sum() == 0.0 || y.sum() == w.sum()) return std::nullopt;
  const auto lf = detail::logistic_irls(X, w, y);
  if (!lf.converged || (X * lf.beta).cwiseAbs().maxCoeff() > 35.0) return std::nullopt;
  std::vector<double> theta(model.size(), 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) theta[static_cast<std::size_t>(cols[k])] = lf.beta(static_cast<Eigen::Index>(k));
  return theta;
}

struct MleConfig {
  SamplerConfig sampler;  // sample_size is the first iteration's size
  int max_iter = 20;
  double tolerance = 1e-4;
  double growth = 1.5;
  std::uint64_t max_sample_size = 20000;
  double min_ess_fraction = 0.1;
  bool estimate_loglik = true;
  int bridges = 16;
  std::uint64_t bridge_sample_size = 0;  // 0: same as sampler.sample_size
  std::optional<std::vector<double>> theta0;
  std::function<void(const std::string&)> log;
};

namespace detail {

// Importance-sampled log-likelihood ratio r(d) = -log mean_s exp(d . z_s)
// around the sampling parameter, where z_s = t_s - t_obs.
struct GeyerThompson {
  const Eigen::MatrixXd& z;

  double value(const Eigen::VectorXd& d, Eigen::VectorXd* weights = nullptr) const {
    const Eigen::VectorXd a = z * d;
    const double amax = a.maxCoeff();
    const Eigen::VectorXd e = (a.array() - amax).exp().matrix();
    const double s = e.sum();
    if (weights) *weights = e / s;
    return -(amax + std::log(s / static_cast<double>(z.rows())));
  }

  static double ess(const Eigen::VectorXd& w) { return 1.0 / w.squaredNorm(); }

  Eigen::MatrixXd covariance(const Eigen::VectorXd& w, Eigen::VectorXd* mean = nullptr) const {
    const Eigen::VectorXd m = z.transpose() * w;
    const Eigen::MatrixXd c = z.transpose() * w.asDiagonal() * z - m * m.transpose();
    if (mean) *mean = m;
    return c;
  }
};

}  // namespace detail

/// Path-sampling estimate of log P_theta(y_obs):
/// -D log 2 + integral over s in [0, 1] of theta . (t_obs - E_{s theta}[t]),
/// by the midpoint rule over `bridges` intervals.
inline double estimate_loglik(const Graph& g, const Model& model, const std::vector<double>& theta,
                              SamplerConfig cfg, int bridges) {
  const auto obs = model.observed_statistics(g);
  double integral = 0.0;
  for (int b = 0; b < bridges; ++b) {
    const double s = (b + 0.5) / bridges;
    std::vector<double> th(theta);
    for (double& x : th) x *= s;
    cfg.seed = splitmix64(cfg.seed + 0xB5AD4ECEDA1CE2A9ull * static_cast<std::uint64_t>(b + 1));
    const auto sim = simulate(g, model.with_theta(th), cfg);
    std::vector<double> mean(obs.size(), 0.0);
    for (const auto& row : sim.statistics)
      for (std::size_t k = 0; k < row.size(); ++k) mean[k] += row[k] / static_cast<double>(sim.statistics.size());
    double term = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) term += theta[k] * (obs[k] - mean[k]);
    integral += term / bridges;
  }
  return -static_cast<double>(g.dyad_count()) * std::log(2.0) + integral;
}

namespace detail {

struct GtStep {
  Eigen::VectorXd d;
  double gain = 0.0;
  bool truncated = false;
  Eigen::MatrixXd information;
};

// Damped Newton ascent of the Geyer-Thompson ratio; steps that push the
// importance-sample ESS below the floor are halved.
inline GtStep geyer_thompson_step(const Eigen::MatrixXd& z, double ess_floor) {
  GeyerThompson gt{z};
  GtStep out;
  out.d = Eigen::VectorXd::Zero(z.cols());
  Eigen::VectorXd w;
  double r = gt.value(out.d, &w);
  const double r0 = r;
  for (int inner = 0; inner < 100; ++inner) {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov = gt.covariance(w, &mean);
    cov.diagonal().array() += 1e-8 * std::max(1.0, cov.diagonal().maxCoeff());
    const Eigen::VectorXd step = -cov.ldlt().solve(mean);
    double t = 1.0;
    Eigen::VectorXd wn;
    double rn = gt.value(out.d + step, &wn);
    while ((rn < r || GeyerThompson::ess(wn) < ess_floor) && t > 1e-6) {
      if (GeyerThompson::ess(wn) < ess_floor) out.truncated = true;
      t *= 0.5;
      rn = gt.value(out.d + t * step, &wn);
    }
    if (rn < r || GeyerThompson::ess(wn) < ess_floor) break;
    out.d += t * step;
    const double gain = rn - r;
    r = rn;
    w = wn;
    if ((t * step).cwiseAbs().maxCoeff() < 1e-10 || gain < 1e-12) break;
  }
  out.gain = r - r0;
  out.information = gt.covariance(w);
  return out;
}

inline Eigen::MatrixXd centred(const std::vector<std::vector<double>>& rows, const std::vector<double>& obs) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(obs.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < obs.size(); ++c)
      z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c] - obs[c];
  return z;
}

// Whether every observed statistic lies within the simulated range.
inline bool covers(const Eigen::MatrixXd& z) {
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    if (z.col(c).minCoeff() > 0.0 || z.col(c).maxCoeff() < 0.0) return false;
  return true;
}

inline void require_variation(const Eigen::MatrixXd& z, const Model& model) {
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    if (z.col(c).maxCoeff() == z.col(c).minCoeff())
      throw DegeneracyError("simulated statistic '" + model.names()[static_cast<std::size_t>(c)] +
                            "' is constant; the model is likely degenerate, consider removing or replacing the term");
}

}  // namespace detail

/// Monte Carlo maximum likelihood (Geyer-Thompson), starting from MPLE unless
/// `cfg.theta0` is set. When the first sample at the MPLE misses the observed
/// statistics the fit restarts from dyad_independent_start(); a later sample
/// that misses them halves the last step.
inline FittedModel mcmc_mle(const Graph& g, const Model& model, MleConfig cfg) {
  const std::size_t p = model.size();
  auto say = [&](const std::string& s) {
    if (cfg.log) cfg.log(s);
  };
  std::vector<double> theta;
  bool from_mple = false;
  if (cfg.theta0) {
    if (cfg.theta0->size() != p) throw ShapeError("initial theta has the wrong length");
    theta = *cfg.theta0;
  } else {
    FittedModel start = mple(g, model);
    if (start.convergence == Convergence::failed)
      throw DegeneracyError("MPLE starting point failed (" + start.diagnostic + ")");
    theta = start.theta();
    from_mple = true;
  }
  const auto obs = model.observed_statistics(g);

  FittedModel fit;
  fit.method = "mcmcmle";
  fit.dyads = g.dyad_count();
  fit.seed = cfg.sampler.seed;
  fit.convergence = Convergence::max_iter;
  std::uint64_t sample_size = std::max<std::uint64_t>(cfg.sampler.sample_size, 2 * p + 2);
  Eigen::MatrixXd information;
  std::optional<std::vector<double>> previous;
  int retreats = 0;

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    SamplerConfig sc = cfg.sampler;
    sc.sample_size = sample_size;
    sc.seed = chain_seed(cfg.sampler.seed, static_cast<unsigned>(iter + 100 * retreats) * 7919u);
    const auto sim = simulate(g, model.with_theta(theta), sc);
    const Eigen::MatrixXd z = detail::centred(sim.statistics, obs);
    if (!detail::covers(z)) {
      if (from_mple && !previous) {
        from_mple = false;
        if (auto start = dyad_independent_start(g, model)) {
          say("The sample at the MPLE misses the observed statistics; restarting from the dyad-independent fit");
          theta = *start;
          --iter;
          continue;
        }
      }
      if (previous && retreats < 10) {
        ++retreats;
        say("The sample misses the observed statistics; halving the last step");
        for (std::size_t k = 0; k < p; ++k) theta[k] = 0.5 * (theta[k] + (*previous)[k]);
        --iter;
        continue;
      }
    }
    detail::require_variation(z, model);

    const double ess_floor = std::max(static_cast<double>(p) * 5.0, cfg.min_ess_fraction * static_cast<double>(z.rows()));
    const auto step = detail::geyer_thompson_step(z, ess_floor);
    information = step.information;
    previous = theta;
    from_mple = false;
    for (std::size_t k = 0; k < p; ++k) theta[k] += step.d(static_cast<Eigen::Index>(k));
    const double r = step.gain;
    const bool truncated = step.truncated;
    fit.loglik_improvements.push_back(r);
    fit.iterations = iter;
    std::ostringstream msg;
    msg << "Iteration " << iter << " of at most " << cfg.max_iter << ": sample size " << z.rows()
        << ", the log-likelihood improved by " << r << (truncated ? " (step truncated)" : "");
    say(msg.str());
    if (!truncated && r < cfg.tolerance) {
      fit.convergence = Convergence::converged;
      break;
    }
    const auto grown = static_cast<std::uint64_t>(std::ceil(static_cast<double>(sample_size) * cfg.growth));
    sample_size = std::min(std::max(grown, sample_size), std::max(cfg.max_sample_size, sample_size));
  }
  fit.model = model.with_theta(theta);
  fit.std_errors = detail::standard_errors(information);
  if (cfg.estimate_loglik) {
    SamplerConfig bc = cfg.sampler;
    bc.sample_size = cfg.bridge_sample_size ? cfg.bridge_sample_size : cfg.sampler.sample_size;
    fit.loglik = estimate_loglik(g, model, theta, bc, cfg.bridges);
  }
  set_information_criteria(fit);
  return fit;
}

/// Two-sided normal p-value.
inline double normal_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

namespace detail {

inline std::string sig6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string stars(double p) {
  return p < 0.001 ? "***" : p < 0.01 ? "**" : p < 0.05 ? "*" : p < 0.1 ? "." : "";
}

}  // namespace detail

/// Human-readable coefficient table with deviance block.
inline std::string summarize_fit(const FittedModel& f) {
  std::ostringstream out;
  const auto& names = f.model.names();
  std::size_t width = 10;
  for (const auto& n : names) width = std::max(width, n.size());
  auto pad = [](const std::string& s, std::size_t w, bool left) {
    return left ? s + std::string(w > s.size() ? w - s.size() : 0, ' ')
                : std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  out << (f.method == "mple" ? "Maximum Pseudolikelihood Results:" : "Monte Carlo MLE Results:") << "\n";
  out << pad("", width, true) << pad("Estimate", 12, false) << pad("Std. Error", 12, false) << pad("z value", 12, false)
      << pad("Pr(>|z|)", 12, false) << "\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    const double est = f.theta()[k], se = f.std_errors[k];
    const double z = se > 0 ? est / se : NAN;
    const double pv = se > 0 ? normal_p_value(z) : NAN;
    out << pad(names[k], width, true) << pad(detail::sig6(est), 12, false) << pad(detail::sig6(se), 12, false)
        << pad(detail::sig6(z), 12, false) << pad(detail::sig6(pv), 12, false) << " " << detail::stars(pv) << "\n";
  }
  out << "---\nSignif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1\n\n";
  const double p = static_cast<double>(names.size()), D = static_cast<double>(f.dyads);
  out << "     Null Deviance: " << detail::sig6(f.null_deviance) << "  on " << f.dyads << "  degrees of freedom\n";
  if (f.residual_deviance) {
    out << " Residual Deviance: " << detail::sig6(*f.residual_deviance) << "  on " << detail::sig6(D - p)
        << "  degrees of freedom\n\n";
    out << "AIC: " << detail::sig6(*f.aic) << "    BIC: " << detail::sig6(*f.bic) << "    (Smaller is better.)\n";
  } else {
    out << " Residual Deviance: not estimated\n";
  }
  out << "\nIterations: " << f.iterations << "  convergence: " << convergence_name(f.convergence);
  if (!f.diagnostic.empty()) out << " (" << f.diagnostic << ")";
  out << "\n";
  return out.str();
}

/// Coefficient table as CSV at full precision.
inline std::string fit_table_csv(const FittedModel& f) {
  std::ostringstream out;
  out << "statistic,estimate,std_error,z,p_value\n";
  for (std::size_t k = 0; k < f.model.size(); ++k) {
    const double est = f.theta()[k], se = f.std_errors[k];
    const double z = se > 0 ? est / se : NAN;
    out << f.model.names()[k] << ',' << detail::full(est) << ',' << detail::full(se) << ',' << detail::full(z) << ','
        << detail::full(se > 0 ? normal_p_value(z) : NAN) << '\n';
  }
  return out.str();
}

}  // namespace gergm

#endif  // GERGM_INFERENCE_HPP
