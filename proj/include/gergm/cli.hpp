#ifndef GERGM_CLI_HPP
#define GERGM_CLI_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gergm/attributes.hpp"
#include "gergm/catalog.hpp"
#include "gergm/error.hpp"
#include "gergm/gof.hpp"
#include "gergm/graph.hpp"
#include "gergm/inference.hpp"
#include "gergm/model.hpp"
#include "gergm/sampler.hpp"
#include "gergm/terms.hpp"

namespace gergm {

inline constexpr const char* kCliFooter = R"(Terms (joined with '+'):
  edges
  graphletCount(g=0,2,8)                      graphlet ids 0..29, ranges as a:b
  grorbitCov(attr=score, orbits=9:11)         numeric attribute x orbit degree
  grorbitFactor(attr=loc, orbits=9:11, base=1) one statistic per orbit and kept
                                              category; base=0 keeps all
  grorbitDist(orbits=0:14, d=0:10)            nodes with orbit degree exactly d
  Arguments may also be positional, in the order shown.

Files:
  edge list    two node identifiers per line, '#' comments,
               optional '%nodes a b c' line declaring nodes and isolates
  attributes   CSV, header row, first column 'node'; columns named with
               --numeric are real valued, the rest categorical
  model        JSON {"terms": [...], "theta": [...]}, terms as strings or
               objects such as {"term": "grorbitCov", "attr": "x", "orbits": [0]}

Exit status: 0 ok, 1 usage, 2 data error, 3 numerical failure.)";

namespace detail {

inline std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (auto t = trim(item); !t.empty()) out.insert(t);
  return out;
}

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::data: return "data";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::internal: return "internal";
  }
  return "?";
}

inline std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

struct NetworkInput {
  std::string network, attrs, numeric;

  void add_to(CLI::App* app, bool network_required) {
    auto* opt = app->add_option("--network", network, "edge list file");
    if (network_required) opt->required();
    app->add_option("--attrs", attrs, "node attribute CSV");
    app->add_option("--numeric", numeric, "comma-separated numeric attribute columns");
  }

  AttributeSet load_attrs(const Graph& g) const {
    if (attrs.empty()) return {};
    return load_attributes(attrs, g, split_list(numeric));
  }
};

struct ModelInput {
  std::string terms, model;

  void add_to(CLI::App* app) {
    auto* t = app->add_option("--terms", terms, "model formula, e.g. \"edges + graphletCount(2)\"");
    auto* m = app->add_option("--model", model, "model JSON file");
    t->excludes(m);
  }

  Model build(const AttributeSet& attrs, std::size_t n) const {
    if (!model.empty()) return Model::from_json(load_json_file(model), attrs, n);
    if (terms.empty()) throw ValueError("one of --terms or --model is required");
    return Model(parse_terms(terms), attrs, n);
  }
};

struct SamplerInput {
  std::uint64_t burnin = 10000, interval = 100;
  unsigned chains = 1;
  double tie_prob = 0.0;
  std::uint64_t check_every = 0;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* app) {
    app->add_option("--burnin", burnin, "proposals discarded before sampling")->capture_default_str();
    app->add_option("--interval", interval, "proposals between retained samples")->capture_default_str();
    app->add_option("--chains", chains, "parallel chains")->capture_default_str();
    app->add_option("--tie-prob", tie_prob, "probability of proposing an existing edge")->capture_default_str();
    app->add_option("--check-every", check_every, "recount every K accepted toggles (0 = off)");
    app->add_option("--seed", seed, "master random seed (printed when defaulted)");
  }

  SamplerConfig config(std::uint64_t sample_size, std::ostream& err) {
    if (!seed) seed = std::random_device{}() * 0x100000001ull ^ std::random_device{}();
    err << "seed: " << *seed << '\n';
    SamplerConfig cfg;
    cfg.burnin = burnin;
    cfg.interval = interval;
    cfg.sample_size = sample_size;
    cfg.seed = *seed;
    cfg.chains = chains;
    cfg.tie_probability = tie_prob;
    cfg.debug_check_every = check_every;
    return cfg;
  }
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

/// Command-line entry point. Returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graphlet-based exponential random graph models", "gergm"};
  app.footer(kCliFooter);
  app.require_subcommand(1);

  // summary
  detail::NetworkInput sum_net;
  detail::ModelInput sum_model;
  auto* summary = app.add_subcommand("summary", "print model statistics of a network as name,value rows");
  sum_net.add_to(summary, true);
  sum_model.add_to(summary);

  // simulate
  detail::NetworkInput sim_net;
  detail::SamplerInput sim_cfg;
  std::string sim_model, sim_init;
  std::size_t sim_nodes = 0;
  std::uint64_t sim_n = 100;
  bool stats_only = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "draw networks from a model with coefficients");
  simulate_cmd->add_option("--model", sim_model, "model JSON with theta")->required();
  auto* init_opt = simulate_cmd->add_option("--init", sim_init, "starting network (edge list)");
  simulate_cmd->add_option("--nodes", sim_nodes, "start from an empty network on this many nodes")->excludes(init_opt);
  simulate_cmd->add_option("--attrs", sim_net.attrs, "node attribute CSV");
  simulate_cmd->add_option("--numeric", sim_net.numeric, "comma-separated numeric attribute columns");
  simulate_cmd->add_option("--nsim", sim_n, "number of retained networks")->capture_default_str();
  simulate_cmd->add_flag("--stats-only", stats_only, "print statistics as CSV instead of edge lists");
  sim_cfg.add_to(simulate_cmd);

  // fit
  detail::NetworkInput fit_net;
  detail::ModelInput fit_model;
  detail::SamplerInput fit_cfg;
  std::string method = "mple", fit_out, fit_csv;
  std::uint64_t fit_samples = 1000;
  int max_iter = 20;
  bool no_loglik = false;
  auto* fit = app.add_subcommand("fit", "estimate coefficients");
  fit_net.add_to(fit, true);
  fit_model.add_to(fit);
  fit->add_option("--method", method, "mple or mcmcmle")->check(CLI::IsMember({"mple", "mcmcmle"}))->capture_default_str();
  fit->add_option("--out", fit_out, "write the fitted model JSON here");
  fit->add_option("--csv", fit_csv, "write the coefficient table as CSV here");
  fit->add_option("--sample-size", fit_samples, "first MCMC-MLE sample size")->capture_default_str();
  fit->add_option("--max-iter", max_iter, "MCMC-MLE iterations")->capture_default_str();
  fit->add_flag("--no-loglik", no_loglik, "skip the log-likelihood estimate");
  fit_cfg.add_to(fit);

  // gof
  detail::NetworkInput gof_net;
  detail::SamplerInput gof_cfg;
  std::string fit_path, families = "degree,distance,esp,triadcensus", gof_csv_path, holdout;
  std::uint64_t gof_n = 100;
  auto* gof_cmd = app.add_subcommand("gof", "simulation-based goodness of fit of a fitted model");
  gof_cmd->add_option("--fit", fit_path, "fitted model JSON")->required();
  gof_net.add_to(gof_cmd, true);
  gof_cmd->add_option("--nsim", gof_n, "simulated networks")->capture_default_str();
  gof_cmd->add_option("--families", families, "degree,distance,esp,triadcensus,graphlets")->capture_default_str();
  gof_cmd->add_option("--csv", gof_csv_path, "write the report as CSV here");
  gof_cmd->add_option("--holdout", holdout, "term to test by its quantile under the fit");
  gof_cfg.add_to(gof_cmd);

  // catalog
  bool dump_table = false;
  auto* catalog = app.add_subcommand("catalog", "inspect the graphlet catalog");
  catalog->add_flag("--dump-table1", dump_table, "print the derived graphlet / edge orbit sign table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  auto fail = [&](ErrorKind kind, const std::string& msg) {
    err << "gergm: error[" << detail::kind_name(kind) << "]: " << detail::one_line(msg) << '\n';
    return kind == ErrorKind::data ? 2 : 3;
  };

  try {
    if (*summary) {
      const Graph g = load_edge_list(sum_net.network);
      const AttributeSet attrs = sum_net.load_attrs(g);
      const Model m = sum_model.build(attrs, g.node_count());
      const auto stats = m.observed_statistics(g);
      for (std::size_t k = 0; k < stats.size(); ++k) out << m.names()[k] << ',' << detail::format_full(stats[k]) << '\n';
      return 0;
    }

    if (*simulate_cmd) {
      Graph g0 = !sim_init.empty() ? load_edge_list(sim_init) : Graph(sim_nodes);
      if (sim_init.empty() && sim_nodes == 0) throw ValueError("one of --init or --nodes is required");
      const AttributeSet attrs = sim_net.load_attrs(g0);
      const Model m = Model::from_json(load_json_file(sim_model), attrs, g0.node_count());
      const auto cfg = sim_cfg.config(sim_n, err);
      const auto result = simulate(g0, m, cfg, !stats_only);
      if (stats_only) {
        for (std::size_t k = 0; k < m.size(); ++k) out << (k ? "," : "") << m.names()[k];
        out << '\n';
        for (const auto& row : result.statistics) {
          for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << detail::format_full(row[k]);
          out << '\n';
        }
      } else {
        for (std::size_t s = 0; s < result.graphs.size(); ++s) {
          out << "# sample " << s + 1 << '\n';
          write_edge_list(out, result.graphs[s]);
        }
      }
      err << "acceptance rate: " << result.acceptance_rate() << '\n';
      return 0;
    }

    if (*fit) {
      const Graph g = load_edge_list(fit_net.network);
      const AttributeSet attrs = fit_net.load_attrs(g);
      const Model m = fit_model.build(attrs, g.node_count());
      FittedModel f;
      if (method == "mple") {
        fit_cfg.config(0, err);
        f = mple(g, m);
        f.seed = *fit_cfg.seed;
      } else {
        MleConfig mc;
        mc.sampler = fit_cfg.config(fit_samples, err);
        mc.max_iter = max_iter;
        mc.estimate_loglik = !no_loglik;
        mc.log = [&](const std::string& line) { err << line << '\n'; };
        f = mcmc_mle(g, m, mc);
      }
      out << summarize_fit(f);
      if (!fit_out.empty()) detail::write_text(fit_out, f.to_json().dump(2) + "\n");
      if (!fit_csv.empty()) detail::write_text(fit_csv, fit_table_csv(f));
      if (f.convergence == Convergence::failed)
        return fail(ErrorKind::numerical, "fit failed: " + f.diagnostic);
      if (f.convergence == Convergence::max_iter)
        return fail(ErrorKind::numerical, "fit did not converge within " + std::to_string(f.iterations) + " iterations");
      return 0;
    }

    if (*gof_cmd) {
      const Graph g = load_edge_list(gof_net.network);
      const AttributeSet attrs = gof_net.load_attrs(g);
      const FittedModel f = FittedModel::from_json(load_json_file(fit_path), attrs, g.node_count());
      GofConfig gc;
      gc.sampler = gof_cfg.config(gof_n, err);
      gc.families.clear();
      for (const auto& name : detail::split_list(families)) gc.families.push_back(parse_gof_family(name));
      std::sort(gc.families.begin(), gc.families.end());
      const GofReport report = gof(f, g, gc);
      out << gof_text(report);
      if (!gof_csv_path.empty()) detail::write_text(gof_csv_path, gof_csv(report));
      if (!holdout.empty()) {
        out << "\nQuantile test of held-out statistics\n";
        out << "statistic,observed,quantile,p_value\n";
        for (const auto& r : quantile_test(g, f, parse_term(holdout), attrs, gc.sampler))
          out << r.name << ',' << detail::format_full(r.observed) << ',' << detail::format_full(r.quantile) << ','
              << detail::format_full(r.p_value) << '\n';
      }
      return 0;
    }

    if (*catalog) {
      const Catalog& cat = Catalog::instance();
      if (dump_table) {
        write_sign_table(out, cat.sign_table());
        return 0;
      }
      out << "graphlet,size,orbits,edge_orbits\n";
      for (int g = 0; g < kGraphlets; ++g) {
        auto ids = [](std::span<const int> xs, const char* prefix) {
          std::string s;
          for (int x : xs) s += (s.empty() ? "" : " ") + std::string(prefix) + std::to_string(x);
          return s;
        };
        out << 'G' << g << ',' << cat.graphlet_size(g) << ',' << ids(cat.orbits_of(g), "") << ','
            << ids(cat.edge_orbits_of(g), "E") << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ErrorKind::data, std::string("malformed JSON content: ") + e.what());
  } catch (const std::exception& e) {
    return fail(ErrorKind::internal, e.what());
  }
  return 1;
}

}  // namespace gergm

#endif  // GERGM_CLI_HPP
