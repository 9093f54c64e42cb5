#ifndef GERGM_TERMS_HPP
#define GERGM_TERMS_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gergm/attributes.hpp"
#include "gergm/catalog.hpp"
#include "gergm/census.hpp"
#include "gergm/error.hpp"
#include "gergm/graph.hpp"

namespace gergm {

enum class Family { edges, graphlet_count, orbit_cov, orbit_factor, orbit_dist };

inline constexpr int kDistOrbits = 15;  // grorbitDist is limited to orbits 0..14

inline const char* family_name(Family f) {
  switch (f) {
    case Family::edges: return "edges";
    case Family::graphlet_count: return "graphletCount";
    case Family::orbit_cov: return "grorbitCov";
    case Family::orbit_factor: return "grorbitFactor";
    case Family::orbit_dist: return "grorbitDist";
  }
  return "?";
}

/// Declarative description of one model term.
///
/// Empty id lists mean "use the default": all graphlets, all orbits, or
/// orbits 0..14 for grorbitDist. `base` lists 1-based positions of categories
/// (in sorted order) to omit; `{0}` keeps every category.
struct TermSpec {
  Family family = Family::edges;
  std::vector<int> graphlets;
  std::vector<int> orbits;
  std::string attr;
  std::vector<int> base{1};
  std::vector<int> degrees;

  friend bool operator==(const TermSpec&, const TermSpec&) = default;
};

namespace detail {

inline std::string format_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t k = 0; k < ids.size();) {
    std::size_t run = k;
    while (run + 1 < ids.size() && ids[run + 1] == ids[run] + 1) ++run;
    if (!out.empty()) out += ',';
    out += std::to_string(ids[k]);
    if (run - k >= 2) {
      out += ':' + std::to_string(ids[run]);
      k = run + 1;
    } else {
      ++k;
    }
  }
  return out;
}

inline std::vector<int> keep_in_range(const std::vector<int>& ids, int lo, int hi, const char* what, Family f) {
  std::vector<int> out;
  for (int id : ids) {
    if (id >= lo && id <= hi)
      out.push_back(id);
    else
      warn(std::string(family_name(f)) + ": " + what + " " + std::to_string(id) + " outside [" + std::to_string(lo) +
           ", " + std::to_string(hi) + "] ignored");
  }
  return out;
}

}  // namespace detail

/// Fills defaults and drops out-of-range ids (with a warning).
inline TermSpec normalize(TermSpec t) {
  auto all = [](int n) {
    std::vector<int> v(n);
    for (int k = 0; k < n; ++k) v[k] = k;
    return v;
  };
  const char* fam = family_name(t.family);
  switch (t.family) {
    case Family::edges:
      t.graphlets.clear();
      t.orbits.clear();
      t.degrees.clear();
      break;
    case Family::graphlet_count:
      t.graphlets = t.graphlets.empty() ? all(kGraphlets)
                                        : detail::keep_in_range(t.graphlets, 0, kGraphlets - 1, "graphlet", t.family);
      if (t.graphlets.empty()) throw ValueError(std::string(fam) + ": no valid graphlet ids");
      break;
    case Family::orbit_cov:
    case Family::orbit_factor:
      if (t.attr.empty()) throw ValueError(std::string(fam) + ": attribute name required");
      t.orbits = t.orbits.empty() ? all(kOrbits) : detail::keep_in_range(t.orbits, 0, kOrbits - 1, "orbit", t.family);
      if (t.orbits.empty()) throw ValueError(std::string(fam) + ": no valid orbit ids");
      if (t.family == Family::orbit_factor && t.base.empty()) t.base = {1};
      break;
    case Family::orbit_dist:
      t.orbits = t.orbits.empty() ? all(kDistOrbits)
                                  : detail::keep_in_range(t.orbits, 0, kDistOrbits - 1, "orbit", t.family);
      if (t.orbits.empty()) throw ValueError(std::string(fam) + ": no valid orbit ids");
      if (t.degrees.empty()) throw ValueError(std::string(fam) + ": degree list d is required");
      for (int d : t.degrees)
        if (d < 0) throw ValueError(std::string(fam) + ": degree " + std::to_string(d) + " is negative");
      break;
  }
  if (t.family != Family::orbit_factor) t.base = {1};
  if (t.family != Family::orbit_cov && t.family != Family::orbit_factor) t.attr.clear();
  return t;
}

/// Mini-language rendering, e.g. `grorbitFactor(attr=loc, orbits=9:11, base=1)`.
inline std::string to_string(const TermSpec& t) {
  std::string out = family_name(t.family);
  switch (t.family) {
    case Family::edges: return out;
    case Family::graphlet_count: return out + "(g=" + detail::format_ids(t.graphlets) + ")";
    case Family::orbit_cov: return out + "(attr=" + t.attr + ", orbits=" + detail::format_ids(t.orbits) + ")";
    case Family::orbit_factor:
      return out + "(attr=" + t.attr + ", orbits=" + detail::format_ids(t.orbits) + ", base=" +
             detail::format_ids(t.base) + ")";
    case Family::orbit_dist:
      return out + "(orbits=" + detail::format_ids(t.orbits) + ", d=" + detail::format_ids(t.degrees) + ")";
  }
  return out;
}

namespace detail {

inline Family parse_family(const std::string& name) {
  if (name == "edges") return Family::edges;
  if (name == "graphletCount") return Family::graphlet_count;
  if (name == "grorbitCov") return Family::orbit_cov;
  if (name == "grorbitFactor") return Family::orbit_factor;
  if (name == "grorbitDist") return Family::orbit_dist;
  throw ValueError("unknown term '" + name + "'");
}

inline int parse_int(std::string_view s, std::string_view context) {
  int x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ValueError("term '" + std::string(context) + "': '" + std::string(s) + "' is not an integer");
  return x;
}

// "a:b" expands to a..b inclusive (either direction).
inline void append_ids(std::vector<int>& out, const std::string& tok, std::string_view context) {
  if (auto colon = tok.find(':'); colon != std::string::npos) {
    const int a = parse_int(std::string_view(tok).substr(0, colon), context);
    const int b = parse_int(std::string_view(tok).substr(colon + 1), context);
    for (int x = a;; x += a <= b ? 1 : -1) {
      out.push_back(x);
      if (x == b) break;
    }
  } else {
    out.push_back(parse_int(tok, context));
  }
}

inline std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace detail

/// Parses one term such as `graphletCount(g=0,2,8)` or `grorbitCov(score, 9:11)`.
///
/// Arguments are comma separated. `key=value` selects a parameter; further bare
/// values extend that parameter's list. Bare values otherwise fill the
/// parameters in declaration order, and surplus values extend the last list.
inline TermSpec parse_term(std::string_view text) {
  const std::string src = detail::trim(std::string(text));
  const auto open = src.find('(');
  const std::string name = detail::trim(src.substr(0, open));
  TermSpec t;
  t.family = detail::parse_family(name);
  t.base.clear();
  if (open == std::string::npos) return normalize(t);
  if (src.back() != ')') throw ValueError("term '" + src + "': missing closing parenthesis");
  const std::string body = src.substr(open + 1, src.size() - open - 2);

  // Parameter order per family; the attribute name is the only scalar.
  std::vector<std::string> params;
  switch (t.family) {
    case Family::edges: break;
    case Family::graphlet_count: params = {"g"}; break;
    case Family::orbit_cov: params = {"attr", "orbits"}; break;
    case Family::orbit_factor: params = {"attr", "orbits", "base"}; break;
    case Family::orbit_dist: params = {"orbits", "d"}; break;
  }
  auto canonical = [&](std::string key) {
    if (key == "grorbit" || key == "orbit") key = "orbits";
    if (key == "attrname") key = "attr";
    if (std::find(params.begin(), params.end(), key) == params.end())
      throw ValueError("term '" + src + "': unknown argument '" + key + "'");
    return key;
  };
  auto list_for = [&](const std::string& key) -> std::vector<int>& {
    if (key == "g") return t.graphlets;
    if (key == "orbits") return t.orbits;
    if (key == "base") return t.base;
    return t.degrees;
  };

  std::size_t next_positional = 0;
  std::string current;
  bool keyed = false;
  if (!detail::trim(body).empty()) {
    for (const auto& raw : detail::split_csv(body, 1)) {
      std::string tok = raw;
      if (auto eq = tok.find('='); eq != std::string::npos) {
        current = canonical(detail::trim(tok.substr(0, eq)));
        keyed = true;
        tok = tok.substr(eq + 1);
        auto it = std::find(params.begin(), params.end(), current);
        next_positional = std::max(next_positional, static_cast<std::size_t>(it - params.begin()) + 1);
      } else if (!keyed || current == "attr") {
        if (params.empty()) throw ValueError("term '" + src + "' takes no arguments");
        current = params[std::min(next_positional, params.size() - 1)];
        if (next_positional < params.size()) ++next_positional;
        keyed = false;
      }
      tok = detail::unquote(tok);
      if (current == "attr") {
        if (!t.attr.empty()) throw ValueError("term '" + src + "': attribute given twice");
        t.attr = tok;
      } else {
        detail::append_ids(list_for(current), tok, src);
      }
    }
  }
  return normalize(t);
}

/// Splits a formula like `edges + graphletCount(2) + grorbitCov(x, 0)` on
/// top-level `+` signs.
inline std::vector<TermSpec> parse_terms(std::string_view formula) {
  std::vector<TermSpec> out;
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    if (!detail::trim(cur).empty()) out.push_back(parse_term(cur));
    cur.clear();
  };
  for (char c : formula) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '+' && depth == 0)
      flush();
    else
      cur += c;
  }
  flush();
  if (out.empty()) throw ValueError("empty term list");
  return out;
}

inline nlohmann::json to_json(const TermSpec& t) {
  nlohmann::json j{{"term", family_name(t.family)}};
  switch (t.family) {
    case Family::edges: break;
    case Family::graphlet_count: j["g"] = t.graphlets; break;
    case Family::orbit_cov:
      j["attr"] = t.attr;
      j["orbits"] = t.orbits;
      break;
    case Family::orbit_factor:
      j["attr"] = t.attr;
      j["orbits"] = t.orbits;
      j["base"] = t.base;
      break;
    case Family::orbit_dist:
      j["orbits"] = t.orbits;
      j["d"] = t.degrees;
      break;
  }
  return j;
}

/// Accepts either a term object or a mini-language string.
inline TermSpec term_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_term(j.get<std::string>());
  if (!j.is_object() || !j.contains("term")) throw ValueError("term entry must be a string or an object with 'term'");
  TermSpec t;
  t.family = detail::parse_family(j.at("term").get<std::string>());
  t.base.clear();
  auto ids = [&](const char* key, std::vector<int>& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_number_integer())
      dst = {v.get<int>()};
    else if (v.is_string())
      for (const auto& tok : detail::split_csv(v.get<std::string>(), 1)) detail::append_ids(dst, tok, key);
    else
      dst = v.get<std::vector<int>>();
  };
  ids("g", t.graphlets);
  ids("orbits", t.orbits);
  ids("grorbit", t.orbits);
  ids("base", t.base);
  ids("d", t.degrees);
  if (j.contains("attr")) t.attr = j.at("attr").get<std::string>();
  if (j.contains("attrname")) t.attr = j.at("attrname").get<std::string>();
  return normalize(t);
}

/// A term bound to concrete node attributes, with its slice of the model's
/// statistic vector.
struct ResolvedTerm {
  TermSpec spec;
  std::size_t offset = 0;
  std::vector<std::string> names;
  int order = 2;                       // largest graphlet order involved
  std::vector<double> values;          // grorbitCov: attribute per node
  std::vector<std::uint32_t> codes;    // grorbitFactor: category code per node
  std::vector<int> column_of_code;     // grorbitFactor: code -> kept column or -1
  int columns = 0;                     // grorbitFactor: number of kept categories
  std::vector<int> degree_slot;        // grorbitDist: d -> position or -1

  std::size_t size() const noexcept { return names.size(); }

  std::size_t factor_index(std::size_t orbit_pos, std::uint32_t code) const noexcept {
    const int col = column_of_code[code];
    return col < 0 ? SIZE_MAX : offset + orbit_pos * static_cast<std::size_t>(columns) + static_cast<std::size_t>(col);
  }
  std::size_t dist_index(std::size_t orbit_pos, std::int64_t d) const noexcept {
    if (d < 0 || d >= static_cast<std::int64_t>(degree_slot.size()) || degree_slot[d] < 0) return SIZE_MAX;
    return offset + orbit_pos * spec.degrees.size() + static_cast<std::size_t>(degree_slot[d]);
  }
};

inline ResolvedTerm resolve_term(const TermSpec& raw, const AttributeSet& attrs, std::size_t node_count) {
  const Catalog& cat = Catalog::instance();
  ResolvedTerm r;
  r.spec = normalize(raw);
  const TermSpec& t = r.spec;
  auto orbit_order = [&](int o) { return cat.graphlet_size(cat.orbit_owner(o)); };
  switch (t.family) {
    case Family::edges:
      r.names = {"edges"};
      break;
    case Family::graphlet_count:
      for (int g : t.graphlets) {
        r.names.push_back("graphlet." + std::to_string(g) + ".Count");
        r.order = std::max(r.order, cat.graphlet_size(g));
      }
      break;
    case Family::orbit_cov: {
      const auto& a = attrs.numeric(t.attr);
      if (a.values.size() != node_count)
        throw SizeError("attribute '" + t.attr + "' has " + std::to_string(a.values.size()) + " values for " +
                        std::to_string(node_count) + " nodes");
      r.values = a.values;
      for (int o : t.orbits) {
        r.names.push_back("grorbitCov.orb_" + std::to_string(o) + "." + t.attr);
        r.order = std::max(r.order, orbit_order(o));
      }
      break;
    }
    case Family::orbit_factor: {
      const auto& a = attrs.categorical(t.attr);
      if (a.codes.size() != node_count)
        throw SizeError("attribute '" + t.attr + "' has " + std::to_string(a.codes.size()) + " values for " +
                        std::to_string(node_count) + " nodes");
      r.codes = a.codes;
      const int ncat = static_cast<int>(a.categories.size());
      std::vector<bool> dropped(ncat, false);
      if (!(t.base.size() == 1 && t.base[0] == 0)) {
        for (int b : t.base) {
          if (b >= 1 && b <= ncat)
            dropped[b - 1] = true;
          else
            warn("grorbitFactor: base index " + std::to_string(b) + " outside [1, " + std::to_string(ncat) +
                 "] ignored");
        }
      }
      r.column_of_code.assign(ncat, -1);
      std::vector<std::string> kept;
      for (int c = 0; c < ncat; ++c)
        if (!dropped[c]) {
          r.column_of_code[c] = static_cast<int>(kept.size());
          kept.push_back(a.categories[c]);
        }
      if (kept.empty()) throw ValueError("grorbitFactor(" + t.attr + "): base omits every category");
      r.columns = static_cast<int>(kept.size());
      for (int o : t.orbits) {
        for (const auto& c : kept) r.names.push_back("grorbitFactor.orb_" + std::to_string(o) + ".attr_" + c);
        r.order = std::max(r.order, orbit_order(o));
      }
      break;
    }
    case Family::orbit_dist: {
      const int dmax = *std::max_element(t.degrees.begin(), t.degrees.end());
      r.degree_slot.assign(static_cast<std::size_t>(dmax) + 1, -1);
      for (std::size_t k = 0; k < t.degrees.size(); ++k) {
        if (r.degree_slot[t.degrees[k]] >= 0)
          throw ValueError("grorbitDist: degree " + std::to_string(t.degrees[k]) + " listed twice");
        r.degree_slot[t.degrees[k]] = static_cast<int>(k);
      }
      for (int o : t.orbits) {
        for (int d : t.degrees) r.names.push_back("grorbitDist.orb_" + std::to_string(o) + ".deg_" + std::to_string(d));
        r.order = std::max(r.order, orbit_order(o));
      }
      break;
    }
  }
  return r;
}

/// Writes the term's statistics, computed from a full census, into its slice
/// of `out` (indices offset .. offset + size()).
inline void term_statistics(const ResolvedTerm& r, const Census& c, std::span<double> out) {
  const auto& t = r.spec;
  const std::size_t n = c.gdv.node_count();
  for (std::size_t k = 0; k < r.size(); ++k) out[r.offset + k] = 0.0;
  switch (t.family) {
    case Family::edges:
      out[r.offset] = static_cast<double>(c.counts[0]);
      break;
    case Family::graphlet_count:
      for (std::size_t k = 0; k < t.graphlets.size(); ++k)
        out[r.offset + k] = static_cast<double>(c.counts[t.graphlets[k]]);
      break;
    case Family::orbit_cov:
      for (std::size_t k = 0; k < t.orbits.size(); ++k) {
        double s = 0.0;
        for (node_t v = 0; v < n; ++v) s += r.values[v] * static_cast<double>(c.gdv(v, t.orbits[k]));
        out[r.offset + k] = s;
      }
      break;
    case Family::orbit_factor:
      for (std::size_t k = 0; k < t.orbits.size(); ++k)
        for (node_t v = 0; v < n; ++v)
          if (auto idx = r.factor_index(k, r.codes[v]); idx != SIZE_MAX)
            out[idx] += static_cast<double>(c.gdv(v, t.orbits[k]));
      break;
    case Family::orbit_dist:
      for (std::size_t k = 0; k < t.orbits.size(); ++k)
        for (node_t v = 0; v < n; ++v)
          if (auto idx = r.dist_index(k, c.gdv(v, t.orbits[k])); idx != SIZE_MAX) out[idx] += 1.0;
      break;
  }
}

/// Exact value of one term on `g`, by full census.
inline std::vector<double> count_statistic(const Graph& g, const TermSpec& term, const AttributeSet& attrs = {}) {
  ResolvedTerm r = resolve_term(term, attrs, g.node_count());
  std::vector<double> out(r.size());
  term_statistics(r, full_census(g, r.order), out);
  return out;
}

}  // namespace gergm

#endif  // GERGM_TERMS_HPP
