#ifndef GERGM_ATTRIBUTES_HPP
#define GERGM_ATTRIBUTES_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gergm/error.hpp"
#include "gergm/graph.hpp"

namespace gergm {

struct NumericAttribute {
  std::string name;
  std::vector<double> values;  // one per node
};

/// Categorical node attribute; `categories` is sorted and duplicate-free and
/// `codes[v]` indexes into it.
struct CategoricalAttribute {
  std::string name;
  std::vector<std::string> categories;
  std::vector<std::uint32_t> codes;

  const std::string& value(node_t v) const { return categories[codes[v]]; }

  static CategoricalAttribute from_labels(std::string name, const std::vector<std::string>& labels) {
    CategoricalAttribute attr{std::move(name), {}, {}};
    std::set<std::string> distinct(labels.begin(), labels.end());
    attr.categories.assign(distinct.begin(), distinct.end());
    attr.codes.reserve(labels.size());
    for (const auto& l : labels) {
      auto it = std::lower_bound(attr.categories.begin(), attr.categories.end(), l);
      attr.codes.push_back(static_cast<std::uint32_t>(it - attr.categories.begin()));
    }
    return attr;
  }
};

class AttributeSet {
 public:
  void add(NumericAttribute attr) {
    check_name(attr.name);
    numeric_.emplace(attr.name, std::move(attr));
  }
  void add(CategoricalAttribute attr) {
    check_name(attr.name);
    categorical_.emplace(attr.name, std::move(attr));
  }

  bool has_numeric(const std::string& name) const { return numeric_.count(name) != 0; }
  bool has_categorical(const std::string& name) const { return categorical_.count(name) != 0; }

  const NumericAttribute& numeric(const std::string& name) const {
    auto it = numeric_.find(name);
    if (it == numeric_.end())
      throw NameError(has_categorical(name) ? "attribute '" + name + "' is categorical, a numeric one is required"
                                            : "unknown numeric attribute '" + name + "'");
    return it->second;
  }

  const CategoricalAttribute& categorical(const std::string& name) const {
    auto it = categorical_.find(name);
    if (it == categorical_.end())
      throw NameError(has_numeric(name) ? "attribute '" + name + "' is numeric, a categorical one is required"
                                        : "unknown categorical attribute '" + name + "'");
    return it->second;
  }

  const std::map<std::string, NumericAttribute>& numeric_attributes() const { return numeric_; }
  const std::map<std::string, CategoricalAttribute>& categorical_attributes() const { return categorical_; }
  bool empty() const { return numeric_.empty() && categorical_.empty(); }

 private:
  void check_name(const std::string& name) const {
    if (numeric_.count(name) || categorical_.count(name)) throw ValueError("duplicate attribute '" + name + "'");
  }

  std::map<std::string, NumericAttribute> numeric_;
  std::map<std::string, CategoricalAttribute> categorical_;
};

namespace detail {

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

/// Splits one CSV record; double quotes protect commas and `""` escapes a quote.
inline std::vector<std::string> split_csv(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(lineno, "unterminated quoted field");
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

inline double parse_finite(const std::string& cell, const std::string& column, const std::string& node) {
  double x = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto res = std::from_chars(first, last, x);
  if (cell.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(x))
    throw ValueError("column '" + column + "', node '" + node + "': '" + cell + "' is not a finite number");
  return x;
}

}  // namespace detail

/// Reads a comma-separated node attribute table.
///
/// The first row is a header whose first column is `node`; every graph node
/// must appear exactly once. Columns listed in `numeric_columns` are parsed as
/// finite reals, the rest become categorical.
inline AttributeSet read_attributes(std::istream& in, const Graph& g, const std::set<std::string>& numeric_columns,
                                    const std::string& source = "<stream>") {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    header = detail::split_csv(line, lineno);
  }
  if (header.empty()) throw ParseError(lineno, source + ": missing header row");
  if (header.front() != "node") throw ParseError(lineno, source + ": first header column must be 'node'");
  for (const auto& col : numeric_columns)
    if (std::find(header.begin() + 1, header.end(), col) == header.end())
      throw NameError(source + ": numeric column '" + col + "' not present in header");

  const std::size_t n = g.node_count(), cols = header.size() - 1;
  std::vector<std::vector<std::string>> cells(cols, std::vector<std::string>(n));
  std::vector<bool> seen(n, false);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto row = detail::split_csv(line, lineno);
    if (row.size() != header.size())
      throw ParseError(lineno, source + ": expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(row.size()));
    auto v = g.index_of(row[0]);
    if (!v) throw CoverageError(source + ": line " + std::to_string(lineno) + ": node '" + row[0] + "' is not in the graph");
    if (seen[*v]) throw CoverageError(source + ": node '" + row[0] + "' appears more than once");
    seen[*v] = true;
    for (std::size_t c = 0; c < cols; ++c) cells[c][*v] = row[c + 1];
  }
  for (node_t v = 0; v < n; ++v)
    if (!seen[v]) throw CoverageError(source + ": no attribute row for node '" + g.label(v) + "'");

  AttributeSet out;
  for (std::size_t c = 0; c < cols; ++c) {
    const std::string& name = header[c + 1];
    if (numeric_columns.count(name)) {
      NumericAttribute attr{name, std::vector<double>(n)};
      for (node_t v = 0; v < n; ++v) attr.values[v] = detail::parse_finite(cells[c][v], name, g.label(v));
      out.add(std::move(attr));
    } else {
      out.add(CategoricalAttribute::from_labels(name, cells[c]));
    }
  }
  return out;
}

inline AttributeSet load_attributes(const std::string& path, const Graph& g,
                                    const std::set<std::string>& numeric_columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open attribute table '" + path + "'");
  return read_attributes(in, g, numeric_columns, path);
}

}  // namespace gergm

#endif  // GERGM_ATTRIBUTES_HPP
