#include "lzeta/problem_io.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lzeta {

namespace {

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Entry {
  std::string value;
  int line = 0;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"function", {"f", "dimension"}},
      {"domain", {"constraint", "window_x", "window_y", "base"}},
      {"cutoff", {"kind", "eta", "c0", "c1", "multiplier", "partition_c0", "partition_c1"}},
      {"run", {"branch", "depth", "tol", "order", "max_subdivisions", "abs_floor", "max_terms"}},
  };
  return s;
}

// Section/key -> entries in file order. Only `constraint` may repeat.
using Table = std::map<std::string, std::vector<Entry>>;

Table tokenize(std::string_view text) {
  Table table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    size_t cut = raw.find_first_of("#;");
    std::string s = trim(std::string_view(raw).substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("unterminated section header '" + s + "'", line);
      section = lower(trim(std::string_view(s).substr(1, s.size() - 2)));
      if (!schema().count(section)) throw ParseError("unknown section [" + section + "]", line);
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value', got '" + s + "'", line);
    if (section.empty()) throw ParseError("key outside of any section", line);
    std::string key = lower(trim(std::string_view(s).substr(0, eq)));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!schema().at(section).count(key)) throw ParseError("unknown key '" + key + "' in [" + section + "]", line);
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line);
    auto& slot = table[section + "." + key];
    if (!slot.empty() && key != "constraint")
      throw ParseError("duplicate key '" + key + "' (first given on line " + std::to_string(slot.front().line) + ")",
                       line);
    slot.push_back({value, line});
  }
  return table;
}

[[noreturn]] void semantic(const Entry& e, const std::string& what) {
  throw SemanticError("line " + std::to_string(e.line) + ": " + what);
}

Rational rational_value(const Entry& e) {
  try {
    return Rational::parse(e.value);
  } catch (const ParseError& err) {
    throw ParseError(err.what(), e.line);
  }
}

double double_value(const Entry& e) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("invalid number '" + e.value + "'", e.line);
  return v;
}

long integer_value(const Entry& e) {
  long v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("invalid integer '" + e.value + "'", e.line);
  return v;
}

std::vector<Rational> rational_list(const Entry& e) {
  std::vector<Rational> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) out.push_back(rational_value({trim(item), e.line}));
  return out;
}

// Identifiers used in a polynomial text, to give a precise message for
// variables outside x, y before the polynomial parser sees them.
std::set<std::string> identifiers(const std::string& text) {
  std::set<std::string> ids;
  for (size_t i = 0; i < text.size();) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      ids.insert(text.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
  return ids;
}

Polynomial polynomial_value(const Entry& e, int dimension) {
  for (const auto& id : identifiers(e.value)) {
    if (id != "x" && id != "y")
      semantic(e, "unknown variable '" + id + "' in '" + e.value + "'; only x and y are supported");
    if (id == "y" && dimension == 1) semantic(e, "'" + e.value + "' uses y but the problem is one-dimensional");
  }
  try {
    return Polynomial::parse(e.value, default_var_names(static_cast<size_t>(dimension)));
  } catch (const ParseError& err) {
    throw ParseError(err.what(), e.line);
  }
}

}  // namespace

Problem parse_problem(std::string_view text) {
  Table t = tokenize(text);
  auto get = [&](const std::string& key) -> const Entry* {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second.front();
  };

  Problem p;
  const Entry* f = get("function.f");
  if (!f) throw ParseError("missing required key 'f' in [function]");
  if (const Entry* d = get("function.dimension")) {
    long v = integer_value(*d);
    if (v != 1 && v != 2) semantic(*d, "dimension must be 1 or 2, got " + d->value);
    p.dimension = static_cast<int>(v);
  } else {
    // Without an explicit dimension, y anywhere makes the problem planar.
    bool planar = false;
    for (const auto& [key, entries] : t)
      if (key == "function.f" || key == "domain.constraint" || key == "cutoff.multiplier")
        for (const auto& e : entries) planar = planar || identifiers(e.value).count("y") > 0;
    planar = planar || t.count("domain.window_y") > 0;
    p.dimension = planar ? 2 : 1;
  }
  size_t n = static_cast<size_t>(p.dimension);

  p.f_text = f->value;
  p.f = polynomial_value(*f, p.dimension);
  if (p.f.is_zero()) semantic(*f, "f is identically zero");
  if (auto it = t.find("domain.constraint"); it != t.end())
    for (const auto& e : it->second) {
      p.constraint_texts.push_back(e.value);
      p.constraints.push_back(polynomial_value(e, p.dimension));
      if (p.constraints.back().is_zero()) semantic(e, "constraint '" + e.value + "' > 0 is never satisfied");
    }

  p.window_lo.assign(n, Rational(-1));
  p.window_hi.assign(n, Rational(1));
  p.base.assign(n, Rational(0));
  const char* window_keys[2] = {"domain.window_x", "domain.window_y"};
  for (size_t j = 0; j < 2; ++j) {
    const Entry* w = get(window_keys[j]);
    if (!w) continue;
    if (j >= n) semantic(*w, "window_y given for a one-dimensional problem");
    auto v = rational_list(*w);
    if (v.size() != 2) throw ParseError("window needs two values 'lo, hi'", w->line);
    if (!(v[0] < v[1])) semantic(*w, "window lower end must be below the upper end");
    p.window_lo[j] = v[0];
    p.window_hi[j] = v[1];
  }
  if (const Entry* b = get("domain.base")) {
    auto v = rational_list(*b);
    if (v.size() != n) throw ParseError("base needs " + std::to_string(n) + " coordinate(s)", b->line);
    p.base = v;
  }
  for (size_t j = 0; j < n; ++j)
    if (p.base[j] < p.window_lo[j] || p.base[j] > p.window_hi[j])
      throw SemanticError("base point " + p.base[j].str() + " lies outside the window along coordinate " +
                          std::to_string(j + 1));

  CutoffSpec& c = p.cutoff;
  if (const Entry* k = get("cutoff.kind")) {
    std::string v = lower(k->value);
    if (v == "product")
      c.kind = CutoffKind::Product;
    else if (v == "radial")
      c.kind = CutoffKind::Radial;
    else
      throw ParseError("cutoff kind must be 'product' or 'radial', got '" + k->value + "'", k->line);
  }
  if (const Entry* e = get("cutoff.eta"); e && lower(e->value) != "auto") {
    c.eta = rational_value(*e);
    if (c.eta->sign() <= 0) semantic(*e, "eta must be positive");
  }
  auto positive_pair = [&](const char* k0, const char* k1, Rational& v0, Rational& v1) {
    const Entry* e0 = get(k0);
    const Entry* e1 = get(k1);
    if (e0) v0 = rational_value(*e0);
    if (e1) v1 = rational_value(*e1);
    if (!(v0.sign() > 0 && v0 < v1)) {
      const Entry* at = e1 ? e1 : e0;
      std::string what = std::string(k0).substr(7) + " and " + std::string(k1).substr(7) + " need 0 < " +
                         std::string(k0).substr(7) + " < " + std::string(k1).substr(7);
      if (at) semantic(*at, what);
      throw SemanticError(what);
    }
  };
  positive_pair("cutoff.c0", "cutoff.c1", c.c0, c.c1);
  positive_pair("cutoff.partition_c0", "cutoff.partition_c1", c.partition_c0, c.partition_c1);
  if (const Entry* m = get("cutoff.multiplier")) {
    c.multiplier_text = m->value;
    c.multiplier = polynomial_value(*m, p.dimension);
  } else {
    c.multiplier = Polynomial::constant(n, Rational(1));
  }

  RunConfig& r = p.run;
  if (const Entry* b = get("run.branch")) {
    std::string v = lower(b->value);
    if (v == "upper")
      r.branch = 1;
    else if (v == "lower")
      r.branch = -1;
    else
      throw ParseError("branch must be 'upper' or 'lower', got '" + b->value + "'", b->line);
  }
  if (const Entry* d = get("run.depth")) {
    long v = integer_value(*d);
    if (v < 0 || v > 12) semantic(*d, "depth must lie in 0..12");
    r.depth = static_cast<int>(v);
  }
  if (const Entry* e = get("run.tol")) {
    r.tol = double_value(*e);
    if (!(r.tol > 0.0 && r.tol < 1.0)) semantic(*e, "tol must lie in (0, 1)");
  }
  if (const Entry* e = get("run.order")) {
    long v = integer_value(*e);
    if (v != 7 && v != 10 && v != 15 && v != 20 && v != 25 && v != 30)
      semantic(*e, "order must be one of 7, 10, 15, 20, 25, 30");
    r.order = static_cast<int>(v);
  }
  if (const Entry* e = get("run.max_subdivisions")) {
    r.max_subdivisions = integer_value(*e);
    if (r.max_subdivisions <= 0) semantic(*e, "max_subdivisions must be positive");
  }
  if (const Entry* e = get("run.abs_floor")) {
    r.abs_floor = double_value(*e);
    if (!(r.abs_floor >= 0.0)) semantic(*e, "abs_floor must be nonnegative");
  }
  if (const Entry* e = get("run.max_terms")) {
    r.max_terms = integer_value(*e);
    if (r.max_terms <= 0) semantic(*e, "max_terms must be positive");
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

namespace {

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InternalError("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace

std::string emit_problem(const Problem& p) {
  std::ostringstream out;
  out << "[function]\n";
  out << "dimension = " << p.dimension << "\n";
  out << "f = " << p.f_text << "\n";
  out << "\n[domain]\n";
  for (const auto& c : p.constraint_texts) out << "constraint = " << c << "\n";
  const char* window_keys[2] = {"window_x", "window_y"};
  for (size_t j = 0; j < p.window_lo.size(); ++j)
    out << window_keys[j] << " = " << p.window_lo[j].str() << ", " << p.window_hi[j].str() << "\n";
  out << "base = ";
  for (size_t j = 0; j < p.base.size(); ++j) out << (j ? ", " : "") << p.base[j].str();
  out << "\n";
  const CutoffSpec& c = p.cutoff;
  out << "\n[cutoff]\n";
  out << "kind = " << (c.kind == CutoffKind::Radial ? "radial" : "product") << "\n";
  out << "eta = " << (c.eta ? c.eta->str() : std::string("auto")) << "\n";
  out << "c0 = " << c.c0.str() << "\nc1 = " << c.c1.str() << "\n";
  out << "multiplier = " << c.multiplier_text << "\n";
  out << "partition_c0 = " << c.partition_c0.str() << "\npartition_c1 = " << c.partition_c1.str() << "\n";
  const RunConfig& r = p.run;
  out << "\n[run]\n";
  out << "branch = " << (r.branch < 0 ? "lower" : "upper") << "\n";
  out << "depth = " << r.depth << "\n";
  out << "tol = " << shortest(r.tol) << "\n";
  if (r.order) out << "order = " << *r.order << "\n";
  out << "max_subdivisions = " << r.max_subdivisions << "\n";
  out << "abs_floor = " << shortest(r.abs_floor) << "\n";
  out << "max_terms = " << r.max_terms << "\n";
  return out.str();
}

}  // namespace lzeta
