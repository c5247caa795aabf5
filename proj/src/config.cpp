#include "pps/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "pps/errors.hpp"
#include "pps/expression.hpp"

namespace pps {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
}

struct Entry {
  std::string text;
  int line;
};

}  // namespace

ConfigProblem parse_config(std::istream& in) {
  std::map<std::string, Entry> kv;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = {value, lineno};
  }

  ConfigProblem out;
  SystemDef& s = out.system;
  auto take = [&](const std::string& k) -> std::optional<Entry> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    Entry e = it->second;
    kv.erase(it);
    return e;
  };

  const auto dim = take("dimension");
  if (!dim) throw ConfigError("missing 'dimension'");
  const double dd = parse_number("dimension", dim->text);
  if (dd < 1 || dd != static_cast<int>(dd))
    throw ConfigError("'dimension' must be a positive integer");
  const int d = static_cast<int>(dd);
  s.d = d;
  s.name = "config";
  if (auto n = take("name")) s.name = n->text;
  if (auto t = take("T")) out.T = parse_number("T", t->text);
  const auto dom = take("domain");
  if (!dom) throw ConfigError("missing 'domain'");
  {
    const auto comma = dom->text.find(',');
    if (comma == std::string::npos)
      throw ConfigError("'domain' expects 'xL, xR'");
    s.xL = parse_number("domain", trim(dom->text.substr(0, comma)));
    s.xR = parse_number("domain", trim(dom->text.substr(comma + 1)));
    if (!(s.xL < s.xR)) throw ConfigError("'domain' requires xL < xR");
  }

  std::vector<std::string> uvars;
  for (int i = 1; i <= d; ++i) uvars.push_back("u" + std::to_string(i));
  std::vector<std::string> gvars = uvars;
  gvars.push_back("x");
  gvars.push_back("t");

  auto compile = [&](const Entry& e, const std::vector<std::string>& vars) {
    try {
      return Expression::parse(e.text, vars);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
    }
  };

  using ExprMat = std::vector<std::vector<std::optional<Expression>>>;
  auto matrix = [&](const std::string& name, bool& any, bool& state_free) {
    ExprMat m(d, std::vector<std::optional<Expression>>(d));
    any = false;
    state_free = true;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (auto e = take(name + "[" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + "]")) {
          m[i][j] = compile(*e, uvars);
          any = true;
          for (int q = 0; q < d; ++q)
            if (m[i][j]->uses(q)) state_free = false;
        }
    return m;
  };
  auto vector = [&](const std::string& name, const std::vector<std::string>& vars,
                    bool& any) {
    std::vector<std::optional<Expression>> v(d);
    any = false;
    for (int i = 0; i < d; ++i)
      if (auto e = take(name + "[" + std::to_string(i + 1) + "]")) {
        v[i] = compile(*e, vars);
        any = true;
      }
    return v;
  };
  auto to_matrix_fn = [d](ExprMat m) -> MatrixFn {
    return [d, m = std::move(m)](const Vec& u) {
      Mat out = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (m[i][j]) out(i, j) = m[i][j]->eval({u.data(), static_cast<std::size_t>(d)});
      return out;
    };
  };

  bool any = false, state_free = true;
  {
    ExprMat A = matrix("A", any, state_free);
    if (any) s.A = to_matrix_fn(std::move(A));
    s.constant_A = state_free;
  }
  {
    ExprMat B = matrix("B", any, state_free);
    if (any) s.B = to_matrix_fn(std::move(B));
    s.constant_B = state_free;
  }
  {
    ExprMat J = matrix("dG", any, state_free);
    if (any) s.dG = to_matrix_fn(std::move(J));
  }
  {
    auto G = vector("G", uvars, any);
    if (any)
      s.G = [d, G = std::move(G)](const Vec& u) {
        Vec out = Vec::Zero(d);
        for (int i = 0; i < d; ++i)
          if (G[i]) out(i) = G[i]->eval({u.data(), static_cast<std::size_t>(d)});
        return out;
      };
  }
  {
    auto g = vector("gamma", gvars, any);
    if (any)
      s.gamma = [d, g = std::move(g)](const Vec& u, double x, double t) {
        std::vector<double> vals(u.data(), u.data() + d);
        vals.push_back(x);
        vals.push_back(t);
        Vec out = Vec::Zero(d);
        for (int i = 0; i < d; ++i)
          if (g[i]) out(i) = g[i]->eval(vals);
        return out;
      };
  }
  auto scalar_fn = [d](std::vector<std::optional<Expression>> e) {
    return [d, e = std::move(e)](double arg) {
      Vec out = Vec::Zero(d);
      const double v[1] = {arg};
      for (int i = 0; i < d; ++i)
        if (e[i]) out(i) = e[i]->eval(v);
      return out;
    };
  };
  {
    auto gl = vector("gL", {"t"}, any);
    if (any) s.gL = scalar_fn(std::move(gl));
    auto gr = vector("gR", {"t"}, any);
    if (any) s.gR = scalar_fn(std::move(gr));
    auto u0 = vector("u0", {"x"}, any);
    if (any) s.u0 = scalar_fn(std::move(u0));
  }

  if (!kv.empty()) {
    const auto& [k, e] = *kv.begin();
    throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + k + "'");
  }
  s = with_defaults(s);
  return out;
}

ConfigProblem load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f);
}

}  // namespace pps
