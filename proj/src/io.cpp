#include "liesym/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "liesym/parse.hpp"

namespace liesym {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::string as_text(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return fmt(j.get<double>());
  bad(where + " must be a string or number");
}

std::vector<Symbol> symbol_list(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array of names");
  std::vector<Symbol> out;
  for (const auto& v : j) {
    if (!v.is_string()) bad(where + " must contain strings");
    out.emplace_back(v.get<std::string>());
  }
  return out;
}

ParseContext context(const json& j, const FunctionRegistry& registry) {
  ParseContext ctx;
  ctx.registry = &registry;
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) bad("'params' must be an object");
    for (const auto& [k, v] : p.items()) {
      Expr e = parse_expr(as_text(v, "param " + k), ctx);
      auto q = e.constant_value();
      if (!q) bad("param " + k + " is not a rational constant");
      ctx.params[k] = *q;
    }
  }
  return ctx;
}

std::vector<VectorField> basis_from(const json& j, const ParseContext& ctx) {
  const json& b = need(j, "basis");
  if (!b.is_array() || b.empty()) bad("'basis' must be a nonempty array");
  std::vector<Symbol> shared;
  if (j.contains("vars")) shared = symbol_list(j.at("vars"), "'vars'");
  std::vector<VectorField> out;
  for (const auto& f : b) {
    std::vector<Symbol> vars = shared;
    const json* comps = &f;
    if (f.is_object()) {
      if (f.contains("vars")) vars = symbol_list(f.at("vars"), "field vars");
      comps = &need(f, "components");
    }
    if (!comps->is_array()) bad("field components must be an array");
    if (vars.empty()) bad("field without variables");
    if (comps->size() != vars.size()) bad("field has " + std::to_string(comps->size()) + " components for " +
                                          std::to_string(vars.size()) + " variables");
    std::vector<Expr> e;
    for (const auto& c : *comps) e.push_back(parse_expr(as_text(c, "component"), ctx));
    out.emplace_back(std::move(vars), std::move(e));
  }
  for (const auto& f : out) {
    if (f.vars() != out.front().vars()) bad("basis fields use different variables");
  }
  return out;
}

std::vector<std::pair<double, double>> box_from(const json& j, std::size_t n, double lo, double hi) {
  if (!j.is_array()) bad("box must be an array of [lo, hi] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) bad("box entries must be [lo, hi]");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  if (out.empty()) out.assign(n, {lo, hi});
  if (out.size() != n) bad("box has the wrong number of entries");
  return out;
}

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

LieSystemDef system_from_json(const json& j, const FunctionRegistry& registry) {
  try {
    if (!j.is_object()) bad("system definition must be an object");
    ParseContext ctx = context(j, registry);
    LieSystemDef sys;
    if (j.contains("time")) sys.time = Symbol(as_text(j.at("time"), "'time'"));
    sys.basis = basis_from(j, ctx);
    const json& c = need(j, "coeffs");
    if (!c.is_array() || c.size() != sys.basis.size()) bad("'coeffs' needs one entry per basis field");
    for (const auto& e : c) sys.coeffs.push_back(parse_expr(as_text(e, "coefficient"), ctx));
    sys.gauge_b0 = j.contains("gauge_b0") ? parse_expr(as_text(j.at("gauge_b0"), "'gauge_b0'"), ctx) : Expr(0);
    if (j.contains("tensor")) sys.tensor = tensor_from_json(j.at("tensor"), sys.basis.size());
    if (j.contains("excluded")) sys.excluded = as_text(j.at("excluded"), "'excluded'");
    sys.sample_box = box_from(j.value("sample_box", json::array()), sys.vars().size(), -1.0, 1.0);
    return sys;
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

PDELieSystemDef pde_from_json(const json& j, const FunctionRegistry& registry) {
  try {
    if (!j.is_object()) bad("PDE definition must be an object");
    ParseContext ctx = context(j, registry);
    PDELieSystemDef sys;
    sys.times = symbol_list(need(j, "times"), "'times'");
    sys.basis = basis_from(j, ctx);
    const json& c = need(j, "coeffs");
    if (!c.is_array() || c.size() != sys.basis.size()) bad("'coeffs' needs one row per basis field");
    for (const auto& row : c) {
      if (!row.is_array() || row.size() != sys.times.size()) bad("coefficient rows need one entry per time");
      std::vector<Expr> r;
      for (const auto& e : row) r.push_back(parse_expr(as_text(e, "coefficient"), ctx));
      sys.coeffs.push_back(std::move(r));
    }
    if (j.contains("tensor")) sys.tensor = tensor_from_json(j.at("tensor"), sys.basis.size());
    sys.time_box = box_from(j.value("time_box", json::array()), sys.times.size(), 0.0, 1.0);
    sys.sample_box = box_from(j.value("sample_box", json::array()), sys.vars().size(), -1.0, 1.0);
    sys.label = j.value("label", std::string());
    return sys;
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

TimePath path_from_json(const json& j) {
  try {
    TimePath p;
    for (const auto& w : need(j, "waypoints")) p.waypoints.push_back(w.get<std::vector<double>>());
    if (j.contains("steps")) {
      long long s = j.at("steps").get<long long>();
      if (s <= 0) throw Error(ErrorKind::StepNotPositive, "path steps must be positive");
      p.steps = static_cast<std::size_t>(s);
    }
    return p;
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

json tensor_to_json(const StructureTensor& c) {
  json out = json::array();
  for (std::size_t a = 0; a < c.dim(); ++a) {
    for (std::size_t b = a + 1; b < c.dim(); ++b) {
      for (std::size_t g = 0; g < c.dim(); ++g) {
        if (c(a, b, g) != 0) out.push_back({a + 1, b + 1, g + 1, to_string(c(a, b, g))});
      }
    }
  }
  return out;
}

StructureTensor tensor_from_json(const json& j, std::size_t r) {
  if (!j.is_array()) bad("tensor must be an array of [a,b,g,\"p/q\"]");
  StructureTensor c(r);
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 4) bad("tensor entries must be [a,b,g,\"p/q\"]");
    long a = e[0].get<long>(), b = e[1].get<long>(), g = e[2].get<long>();
    if (a < 1 || b < 1 || g < 1 || a > static_cast<long>(r) || b > static_cast<long>(r) || g > static_cast<long>(r)) {
      bad("tensor index out of range");
    }
    if (a >= b) bad("tensor entries store a < b only");
    c.set_bracket(a - 1, b - 1, g - 1, parse_rational(as_text(e[3], "tensor value")));
  }
  return c;
}

json system_to_json(const LieSystemDef& sys) {
  json j;
  j["time"] = sys.time.name();
  json vars = json::array();
  for (Symbol v : sys.vars()) vars.push_back(v.name());
  j["vars"] = vars;
  json basis = json::array();
  for (const auto& f : sys.basis) {
    json comps = json::array();
    for (const auto& c : f.components()) comps.push_back(c.to_string());
    basis.push_back({{"components", comps}});
  }
  j["basis"] = basis;
  json coeffs = json::array();
  for (const auto& c : sys.coeffs) coeffs.push_back(c.to_string());
  j["coeffs"] = coeffs;
  j["gauge_b0"] = sys.gauge_b0.to_string();
  if (sys.tensor) j["tensor"] = tensor_to_json(*sys.tensor);
  return j;
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& columns) {
  os << "# liesym-csv v1\n";
  os << "t";
  for (const auto& c : columns) os << ',' << c;
  os << ",err_est\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << fmt(traj.t[k]);
    for (double v : traj.y[k]) os << ',' << fmt(v);
    os << ',' << fmt(traj.err[k]) << '\n';
  }
}

std::string gnuplot_script(const std::string& csv_path, const std::vector<std::string>& columns) {
  std::ostringstream os;
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set xlabel 't'\n";
  os << "plot ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ", \\\n     ";
    os << "'" << csv_path << "' every ::1 using 1:" << (i + 2) << " with lines title '" << columns[i] << "'";
  }
  os << "\n";
  return os.str();
}

}  // namespace liesym
