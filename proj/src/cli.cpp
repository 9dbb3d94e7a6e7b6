#include "liesym/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "liesym/catalog.hpp"
#include "liesym/io.hpp"
#include "liesym/parse.hpp"

namespace liesym {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ParseError: return kExitParse;
    case ErrorKind::PoleEncountered:
    case ErrorKind::TransportLeftDomain: return kExitPole;
    case ErrorKind::StepNotPositive:
    case ErrorKind::BadParams:
    case ErrorKind::UnknownName: return kExitUsage;
    default: return kExitFailed;
  }
}

namespace {

// Short form for human-readable lines; files use fmt().
std::string num(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Source {
  std::string catalog;
  std::string input;
  std::vector<std::string> params;

  void attach(CLI::App* app) {
    auto* c = app->add_option("--catalog", catalog, "catalog entry name");
    auto* i = app->add_option("--input", input, "system definition JSON file");
    c->excludes(i);
    app->add_option("--param", params, "catalog parameter key=value (repeatable)");
  }

  CatalogParams catalog_params() const {
    CatalogParams out;
    for (const auto& p : params) {
      auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::BadParams, "--param expects key=value, got '" + p + "'");
      out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
  }

  void require() const {
    if (catalog.empty() && input.empty()) throw Error(ErrorKind::BadParams, "give --catalog NAME or --input FILE");
    if (!input.empty() && !params.empty()) throw Error(ErrorKind::BadParams, "--param applies to catalog entries only");
  }

  std::string label() const { return catalog.empty() ? input : catalog; }

  // Either an ODE Lie system or a PDE Lie system, plus known families.
  CatalogEntry load() const {
    require();
    if (!catalog.empty()) return make_entry(catalog, catalog_params());
    json j = read_json_file(input);
    CatalogEntry e;
    e.name = input;
    if (j.is_object() && j.contains("times")) {
      e.pde = pde_from_json(j);
    } else {
      e.system = system_from_json(j);
    }
    return e;
  }
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadParams, what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LIESYM_SEED"); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error(ErrorKind::BadParams, "LIESYM_SEED must be a non-negative integer");
    return v;
  }
  return 42;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::BadParams, "cannot write '" + path + "'");
  f << content;
}

void check_step(double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::StepNotPositive, "step must be positive");
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::BadParams, "tolerances must be positive");
}

StructureTensor tensor_for(LieSystemDef& sys) { return ensure_tensor(sys); }

std::string bracket_lines(const StructureTensor& c, const std::string& prefix) {
  std::ostringstream os;
  for (std::size_t a = 0; a < c.dim(); ++a) {
    for (std::size_t b = a + 1; b < c.dim(); ++b) {
      std::string rhs;
      for (std::size_t g = 0; g < c.dim(); ++g) {
        const Rational& v = c(a, b, g);
        if (v == 0) continue;
        std::string coef = v == 1 ? "" : v == -1 ? "-" : to_string(v) + "*";
        if (!rhs.empty()) rhs += coef.starts_with("-") ? " - " : " + ";
        if (!rhs.empty() && coef.starts_with("-")) coef = coef.substr(1);
        rhs += coef + "X" + std::to_string(g + 1);
      }
      if (!rhs.empty()) os << prefix << "[X" << a + 1 << ",X" << b + 1 << "] = " << rhs << "\n";
    }
  }
  return os.str();
}

std::string candidate_text(const SymmetryCandidate& c) {
  std::string s;
  for (std::size_t i = 0; i < c.f.size(); ++i) s += (i ? ", " : "") + ("f" + std::to_string(i) + " = " + c.f[i].to_string());
  return s;
}

// ---------------------------------------------------------------- list / show

int cmd_list(std::ostream& out) {
  for (const auto& i : catalog_info()) {
    out << std::left << std::setw(16) << i.name << std::setw(13) << i.family << i.description << "\n";
    if (!i.params.empty()) out << std::setw(29) << "" << "params: " << i.params << "\n";
  }
  return kExitOk;
}

int cmd_show(const Source& src, std::ostream& out) {
  CatalogEntry e = src.load();
  out << "name: " << e.name << "\n";
  if (!e.family.empty()) out << "algebra: " << e.family << "\n";
  if (!e.description.empty()) out << "description: " << e.description << "\n";
  out << "excluded: " << (e.excluded.empty() ? "none" : e.excluded) << "\n";
  const auto& basis = e.basis();
  out << "variables:";
  for (Symbol v : basis.front().vars()) out << " " << v.name();
  out << "\nbasis:\n";
  for (std::size_t a = 0; a < basis.size(); ++a) out << "  X" << a + 1 << " = " << basis[a].to_string() << "\n";
  if (e.system) {
    out << "coefficients (time " << e.system->time.name() << "):\n";
    for (std::size_t a = 0; a < e.system->rank(); ++a) out << "  b" << a + 1 << " = " << e.system->coeffs[a] << "\n";
  } else {
    out << "coefficients:\n";
    for (std::size_t a = 0; a < e.pde->rank(); ++a) {
      for (std::size_t l = 0; l < e.pde->s(); ++l) {
        out << "  b" << a + 1 << "," << l + 1 << " = " << e.pde->coeffs[a][l] << "\n";
      }
    }
  }
  StructureTensor c = e.system ? tensor_of(*e.system) : tensor_of(*e.pde);
  out << "brackets:\n" << bracket_lines(c, "  ");
  out << "tensor: " << tensor_to_json(c).dump() << "\n";
  if (!e.families.empty()) {
    out << "families:\n";
    for (const auto& f : e.families) out << "  " << f.name << ": " << candidate_text(f.candidate) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- check-algebra

int cmd_check_algebra(const Source& src, std::ostream& out) {
  CatalogEntry e = src.load();
  const auto& basis = e.basis();
  StructureTensor c;
  try {
    c = extract_structure_constants(basis);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::NotClosed) {
      out << "not closed, r=" << basis.size() << ": " << err.what() << "\n";
      return kExitFailed;
    }
    throw;
  }
  Rational jac = jacobi_residual(c);
  RMatrix z = center(c);
  out << "closed, r=" << c.dim() << ", jacobi=" << to_string(jac) << ", center=" << z.size()
      << (c.numerical ? ", numerical" : "") << "\n";
  out << bracket_lines(c, "  ");
  if (e.system && e.system->tensor && !(*e.system->tensor == c)) {
    out << "extracted tensor differs from the declared one\n";
    return kExitFailed;
  }
  return jac == 0 ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------- symmetrize

struct SymmetrizeOpts {
  Source src;
  std::string b0 = "0";
  double t0 = 0.0, t1 = 1.0, step = 1e-3, tol = 1e-6;
  std::string f_init;
  std::size_t nt = 20, nx = 20;
  std::string csv, report, gnuplot;
};

int cmd_symmetrize(const SymmetrizeOpts& o, std::uint64_t seed, std::ostream& out) {
  check_step(o.step);
  check_tol(o.tol);
  CatalogEntry e = o.src.load();
  if (!e.system) throw Error(ErrorKind::BadParams, "symmetrize needs an ODE Lie system; use `pde` for PDE systems");
  LieSystemDef sys = *e.system;
  try {
    tensor_for(sys);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::NotClosed) throw;
    out << "not closed: " << err.what() << "\n";
    return kExitFailed;
  }
  sys.gauge_b0 = parse_expr(o.b0);
  if (!sys.gauge_b0.free_symbols().empty()) {
    for (Symbol s : sys.gauge_b0.free_symbols()) {
      if (s != sys.time) throw Error(ErrorKind::BadParams, "b0 may depend on " + sys.time.name() + " only");
    }
  }
  LieSystemDef ss = build_symmetry_system(sys);
  std::size_t r = sys.rank();
  std::vector<double> f0(r + 1, 0.0);
  f0[0] = 1.0;
  if (!o.f_init.empty()) f0 = parse_list(o.f_init, "--f-init");
  if (f0.size() != r + 1) {
    throw Error(ErrorKind::BadParams, "--f-init needs " + std::to_string(r + 1) + " values (f0..f" + std::to_string(r) + ")");
  }
  Trajectory traj = integrate(ss, f0, o.t0, o.t1, o.step);
  SymmetryCandidate cand = candidate_from_trajectory(ss, traj, "f");
  ResidualGrid grid = make_grid(sys, o.t0, o.t1, o.nt, o.nx, seed);
  ResidualReport rep = symmetry_residual(cand, sys, grid);
  bool pass = rep.exact_zero || rep.max_abs <= o.tol;

  std::vector<std::string> cols;
  for (std::size_t i = 0; i <= r; ++i) cols.push_back("f" + std::to_string(i));
  double max_err = 0.0;
  for (double v : traj.err) max_err = std::max(max_err, v);

  out << "system: " << o.src.label() << ", r=" << r << ", b0 = " << sys.gauge_b0 << " (h = -b0)\n";
  out << "integrated " << traj.size() - 1 << " steps of " << num(traj.step) << " on [" << num(o.t0) << ", " << num(o.t1)
      << "], max err_est " << num(max_err) << "\n";
  out << "f(" << num(o.t1) << ") =";
  for (double v : traj.back()) out << " " << num(v);
  out << "\n";
  out << "symmetry residual " << (rep.exact_zero ? "0 (exact)" : num(rep.max_abs)) << " on " << rep.points
      << " points, tol " << num(o.tol) << ": " << (pass ? "PASS" : "FAIL") << "\n";

  if (!o.csv.empty()) {
    std::ostringstream os;
    write_csv(os, traj, cols);
    write_file(o.csv, os.str());
    if (!o.gnuplot.empty()) write_file(o.gnuplot, gnuplot_script(o.csv, cols));
  }
  if (!o.report.empty()) {
    json j;
    j["command"] = "symmetrize";
    j["system"] = o.src.label();
    j["seed"] = seed;
    j["b0"] = sys.gauge_b0.to_string();
    j["h"] = (-sys.gauge_b0).to_string();
    j["f_init"] = f0;
    j["t_span"] = {o.t0, o.t1};
    j["step"] = o.step;
    j["steps"] = traj.size() - 1;
    j["final"] = traj.back();
    j["max_err_est"] = max_err;
    j["residual"] = {{"max_abs", rep.max_abs}, {"exact_zero", rep.exact_zero}, {"points", rep.points}, {"tol", o.tol}};
    j["pass"] = pass;
    write_file(o.report, j.dump(2) + "\n");
  }
  return pass ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  Source src;
  std::string family;
  std::string candidate;
  double t0 = 0.0, t1 = 1.0, tol = 1e-6;
  std::size_t nt = 20, nx = 20;
  std::string x0;
  double eps = 1e-3, span = 0.05, step = 1e-3;
  std::string report;
};

int cmd_verify(const VerifyOpts& o, std::uint64_t seed, std::ostream& out) {
  check_tol(o.tol);
  CatalogEntry e = o.src.load();
  if (!e.system) throw Error(ErrorKind::BadParams, "verify needs an ODE Lie system; use `pde` for PDE systems");
  const LieSystemDef& sys = *e.system;
  std::vector<KnownFamily> fams;
  if (!o.candidate.empty()) {
    SymmetryCandidate c;
    c.time = sys.time;
    c.label = "candidate";
    std::stringstream ss(o.candidate);
    std::string item;
    while (std::getline(ss, item, ';')) c.f.push_back(parse_expr(item));
    if (c.f.size() != sys.rank() + 1) {
      throw Error(ErrorKind::BadParams, "--candidate needs " + std::to_string(sys.rank() + 1) + " ';'-separated entries");
    }
    fams.push_back({"candidate", c, true});
  } else {
    for (const auto& f : e.families) {
      if (o.family.empty() || f.name == o.family) fams.push_back(f);
    }
    if (fams.empty()) throw Error(ErrorKind::BadParams, "no family named '" + o.family + "'");
  }
  ResidualGrid grid = make_grid(sys, o.t0, o.t1, o.nt, o.nx, seed);
  std::optional<Trajectory> sol;
  if (!o.x0.empty()) {
    check_step(o.step);
    sol = integrate(sys, parse_list(o.x0, "--x0"), o.t0, o.t0 + o.span, o.step);
  }
  bool all = true;
  json rows = json::array();
  for (const auto& f : fams) {
    ResidualReport rep = symmetry_residual(f.candidate, sys, grid);
    bool pass = rep.exact_zero || rep.max_abs <= o.tol;
    out << f.name << ": residual " << (rep.exact_zero ? "0 (exact)" : num(rep.max_abs)) << " on " << rep.points
        << " points: " << (pass ? "PASS" : "FAIL") << "\n";
    json row{{"family", f.name},
             {"f", json::array()},
             {"max_abs", rep.max_abs},
             {"exact_zero", rep.exact_zero},
             {"points", rep.points},
             {"pass", pass}};
    for (const auto& x : f.candidate.f) row["f"].push_back(x.to_string());
    if (sol) {
      TransportReport tr = flow_transport_check(sys, f.candidate, *sol, o.eps);
      out << "  transport: defect(eps) " << num(tr.defect_eps) << ", defect(eps/2) " << num(tr.defect_half) << ", ratio "
          << (tr.exact ? "exact" : num(tr.ratio)) << (tr.flagged ? " FLAGGED" : "") << "\n";
      row["transport"] = {{"defect_eps", tr.defect_eps},
                          {"defect_half", tr.defect_half},
                          {"ratio", tr.exact ? json("exact") : json(tr.ratio)},
                          {"flagged", tr.flagged}};
      pass = pass && !tr.flagged;
    }
    all = all && pass;
    rows.push_back(row);
  }
  if (!o.report.empty()) {
    json j{{"command", "verify"}, {"system", o.src.label()}, {"seed", seed}, {"tol", o.tol}, {"families", rows}, {"pass", all}};
    write_file(o.report, j.dump(2) + "\n");
  }
  return all ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------- integrate

struct IntegrateOpts {
  Source src;
  std::string x0;
  double t0 = 0.0, t1 = 1.0, step = 1e-3;
  std::string csv, gnuplot;
};

int cmd_integrate(const IntegrateOpts& o, std::ostream& out) {
  check_step(o.step);
  CatalogEntry e = o.src.load();
  if (!e.system) throw Error(ErrorKind::BadParams, "integrate needs an ODE Lie system; use `pde` for PDE systems");
  const LieSystemDef& sys = *e.system;
  std::vector<double> x0 = parse_list(o.x0, "--x0");
  if (x0.size() != sys.vars().size()) {
    throw Error(ErrorKind::BadParams, "--x0 needs " + std::to_string(sys.vars().size()) + " values");
  }
  Trajectory traj = integrate(sys, x0, o.t0, o.t1, o.step);
  std::vector<std::string> cols;
  for (Symbol v : sys.vars()) cols.push_back(v.name());
  double max_err = 0.0;
  for (double v : traj.err) max_err = std::max(max_err, v);
  out << "integrated " << traj.size() - 1 << " steps, max err_est " << num(max_err) << "\n";
  out << "x(" << num(o.t1) << ") =";
  for (double v : traj.back()) out << " " << fmt(v);
  out << "\n";
  if (!o.csv.empty()) {
    std::ostringstream os;
    write_csv(os, traj, cols);
    write_file(o.csv, os.str());
    if (!o.gnuplot.empty()) write_file(o.gnuplot, gnuplot_script(o.csv, cols));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- pde

struct PdeOpts {
  Source src;
  std::string path;
  std::string x0;
  std::string f_init;
  std::size_t steps = 200;
  double tol = 1e-9, path_tol = 1e-6;
  std::string csv, report, gnuplot;
};

std::vector<TimePath> comparison_paths(const std::vector<double>& from, const std::vector<double>& to, std::size_t steps) {
  std::size_t s = from.size();
  std::vector<TimePath> out;
  out.push_back({{from, to}, steps});
  for (bool reverse : {false, true}) {
    TimePath p{{from}, steps};
    std::vector<double> cur = from;
    for (std::size_t i = 0; i < s; ++i) {
      std::size_t axis = reverse ? s - 1 - i : i;
      if (cur[axis] == to[axis]) continue;
      cur[axis] = to[axis];
      p.waypoints.push_back(cur);
    }
    out.push_back(std::move(p));
  }
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

int cmd_pde(const PdeOpts& o, std::uint64_t seed, std::ostream& out) {
  check_tol(o.tol);
  check_tol(o.path_tol);
  if (o.steps == 0) throw Error(ErrorKind::StepNotPositive, "--steps must be positive");
  CatalogEntry e = o.src.load();
  if (!e.pde) throw Error(ErrorKind::BadParams, "pde needs a system with \"times\"; ODE systems have a single time");
  const PDELieSystemDef& sys = *e.pde;
  validate(sys);
  if (sys.s() < 2) {
    throw Error(ErrorKind::BadParams, "pde needs at least two times; a single-time system is an ODE Lie system");
  }
  std::size_t n = sys.vars().size();
  std::size_t r = sys.rank();

  std::vector<double> x0(n);
  for (std::size_t i = 0; i < n; ++i) {
    x0[i] = i < sys.sample_box.size() ? 0.5 * (sys.sample_box[i].first + sys.sample_box[i].second) : 0.0;
  }
  if (!o.x0.empty()) x0 = parse_list(o.x0, "--x0");
  if (x0.size() != n) throw Error(ErrorKind::BadParams, "--x0 needs " + std::to_string(n) + " values");

  std::vector<TimePath> paths;
  if (!o.path.empty()) {
    TimePath p = path_from_json(read_json_file(o.path));
    if (p.waypoints.size() < 2) throw Error(ErrorKind::BadParams, "path needs at least two waypoints");
    for (const auto& w : p.waypoints) {
      if (w.size() != sys.s()) throw Error(ErrorKind::BadParams, "path waypoints need one entry per time");
    }
    paths = comparison_paths(p.waypoints.front(), p.waypoints.back(), p.steps);
    paths.insert(paths.begin(), p);
  } else {
    std::vector<double> lo(sys.s()), hi(sys.s());
    for (std::size_t l = 0; l < sys.s(); ++l) {
      auto b = l < sys.time_box.size() ? sys.time_box[l] : std::pair{0.0, 1.0};
      lo[l] = b.first;
      hi[l] = b.second;
    }
    paths = comparison_paths(lo, hi, o.steps);
  }

  CurvatureReport curv = curvature_residual(sys);
  bool integrable = curv.integrable(o.tol);
  out << "system: " << o.src.label() << ", r=" << r << ", s=" << sys.s() << "\n";
  out << "curvature " << (curv.exact_zero ? "0 (exact)" : num(curv.max_abs)) << ": "
      << (integrable ? "integrable" : "NOT integrable") << "\n";

  json j;
  j["command"] = "pde";
  j["system"] = o.src.label();
  j["seed"] = seed;
  j["curvature"] = {{"max_abs", curv.max_abs}, {"exact_zero", curv.exact_zero}, {"points", curv.points}, {"tol", o.tol}};
  j["integrable"] = integrable;
  j["x0"] = x0;

  std::vector<Trajectory> runs;
  json jp = json::array();
  for (const auto& p : paths) {
    runs.push_back(integrate_along_path(sys, x0, p));
    jp.push_back({{"waypoints", p.waypoints}, {"steps", p.steps}, {"endpoint", runs.back().back()}});
  }
  double spread = 0.0;
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) spread = std::max(spread, max_diff(runs[a].back(), runs[b].back()));
  }
  bool agree = spread <= o.path_tol;
  out << paths.size() << " paths, endpoint spread " << num(spread) << ", tol " << num(o.path_tol) << ": "
      << (agree ? "agree" : "DISAGREE") << "\n";
  j["paths"] = jp;
  j["endpoint_spread"] = spread;
  j["path_tol"] = o.path_tol;
  j["paths_agree"] = agree;

  bool sym_ok = true;
  if (integrable) {
    PDELieSystemDef symsys = build_pde_symmetry_system(sys, o.tol);
    CurvatureReport sc = curvature_residual(symsys);
    bool sc_ok = sc.integrable(o.tol);
    out << "symmetry system curvature " << (sc.exact_zero ? "0 (exact)" : num(sc.max_abs)) << ": "
        << (sc_ok ? "integrable" : "NOT integrable") << "\n";
    std::vector<double> f(r, 1.0);
    if (!o.f_init.empty()) f = parse_list(o.f_init, "--f-init");
    if (f.size() != r) throw Error(ErrorKind::BadParams, "--f-init needs " + std::to_string(r) + " values");
    std::vector<double> base = paths.front().waypoints.front();
    std::vector<Expr> cand = sampled_pde_candidate(symsys, base, f);
    PDEGrid grid = make_pde_grid(sys, 3, 4, seed);
    PDESymmetryReport sr = pde_symmetry_residual(pde_candidate_field(cand, sys), sys, grid);
    bool sr_ok = sr.bracket_max <= 1e-6 && sr.agreement <= 1e-9;
    out << "symmetry oracles: bracket " << num(sr.bracket_max) << ", jet " << num(sr.jet_max) << ", agreement "
        << num(sr.agreement) << " on " << sr.points << " points: " << (sr_ok ? "PASS" : "FAIL") << "\n";
    j["symmetry_system"] = {{"curvature", sc.max_abs}, {"exact_zero", sc.exact_zero}, {"integrable", sc_ok}};
    j["symmetry_oracles"] = {{"f_init", f},
                             {"bracket_max", sr.bracket_max},
                             {"jet_max", sr.jet_max},
                             {"agreement", sr.agreement},
                             {"points", sr.points},
                             {"pass", sr_ok}};
    sym_ok = sc_ok && sr_ok;
  }
  bool pass = integrable && agree && sym_ok;
  j["pass"] = pass;

  if (!o.csv.empty()) {
    std::vector<std::string> cols;
    for (Symbol v : sys.vars()) cols.push_back(v.name());
    std::ostringstream os;
    write_csv(os, runs.front(), cols);
    write_file(o.csv, os.str());
    if (!o.gnuplot.empty()) write_file(o.gnuplot, gnuplot_script(o.csv, cols));
  }
  if (!o.report.empty()) write_file(o.report, j.dump(2) + "\n");
  return pass ? kExitOk : kExitFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"liesym: symmetry systems of Lie systems and PDE Lie systems"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "seed for randomized grids (default LIESYM_SEED, else 42)");

  app.add_subcommand("list", "list catalog entries");

  Source show_src;
  auto* show = app.add_subcommand("show", "print basis, brackets and known families");
  show->add_option("name", show_src.catalog, "catalog entry");
  show_src.attach(show);

  Source chk_src;
  auto* chk = app.add_subcommand("check-algebra", "closure, structure constants, Jacobi and center");
  chk_src.attach(chk);

  SymmetrizeOpts sym;
  auto* symc = app.add_subcommand("symmetrize", "integrate the symmetry system and verify it with the bracket oracle");
  sym.src.attach(symc);
  symc->add_option("--b0", sym.b0, "gauge b0(t); h = -b0")->capture_default_str();
  symc->add_option("--t0", sym.t0)->capture_default_str();
  symc->add_option("--t1", sym.t1)->capture_default_str();
  symc->add_option("--step", sym.step)->capture_default_str();
  symc->add_option("--f-init", sym.f_init, "f0..fr at t0, comma separated (default 1,0,...,0)");
  symc->add_option("--tol", sym.tol, "residual tolerance")->capture_default_str();
  symc->add_option("--nt", sym.nt, "grid times")->capture_default_str();
  symc->add_option("--nx", sym.nx, "grid state points")->capture_default_str();
  symc->add_option("--csv", sym.csv, "trajectory CSV");
  symc->add_option("--report", sym.report, "JSON report");
  symc->add_option("--gnuplot", sym.gnuplot, "gnuplot script for the CSV");

  VerifyOpts ver;
  auto* verc = app.add_subcommand("verify", "check closed-form symmetry candidates");
  ver.src.attach(verc);
  verc->add_option("--family", ver.family, "known family (default: all)");
  verc->add_option("--candidate", ver.candidate, "f0;f1;...;fr as expressions in t");
  verc->add_option("--t0", ver.t0)->capture_default_str();
  verc->add_option("--t1", ver.t1)->capture_default_str();
  verc->add_option("--tol", ver.tol)->capture_default_str();
  verc->add_option("--nt", ver.nt)->capture_default_str();
  verc->add_option("--nx", ver.nx)->capture_default_str();
  verc->add_option("--x0", ver.x0, "also run the flow-transport check from this initial state");
  verc->add_option("--eps", ver.eps, "transport parameter")->capture_default_str();
  verc->add_option("--span", ver.span, "length of the transported solution")->capture_default_str();
  verc->add_option("--step", ver.step)->capture_default_str();
  verc->add_option("--report", ver.report, "JSON report");

  IntegrateOpts integ;
  auto* intc = app.add_subcommand("integrate", "integrate the Lie system itself");
  integ.src.attach(intc);
  intc->add_option("--x0", integ.x0, "initial state, comma separated")->required();
  intc->add_option("--t0", integ.t0)->capture_default_str();
  intc->add_option("--t1", integ.t1)->capture_default_str();
  intc->add_option("--step", integ.step)->capture_default_str();
  intc->add_option("--csv", integ.csv);
  intc->add_option("--gnuplot", integ.gnuplot);

  PdeOpts pde;
  auto* pdec = app.add_subcommand("pde", "curvature, path independence and symmetry oracles of a PDE Lie system");
  pde.src.attach(pdec);
  pdec->add_option("--path", pde.path, "path JSON {\"waypoints\": [...], \"steps\": N}");
  pdec->add_option("--x0", pde.x0);
  pdec->add_option("--f-init", pde.f_init, "symmetry-system initial values f1..fr (default all 1)");
  pdec->add_option("--steps", pde.steps, "steps per path segment")->capture_default_str();
  pdec->add_option("--tol", pde.tol, "curvature tolerance")->capture_default_str();
  pdec->add_option("--path-tol", pde.path_tol, "endpoint agreement tolerance")->capture_default_str();
  pdec->add_option("--csv", pde.csv);
  pdec->add_option("--report", pde.report);
  pdec->add_option("--gnuplot", pde.gnuplot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    std::uint64_t seed = resolve_seed(seed_flag);
    if (app.got_subcommand("list")) return cmd_list(out);
    if (show->parsed()) return cmd_show(show_src, out);
    if (chk->parsed()) return cmd_check_algebra(chk_src, out);
    if (symc->parsed()) return cmd_symmetrize(sym, seed, out);
    if (verc->parsed()) return cmd_verify(ver, seed, out);
    if (intc->parsed()) return cmd_integrate(integ, out);
    if (pdec->parsed()) return cmd_pde(pde, seed, out);
  } catch (const Error& e) {
    err << "liesym: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "liesym: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace liesym
