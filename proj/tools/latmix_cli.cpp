// latmix <subcommand> <config> [-o DIR]
#include "config.hpp"

#include "latmix/bounds.hpp"
#include "latmix/celltension.hpp"
#include "latmix/designer.hpp"
#include "latmix/field_io.hpp"
#include "latmix/localizer.hpp"
#include "latmix/mincut.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace latmix;
using latmix::cli::Config;
using latmix::cli::split;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;

// ---------------------------------------------------------------------------
// output

class Output {
 public:
  Output(fs::path dir, const Config& config, std::string subcommand)
      : dir_(std::move(dir)), config_(config), subcommand_(std::move(subcommand)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir_.string() + ": " + ec.message());
  }

  void emit(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
    out << content;
    files_[name] = hex64(fnv1a64(content));
  }
  void emit_json(const std::string& name, const json& j) { emit(name, j.dump(2) + "\n"); }

  void manifest() {
    json m;
    m["tool"] = "latmix";
    m["version"] = LATMIX_VERSION;
    m["subcommand"] = subcommand_;
    m["config_hash"] = hex64(fnv1a64(config_.canonical()));
    m["config"] = config_.values();
    json outs = json::array();
    for (const auto& [name, hash] : files_) outs.push_back({{"file", name}, {"fnv1a64", hash}});
    m["outputs"] = outs;
    const std::string text = m.dump(2) + "\n";
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write manifest");
    out << text;
  }

 private:
  fs::path dir_;
  const Config& config_;
  std::string subcommand_;
  std::map<std::string, std::string> files_;
};

std::string csv_row(std::initializer_list<double> xs) {
  std::string out;
  for (double x : xs) {
    if (!out.empty()) out += ',';
    out += format_real(x);
  }
  return out + "\n";
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json point_json(const Point& p) { return std::vector<int>(p.data(), p.data() + p.size()); }

// ---------------------------------------------------------------------------
// field from config

Point parse_tuple(const std::string& s) {
  std::string t = cli::trim(s);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw Error(ErrorKind::Parse, "expected (a,b,...): '" + s + "'");
  const auto parts = split(t.substr(1, t.size() - 2), ',');
  Point p(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    try {
      p[static_cast<Eigen::Index>(k)] = std::stoi(parts[k]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad integer in '" + s + "'");
    }
  }
  return p;
}

std::vector<double> broadcast(const Config& c, const std::string& key, double fallback, std::size_t n) {
  auto v = c.reals(key, {fallback});
  if (v.size() == 1) v.assign(n, v[0]);
  if (v.size() != n) throw Error(ErrorKind::Parse, "config key '" + key + "' needs 1 or " + std::to_string(n) + " values");
  return v;
}

InteractionSet interactions_from(const Config& c) {
  const int d = static_cast<int>(c.integer("dim", 2));
  const std::string spec = c.str("V", "nn");
  std::vector<Point> dirs;
  if (spec == "nn") {
    for (int j = 0; j < d; ++j) {
      Point e = Point::Zero(d);
      e[j] = 1;
      dirs.push_back(e);
    }
  } else if (spec == "nn+diag") {
    if (d != 2) throw Error(ErrorKind::UnsupportedInput, "V=nn+diag is two-dimensional");
    dirs = {make_point({1, 0}), make_point({0, 1}), make_point({1, 1}), make_point({1, -1})};
  } else {
    for (const auto& t : split(spec, ',')) dirs.push_back(parse_tuple(t));
  }
  const auto alpha = broadcast(c, "alpha", 1.0, dirs.size());
  const auto beta = broadcast(c, "beta", 2.0, dirs.size());
  return InteractionSet(d, dirs, alpha, beta);
}

BondField field_from(const Config& c, const fs::path& base) {
  if (c.has("field_file")) return read_field_file((base / c.str("field_file")).string());
  const InteractionSet V = interactions_from(c);
  const int T = static_cast<int>(c.integer("period", 1));
  const std::string kind = c.str("field_kind", "homogeneous-alpha");
  if (kind == "homogeneous-alpha") return make_field(HomogeneousSpec{Bond::Alpha}, V, T);
  if (kind == "homogeneous-beta") return make_field(HomogeneousSpec{Bond::Beta}, V, T);
  if (kind == "random") {
    if (!c.has("seed")) throw Error(ErrorKind::Parse, "random fields need a seed");
    return make_field(RandomSpec{broadcast(c, "theta", 0.5, V.size()), static_cast<std::uint64_t>(c.integer("seed"))}, V, T);
  }
  if (kind == "laminate") {
    LaminateSpec s;
    for (double k : c.reals("laminate_directions", {0})) s.bond_directions.push_back(static_cast<std::size_t>(k));
    s.axis = static_cast<int>(c.integer("laminate_axis", 1));
    s.alpha_width = static_cast<int>(c.integer("laminate_alpha_width", 1));
    s.beta_width = static_cast<int>(c.integer("laminate_beta_width", 1));
    return make_field(s, V, T);
  }
  throw Error(ErrorKind::Parse, "unknown field_kind '" + kind + "'");
}

std::vector<Vec> directions_from(const Config& c, int dim) {
  if (dim == 3) return cube_directions();
  return evenly_spaced_directions(static_cast<int>(c.integer("directions", 64)));
}

Schedule schedule_from(const Config& c, int dim) {
  Schedule s = Schedule::standard(dim);
  s.radii = c.reals("radii", s.radii);
  if (c.has("directions") || dim != 2) s.directions = directions_from(c, dim);
  s.extrapolation_order = static_cast<int>(c.integer("extrapolation", 1));
  return s;
}

std::vector<Rational> rationals(const Config& c, const std::string& key, std::size_t n) {
  std::vector<Rational> out;
  for (const auto& s : split(c.str(key), ',')) out.push_back(Rational::parse(s));
  if (out.size() == 1) out.assign(n, out[0]);
  if (out.size() != n) throw Error(ErrorKind::Parse, "config key '" + key + "' needs 1 or " + std::to_string(n) + " values");
  return out;
}

// ---------------------------------------------------------------------------
// shared emitters

std::string sweep_csv(const Sweep& sw) {
  std::string out = "angle,nu_x,nu_y,phi_hat,error_gauge,polygon_x,polygon_y\n";
  for (std::size_t k = 0; k < sw.estimates.size(); ++k) {
    const auto& e = sw.estimates[k];
    out += csv_row({sw.angles.empty() ? 0.0 : sw.angles[k], e.nu[0], e.nu.size() > 1 ? e.nu[1] : 0.0, e.phi_hat,
                    e.error_gauge, sw.polygon.empty() ? 0.0 : sw.polygon[k][0],
                    sw.polygon.empty() ? 0.0 : sw.polygon[k][1]});
  }
  return out;
}

std::string polygon_csv(const std::vector<Vec>& pts) {
  std::string out = "x,y\n";
  for (const Vec& p : pts) out += csv_row({p[0], p[1]});
  return out;
}

std::vector<Vec> sublevel_polygon(const std::function<double(const Vec&)>& phi, const std::vector<Vec>& dirs) {
  std::vector<Vec> out;
  for (const Vec& nu : dirs) out.push_back(nu / phi(nu));
  return out;
}

json estimate_json(const TensionEstimate& e) {
  return {{"nu", vec_json(e.nu)}, {"method", e.method}, {"radii", e.radii}, {"raw", e.raw},
          {"normalized", e.normalized}, {"phi_hat", e.phi_hat}, {"error_gauge", e.error_gauge}};
}

// ---------------------------------------------------------------------------
// subcommands

int run_tension(const Config& c, const fs::path& base, Output& out) {
  const BondField field = field_from(c, base);
  const Schedule s = schedule_from(c, field.dim());
  const std::string estimator = c.str("estimator", "ball");
  json j;
  j["field_fingerprint"] = field_fingerprint(field);
  if (estimator == "affine") {
    const int K = static_cast<int>(c.integer("affine_shifts", 4));
    const int L = static_cast<int>(c.integer("affine_torus", 4));
    json rows = json::array();
    std::string csv = "nu_x,nu_y,phi_hat,error_gauge\n";
    for (const Vec& nu : s.directions) {
      const auto e = estimate_phi_affine(field, nu, K, L);
      rows.push_back(estimate_json(e));
      csv += csv_row({e.nu[0], e.nu.size() > 1 ? e.nu[1] : 0.0, e.phi_hat, e.error_gauge});
    }
    j["estimates"] = rows;
    out.emit("affine.csv", csv);
  } else if (estimator == "ball") {
    const Sweep sw = direction_sweep(field, s);
    json rows = json::array();
    for (const auto& e : sw.estimates) rows.push_back(estimate_json(e));
    j["estimates"] = rows;
    j["warnings"] = sw.warnings;
    j["max_radius"] = sw.max_radius;
    out.emit("sweep.csv", sweep_csv(sw));
    if (!sw.polygon.empty()) out.emit("polygon.csv", polygon_csv(sw.polygon));
  } else {
    throw Error(ErrorKind::Parse, "estimator must be ball or affine");
  }
  out.emit_json("tension.json", j);
  return kExitOk;
}

int run_bounds(const Config& c, const fs::path& base, Output& out) {
  const BondField field = field_from(c, base);
  const InteractionSet& V = field.interactions();
  const auto dirs = directions_from(c, field.dim());
  std::string csv = "nu_x,nu_y,nu_z,trivial_lower,projection,line,averaging,trivial_upper\n";
  for (const auto& r : bounds_table(field, dirs))
    csv += csv_row({r.nu[0], r.nu.size() > 1 ? r.nu[1] : 0.0, r.nu.size() > 2 ? r.nu[2] : 0.0, r.trivial_lower,
                    r.projection, r.line, r.averaging, r.trivial_upper});
  out.emit("bounds.csv", csv);

  json j;
  j["field_fingerprint"] = field_fingerprint(field);
  if (field.is_periodic()) {
    const VolumeFractions f = volume_fractions(field);
    j["theta_xi"] = f.per_direction;
    j["theta"] = f.total;
    j["line_coefficients"] = line_coefficients(field);
    j["projection_coefficients"] = projection_coefficients(field, canonical_basis(field.dim()), Point::Zero(field.dim()));
    const CrystallineDensity avg = averaging_density(field);
    const auto m = membership_test([&](const Vec& nu) { return avg(nu); }, f.total, V);
    j["averaging_membership"] = {{"feasible", m.feasible}, {"required", m.required}, {"certificate", m.certificate}};
  }
  out.emit_json("bounds.json", j);
  return kExitOk;
}

json audit_json(const DirectionAudit& a) {
  json basis = json::array();
  for (const Point& b : a.basis) basis.push_back(point_json(b));
  json starts = json::array();
  for (const Point& b : a.alpha_line_starts) starts.push_back(point_json(b));
  return {{"direction", a.direction},       {"basis", basis},
          {"lines", a.lines},               {"alpha_lines", a.alpha_lines},
          {"alpha_line_starts", starts},    {"C", a.C},
          {"literal_card", a.literal_card}, {"designated_alpha", a.designated_alpha},
          {"alpha_capacity", a.alpha_capacity}, {"beta_line_sites", a.beta_line_sites},
          {"beta_target", a.beta_target}};
}

DesignTarget target_from(const Config& c, const InteractionSet& V) {
  DesignTarget t;
  t.theta = rationals(c, c.has("theta_xi") ? "theta_xi" : "theta", V.size());
  t.t = c.has("t") ? rationals(c, "t", V.size()) : t.theta;
  return t;
}

int run_design(const Config& c, const fs::path&, Output& out) {
  const InteractionSet V = interactions_from(c);
  const DesignTarget target = target_from(c, V);
  const DesignResult r = design_microstructure(target, V, static_cast<int>(c.integer("max_period", 512)));
  const auto radii = c.reals("verify_radii", {16, 32, 64, 128});
  const DesignVerification v = verify_design(r, radii, c.real("tension_tolerance", 0.10));

  out.emit("field.txt", serialize_field(r.field));
  json j;
  j["period"] = r.period;
  j["field_fingerprint"] = field_fingerprint(r.field);
  std::vector<std::string> ts, ths;
  for (const auto& q : target.t) ts.push_back(q.str());
  for (const auto& q : target.theta) ths.push_back(q.str());
  j["target"] = {{"t", ts}, {"theta", ths}};
  j["psi_coefficients"] = target.coefficients(V);
  json audits = json::array();
  for (const auto& a : r.audit) audits.push_back(audit_json(a));
  j["audit"] = audits;
  json dirs = json::array();
  for (const Vec& d : v.directions) dirs.push_back(vec_json(d));
  j["verification"] = {{"fractions_exact", v.fractions_exact},
                       {"line_fractions_exact", v.line_fractions_exact},
                       {"directions", dirs},
                       {"psi", v.psi},
                       {"projection", v.projection},
                       {"phi_hat", v.phi_hat},
                       {"phi_last", v.phi_last},
                       {"projection_ok", v.projection_ok},
                       {"tension_ok", v.tension_ok},
                       {"membership_feasible", v.membership.feasible},
                       {"ok", v.ok},
                       {"failures", v.failures}};
  out.emit_json("audit.json", j);
  if (V.dim() == 2) {
    const auto dirs2 = evenly_spaced_directions(static_cast<int>(c.integer("directions", 64)));
    out.emit("psi_polygon.csv", polygon_csv(sublevel_polygon([&](const Vec& nu) { return r.psi(nu); }, dirs2)));
    if (c.str("estimate_polygon", "no") == "yes") {
      Schedule s;
      s.radii = radii;
      s.directions = dirs2;
      const Sweep sw = direction_sweep(r.field, s);
      out.emit("polygon.csv", polygon_csv(sw.polygon));
    }
  }
  return v.ok ? kExitOk : kExitVerification;
}

int run_sweep(const Config& c, const fs::path&, Output& out) {
  const InteractionSet V = interactions_from(c);
  if (V.dim() != 2) throw Error(ErrorKind::UnsupportedInput, "sweep polygons are two-dimensional");
  const auto dirs = evenly_spaced_directions(static_cast<int>(c.integer("directions", 64)));
  const std::string thetas = c.str("thetas", "1/4,1/2,3/4");
  const bool estimate = c.str("estimate_polygon", "no") == "yes";
  Schedule s;
  s.radii = c.reals("radii", {16, 32, 64});
  s.directions = dirs;

  out.emit("alpha_polygon.csv", polygon_csv(sublevel_polygon([&](const Vec& nu) { return V.alpha_tension(nu); }, dirs)));
  out.emit("beta_polygon.csv", polygon_csv(sublevel_polygon([&](const Vec& nu) { return V.beta_tension(nu); }, dirs)));
  json rows = json::array();
  int index = 0;
  for (const auto& text : split(thetas, ',')) {
    const Rational q = Rational::parse(text);
    const DesignResult r = design_microstructure(DesignTarget::uniform(V.size(), q), V,
                                                 static_cast<int>(c.integer("max_period", 512)));
    const std::string tag = std::to_string(index++);
    out.emit("design_" + tag + "_field.txt", serialize_field(r.field));
    out.emit("design_" + tag + "_psi_polygon.csv",
             polygon_csv(sublevel_polygon([&](const Vec& nu) { return r.psi(nu); }, dirs)));
    json row{{"theta", q.str()}, {"period", r.period}, {"psi_coefficients", DesignTarget::uniform(V.size(), q).coefficients(V)}};
    if (estimate) {
      const Sweep sw = direction_sweep(r.field, s);
      out.emit("design_" + tag + "_polygon.csv", polygon_csv(sw.polygon));
      std::vector<double> phi;
      for (const auto& e : sw.estimates) phi.push_back(e.phi_hat);
      row["phi_hat"] = phi;
    }
    rows.push_back(row);
  }
  out.emit_json("sweep.json", {{"designs", rows}});
  return kExitOk;
}

CellFill fill_from(const std::string& s, const InteractionSet& V, const fs::path& base) {
  if (s == "alpha") return HomogeneousSpec{Bond::Alpha};
  if (s == "beta") return HomogeneousSpec{Bond::Beta};
  if (s.rfind("file:", 0) == 0) return read_field_file((base / s.substr(5)).string());
  return DesignTarget::uniform(V.size(), Rational::parse(s));
}

int run_localize(const Config& c, const fs::path& base, Output& out) {
  const InteractionSet V = interactions_from(c);
  const int d = V.dim();
  const auto box = c.reals("domain", {0, 0, 2, 1});
  if (box.size() != static_cast<std::size_t>(2 * d)) throw Error(ErrorKind::Parse, "domain needs 2d numbers: lo..., hi...");
  Domain dom{Vec::Map(box.data(), d), Vec::Map(box.data() + d, d)};
  std::vector<CellFill> cells;
  for (const auto& s : split(c.str("cell_fill", "alpha,beta"), ',')) cells.push_back(fill_from(s, V, base));
  const MacroProfile profile(V, dom, static_cast<int>(c.integer("level", 0)), std::move(cells));
  const double eps = c.real("epsilon", 1.0 / 128);
  const double delta = c.real("delta", 0.1);
  const double rho = c.real("rho", 0.25);
  const double kappa = c.real("kappa", kSlackKappa);
  const auto dirs = directions_from(c, d);
  std::vector<Vec> half;
  for (const Vec& nu : dirs)
    if (canonical_sign(nu) > 0) half.push_back(nu);

  const SynthesizedField synth = synthesize_field(profile, eps, delta);
  const LocalReport rep = sandwich_report(synth, profile, half, rho, kappa);

  std::string cells_csv = "cell,center_x,center_y,theta_profile,theta_hat\n";
  for (std::size_t n = 0; n < profile.cells().size(); ++n) {
    const Vec x = profile.cell_center(n);
    double tp = 0.0;
    for (double t : profile.cell_theta(n)) tp += t / static_cast<double>(V.size());
    cells_csv += std::to_string(n) + "," + csv_row({x[0], d > 1 ? x[1] : 0.0, tp, rep.grid.theta[n].value_or(NAN)});
  }
  out.emit("cells.csv", cells_csv);
  std::string probes_csv = "cell,x,y,nu_x,nu_y,rho,value,lower,upper,slack,ok\n";
  json probes = json::array();
  for (const auto& p : rep.probes) {
    probes_csv += std::to_string(p.cell) + "," +
                  csv_row({p.probe.x[0], d > 1 ? p.probe.x[1] : 0.0, p.probe.nu[0], d > 1 ? p.probe.nu[1] : 0.0,
                           p.probe.rho, p.probe.value, p.lower, p.upper, p.slack, p.ok ? 1.0 : 0.0});
    probes.push_back({{"cell", p.cell}, {"x", vec_json(p.probe.x)}, {"nu", vec_json(p.probe.nu)}, {"rho", p.probe.rho},
                      {"value", p.probe.value}, {"lower", p.lower}, {"upper", p.upper}, {"slack", p.slack}, {"ok", p.ok}});
  }
  out.emit("probes.csv", probes_csv);

  json j;
  j["epsilon"] = eps;
  j["delta"] = delta;
  j["periods"] = synth.periods;
  j["field_fingerprint"] = field_fingerprint(synth.field);
  json cells_json = json::array();
  for (std::size_t n = 0; n < rep.grid.theta.size(); ++n)
    cells_json.push_back({{"cell", n}, {"theta_xi", rep.grid.theta_xi[n] ? json(*rep.grid.theta_xi[n]) : json()},
                          {"theta", rep.grid.theta[n] ? json(*rep.grid.theta[n]) : json()}});
  j["cells"] = cells_json;
  j["probes"] = probes;
  j["sandwich_ok"] = rep.ok;

  if (c.str("ladder", "no") == "yes") {
    json ladders = json::array();
    std::string csv = "cell,nu_x,nu_y,epsilon,value\n";
    const auto eps_ladder = default_epsilon_ladder(dom);
    for (std::size_t n = 0; n < profile.cells().size(); ++n) {
      for (const Vec& nu : half) {
        const Ladder L = probe_ladder(profile, delta, profile.cell_center(n), nu, rho, eps_ladder);
        json entries = json::array();
        for (const auto& e : L.entries) {
          entries.push_back({{"epsilon", e.epsilon}, {"value", e.value ? json(*e.value) : json()}});
          if (e.value) csv += std::to_string(n) + "," + csv_row({L.nu[0], d > 1 ? L.nu[1] : 0.0, e.epsilon, *e.value});
        }
        ladders.push_back({{"cell", n}, {"nu", vec_json(L.nu)}, {"entries", entries}, {"spread", L.spread}});
      }
    }
    j["ladders"] = ladders;
    out.emit("ladder.csv", csv);
  }
  out.emit_json("local.json", j);
  return rep.ok ? kExitOk : kExitVerification;
}

int run_verify(const Config& c, const fs::path&, Output& out) {
  const InteractionSet V = interactions_from(c);
  const int d = V.dim();
  const int cases = static_cast<int>(c.integer("cases", 100));
  const int window = static_cast<int>(c.integer("window", 3));
  const auto seed = static_cast<std::uint64_t>(c.integer("seed", 1));
  SplitMix64 rng(seed);
  std::string csv = "case,period,value_bk,value_dinic,value_brute,energy,ok\n";
  int failures = 0;
  for (int k = 0; k < cases; ++k) {
    const int T = 2 << rng.below(2);
    const BondField f = make_field(RandomSpec{std::vector<double>(V.size(), 0.5), seed * 1000003 + static_cast<std::uint64_t>(k)}, V, T);
    const Box w(Point::Zero(d), Point::Constant(d, window));
    std::vector<Point> region;
    w.for_each([&](std::size_t, const Point& p) { region.push_back(p); });
    Vec nu(d);
    for (int j = 0; j < d; ++j) nu[j] = static_cast<double>(rng.below(2001)) / 1000.0 - 1.0;
    if (nu.norm() < 1e-3) nu = Vec::Unit(d, 0);
    nu.normalize();
    const HalfSpaceTrace trace(Vec::Constant(d, 0.5 * window), nu);
    const CutInstance inst = build_instance(f, region, trace);
    const CutResult bk = solve_min_cut(inst, Solver::BoykovKolmogorov);
    const CutResult dn = solve_min_cut(inst, Solver::Dinic);
    const CutResult bf = brute_force_ground_state(f, region, trace);
    const double e = evaluate_energy(f, bk.state, trace, region, BondScope::TouchingRegion);
    const bool ok = bk.value == bf.value && dn.value == bf.value && std::abs(e - bk.value) <= 1e-9 * (1.0 + e);
    if (!ok) ++failures;
    csv += std::to_string(k) + "," + std::to_string(T) + "," + csv_row({bk.value, dn.value, bf.value, e, ok ? 1.0 : 0.0});
  }
  out.emit("verify.csv", csv);
  out.emit_json("verify.json", {{"cases", cases}, {"window", window}, {"failures", failures}, {"ok", failures == 0}});
  return failures == 0 ? kExitOk : kExitVerification;
}

std::set<std::string> allowed_keys(const std::string& sub) {
  std::set<std::string> keys{"output", "dim", "V", "alpha", "beta"};
  const std::set<std::string> field{"field_file", "field_kind", "period", "theta", "seed", "laminate_directions",
                                    "laminate_axis", "laminate_alpha_width", "laminate_beta_width"};
  auto add = [&](std::initializer_list<std::string> ks) { keys.insert(ks.begin(), ks.end()); };
  if (sub == "tension") {
    keys.insert(field.begin(), field.end());
    add({"radii", "directions", "extrapolation", "estimator", "affine_shifts", "affine_torus"});
  } else if (sub == "bounds") {
    keys.insert(field.begin(), field.end());
    add({"directions"});
  } else if (sub == "design") {
    add({"t", "theta", "theta_xi", "max_period", "verify_radii", "tension_tolerance", "directions", "estimate_polygon"});
  } else if (sub == "sweep") {
    add({"thetas", "max_period", "radii", "directions", "estimate_polygon"});
  } else if (sub == "localize") {
    add({"domain", "level", "cell_fill", "epsilon", "delta", "rho", "kappa", "directions", "ladder"});
  } else if (sub == "verify") {
    add({"cases", "window", "seed"});
  }
  return keys;
}

void print_error(const std::string& kind, const std::string& message) {
  std::string m = message;
  for (char& ch : m)
    if (ch == '\n' || ch == '"') ch = '\'';
  std::fprintf(stderr, "error kind=%s message=\"%s\"\n", kind.c_str(), m.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latmix: homogenized surface tensions of two-phase lattice bond mixtures"};
  app.set_version_flag("--version", LATMIX_VERSION);
  std::string config_path;
  std::string out_dir;
  using Runner = int (*)(const Config&, const fs::path&, Output&);
  const std::vector<std::tuple<std::string, std::string, Runner>> commands{
      {"tension", "direction sweep of the ball-problem estimator", run_tension},
      {"bounds", "trivial, projection, line and averaging bounds", run_bounds},
      {"design", "periodic microstructure for a crystalline target, with audit", run_design},
      {"localize", "profile synthesis, coarse graining and local probes", run_localize},
      {"verify", "min-cut against brute force on small windows", run_verify},
      {"sweep", "theta grid of designs with sublevel polygons", run_sweep},
  };
  for (const auto& [name, help, run] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "key=value configuration file")->required();
    sub->add_option("-o,--out", out_dir, "output directory (default: config key 'output', else out/<subcommand>)");
  }
  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kExitConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const Config config = Config::load(config_path);
    const fs::path base = fs::absolute(config_path).parent_path();
    fs::path dir = out_dir.empty() ? fs::path(config.str("output", "out/" + sub)) : fs::path(out_dir);
    if (out_dir.empty() && dir.is_relative() && config.has("output")) dir = (base / dir).lexically_normal();
    Runner run = nullptr;
    for (const auto& [name, help, r] : commands)
      if (name == sub) run = r;
    config.check_keys(allowed_keys(sub));
    Output out(dir, config, sub);
    const int status = run(config, base, out);
    out.manifest();
    std::printf("%s: %s (%s)\n", sub.c_str(), status == kExitOk ? "ok" : "verification failed", dir.string().c_str());
    return status;
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitConfig;
  }
}
