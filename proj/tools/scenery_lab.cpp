#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenery/cones.hpp"
#include "scenery/constructions.hpp"
#include "scenery/dimension.hpp"
#include "scenery/parallel.hpp"
#include "scenery/porosity.hpp"
#include "scenery/report.hpp"
#include "scenery/scenery.hpp"
#include "scenery/spec_io.hpp"

using namespace scenery;

namespace {

[[noreturn]] void config_fail(const std::string& what) { fail(ErrorCode::config_error, what); }

enum class Kind { real, integer, text, points, spec };

struct Param {
  std::string key;
  Kind kind;
  json fallback;  // null: required unless the command says otherwise
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
};

const Param kMeasure{"measure", Kind::spec, nullptr, "measure spec: JSON file path or inline JSON"};
const Param kSeed{"seed", Kind::integer, nullptr, "RNG seed"};
const Param kX{"x", Kind::points, json::array(), "base point(s) \"a,b;c,d\"; default samples --points"};
const Param kPoints{"points", Kind::integer, 1, "number of sampled base points when --x is absent"};
const Param kDt{"dt", Kind::real, kDefaultDt, "time step of the scale grid"};
const Param kRange[] = {{"r_min", Kind::real, 0x1.0p-28, "smallest radius"},
                        {"r_max", Kind::real, 0x1.0p-4, "largest radius"},
                        {"n_scales", Kind::integer, 24, "number of log-spaced radii"}};

std::vector<Command> commands() {
  const double t36 = 36 * std::numbers::ln2;
  return {
      {"build-measure", "validate a measure spec and write its canonical form",
       {kMeasure, {"samples", Kind::integer, 0, "points to sample into samples.csv"}, {"seed", Kind::integer, 0, "RNG seed"}}},
      {"cone-constant", "Monte Carlo estimate of the cone constant eps(d,k,alpha)",
       {{"dim", Kind::integer, 2, "ambient dimension"},
        {"k", Kind::integer, 1, "codimension of V"},
        {"alpha", Kind::real, 0.5, "cone aperture"},
        {"samples", Kind::integer, 1000000, "Monte Carlo samples"},
        kSeed}},
      {"scan-cones", "fraction of scales with conical density above eps",
       {kMeasure, kX, kPoints, kSeed, {"T", Kind::real, t36, "scan length"}, kDt,
        {"alpha", Kind::real, 0.5, "cone aperture"},
        {"k", Kind::integer, 1, "codimension of V"},
        {"eps", Kind::real, 0.01, "density threshold"},
        {"net", Kind::integer, 360, "lines (d=2) or max direction pairs (d=3)"}}},
      {"scan-porosity", "fraction of scales carrying an (alpha, eps) pore",
       {kMeasure, kX, kPoints, kSeed, {"T", Kind::real, t36, "scan length"}, kDt,
        {"alpha", Kind::real, 0.22, "relative hole size"},
        {"eps", Kind::real, 1e-6, "mass threshold of a hole"},
        {"grid", Kind::integer, 32, "pore centres per radius"}}},
      {"scan-annular", "largest annular pores at dyadic scales",
       {kMeasure, kX, kPoints, kSeed, {"rho", Kind::real, 1.0, "annulus parameter in (0,1]"},
        {"eps", Kind::real, 1e-6, "mass threshold of a hole"},
        {"levels", Kind::integer, 8, "scales 2^-1 .. 2^-levels"},
        {"grid", Kind::integer, 32, "pore centres per radius"}}},
      {"dim-local", "local dimensions by log-log regression",
       {kMeasure, kX, kPoints, kSeed, kRange[0], kRange[1], kRange[2]}},
      {"dim-fd", "dimension of the scenery distribution along orbits",
       {kMeasure, kX, kPoints, kSeed, {"T", Kind::real, t36, "scan length"},
        {"r", Kind::real, 0.5, "radius of the observable"}, kDt}},
      {"dim-spectrum", "lower/upper Hausdorff and packing dimensions",
       {kMeasure, {"samples", Kind::integer, 200, "sampled points"}, kSeed, kRange[0], kRange[1], kRange[2]}},
      {"density-scan", "inf and sup of mu(B(x,r)) / r^s over scales",
       {kMeasure, kX, kPoints, kSeed, {"s", Kind::real, 1.0, "density exponent"}, kRange[0], kRange[1],
        kRange[2]}},
      {"check-rectifiability", "cone criterion for rectifiability on sampled points",
       {kMeasure, {"samples", Kind::integer, 500, "sampled points"}, kSeed,
        {"alpha", Kind::real, 0.5, "cone aperture"},
        {"r", Kind::real, 1.0, "cone radius"},
        {"net", Kind::integer, 360, "lines of the planar net"}}},
      {"build-extremal", "spliced extremal measures",
       {{"family", Kind::text, "conical", "conical (uniform/plane) or porous (uniform/Cantor)"},
        {"dim", Kind::integer, 2, "ambient dimension"},
        {"k", Kind::integer, 1, "conical: codimension of the plane"},
        {"s", Kind::real, -1.0, "conical: target dimension in [d-k, d]"},
        {"p", Kind::real, -1.0, "porous: frequency of porous levels"},
        {"q", Kind::real, -1.0, "frequency of B levels (overrides s and p)"},
        {"alpha", Kind::real, 0.25, "porous: Salli parameter of the Cantor levels"},
        {"first_block", Kind::integer, 18, "length of the first block"},
        {"depth", Kind::integer, 48, "max depth"}}},
      {"salli", "Salli dimension of the alpha-porous Cantor set",
       {{"alpha", Kind::real, nullptr, "porosity in (0, 1/2)"},
        {"box_depth", Kind::integer, 0, "cross-check by box counting to this depth"}}},
  };
}

const Command& find_command(const std::string& name) {
  static const std::vector<Command> all = commands();
  for (const Command& c : all) {
    if (c.name == name) return c;
  }
  config_fail("unknown command '" + name + "'");
}

bool stochastic(const Command& c, const json& config) {
  if (c.name == "cone-constant" || c.name == "dim-spectrum" || c.name == "check-rectifiability") return true;
  for (const Param& p : c.params) {
    if (p.key == "x") return config.at("x").empty();
  }
  return false;
}

std::string flag_of(const std::string& key) {
  std::string f = key;
  for (char& ch : f) ch = ch == '_' ? '-' : ch;
  return f;
}

std::vector<double> numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      config_fail("not a number: '" + item + "'");
    }
  }
  return out;
}

json read_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_json_text(ss.str());
}

// Flag text -> config value.
json convert(const Param& p, const std::string& text) {
  switch (p.kind) {
    case Kind::real: {
      const auto v = numbers(text);
      if (v.size() != 1) config_fail("--" + flag_of(p.key) + " takes one number");
      return v[0];
    }
    case Kind::integer: {
      const auto v = numbers(text);
      if (v.size() != 1 || v[0] != std::floor(v[0])) config_fail("--" + flag_of(p.key) + " takes an integer");
      return static_cast<long long>(v[0]);
    }
    case Kind::text: return text;
    case Kind::points: {
      json pts = json::array();
      std::stringstream ss(text);
      std::string one;
      while (std::getline(ss, one, ';')) pts.push_back(numbers(one));
      return pts;
    }
    case Kind::spec: {
      const auto start = text.find_first_not_of(" \t\n");
      if (start != std::string::npos && text[start] == '{') return read_json_text(text);
      return read_json_file(text);
    }
  }
  return nullptr;
}

// Fills defaults, rejects unknown keys and checks value types.
json normalize(const Command& c, json config) {
  if (!config.is_object()) config_fail("config must be a JSON object");
  config.erase("command");
  for (const auto& [key, _] : config.items()) {
    bool known = false;
    for (const Param& p : c.params) known = known || p.key == key;
    if (!known) config_fail("unknown parameter '" + key + "' for " + c.name);
  }
  for (const Param& p : c.params) {
    if (!config.contains(p.key)) {
      if (p.fallback.is_null() && !(p.key == "seed")) config_fail("missing --" + flag_of(p.key));
      if (!p.fallback.is_null()) config[p.key] = p.fallback;
      continue;
    }
    const json& v = config[p.key];
    const bool ok = (p.kind == Kind::real && v.is_number()) || (p.kind == Kind::integer && v.is_number_integer()) ||
                    (p.kind == Kind::text && v.is_string()) || (p.kind == Kind::points && v.is_array()) ||
                    (p.kind == Kind::spec && v.is_object());
    if (!ok) config_fail("parameter '" + p.key + "' has the wrong type");
  }
  if (stochastic(c, config) && !config.contains("seed")) config_fail(c.name + " needs --seed");
  config["command"] = c.name;
  return config;
}

struct Context {
  json config;
  std::string out_dir;
  std::map<std::string, std::string> files;  // name -> content

  double real(const std::string& k) const { return config.at(k).get<double>(); }
  long long integer(const std::string& k) const { return config.at(k).get<long long>(); }
  std::uint64_t seed() const { return config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0; }

  double real_in(const std::string& k, double lo, double hi) const {
    const double v = real(k);
    if (!(v >= lo && v <= hi)) config_fail(k + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }
  long long int_in(const std::string& k, long long lo, long long hi) const {
    const long long v = integer(k);
    if (v < lo || v > hi) config_fail(k + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  Measure measure() const { return measure_from_json(config.at("measure")); }

  std::vector<Point> base_points(const Measure& mu) const {
    std::vector<Point> pts;
    for (const auto& p : config.at("x")) {
      if (!p.is_array() || static_cast<int>(p.size()) != mu.dim()) config_fail("base point dimension mismatch");
      Point x{};
      for (int a = 0; a < mu.dim(); ++a) {
        if (!p[a].is_number()) config_fail("base point coordinates must be numbers");
        x[a] = p[a].get<double>();
      }
      pts.push_back(x);
    }
    if (pts.empty()) pts = mu.sample(static_cast<std::size_t>(int_in("points", 1, 100000)), seed());
    return pts;
  }

  ScaleRange range() const {
    ScaleRange r;
    r.r_min = real_in("r_min", 0x1.0p-60, 1.0);
    r.r_max = real_in("r_max", r.r_min, 1.0);
    r.n_scales = static_cast<int>(int_in("n_scales", 2, 4096));
    return r;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string point_cells(const Point& x, int dim) {
  std::string s;
  for (int a = 0; a < dim; ++a) s += "," + fmt(x[a]);
  return s;
}

std::string point_header(int dim) {
  std::string s;
  for (int a = 0; a < dim; ++a) s += ",x" + std::to_string(a);
  return s;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double std_error_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1) / v.size());
}

void build_measure(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  rep.set("kind", mu.kind());
  rep.set("dim", mu.dim());
  rep.set("max_depth", mu.base_max_depth());
  ctx.files["measure.json"] = measure_to_json(mu).dump(2) + "\n";
  const long long n = ctx.int_in("samples", 0, 10000000);
  if (n > 0) {
    std::string csv = "id" + point_header(mu.dim()) + "\n";
    const auto pts = mu.sample(static_cast<std::size_t>(n), ctx.seed());
    for (std::size_t i = 0; i < pts.size(); ++i) csv += std::to_string(i) + point_cells(pts[i], mu.dim()) + "\n";
    ctx.files["samples.csv"] = csv;
  }
}

void cone_constant_cmd(Context& ctx, Report& rep) {
  const int d = static_cast<int>(ctx.int_in("dim", 2, 16));
  const int k = static_cast<int>(ctx.int_in("k", 1, d - 1));
  const double alpha = ctx.real_in("alpha", 1e-9, 1.0);
  const auto n = static_cast<std::size_t>(ctx.int_in("samples", 1, 1000000000));
  const ConeConstant c = cone_constant(d, k, alpha, n, ctx.seed());
  rep.empirical("epsilon", c.value, c.std_error);
  rep.set("samples", c.samples);
}

DirectionNet net_for(const Context& ctx, int dim, int k) {
  const auto n = ctx.int_in("net", 1, 100000);
  if (dim == 2) return planar_net(static_cast<int>(n));
  if (dim == 3) return sphere_net(k, static_cast<std::size_t>(n));
  fail(ErrorCode::unsupported_kind, "cone scans need d = 2 or 3");
}

// Per-point scan shared by scan-cones and scan-porosity.
void scan_points(Context& ctx, Report& rep, const Measure& mu, const std::vector<Point>& pts,
                 const std::function<ScaleScan(const Point&, double&)>& one) {
  std::vector<ScaleScan> scans(pts.size());
  std::vector<double> fractions(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { scans[i] = one(pts[i], fractions[i]); });
  std::ostringstream csv;
  std::string per = "x_id" + point_header(mu.dim()) + ",fraction,truncated\n";
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    write_scan_csv(csv, i, scans[i], i == 0);
    per += std::to_string(i) + point_cells(pts[i], mu.dim()) + "," + fmt(fractions[i]) + "," +
           (scans[i].truncated ? "1" : "0") + "\n";
    truncated += scans[i].truncated ? 1 : 0;
  }
  rep.empirical("fraction", mean_of(fractions), std_error_of(fractions));
  rep.set("points", pts.size());
  rep.set("truncated_points", truncated);
  ctx.files["scales.csv"] = csv.str();
  ctx.files["points.csv"] = per;
}

void scan_cones(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const int k = static_cast<int>(ctx.int_in("k", 1, std::max(1, mu.dim() - 1)));
  const DirectionNet net = net_for(ctx, mu.dim(), k);
  const double T = ctx.real_in("T", 1e-9, 1e4), dt = ctx.real_in("dt", 1e-6, 10.0);
  const double alpha = ctx.real_in("alpha", 1e-9, 1.0), eps = ctx.real_in("eps", 0.0, 1.0);
  scan_points(ctx, rep, mu, ctx.base_points(mu), [&](const Point& x, double& frac) {
    const ConeScan s = cone_scale_fraction(mu, x, T, alpha, k, eps, net, dt, true);
    frac = s.fraction;
    return s.scan;
  });
  rep.set("net_pairs", net.size());
}

PoreOptions pore_options(const Context& ctx) {
  PoreOptions opt;
  opt.grid_res = static_cast<int>(ctx.int_in("grid", 2, 1024));
  return opt;
}

void scan_porosity(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const double T = ctx.real_in("T", 1e-9, 1e4), dt = ctx.real_in("dt", 1e-6, 10.0);
  const double alpha = ctx.real_in("alpha", 1e-9, 0.5), eps = ctx.real_in("eps", 0.0, 1.0);
  const PoreOptions opt = pore_options(ctx);
  scan_points(ctx, rep, mu, ctx.base_points(mu), [&](const Point& x, double& frac) {
    const PorosityScan s = porosity_scale_fraction(mu, x, T, alpha, eps, dt, opt);
    frac = s.fraction;
    return s.scan;
  });
}

void scan_annular(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const AnnularSpec spec{ctx.real_in("rho", 1e-9, 1.0)};
  const double eps = ctx.real_in("eps", 0.0, 1.0);
  const int levels = static_cast<int>(ctx.int_in("levels", 1, 60));
  const PoreOptions opt = pore_options(ctx);
  const auto pts = ctx.base_points(mu);
  std::vector<PoreWitness> found(pts.size() * levels);
  parallel_for(found.size(), [&](std::size_t i) {
    found[i] = annular_pore_search(mu, pts[i / levels], std::ldexp(1.0, -static_cast<int>(i % levels) - 1), spec,
                                   eps, opt);
  });
  std::string csv = "x_id,r,alpha_hat,hole_ratio_high" + point_header(mu.dim()) + "\n";
  std::vector<double> alphas;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const PoreWitness& w = found[i];
    csv += std::to_string(i / levels) + "," + fmt(w.r) + "," + fmt(w.alpha_hat) + "," + fmt(w.hole_ratio_high) +
           point_cells(w.y, mu.dim()) + "\n";
    alphas.push_back(w.alpha_hat);
  }
  rep.empirical("alpha_hat_min", *std::min_element(alphas.begin(), alphas.end()), std::ldexp(1.0, -10));
  rep.empirical("alpha_hat_mean", mean_of(alphas), std_error_of(alphas));
  rep.closed_form("c", spec.c());
  ctx.files["pores.csv"] = csv;
}

void dim_local(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const ScaleRange range = ctx.range();
  const auto pts = ctx.base_points(mu);
  std::vector<LocalDimension> dims(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { dims[i] = local_dimension(mu, pts[i], range); });
  std::string csv = "x_id" + point_header(mu.dim()) + ",central,residual,lower,upper\n";
  std::vector<double> central;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    csv += std::to_string(i) + point_cells(pts[i], mu.dim()) + "," + fmt(dims[i].central.value) + "," +
           fmt(dims[i].central.residual) + "," + fmt(dims[i].lower.value) + "," + fmt(dims[i].upper.value) + "\n";
    central.push_back(dims[i].central.value);
  }
  rep.empirical("local_dimension", mean_of(central), pts.size() > 1 ? std_error_of(central) : dims[0].central.residual);
  ctx.files["local.csv"] = csv;
}

void dim_fd(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const double T = ctx.real_in("T", 1e-9, 1e4), dt = ctx.real_in("dt", 1e-6, 10.0);
  const double r = ctx.real_in("r", 1e-9, 1.0 - 1e-9);
  const auto pts = ctx.base_points(mu);
  std::vector<DimensionEstimate> est(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { est[i] = fd_dimension(mu, pts[i], T, r, dt); });
  std::string csv = "x_id" + point_header(mu.dim()) + ",fd,residual\n";
  std::vector<double> v;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    csv += std::to_string(i) + point_cells(pts[i], mu.dim()) + "," + fmt(est[i].value) + "," + fmt(est[i].residual) + "\n";
    v.push_back(est[i].value);
  }
  rep.empirical("fd_dimension", mean_of(v), pts.size() > 1 ? std_error_of(v) : est[0].residual);
  ctx.files["fd.csv"] = csv;
}

void dim_spectrum(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const auto n = static_cast<std::size_t>(ctx.int_in("samples", 100, 1000000));
  const DimensionSpectrum s = dimension_spectrum(mu, n, ctx.seed(), ctx.range());
  rep.empirical("hausdorff_lower", s.hausdorff_lower.value, s.hausdorff_lower.residual);
  rep.empirical("hausdorff_upper", s.hausdorff_upper.value, s.hausdorff_upper.residual);
  rep.empirical("packing_lower", s.packing_lower.value, s.packing_lower.residual);
  rep.empirical("packing_upper", s.packing_upper.value, s.packing_upper.residual);
  rep.set("samples", s.samples);
}

void density_scan_cmd(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  const double s = ctx.real_in("s", 0.0, 16.0);
  const ScaleRange range = ctx.range();
  const auto pts = ctx.base_points(mu);
  std::vector<DensityBounds> b(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { b[i] = density_scan(mu, pts[i], s, range); });
  std::string csv = "x_id,r,ratio\n";
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < b[i].radii.size(); ++j) {
      csv += std::to_string(i) + "," + fmt(b[i].radii[j]) + "," + fmt(b[i].ratios[j]) + "\n";
    }
    lo = std::min(lo, b[i].lower);
    hi = std::max(hi, b[i].upper);
  }
  rep.empirical("inf_ratio", lo, 0.0);
  rep.empirical("sup_ratio", hi, 0.0);
  ctx.files["density.csv"] = csv;
}

void check_rectifiability(Context& ctx, Report& rep) {
  const Measure mu = ctx.measure();
  if (mu.dim() != 2) fail(ErrorCode::unsupported_kind, "the rectifiability scan runs on planar measures");
  const auto n = static_cast<std::size_t>(ctx.int_in("samples", 2, 1000000));
  const auto pts = mu.sample(n, ctx.seed());
  const DirectionNet net = planar_net(static_cast<int>(ctx.int_in("net", 1, 100000)));
  const NetRectifiability scan =
      rectifiability_net_scan(pts, net, ctx.real_in("alpha", 1e-9, 1.0), ctx.real_in("r", 1e-12, 1e6));
  std::string csv = "pair,holds,x_index,y_index\n";
  json witness = nullptr;
  for (std::size_t i = 0; i < scan.results.size(); ++i) {
    const auto& r = scan.results[i];
    csv += std::to_string(i) + "," + (r.holds ? "1" : "0") + "," + std::to_string(r.x_index) + "," +
           std::to_string(r.y_index) + "\n";
    if (!r.holds && witness.is_null()) {
      witness = {{"pair", i}, {"x", point_cells(pts[r.x_index], 2).substr(1)}, {"y", point_cells(pts[r.y_index], 2).substr(1)}};
    }
  }
  rep.set("pairs", scan.pairs);
  rep.set("passing", scan.passing);
  rep.set("holds_for_all", scan.passing == scan.pairs);
  rep.set("witness", witness);
  ctx.files["pairs.csv"] = csv;
}

void build_extremal(Context& ctx, Report& rep) {
  const std::string family = ctx.config.at("family").get<std::string>();
  SpliceSchedule s;
  s.first_block = static_cast<int>(ctx.int_in("first_block", 1, 1000));
  const int depth = static_cast<int>(ctx.int_in("depth", 1, 60));
  const double q_in = ctx.real("q");
  Measure mu = lebesgue_ball(1);
  if (family == "conical") {
    const int d = static_cast<int>(ctx.int_in("dim", 2, 3));
    const int k = static_cast<int>(ctx.int_in("k", 1, d - 1));
    std::vector<int> axes;
    for (int a = 0; a < d - k; ++a) axes.push_back(a);
    if (q_in >= 0.0) {
      s.q = ctx.real_in("q", 0.0, 1.0);
    } else {
      // plane levels carry dimension d - k, uniform levels d
      const double sd = ctx.real_in("s", d - k, d);
      s.q = 1.0 - (sd - (d - k)) / k;
    }
    mu = splice(d, SubdivisionRule::uniform(2), SubdivisionRule::plane(axes, 2), s, Frame{}, depth);
    rep.closed_form("dimension", s.q * (d - k) + (1 - s.q) * d);
  } else if (family == "porous") {
    if (ctx.integer("dim") != 1) config_fail("the porous family is one-dimensional");
    const double alpha = ctx.real_in("alpha", 1e-9, 0.5 - 1e-9);
    s.q = q_in >= 0.0 ? ctx.real_in("q", 0.0, 1.0) : ctx.real_in("p", 0.0, 1.0);
    mu = splice(1, SubdivisionRule::uniform(3), SubdivisionRule::cantor(alpha), s, Frame{}, depth);
    rep.closed_form("dimension_bound", s.q * salli_dimension(alpha) + (1 - s.q));
  } else {
    config_fail("family must be conical or porous");
  }
  rep.closed_form("q", s.q);
  SpliceSchedule lab = s;
  lab.depth = depth;
  std::string csv = "level,label\n";
  const auto labels = lab.labels();
  for (std::size_t n = 0; n < labels.size(); ++n) csv += std::to_string(n) + "," + (labels[n] ? "B" : "A") + "\n";
  ctx.files["measure.json"] = measure_to_json(mu).dump(2) + "\n";
  ctx.files["labels.csv"] = csv;
}

void salli(Context& ctx, Report& rep) {
  const double alpha = ctx.real_in("alpha", 1e-12, 0.5 - 1e-12);
  rep.closed_form("ratio", salli_ratio(alpha));
  rep.closed_form("dimension", salli_dimension(alpha));
  const int depth = static_cast<int>(ctx.int_in("box_depth", 0, 40));
  if (depth > 0) {
    const DimensionEstimate b = box_dimension(cantor_salli(alpha), 1, depth);
    rep.empirical("box_dimension", b.value, b.residual);
  }
}

void dispatch(Context& ctx, Report& rep) {
  static const std::map<std::string, void (*)(Context&, Report&)> table = {
      {"build-measure", build_measure},   {"cone-constant", cone_constant_cmd}, {"scan-cones", scan_cones},
      {"scan-porosity", scan_porosity},   {"scan-annular", scan_annular},       {"dim-local", dim_local},
      {"dim-fd", dim_fd},                 {"dim-spectrum", dim_spectrum},       {"density-scan", density_scan_cmd},
      {"check-rectifiability", check_rectifiability}, {"build-extremal", build_extremal}, {"salli", salli}};
  table.at(ctx.config.at("command").get<std::string>())(ctx, rep);
}

int run(const json& config, const std::string& out_dir) {
  Context ctx{config, out_dir, {}};
  Report rep(config.at("command").get<std::string>(), config);
  dispatch(ctx, rep);
  for (const auto& [name, _] : ctx.files) rep.add_file(name);
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : ctx.files) write_atomic((std::filesystem::path(out_dir) / name).string(), content);
  const std::string summary = rep.dump();
  write_atomic((std::filesystem::path(out_dir) / "summary.json").string(), summary);
  std::cout << summary;
  return exit_ok;
}

int report_error(const Error& e) {
  std::cerr << error_json(e).dump(2) << "\n";
  return exit_code_for(e.code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenery flow lab: measures, cones, porosity and dimensions"};
  app.require_subcommand(0, 1);
  std::string config_path, out_dir = ".";
  app.add_option("--config", config_path, "rerun a config (a summary.json or its config block)");
  app.add_option("--out", out_dir, "output directory");

  std::map<std::string, std::map<std::string, std::string>> given;
  for (const Command& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--out", out_dir, "output directory");
    for (const Param& p : c.params) {
      std::string help = p.help;
      if (!p.fallback.is_null() && p.kind != Kind::points) help += " (default " + p.fallback.dump() + ")";
      sub->add_option_function<std::string>(
          "--" + flag_of(p.key), [&given, name = c.name, key = p.key](const std::string& v) { given[name][key] = v; },
          help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return exit_config;
  }

  try {
    json config;
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) config_fail("--config replaces the subcommand");
      config = read_json_file(config_path);
      if (config.contains("config") && config.contains("provenance")) config = config["config"];
      if (!config.is_object() || !config.contains("command") || !config["command"].is_string()) {
        config_fail("config needs a \"command\" field");
      }
    } else {
      if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return exit_config;
      }
      const std::string name = app.get_subcommands().front()->get_name();
      config = json::object();
      config["command"] = name;
      for (const Param& p : find_command(name).params) {
        const auto it = given[name].find(p.key);
        if (it != given[name].end()) config[p.key] = convert(p, it->second);
      }
    }
    const Command& cmd = find_command(config.at("command").get<std::string>());
    return run(normalize(cmd, config), out_dir);
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}, {"exit_code", exit_other}}.dump(2) << "\n";
    return exit_other;
  }
}
