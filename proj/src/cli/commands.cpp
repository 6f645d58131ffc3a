#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "surfhol/errors.hpp"
#include "surfhol/exprlang.hpp"
#include "surfhol/surface.hpp"

namespace surfhol::cli {

namespace {

constexpr double kFlatnessTol = 1e-10;
constexpr double kLawTol = 1e-10;
constexpr double kIdentityTol = 1e-12;

/// Independent stream per (seed, stream) pair.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Plaquette random_above(const Plaquette& p, std::mt19937_64& rng) {
  const CrossedModule& cm = p.module();
  return make_flat_plaquette(p.c(), random_element(cm.g, rng), random_element(cm.g, rng), random_element(cm.h, rng),
                             p.module_ptr());
}

Plaquette random_right_of(const Plaquette& p, std::mt19937_64& rng) {
  const CrossedModule& cm = p.module();
  return make_flat_plaquette(random_element(cm.g, rng), random_element(cm.g, rng), p.b(), random_element(cm.h, rng),
                             p.module_ptr());
}

Json window_json(const PlaquetteGrid& w) {
  return Json{{"p", plaquette_to_json(w.cell(0, 0))},
              {"p2", plaquette_to_json(w.cell(0, 1))},
              {"q", plaquette_to_json(w.cell(1, 0))},
              {"q2", plaquette_to_json(w.cell(1, 1))}};
}

double window_residual(const PlaquetteGrid& w, CompositionConvention conv) {
  return interchange_residual(w.cell(0, 0), w.cell(0, 1), w.cell(1, 0), w.cell(1, 1), conv);
}

/// Running maximum that remembers the first witness above a threshold.
struct Tracker {
  explicit Tracker(double t) : threshold(t) {}

  double threshold;
  double max = 0.0;
  Json witness;

  void add(double value, const std::function<Json()>& make_witness) {
    max = std::max(max, value);
    if (value > threshold && witness.is_null()) witness = make_witness();
  }
};

// --- axioms ---------------------------------------------------------------

Outcome run_axioms(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  r.conventions = {"random-sampling"};
  const int n = sc.samples(10000);
  const double tol = sc.run_number("tolerance", tolerance::algebraic);
  std::uint64_t stream = 0;
  for (const auto& cm : sc.instances()) {
    const AxiomResiduals ax = crossed_module_axioms(*cm, n, sc.seed() + stream);
    const DerivativeResiduals dr = derivative_consistency(*cm, std::min(n, 100), sc.seed() + stream);
    r.check(cm->name + ".equivariance", ax.equivariance, ax.equivariance <= tol);
    r.check(cm->name + ".peiffer", ax.peiffer, ax.peiffer <= tol);
    r.check(cm->name + ".tau_alg", dr.tau_alg, dr.tau_alg <= tolerance::derivative);
    r.check(cm->name + ".alpha_alg", dr.alpha_alg, dr.alpha_alg <= tolerance::derivative);
    ++stream;
  }
  r.details["samples"] = n;
  r.details["tolerance"] = tol;
  return out;
}

// --- compose --------------------------------------------------------------

void compose_instance(const CrossedModulePtr& cm, int n, CompositionConvention conv, std::mt19937_64& rng,
                      Report& r) {
  Tracker vclosure{kFlatnessTol}, hclosure{kFlatnessTol}, vassoc{kLawTol}, hassoc{kLawTol};
  Tracker identity{kIdentityTol}, inverse{kLawTol}, interchange{kLawTol};
  for (int i = 0; i < n; ++i) {
    const Plaquette p = random_flat_plaquette(cm, rng);
    const Plaquette q = random_above(p, rng);
    const Plaquette q3 = random_above(q, rng);
    const Plaquette s = random_right_of(p, rng);
    const Plaquette s3 = random_right_of(s, rng);

    const Plaquette v = vcompose(p, q, conv);
    const Plaquette hz = hcompose(p, s, conv);
    vclosure.add(v.flatness_residual(),
                 [&] { return Json{{"below", plaquette_to_json(p)}, {"above", plaquette_to_json(q)},
                                   {"residual", v.flatness_residual()}}; });
    hclosure.add(hz.flatness_residual(),
                 [&] { return Json{{"left", plaquette_to_json(p)}, {"right", plaquette_to_json(s)},
                                   {"residual", hz.flatness_residual()}}; });
    vassoc.add(plaquette_distance(vcompose(v, q3, conv), vcompose(p, vcompose(q, q3, conv), conv)),
               [] { return Json(nullptr); });
    hassoc.add(plaquette_distance(hcompose(hz, s3, conv), hcompose(p, hcompose(s, s3, conv), conv)),
               [] { return Json(nullptr); });
    identity.add(std::max({plaquette_distance(vcompose(videntity(cm, p.a()), p, conv), p),
                           plaquette_distance(vcompose(p, videntity(cm, p.c()), conv), p),
                           plaquette_distance(hcompose(hidentity(cm, p.d()), p, conv), p),
                           plaquette_distance(hcompose(p, hidentity(cm, p.b()), conv), p)}),
                 [] { return Json(nullptr); });
    inverse.add(std::max(plaquette_distance(vcompose(p, vinverse(p), conv), videntity(cm, p.a())),
                         plaquette_distance(hcompose(p, hinverse(p), conv), hidentity(cm, p.d()))),
                [] { return Json(nullptr); });
    const PlaquetteGrid w = random_flat_grid(cm, 2, 2, rng());
    interchange.add(window_residual(w, conv), [&] { return window_json(w); });
  }
  const std::string& name = cm->name;
  r.check(name + ".vertical_closure", vclosure.max, vclosure.max <= kFlatnessTol);
  r.check(name + ".horizontal_closure", hclosure.max, hclosure.max <= kFlatnessTol);
  r.check(name + ".vertical_associativity", vassoc.max, vassoc.max <= kLawTol);
  r.check(name + ".horizontal_associativity", hassoc.max, hassoc.max <= kLawTol);
  r.check(name + ".identity_laws", identity.max, identity.max <= kIdentityTol);
  r.check(name + ".inverse_laws", inverse.max, inverse.max <= kLawTol);
  r.check(name + ".interchange", interchange.max, interchange.max <= kLawTol);
  if (!vclosure.witness.is_null()) r.details[name + ".vertical_closure_counterexample"] = vclosure.witness;
  if (!hclosure.witness.is_null()) r.details[name + ".horizontal_closure_counterexample"] = hclosure.witness;
  if (!interchange.witness.is_null()) r.details[name + ".interchange_counterexample"] = interchange.witness;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Outcome run_compose(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  r.conventions = {"edge-orientation", "face-composition", "fold-order", "grid-tolerance", "plaquette-equality",
                   "random-sampling"};
  const CompositionConvention conv = sc.convention();
  r.details["convention"] = to_string(conv);

  if (sc.has_run("grid")) {
    const PlaquetteGrid grid = grid_from_json(read_json_file(sc.resolve(sc.run_string("grid", ""))));
    const Plaquette rows = grid_compose(grid, FoldOrder::rows_first, conv);
    const Plaquette cols = grid_compose(grid, FoldOrder::cols_first, conv);
    const double tol = grid_tolerance(grid.rows(), grid.cols());
    r.check("grid.fold_difference", plaquette_distance(rows, cols), plaquette_distance(rows, cols) <= tol);
    r.metric("grid.flatness", rows.flatness_residual());
    r.details["grid.composite"] = plaquette_to_json(rows);
    r.details["grid.tolerance"] = tol;
    if (!sc.has_run("samples")) return out;
  }

  const int n = sc.samples(1000);
  r.details["samples"] = n;
  std::uint64_t stream = 0;
  for (const auto& cm : sc.instances()) {
    auto rng = stream_rng(sc.seed(), stream++);
    compose_instance(cm, n, conv, rng, r);
  }
  return out;
}

// --- nogo -----------------------------------------------------------------

Outcome run_nogo(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  r.conventions = {"edge-orientation", "face-composition", "plaquette-equality", "random-sampling"};
  const std::string scheme = sc.run_string("scheme", "crossed-module");
  const CompositionConvention conv = sc.convention();
  const int n = sc.samples(1000);
  r.details["scheme"] = scheme;
  r.details["convention"] = to_string(conv);
  r.details["samples"] = n;

  if (scheme == "crossed-module") {
    std::uint64_t stream = 0;
    for (const auto& cm : sc.instances({"conjugation-so3"})) {
      auto rng = stream_rng(sc.seed(), stream++);
      Tracker t{kLawTol};
      for (int i = 0; i < n; ++i) {
        const PlaquetteGrid w = random_flat_grid(cm, 2, 2, rng());
        t.add(window_residual(w, conv), [&] { return window_json(w); });
      }
      r.check(cm->name + ".interchange_max", t.max, t.max <= kLawTol);
      if (!t.witness.is_null()) r.details[cm->name + ".counterexample"] = t.witness;
    }
    return out;
  }
  if (scheme != "single-group") throw UsageError("run.scheme must be 'crossed-module' or 'single-group'");

  const std::string group = sc.run_string("group", "so3");
  const CrossedModulePtr cm = instance_from_name("G=" + group + ";H=" + group + ";tau=identity;alpha=trivial");
  const double threshold = sc.run_number("threshold", 0.1);
  auto rng = stream_rng(sc.seed(), 0);
  double best = 0.0;
  int searched = 0;
  Json witness;
  for (int i = 0; i < n; ++i) {
    const PlaquetteGrid w = random_flat_grid(cm, 2, 2, rng());
    const double res = window_residual(w, conv);
    ++searched;
    best = std::max(best, res);
    if (res >= threshold) {
      witness = Json{{"sample", i}, {"residual", res}, {"window", window_json(w)}};
      break;
    }
  }
  r.details["instance"] = cm->name;
  r.details["threshold"] = threshold;
  r.metric("single_group.samples_searched", searched);
  r.check("single_group.max_residual", best, !witness.is_null());
  r.details["counterexample"] = witness;
  return out;
}

// --- gauge ----------------------------------------------------------------

GaugeData gauge_from_config(const Scenario& sc, const CrossedModule& cm) {
  GaugeData gd = identity_gauge(cm);
  if (!sc.has_run("gauge")) return gd;
  const Json& j = sc.run()["gauge"];
  if (!j.is_object()) throw UsageError("run.gauge must map u0/u1/ut0/ut1/w/wt to matrices");
  const std::map<std::string, GroupElement*> g_fields = {{"u0", &gd.u0}, {"u1", &gd.u1}, {"ut0", &gd.ut0},
                                                         {"ut1", &gd.ut1}};
  for (const auto& [key, value] : j.items()) {
    if (auto it = g_fields.find(key); it != g_fields.end()) {
      *it->second = group_from_json(value, cm.g);
    } else if (key == "w") {
      gd.w = group_from_json(value, cm.h);
    } else if (key == "wt") {
      gd.wt = group_from_json(value, cm.h);
    } else {
      throw UsageError("run.gauge: unknown field '" + key + "'");
    }
  }
  return gd;
}

Outcome run_gauge(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  r.conventions = {"edge-orientation", "gauge-variant", "plaquette-equality", "random-sampling"};
  const GaugeVariant variant = parse_gauge_variant(sc.run_string("variant", "constraint-preserving"));
  const int n = sc.samples(1000);
  r.details["variant"] = to_string(variant);
  r.details["samples"] = n;

  if (sc.has_run("plaquette")) {
    const Plaquette p = plaquette_from_json(read_json_file(sc.resolve(sc.run_string("plaquette", ""))));
    const Plaquette g = gauge_transform(p, gauge_from_config(sc, p.module()), variant);
    r.details["transformed"] = plaquette_to_json(g);
    r.metric("input.flatness", p.flatness_residual());
    if (variant == GaugeVariant::constraint_preserving) {
      r.check("transformed.flatness", g.flatness_residual(),
              p.flatness_residual() > kFlatnessTol || g.flatness_residual() <= kFlatnessTol);
    } else {
      r.metric("transformed.flatness", g.flatness_residual());
    }
  }

  std::uint64_t stream = 0;
  for (const auto& cm : sc.instances()) {
    auto rng = stream_rng(sc.seed(), stream++);
    double fixed = 0.0, flat = 0.0;
    for (int i = 0; i < n; ++i) {
      const Plaquette p = random_flat_plaquette(cm, rng);
      fixed = std::max(fixed, plaquette_distance(gauge_transform(p, identity_gauge(*cm), variant), p));
      flat = std::max(flat, gauge_transform(p, random_gauge(*cm, rng), variant).flatness_residual());
    }
    r.check(cm->name + ".identity_fixed_point", fixed, fixed <= kIdentityTol);
    if (variant == GaugeVariant::constraint_preserving) {
      r.check(cm->name + ".flatness", flat, flat <= kFlatnessTol);
    } else {
      r.metric(cm->name + ".flatness", flat);
    }
  }
  return out;
}

// --- transport ------------------------------------------------------------

struct TransportSetup {
  CrossedModulePtr cm;
  ConnectionForm a, abar;
  TwoFormField b;
};

TransportSetup transport_setup(const Scenario& sc) {
  CrossedModulePtr cm = sc.instance();
  return {cm, sc.connection(sc.run_string("A", "A"), cm->g), sc.connection(sc.run_string("Abar", "Abar"), cm->g),
          sc.two_form(sc.run_string("B", "B"), cm->h)};
}

LiftSign lift_sign(const Scenario& sc) {
  const std::string s = sc.run_string("lift_sign", "negative");
  if (s == "negative") return LiftSign::negative;
  if (s == "positive") return LiftSign::positive;
  throw UsageError("run.lift_sign must be 'negative' or 'positive'");
}

struct TransportResult {
  LiftedPath lifted;
  LiftedVariation xt;
  double connection;
  double tangency;
};

TransportResult solve_transport(const Scenario& sc, const TransportSetup& s, int n) {
  const DiscretePath path = sc.path(sc.run_string("path", "gamma"), n);
  const PathVariation x = sc.variation(sc.run_string("variation", "X"), path.intervals());
  LiftedPath lifted = horizontal_lift(s.abar, path, s.cm->g_identity());
  LiftedVariation xt = lift_variation(s.a, s.abar, s.b, *s.cm, lifted, x);
  const double conn = pathspace_connection_value(s.a, s.b, *s.cm, lifted, xt).norm();
  const auto profile = tangency_profile(s.abar, lifted, xt);
  const double tang = *std::max_element(profile.begin(), profile.end());
  return {std::move(lifted), std::move(xt), conn, tang};
}

Json algebra_json(const AlgebraElement& x) {
  Json out = Json::array();
  const Vector c = x.coordinates();
  for (Eigen::Index i = 0; i < c.size(); ++i) out.push_back(c(i));
  return out;
}

Outcome run_transport(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  r.conventions = {"trivial-bundle", "lift-sign", "lift-integrator", "curvature", "chen-quadrature",
                   "variation-terminal", "transport-residuals"};
  const TransportSetup s = transport_setup(sc);
  const int n = sc.resolution(1000);
  const double tol = sc.run_number("tolerance", 1e-8);
  r.details["resolution"] = n;
  r.details["instance"] = s.cm->name;

  if (lift_sign(sc) == LiftSign::positive) {
    const DiscretePath path = sc.path(sc.run_string("path", "gamma"), n);
    const LiftedPath lifted = horizontal_lift(s.abar, path, s.cm->g_identity(), LiftSign::positive);
    r.check("group_drift", group_drift(lifted), group_drift(lifted) <= 1e-9);
    r.details["holonomy"] = group_to_json(lifted.group.back());
    r.details["note"] = "variation transport is defined for the negative lift sign only; skipped";
    return out;
  }

  const TransportResult t = solve_transport(sc, s, n);
  r.check("group_drift", group_drift(t.lifted), group_drift(t.lifted) <= 1e-9);
  r.metric("horizontality_residual", horizontality_residual(s.abar, t.lifted));
  r.check("connection_residual", t.connection, t.connection <= tol);
  r.check("tangency_residual_max", t.tangency, t.tangency <= tol);
  r.details["holonomy"] = group_to_json(t.lifted.group.back());
  r.details["iota_start"] = algebra_json(t.xt.vertical.front());
  r.details["iota_end"] = algebra_json(t.xt.vertical.back());
  r.details["tolerance"] = tol;
  return out;
}

// --- surface --------------------------------------------------------------

double refinement_discrepancy(const SurfaceMap& surf, const ConnectionForm& a, const ConnectionForm& abar,
                              const CrossedModulePtr& cm, int n) {
  const Plaquette whole = plaquette_from_surface(surf, a, abar, cm, n);
  std::vector<Plaquette> cells;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cells.push_back(plaquette_from_surface(surf.restrict(0.5 * j, 0.5 * (j + 1), 0.5 * i, 0.5 * (i + 1)), a, abar,
                                             cm, n));
    }
  }
  const PlaquetteGrid grid(2, 2, std::move(cells));
  return plaquette_distance(grid_compose(grid, FoldOrder::rows_first), whole);
}

Outcome run_surface(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  r.conventions = {"edge-orientation", "face-composition", "fold-order", "lift-sign", "lift-integrator",
                   "surface-plaquette", "plaquette-equality"};
  const CrossedModulePtr cm = sc.instance();
  const ConnectionForm a = sc.connection(sc.run_string("A", "A"), cm->g);
  const ConnectionForm abar = sc.connection(sc.run_string("Abar", "Abar"), cm->g);
  const SurfaceMap surf = sc.surface(sc.run_string("surface", "surface"));
  const int n = sc.resolution(200);
  const double tol = sc.run_number("tolerance", 1e-8);
  const Plaquette p = plaquette_from_surface(surf, a, abar, cm, n);
  r.check("flatness", p.flatness_residual(), p.flatness_residual() <= kFlatnessTol);
  const double disc = refinement_discrepancy(surf, a, abar, cm, n);
  r.check("refinement_discrepancy", disc, disc <= tol);
  r.details["plaquette"] = plaquette_to_json(p);
  r.details["resolution"] = n;
  r.details["tolerance"] = tol;
  return out;
}

// --- convergence ----------------------------------------------------------

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Square chart x0 + eps (t - 1/2) e_i + eps (s - 1/2) e_j.
SurfaceMap centred_square(const Vector& x0, int axis_t, int axis_s, double eps) {
  std::vector<std::string> coords;
  for (Eigen::Index k = 0; k < x0.size(); ++k) {
    std::string c = format_double(x0(k));
    if (k == axis_t) c += "+" + format_double(eps) + "*(t-0.5)";
    if (k == axis_s) c += "+" + format_double(eps) + "*(s-0.5)";
    coords.push_back(c);
  }
  return SurfaceMap::parse(coords);
}

Outcome run_convergence(const Scenario& sc) {
  Outcome out;
  Report& r = out.report;
  const std::string study = sc.run_string("study", "lift");
  r.details["study"] = study;
  const double floor = sc.run_number("noise_floor", 1e-13);

  std::vector<double> resolutions;  // column 1 of the table
  std::vector<double> residuals;
  double min_order = 0.0;

  if (study == "lift") {
    r.conventions = {"lift-sign", "lift-integrator"};
    const CrossedModulePtr cm = sc.instance();
    const ConnectionForm abar = sc.connection(sc.run_string("Abar", "Abar"), cm->g);
    const LiftSign sign = lift_sign(sc);
    resolutions = sc.run_numbers("resolutions", {125, 250, 500, 1000});
    const int finest = static_cast<int>(*std::max_element(resolutions.begin(), resolutions.end()));
    const GroupElement reference = holonomy(abar, sc.path(sc.run_string("path", "gamma"), 8 * finest), sign);
    for (double res : resolutions) {
      residuals.push_back(distance(holonomy(abar, sc.path(sc.run_string("path", "gamma"), static_cast<int>(res)), sign),
                                   reference));
    }
    min_order = sc.run_number("min_order", 3.8);
    r.details["reference_resolution"] = 8 * finest;
  } else if (study == "transport" || study == "tangency") {
    r.conventions = {"trivial-bundle", "lift-sign", "lift-integrator", "curvature", "chen-quadrature",
                     "variation-terminal", "transport-residuals"};
    const TransportSetup s = transport_setup(sc);
    resolutions = sc.run_numbers("resolutions", {100, 200, 400, 800});
    for (double res : resolutions) {
      const TransportResult t = solve_transport(sc, s, static_cast<int>(res));
      residuals.push_back(study == "transport" ? t.connection : t.tangency);
    }
    min_order = sc.run_number("min_order", 1.9);
  } else if (study == "curvature" || study == "refinement") {
    r.conventions = {"edge-orientation", "lift-sign", "lift-integrator", "curvature", "surface-plaquette",
                     "curvature-limit"};
    const CrossedModulePtr cm = sc.instance();
    const ConnectionForm a = sc.connection(sc.run_string("A", "A"), cm->g);
    const ConnectionForm abar = sc.connection(sc.run_string("Abar", sc.run_string("A", "A")), cm->g);
    const std::vector<double> centre = sc.run_numbers("center", std::vector<double>(static_cast<std::size_t>(sc.dim()), 0.0));
    if (static_cast<int>(centre.size()) != sc.dim()) throw UsageError("run.center needs dim entries");
    const Vector x0 = Eigen::Map<const Vector>(centre.data(), static_cast<Eigen::Index>(centre.size()));
    const std::vector<double> axes = sc.run_numbers("axes", {1, 2});
    if (axes.size() != 2) throw UsageError("run.axes needs two 1-based coordinate indices");
    const int i = static_cast<int>(axes[0]) - 1, j = static_cast<int>(axes[1]) - 1;
    if (i < 0 || j < 0 || i >= sc.dim() || j >= sc.dim() || i == j) throw UsageError("run.axes out of range");
    const bool curv = study == "curvature";
    const std::vector<double> eps =
        sc.run_numbers("epsilons", curv ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : std::vector<double>{0.4, 0.2, 0.1, 0.05});
    const int n = sc.resolution(curv ? 200 : 8);
    Vector ei = Vector::Zero(sc.dim()), ej = Vector::Zero(sc.dim());
    ei(i) = 1.0;
    ej(j) = 1.0;
    const double f_norm = curvature(a, x0, ei, ej).norm();
    for (double e : eps) {
      if (!(e > 0.0)) throw UsageError("run.epsilons must be positive");
      const SurfaceMap surf = centred_square(x0, i, j, e);
      resolutions.push_back(1.0 / e);
      if (curv) {
        const Plaquette p = plaquette_from_surface(surf, a, abar, cm, n);
        const double ratio = log_map(p.a().inverse() * p.b().inverse() * p.c() * p.d()).norm() / (e * e);
        residuals.push_back(std::abs(ratio - f_norm));
      } else {
        residuals.push_back(refinement_discrepancy(surf, a, abar, cm, n));
      }
    }
    min_order = sc.run_number("min_order", curv ? 1.9 : 2.0);
    r.details["curvature_norm"] = f_norm;
    r.details["resolution"] = n;
  } else {
    throw UsageError("run.study must be lift, transport, tangency, curvature or refinement");
  }

  if (resolutions.size() < 2) throw UsageError("a convergence study needs at least two resolutions");
  double worst = INFINITY;
  Json orders = Json::array();
  for (std::size_t k = 0; k < resolutions.size(); ++k) {
    CsvRow row{resolutions[k], residuals[k], std::nullopt};
    if (k > 0 && residuals[k] > floor && residuals[k - 1] > floor) {
      row.order = std::log(residuals[k - 1] / residuals[k]) / std::log(resolutions[k] / resolutions[k - 1]);
      worst = std::min(worst, *row.order);
    }
    orders.push_back(row.order ? Json(*row.order) : Json(nullptr));
    out.table.push_back(row);
  }
  Json res = Json::array();
  for (double v : residuals) res.push_back(v);
  r.details["resolutions"] = resolutions;
  r.details["residuals"] = res;
  r.details["orders"] = orders;
  r.details["min_order"] = min_order;
  // Every residual under the noise floor means the scheme is exact on this data.
  r.check("order_min", std::isinf(worst) ? 0.0 : worst, std::isinf(worst) || worst >= min_order);
  r.metric("residual_finest", residuals.back());
  return out;
}

void write_csv(const std::vector<CsvRow>& table, std::ostream& os) {
  os << "resolution,residual,order_estimate\n";
  for (const auto& row : table) {
    os << format_double(row.resolution) << ',' << format_double(row.residual) << ',';
    if (row.order) os << format_double(*row.order);
    os << '\n';
  }
}

void write_summary(const Report& r, std::ostream& os) {
  os << r.subcommand << ": " << (r.pass ? "PASS" : "FAIL") << "  (seed " << r.seed << ", config " << r.config_digest
     << ")\n";
  for (const auto& [name, value] : r.metrics.items()) {
    os << "  " << name << " = " << (value.is_number() ? format_double(value.get<double>()) : value.dump()) << '\n';
  }
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"axioms",    "compose", "nogo",       "gauge",
                                                 "transport", "surface", "convergence"};
  return names;
}

Outcome run_scenario(const std::string& subcommand, const Scenario& scenario) {
  static const std::map<std::string, Outcome (*)(const Scenario&)> table = {
      {"axioms", run_axioms},       {"compose", run_compose}, {"nogo", run_nogo},
      {"gauge", run_gauge},         {"transport", run_transport}, {"surface", run_surface},
      {"convergence", run_convergence}};
  const auto it = table.find(subcommand);
  if (it == table.end()) throw UsageError("unknown subcommand '" + subcommand + "'");
  Outcome out;
  try {
    out = it->second(scenario);
  } catch (const DomainError& e) {
    out.report.pass = false;
    out.report.details["error"] = e.what();
  } catch (const NumericalError& e) {
    out.report.pass = false;
    out.report.details["error"] = e.what();
  } catch (const expr::EvalError& e) {
    out.report.pass = false;
    out.report.details["error"] = e.what();
  }
  out.report.subcommand = subcommand;
  out.report.config_digest = config_digest(scenario.config());
  out.report.seed = scenario.seed();
  return out;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surface holonomy checks: crossed modules, plaquettes and path-space transport", "surfhol"};
  std::string subcommand, config_path, json_path, csv_path;
  Flags flags;
  app.add_option("subcommand", subcommand, "axioms | compose | nogo | gauge | transport | surface | convergence")
      ->required()
      ->check(CLI::IsMember(subcommand_names()));
  app.add_option("--config", config_path, "scenario file (YAML or JSON)")->required();
  app.add_option("--seed", flags.seed, "64-bit seed (overrides run.seed)");
  app.add_option("--samples", flags.samples, "sample count (overrides run.samples)");
  app.add_option("--resolution", flags.resolution, "intervals per path (overrides run.resolution)");
  app.add_option("--convention", flags.convention, "face-label convention")
      ->check(CLI::IsMember({"paper-literal", "closure-consistent"}));
  app.add_option("--json", json_path, "write the JSON report here ('-' for standard output)");
  app.add_option("--csv", csv_path, "write the convergence table here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "surfhol: " << e.what() << '\n' << "run 'surfhol --help' for usage\n";
    return 2;
  }

  Outcome outcome;
  try {
    if (!csv_path.empty() && subcommand != "convergence") {
      throw UsageError("--csv is only produced by the convergence subcommand");
    }
    const std::filesystem::path path(config_path);
    const Scenario sc(load_config_file(path), path.parent_path(), flags);
    outcome = run_scenario(subcommand, sc);
  } catch (const UsageError& e) {
    err << "surfhol: " << e.what() << '\n';
    return 2;
  } catch (const ComposabilityError& e) {
    err << "surfhol: " << e.what() << '\n';
    return 2;
  } catch (const expr::ParseError& e) {
    err << "surfhol: expression error at offset " << e.offset() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "surfhol: " << e.what() << '\n';
    return 2;
  }

  const Json report = outcome.report.to_json();
  if (json_path == "-") {
    out << report.dump(2) << '\n';
  } else {
    write_summary(outcome.report, out);
    if (!json_path.empty()) {
      std::ofstream f(json_path);
      if (!f) {
        err << "surfhol: cannot write '" << json_path << "'\n";
        return 2;
      }
      f << report.dump(2) << '\n';
    }
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) {
      err << "surfhol: cannot write '" << csv_path << "'\n";
      return 2;
    }
    write_csv(outcome.table, f);
  }
  if (report["details"].contains("error")) err << "surfhol: " << report["details"]["error"].get<std::string>() << '\n';
  return outcome.report.pass ? 0 : 1;
}

}  // namespace surfhol::cli
