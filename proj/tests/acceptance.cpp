// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "surfhol/crossed_module.hpp"
#include "surfhol/errors.hpp"
#include "surfhol/exprlang.hpp"
#include "surfhol/pathspace.hpp"
#include "surfhol/plaquette.hpp"
#include "surfhol/surface.hpp"

using namespace surfhol;

namespace {

// Pinned tolerances.
constexpr double kAxiomTol = 1e-12;
constexpr double kClosureTol = 1e-10;
constexpr double kLawTol = 1e-10;
constexpr double kIdentityTol = 1e-12;
constexpr double kInterchangeTol = 1e-10;
constexpr double kNoGoGap = 0.1;
constexpr double kGaugeLiteralTol = 1e-14;
constexpr double kGaugeFlatTol = 1e-10;
constexpr double kLiftTol = 1e-10;
constexpr double kExactTol = 1e-13;
constexpr double kLiftOrder = 3.8;
constexpr double kTransportTol = 1e-8;
constexpr double kTransportOrder = 1.9;
constexpr double kChenTol = 1e-10;
constexpr double kReparamTol = 1e-8;
constexpr double kCurvatureOrder = 1.9;
constexpr double kRefinementOrder = 2.0;
constexpr double kFdTol = 1e-6;

struct Verdict {
  bool ok = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const GroupTag kU1 = GroupTag::circle();
const GroupTag kSO3 = GroupTag::rotation();

GroupElement u1(double theta) { return {kU1, Matrix::Constant(1, 1, std::polar(1.0, theta))}; }

Matrix so3(double x, double y, double z) {
  Matrix m = Matrix::Zero(3, 3);
  m(1, 2) = -x;
  m(2, 1) = x;
  m(2, 0) = -y;
  m(0, 2) = y;
  m(0, 1) = -z;
  m(1, 0) = z;
  return m;
}

std::vector<expr::Expr> exprs(const std::vector<std::string>& src) {
  std::vector<expr::Expr> out;
  for (const auto& s : src) out.push_back(expr::parse(s, 0));
  return out;
}

DiscretePath path(const std::vector<std::string>& coords, int n) { return DiscretePath::from_expressions(exprs(coords), n); }

/// Smallest successive order estimate log(r_{k-1}/r_k)/log(n_k/n_{k-1}).
double min_order(const std::vector<double>& n, const std::vector<double>& r) {
  double worst = INFINITY;
  for (std::size_t k = 1; k < n.size(); ++k) worst = std::min(worst, std::log(r[k - 1] / r[k]) / std::log(n[k] / n[k - 1]));
  return worst;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

// 1 ------------------------------------------------------------------------

Verdict crossed_module_axioms_hold() {
  Verdict v;
  for (const auto& name : builtin_instance_names()) {
    const auto cm = builtin_instance(name);
    std::mt19937_64 rng(1001);
    double eq = 0.0, pf = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const GroupElement g = random_element(cm->g, rng);
      const GroupElement h = random_element(cm->h, rng);
      const GroupElement k = random_element(cm->h, rng);
      eq = std::max(eq, distance(cm->tau(cm->alpha(g, h)), g * cm->tau(h) * g.inverse()));
      pf = std::max(pf, distance(cm->alpha(cm->tau(h), k), h * k * h.inverse()));
    }
    v.ok = v.ok && eq <= kAxiomTol && pf <= kAxiomTol;
    v.detail += name + " " + fmt(std::max(eq, pf)) + "; ";
  }
  v.detail += "10^4 samples each, tol " + fmt(kAxiomTol);
  return v;
}

// 2 ------------------------------------------------------------------------

Plaquette above(const Plaquette& p, std::mt19937_64& rng) {
  const auto& cm = p.module();
  return make_flat_plaquette(p.c(), random_element(cm.g, rng), random_element(cm.g, rng), random_element(cm.h, rng),
                             p.module_ptr());
}

Plaquette right_of(const Plaquette& p, std::mt19937_64& rng) {
  const auto& cm = p.module();
  return make_flat_plaquette(random_element(cm.g, rng), random_element(cm.g, rng), p.b(), random_element(cm.h, rng),
                             p.module_ptr());
}

Verdict composition_closes() {
  Verdict v;
  for (const auto& name : builtin_instance_names()) {
    const auto cm = builtin_instance(name);
    std::mt19937_64 rng(2002);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Plaquette p = random_flat_plaquette(cm, rng);
      worst = std::max({worst, vcompose(p, above(p, rng)).flatness_residual(),
                        hcompose(p, right_of(p, rng)).flatness_residual()});
    }
    v.ok = v.ok && worst <= kClosureTol;
    v.detail += name + " " + fmt(worst) + "; ";
  }
  // the literal face formulas lose flatness on a nonabelian action
  const auto cm = builtin_instance("conjugation-so3");
  std::mt19937_64 rng(2003);
  double literal = 0.0;
  for (int i = 0; i < 100 && literal <= 1e-6; ++i) {
    const Plaquette p = random_flat_plaquette(cm, rng);
    literal = std::max(literal, vcompose(p, above(p, rng), CompositionConvention::literal).flatness_residual());
  }
  v.ok = v.ok && literal > 1e-6;
  v.detail += "literal counterexample on conjugation-so3 with residual " + fmt(literal);
  return v;
}

// 3 ------------------------------------------------------------------------

Verdict category_laws() {
  Verdict v;
  double id = 0.0, inv = 0.0, assoc = 0.0;
  for (const auto& name : builtin_instance_names()) {
    const auto cm = builtin_instance(name);
    std::mt19937_64 rng(3003);
    for (int i = 0; i < 1000; ++i) {
      const Plaquette p = random_flat_plaquette(cm, rng);
      id = std::max({id, plaquette_distance(vcompose(videntity(cm, p.a()), p), p),
                     plaquette_distance(vcompose(p, videntity(cm, p.c())), p),
                     plaquette_distance(hcompose(hidentity(cm, p.d()), p), p),
                     plaquette_distance(hcompose(p, hidentity(cm, p.b())), p)});
      inv = std::max({inv, plaquette_distance(vcompose(p, vinverse(p)), videntity(cm, p.a())),
                      plaquette_distance(vcompose(vinverse(p), p), videntity(cm, p.c())),
                      plaquette_distance(hcompose(p, hinverse(p)), hidentity(cm, p.d())),
                      plaquette_distance(hcompose(hinverse(p), p), hidentity(cm, p.b()))});
      const Plaquette q = above(p, rng), r = above(q, rng);
      const Plaquette s = right_of(p, rng), t = right_of(s, rng);
      assoc = std::max({assoc, plaquette_distance(vcompose(vcompose(p, q), r), vcompose(p, vcompose(q, r))),
                        plaquette_distance(hcompose(hcompose(p, s), t), hcompose(p, hcompose(s, t)))});
    }
  }
  v.ok = id <= kIdentityTol && inv <= kLawTol && assoc <= kLawTol;
  v.detail = "identity " + fmt(id) + ", inverse " + fmt(inv) + ", associativity " + fmt(assoc) +
             " over 10^3 samples per instance";
  return v;
}

// 4 ------------------------------------------------------------------------

Verdict interchange_law() {
  Verdict v;
  double worst = 0.0;
  for (const auto& name : builtin_instance_names()) {
    const auto cm = builtin_instance(name);
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const PlaquetteGrid w = random_flat_grid(cm, 2, 2, 4000 + s);
      worst = std::max(worst, interchange_residual(w.cell(0, 0), w.cell(0, 1), w.cell(1, 0), w.cell(1, 1)));
    }
  }
  const auto single = single_group_scheme(kSO3);
  double gap = 0.0;
  for (std::uint64_t s = 0; s < 1000 && gap < kNoGoGap; ++s) {
    const PlaquetteGrid w = random_flat_grid(single, 2, 2, 5000 + s);
    gap = std::max(gap, interchange_residual(w.cell(0, 0), w.cell(0, 1), w.cell(1, 0), w.cell(1, 1)));
  }
  v.ok = worst <= kInterchangeTol && gap >= kNoGoGap;
  v.detail = "crossed modules " + fmt(worst) + " over 10^3 windows each; single group " + fmt(gap);
  return v;
}

// 5 ------------------------------------------------------------------------

double phase_of(const GroupElement& g) { return std::arg(g.matrix()(0, 0)); }

Verdict gauge_transform_checks() {
  Verdict v;
  // literal formulas on U(1), written out as phase sums
  const auto abel = builtin_instance("abelian-circle");
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> th(-0.4, 0.4);
  double literal = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = th(rng), b = th(rng), d = th(rng), h = th(rng);
    const double u0 = th(rng), u1_ = th(rng), ut0 = th(rng), ut1 = th(rng), w = th(rng), wt = th(rng);
    const Plaquette p = make_flat_plaquette(u1(a), u1(b), u1(d), u1(h), abel);
    const double c = phase_of(p.c());
    const GaugeData gd{u1(u0), u1(u1_), u1(ut0), u1(ut1), u1(w), u1(wt)};
    const Plaquette q = gauge_transform(p, gd, GaugeVariant::literal);
    literal = std::max({literal, distance(q.a(), u1(u1_ + a + w - u0)), distance(q.b(), u1(ut0 + b - u0)),
                        distance(q.c(), u1(ut1 + c + wt - ut0)), distance(q.d(), u1(ut1 + b - u1_)),
                        distance(q.h(), u1(-w + h + wt))});
  }
  double flat = 0.0, fixed = 0.0;
  for (const auto& name : builtin_instance_names()) {
    const auto cm = builtin_instance(name);
    std::mt19937_64 r2(5006);
    for (int i = 0; i < 1000; ++i) {
      const Plaquette p = random_flat_plaquette(cm, r2);
      flat = std::max(flat, gauge_transform(p, random_gauge(*cm, r2), GaugeVariant::constraint_preserving).flatness_residual());
      fixed = std::max(fixed, plaquette_distance(gauge_transform(p, identity_gauge(*cm), GaugeVariant::constraint_preserving), p));
    }
  }
  v.ok = literal <= kGaugeLiteralTol && flat <= kGaugeFlatTol && fixed <= kIdentityTol;
  v.detail = "literal vs phase formulas " + fmt(literal) + "; constraint-preserving flatness " + fmt(flat) +
             " over 10^3 per instance; constraint-preserving identity gauge " + fmt(fixed);
  return v;
}

// 6 ------------------------------------------------------------------------

Verdict lift_accuracy() {
  Verdict v;
  const std::vector<double> ns = {125, 250, 500, 1000};
  struct Case {
    std::string name;
    ConnectionForm form;
    GroupElement exact;
  };
  const double w = 6.0;
  const std::vector<Case> cases = {
      {"abelian cos(20 x1)", ConnectionForm::parse(kU1, 2, {{"cos(20*x1)"}, {"0"}}), u1(-std::sin(20.0) / 20.0)},
      {"rotating frame", ConnectionForm::parse(kSO3, 2, {{"cos(6*x1)", "sin(6*x1)", "0"}, {"0", "0", "0"}}),
       exp_map(AlgebraElement(kSO3, so3(0, 0, w))) * exp_map(AlgebraElement(kSO3, -so3(1, 0, w)))}};
  for (const auto& c : cases) {
    std::vector<double> err;
    for (double n : ns) err.push_back(distance(holonomy(c.form, path({"t", "0"}, static_cast<int>(n))), c.exact));
    const double order = min_order(ns, err);
    v.ok = v.ok && err.back() <= kLiftTol && order >= kLiftOrder;
    v.detail += c.name + " err " + fmt(err.back()) + " order " + fmt(order) + "; ";
  }
  // constant coefficients: exact at any resolution
  double exact = 0.0;
  const ConnectionForm kappa = ConnectionForm::parse(kU1, 2, {{"1"}, {"0"}});
  const ConnectionForm omega = ConnectionForm::parse(kSO3, 2, {{"0.3", "-1.1", "0.8"}, {"0", "0", "0"}});
  for (int n : {8, 125, 1000}) {
    exact = std::max({exact, distance(holonomy(kappa, path({"t", "0"}, n)), u1(-1.0)),
                      distance(holonomy(kappa, path({"t", "0"}, n), LiftSign::positive), u1(1.0)),
                      distance(holonomy(omega, path({"t", "0"}, n)), exp_map(AlgebraElement(kSO3, -so3(0.3, -1.1, 0.8))))});
  }
  v.ok = v.ok && exact <= kExactTol;
  v.detail += "constant coefficients " + fmt(exact);
  return v;
}

// 7 ------------------------------------------------------------------------

Verdict transport_residuals() {
  const auto cm = builtin_instance("conjugation-so3");
  const ConnectionForm a =
      ConnectionForm::parse(kSO3, 3, {{"0.3*x2", "0.2", "0.1*x3"}, {"0.1", "0.2*x1*x3", "0"}, {"0.2*x1", "0", "0.1"}});
  const ConnectionForm abar =
      ConnectionForm::parse(kSO3, 3, {{"0.1", "0.2*x3", "0.3*x2"}, {"0.2*x1", "0", "0.1*x3"}, {"0", "0.3", "0.2*x1*x2"}});
  const TwoFormField b =
      TwoFormField::parse(kSO3, 3, {{{0, 1}, {"0.1*x3", "0.2", "0.1*x1"}}, {{1, 2}, {"0.1", "0", "0.2*x2"}}});
  auto solve = [&](int n) {
    const DiscretePath gamma = path({"0.4*sin(t)", "0.4*t^2", "0.2*cos(t)"}, n);
    const PathVariation x = PathVariation::from_expressions(exprs({"0.2*cos(t)", "0.1", "0.2*t"}), n);
    const LiftedPath lifted = horizontal_lift(abar, gamma, cm->g_identity());
    const LiftedVariation xt = lift_variation(a, abar, b, *cm, lifted, x);
    const auto profile = tangency_profile(abar, lifted, xt);
    return std::pair{pathspace_connection_value(a, b, *cm, lifted, xt).norm(),
                     *std::max_element(profile.begin(), profile.end())};
  };
  const auto [conn, tang] = solve(1000);
  const std::vector<double> ns = {100, 200, 400, 800};
  std::vector<double> rc, rt;
  for (double n : ns) {
    const auto [c, t] = solve(static_cast<int>(n));
    rc.push_back(c);
    rt.push_back(t);
  }
  const double oc = min_order(ns, rc), ot = min_order(ns, rt);
  Verdict v;
  v.ok = conn <= kTransportTol && tang <= kTransportTol && oc >= kTransportOrder && ot >= kTransportOrder;
  v.detail = "N=1000 connection " + fmt(conn) + ", tangency " + fmt(tang) + "; orders " + fmt(oc) + ", " + fmt(ot);
  return v;
}

// 8 ------------------------------------------------------------------------

Verdict chen_integrals() {
  const int n = 1000;
  auto var = [&](const std::vector<std::string>& c) { return PathVariation::from_expressions(exprs(c), n); };
  const TwoFormField constant = TwoFormField::parse(kSO3, 2, {{{0, 1}, {"1", "0", "0"}}});
  const TwoFormField poly = TwoFormField::parse(kSO3, 2, {{{0, 1}, {"x1", "0", "0"}}});
  const double e1 = (chen_integral_first(constant, path({"t", "0"}, n), var({"0", "1"})).matrix() - so3(1, 0, 0)).norm();
  const AlgebraElement third = chen_integral_first(poly, path({"t", "t^2"}, n), var({"1", "t"}));
  const double e2 = (third.matrix() - so3(-1.0 / 3.0, 0, 0)).norm();
  // abelian, with a nontrivial lift: the equivariant integral reduces to the plain one
  const auto abel = builtin_instance("abelian-circle");
  const TwoFormField beta = TwoFormField::parse(kU1, 2, {{{0, 1}, {"x1*x2"}}});
  const LiftedPath lifted =
      horizontal_lift(ConnectionForm::parse(kU1, 2, {{"1"}, {"x1"}}), path({"t", "t^2"}, n), abel->g_identity());
  const AlgebraElement eq = chen_integral_first(beta, *abel, lifted, var({"1", "t"}));
  // integrand t^3 (t - 2t) = -t^4
  const double e3 = std::abs(eq.matrix()(0, 0) - std::complex<double>(0.0, -0.2));
  const double closed = std::max({e1, e2, e3});
  double reparam = 0.0;
  for (const std::string phi : {"t^2", "sin(1.5707963267948966*t)"}) {
    const AlgebraElement r = chen_integral_first(poly, path({phi, "(" + phi + ")^2"}, n), var({"1", phi}));
    reparam = std::max(reparam, distance(r, third));
  }
  Verdict v;
  v.ok = closed <= kChenTol && reparam <= kReparamTol;
  v.detail = "closed forms " + fmt(closed) + ", reparameterization " + fmt(reparam);
  return v;
}

// 9 ------------------------------------------------------------------------

SurfaceMap centred_square(double x0, double y0, double eps) {
  char a[96], b[96];
  std::snprintf(a, sizeof a, "%.17g+%.17g*(t-0.5)", x0, eps);
  std::snprintf(b, sizeof b, "%.17g+%.17g*(s-0.5)", y0, eps);
  return SurfaceMap::parse({a, b});
}

Verdict surface_limits() {
  const auto cm = builtin_instance("conjugation-so3");
  const ConnectionForm a =
      ConnectionForm::parse(kSO3, 2, {{"0.3*x2", "0.2+x1*x2", "0.1*sin(x1)"}, {"0.5", "0.2*x1", "cos(x2)"}});
  const double x0 = 0.3, y0 = -0.2;
  Vector c(2);
  c << x0, y0;
  const double f = curvature(a, c, Vector::Unit(2, 0), Vector::Unit(2, 1)).norm();
  std::vector<double> inv, curv, refine;
  for (double e : {0.2, 0.1, 0.05, 0.025}) {
    const Plaquette p = plaquette_from_surface(centred_square(x0, y0, e), a, a, cm, 200);
    curv.push_back(std::abs(log_map(p.a().inverse() * p.b().inverse() * p.c() * p.d()).norm() / (e * e) - f));
    inv.push_back(1.0 / e);
  }
  std::vector<double> inv2;
  for (double e : {0.4, 0.2, 0.1, 0.05}) {
    const SurfaceMap s = centred_square(x0, y0, e);
    const Plaquette whole = plaquette_from_surface(s, a, a, cm, 8);
    std::vector<Plaquette> cells;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) cells.push_back(plaquette_from_surface(s.restrict(0.5 * j, 0.5 * (j + 1), 0.5 * i, 0.5 * (i + 1)), a, a, cm, 8));
    }
    refine.push_back(plaquette_distance(grid_compose(PlaquetteGrid(2, 2, cells), FoldOrder::rows_first), whole));
    inv2.push_back(1.0 / e);
  }
  const double oc = min_order(inv, curv), orf = min_order(inv2, refine);
  Verdict v;
  v.ok = oc >= kCurvatureOrder && orf >= kRefinementOrder;
  v.detail = "curvature limit residuals " + list(curv) + " order " + fmt(oc) + "; refinement " + list(refine) +
             " order " + fmt(orf);
  return v;
}

// 10 -----------------------------------------------------------------------

std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_real_distribution<double> lit(-2.0, 2.0);
  const char* vars[] = {"x1", "x2", "t"};
  switch (depth <= 0 ? rng() % 3 : rng() % 11) {
    case 0: return std::to_string(lit(rng));
    case 1:
    case 2: return vars[rng() % 3];
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 6: return random_expr(rng, depth - 1) + "/(2.5 + cos(" + random_expr(rng, depth - 1) + "))";
    case 7: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(1 + rng() % 3);
    case 8: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 9: return "exp(sin(" + random_expr(rng, depth - 1) + "))";
    default: return "-" + random_expr(rng, depth - 1);
  }
}

Verdict expression_language() {
  std::mt19937_64 rng(10010);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const expr::Expr e = expr::parse(random_expr(rng, 4), 2);
    const expr::Var var = i % 3 == 2 ? expr::Var::t() : expr::Var::coord(1 + i % 3);
    const expr::Expr de = e.derivative(var);
    for (int k = 0; k < 10; ++k) {
      double x[2] = {u(rng), u(rng)};
      double t = u(rng);
      double& slot = var.kind == expr::Var::Kind::t ? t : x[var.index - 1];
      auto f = [&] { return e.eval(expr::Bindings{x, t, std::nullopt}); };
      const double base = slot;
      slot = base + h;
      const double fp = f();
      slot = base - h;
      const double fm = f();
      slot = base;
      const double exact = de.eval(expr::Bindings{x, t, std::nullopt});
      worst = std::max(worst, std::abs(exact - (fp - fm) / (2 * h)) / std::max(1.0, std::abs(exact)));
    }
  }
  int other = 0, rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string src(rng() % 32, '\0');
    for (auto& ch : src) ch = static_cast<char>(rng() % 256);
    try {
      expr::parse(src, 3);
    } catch (const expr::ParseError&) {
      ++rejected;
    } catch (...) {
      ++other;
    }
  }
  Verdict v;
  v.ok = worst <= kFdTol && other == 0;
  v.detail = "derivative vs central difference " + fmt(worst) + " over 100x10; fuzz 10^4 inputs, " +
             std::to_string(rejected) + " parse errors, " + std::to_string(other) + " other failures";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"crossed-module axioms", crossed_module_axioms_hold},
      {"composition closure", composition_closes},
      {"category laws", category_laws},
      {"interchange and no-go", interchange_law},
      {"gauge transformation", gauge_transform_checks},
      {"horizontal lift accuracy", lift_accuracy},
      {"path-space transport", transport_residuals},
      {"Chen integrals", chen_integrals},
      {"curvature limit and refinement", surface_limits},
      {"expression language", expression_language},
  };
  int failed = 0, index = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.ok) ++failed;
    std::printf("[%s] %d %s: %s\n", v.ok ? "PASS" : "FAIL", index, name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1f s\n", index - failed, criteria.size(), secs);
  return failed == 0 ? 0 : 1;
}
