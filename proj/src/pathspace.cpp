#include "surfhol/pathspace.hpp"

#include <algorithm>
#include <cmath>

#include "surfhol/errors.hpp"

namespace surfhol {

namespace {

void require_dim(long got, long want, const char* what) {
  if (got != want) {
    throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(got) + " vs " +
                     std::to_string(want) + ")");
  }
}

void require_grid(int got, int want, const char* what) {
  if (got != want) {
    throw UsageError(std::string(what) + ": sampling grids differ (" + std::to_string(got) + " vs " +
                     std::to_string(want) + " intervals)");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NumericalError(std::string(what) + ": non-finite value");
}

double eval_at(const expr::Expr& e, const Vector& x) {
  return e.eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

/// dexp^-1 truncated after the terms that matter for a fourth-order method.
AlgebraElement dexpinv(const AlgebraElement& theta, const AlgebraElement& k) {
  const AlgebraElement tk = bracket(theta, k);
  return k - 0.5 * tk + (1.0 / 12.0) * bracket(theta, tk);
}

}  // namespace

// --- paths ----------------------------------------------------------------

DiscretePath::DiscretePath(int dim, std::vector<Vector> samples, Curve curve)
    : dim_(dim), samples_(std::move(samples)), curve_(std::move(curve)) {
  if (static_cast<int>(samples_.size()) - 1 < kMinIntervals) {
    throw UsageError("path needs at least " + std::to_string(kMinIntervals) + " intervals");
  }
  for (const auto& s : samples_) {
    require_dim(s.size(), dim_, "path sample");
    require_finite(s, "path sample");
  }
}

DiscretePath DiscretePath::from_curve(int dim, int intervals, Curve curve) {
  if (intervals < kMinIntervals) {
    throw UsageError("path needs at least " + std::to_string(kMinIntervals) + " intervals");
  }
  std::vector<Vector> samples;
  samples.reserve(static_cast<std::size_t>(intervals + 1));
  for (int k = 0; k <= intervals; ++k) samples.push_back(curve.position(static_cast<double>(k) / intervals));
  return {dim, std::move(samples), std::move(curve)};
}

DiscretePath DiscretePath::from_expressions(const std::vector<expr::Expr>& coords, int intervals) {
  std::vector<expr::Expr> rates;
  for (const auto& c : coords) rates.push_back(c.derivative(expr::Var::t()));
  auto eval_all = [](const std::vector<expr::Expr>& es) {
    return [es](double t) {
      Vector out(static_cast<Eigen::Index>(es.size()));
      for (std::size_t i = 0; i < es.size(); ++i) out(static_cast<Eigen::Index>(i)) = es[i].eval({{}, t, std::nullopt});
      return out;
    };
  };
  return from_curve(static_cast<int>(coords.size()), intervals, Curve{eval_all(coords), eval_all(rates)});
}

DiscretePath DiscretePath::from_samples(std::vector<Vector> samples) {
  if (samples.empty()) throw UsageError("path without samples");
  const int dim = static_cast<int>(samples.front().size());
  return {dim, std::move(samples), Curve{}};
}

Vector DiscretePath::position(double t) const {
  if (curve_.position) return curve_.position(t);
  const int n = intervals();
  const double u = std::clamp(t, 0.0, 1.0) * n;
  const int k = std::min(static_cast<int>(std::floor(u)), n - 1);
  const double w = u - k;
  return (1.0 - w) * sample(k) + w * sample(k + 1);
}

Vector DiscretePath::velocity(double t) const {
  if (curve_.velocity) return curve_.velocity(t);
  const int n = intervals();
  const double u = std::clamp(t, 0.0, 1.0) * n;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-9) return sample_velocity(static_cast<int>(nearest));
  const int k = std::min(static_cast<int>(std::floor(u)), n - 1);
  return (sample(k + 1) - sample(k)) * n;
}

Vector DiscretePath::velocity_at(int k) const {
  if (curve_.velocity) return curve_.velocity(parameter(k));
  return sample_velocity(k);
}

Vector DiscretePath::sample_velocity(int k) const {
  const int n = intervals();
  const double inv2h = 0.5 * n;
  if (k == 0) return (-3.0 * sample(0) + 4.0 * sample(1) - sample(2)) * inv2h;
  if (k == n) return (3.0 * sample(n) - 4.0 * sample(n - 1) + sample(n - 2)) * inv2h;
  return (sample(k + 1) - sample(k - 1)) * inv2h;
}

PathVariation::PathVariation(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  if (static_cast<int>(vectors_.size()) - 1 < DiscretePath::kMinIntervals) {
    throw UsageError("variation needs at least " + std::to_string(DiscretePath::kMinIntervals) + " intervals");
  }
  for (const auto& v : vectors_) {
    require_dim(v.size(), vectors_.front().size(), "variation vector");
    require_finite(v, "variation vector");
  }
}

PathVariation PathVariation::from_function(int intervals, const std::function<Vector(double)>& f) {
  std::vector<Vector> out;
  for (int k = 0; k <= intervals; ++k) out.push_back(f(static_cast<double>(k) / intervals));
  return PathVariation(std::move(out));
}

PathVariation PathVariation::from_expressions(const std::vector<expr::Expr>& coords, int intervals) {
  return from_function(intervals, [&](double t) {
    Vector out(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) out(static_cast<Eigen::Index>(i)) = coords[i].eval({{}, t, std::nullopt});
    return out;
  });
}

// --- forms ----------------------------------------------------------------

ConnectionForm::ConnectionForm(GroupTag algebra, int dim, std::vector<std::vector<expr::Expr>> coeffs)
    : algebra_(algebra), dim_(dim), coeffs_(std::move(coeffs)) {
  require_dim(static_cast<long>(coeffs_.size()), dim_, "connection form components");
  partials_.resize(coeffs_.size());
  for (std::size_t mu = 0; mu < coeffs_.size(); ++mu) {
    require_dim(static_cast<long>(coeffs_[mu].size()), algebra_.algebra_dim(), "connection form coefficients");
    for (int nu = 0; nu < dim_; ++nu) {
      std::vector<expr::Expr> row;
      for (const auto& c : coeffs_[mu]) row.push_back(c.derivative(expr::Var::coord(nu + 1)));
      partials_[mu].push_back(std::move(row));
    }
  }
}

ConnectionForm ConnectionForm::parse(GroupTag algebra, int dim, const std::vector<std::vector<std::string>>& coeffs) {
  std::vector<std::vector<expr::Expr>> parsed;
  for (const auto& row : coeffs) {
    std::vector<expr::Expr> out;
    for (const auto& src : row) out.push_back(expr::parse(src, dim));
    parsed.push_back(std::move(out));
  }
  return {algebra, dim, std::move(parsed)};
}

ConnectionForm ConnectionForm::zero(GroupTag algebra, int dim) {
  std::vector<std::vector<expr::Expr>> coeffs(
      static_cast<std::size_t>(dim),
      std::vector<expr::Expr>(static_cast<std::size_t>(algebra.algebra_dim()), expr::Expr::number(0.0)));
  return {algebra, dim, std::move(coeffs)};
}

AlgebraElement ConnectionForm::assemble(const std::vector<expr::Expr>& coeffs, const Vector& x) const {
  Vector c(algebra_.algebra_dim());
  for (std::size_t k = 0; k < coeffs.size(); ++k) c(static_cast<Eigen::Index>(k)) = eval_at(coeffs[k], x);
  require_finite(c, "connection coefficient");
  return AlgebraElement::from_coordinates(algebra_, c);
}

AlgebraElement ConnectionForm::component(int mu, const Vector& x) const {
  require_dim(x.size(), dim_, "connection form point");
  return assemble(coeffs_[static_cast<std::size_t>(mu)], x);
}

AlgebraElement ConnectionForm::partial(int mu, int nu, const Vector& x) const {
  require_dim(x.size(), dim_, "connection form point");
  return assemble(partials_[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)], x);
}

TwoFormField::TwoFormField(GroupTag algebra, int dim, Components upper)
    : algebra_(algebra), dim_(dim), upper_(std::move(upper)) {
  for (const auto& [key, coeffs] : upper_) {
    if (key.first < 0 || key.second >= dim_ || key.first >= key.second) {
      throw UsageError("two-form components must satisfy 0 <= mu < nu < dim");
    }
    require_dim(static_cast<long>(coeffs.size()), algebra_.algebra_dim(), "two-form coefficients");
  }
}

TwoFormField TwoFormField::parse(GroupTag algebra, int dim,
                                 const std::map<std::pair<int, int>, std::vector<std::string>>& upper) {
  Components parsed;
  for (const auto& [key, row] : upper) {
    std::vector<expr::Expr> out;
    for (const auto& src : row) out.push_back(expr::parse(src, dim));
    parsed.emplace(key, std::move(out));
  }
  return {algebra, dim, std::move(parsed)};
}

TwoFormField TwoFormField::zero(GroupTag algebra, int dim) { return {algebra, dim, {}}; }

AlgebraElement TwoFormField::component(int mu, int nu, const Vector& x) const {
  require_dim(x.size(), dim_, "two-form point");
  if (mu == nu) return AlgebraElement::zero(algebra_);
  const bool swapped = mu > nu;
  const auto it = upper_.find(swapped ? std::pair{nu, mu} : std::pair{mu, nu});
  if (it == upper_.end()) return AlgebraElement::zero(algebra_);
  Vector c(algebra_.algebra_dim());
  for (std::size_t k = 0; k < it->second.size(); ++k) c(static_cast<Eigen::Index>(k)) = eval_at(it->second[k], x);
  require_finite(c, "two-form coefficient");
  const AlgebraElement value = AlgebraElement::from_coordinates(algebra_, c);
  return swapped ? -value : value;
}

AlgebraElement eval_form(const ConnectionForm& a, const Vector& x, const Vector& v) {
  require_dim(v.size(), a.dim(), "eval_form");
  AlgebraElement out = AlgebraElement::zero(a.algebra());
  for (int mu = 0; mu < a.dim(); ++mu) {
    if (v(mu) != 0.0) out += v(mu) * a.component(mu, x);
  }
  return out;
}

AlgebraElement eval_two_form(const TwoFormField& b, const Vector& x, const Vector& v, const Vector& w) {
  require_dim(v.size(), b.dim(), "eval_two_form");
  require_dim(w.size(), b.dim(), "eval_two_form");
  AlgebraElement out = AlgebraElement::zero(b.algebra());
  for (int mu = 0; mu < b.dim(); ++mu) {
    for (int nu = mu + 1; nu < b.dim(); ++nu) {
      const double weight = v(mu) * w(nu) - v(nu) * w(mu);
      if (weight != 0.0) out += weight * b.component(mu, nu, x);
    }
  }
  return out;
}

AlgebraElement curvature(const ConnectionForm& a, const Vector& x, const Vector& v, const Vector& w) {
  require_dim(v.size(), a.dim(), "curvature");
  require_dim(w.size(), a.dim(), "curvature");
  const int n = a.dim();
  std::vector<AlgebraElement> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int mu = 0; mu < n; ++mu) comps.push_back(a.component(mu, x));
  AlgebraElement out = AlgebraElement::zero(a.algebra());
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu + 1; nu < n; ++nu) {
      const double weight = v(mu) * w(nu) - v(nu) * w(mu);
      if (weight == 0.0) continue;
      const AlgebraElement f = a.partial(nu, mu, x) - a.partial(mu, nu, x) +
                               bracket(comps[static_cast<std::size_t>(mu)], comps[static_cast<std::size_t>(nu)]);
      out += weight * f;
    }
  }
  return out;
}

AlgebraElement equivariant_two_form(const TwoFormField& b, const CrossedModule& cm, const Vector& x,
                                    const GroupElement& g, const BundleVector& v, const BundleVector& w) {
  require_same_tag(b.algebra(), cm.h, "equivariant_two_form B");
  require_same_tag(g.tag(), cm.g, "equivariant_two_form g");
  return cm.alpha_alg(g.inverse(), eval_two_form(b, x, v.base, w.base));
}

// --- horizontal lift ------------------------------------------------------

LiftedPath horizontal_lift(const ConnectionForm& abar, const DiscretePath& path, const GroupElement& g0,
                           LiftSign sign) {
  require_same_tag(abar.algebra(), g0.tag(), "horizontal_lift");
  require_dim(path.dim(), abar.dim(), "horizontal_lift");
  const double s = sign == LiftSign::negative ? -1.0 : 1.0;
  auto generator = [&](double t) { return s * eval_form(abar, path.position(t), path.velocity(t)); };

  const int n = path.intervals();
  const double h = path.step();
  std::vector<GroupElement> group;
  group.reserve(static_cast<std::size_t>(n + 1));
  group.push_back(g0);
  for (int k = 0; k < n; ++k) {
    const double t = path.parameter(k);
    const AlgebraElement k1 = generator(t);
    const AlgebraElement mid = generator(t + 0.5 * h);
    const AlgebraElement k2 = dexpinv((0.5 * h) * k1, mid);
    const AlgebraElement k3 = dexpinv((0.5 * h) * k2, mid);
    const AlgebraElement k4 = dexpinv(h * k3, generator(t + h));
    const AlgebraElement theta = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    group.push_back(exp_map(theta) * group.back());
  }
  return {path, std::move(group)};
}

GroupElement holonomy(const ConnectionForm& a, const DiscretePath& path, LiftSign sign) {
  return horizontal_lift(a, path, GroupElement::identity(a.algebra()), sign).group.back();
}

double horizontality_residual(const ConnectionForm& abar, const LiftedPath& lifted) {
  const DiscretePath& path = lifted.base;
  const int n = path.intervals();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto& g0 = lifted.group[static_cast<std::size_t>(k)];
    const auto& g1 = lifted.group[static_cast<std::size_t>(k + 1)];
    const AlgebraElement rate = log_map(g1 * g0.inverse()) * static_cast<double>(n);
    const Vector x_mid = 0.5 * (path.sample(k) + path.sample(k + 1));
    const Vector v_mid = (path.sample(k + 1) - path.sample(k)) * n;
    worst = std::max(worst, (rate + eval_form(abar, x_mid, v_mid)).norm());
  }
  return worst;
}

double group_drift(const LiftedPath& lifted) {
  double worst = 0.0;
  for (const auto& g : lifted.group) worst = std::max(worst, g.constraint_violation());
  return worst;
}

// --- Chen integrals -------------------------------------------------------

AlgebraElement simpson(const std::vector<AlgebraElement>& values, double step) {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 2) throw UsageError("simpson needs at least two intervals");
  AlgebraElement acc = AlgebraElement::zero(values.front().tag());
  const int even = (n % 2 == 0) ? n : n - 3;
  for (int k = 0; k + 2 <= even; k += 2) {
    acc += (step / 3.0) * (values[static_cast<std::size_t>(k)] + 4.0 * values[static_cast<std::size_t>(k + 1)] +
                           values[static_cast<std::size_t>(k + 2)]);
  }
  if (even != n) {
    const auto at = [&](int i) -> const AlgebraElement& { return values[static_cast<std::size_t>(i)]; };
    acc += (3.0 * step / 8.0) * (at(n - 3) + 3.0 * at(n - 2) + 3.0 * at(n - 1) + at(n));
  }
  return acc;
}

AlgebraElement chen_integral_first(const TwoFormField& b, const DiscretePath& path, const PathVariation& x) {
  require_grid(x.intervals(), path.intervals(), "chen_integral_first");
  require_dim(x.dim(), path.dim(), "chen_integral_first");
  std::vector<AlgebraElement> integrand;
  integrand.reserve(path.samples().size());
  for (int k = 0; k <= path.intervals(); ++k) {
    integrand.push_back(eval_two_form(b, path.sample(k), path.velocity_at(k), x.at(k)));
  }
  return simpson(integrand, path.step());
}

AlgebraElement chen_integral_first(const TwoFormField& b, const CrossedModule& cm, const LiftedPath& lifted,
                                   const PathVariation& x) {
  const DiscretePath& path = lifted.base;
  require_grid(x.intervals(), path.intervals(), "chen_integral_first");
  require_dim(x.dim(), path.dim(), "chen_integral_first");
  const AlgebraElement no_fibre = AlgebraElement::zero(cm.g);
  std::vector<AlgebraElement> integrand;
  integrand.reserve(path.samples().size());
  for (int k = 0; k <= path.intervals(); ++k) {
    integrand.push_back(equivariant_two_form(b, cm, path.sample(k), lifted.group[static_cast<std::size_t>(k)],
                                             {path.velocity_at(k), no_fibre}, {x.at(k), no_fibre}));
  }
  return simpson(integrand, path.step());
}

// --- transport of variations ----------------------------------------------

LiftedVariation horizontal_variation(const ConnectionForm& abar, const LiftedPath& lifted, const PathVariation& x) {
  require_grid(x.intervals(), lifted.base.intervals(), "horizontal_variation");
  LiftedVariation out{x, {}, {}};
  for (int k = 0; k <= x.intervals(); ++k) {
    const auto& g = lifted.group[static_cast<std::size_t>(k)];
    out.vertical.push_back(AlgebraElement::zero(abar.algebra()));
    out.fibre.push_back(-adjoint(g.inverse(), eval_form(abar, lifted.base.sample(k), x.at(k))));
  }
  return out;
}

LiftedVariation lift_variation(const ConnectionForm& a, const ConnectionForm& abar, const TwoFormField& b,
                               const CrossedModule& cm, const LiftedPath& lifted, const PathVariation& x) {
  require_same_tag(a.algebra(), cm.g, "lift_variation A");
  require_same_tag(abar.algebra(), cm.g, "lift_variation abar");
  require_same_tag(b.algebra(), cm.h, "lift_variation B");
  const DiscretePath& path = lifted.base;
  require_grid(x.intervals(), path.intervals(), "lift_variation");
  require_dim(x.dim(), path.dim(), "lift_variation");

  const int n = path.intervals();
  const double h = path.step();
  auto g_at = [&](int k) -> const GroupElement& { return lifted.group[static_cast<std::size_t>(k)]; };

  // iota' = Ad(g^-1) F^abar(gamma', X) on the grid.
  std::vector<AlgebraElement> rate;
  rate.reserve(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    rate.push_back(adjoint(g_at(k).inverse(), curvature(abar, path.sample(k), path.velocity_at(k), x.at(k))));
  }

  const AlgebraElement chen = chen_integral_first(b, cm, lifted, x);
  const Vector& x_end = path.sample(n);
  const AlgebraElement a_minus_abar = eval_form(a, x_end, x.at(n)) - eval_form(abar, x_end, x.at(n));
  const AlgebraElement iota_end = -adjoint(g_at(n).inverse(), a_minus_abar) - cm.tau_alg(chen);

  // Backward cumulative integration with cubic (four-point) local quadrature.
  auto f = [&](int i) -> const AlgebraElement& { return rate[static_cast<std::size_t>(i)]; };
  auto interval_integral = [&](int k) {
    if (k == 0) return (h / 24.0) * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
    if (k == n - 1) return (h / 24.0) * (f(n - 3) - 5.0 * f(n - 2) + 19.0 * f(n - 1) + 9.0 * f(n));
    return (h / 24.0) * (-1.0 * f(k - 1) + 13.0 * f(k) + 13.0 * f(k + 1) - f(k + 2));
  };
  std::vector<AlgebraElement> iota(static_cast<std::size_t>(n + 1), iota_end);
  for (int k = n - 1; k >= 0; --k) {
    iota[static_cast<std::size_t>(k)] = iota[static_cast<std::size_t>(k + 1)] - interval_integral(k);
  }

  LiftedVariation out{x, std::move(iota), {}};
  out.fibre.reserve(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    out.fibre.push_back(-adjoint(g_at(k).inverse(), eval_form(abar, path.sample(k), x.at(k))) +
                        out.vertical[static_cast<std::size_t>(k)]);
  }
  return out;
}

AlgebraElement pathspace_connection_value(const ConnectionForm& a, const TwoFormField& b, const CrossedModule& cm,
                                          const LiftedPath& lifted, const LiftedVariation& xt) {
  require_same_tag(a.algebra(), cm.g, "pathspace_connection_value A");
  require_grid(xt.base.intervals(), lifted.base.intervals(), "pathspace_connection_value");
  const int n = lifted.base.intervals();
  const GroupElement& g_end = lifted.group.back();
  const AlgebraElement endpoint =
      adjoint(g_end.inverse(), eval_form(a, lifted.base.sample(n), xt.base.at(n))) + xt.fibre.back();
  const LiftedPath discrete{lifted.base.sampled_only(), lifted.group};
  return endpoint + cm.tau_alg(chen_integral_first(b, cm, discrete, xt.base));
}

namespace {

/// Residuals for k = 0..k_end of the integrated tangency condition.
std::vector<double> tangency_residuals(const ConnectionForm& abar, const LiftedPath& lifted, const LiftedVariation& xt,
                                       int k_end) {
  const DiscretePath& path = lifted.base;
  auto g_at = [&](int k) -> const GroupElement& { return lifted.group[static_cast<std::size_t>(k)]; };
  auto abar_p = [&](int k) {
    return adjoint(g_at(k).inverse(), eval_form(abar, path.sample(k), xt.base.at(k))) +
           xt.fibre[static_cast<std::size_t>(k)];
  };
  auto integrand = [&](int k) {
    return adjoint(g_at(k).inverse(), curvature(abar, path.sample(k), path.sample_velocity(k), xt.base.at(k)));
  };

  const AlgebraElement start = abar_p(0);
  AlgebraElement integral = AlgebraElement::zero(abar.algebra());
  AlgebraElement prev = integrand(0);
  std::vector<double> out{0.0};
  for (int k = 1; k <= k_end; ++k) {
    const AlgebraElement next = integrand(k);
    integral += (0.5 * path.step()) * (prev + next);
    out.push_back((abar_p(k) - start - integral).norm());
    prev = next;
  }
  return out;
}

}  // namespace

double tangency_residual(const ConnectionForm& abar, const LiftedPath& lifted, const LiftedVariation& xt, double t) {
  const int n = lifted.base.intervals();
  require_grid(xt.base.intervals(), n, "tangency_residual");
  const double u = t * n;
  const double kt = std::round(u);
  if (t < 0.0 || t > 1.0 || std::abs(u - kt) > 1e-9 * n) {
    throw UsageError("tangency_residual: T=" + std::to_string(t) + " is not a grid parameter");
  }
  const int k_end = static_cast<int>(kt);
  return tangency_residuals(abar, lifted, xt, k_end).back();
}

std::vector<double> tangency_profile(const ConnectionForm& abar, const LiftedPath& lifted, const LiftedVariation& xt) {
  require_grid(xt.base.intervals(), lifted.base.intervals(), "tangency_profile");
  return tangency_residuals(abar, lifted, xt, lifted.base.intervals());
}

// --- surfaces -------------------------------------------------------------

SurfaceMap::SurfaceMap(std::vector<expr::Expr> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw UsageError("surface map needs at least one coordinate");
  for (const auto& c : coords_) {
    dt_.push_back(c.derivative(expr::Var::t()));
    ds_.push_back(c.derivative(expr::Var::s()));
  }
}

SurfaceMap SurfaceMap::parse(const std::vector<std::string>& coords) {
  std::vector<expr::Expr> parsed;
  for (const auto& src : coords) parsed.push_back(expr::parse(src, 0));
  return SurfaceMap(std::move(parsed));
}

SurfaceMap SurfaceMap::plane_chart(int dim, int axis_t, int axis_s) {
  if (axis_t < 0 || axis_s < 0 || axis_t >= dim || axis_s >= dim || axis_t == axis_s) {
    throw UsageError("plane_chart: invalid axes");
  }
  std::vector<expr::Expr> coords(static_cast<std::size_t>(dim), expr::Expr::number(0.0));
  coords[static_cast<std::size_t>(axis_t)] = expr::Expr::variable(expr::Var::t());
  coords[static_cast<std::size_t>(axis_s)] = expr::Expr::variable(expr::Var::s());
  return SurfaceMap(std::move(coords));
}

SurfaceMap SurfaceMap::restrict(double t0, double t1, double s0, double s1) const {
  SurfaceMap out = *this;
  out.t0_ = t0_ + t0 * (t1_ - t0_);
  out.t1_ = t0_ + t1 * (t1_ - t0_);
  out.s0_ = s0_ + s0 * (s1_ - s0_);
  out.s1_ = s0_ + s1 * (s1_ - s0_);
  return out;
}

namespace {

Vector eval_coords(const std::vector<expr::Expr>& es, double t, double s, double scale) {
  Vector out(static_cast<Eigen::Index>(es.size()));
  for (std::size_t i = 0; i < es.size(); ++i) out(static_cast<Eigen::Index>(i)) = scale * es[i].eval({{}, t, s});
  return out;
}

}  // namespace

Vector SurfaceMap::position(double t, double s) const {
  return eval_coords(coords_, t0_ + t * (t1_ - t0_), s0_ + s * (s1_ - s0_), 1.0);
}

Vector SurfaceMap::d_dt(double t, double s) const {
  return eval_coords(dt_, t0_ + t * (t1_ - t0_), s0_ + s * (s1_ - s0_), t1_ - t0_);
}

Vector SurfaceMap::d_ds(double t, double s) const {
  return eval_coords(ds_, t0_ + t * (t1_ - t0_), s0_ + s * (s1_ - s0_), s1_ - s0_);
}

DiscretePath SurfaceMap::t_edge(double s, int intervals) const {
  const SurfaceMap self = *this;
  return DiscretePath::from_curve(dim(), intervals,
                                  Curve{[self, s](double t) { return self.position(t, s); },
                                        [self, s](double t) { return self.d_dt(t, s); }});
}

DiscretePath SurfaceMap::s_edge(double t, int intervals) const {
  const SurfaceMap self = *this;
  return DiscretePath::from_curve(dim(), intervals,
                                  Curve{[self, t](double s) { return self.position(t, s); },
                                        [self, t](double s) { return self.d_ds(t, s); }});
}

Plaquette plaquette_from_surface(const SurfaceMap& surface, const ConnectionForm& a, const ConnectionForm& abar,
                                 CrossedModulePtr cm, int intervals) {
  if (!cm->tau_invertible()) {
    throw UnsupportedInstance("plaquette_from_surface needs an invertible tau; '" + cm->name + "' has none");
  }
  require_same_tag(a.algebra(), cm->g, "plaquette_from_surface A");
  require_same_tag(abar.algebra(), cm->g, "plaquette_from_surface abar");
  require_dim(surface.dim(), a.dim(), "plaquette_from_surface");
  const GroupElement ea = holonomy(abar, surface.t_edge(0.0, intervals));
  const GroupElement ec = holonomy(abar, surface.t_edge(1.0, intervals));
  const GroupElement ed = holonomy(a, surface.s_edge(0.0, intervals));
  const GroupElement eb = holonomy(a, surface.s_edge(1.0, intervals));
  const GroupElement h = cm->tau_inverse(ea.inverse() * eb.inverse() * ec * ed);
  return {std::move(cm), ea, eb, ec, ed, h};
}

}  // namespace surfhol
