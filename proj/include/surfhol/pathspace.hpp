#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "surfhol/algebra.hpp"
#include "surfhol/crossed_module.hpp"
#include "surfhol/exprlang.hpp"
#include "surfhol/plaquette.hpp"

// Numerical layer on the trivial bundle P = R^n x G. A point of P is (x, g); a
// tangent vector at (x, g) is stored as its base component v together with the
// left-trivialized fibre velocity zeta = g^-1 dg (an element of LG). For a
// connection A on the base, the bundle connection form evaluates to
//   A_P(v, zeta) = Ad(g^-1) A_x(v) + zeta.

namespace surfhol {

/// Smooth parameterized curve t -> R^n with its exact velocity.
struct Curve {
  std::function<Vector(double)> position;
  std::function<Vector(double)> velocity;
};

/// Path sampled at t_k = k/N, k = 0..N, on I = [0, 1].
///
/// A path built from a Curve (or expressions) answers position/velocity queries
/// exactly; a path built from samples alone uses second-order finite
/// differences and linear interpolation.
class DiscretePath {
 public:
  static constexpr int kMinIntervals = 8;

  static DiscretePath from_curve(int dim, int intervals, Curve curve);
  /// One expression in t per coordinate; velocities by symbolic differentiation.
  static DiscretePath from_expressions(const std::vector<expr::Expr>& coords, int intervals);
  static DiscretePath from_samples(std::vector<Vector> samples);

  int dim() const { return dim_; }
  int intervals() const { return static_cast<int>(samples_.size()) - 1; }
  double step() const { return 1.0 / intervals(); }
  double parameter(int k) const { return static_cast<double>(k) / intervals(); }
  const std::vector<Vector>& samples() const { return samples_; }
  const Vector& sample(int k) const { return samples_[static_cast<std::size_t>(k)]; }
  bool has_curve() const { return static_cast<bool>(curve_.position); }

  Vector position(double t) const;
  Vector velocity(double t) const;
  /// Velocity at node k: exact when a curve is attached, else sample_velocity(k).
  Vector velocity_at(int k) const;
  /// Second-order finite-difference velocity from the samples alone.
  Vector sample_velocity(int k) const;
  /// Copy that forgets the curve, so every derivative comes from the samples.
  DiscretePath sampled_only() const { return from_samples(samples_); }

 private:
  DiscretePath(int dim, std::vector<Vector> samples, Curve curve);

  int dim_;
  std::vector<Vector> samples_;
  Curve curve_;
};

/// Tangent vector X(t_k) attached at every sample of a path.
class PathVariation {
 public:
  explicit PathVariation(std::vector<Vector> vectors);
  static PathVariation from_function(int intervals, const std::function<Vector(double)>& f);
  /// One expression in t per coordinate.
  static PathVariation from_expressions(const std::vector<expr::Expr>& coords, int intervals);

  int intervals() const { return static_cast<int>(vectors_.size()) - 1; }
  int dim() const { return static_cast<int>(vectors_.front().size()); }
  const Vector& at(int k) const { return vectors_[static_cast<std::size_t>(k)]; }
  const std::vector<Vector>& vectors() const { return vectors_; }

 private:
  std::vector<Vector> vectors_;
};

/// Lie-algebra-valued 1-form sum_mu A_mu(x) dx^mu. Each A_mu is given by one
/// coefficient expression per basis element of the algebra. Partial derivatives
/// are taken symbolically once, at construction.
class ConnectionForm {
 public:
  /// coeffs[mu][k]: coefficient of basis element k in A_mu.
  ConnectionForm(GroupTag algebra, int dim, std::vector<std::vector<expr::Expr>> coeffs);
  static ConnectionForm parse(GroupTag algebra, int dim, const std::vector<std::vector<std::string>>& coeffs);
  static ConnectionForm zero(GroupTag algebra, int dim);

  GroupTag algebra() const { return algebra_; }
  int dim() const { return dim_; }
  AlgebraElement component(int mu, const Vector& x) const;
  /// d A_mu / d x^nu
  AlgebraElement partial(int mu, int nu, const Vector& x) const;

 private:
  AlgebraElement assemble(const std::vector<expr::Expr>& coeffs, const Vector& x) const;

  GroupTag algebra_;
  int dim_;
  std::vector<std::vector<expr::Expr>> coeffs_;
  std::vector<std::vector<std::vector<expr::Expr>>> partials_;  // [mu][nu][k]
};

/// Antisymmetric LH-valued 2-form; only components mu < nu are stored.
class TwoFormField {
 public:
  using Components = std::map<std::pair<int, int>, std::vector<expr::Expr>>;

  /// Keys are 0-based (mu, nu) with mu < nu; missing pairs are zero.
  TwoFormField(GroupTag algebra, int dim, Components upper);
  static TwoFormField parse(GroupTag algebra, int dim,
                            const std::map<std::pair<int, int>, std::vector<std::string>>& upper);
  static TwoFormField zero(GroupTag algebra, int dim);

  GroupTag algebra() const { return algebra_; }
  int dim() const { return dim_; }
  /// B_{mu nu}(x), with B_{nu mu} = -B_{mu nu} and B_{mu mu} = 0.
  AlgebraElement component(int mu, int nu, const Vector& x) const;

 private:
  GroupTag algebra_;
  int dim_;
  Components upper_;
};

/// sum_mu A_mu(x) v^mu
AlgebraElement eval_form(const ConnectionForm& a, const Vector& x, const Vector& v);
/// sum_{mu<nu} B_{mu nu}(x) (v^mu w^nu - v^nu w^mu)
AlgebraElement eval_two_form(const TwoFormField& b, const Vector& x, const Vector& v, const Vector& w);
/// F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu], contracted with (v, w).
AlgebraElement curvature(const ConnectionForm& a, const Vector& x, const Vector& v, const Vector& w);

/// Tangent vector to the bundle at (x, g): base part and left-trivialized fibre part.
struct BundleVector {
  Vector base;
  AlgebraElement fibre;
};

/// Value of the alpha-equivariant extension of B at the bundle point (x, g):
/// alpha_alg(g^-1) B_x(v.base, w.base). Vertical arguments (zero base part) give 0.
AlgebraElement equivariant_two_form(const TwoFormField& b, const CrossedModule& cm, const Vector& x,
                                    const GroupElement& g, const BundleVector& v, const BundleVector& w);

/// Sign of the transport equation g' g^-1 = -A(gamma') (negative, the default)
/// or +A(gamma').
enum class LiftSign { negative, positive };

struct LiftedPath {
  DiscretePath base;
  std::vector<GroupElement> group;
};

/// Horizontal lift of `path` starting at g0: solves g' = -A(gamma; gamma') g with
/// the classical RK4 tableau in exponential coordinates (Runge-Kutta-Munthe-Kaas),
/// so every sample lies on the group up to round-off.
LiftedPath horizontal_lift(const ConnectionForm& abar, const DiscretePath& path, const GroupElement& g0,
                           LiftSign sign = LiftSign::negative);

/// g(1) of the lift starting at the identity.
GroupElement holonomy(const ConnectionForm& a, const DiscretePath& path, LiftSign sign = LiftSign::negative);

/// max over interval midpoints of |log(g_{k+1} g_k^-1)/h + A(x_mid; dx/h)|
/// (second-order finite differences of the samples).
double horizontality_residual(const ConnectionForm& abar, const LiftedPath& lifted);

/// max_k of the group constraint violation of the samples.
double group_drift(const LiftedPath& lifted);

/// Composite Simpson (3/8 rule on the last three intervals when N is odd).
AlgebraElement simpson(const std::vector<AlgebraElement>& values, double step);

/// First-order Chen integral of a 2-form: int_0^1 B(gamma'(t), X(t)) dt.
AlgebraElement chen_integral_first(const TwoFormField& b, const DiscretePath& path, const PathVariation& x);

/// Chen integral of the equivariant extension along a lifted path:
/// int_0^1 alpha_alg(g(t)^-1) B(gamma'(t), X(t)) dt.
AlgebraElement chen_integral_first(const TwoFormField& b, const CrossedModule& cm, const LiftedPath& lifted,
                                   const PathVariation& x);

/// Lift of a base variation X to the bundle along a horizontal path: the
/// abar-horizontal part plus the vertical component iota(t) = abar(X~(t)).
struct LiftedVariation {
  PathVariation base;
  std::vector<AlgebraElement> vertical;  // iota_k
  std::vector<AlgebraElement> fibre;     // zeta_k = -Ad(g_k^-1) abar(X_k) + iota_k

  BundleVector at(int k) const { return {base.at(k), fibre[static_cast<std::size_t>(k)]}; }
};

/// The abar-horizontal lift of X (iota = 0).
LiftedVariation horizontal_variation(const ConnectionForm& abar, const LiftedPath& lifted, const PathVariation& x);

/// Transport of X: chooses iota so that the lifted vector is tangent to the space
/// of horizontal paths (iota' = Ad(g^-1) F^abar(gamma', X)) and annihilated by the
/// path-space connection. iota(1) is fixed by
///   iota(1) = -Ad(g(1)^-1)(A - abar)(X(1)) - tau_alg(int_0^1 alpha_alg(g^-1) B(gamma', X) dt)
/// and the tangency equation is integrated backward from t = 1 with a
/// fourth-order cumulative quadrature.
LiftedVariation lift_variation(const ConnectionForm& a, const ConnectionForm& abar, const TwoFormField& b,
                               const CrossedModule& cm, const LiftedPath& lifted, const PathVariation& x);

/// Path-space connection A_P(X~(1)) + tau_alg(Chen integral of B along the lift).
/// Evaluated on the discretized lift: velocities come from the samples.
AlgebraElement pathspace_connection_value(const ConnectionForm& a, const TwoFormField& b, const CrossedModule& cm,
                                          const LiftedPath& lifted, const LiftedVariation& xt);

/// | abar_P(X~(T)) - abar_P(X~(0)) - int_0^T Ad(g^-1) F^abar(gamma', X) dt |
/// with sample-derived velocities and the trapezoid rule. T must be a grid parameter.
double tangency_residual(const ConnectionForm& abar, const LiftedPath& lifted, const LiftedVariation& xt, double t);

/// tangency_residual at every grid parameter t_k, in one cumulative pass.
std::vector<double> tangency_profile(const ConnectionForm& abar, const LiftedPath& lifted, const LiftedVariation& xt);

/// Expression-backed map (t, s) -> R^n restricted to a parameter rectangle and
/// reparameterized over [0, 1]^2.
class SurfaceMap {
 public:
  /// One expression in t and s per coordinate.
  explicit SurfaceMap(std::vector<expr::Expr> coords);
  static SurfaceMap parse(const std::vector<std::string>& coords);
  /// The identity chart (t, s) -> (t, s) of the plane, placed in coordinates
  /// (axis_t, axis_s) of R^dim; the other coordinates are zero.
  static SurfaceMap plane_chart(int dim, int axis_t, int axis_s);

  /// Sub-rectangle [t0, t1] x [s0, s1] of the current domain, again over [0,1]^2.
  SurfaceMap restrict(double t0, double t1, double s0, double s1) const;

  int dim() const { return static_cast<int>(coords_.size()); }
  Vector position(double t, double s) const;
  Vector d_dt(double t, double s) const;
  Vector d_ds(double t, double s) const;

  /// Edges as paths: s = const traversed in t, t = const traversed in s.
  DiscretePath t_edge(double s, int intervals) const;
  DiscretePath s_edge(double t, int intervals) const;

 private:
  std::vector<expr::Expr> coords_, dt_, ds_;
  double t0_ = 0.0, t1_ = 1.0, s0_ = 0.0, s1_ = 1.0;
};

/// Plaquette of holonomies around the image of the unit square:
/// a along s = 0 and c along s = 1 (abar), d along t = 0 and b along t = 1 (A),
/// h = tau^-1(a^-1 b^-1 c d). Needs an invertible tau.
Plaquette plaquette_from_surface(const SurfaceMap& surface, const ConnectionForm& a, const ConnectionForm& abar,
                                 CrossedModulePtr cm, int intervals);

}  // namespace surfhol
