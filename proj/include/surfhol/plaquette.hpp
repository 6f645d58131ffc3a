#pragma once

#include <random>
#include <string>

#include "surfhol/algebra.hpp"
#include "surfhol/crossed_module.hpp"

namespace surfhol {

/// A square 2-cell (a, b, c, d; h): edges in G, face label in H.
///
///        c
///    +------->+
///    ^        ^
///  d |   h    | b
///    |        |
///    +------->+
///        a
///
/// Group products read right to left ("b a" = traverse a, then b), so the
/// fake-flatness constraint tau(h) = a^-1 b^-1 c d compares the two boundary
/// routes from the bottom-left corner to the top-right corner.
class Plaquette {
 public:
  Plaquette(CrossedModulePtr cm, GroupElement a, GroupElement b, GroupElement c, GroupElement d,
            GroupElement h);

  const GroupElement& a() const { return a_; }
  const GroupElement& b() const { return b_; }
  const GroupElement& c() const { return c_; }
  const GroupElement& d() const { return d_; }
  const GroupElement& h() const { return h_; }
  const CrossedModule& module() const { return *cm_; }
  const CrossedModulePtr& module_ptr() const { return cm_; }

  /// |tau(h) - a^-1 b^-1 c d|
  double flatness_residual() const;

 private:
  CrossedModulePtr cm_;
  GroupElement a_, b_, c_, d_, h_;
};

/// How the face labels combine under composition.
///
/// closure_consistent: vertical h1 * alpha(d1^-1) h2, horizontal alpha(a1^-1) h2 * h1.
///   Preserves fake-flatness and satisfies the interchange law.
/// literal: vertical h1 * alpha(d1) h2, horizontal alpha(d1^-1) h2 * h1. Kept for
///   comparison; does not preserve fake-flatness for non-abelian alpha.
enum class CompositionConvention { closure_consistent, literal };

CompositionConvention parse_convention(const std::string& name);
std::string to_string(CompositionConvention conv);

struct Boundary {
  GroupElement s_vert;
  GroupElement t_vert;
  GroupElement s_horz;
  GroupElement t_horz;
};

/// Solves the constraint for the top edge: c = b a tau(h) d^-1.
Plaquette make_flat_plaquette(const GroupElement& a, const GroupElement& b, const GroupElement& d,
                              const GroupElement& h, CrossedModulePtr cm);

/// (s_vert, t_vert, s_horz, t_horz) = (a, c, d, b).
Boundary sources_targets(const Plaquette& p);

/// Max componentwise group distance over the five labels.
double plaquette_distance(const Plaquette& p, const Plaquette& q);

/// Edge distance used to decide composability.
inline constexpr double kComposeTolerance = 1e-9;

/// p below, q above; requires p.c == q.a.
Plaquette vcompose(const Plaquette& p, const Plaquette& q,
                   CompositionConvention conv = CompositionConvention::closure_consistent);

/// p left, q right; requires p.b == q.d.
Plaquette hcompose(const Plaquette& p, const Plaquette& q,
                   CompositionConvention conv = CompositionConvention::closure_consistent);

Plaquette videntity(CrossedModulePtr cm, const GroupElement& a);  // (a, e, a, e; e)
Plaquette hidentity(CrossedModulePtr cm, const GroupElement& d);  // (e, d, e, d; e)
Plaquette vinverse(const Plaquette& p);  // (c, b^-1, a, d^-1; alpha(d) h^-1)
Plaquette hinverse(const Plaquette& p);  // (a^-1, d, c^-1, b; alpha(a) h^-1)

/// Distance between the two ways of composing a 2x2 window
///
///    q  | q2
///   ----+----
///    p  | p2
///
/// rows first versus columns first.
double interchange_residual(const Plaquette& p, const Plaquette& p2, const Plaquette& q, const Plaquette& q2,
                            CompositionConvention conv = CompositionConvention::closure_consistent);

/// Endpoint gauge elements of the initial path (u0 left, u1 right), of the final
/// path (ut0, ut1), and face elements w (initial path) and wt (final path).
struct GaugeData {
  GroupElement u0, u1, ut0, ut1;
  GroupElement w, wt;
};

GaugeData identity_gauge(const CrossedModule& cm);
GaugeData random_gauge(const CrossedModule& cm, std::mt19937_64& rng);

/// literal: the barred formulas verbatim, including the right edge
///   transformed by the initial-path endpoints and the left edge built from b.
/// constraint_preserving: the variant obtained by composing (bottom to top) the
///   inverse of the gauge square on the initial path, p, and the gauge square on
///   the final path. Preserves fake-flatness.
enum class GaugeVariant { literal, constraint_preserving };

GaugeVariant parse_gauge_variant(const std::string& name);
std::string to_string(GaugeVariant variant);

Plaquette gauge_transform(const Plaquette& p, const GaugeData& gd, GaugeVariant variant);
Plaquette gauge_transform(const Plaquette& p, const GaugeData& gd, const std::string& variant);

/// Random flat plaquette with edges a, b, d and face label drawn from the module.
Plaquette random_flat_plaquette(CrossedModulePtr cm, std::mt19937_64& rng);

}  // namespace surfhol
