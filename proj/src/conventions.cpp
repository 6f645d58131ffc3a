#include "surfhol/conventions.hpp"

#include <algorithm>

#include "surfhol/errors.hpp"

namespace surfhol {

const std::vector<ConventionEntry>& convention_ledger() {
  static const std::vector<ConventionEntry> entries = {
      {"edge-orientation",
       "Plaquette (a,b,c,d;h): a bottom, b right, c top, d left, all edges pointing up or right. "
       "Products read right to left, so fake-flatness is tau(h) = a^-1 b^-1 c d."},
      {"face-composition",
       "Face labels: closure-consistent (default) uses h1 alpha(d1^-1) h2 vertically and "
       "alpha(a1^-1) h2 h1 horizontally; paper-literal uses alpha(d1) and alpha(d1^-1) and is kept "
       "for comparison only."},
      {"fold-order",
       "Grids fold left to right within a row and bottom to top within a column; rows-first "
       "composes rows then stacks them, cols-first is the dual."},
      {"grid-tolerance", "Grid equality tolerance 1e-11 * rows * cols, capped at 1e-8."},
      {"plaquette-equality", "Plaquettes compare by the maximum Frobenius distance over the five labels."},
      {"gauge-variant",
       "constraint-preserving: b' = Ut1 b U1^-1 and d' = Ut0 d U0^-1 with the literal a', c', h'; "
       "paper-literal: the barred formulas verbatim (b' from Ut0, U0 and d' built from b)."},
      {"random-sampling",
       "Random group elements are exp of algebra elements with basis coordinates uniform in "
       "[-1, 1]; every draw comes from one 64-bit seed (mt19937_64)."},
      {"trivial-bundle",
       "P = R^n x G; tangent vectors stored as (base v, fibre zeta = g^-1 dg), so "
       "A_P(v, zeta) = Ad(g^-1) A(v) + zeta."},
      {"lift-sign", "Horizontal lift solves g' g^-1 = -Abar(gamma'); the opposite sign is a switch."},
      {"lift-integrator",
       "Classical RK4 tableau in exponential coordinates (Munthe-Kaas) with exact exponentials, "
       "so samples stay on the group."},
      {"curvature", "F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]; partials are symbolic."},
      {"chen-quadrature", "Chen integrals use composite Simpson (3/8 rule on the last three intervals for odd N)."},
      {"variation-terminal",
       "A(X~) is read at t = 1. The vertical part iota is fixed at t = 1 by "
       "iota(1) = -Ad(g1^-1)(A - Abar)(X(1)) - tau_alg(int alpha_alg(g^-1) B(gamma', X)) and integrated "
       "backward with a fourth-order cumulative quadrature."},
      {"transport-residuals",
       "Connection and tangency residuals are re-evaluated from the samples alone (finite-difference "
       "velocities, Simpson resp. trapezoid quadrature), so they decay as O(N^-2)."},
      {"surface-plaquette",
       "From a surface: a and c are Abar-holonomies along s = 0 and s = 1, d and b are A-holonomies "
       "along t = 0 and t = 1, h = tau^-1(a^-1 b^-1 c d)."},
      {"curvature-limit", "The curvature limit compares against F at the centre of the shrinking square."},
  };
  return entries;
}

const ConventionEntry& convention(const std::string& id) {
  const auto& entries = convention_ledger();
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.id == id; });
  if (it == entries.end()) throw UsageError("unknown convention id '" + id + "'");
  return *it;
}

}  // namespace surfhol
