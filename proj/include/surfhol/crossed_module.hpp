#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "surfhol/algebra.hpp"

namespace surfhol {

/// A Lie crossed module (G, H, tau, alpha) together with its infinitesimal maps.
///
/// `alpha_alg(g, Y)` is the derivative of h -> alpha(g)h at the identity of H,
/// i.e. the induced action of G on the Lie algebra LH. `tau_alg` is the
/// derivative of tau at the identity. `tau_inverse` is set only when tau is a
/// bijection; surface plaquettes need it to recover the face label.
///
/// The std::function members make this the hook for user-defined instances:
/// anything satisfying the two identities below can be plugged in.
struct CrossedModule {
  using TauMap = std::function<GroupElement(const GroupElement&)>;
  using AlphaMap = std::function<GroupElement(const GroupElement&, const GroupElement&)>;
  using TauAlgMap = std::function<AlgebraElement(const AlgebraElement&)>;
  using AlphaAlgMap = std::function<AlgebraElement(const GroupElement&, const AlgebraElement&)>;

  std::string name;
  GroupTag g;
  GroupTag h;
  TauMap tau;
  AlphaMap alpha;
  TauAlgMap tau_alg;
  AlphaAlgMap alpha_alg;
  TauMap tau_inverse;

  GroupElement g_identity() const { return GroupElement::identity(g); }
  GroupElement h_identity() const { return GroupElement::identity(h); }
  bool tau_invertible() const { return static_cast<bool>(tau_inverse); }
};

using CrossedModulePtr = std::shared_ptr<const CrossedModule>;

/// Names accepted by builtin_instance.
const std::vector<std::string>& builtin_instance_names();

/// abelian-circle, conjugation-so3 or vector-so3-r3. Throws UsageError otherwise.
CrossedModulePtr builtin_instance(const std::string& name);

/// Building blocks for inline instance definitions.
enum class TauChoice { identity, trivial };
enum class AlphaChoice { trivial, conjugation, matrix_action, transpose_conjugation };

struct InstanceSpec {
  GroupTag g;
  GroupTag h;
  TauChoice tau = TauChoice::identity;
  AlphaChoice alpha = AlphaChoice::conjugation;
};

/// Assembles a (possibly non-crossed) module from building blocks. Used for the
/// single-group scheme and for deliberately broken instances in tests. Throws
/// UsageError when the blocks do not fit the groups (e.g. identity tau between
/// different groups).
CrossedModulePtr make_instance(const InstanceSpec& spec);

/// Canonical name of an inline instance, e.g. "G=so3;H=so3;tau=identity;alpha=trivial".
std::string canonical_name(const InstanceSpec& spec);

/// Resolves a built-in name or a canonical inline name.
CrossedModulePtr instance_from_name(const std::string& name);
InstanceSpec parse_instance_spec(const std::string& canonical);

/// Same-group scheme on G: H = G, tau = id, alpha trivial, so both plaquette
/// compositions multiply face labels as plain group products.
CrossedModulePtr single_group_scheme(GroupTag g);

struct AxiomResiduals {
  double equivariance = 0.0;  // |tau(alpha(g)h) - g tau(h) g^-1|
  double peiffer = 0.0;       // |alpha(tau(h))h' - h h' h^-1|
  double max() const { return equivariance > peiffer ? equivariance : peiffer; }
};

/// Maximum over seeded samples of the two crossed-module identity residuals.
AxiomResiduals crossed_module_axioms(const CrossedModule& cm, int n_samples, std::uint64_t seed);

struct DerivativeResiduals {
  double tau_alg = 0.0;
  double alpha_alg = 0.0;
  double max() const { return tau_alg > alpha_alg ? tau_alg : alpha_alg; }
};

/// Relative error of tau_alg / alpha_alg against central differences of
/// tau / alpha at the identity of H.
DerivativeResiduals derivative_consistency(const CrossedModule& cm, int n_samples, std::uint64_t seed,
                                           double step = 1e-5);

}  // namespace surfhol
