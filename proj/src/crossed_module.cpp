#include "surfhol/crossed_module.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "surfhol/errors.hpp"

namespace surfhol {

namespace {

std::string group_token(const GroupTag& tag) {
  switch (tag.kind) {
    case GroupKind::circle: return "u1";
    case GroupKind::rotation: return "so3";
    case GroupKind::translation: return "r" + std::to_string(tag.dim);
  }
  return "?";
}

GroupTag parse_group_token(const std::string& tok) {
  if (tok == "u1") return GroupTag::circle();
  if (tok == "so3") return GroupTag::rotation();
  if (tok.size() >= 2 && tok[0] == 'r' && std::all_of(tok.begin() + 1, tok.end(), ::isdigit)) {
    const int n = std::stoi(tok.substr(1));
    if (n >= 1 && n <= 16) return GroupTag::translation(n);
  }
  throw UsageError("unknown group '" + tok + "' (expected u1, so3 or rN)");
}

const char* tau_token(TauChoice t) { return t == TauChoice::identity ? "identity" : "trivial"; }

const char* alpha_token(AlphaChoice a) {
  switch (a) {
    case AlphaChoice::trivial: return "trivial";
    case AlphaChoice::conjugation: return "conjugation";
    case AlphaChoice::matrix_action: return "matrix-action";
    case AlphaChoice::transpose_conjugation: return "transpose-conjugation";
  }
  return "?";
}

InstanceSpec builtin_spec(const std::string& name) {
  if (name == "abelian-circle") {
    return {GroupTag::circle(), GroupTag::circle(), TauChoice::identity, AlphaChoice::trivial};
  }
  if (name == "conjugation-so3") {
    return {GroupTag::rotation(), GroupTag::rotation(), TauChoice::identity, AlphaChoice::conjugation};
  }
  if (name == "vector-so3-r3") {
    return {GroupTag::rotation(), GroupTag::translation(3), TauChoice::trivial, AlphaChoice::matrix_action};
  }
  throw UsageError("unknown crossed-module instance '" + name + "'");
}

}  // namespace

const std::vector<std::string>& builtin_instance_names() {
  static const std::vector<std::string> names{"abelian-circle", "conjugation-so3", "vector-so3-r3"};
  return names;
}

CrossedModulePtr builtin_instance(const std::string& name) {
  auto cm = std::make_shared<CrossedModule>(*make_instance(builtin_spec(name)));
  cm->name = name;
  return cm;
}

std::string canonical_name(const InstanceSpec& spec) {
  std::ostringstream os;
  os << "G=" << group_token(spec.g) << ";H=" << group_token(spec.h) << ";tau=" << tau_token(spec.tau)
     << ";alpha=" << alpha_token(spec.alpha);
  return os.str();
}

InstanceSpec parse_instance_spec(const std::string& canonical) {
  InstanceSpec spec;
  bool seen_g = false, seen_h = false;
  std::istringstream is(canonical);
  std::string field;
  while (std::getline(is, field, ';')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw UsageError("malformed instance field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "G") {
      spec.g = parse_group_token(value);
      seen_g = true;
    } else if (key == "H") {
      spec.h = parse_group_token(value);
      seen_h = true;
    } else if (key == "tau") {
      if (value == "identity") spec.tau = TauChoice::identity;
      else if (value == "trivial") spec.tau = TauChoice::trivial;
      else throw UsageError("unknown tau '" + value + "'");
    } else if (key == "alpha") {
      if (value == "trivial") spec.alpha = AlphaChoice::trivial;
      else if (value == "conjugation") spec.alpha = AlphaChoice::conjugation;
      else if (value == "matrix-action") spec.alpha = AlphaChoice::matrix_action;
      else if (value == "transpose-conjugation") spec.alpha = AlphaChoice::transpose_conjugation;
      else throw UsageError("unknown alpha '" + value + "'");
    } else {
      throw UsageError("unknown instance field '" + key + "'");
    }
  }
  if (!seen_g || !seen_h) throw UsageError("instance definition needs both G and H");
  return spec;
}

CrossedModulePtr instance_from_name(const std::string& name) {
  const auto& names = builtin_instance_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return builtin_instance(name);
  if (name.find('=') != std::string::npos) return make_instance(parse_instance_spec(name));
  throw UsageError("unknown crossed-module instance '" + name + "'");
}

CrossedModulePtr make_instance(const InstanceSpec& spec) {
  auto cm = std::make_shared<CrossedModule>();
  cm->name = canonical_name(spec);
  cm->g = spec.g;
  cm->h = spec.h;
  const GroupTag g = spec.g;
  const GroupTag h = spec.h;
  if (g.kind == GroupKind::translation) {
    throw UsageError("G must be a matrix group (u1 or so3)");
  }

  switch (spec.tau) {
    case TauChoice::identity:
      if (!(g == h)) throw UsageError("tau=identity needs G and H to coincide");
      cm->tau = [g](const GroupElement& x) { return GroupElement(g, x.matrix()); };
      cm->tau_inverse = [h](const GroupElement& x) { return GroupElement(h, x.matrix()); };
      cm->tau_alg = [g](const AlgebraElement& y) { return AlgebraElement(g, y.matrix()); };
      break;
    case TauChoice::trivial:
      cm->tau = [g](const GroupElement&) { return GroupElement::identity(g); };
      cm->tau_alg = [g](const AlgebraElement&) { return AlgebraElement::zero(g); };
      break;
  }

  switch (spec.alpha) {
    case AlphaChoice::trivial:
      cm->alpha = [](const GroupElement&, const GroupElement& x) { return x; };
      cm->alpha_alg = [](const GroupElement&, const AlgebraElement& y) { return y; };
      break;
    case AlphaChoice::conjugation:
      if (!(g == h)) throw UsageError("alpha=conjugation needs G and H to coincide");
      cm->alpha = [](const GroupElement& k, const GroupElement& x) { return k * x * k.inverse(); };
      cm->alpha_alg = [](const GroupElement& k, const AlgebraElement& y) { return adjoint(k, y); };
      break;
    case AlphaChoice::matrix_action:
      if (g.kind != GroupKind::rotation || h.kind != GroupKind::translation || h.dim != 3) {
        throw UsageError("alpha=matrix-action needs G=so3 and H=r3");
      }
      cm->alpha = [h](const GroupElement& k, const GroupElement& x) {
        return GroupElement(h, (k.matrix() * x.matrix()).eval());
      };
      cm->alpha_alg = [h](const GroupElement& k, const AlgebraElement& y) {
        return AlgebraElement(h, (k.matrix() * y.matrix()).eval());
      };
      break;
    case AlphaChoice::transpose_conjugation:
      if (!(g == h)) throw UsageError("alpha=transpose-conjugation needs G and H to coincide");
      cm->alpha = [h](const GroupElement& k, const GroupElement& x) {
        return GroupElement(h, (k.matrix().transpose() * x.matrix() * k.matrix()).eval());
      };
      cm->alpha_alg = [h](const GroupElement& k, const AlgebraElement& y) {
        return AlgebraElement(h, (k.matrix().transpose() * y.matrix() * k.matrix()).eval());
      };
      break;
  }
  return cm;
}

CrossedModulePtr single_group_scheme(GroupTag g) {
  return make_instance({g, g, TauChoice::identity, AlphaChoice::trivial});
}

AxiomResiduals crossed_module_axioms(const CrossedModule& cm, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw UsageError("crossed_module_axioms: n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  AxiomResiduals out;
  for (int i = 0; i < n_samples; ++i) {
    const GroupElement g = random_element(cm.g, rng);
    const GroupElement h = random_element(cm.h, rng);
    const GroupElement h2 = random_element(cm.h, rng);
    const double r1 = distance(cm.tau(cm.alpha(g, h)), g * cm.tau(h) * g.inverse());
    const double r2 = distance(cm.alpha(cm.tau(h), h2), h * h2 * h.inverse());
    out.equivariance = std::max(out.equivariance, r1);
    out.peiffer = std::max(out.peiffer, r2);
  }
  return out;
}

DerivativeResiduals derivative_consistency(const CrossedModule& cm, int n_samples, std::uint64_t seed,
                                           double step) {
  std::mt19937_64 rng(seed);
  DerivativeResiduals out;
  for (int i = 0; i < n_samples; ++i) {
    const AlgebraElement y = random_algebra(cm.h, rng);
    const GroupElement g = random_element(cm.g, rng);
    const GroupElement plus = exp_map(step * y);
    const GroupElement minus = exp_map(-step * y);

    const AlgebraElement tau_fd = (log_map(cm.tau(plus)) - log_map(cm.tau(minus))) * (0.5 / step);
    const AlgebraElement tau_an = cm.tau_alg(y);
    out.tau_alg = std::max(out.tau_alg, distance(tau_fd, tau_an) / std::max(1.0, tau_an.norm()));

    const AlgebraElement alpha_fd =
        (log_map(cm.alpha(g, plus)) - log_map(cm.alpha(g, minus))) * (0.5 / step);
    const AlgebraElement alpha_an = cm.alpha_alg(g, y);
    out.alpha_alg = std::max(out.alpha_alg, distance(alpha_fd, alpha_an) / std::max(1.0, alpha_an.norm()));
  }
  return out;
}

}  // namespace surfhol
