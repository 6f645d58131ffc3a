#include "surfhol/plaquette.hpp"

#include <algorithm>

#include "surfhol/errors.hpp"

namespace surfhol {

namespace {

void require_edge_match(const GroupElement& lhs, const GroupElement& rhs, const char* what) {
  if (distance(lhs, rhs) > kComposeTolerance) {
    throw ComposabilityError(std::string(what) + ": shared edges differ by " +
                             std::to_string(distance(lhs, rhs)));
  }
}

void require_same_module(const Plaquette& p, const Plaquette& q) {
  if (p.module_ptr() != q.module_ptr() && p.module().name != q.module().name) {
    throw UsageError("plaquettes belong to different crossed modules");
  }
}

}  // namespace

Plaquette::Plaquette(CrossedModulePtr cm, GroupElement a, GroupElement b, GroupElement c, GroupElement d,
                     GroupElement h)
    : cm_(std::move(cm)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)),
      h_(std::move(h)) {
  if (!cm_) throw UsageError("plaquette without crossed module");
  for (const GroupElement* e : {&a_, &b_, &c_, &d_}) require_same_tag(e->tag(), cm_->g, "plaquette edge");
  require_same_tag(h_.tag(), cm_->h, "plaquette face");
}

double Plaquette::flatness_residual() const {
  return distance(cm_->tau(h_), a_.inverse() * b_.inverse() * c_ * d_);
}

CompositionConvention parse_convention(const std::string& name) {
  if (name == "closure-consistent") return CompositionConvention::closure_consistent;
  if (name == "paper-literal") return CompositionConvention::literal;
  throw UsageError("unknown composition convention '" + name + "'");
}

std::string to_string(CompositionConvention conv) {
  return conv == CompositionConvention::closure_consistent ? "closure-consistent" : "paper-literal";
}

Plaquette make_flat_plaquette(const GroupElement& a, const GroupElement& b, const GroupElement& d,
                              const GroupElement& h, CrossedModulePtr cm) {
  const GroupElement c = b * a * cm->tau(h) * d.inverse();
  return {std::move(cm), a, b, c, d, h};
}

Boundary sources_targets(const Plaquette& p) { return {p.a(), p.c(), p.d(), p.b()}; }

double plaquette_distance(const Plaquette& p, const Plaquette& q) {
  return std::max({distance(p.a(), q.a()), distance(p.b(), q.b()), distance(p.c(), q.c()),
                   distance(p.d(), q.d()), distance(p.h(), q.h())});
}

Plaquette vcompose(const Plaquette& p, const Plaquette& q, CompositionConvention conv) {
  require_same_module(p, q);
  require_edge_match(p.c(), q.a(), "vcompose");
  const CrossedModule& cm = p.module();
  const GroupElement twist = conv == CompositionConvention::closure_consistent ? p.d().inverse() : p.d();
  const GroupElement h = p.h() * cm.alpha(twist, q.h());
  return {p.module_ptr(), p.a(), q.b() * p.b(), q.c(), q.d() * p.d(), h};
}

Plaquette hcompose(const Plaquette& p, const Plaquette& q, CompositionConvention conv) {
  require_same_module(p, q);
  require_edge_match(p.b(), q.d(), "hcompose");
  const CrossedModule& cm = p.module();
  const GroupElement twist = conv == CompositionConvention::closure_consistent ? p.a().inverse() : p.d().inverse();
  const GroupElement h = cm.alpha(twist, q.h()) * p.h();
  return {p.module_ptr(), q.a() * p.a(), q.b(), q.c() * p.c(), p.d(), h};
}

Plaquette videntity(CrossedModulePtr cm, const GroupElement& a) {
  const GroupElement e = cm->g_identity();
  const GroupElement eh = cm->h_identity();
  return {std::move(cm), a, e, a, e, eh};
}

Plaquette hidentity(CrossedModulePtr cm, const GroupElement& d) {
  const GroupElement e = cm->g_identity();
  const GroupElement eh = cm->h_identity();
  return {std::move(cm), e, d, e, d, eh};
}

Plaquette vinverse(const Plaquette& p) {
  return {p.module_ptr(), p.c(), p.b().inverse(), p.a(), p.d().inverse(), p.module().alpha(p.d(), p.h().inverse())};
}

Plaquette hinverse(const Plaquette& p) {
  return {p.module_ptr(), p.a().inverse(), p.d(), p.c().inverse(), p.b(), p.module().alpha(p.a(), p.h().inverse())};
}

double interchange_residual(const Plaquette& p, const Plaquette& p2, const Plaquette& q, const Plaquette& q2,
                            CompositionConvention conv) {
  const Plaquette rows_first = vcompose(hcompose(p, p2, conv), hcompose(q, q2, conv), conv);
  const Plaquette cols_first = hcompose(vcompose(p, q, conv), vcompose(p2, q2, conv), conv);
  return plaquette_distance(rows_first, cols_first);
}

GaugeData identity_gauge(const CrossedModule& cm) {
  const GroupElement e = cm.g_identity();
  const GroupElement eh = cm.h_identity();
  return {e, e, e, e, eh, eh};
}

GaugeData random_gauge(const CrossedModule& cm, std::mt19937_64& rng) {
  GaugeData gd = identity_gauge(cm);
  gd.u0 = random_element(cm.g, rng);
  gd.u1 = random_element(cm.g, rng);
  gd.ut0 = random_element(cm.g, rng);
  gd.ut1 = random_element(cm.g, rng);
  gd.w = random_element(cm.h, rng);
  gd.wt = random_element(cm.h, rng);
  return gd;
}

GaugeVariant parse_gauge_variant(const std::string& name) {
  if (name == "paper-literal") return GaugeVariant::literal;
  if (name == "constraint-preserving") return GaugeVariant::constraint_preserving;
  throw UsageError("unknown gauge-transform variant '" + name + "'");
}

std::string to_string(GaugeVariant variant) {
  return variant == GaugeVariant::literal ? "paper-literal" : "constraint-preserving";
}

Plaquette gauge_transform(const Plaquette& p, const GaugeData& gd, GaugeVariant variant) {
  const CrossedModule& cm = p.module();
  for (const GroupElement* u : {&gd.u0, &gd.u1, &gd.ut0, &gd.ut1}) require_same_tag(u->tag(), cm.g, "gauge data");
  require_same_tag(gd.w.tag(), cm.h, "gauge data W");
  require_same_tag(gd.wt.tag(), cm.h, "gauge data W~");

  const GroupElement a = gd.u1 * p.a() * cm.tau(gd.w) * gd.u0.inverse();
  const GroupElement c = gd.ut1 * p.c() * cm.tau(gd.wt) * gd.ut0.inverse();
  const GroupElement h = cm.alpha(gd.u0, gd.w.inverse() * p.h() * cm.alpha(p.d().inverse(), gd.wt));
  if (variant == GaugeVariant::literal) {
    const GroupElement b = gd.ut0 * p.b() * gd.u0.inverse();
    const GroupElement d = gd.ut1 * p.b() * gd.u1.inverse();
    return {p.module_ptr(), a, b, c, d, h};
  }
  const GroupElement b = gd.ut1 * p.b() * gd.u1.inverse();
  const GroupElement d = gd.ut0 * p.d() * gd.u0.inverse();
  return {p.module_ptr(), a, b, c, d, h};
}

Plaquette gauge_transform(const Plaquette& p, const GaugeData& gd, const std::string& variant) {
  return gauge_transform(p, gd, parse_gauge_variant(variant));
}

Plaquette random_flat_plaquette(CrossedModulePtr cm, std::mt19937_64& rng) {
  const GroupElement a = random_element(cm->g, rng);
  const GroupElement b = random_element(cm->g, rng);
  const GroupElement d = random_element(cm->g, rng);
  const GroupElement h = random_element(cm->h, rng);
  return make_flat_plaquette(a, b, d, h, std::move(cm));
}

}  // namespace surfhol
