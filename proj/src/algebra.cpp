#include "surfhol/algebra.hpp"

#include <cmath>
#include <numbers>

#include "surfhol/errors.hpp"

namespace surfhol {

namespace {

Eigen::Matrix3cd hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3cd k;
  k << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return k;
}

Eigen::Vector3d vee(const Matrix& k) {
  return {k(2, 1).real(), k(0, 2).real(), k(1, 0).real()};
}

void require_shape(const GroupTag& tag, const Matrix& m, const char* what) {
  if (m.rows() != tag.rows() || m.cols() != tag.cols()) {
    throw UsageError(std::string(what) + ": matrix shape does not match " + tag.name());
  }
  if (!m.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

int GroupTag::algebra_dim() const {
  switch (kind) {
    case GroupKind::circle: return 1;
    case GroupKind::rotation: return 3;
    case GroupKind::translation: return dim;
  }
  return 0;
}

std::string GroupTag::name() const {
  switch (kind) {
    case GroupKind::circle: return "U(1)";
    case GroupKind::rotation: return "SO(3)";
    case GroupKind::translation: return "R^" + std::to_string(dim);
  }
  return "?";
}

void require_same_tag(const GroupTag& lhs, const GroupTag& rhs, const char* what) {
  if (!(lhs == rhs)) {
    throw UsageError(std::string(what) + ": group mismatch (" + lhs.name() + " vs " + rhs.name() + ")");
  }
}

// --- AlgebraElement -------------------------------------------------------

AlgebraElement::AlgebraElement(GroupTag tag, Matrix m) : tag_(tag), m_(std::move(m)) {
  require_shape(tag_, m_, "AlgebraElement");
}

AlgebraElement AlgebraElement::zero(GroupTag tag) {
  return {tag, Matrix::Zero(tag.rows(), tag.cols())};
}

AlgebraElement AlgebraElement::basis(GroupTag tag, int k) {
  if (k < 0 || k >= tag.algebra_dim()) {
    throw UsageError("basis index out of range for " + tag.name());
  }
  Vector e = Vector::Zero(tag.algebra_dim());
  e(k) = 1.0;
  return from_coordinates(tag, e);
}

AlgebraElement AlgebraElement::from_coordinates(GroupTag tag, const Vector& coords) {
  if (coords.size() != tag.algebra_dim()) {
    throw UsageError("coordinate count does not match " + tag.name());
  }
  switch (tag.kind) {
    case GroupKind::circle: {
      Matrix m(1, 1);
      m(0, 0) = Complex(0.0, coords(0));
      return {tag, m};
    }
    case GroupKind::rotation:
      return {tag, hat(Eigen::Vector3d(coords(0), coords(1), coords(2)))};
    case GroupKind::translation:
      return {tag, coords.cast<Complex>()};
  }
  return zero(tag);
}

Vector AlgebraElement::coordinates() const {
  switch (tag_.kind) {
    case GroupKind::circle: return Vector::Constant(1, m_(0, 0).imag());
    case GroupKind::rotation: return vee(m_);
    case GroupKind::translation: return m_.col(0).real();
  }
  return {};
}

double AlgebraElement::constraint_violation() const {
  switch (tag_.kind) {
    case GroupKind::circle: return std::abs(m_(0, 0).real());
    case GroupKind::rotation: return (m_ + m_.transpose()).norm() + m_.imag().norm();
    case GroupKind::translation: return m_.imag().norm();
  }
  return 0.0;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  require_same_tag(tag_, rhs.tag_, "algebra +");
  m_ += rhs.m_;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  require_same_tag(tag_, rhs.tag_, "algebra -");
  m_ -= rhs.m_;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double s) {
  m_ *= s;
  return *this;
}

// --- GroupElement ---------------------------------------------------------

GroupElement::GroupElement(GroupTag tag, Matrix m) : tag_(tag), m_(std::move(m)) {
  require_shape(tag_, m_, "GroupElement");
}

GroupElement GroupElement::identity(GroupTag tag) {
  if (tag.kind == GroupKind::translation) return {tag, Matrix::Zero(tag.dim, 1)};
  return {tag, Matrix::Identity(tag.dim, tag.dim)};
}

GroupElement GroupElement::inverse() const {
  switch (tag_.kind) {
    case GroupKind::circle: {
      Matrix m(1, 1);
      m(0, 0) = 1.0 / m_(0, 0);
      return {tag_, m};
    }
    case GroupKind::rotation: return {tag_, m_.adjoint()};
    case GroupKind::translation: return {tag_, -m_};
  }
  return *this;
}

double GroupElement::constraint_violation() const {
  switch (tag_.kind) {
    case GroupKind::circle: return std::abs(std::abs(m_(0, 0)) - 1.0);
    case GroupKind::rotation: {
      const Eigen::Matrix3d r = m_.real();
      return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm() + std::abs(r.determinant() - 1.0) +
             m_.imag().norm();
    }
    case GroupKind::translation: return m_.imag().norm();
  }
  return 0.0;
}

GroupElement operator*(const GroupElement& lhs, const GroupElement& rhs) {
  require_same_tag(lhs.tag_, rhs.tag_, "group multiply");
  if (lhs.tag_.kind == GroupKind::translation) return {lhs.tag_, lhs.m_ + rhs.m_};
  return {lhs.tag_, lhs.m_ * rhs.m_};
}

// --- maps -----------------------------------------------------------------

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_tag(x.tag(), y.tag(), "bracket");
  if (x.tag().is_abelian()) return AlgebraElement::zero(x.tag());
  return {x.tag(), x.matrix() * y.matrix() - y.matrix() * x.matrix()};
}

GroupElement exp_map(const AlgebraElement& x) {
  const GroupTag tag = x.tag();
  switch (tag.kind) {
    case GroupKind::circle: {
      Matrix m(1, 1);
      m(0, 0) = std::exp(x.matrix()(0, 0));
      return {tag, m};
    }
    case GroupKind::rotation: {
      const Eigen::Vector3d w = vee(x.matrix());
      const double theta = w.norm();
      const Eigen::Matrix3cd k = hat(w);
      double a = 1.0;
      double b = 0.5;
      if (theta < 1e-4) {
        const double t2 = theta * theta;
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
      } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / (theta * theta);
      }
      return {tag, Eigen::Matrix3cd::Identity() + a * k + b * k * k};
    }
    case GroupKind::translation: return {tag, x.matrix()};
  }
  return GroupElement::identity(tag);
}

AlgebraElement log_map(const GroupElement& g) {
  const GroupTag tag = g.tag();
  switch (tag.kind) {
    case GroupKind::circle: {
      const double phase = std::arg(g.matrix()(0, 0));
      if (std::numbers::pi - std::abs(phase) < kCutLocusMargin) {
        throw DomainError("log: U(1) element at the cut locus (phase pi)");
      }
      return AlgebraElement::from_coordinates(tag, Vector::Constant(1, phase));
    }
    case GroupKind::rotation: {
      const Matrix& r = g.matrix();
      const Eigen::Vector3d w = 0.5 * vee(r - r.transpose());
      const double s = w.norm();
      const double c = 0.5 * (r.trace().real() - 1.0);
      const double theta = std::atan2(s, c);
      if (std::numbers::pi - theta < kCutLocusMargin) {
        throw DomainError("log: rotation angle at the cut locus (angle pi)");
      }
      const double factor = theta < 1e-4 ? 1.0 + theta * theta / 6.0 : theta / std::sin(theta);
      return AlgebraElement::from_coordinates(tag, factor * w);
    }
    case GroupKind::translation: return {tag, g.matrix()};
  }
  return AlgebraElement::zero(tag);
}

double distance(const GroupElement& lhs, const GroupElement& rhs) {
  require_same_tag(lhs.tag(), rhs.tag(), "distance");
  return (lhs.matrix() - rhs.matrix()).norm();
}

double distance(const AlgebraElement& lhs, const AlgebraElement& rhs) {
  require_same_tag(lhs.tag(), rhs.tag(), "distance");
  return (lhs.matrix() - rhs.matrix()).norm();
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  require_same_tag(g.tag(), x.tag(), "adjoint");
  if (g.tag().is_abelian()) return x;
  return {x.tag(), g.matrix() * x.matrix() * g.matrix().adjoint()};
}

AlgebraElement random_algebra(GroupTag tag, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Vector coords(tag.algebra_dim());
  for (auto& c : coords) c = unit(rng);
  return AlgebraElement::from_coordinates(tag, coords);
}

GroupElement random_element(GroupTag tag, std::mt19937_64& rng, double scale) {
  return exp_map(random_algebra(tag, rng, scale));
}

}  // namespace surfhol
