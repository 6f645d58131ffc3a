#pragma once

#include <complex>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace surfhol {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

enum class GroupKind { circle, rotation, translation };

/// Identifies which matrix group an element belongs to.
///
/// circle:      U(1) as unit-modulus complex scalars (1x1), algebra iR.
/// rotation:    SO(3) as real 3x3 orthogonal matrices, algebra so(3).
/// translation: R^n under addition, stored as an n x 1 column; exp = log = id.
struct GroupTag {
  GroupKind kind = GroupKind::circle;
  int dim = 1;

  static GroupTag circle() { return {GroupKind::circle, 1}; }
  static GroupTag rotation() { return {GroupKind::rotation, 3}; }
  static GroupTag translation(int n) { return {GroupKind::translation, n}; }

  int rows() const { return dim; }
  int cols() const { return kind == GroupKind::translation ? 1 : dim; }
  int algebra_dim() const;
  bool is_abelian() const { return kind != GroupKind::rotation; }
  bool is_complex() const { return kind == GroupKind::circle; }
  std::string name() const;

  friend bool operator==(const GroupTag&, const GroupTag&) = default;
};

void require_same_tag(const GroupTag& lhs, const GroupTag& rhs, const char* what);

class AlgebraElement {
 public:
  AlgebraElement(GroupTag tag, Matrix m);

  static AlgebraElement zero(GroupTag tag);
  static AlgebraElement basis(GroupTag tag, int k);
  static AlgebraElement from_coordinates(GroupTag tag, const Vector& coords);

  GroupTag tag() const { return tag_; }
  const Matrix& matrix() const { return m_; }
  Vector coordinates() const;
  double norm() const { return m_.norm(); }
  /// Distance to the algebra's tangent-space constraint (antisymmetry, i*R, real).
  double constraint_violation() const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(double s);

  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs += rhs; }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs -= rhs; }
  friend AlgebraElement operator*(AlgebraElement x, double s) { return x *= s; }
  friend AlgebraElement operator*(double s, AlgebraElement x) { return x *= s; }
  friend AlgebraElement operator-(AlgebraElement x) { return x *= -1.0; }

 private:
  GroupTag tag_;
  Matrix m_;
};

class GroupElement {
 public:
  GroupElement(GroupTag tag, Matrix m);

  static GroupElement identity(GroupTag tag);

  GroupTag tag() const { return tag_; }
  const Matrix& matrix() const { return m_; }
  GroupElement inverse() const;
  /// How far the stored matrix is from satisfying the group's defining equations.
  double constraint_violation() const;

  friend GroupElement operator*(const GroupElement& lhs, const GroupElement& rhs);

 private:
  GroupTag tag_;
  Matrix m_;
};

/// Lie bracket; zero for the abelian groups.
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// Exponential map. Exact closed forms (Rodrigues for SO(3)).
GroupElement exp_map(const AlgebraElement& x);

/// Principal logarithm. Throws DomainError at or beyond the cut locus
/// (rotation angle within kCutLocusMargin of pi, or phase of -1).
AlgebraElement log_map(const GroupElement& g);

inline constexpr double kCutLocusMargin = 1e-8;

/// Frobenius distance between matrices of the same group.
double distance(const GroupElement& lhs, const GroupElement& rhs);
double distance(const AlgebraElement& lhs, const AlgebraElement& rhs);

/// Adjoint action g X g^-1 (identity for abelian groups).
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);

/// exp of an algebra element whose basis coordinates are uniform in [-scale, scale].
GroupElement random_element(GroupTag tag, std::mt19937_64& rng, double scale = 1.0);
AlgebraElement random_algebra(GroupTag tag, std::mt19937_64& rng, double scale = 1.0);

/// Default tolerances for property checks.
namespace tolerance {
inline constexpr double algebraic = 1e-12;
inline constexpr double exp_log = 1e-10;
inline constexpr double derivative = 1e-6;
inline constexpr double plaquette = 1e-10;
}  // namespace tolerance

}  // namespace surfhol
