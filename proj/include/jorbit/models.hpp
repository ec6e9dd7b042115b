#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jorbit/case_registry.hpp"
#include "jorbit/random.hpp"

namespace jorbit {

using CMatrix = Eigen::MatrixXcd;

/// A point of the Jordan algebra in its matrix model: n x n real or complex matrices,
/// n x n complex symmetric matrices, or 2n x 2n real skew matrices. `entries` is always
/// stored in canonical form, so the shape constraint holds bit-exactly.
struct AlgebraElement {
  std::string case_id;
  ModelKind kind = ModelKind::full_matrix;
  BaseField field = BaseField::real;
  int n = 0;  // Jordan rank of the ambient algebra
  CMatrix entries;
};

/// Element of the structure group L: the pair (a, b) acting by x -> a x b^T on full
/// matrices; a single matrix l (stored in `a`) acting by x -> l x l^T otherwise.
struct LeviElement {
  std::string case_id;
  CMatrix a;
  CMatrix b;
};

/// Element of M = L cap K: orthogonal/unitary factors, same layout as LeviElement.
struct CompactElement {
  std::string case_id;
  CMatrix a;
  CMatrix b;
};

/// z_1 > z_2 > ... > z_k > 0.
class ConePoint {
 public:
  /// Throws Error{invalid_argument} on boundary or unordered input.
  explicit ConePoint(std::vector<double> values);
  static bool in_open_cone(std::span<const double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

inline constexpr double kDefaultRankTolerance = 1e-8;

void require_backend(const CaseDescriptor& c);

/// Canonicalizes `m` (symmetrize / antisymmetrize / drop imaginary part as the model
/// requires) after checking its size.
AlgebraElement make_element(const CaseDescriptor& c, const CMatrix& m);
AlgebraElement zero_element(const CaseDescriptor& c);

/// Throws Error{singular} when the condition number exceeds 1/sqrt(machine epsilon).
LeviElement make_levi(const CaseDescriptor& c, const CMatrix& a, const CMatrix& b = CMatrix());
LeviElement identity_levi(const CaseDescriptor& c);
CompactElement make_compact(const CaseDescriptor& c, const CMatrix& a, const CMatrix& b = CMatrix());
CompactElement identity_compact(const CaseDescriptor& c);
LeviElement as_levi(const CompactElement& m);
LeviElement compose(const LeviElement& l1, const LeviElement& l2);  // (l1 l2) x = l1 (l2 x)

/// y_1, ..., y_n: diagonal units, or 2x2 blocks J on the diagonal for the skew model.
std::vector<AlgebraElement> frame(const CaseDescriptor& c);
/// y_1 + ... + y_k.
AlgebraElement frame_sum(const CaseDescriptor& c, int k);

/// Ad m (z_1 y_1 + ... + z_k y_k).
AlgebraElement orbit_point(const CaseDescriptor& c, const CompactElement& m, const ConePoint& z);
/// Same without the ordering requirement on z (any real coefficients).
AlgebraElement orbit_point_any(const CaseDescriptor& c, const CompactElement& m, std::span<const double> z);

AlgebraElement levi_act(const LeviElement& l, const AlgebraElement& x);
AlgebraElement compact_act(const CompactElement& m, const AlgebraElement& x);
/// In-place kernel used by the integrators: out = l . x on raw matrices.
void levi_apply(ModelKind kind, const CMatrix& a, const CMatrix& b, const CMatrix& x, CMatrix& out);

/// det for full and symmetric models, Pfaffian for the skew model.
std::complex<double> jordan_norm(const AlgebraElement& x);

/// Re tr(x y^*) scaled so that the first frame element pairs with itself to 1.
double pairing(const AlgebraElement& x, const AlgebraElement& y);
double pairing_scale(const CaseDescriptor& c);

/// Descending nonnegative tuple of length n: singular values (full), Takagi values
/// (symmetric), block magnitudes z_i of x ~ (+) z_i J (skew).
Eigen::VectorXd singular_spectrum(const AlgebraElement& x);

int orbit_rank(const AlgebraElement& x, double tol = kDefaultRankTolerance);

/// Leading k x k (2k x 2k for skew) block, tagged with the rank-k sub-case.
AlgebraElement peirce_restrict(const AlgebraElement& x, int k);

/// |det| of x -> levi_act(l, x) on the ambient real space, closed form per model.
double adjoint_determinant(const CaseDescriptor& c, const LeviElement& l);
/// Same quantity from the dense ambient_dim x ambient_dim matrix of the action.
double adjoint_determinant_dense(const CaseDescriptor& c, const LeviElement& l);
/// Real matrix of x -> levi_act(l, x) in orthonormal coordinates.
Eigen::MatrixXd action_matrix(const CaseDescriptor& c, const LeviElement& l);

/// jordan_norm(l . x) / jordan_norm(x): det(a) det(b) on full matrices, det(l)^2 on symmetric
/// ones, det(l) on skew ones (the Pfaffian picks up a single determinant).
std::complex<double> norm_factor(const CaseDescriptor& c, const LeviElement& l);

/// e^nu(l) = adjoint_determinant(l)^(-1/(2r)).
double character_nu(const CaseDescriptor& c, const LeviElement& l);

CompactElement haar_sample_M(const CaseDescriptor& c, Stream& rng);
/// Random well-conditioned Levi element I + spread * G (G Gaussian, entrywise), resampled
/// until its condition number is below `max_condition`.
LeviElement random_levi(const CaseDescriptor& c, Stream& rng, double spread = 0.15, double max_condition = 3.0);

/// A sample from the law of m . y_1 for Haar-distributed m (only the needed columns are drawn).
AlgebraElement random_rank1_direction(const CaseDescriptor& c, Stream& rng);
void random_rank1_direction_into(const CaseDescriptor& c, Stream& rng, CMatrix& out);

/// Orthonormal real coordinates for Re tr(x y^*); Lebesgue measure refers to these.
Eigen::VectorXd coordinates(const AlgebraElement& x);
AlgebraElement from_coordinates(const CaseDescriptor& c, const Eigen::VectorXd& v);
/// Writes the matrix for coordinate vector v into `out` (already sized).
void coordinates_to_matrix(const CaseDescriptor& c, std::span<const double> v, CMatrix& out);

/// ||x||^2 = Re tr(x x^*).
double frobenius_norm2(const AlgebraElement& x);

}  // namespace jorbit
