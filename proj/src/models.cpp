#include "jorbit/models.hpp"

#include <cmath>
#include <limits>

#include "jorbit/errors.hpp"
#include "jorbit/linalg.hpp"

namespace jorbit {

namespace {

using cd = std::complex<double>;
constexpr double kSqrt2 = 1.41421356237309504880;

bool is_full(ModelKind k) { return k == ModelKind::full_matrix; }

void check_same_case(const std::string& a, const std::string& b) {
  if (a != b) throw Error(ErrorKind::case_mismatch, "element of case '" + a + "' used with case '" + b + "'");
}

void check_size(const CaseDescriptor& c, const CMatrix& m, const char* what) {
  const int s = c.matrix_size();
  if (m.rows() != s || m.cols() != s) {
    throw Error(ErrorKind::shape_mismatch, std::string(what) + " must be " + std::to_string(s) + "x" +
                                               std::to_string(s) + ", got " + std::to_string(m.rows()) +
                                               "x" + std::to_string(m.cols()));
  }
}

void require_real(const CaseDescriptor& c, const CMatrix& m, const char* what) {
  if (c.base_field == BaseField::real && m.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + " must be real for case " + c.case_id);
  }
}

}  // namespace

ConePoint::ConePoint(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::invalid_argument, "cone point needs at least one coordinate");
  if (!in_open_cone(values_)) {
    throw Error(ErrorKind::invalid_argument, "cone point must satisfy z_1 > ... > z_k > 0");
  }
}

bool ConePoint::in_open_cone(std::span<const double> v) {
  if (v.empty()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
    if (i + 1 < v.size() && !(v[i] > v[i + 1])) return false;
  }
  return v.back() > 0.0;
}

void require_backend(const CaseDescriptor& c) {
  if (!c.backend_available) {
    throw Error(ErrorKind::unsupported_backend, "case " + c.case_id + " (" + c.group_name +
                                                    ") has no matrix-model backend");
  }
}

AlgebraElement make_element(const CaseDescriptor& c, const CMatrix& m) {
  require_backend(c);
  check_size(c, m, "algebra element");
  AlgebraElement x;
  x.case_id = c.case_id;
  x.kind = c.model_kind;
  x.field = c.base_field;
  x.n = c.n;
  x.entries = m;
  if (c.base_field == BaseField::real) x.entries = x.entries.real().cast<cd>();
  const Eigen::Index s = x.entries.rows();
  if (c.model_kind == ModelKind::symmetric_matrix) {
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index j = i + 1; j < s; ++j) {
        const cd v = 0.5 * (x.entries(i, j) + x.entries(j, i));
        x.entries(i, j) = v;
        x.entries(j, i) = v;
      }
    }
  } else if (c.model_kind == ModelKind::skew_matrix) {
    for (Eigen::Index i = 0; i < s; ++i) {
      x.entries(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < s; ++j) {
        const cd v = 0.5 * (x.entries(i, j) - x.entries(j, i));
        x.entries(i, j) = v;
        x.entries(j, i) = -v;
      }
    }
  }
  return x;
}

AlgebraElement zero_element(const CaseDescriptor& c) {
  return make_element(c, CMatrix::Zero(c.matrix_size(), c.matrix_size()));
}

LeviElement make_levi(const CaseDescriptor& c, const CMatrix& a, const CMatrix& b) {
  require_backend(c);
  const bool full = is_full(c.model_kind);
  check_size(c, a, "Levi factor a");
  require_real(c, a, "Levi factor a");
  if (full) {
    check_size(c, b, "Levi factor b");
    require_real(c, b, "Levi factor b");
  } else if (b.size() != 0) {
    throw Error(ErrorKind::shape_mismatch, "congruence models take a single Levi factor");
  }
  const double limit = 1.0 / std::sqrt(std::numeric_limits<double>::epsilon());
  if (linalg::condition_number(a) > limit || (full && linalg::condition_number(b) > limit)) {
    throw Error(ErrorKind::singular, "Levi element is numerically singular");
  }
  return LeviElement{c.case_id, a, full ? b : CMatrix()};
}

LeviElement identity_levi(const CaseDescriptor& c) {
  const int s = c.matrix_size();
  return make_levi(c, CMatrix::Identity(s, s), is_full(c.model_kind) ? CMatrix::Identity(s, s) : CMatrix());
}

CompactElement make_compact(const CaseDescriptor& c, const CMatrix& a, const CMatrix& b) {
  require_backend(c);
  const bool full = is_full(c.model_kind);
  check_size(c, a, "compact factor a");
  require_real(c, a, "compact factor a");
  if (linalg::unitarity_residual(a) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "compact factor a is not orthogonal/unitary to 1e-12");
  }
  if (full) {
    check_size(c, b, "compact factor b");
    require_real(c, b, "compact factor b");
    if (linalg::unitarity_residual(b) > 1e-12) {
      throw Error(ErrorKind::invalid_argument, "compact factor b is not orthogonal/unitary to 1e-12");
    }
  }
  return CompactElement{c.case_id, a, full ? b : CMatrix()};
}

CompactElement identity_compact(const CaseDescriptor& c) {
  const int s = c.matrix_size();
  return make_compact(c, CMatrix::Identity(s, s), is_full(c.model_kind) ? CMatrix::Identity(s, s) : CMatrix());
}

LeviElement as_levi(const CompactElement& m) { return LeviElement{m.case_id, m.a, m.b}; }

LeviElement compose(const LeviElement& l1, const LeviElement& l2) {
  check_same_case(l1.case_id, l2.case_id);
  LeviElement out{l1.case_id, l1.a * l2.a, CMatrix()};
  if (l1.b.size() != 0) out.b = l1.b * l2.b;
  return out;
}

std::vector<AlgebraElement> frame(const CaseDescriptor& c) {
  require_backend(c);
  std::vector<AlgebraElement> out;
  const int s = c.matrix_size();
  for (int i = 0; i < c.n; ++i) {
    CMatrix m = CMatrix::Zero(s, s);
    if (c.model_kind == ModelKind::skew_matrix) {
      m(2 * i, 2 * i + 1) = 1.0;
      m(2 * i + 1, 2 * i) = -1.0;
    } else {
      m(i, i) = 1.0;
    }
    out.push_back(make_element(c, m));
  }
  return out;
}

AlgebraElement frame_sum(const CaseDescriptor& c, int k) {
  if (k < 0 || k > c.n) throw Error(ErrorKind::out_of_range, "frame_sum: k outside [0, n]");
  AlgebraElement x = zero_element(c);
  const auto f = frame(c);
  for (int i = 0; i < k; ++i) x.entries += f[i].entries;
  return x;
}

void levi_apply(ModelKind kind, const CMatrix& a, const CMatrix& b, const CMatrix& x, CMatrix& out) {
  if (kind == ModelKind::full_matrix) {
    out.noalias() = a * x * b.transpose();
  } else {
    out.noalias() = a * x * a.transpose();
  }
}

namespace {

AlgebraElement act(const std::string& case_id, const CMatrix& a, const CMatrix& b, const AlgebraElement& x) {
  check_same_case(case_id, x.case_id);
  if (a.rows() != x.entries.rows()) {
    throw Error(ErrorKind::shape_mismatch, "group element and algebra element have different sizes");
  }
  AlgebraElement y = x;
  levi_apply(x.kind, a, b, x.entries, y.entries);
  // Re-impose the exact shape constraint lost to rounding.
  const Eigen::Index s = y.entries.rows();
  if (x.kind == ModelKind::symmetric_matrix) {
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = i + 1; j < s; ++j) y.entries(j, i) = y.entries(i, j) = 0.5 * (y.entries(i, j) + y.entries(j, i));
  } else if (x.kind == ModelKind::skew_matrix) {
    for (Eigen::Index i = 0; i < s; ++i) {
      y.entries(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < s; ++j) {
        const cd v = 0.5 * (y.entries(i, j) - y.entries(j, i));
        y.entries(i, j) = v;
        y.entries(j, i) = -v;
      }
    }
  }
  return y;
}

}  // namespace

AlgebraElement levi_act(const LeviElement& l, const AlgebraElement& x) { return act(l.case_id, l.a, l.b, x); }

AlgebraElement compact_act(const CompactElement& m, const AlgebraElement& x) { return act(m.case_id, m.a, m.b, x); }

AlgebraElement orbit_point_any(const CaseDescriptor& c, const CompactElement& m, std::span<const double> z) {
  if (static_cast<int>(z.size()) > c.n) {
    throw Error(ErrorKind::shape_mismatch, "orbit_point: more coordinates than the Jordan rank");
  }
  AlgebraElement x = zero_element(c);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (c.model_kind == ModelKind::skew_matrix) {
      x.entries(2 * i, 2 * i + 1) = z[i];
      x.entries(2 * i + 1, 2 * i) = -z[i];
    } else {
      x.entries(i, i) = z[i];
    }
  }
  return compact_act(m, x);
}

AlgebraElement orbit_point(const CaseDescriptor& c, const CompactElement& m, const ConePoint& z) {
  return orbit_point_any(c, m, z.values());
}

std::complex<double> jordan_norm(const AlgebraElement& x) {
  if (x.kind == ModelKind::skew_matrix) return linalg::pfaffian(x.entries);
  if (x.entries.rows() == 0) return 1.0;
  return x.entries.determinant();
}

double pairing_scale(const CaseDescriptor& c) {
  const auto f = frame(c);
  return 1.0 / (f[0].entries.array() * f[0].entries.conjugate().array()).real().sum();
}

double pairing(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_case(x.case_id, y.case_id);
  if (x.entries.rows() != y.entries.rows()) throw Error(ErrorKind::shape_mismatch, "pairing: size mismatch");
  const double raw = (x.entries.array() * y.entries.conjugate().array()).real().sum();
  // Frame elements have Re tr(y y^*) = 2 in the skew model and 1 otherwise.
  return x.kind == ModelKind::skew_matrix ? 0.5 * raw : raw;
}

Eigen::VectorXd singular_spectrum(const AlgebraElement& x) {
  const Eigen::VectorXd sv = linalg::singular_values(x.entries);
  Eigen::VectorXd out(x.n);
  if (x.kind == ModelKind::skew_matrix) {
    for (int i = 0; i < x.n; ++i) out(i) = 0.5 * (sv(2 * i) + sv(2 * i + 1));
  } else {
    for (int i = 0; i < x.n; ++i) out(i) = sv(i);
  }
  return out;
}

int orbit_rank(const AlgebraElement& x, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "orbit_rank: tol must be positive");
  const Eigen::VectorXd s = singular_spectrum(x);
  if (s.size() == 0) return 0;
  const double cut = tol * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > cut ? 1 : 0;
  return r;
}

AlgebraElement peirce_restrict(const AlgebraElement& x, int k) {
  if (k < 1 || k > x.n) throw Error(ErrorKind::out_of_range, "peirce_restrict: k outside [1, n]");
  AlgebraElement y;
  y.case_id = x.case_id;
  y.kind = x.kind;
  y.field = x.field;
  y.n = k;
  const int s = x.kind == ModelKind::skew_matrix ? 2 * k : k;
  y.entries = x.entries.topLeftCorner(s, s);
  return y;
}

double adjoint_determinant(const CaseDescriptor& c, const LeviElement& l) {
  require_backend(c);
  check_same_case(c.case_id, l.case_id);
  const double n = c.n;
  switch (c.model_kind) {
    case ModelKind::full_matrix: {
      const double da = std::abs(l.a.determinant());
      const double db = std::abs(l.b.determinant());
      const double p = c.base_field == BaseField::complex ? 2.0 * n : n;
      return std::pow(da * db, p);
    }
    case ModelKind::symmetric_matrix:
      return std::pow(std::abs(l.a.determinant()), 2.0 * (n + 1.0));
    case ModelKind::skew_matrix:
      return std::pow(std::abs(l.a.determinant()), 2.0 * n - 1.0);
    case ModelKind::metadata_only: break;
  }
  throw Error(ErrorKind::unsupported_backend, "no closed form for " + c.case_id);
}

Eigen::MatrixXd action_matrix(const CaseDescriptor& c, const LeviElement& l) {
  require_backend(c);
  check_same_case(c.case_id, l.case_id);
  const int dim = c.ambient_dim;
  Eigen::MatrixXd m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v(j) = 1.0;
    m.col(j) = coordinates(levi_act(l, from_coordinates(c, v)));
  }
  return m;
}

double adjoint_determinant_dense(const CaseDescriptor& c, const LeviElement& l) {
  return std::abs(action_matrix(c, l).fullPivLu().determinant());
}

std::complex<double> norm_factor(const CaseDescriptor& c, const LeviElement& l) {
  require_backend(c);
  const std::complex<double> da = l.a.determinant();
  switch (c.model_kind) {
    case ModelKind::full_matrix: return da * l.b.determinant();
    case ModelKind::symmetric_matrix: return da * da;
    default: return da;
  }
}

double character_nu(const CaseDescriptor& c, const LeviElement& l) {
  return std::pow(adjoint_determinant(c, l), -1.0 / (2.0 * c.r()));
}

CompactElement haar_sample_M(const CaseDescriptor& c, Stream& rng) {
  require_backend(c);
  const int s = c.matrix_size();
  auto draw = [&]() -> CMatrix {
    if (c.base_field == BaseField::complex) return linalg::haar_unitary(s, rng);
    return linalg::haar_orthogonal(s, rng).cast<cd>();
  };
  CMatrix a = draw();
  CMatrix b = is_full(c.model_kind) ? draw() : CMatrix();
  return CompactElement{c.case_id, std::move(a), std::move(b)};
}

LeviElement random_levi(const CaseDescriptor& c, Stream& rng, double spread, double max_condition) {
  require_backend(c);
  const int s = c.matrix_size();
  const bool cplx = c.base_field == BaseField::complex;
  auto draw = [&]() -> CMatrix {
    for (;;) {
      CMatrix g = CMatrix::Identity(s, s);
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i) g(i, j) += spread * (cplx ? rng.complex_normal() : cd(rng.normal(), 0.0));
      if (linalg::condition_number(g) < max_condition) return g;
    }
  };
  CMatrix a = draw();
  CMatrix b = is_full(c.model_kind) ? draw() : CMatrix();
  return make_levi(c, a, b);
}

void random_rank1_direction_into(const CaseDescriptor& c, Stream& rng, CMatrix& out) {
  const int s = c.matrix_size();
  const bool cplx = c.base_field == BaseField::complex;
  auto unit = [&](Eigen::VectorXcd& v) {
    for (int i = 0; i < s; ++i) v(i) = cplx ? rng.complex_normal() : cd(rng.normal(), 0.0);
    v.normalize();
  };
  Eigen::VectorXcd u(s);
  Eigen::VectorXcd v(s);
  switch (c.model_kind) {
    case ModelKind::full_matrix:
      unit(u);
      unit(v);
      out.noalias() = u * v.transpose();
      return;
    case ModelKind::symmetric_matrix:
      unit(u);
      out.noalias() = u * u.transpose();
      return;
    case ModelKind::skew_matrix:
      unit(u);
      unit(v);
      v -= u.dot(v) * u;
      v.normalize();
      out.noalias() = u * v.transpose() - v * u.transpose();
      return;
    case ModelKind::metadata_only: break;
  }
  throw Error(ErrorKind::unsupported_backend, "no backend for " + c.case_id);
}

AlgebraElement random_rank1_direction(const CaseDescriptor& c, Stream& rng) {
  AlgebraElement x = zero_element(c);
  random_rank1_direction_into(c, rng, x.entries);
  return make_element(c, x.entries);
}

Eigen::VectorXd coordinates(const AlgebraElement& x) {
  const Eigen::Index s = x.entries.rows();
  std::vector<double> v;
  const bool cplx = x.field == BaseField::complex;
  switch (x.kind) {
    case ModelKind::full_matrix:
      for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j) {
          v.push_back(x.entries(i, j).real());
          if (cplx) v.push_back(x.entries(i, j).imag());
        }
      break;
    case ModelKind::symmetric_matrix:
      for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = i; j < s; ++j) {
          const double w = i == j ? 1.0 : kSqrt2;
          v.push_back(w * x.entries(i, j).real());
          v.push_back(w * x.entries(i, j).imag());
        }
      break;
    case ModelKind::skew_matrix:
      for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = i + 1; j < s; ++j) v.push_back(kSqrt2 * x.entries(i, j).real());
      break;
    case ModelKind::metadata_only:
      throw Error(ErrorKind::unsupported_backend, "coordinates on metadata-only case");
  }
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void coordinates_to_matrix(const CaseDescriptor& c, std::span<const double> v, CMatrix& out) {
  const int s = c.matrix_size();
  const bool cplx = c.base_field == BaseField::complex;
  std::size_t k = 0;
  switch (c.model_kind) {
    case ModelKind::full_matrix:
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          const double re = v[k++];
          const double im = cplx ? v[k++] : 0.0;
          out(i, j) = cd(re, im);
        }
      break;
    case ModelKind::symmetric_matrix:
      for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) {
          const double w = i == j ? 1.0 : 1.0 / kSqrt2;
          const double re = v[k++];
          const double im = v[k++];
          out(i, j) = out(j, i) = w * cd(re, im);
        }
      break;
    case ModelKind::skew_matrix:
      for (int i = 0; i < s; ++i) {
        out(i, i) = 0.0;
        for (int j = i + 1; j < s; ++j) {
          const double val = v[k++] / kSqrt2;
          out(i, j) = val;
          out(j, i) = -val;
        }
      }
      break;
    case ModelKind::metadata_only:
      throw Error(ErrorKind::unsupported_backend, "coordinates on metadata-only case");
  }
}

AlgebraElement from_coordinates(const CaseDescriptor& c, const Eigen::VectorXd& v) {
  require_backend(c);
  if (v.size() != c.ambient_dim) {
    throw Error(ErrorKind::shape_mismatch, "coordinate vector has length " + std::to_string(v.size()) +
                                               ", expected " + std::to_string(c.ambient_dim));
  }
  AlgebraElement x = zero_element(c);
  coordinates_to_matrix(c, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), x.entries);
  return x;
}

double frobenius_norm2(const AlgebraElement& x) { return x.entries.squaredNorm(); }

}  // namespace jorbit
