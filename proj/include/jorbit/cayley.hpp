#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jorbit/case_registry.hpp"
#include "jorbit/models.hpp"
#include "jorbit/polynomial.hpp"
#include "jorbit/report.hpp"

namespace jorbit {

// Symmetric n x n matrices (n <= 2) in the coordinates (u11) or (u11, u12, u22), with the
// off-diagonal entry stored once. det(d) is then d_11 for n = 1 and d_11 d_22 - 1/4 d_12^2 for
// n = 2, whose symbol under the pairing a y11 + 2 b y12 + c y22 is det(y).

enum class CayleyScheme { symbolic_polynomial, finite_difference };
CayleyScheme parse_cayley_scheme(std::string_view text);

int symmetric_coordinate_count(int n);

/// det(u) in the coordinates starting at variable `offset` of a polynomial in `nvars` variables.
Polynomial symmetric_det(int n, int nvars, int offset = 0);

/// det(d) applied to f in the coordinates starting at `offset`.
Polynomial cayley_operator(const Polynomial& f, int n, int offset = 0);

/// The function fed to cayley_operator_apply: a polynomial in the symmetric coordinates for
/// the symbolic scheme, or a numeric function of the same coordinates.
struct CayleyFunction {
  std::optional<Polynomial> polynomial;
  std::function<double(std::span<const double>)> numeric;
};

/// (det(d) f)(x) for the complex symmetric model at n <= 2. The finite-difference scheme uses
/// central differences at steps h and h/2 combined by Richardson extrapolation and needs a
/// real point x. Throws Error{capability} for an unsupported scheme/function combination.
std::complex<double> cayley_operator_apply(const CaseDescriptor& c, const CayleyFunction& f, const AlgebraElement& x,
                                           CayleyScheme scheme, double step = 1e-2);

/// c with det(d) det(u)^s = c det(u)^(s-1), derived symbolically; nullopt if the result is
/// not such a multiple.
std::optional<Rational> cayley_constant(int n, unsigned s);

/// s(s + 1/2) ... (s + (n-1)/2).
double cayley_constant_predicted(int n, double s);

/// det(d) <u, y>^n / n! == det(y), checked symbolically.
bool cayley_symbol_check(int n);

/// Symbolic identities for s = 1..4, the rational pattern in s, the symbol convention, and a
/// finite-difference check of det(d_u) det(1 + w u)^s = c det(w) det(1 + w u)^(s-1) at
/// `points` random (w, u).
std::vector<VerificationReport> cayley_check(const CaseDescriptor& c, double s, int points, std::uint64_t seed);

}  // namespace jorbit
