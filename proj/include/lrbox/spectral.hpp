#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lrbox/model.hpp"

namespace lrbox {

/// Full spectrum of a truncated Hamiltonian: ascending eigenvalues and
/// orthonormal eigenvectors stored column by column.
class EigenDecomposition {
 public:
  EigenDecomposition(std::vector<double> values, std::vector<double> vectors,
                     double residual_tol);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> vector(std::size_t k) const noexcept {
    return {vectors_.data() + k * size(), size()};
  }
  double residual_tol() const noexcept { return residual_tol_; }

 private:
  std::vector<double> values_;
  std::vector<double> vectors_;
  double residual_tol_;
};

inline constexpr double kDefaultResidualTol = 1e-11;

/// Throws NumericError (carrying the eigenvalue index) if the solver fails or
/// an eigenpair misses ||H psi - E psi|| <= residual_tol (1 + ||H||).
EigenDecomposition eigendecompose(const TruncatedHamiltonian& H,
                                  double residual_tol = kDefaultResidualTol);

struct GroundState {
  double energy = 0.0;
  std::vector<double> vector;
  /// E_1 - E_0.
  double gap = 0.0;
  /// Set when the gap is within the residual tolerance.
  bool degenerate = false;
};

/// Lowest eigenpair. With a reference vector the sign is fixed so that
/// <psi0, reference> >= 0, otherwise the largest-magnitude entry is positive.
GroundState ground_state(const EigenDecomposition& eig, std::span<const double> reference = {});

/// Same, computing only the two lowest eigenpairs (O(n) memory).
GroundState ground_state(const TruncatedHamiltonian& H, std::span<const double> reference = {},
                         double residual_tol = kDefaultResidualTol);

/// Solves (z - H) x = v with a pivoted complex tridiagonal factorization.
/// A real z within 1e-14 (1 + ||H||) of an eigenvalue throws SingularShift.
std::vector<std::complex<double>> resolvent_solve(const TruncatedHamiltonian& H,
                                                  std::complex<double> z,
                                                  std::span<const std::complex<double>> v);

/// Solves a general complex tridiagonal system (sub, diag, super) x = rhs.
/// Throws SingularShift on an exactly zero pivot.
std::vector<std::complex<double>> tridiagonal_solve(std::vector<std::complex<double>> sub,
                                                    std::vector<std::complex<double>> diag,
                                                    std::vector<std::complex<double>> super,
                                                    std::vector<std::complex<double>> rhs);

/// Column n of (z - H)^{-1}.
std::vector<std::complex<double>> resolvent_column(const TruncatedHamiltonian& H,
                                                   std::complex<double> z, std::size_t n);

/// Entry (m, n) of (z - H)^{-1}.
std::complex<double> greens_entry(const TruncatedHamiltonian& H, std::complex<double> z,
                                  std::size_t m, std::size_t n);

}  // namespace lrbox
