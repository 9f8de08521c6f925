#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lrbox {

/// Tight-binding chain with unit hopping and a single impurity V on site 0.
struct LatticeImpurity {
  double V = -4.0;
};

/// Tight-binding chain with an arbitrary on-site potential, centered at site 0.
/// `values.size()` must be odd; entry values.size()/2 sits on site 0.
struct LatticeOnsite {
  std::vector<double> values;
};

/// V(x) = -depth * sech^2(x). Bound state energy is -lambda^2 with
/// lambda (lambda + 1) = depth.
struct PoschlTeller {
  double depth = 2.0;
};

/// V(x) = -depth * exp(-x^2 / (2 width^2)).
struct GaussianWell {
  double depth = 1.0;
  double width = 1.0;
};

using ContinuumPotential = std::variant<PoschlTeller, GaussianWell>;

/// -d^2/dx^2 + V(x) discretized by 3-point finite differences with spacing h.
struct Continuum1d {
  ContinuumPotential potential = PoschlTeller{};
  double h = 0.05;
};

using ModelSpec = std::variant<LatticeImpurity, LatticeOnsite, Continuum1d>;

enum class ModelKind { lattice, continuum };

/// Real symmetric tridiagonal Hamiltonian on a box of half-width L with
/// Dirichlet ends. Immutable after construction.
class TruncatedHamiltonian {
 public:
  TruncatedHamiltonian(ModelKind kind, double half_width, double spacing,
                       std::vector<double> diag, std::vector<double> offdiag);

  ModelKind kind() const noexcept { return kind_; }
  double half_width() const noexcept { return half_width_; }
  /// Grid spacing; 1 for lattice models.
  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> offdiag() const noexcept { return offdiag_; }

  /// Index of the site / grid point closest to x = 0.
  std::size_t center() const noexcept { return (diag_.size() - 1) / 2; }
  /// Physical coordinate of row i (site number for lattice models).
  double position(std::size_t i) const noexcept;

  /// Gershgorin bound on the spectral radius.
  double norm_bound() const noexcept;

 private:
  ModelKind kind_;
  double half_width_;
  double spacing_;
  double first_position_;
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

TruncatedHamiltonian build_lattice(double V, long L);
TruncatedHamiltonian build_lattice_onsite(std::span<const double> values, long L);
TruncatedHamiltonian build_continuum(const ContinuumPotential& potential, double L, double h);

/// Dispatches on the model kind. For lattice models L is rounded to an integer.
TruncatedHamiltonian build(const ModelSpec& spec, double L);

double potential_value(const ContinuumPotential& potential, double x);
std::string describe(const ModelSpec& spec);

std::vector<double> apply(const TruncatedHamiltonian& H, std::span<const double> v);
std::vector<std::complex<double>> apply(const TruncatedHamiltonian& H,
                                        std::span<const std::complex<double>> v);

}  // namespace lrbox
