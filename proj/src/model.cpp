#include "lrbox/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrbox/errors.hpp"

namespace lrbox {

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

template <class T>
std::vector<T> apply_impl(const TruncatedHamiltonian& H, std::span<const T> v) {
  const std::size_t n = H.size();
  if (v.size() != n) {
    throw DimensionError("apply: vector length " + std::to_string(v.size()) +
                         " does not match Hamiltonian dimension " + std::to_string(n));
  }
  const auto d = H.diag();
  const auto e = H.offdiag();
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    T acc = d[i] * v[i];
    if (i > 0) acc += e[i - 1] * v[i - 1];
    if (i + 1 < n) acc += e[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

}  // namespace

TruncatedHamiltonian::TruncatedHamiltonian(ModelKind kind, double half_width, double spacing,
                                           std::vector<double> diag,
                                           std::vector<double> offdiag)
    : kind_(kind),
      half_width_(half_width),
      spacing_(spacing),
      diag_(std::move(diag)),
      offdiag_(std::move(offdiag)) {
  if (diag_.empty() || offdiag_.size() + 1 != diag_.size()) {
    throw DimensionError("tridiagonal Hamiltonian needs n diagonal and n-1 off-diagonal entries");
  }
  if (!all_finite(diag_) || !all_finite(offdiag_)) {
    throw InvalidModel("Hamiltonian entries must be finite");
  }
  if (!(spacing_ > 0.0) || !(half_width_ > 0.0)) {
    throw InvalidModel("box half-width and spacing must be positive");
  }
  first_position_ = kind_ == ModelKind::lattice ? -static_cast<double>(center())
                                                : -half_width_ + spacing_;
}

double TruncatedHamiltonian::position(std::size_t i) const noexcept {
  return first_position_ + static_cast<double>(i) * spacing_;
}

double TruncatedHamiltonian::norm_bound() const noexcept {
  double r = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) row += std::abs(offdiag_[i - 1]);
    if (i + 1 < n) row += std::abs(offdiag_[i]);
    r = std::max(r, row);
  }
  return r;
}

TruncatedHamiltonian build_lattice(double V, long L) {
  if (!std::isfinite(V)) throw InvalidModel("impurity potential V must be finite");
  if (L < 1) throw InvalidModel("lattice half-width L must be >= 1");
  const auto n = static_cast<std::size_t>(2 * L + 1);
  std::vector<double> diag(n, 0.0);
  diag[static_cast<std::size_t>(L)] = V;
  return TruncatedHamiltonian(ModelKind::lattice, static_cast<double>(L), 1.0, std::move(diag),
                              std::vector<double>(n - 1, 1.0));
}

TruncatedHamiltonian build_lattice_onsite(std::span<const double> values, long L) {
  if (values.size() % 2 == 0) {
    throw InvalidModel("on-site potential vector must have odd length (centered at site 0)");
  }
  if (!all_finite(values)) throw InvalidModel("on-site potential must be finite");
  if (L < 1) throw InvalidModel("lattice half-width L must be >= 1");
  const auto half = static_cast<long>(values.size() / 2);
  if (half > L) {
    throw InvalidModel("on-site potential does not fit in a box of half-width " +
                       std::to_string(L));
  }
  const auto n = static_cast<std::size_t>(2 * L + 1);
  std::vector<double> diag(n, 0.0);
  std::copy(values.begin(), values.end(), diag.begin() + (L - half));
  return TruncatedHamiltonian(ModelKind::lattice, static_cast<double>(L), 1.0, std::move(diag),
                              std::vector<double>(n - 1, 1.0));
}

double potential_value(const ContinuumPotential& potential, double x) {
  return std::visit(
      [x](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PoschlTeller>) {
          const double s = 1.0 / std::cosh(x);
          return -p.depth * s * s;
        } else {
          return -p.depth * std::exp(-x * x / (2.0 * p.width * p.width));
        }
      },
      potential);
}

TruncatedHamiltonian build_continuum(const ContinuumPotential& potential, double L, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidModel("grid spacing h must be positive");
  if (!(L > 0.0) || !std::isfinite(L) || L / h < 2.0) {
    throw InvalidModel("degenerate interval: need L/h >= 2");
  }
  if (const auto* g = std::get_if<GaussianWell>(&potential); g && !(g->width > 0.0)) {
    throw InvalidModel("gaussian_well width must be positive");
  }
  // Snap the spacing so that both Dirichlet ends are grid points.
  const auto intervals = static_cast<std::size_t>(std::llround(2.0 * L / h));
  const double spacing = 2.0 * L / static_cast<double>(intervals);
  const std::size_t n = intervals - 1;
  const double inv_h2 = 1.0 / (spacing * spacing);

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -L + static_cast<double>(i + 1) * spacing;
    diag[i] = 2.0 * inv_h2 + potential_value(potential, x);
  }
  return TruncatedHamiltonian(ModelKind::continuum, L, spacing, std::move(diag),
                              std::vector<double>(n - 1, -inv_h2));
}

TruncatedHamiltonian build(const ModelSpec& spec, double L) {
  return std::visit(
      [L](const auto& m) -> TruncatedHamiltonian {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LatticeImpurity>) {
          return build_lattice(m.V, std::lround(L));
        } else if constexpr (std::is_same_v<M, LatticeOnsite>) {
          return build_lattice_onsite(m.values, std::lround(L));
        } else {
          return build_continuum(m.potential, L, m.h);
        }
      },
      spec);
}

std::string describe(const ModelSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LatticeImpurity>) {
          os << "lattice_impurity(V=" << m.V << ")";
        } else if constexpr (std::is_same_v<M, LatticeOnsite>) {
          os << "lattice_onsite(" << m.values.size() << " sites)";
        } else {
          os << "continuum_1d(";
          if (const auto* p = std::get_if<PoschlTeller>(&m.potential)) {
            os << "poschl_teller depth=" << p->depth;
          } else {
            const auto& g = std::get<GaussianWell>(m.potential);
            os << "gaussian_well depth=" << g.depth << " width=" << g.width;
          }
          os << ", h=" << m.h << ")";
        }
      },
      spec);
  return os.str();
}

std::vector<double> apply(const TruncatedHamiltonian& H, std::span<const double> v) {
  return apply_impl(H, v);
}

std::vector<std::complex<double>> apply(const TruncatedHamiltonian& H,
                                        std::span<const std::complex<double>> v) {
  return apply_impl(H, v);
}

}  // namespace lrbox
