#include "lrbox/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "lrbox/errors.hpp"

namespace lrbox {

namespace {

struct Point {
  double x;
  double v;
};

std::vector<Point> sorted_points(std::span<const double> x, std::span<const double> v) {
  if (x.size() != v.size()) throw DimensionError("fit: x and y lengths differ");
  std::vector<Point> pts(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) pts[i] = {x[i], std::abs(v[i])};
  std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  return pts;
}

double safe_log(double v) {
  return std::log(std::max(v, std::numeric_limits<double>::min()));
}

FitResult fit_filtered(std::span<const double> x, std::span<const double> err, bool log_x,
                       std::optional<double> floor) {
  const double fl = floor ? *floor : estimate_noise_floor(x, err, log_x);
  std::vector<double> fx, fy;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = std::abs(err[i]);
    if (!(v > 10.0 * fl) || !(v > 0.0)) {
      ++excluded;
      continue;
    }
    fx.push_back(log_x ? std::log(x[i]) : x[i]);
    fy.push_back(std::log(v));
  }
  if (fx.size() < 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", fl);
    throw FitError(std::string("fewer than two points above the noise floor (floor ") + buf + ")");
  }
  FitResult r = fit_line(fx, fy);
  r.excluded = excluded;
  r.noise_floor = fl;
  return r;
}

}  // namespace

FitResult fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit: x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 2) throw FitError("fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit: all abscissae coincide");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - (r.slope * x[i] + r.intercept);
    ss_res += d * d;
  }
  r.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  r.rms_residual = std::sqrt(ss_res / static_cast<double>(n));
  r.points = n;
  return r;
}

double estimate_noise_floor(std::span<const double> x, std::span<const double> values,
                            bool log_x) {
  auto pts = sorted_points(x, values);
  const std::size_t n = pts.size();
  if (n < 6) return 0.0;
  // The floor sits at the low-error end of the sweep.
  if (pts.front().v < pts.back().v) std::reverse(pts.begin(), pts.end());
  const std::size_t tail = std::max<std::size_t>(3, n / 4);

  auto slope_of = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = lo; i < hi; ++i) {
      lx.push_back(log_x ? std::log(pts[i].x) : pts[i].x);
      ly.push_back(safe_log(pts[i].v));
    }
    return fit_line(lx, ly).slope;
  };
  const double head = slope_of(0, tail);
  const double tail_slope = slope_of(n - tail, n);
  if (std::abs(tail_slope) >= 0.25 * std::abs(head)) return 0.0;
  double fl = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) fl = std::max(fl, pts[i].v);
  return fl;
}

FitResult fit_loglog(std::span<const double> x, std::span<const double> err,
                     std::optional<double> floor) {
  for (double xi : x) {
    if (!(xi > 0.0)) throw DomainError("fit_loglog needs positive abscissae");
  }
  return fit_filtered(x, err, true, floor);
}

FitResult fit_semilog(std::span<const double> x, std::span<const double> err,
                      std::optional<double> floor) {
  return fit_filtered(x, err, false, floor);
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::vector<double> arange(double lo, double hi, double step) {
  if (!(step > 0.0)) throw DomainError("arange needs a positive step");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

}  // namespace lrbox
