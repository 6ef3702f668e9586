#include "tasep/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tasep/errors.hpp"
#include "tasep/parallel.hpp"

namespace tasep {
namespace {

// Coefficient of xi^j in (1 - xi)^e, exact for the sizes used at t = 0.
long double laurent_coefficient(int e, long j) {
  if (j < 0) return 0;
  if (e >= 0) {
    if (j > e) return 0;
    long double c = 1;
    for (long i = 0; i < j; ++i) c = c * (e - i) / (i + 1);
    return (j % 2 == 0) ? std::round(c) : -std::round(c);
  }
  const long m = -e;
  long double c = 1;
  for (long i = 0; i < j; ++i) c = c * (m + i) / (i + 1);
  return std::round(c);
}

constexpr long kMaxSeriesTerms = 200000;

}  // namespace

long double residue_value_extended(const ResidueIntegrand& spec) {
  const long k = spec.k;
  const long e = spec.e;
  const long double t = spec.t;
  if (!(spec.t >= 0.0) || !std::isfinite(spec.t)) throw DomainError("residue time must be finite and >= 0");
  const long j0 = std::max(0L, -k - 1);
  if (spec.t == 0.0) return laurent_coefficient(static_cast<int>(e), -k - 1);
  if (e >= 0 && j0 > e) return 0;

  // First term in log space so large t never overflows.
  const long n0 = k + j0 + 1;
  const long double c0 = laurent_coefficient(static_cast<int>(e), j0);
  long double log_mag = -t + static_cast<long double>(n0) * std::log(t) - std::lgamma(static_cast<long double>(n0) + 1);
  long double term = std::copysign(std::exp(std::log(std::fabs(c0)) + log_mag), c0);

  CompensatedSum<long double> sum;
  sum.add(term);
  long double prev_abs = std::fabs(term);
  for (long j = j0; j < j0 + kMaxSeriesTerms; ++j) {
    const long n = k + j + 1;
    long double ratio;
    if (e >= 0) {
      if (j + 1 > e) break;
      ratio = -static_cast<long double>(e - j) / static_cast<long double>(j + 1);
    } else {
      ratio = static_cast<long double>(-e + j) / static_cast<long double>(j + 1);
    }
    term *= ratio * t / static_cast<long double>(n + 1);
    sum.add(term);
    const long double a = std::fabs(term);
    if (e < 0 && a < prev_abs && a <= 1e-18L * std::fabs(sum.value())) break;
    prev_abs = a;
  }
  return sum.value();
}

double residue_value(const ResidueIntegrand& spec) {
  return static_cast<double>(residue_value_extended(spec));
}

ResidueTable::ResidueTable(double t, int k_min, int k_max, int e_min, int e_max)
    : t_(t), k_min_(k_min), k_max_(k_max), e_min_(e_min), e_max_(e_max) {
  if (k_max < k_min || e_max < e_min) throw DomainError("empty residue table");
  const std::size_t width = static_cast<std::size_t>(k_max - k_min + 1);
  values_.resize(width * static_cast<std::size_t>(e_max - e_min + 1));
  for (int e = e_min; e <= e_max; ++e)
    for (int k = k_min; k <= k_max; ++k)
      values_[static_cast<std::size_t>(e - e_min) * width + static_cast<std::size_t>(k - k_min)] =
          residue_value_extended({k, e, t});
}

long double ResidueTable::operator()(int k, int e) const {
  if (k < k_min_ || k > k_max_ || e < e_min_ || e > e_max_) return residue_value_extended({k, e, t_});
  const std::size_t width = static_cast<std::size_t>(k_max_ - k_min_ + 1);
  return values_[static_cast<std::size_t>(e - e_min_) * width + static_cast<std::size_t>(k - k_min_)];
}

void QuadratureSpec::validate() const {
  auto check_radius = [](double r) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("contour radius must lie in (0, 1)");
  };
  check_radius(radius);
  for (double r : radii) check_radius(r);
  if (points < 8 || (points & (points - 1)) != 0) throw DomainError("quadrature points must be a power of two >= 8");
  if (max_points < points) throw DomainError("max_points below initial points");
  if (!(tolerance >= 0.0) || !(abs_tolerance >= 0.0)) throw DomainError("tolerances must be nonnegative");
}

double QuadratureSpec::radius_for(int variable) const {
  if (radii.empty()) return radius;
  if (variable >= static_cast<int>(radii.size())) throw DomainError("missing per-variable radius");
  return radii[static_cast<std::size_t>(variable)];
}

double saddle_radius(int k, double t, double floor) {
  if (k + 1 <= 0 || t <= 0.0) return 0.5;
  return std::clamp(t / (k + 1), floor, 0.5);
}

namespace {

constexpr double kRoundingFloorFactor = 256 * std::numeric_limits<double>::epsilon();

bool small_enough(double delta, const Complex& value, double magnitude, double tol, double abs_tol) {
  return delta <= std::max({tol * std::abs(value), abs_tol, kRoundingFloorFactor * magnitude});
}

}  // namespace

QuadratureResult circle_quadrature(const std::function<Complex(Complex)>& f, const QuadratureSpec& spec) {
  spec.validate();
  const double r = spec.radius;
  CompensatedSum<long double> re, im, mag;
  auto add_nodes = [&](int m_total, int start, int stride) {
    for (int m = start; m < m_total; m += stride) {
      const double theta = 2.0 * std::numbers::pi * m / m_total;
      const Complex xi = std::polar(r, theta);
      const Complex v = f(xi) * xi;
      re.add(v.real());
      im.add(v.imag());
      mag.add(std::abs(v));
    }
  };
  int m = spec.points;
  add_nodes(m, 0, 1);
  auto current = [&](int count) {
    return Complex(static_cast<double>(re.value() / count), static_cast<double>(im.value() / count));
  };
  Complex prev = current(m);
  int small_in_a_row = 0;
  double delta = std::numeric_limits<double>::infinity();
  while (m < spec.max_points) {
    add_nodes(2 * m, 1, 2);
    m *= 2;
    const Complex value = current(m);
    delta = std::abs(value - prev);
    const double magnitude = static_cast<double>(mag.value() / m);
    small_in_a_row = small_enough(delta, value, magnitude, spec.tolerance, spec.abs_tolerance) ? small_in_a_row + 1 : 0;
    prev = value;
    if (small_in_a_row >= 2) return {value, m, delta};
  }
  throw AccuracyError("circle quadrature did not converge within " + std::to_string(spec.max_points) + " points",
                      prev.real(), delta, m);
}

namespace {

struct TensorSum {
  std::vector<Complex> values;
  std::vector<double> magnitudes;
};

TensorSum tensor_sum(const VectorIntegrand& f, int n, int outputs, int points, std::span<const double> radii) {
  std::vector<std::vector<Complex>> nodes(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    nodes[d].resize(static_cast<std::size_t>(points));
    for (int m = 0; m < points; ++m)
      nodes[d][m] = std::polar(radii[d], 2.0 * std::numbers::pi * m / points);
  }
  const std::size_t width = static_cast<std::size_t>(outputs);
  // One slot per outer index keeps the reduction order fixed.
  std::vector<long double> re(points * width), im(points * width), mag(points * width);
  parallel_for(static_cast<std::size_t>(points), [&](std::size_t outer) {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<Complex> xi(static_cast<std::size_t>(n));
    std::vector<Complex> out(width);
    std::vector<CompensatedSum<long double>> sr(width), si(width), sm(width);
    idx[0] = static_cast<int>(outer);
    while (true) {
      Complex weight{1.0, 0.0};
      for (int d = 0; d < n; ++d) {
        xi[d] = nodes[d][idx[d]];
        weight *= xi[d];
      }
      std::fill(out.begin(), out.end(), Complex{});
      f(xi, out);
      for (std::size_t o = 0; o < width; ++o) {
        const Complex v = out[o] * weight;
        sr[o].add(v.real());
        si[o].add(v.imag());
        sm[o].add(std::abs(v));
      }
      int d = n - 1;
      while (d >= 1 && ++idx[d] == points) idx[d--] = 0;
      if (d < 1) break;
    }
    for (std::size_t o = 0; o < width; ++o) {
      re[o * points + outer] = sr[o].value();
      im[o * points + outer] = si[o].value();
      mag[o * points + outer] = sm[o].value();
    }
  });
  const long double total = std::pow(static_cast<long double>(points), n);
  TensorSum result{std::vector<Complex>(width), std::vector<double>(width)};
  for (std::size_t o = 0; o < width; ++o) {
    const auto slice = [&](const std::vector<long double>& v) {
      return std::span<const long double>(v).subspan(o * points, static_cast<std::size_t>(points));
    };
    result.values[o] = Complex(static_cast<double>(pairwise_sum(slice(re)) / total),
                               static_cast<double>(pairwise_sum(slice(im)) / total));
    result.magnitudes[o] = static_cast<double>(pairwise_sum(slice(mag)) / total);
  }
  return result;
}

VectorIntegrand as_vector(const std::function<Complex(std::span<const Complex>)>& f) {
  return [&f](std::span<const Complex> xi, std::span<Complex> out) { out[0] = f(xi); };
}

std::vector<double> resolve_radii(const QuadratureSpec& spec, int n) {
  std::vector<double> radii(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) radii[d] = spec.radius_for(d);
  return radii;
}

int log2_int(int v) {
  int l = 0;
  while ((1 << l) < v) ++l;
  return l;
}

}  // namespace

QuadratureResult multi_contour_fixed(const std::function<Complex(std::span<const Complex>)>& f, int n, int points,
                                     std::span<const double> radii) {
  if (n < 1) throw DomainError("contour dimension must be positive");
  if (static_cast<int>(radii.size()) != n) throw DomainError("need one radius per variable");
  if (points < 1) throw DomainError("need at least one node");
  return {tensor_sum(as_vector(f), n, 1, points, radii).values[0], points, 0.0};
}

VectorQuadratureResult multi_contour_vector(const VectorIntegrand& f, int n, int outputs, const QuadratureSpec& spec) {
  spec.validate();
  if (n < 1) throw DomainError("contour dimension must be positive");
  if (outputs < 1) throw DomainError("need at least one output");
  const auto radii = resolve_radii(spec, n);
  auto within_budget = [&](int m) { return n * log2_int(m) <= spec.max_log2_evaluations && m <= spec.max_points; };
  int m = spec.points;
  if (!within_budget(m)) throw SizeError("tensor quadrature exceeds the evaluation budget");
  std::vector<Complex> prev = tensor_sum(f, n, outputs, m, radii).values;
  const int first = m;
  double delta = std::numeric_limits<double>::infinity();
  while (within_budget(2 * m)) {
    m *= 2;
    TensorSum level = tensor_sum(f, n, outputs, m, radii);
    bool all_small = true;
    delta = 0.0;
    for (int o = 0; o < outputs; ++o) {
      const double d = std::abs(level.values[o] - prev[o]);
      delta = std::max(delta, d);
      if (!small_enough(d, level.values[o], level.magnitudes[o], spec.tolerance, spec.abs_tolerance)) all_small = false;
    }
    prev = std::move(level.values);
    // A level costs 2^N times the previous one, so one small difference is
    // accepted once two doublings have been made.
    if (all_small && m >= 4 * first) return {prev, m, delta};
  }
  throw AccuracyError("tensor quadrature did not converge within budget (" + std::to_string(m) + " points per circle)",
                      prev[0].real(), delta, m);
}

QuadratureResult multi_contour(const std::function<Complex(std::span<const Complex>)>& f, int n,
                               const QuadratureSpec& spec) {
  const auto r = multi_contour_vector(as_vector(f), n, 1, spec);
  return {r.values[0], r.points, r.delta};
}

}  // namespace tasep
