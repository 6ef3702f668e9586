#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tasep/scalar.hpp"

namespace tasep {

/// (1 / 2 pi i) \oint xi^k (1 - xi)^e exp((1/xi - 1) t) d xi over a
/// counterclockwise circle of radius < 1 around the origin.
struct ResidueIntegrand {
  int k = 0;
  int e = 0;
  double t = 0.0;
};

/// Exact residue series. Expanding exp(t/xi) = sum_n t^n xi^{-n} / n! and
/// (1 - xi)^e = sum_j c_j xi^j, the xi^{-1} coefficient is
///   e^{-t} sum_{j >= max(0, -k-1)} c_j t^{k+j+1} / (k+j+1)!
/// with c_j = (-1)^j C(e, j) for e >= 0 (finite) and C(j - e - 1, j) for
/// e < 0 (positive, convergent). At t = 0 only the n = 0 term survives and
/// the result is the integer Laurent coefficient c_{-k-1}.
double residue_value(const ResidueIntegrand& spec);

/// Same series carried in extended precision.
long double residue_value_extended(const ResidueIntegrand& spec);

/// Caches residue_value(k, e, t) for a fixed t over a rectangle of (k, e).
class ResidueTable {
 public:
  ResidueTable(double t, int k_min, int k_max, int e_min, int e_max);
  long double operator()(int k, int e) const;
  double time() const { return t_; }

 private:
  double t_;
  int k_min_, k_max_, e_min_, e_max_;
  std::vector<long double> values_;
};

struct QuadratureSpec {
  double radius = 0.5;
  /// Optional per-variable radii for multi_contour; overrides `radius`.
  std::vector<double> radii;
  /// Initial number of nodes per circle (power of two, >= 8).
  int points = 16;
  /// Relative tolerance on successive doublings.
  double tolerance = 1e-13;
  /// Absolute tolerance on successive doublings.
  double abs_tolerance = 0.0;
  int max_points = 1 << 20;
  /// Budget guard for tensor rules: N * log2(M) may not exceed this.
  int max_log2_evaluations = 24;

  void validate() const;
  double radius_for(int variable) const;
};

struct QuadratureResult {
  Complex value;
  int points = 0;    // final nodes per circle
  double delta = 0;  // last |difference| between successive doublings
};

/// Adaptive M-point trapezoidal rule on |xi| = radius. Doubles M until two
/// consecutive differences fall below tolerance (or below the rounding floor
/// implied by the integrand magnitude); throws AccuracyError past max_points.
QuadratureResult circle_quadrature(const std::function<Complex(Complex)>& f, const QuadratureSpec& spec);

/// Fixed-M tensor trapezoidal rule for an N-fold contour integral.
QuadratureResult multi_contour_fixed(const std::function<Complex(std::span<const Complex>)>& f, int n, int points,
                                     std::span<const double> radii);

/// Adaptive tensor trapezoidal rule (M^N evaluations per level).
QuadratureResult multi_contour(const std::function<Complex(std::span<const Complex>)>& f, int n,
                               const QuadratureSpec& spec);

/// Vector-valued integrand: writes `outputs` values for the node `xi`.
using VectorIntegrand = std::function<void(std::span<const Complex> xi, std::span<Complex> out)>;

struct VectorQuadratureResult {
  std::vector<Complex> values;
  int points = 0;
  double delta = 0;  // largest componentwise difference at the last doubling
};

/// Adaptive tensor rule for several integrals sharing one set of nodes.
/// Stops at the first doubling where every component passes the scalar
/// criterion, provided at least two doublings have been made.
VectorQuadratureResult multi_contour_vector(const VectorIntegrand& f, int n, int outputs, const QuadratureSpec& spec);

/// Radius minimizing |xi^{k+1} exp(t / xi)| on the positive axis, clamped to
/// [floor, 0.5]; keeps trapezoidal sums free of cancellation for small values.
double saddle_radius(int k, double t, double floor = 1e-3);

}  // namespace tasep
