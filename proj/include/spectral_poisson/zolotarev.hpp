#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace spoisson {

/// sigma(A) in [a,b], sigma(B) in [c,d], with a <= b < c <= d.
struct SpectralIntervals {
  double a, b, c, d;
};

// Throws PreconditionError unless a <= b < c <= d and all finite.
void check_intervals(const SpectralIntervals& iv);

struct ShiftSchedule {
  std::vector<double> p;  // shifts for the B-side solves, inside [a,b]
  std::vector<double> q;  // shifts for the A-side solves, inside [c,d]
  int iterations() const { return static_cast<int>(p.size()); }
};

double cross_ratio_gamma(const SpectralIntervals& iv);
double alpha_from_gamma(double gamma);

/// T(t) = (w[0] t + w[1]) / (w[2] t + w[3]), normalized so max |w_i| = 1.
/// Maps -alpha, -1, 1, alpha to a, b, c, d.
struct MobiusMap {
  std::array<double, 4> w;
  double alpha;
  double operator()(double t) const { return (w[0] * t + w[1]) / (w[2] * t + w[3]); }
};

MobiusMap mobius_map(const SpectralIntervals& iv);

enum class CountFormula {
  General,          // ceil(log(16 gamma) log(4/eps) / pi^2), parameter = gamma
  FiniteDifference, // ceil(log(2n) log(4/eps) / pi^2), parameter = n
  SquareSpectral,   // ceil(log(120 n^4) log(1/eps) / (2 pi^2)), parameter = n
};

CountFormula parse_count_formula(std::string_view name);

// J from the selected formula, clamped to J >= 1. Accepts 0 < eps <= 1.
int iteration_count(CountFormula formula, double parameter, double eps);

// Optimal shifts with J from the general formula.
ShiftSchedule adi_shifts(const SpectralIntervals& iv, double eps);
// Optimal shifts for a prescribed iteration count.
ShiftSchedule adi_shifts_for(const SpectralIntervals& iv, int J);

}  // namespace spoisson
