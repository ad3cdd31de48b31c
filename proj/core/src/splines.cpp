#include "sdeclass/splines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdeclass/errors.hpp"

namespace sdeclass {

SplineBasis::SplineBasis(int order, int dimension, double halfwidth)
    : order_(order), dimension_(dimension), halfwidth_(halfwidth) {
  if (order < 1 || order > kMaxOrder)
    throw ParameterError("spline order must be in [1, " + std::to_string(kMaxOrder) + "], got " +
                         std::to_string(order));
  if (dimension < 1)
    throw ParameterError("spline dimension must be >= 1, got " + std::to_string(dimension));
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth))
    throw ParameterError("spline support halfwidth must be finite and > 0");

  knots_.reserve(static_cast<std::size_t>(dimension + 2 * order + 1));
  for (int i = 0; i <= order; ++i) knots_.push_back(-halfwidth);
  for (int l = 1; l < dimension; ++l)
    knots_.push_back(-halfwidth + 2.0 * l * halfwidth / dimension);
  for (int i = 0; i <= order; ++i) knots_.push_back(halfwidth);
}

int SplineBasis::eval_local(double x, std::span<double> out) const noexcept {
  if (!(x >= -halfwidth_ && x <= halfwidth_)) return -1;

  const int p = order_;
  // Knot span mu with t[mu] <= x < t[mu+1], mu in [p, p+D-1]. Interior knots
  // are uniform, so the span follows from the cell index directly.
  const double cell = 2.0 * halfwidth_ / dimension_;
  int j = static_cast<int>(std::floor((x + halfwidth_) / cell));
  j = std::clamp(j, 0, dimension_ - 1);
  // Guard the floor against rounding at interior knots.
  while (j > 0 && x < knots_[static_cast<std::size_t>(p + j)]) --j;
  while (j < dimension_ - 1 && x >= knots_[static_cast<std::size_t>(p + j + 1)]) ++j;
  const int mu = p + j;

  // Triangular Cox-de Boor scheme (de Boor, A Practical Guide to Splines, BSPLVB).
  double left[kMaxOrder + 1];
  double right[kMaxOrder + 1];
  out[0] = 1.0;
  for (int r = 1; r <= p; ++r) {
    left[r] = x - knots_[static_cast<std::size_t>(mu + 1 - r)];
    right[r] = knots_[static_cast<std::size_t>(mu + r)] - x;
    double saved = 0.0;
    for (int s = 0; s < r; ++s) {
      const double denom = right[s + 1] + left[r - s];
      const double temp = denom > 0.0 ? out[s] / denom : 0.0;
      out[s] = saved + right[s + 1] * temp;
      saved = left[r - s] * temp;
    }
    out[r] = saved;
  }
  return mu - p;
}

std::vector<double> SplineBasis::eval(double x) const {
  std::vector<double> values(size(), 0.0);
  std::vector<double> local(static_cast<std::size_t>(order_ + 1));
  const int first = eval_local(x, local);
  if (first < 0) return values;
  for (int s = 0; s <= order_; ++s) values[static_cast<std::size_t>(first + s)] = local[static_cast<std::size_t>(s)];
  return values;
}

double eval_spline(const SplineBasis& basis, std::span<const double> coeffs, double x) {
  if (coeffs.size() != basis.size())
    throw ParameterError("coefficient length " + std::to_string(coeffs.size()) +
                         " does not match basis size " + std::to_string(basis.size()));
  double local[SplineBasis::kMaxOrder + 1];
  const int first = basis.eval_local(x, local);
  if (first < 0) return 0.0;
  double acc = 0.0;
  for (int s = 0; s <= basis.order(); ++s) acc += coeffs[static_cast<std::size_t>(first + s)] * local[s];
  return acc;
}

double eval_drift(const SplineBasis& basis, const DriftCoeffs& c, double x) {
  return eval_spline(basis, c.a, x);
}

double eval_diffusion(const SplineBasis& basis, const DiffusionCoeffs& c, double x) {
  return std::max(eval_spline(basis, c.alpha, x), c.floor);
}

double coefficient_radius2(int dimension, int order, std::size_t sample_size) {
  const double logn = std::log(static_cast<double>(sample_size));
  return static_cast<double>(dimension + order) * logn * logn * logn;
}

double squared_norm(std::span<const double> c) noexcept {
  return std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
}

void project_ball_inplace(std::span<double> c, double radius2) {
  if (!(radius2 > 0.0)) throw ParameterError("ball radius^2 must be > 0");
  const double norm2 = squared_norm(c);
  if (norm2 <= radius2) return;
  const double scale = std::sqrt(radius2 / norm2);
  for (double& v : c) v *= scale;
}

std::vector<double> project_ball(std::vector<double> c, double radius2) {
  project_ball_inplace(c, radius2);
  return c;
}

}  // namespace sdeclass
