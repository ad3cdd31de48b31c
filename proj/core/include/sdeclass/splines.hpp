#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdeclass {

/// Clamped uniform B-spline basis of degree M on [-A, A].
///
/// The knot vector has D + 2M + 1 entries: M + 1 copies of -A, the D - 1
/// interior knots -A + 2lA/D (l = 1..D-1), and M + 1 copies of +A. This gives
/// D + M basis functions, each a piecewise polynomial of degree M that is
/// C^{M-1} across interior knots. Outside [-A, A] every basis function is 0;
/// at x = +A the last basis function evaluates to 1.
///
/// Immutable after construction.
class SplineBasis {
 public:
  static constexpr int kMaxOrder = 15;

  /// Throws ParameterError unless 1 <= order <= kMaxOrder, dimension >= 1 and
  /// halfwidth > 0.
  SplineBasis(int order, int dimension, double halfwidth);

  int order() const noexcept { return order_; }
  int dimension() const noexcept { return dimension_; }
  double halfwidth() const noexcept { return halfwidth_; }
  /// Number of basis functions, D + M.
  std::size_t size() const noexcept { return static_cast<std::size_t>(dimension_ + order_); }
  std::span<const double> knots() const noexcept { return knots_; }

  bool in_support(double x) const noexcept { return x >= -halfwidth_ && x <= halfwidth_; }

  /// Evaluates the M + 1 basis functions that can be nonzero at x.
  ///
  /// `out` must hold at least order() + 1 values. Returns the index of the
  /// basis function stored in out[0], or -1 when x lies outside [-A, A] (in
  /// which case `out` is left untouched).
  int eval_local(double x, std::span<double> out) const noexcept;

  /// All D + M basis values at x.
  std::vector<double> eval(double x) const;

  bool operator==(const SplineBasis& other) const noexcept {
    return order_ == other.order_ && dimension_ == other.dimension_ &&
           halfwidth_ == other.halfwidth_;
  }

 private:
  int order_;
  int dimension_;
  double halfwidth_;
  std::vector<double> knots_;
};

/// B-spline coefficients of a drift candidate.
struct DriftCoeffs {
  std::vector<double> a;
};

/// B-spline coefficients of an (untruncated) squared diffusion candidate plus
/// the truncation floor applied on evaluation.
struct DiffusionCoeffs {
  std::vector<double> alpha;
  double floor = 1.0;
};

inline std::vector<double> eval_basis(const SplineBasis& basis, double x) { return basis.eval(x); }

/// Sum_l a_l B_l(x); zero outside the support. Throws ParameterError on length mismatch.
double eval_drift(const SplineBasis& basis, const DriftCoeffs& c, double x);

/// Spline value without the floor truncation.
double eval_spline(const SplineBasis& basis, std::span<const double> coeffs, double x);

/// max(sigma~^2(x), floor). Throws ParameterError on length mismatch.
double eval_diffusion(const SplineBasis& basis, const DiffusionCoeffs& c, double x);

/// Radius^2 of the coefficient ball: (D + M) * log(N)^3.
double coefficient_radius2(int dimension, int order, std::size_t sample_size);

/// Rescales `c` in place onto the Euclidean ball of squared radius `radius2`
/// if it lies outside; leaves it unchanged otherwise.
void project_ball_inplace(std::span<double> c, double radius2);

std::vector<double> project_ball(std::vector<double> c, double radius2);

double squared_norm(std::span<const double> c) noexcept;

}  // namespace sdeclass
