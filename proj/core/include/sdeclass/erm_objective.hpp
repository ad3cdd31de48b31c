#pragma once

#include <span>
#include <vector>

#include "sdeclass/diffusion_sim.hpp"
#include "sdeclass/scores.hpp"
#include "sdeclass/splines.hpp"

namespace sdeclass {

/// Empirical L2 risk of spline scores over a fixed dataset, as a smooth
/// function of the flattened coefficient vector
///
///   [ a_1 (D1+M) | a_2 | ... | a_K | alpha (D2+M) ].
///
/// The local B-spline values at every left grid point of every path are
/// tabulated once at construction, so each evaluation costs
/// O(N n K (M + 1)). The class weights are fixed.
///
/// The floor truncation of the diffusion is treated piecewise: grid points
/// where sigma~^2 < floor contribute no gradient to alpha.
class ErmObjective {
 public:
  ErmObjective(const LabeledDataset& data, SplineBasis drift_basis, SplineBasis diffusion_basis,
               std::vector<double> weights, double floor);

  std::size_t num_parameters() const noexcept;
  int num_classes() const noexcept { return num_classes_; }
  const SplineBasis& drift_basis() const noexcept { return drift_basis_; }
  const SplineBasis& diffusion_basis() const noexcept { return diffusion_basis_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double floor() const noexcept { return floor_; }

  std::vector<double> pack(const ScoreParams& params) const;
  ScoreParams unpack(std::span<const double> x) const;

  double value(std::span<const double> x) const;
  double value_and_gradient(std::span<const double> x, std::span<double> grad) const;

  /// Projects every drift block onto the ball of squared radius `drift_radius2`
  /// and the diffusion block onto `diffusion_radius2`.
  void project(std::span<double> x, double drift_radius2, double diffusion_radius2) const;

 private:
  double evaluate(std::span<const double> x, double* grad) const;

  const LabeledDataset* data_;
  SplineBasis drift_basis_;
  SplineBasis diffusion_basis_;
  std::vector<double> weights_;
  double floor_;
  int num_classes_;
  int steps_;
  int drift_width_;
  int diffusion_width_;
  // Per (path, step) tables, row-major over paths.
  std::vector<int> drift_first_;
  std::vector<double> drift_values_;
  std::vector<int> diffusion_first_;
  std::vector<double> diffusion_values_;
  std::vector<double> increments_;
};

}  // namespace sdeclass
