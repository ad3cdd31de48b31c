#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdeclass/rng.hpp"

namespace sdeclass {

/// One trajectory observed at times k * delta, k = 0..steps, on [0, 1].
struct Path {
  std::vector<double> values;
  int steps = 0;
  double delta = 0.0;

  /// Throws ParameterError if values.size() != steps + 1, values[0] != 0 or
  /// |steps * delta - 1| > 1e-12.
  void validate() const;
};

Path make_path(std::vector<double> values);

/// N labelled paths on a common grid. Labels are class indices in 1..K.
struct LabeledDataset {
  std::vector<Path> paths;
  std::vector<int> labels;
  int num_classes = 0;
  int steps = 0;
  double delta = 0.0;

  std::size_t size() const noexcept { return paths.size(); }
  void validate() const;
};

using ScalarFunction = std::function<double(double)>;

/// Ground-truth diffusion model: one drift per class, a shared diffusion
/// coefficient sigma (not squared) and class probabilities.
struct ModelSpec {
  std::string name;
  std::vector<ScalarFunction> drifts;
  ScalarFunction diffusion;
  std::vector<double> class_probs;

  int num_classes() const noexcept { return static_cast<int>(drifts.size()); }
  /// Throws ParameterError unless drifts/class_probs agree in length, the
  /// probabilities are nonnegative and sum to 1 within 1e-12.
  void validate() const;
};

enum class BuiltinModel { Model1, Model2, Model3 };

/// Drift and diffusion functions of the three benchmark models, uniform class
/// probabilities.
ModelSpec builtin_model(BuiltinModel id);

/// Accepts "model1" / "Model1" / "1" (and likewise for 2, 3).
std::optional<BuiltinModel> parse_builtin_model(std::string_view id);

/// Two classes with constant drifts -shift and +shift, sigma = 1, p = (1/2, 1/2).
ModelSpec separated_model(double shift = 5.0);

/// Restriction of `model` to the listed (1-based) classes, with renormalized
/// class probabilities.
ModelSpec restrict_classes(const ModelSpec& model, const std::vector<int>& classes);

/// Resolves "model1".."model3" or "separated".
ModelSpec model_by_name(std::string_view id);

/// Euler-Maruyama path of class `label` started at 0.
///
/// The path is returned on the observation grid of `steps` steps; the scheme
/// itself runs on a grid `refine` times finer. Throws SimulationError naming the
/// step at which a non-finite drift, diffusion or state is produced, and
/// ParameterError for steps < 1, refine < 1, a label outside 1..K or a negative
/// diffusion value.
Path simulate_path(const ModelSpec& model, int label, int steps, Engine& rng, int refine = 1);

struct SimulationOptions {
  int refine = 1;
  int threads = 1;
};

/// N independent (path, label) pairs. Path j draws its label and its Brownian
/// increments from stream j of `seed`, so the result does not depend on the
/// number of threads.
LabeledDataset simulate_dataset(const ModelSpec& model, int num_paths, int steps,
                                std::uint64_t seed, const SimulationOptions& options = {});

std::vector<int> class_counts(const LabeledDataset& data);

}  // namespace sdeclass
