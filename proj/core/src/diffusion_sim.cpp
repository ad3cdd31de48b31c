#include "sdeclass/diffusion_sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sdeclass/errors.hpp"
#include "sdeclass/parallel.hpp"

namespace sdeclass {

void Path::validate() const {
  if (steps < 1) throw ParameterError("path must have at least one step");
  if (values.size() != static_cast<std::size_t>(steps) + 1)
    throw ParameterError("path has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(steps + 1));
  if (values.front() != 0.0) throw ParameterError("path must start at 0");
  if (std::abs(delta * steps - 1.0) > 1e-12) throw ParameterError("path grid must cover [0, 1]");
}

Path make_path(std::vector<double> values) {
  if (values.size() < 2) throw ParameterError("a path needs at least two observations");
  Path p;
  p.steps = static_cast<int>(values.size()) - 1;
  p.delta = 1.0 / p.steps;
  p.values = std::move(values);
  return p;
}

void LabeledDataset::validate() const {
  if (num_classes < 1) throw ParameterError("dataset must have K >= 1");
  if (paths.size() != labels.size()) throw ParameterError("paths and labels differ in length");
  for (std::size_t j = 0; j < paths.size(); ++j) {
    const Path& p = paths[j];
    if (p.steps != steps || p.delta != delta)
      throw ParameterError("path " + std::to_string(j) + " is on a different grid");
    p.validate();
    if (labels[j] < 1 || labels[j] > num_classes)
      throw ParameterError("label " + std::to_string(labels[j]) + " of path " + std::to_string(j) +
                           " is outside 1.." + std::to_string(num_classes));
  }
}

void ModelSpec::validate() const {
  if (drifts.empty()) throw ParameterError("model needs at least one class");
  if (class_probs.size() != drifts.size())
    throw ParameterError("model has " + std::to_string(drifts.size()) + " drifts but " +
                         std::to_string(class_probs.size()) + " class probabilities");
  if (!diffusion) throw ParameterError("model has no diffusion function");
  double total = 0.0;
  for (double p : class_probs) {
    if (!(p >= 0.0)) throw ParameterError("class probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("class probabilities must sum to 1");
}

ModelSpec builtin_model(BuiltinModel id) {
  ModelSpec m;
  switch (id) {
    case BuiltinModel::Model1:
      m.name = "model1";
      m.drifts = {[](double x) { return -(x - 1.0); }, [](double x) { return -(x + 1.0); },
                  [](double x) { return -x; }};
      m.diffusion = [](double) { return 1.0; };
      break;
    case BuiltinModel::Model2:
      m.name = "model2";
      m.drifts = {[](double x) { return 0.25 + 0.75 * std::cos(x); },
                  [](double x) { return -2.0 * std::exp(-x * x) + std::sin(x); },
                  [](double x) { return 4.0 / (std::numbers::pi * (x * x + 1.0)); }};
      m.diffusion = [](double) { return 1.0; };
      break;
    case BuiltinModel::Model3: {
      m.name = "model3";
      auto cos2 = [](double x) {
        const double c = std::cos(x);
        return c * c;
      };
      m.drifts = {[cos2](double x) { return -0.5 - 1.5 * cos2(x); },
                  [cos2](double x) { return 0.25 + 0.75 * cos2(x); },
                  [cos2](double x) { return 0.5 + 1.5 * cos2(x); },
                  [](double x) { return x - 1.0; },
                  [](double x) { return -(x - 1.0); },
                  [](double x) { return -(x - 4.0); }};
      m.diffusion = [](double x) { return 0.1 + 0.9 / std::sqrt(1.0 + x * x); };
      break;
    }
  }
  const auto k = m.drifts.size();
  m.class_probs.assign(k, 1.0 / static_cast<double>(k));
  return m;
}

std::optional<BuiltinModel> parse_builtin_model(std::string_view id) {
  std::string s;
  for (char c : id) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "model1" || s == "1") return BuiltinModel::Model1;
  if (s == "model2" || s == "2") return BuiltinModel::Model2;
  if (s == "model3" || s == "3") return BuiltinModel::Model3;
  return std::nullopt;
}

ModelSpec separated_model(double shift) {
  ModelSpec m;
  m.name = "separated";
  m.drifts = {[shift](double) { return -shift; }, [shift](double) { return shift; }};
  m.diffusion = [](double) { return 1.0; };
  m.class_probs = {0.5, 0.5};
  return m;
}

ModelSpec restrict_classes(const ModelSpec& model, const std::vector<int>& classes) {
  model.validate();
  if (classes.empty()) throw ParameterError("class restriction must keep at least one class");
  ModelSpec out;
  out.name = model.name;
  out.diffusion = model.diffusion;
  double total = 0.0;
  for (int c : classes) {
    if (c < 1 || c > model.num_classes())
      throw ParameterError("class " + std::to_string(c) + " is not in the model");
    out.drifts.push_back(model.drifts[static_cast<std::size_t>(c - 1)]);
    out.class_probs.push_back(model.class_probs[static_cast<std::size_t>(c - 1)]);
    total += out.class_probs.back();
    out.name += (out.drifts.size() == 1 ? ":" : ",") + std::to_string(c);
  }
  if (!(total > 0.0)) throw ParameterError("restricted classes carry zero probability");
  for (double& p : out.class_probs) p /= total;
  return out;
}

ModelSpec model_by_name(std::string_view id) {
  if (auto b = parse_builtin_model(id)) return builtin_model(*b);
  if (id == "separated") return separated_model();
  throw ParameterError("unknown model '" + std::string(id) +
                       "' (expected model1, model2, model3 or separated)");
}

Path simulate_path(const ModelSpec& model, int label, int steps, Engine& rng, int refine) {
  if (steps < 1) throw ParameterError("steps must be >= 1");
  if (refine < 1) throw ParameterError("refinement factor must be >= 1");
  if (label < 1 || label > model.num_classes())
    throw ParameterError("label " + std::to_string(label) + " outside 1.." +
                         std::to_string(model.num_classes()));
  const ScalarFunction& drift = model.drifts[static_cast<std::size_t>(label - 1)];
  const ScalarFunction& sigma = model.diffusion;

  Path path;
  path.steps = steps;
  path.delta = 1.0 / steps;
  path.values.assign(static_cast<std::size_t>(steps) + 1, 0.0);

  const double h = 1.0 / (static_cast<double>(steps) * refine);
  const double sqrt_h = std::sqrt(h);
  std::normal_distribution<double> normal(0.0, 1.0);
  double x = 0.0;
  for (int k = 0; k < steps; ++k) {
    for (int r = 0; r < refine; ++r) {
      const double b = drift(x);
      const double s = sigma(x);
      const long step = static_cast<long>(k) * refine + r;
      if (!std::isfinite(b) || !std::isfinite(s))
        throw SimulationError("non-finite drift or diffusion at step " + std::to_string(step));
      if (s < 0.0)
        throw ParameterError("negative diffusion value at step " + std::to_string(step));
      x += b * h + s * sqrt_h * normal(rng);
      if (!std::isfinite(x))
        throw SimulationError("path diverged at step " + std::to_string(step));
    }
    path.values[static_cast<std::size_t>(k) + 1] = x;
  }
  return path;
}

namespace {

int draw_label(const std::vector<double>& probs, Engine& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cum = 0.0;
  int last_positive = 1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = static_cast<int>(k) + 1;
    cum += probs[k];
    if (u < cum) return last_positive;
  }
  return last_positive;
}

}  // namespace

LabeledDataset simulate_dataset(const ModelSpec& model, int num_paths, int steps,
                                std::uint64_t seed, const SimulationOptions& options) {
  model.validate();
  if (num_paths < 1) throw ParameterError("dataset size must be >= 1");
  if (steps < 1) throw ParameterError("steps must be >= 1");

  LabeledDataset data;
  data.num_classes = model.num_classes();
  data.steps = steps;
  data.delta = 1.0 / steps;
  data.paths.resize(static_cast<std::size_t>(num_paths));
  data.labels.resize(static_cast<std::size_t>(num_paths));

  parallel_for(static_cast<std::size_t>(num_paths), options.threads, [&](std::size_t j) {
    Engine rng = make_stream(seed, j);
    const int label = draw_label(model.class_probs, rng);
    data.labels[j] = label;
    data.paths[j] = simulate_path(model, label, steps, rng, options.refine);
  });
  return data;
}

std::vector<int> class_counts(const LabeledDataset& data) {
  std::vector<int> counts(static_cast<std::size_t>(std::max(data.num_classes, 0)), 0);
  for (int y : data.labels)
    if (y >= 1 && y <= data.num_classes) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

}  // namespace sdeclass
