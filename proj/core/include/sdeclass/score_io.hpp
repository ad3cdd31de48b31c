#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sdeclass/scores.hpp"

namespace sdeclass {

inline constexpr std::string_view kScoreParamsFormat = "sdeclass.score_params";
inline constexpr int kScoreParamsVersion = 1;

/// Versioned JSON document:
///
///   { "format": "sdeclass.score_params", "version": 1, "num_classes": K,
///     "drift_basis":     { "order": M, "dimension": D1, "halfwidth": A },
///     "diffusion_basis": { "order": M, "dimension": D2, "halfwidth": A },
///     "diffusion_floor": f, "drift_coeffs": [[...] x K], "diffusion_coeffs": [...],
///     "weights": [...] }
///
/// Doubles are written with round-trip precision.
std::string score_params_to_json(const ScoreParams& params, int indent = 2);

/// Throws FormatError on a wrong format tag, an unsupported version, or a
/// document that fails ScoreParams::validate().
ScoreParams score_params_from_json(std::string_view text);

void save_score_params(const std::filesystem::path& file, const ScoreParams& params);
ScoreParams load_score_params(const std::filesystem::path& file);

}  // namespace sdeclass
