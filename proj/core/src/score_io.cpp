#include "sdeclass/score_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "json_support.hpp"

namespace sdeclass {

using nlohmann::json;

json score_params_json(const ScoreParams& params) {
  auto basis = [](const SplineBasis& b) {
    return json{{"order", b.order()}, {"dimension", b.dimension()}, {"halfwidth", b.halfwidth()}};
  };
  json drift = json::array();
  for (const auto& d : params.drift) drift.push_back(d.a);
  return json{{"format", kScoreParamsFormat},
              {"version", kScoreParamsVersion},
              {"num_classes", params.num_classes()},
              {"drift_basis", basis(params.drift_basis)},
              {"diffusion_basis", basis(params.diffusion_basis)},
              {"diffusion_floor", params.diffusion.floor},
              {"drift_coeffs", std::move(drift)},
              {"diffusion_coeffs", params.diffusion.alpha},
              {"weights", params.weights}};
}

ScoreParams score_params_from(const json& doc) {
  try {
    if (doc.value("format", std::string{}) != kScoreParamsFormat)
      throw FormatError("not a score-params document (format tag missing or wrong)");
    const int version = doc.at("version").get<int>();
    if (version != kScoreParamsVersion)
      throw FormatError("unsupported score-params version " + std::to_string(version));
    auto basis = [](const json& b) {
      return SplineBasis(b.at("order").get<int>(), b.at("dimension").get<int>(),
                         b.at("halfwidth").get<double>());
    };
    ScoreParams params{basis(doc.at("drift_basis")), basis(doc.at("diffusion_basis")), {}, {}, {}};
    for (const auto& a : doc.at("drift_coeffs")) params.drift.push_back(DriftCoeffs{a.get<std::vector<double>>()});
    params.diffusion.alpha = doc.at("diffusion_coeffs").get<std::vector<double>>();
    params.diffusion.floor = doc.at("diffusion_floor").get<double>();
    params.weights = doc.at("weights").get<std::vector<double>>();
    if (params.num_classes() != doc.at("num_classes").get<int>())
      throw FormatError("num_classes does not match the number of drift blocks");
    params.validate();
    return params;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed score-params document: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("invalid score-params document: ") + e.what());
  }
}

std::string score_params_to_json(const ScoreParams& params, int indent) {
  return score_params_json(params).dump(indent);
}

ScoreParams score_params_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("score-params file is not valid JSON: ") + e.what());
  }
  return score_params_from(doc);
}

void save_score_params(const std::filesystem::path& file, const ScoreParams& params) {
  write_text_file(file, score_params_to_json(params) + "\n");
}

ScoreParams load_score_params(const std::filesystem::path& file) {
  return score_params_from_json(read_text_file(file));
}

}  // namespace sdeclass
