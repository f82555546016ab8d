#pragma once

#include <filesystem>
#include <string>

#include "pidlab/distribution.hpp"
#include <json.hpp>

namespace pidlab {

/// Reads {"vars":[{"name","alphabet"}], "probs":[{"outcome":[...],"p":...}]}.
/// Outcomes not listed have probability zero. Throws ParseError on malformed
/// input or duplicate outcomes and NotNormalized when the weights do not sum
/// to one (exactly for rational weights, within 1e-9 otherwise).
JointDistribution distribution_from_json(const nlohmann::json& doc);
JointDistribution load_distribution(const std::filesystem::path& path);

/// Lists positive cells in table order. Exact weights are written as
/// "num/den" strings, float weights as JSON numbers.
nlohmann::json distribution_to_json(const JointDistribution& dist);
void save_distribution(const JointDistribution& dist, const std::filesystem::path& path);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace pidlab
