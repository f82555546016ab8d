#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pidlab/distribution.hpp"

namespace pidlab {

/// Builds an exact distribution from listed outcomes; unlisted cells are 0.
JointDistribution from_outcomes(std::vector<Variable> vars,
                                const std::vector<std::pair<std::vector<std::string>, Rational>>& cells);

/// Named example distributions. Predictor/target examples use variables X1,
/// X2, Y; EX5 and EX6 use X, Y.
///
///   XOR AND COPY UNQ RDN RDNUNQXOR EX4 EX5 EX6 EX11
///
/// EX6 and EX11 take (delta, delta2), each of magnitude below 1/8; a name
/// may also carry them inline, as in "EX6(1/16,1/32)". Throws UnknownName
/// and BadParams.
JointDistribution canonical(std::string_view name, std::optional<Rational> delta = std::nullopt,
                            std::optional<Rational> delta2 = std::nullopt);

/// Names accepted by canonical(), without parameters.
const std::vector<std::string>& canonical_names();

}  // namespace pidlab
