#pragma once

#include <string>

#include "ewr/bounds.hpp"
#include "ewr/figure1.hpp"
#include "ewr/property_suite.hpp"
#include "json.hpp"

namespace ewr {

/// Structured documents for the tool outputs. Non-finite numbers become
/// null; K_L always has its logarithm next to it.
nlohmann::json to_json(const BoundInputs& in);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const PropertyResult& r);
nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const Figure1Result& r);

/// CSV with header L,lower_bound,theta1,theta2,K_L. In U(2) mode theta1 and
/// theta2 are the first angle of each maximizer.
std::string figure1_csv(const Figure1Result& r);

}  // namespace ewr
