#pragma once

#include <string>

#include <json.hpp>

#include "stochnewton/hash.hpp"
#include "stochnewton/measure.hpp"
#include "stochnewton/polynomial.hpp"

namespace stochnewton {

// Measure configs:
//   {"kind":"uniform_disk","radius":0.75,"seed":42}
//   {"kind":"uniform_annulus","inner":0.5,"outer":0.9,"seed":42}
//   {"kind":"finite","atoms":[[[0.5,0],0.3],[[1.5,0],0.7]],"seed":42}
LambdaMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const LambdaMeasure& m);

// Polynomials as JSON arrays of [re, im] coefficient pairs (ascending
// degree), or as a formula string.
Polynomial polynomial_from_json(const nlohmann::json& j);
nlohmann::json polynomial_to_json(const Polynomial& p);

}  // namespace stochnewton
