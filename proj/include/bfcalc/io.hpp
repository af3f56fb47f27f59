#pragma once

#include <json.hpp>

#include "bfcalc/subordination.hpp"

namespace bfcalc {

using Json = nlohmann::ordered_json;

// {"kind":"affine","a":..,"b":..} | {"kind":"power","alpha":..} | {"kind":"log1p"}
// | {"kind":"one_minus_exp","c":..,"r":..} | {"kind":"sum","terms":[..]} | {"kind":"compose","outer":..,"inner":..}
// | {"kind":"levy","a":..,"b":..,"atoms":[[s,w],..],"segments":[{"lower","upper","coef","power","decay"},..]}
// A missing or null "upper" means +infinity. Throws SpecError on malformed input.
BernsteinFn parse_psi(const Json& j);
Json psi_to_json(const BernsteinFn& psi);

// rows of [re, im] pairs (plain numbers are read as real)
Matrix parse_matrix(const Json& j);
Json matrix_to_json(const Matrix& m);

Complex parse_complex(const Json& j);
Json complex_to_json(Complex z);

// {"family":"gamma"} | {"family":"stable_half"} | {"family":"poisson","c":..} | {"family":"identity"}
// | {"family":"composed","outer":..,"inner":..}
SubordinatorFamily parse_family(const Json& j);
Json family_to_json(const SubordinatorFamily& f);

Json report_to_json(const CheckReport& r);

}  // namespace bfcalc
