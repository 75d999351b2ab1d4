#pragma once

#include <nlohmann/json.hpp>

#include "sectorial/bound_estimate.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/types.hpp"

namespace sectorial {

using nlohmann::json;

/// Complex numbers are written as [re, im]; plain numbers are accepted on input.
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

/// Matrices: {"dim": d, "re": [[..]], "im": [[..]]} (square) or, for
/// rectangular data, {"rows": r, "cols": c, "re": .., "im": ..}.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// {"kind": "lp", "dim": d, "p": p} or
/// {"kind": "grid", "points": m, "block": d, "p": p, "q": q, "scale": s};
/// exponents may be the string "inf".
json norm_to_json(const NormSpec& n);
NormSpec norm_from_json(const json& j);

json exponent_to_json(double p);
double exponent_from_json(const json& j);

/// Numbers that JSON cannot carry (inf, nan) are written as strings.
json real_to_json(double x);

}  // namespace sectorial
