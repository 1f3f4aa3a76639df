#pragma once

// JSON encodings of the value types and file helpers.
//
//   matrix: {"dim": n, "re": [[...]], "im": [[...]]}
//   state:  {"dim": n, "re": [...], "im": [...]}
//   form:   {"dim": n, "sign": 1, "antiunitary": false, "U": matrix, "F": matrix, "X": matrix}
//   map:    {"dim": n, "basis": "gell-mann", "matrix": [[... n^2 x n^2 ...]]}
//
// Doubles are written in shortest round-trip form, so encode/decode is exact.
// Malformed documents raise Error(InputError); well-formed but invalid values
// raise the validating constructor's error (DefectTooLarge, NotNormalized, ...).

#include <filesystem>
#include <string>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "obsdev/deviation.hpp"
#include "obsdev/factor_space.hpp"
#include "obsdev/hermitian.hpp"
#include "obsdev/preservers.hpp"

namespace obsdev {

using Json = nlohmann::json;

Json matrix_to_json(const CMatrix& m);
Json to_json(const HermitianMatrix& a);
Json to_json(const StateVector& phi);
Json to_json(const PreserverForm& form);
Json to_json(const LinearMapOnHermitians& map);
Json to_json(const DeviationReport& report);
Json to_json(const CheckReport& report);
Json to_json(const DistinguishingWitness& witness);

CMatrix matrix_from_json(const Json& j);
HermitianMatrix hermitian_from_json(const Json& j, double tol = tol::kHermitian);
StateVector state_from_json(const Json& j, double tol = tol::kState);
PreserverForm form_from_json(const Json& j);
LinearMapOnHermitians map_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
// Pretty-printed with two-space indent and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace obsdev
