#pragma once

#include <json.hpp>

#include <string>

#include "cmlat/hermitian.hpp"
#include "cmlat/involutions.hpp"

namespace cmlat {

// Parses, turning syntax errors into DomainError.
nlohmann::json parse_json_document(const std::string& text);

// {"field": {"kind": "cyclotomic"|"imag_quadratic", "p": P, "tau": T},
//  "rank": N, "gram": [[...]] or "diag": [...]}
// Elements are integers, "num/den" strings, or coefficient arrays over the
// power basis.  Errors carry a path into the document.
HermitianLattice parse_lattice_spec(const nlohmann::json& doc);

// "standard:i", "-standard:i", or a JSON matrix of element specs.
AntiUnitaryInvolution parse_involution_spec(const HermitianLattice& lat,
                                            const std::string& text);

// Comma-separated integers: one per slot, or one per Z-basis coordinate.
KVector parse_point(const HermitianLattice& lat, const std::string& text);

mpq_class parse_rational(const nlohmann::json& v, const std::string& path);
FieldElement parse_element(const CMField& f, const nlohmann::json& v,
                           const std::string& path);

std::string rational_str(const mpq_class& q);
nlohmann::json element_json(const FieldElement& a);

// Coordinates over the real subfield: a plain integer when F = Q, otherwise
// the integer array of mu-power coefficients.
nlohmann::json real_element_json(const FieldElement& a);

}  // namespace cmlat
