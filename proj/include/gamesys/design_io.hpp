#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gamesys/design.hpp"

namespace gamesys {

// Design file format: a JSON object with the fields name, resources, actions,
// states, startState, transitions, taps, drains and converters. Unknown
// fields are rejected and every number must be a finite non-negative value.
// name and startState may be omitted; a missing start state fails validation.

// Schema-checks a parsed document. Throws Error(SchemaError); performs no
// cross-reference validation.
GameDesign design_from_json(const nlohmann::json& doc);

// Canonical JSON (components sorted) for a design.
nlohmann::json design_to_json(const GameDesign& design);

// Parses, schema-checks and validates. Throws Error(ParseError),
// Error(SchemaError) or ValidationFailure(ValidationError).
GameDesign load_design(std::string_view text);
GameDesign load_design_file(const std::string& path);

// Deterministic canonical text. Throws ValidationFailure(ValidationError) for
// invalid designs.
std::string save_design(const GameDesign& design);
void save_design_file(const GameDesign& design, const std::string& path);

nlohmann::json validation_report_to_json(const ValidationReport& report);

// Stable 64-bit content digest of the canonical serialization, as 16 hex
// digits.
std::string design_digest(const GameDesign& design);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace gamesys
