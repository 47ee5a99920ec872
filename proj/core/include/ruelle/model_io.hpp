#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ruelle/model.hpp"

namespace ruelle {

/// Parses a model document. Numbers may be JSON integers (exact), JSON floats
/// (inexact), "p/q" strings or {"num": p, "den": q} objects, the latter with
/// an optional "unit": "pi". Orbit omegas may also be {"turns": q}, meaning
/// q * 2*pi / period. Throws SchemaError with the offending field path.
FlowModel parse_model_text(std::string_view text);

/// Reads and parses a model file without validating it. Throws IoError.
FlowModel load_model(const std::filesystem::path& path);

/// load_model followed by require_valid.
FlowModel parse_model_file(const std::filesystem::path& path);

/// Serializes a model. In exact mode parse_model_text(dump_model(m)) reproduces
/// every exact value.
std::string dump_model(const FlowModel& model);

}  // namespace ruelle
