#pragma once

#include "hypdim/bowen.hpp"
#include "hypdim/boxdim.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypdim {

using Json = nlohmann::json;

/// "%.17g" text, which round-trips every double.
std::string format_real(double v);

Json to_json(const BoxCountTable& table);
Json to_json(const BundleReport& bundle);

/// {"system": {...}, "bundles": {...}, "total", "flags", optional "box_dim_oracle"}.
Json to_json(const DimensionReport& report);

/// Header bundle,k,s_val,t_val,tolerance.
void write_brackets_csv(std::ostream& os, const DimensionReport& report);

/// Header bundle,n,defect.
void write_defect_csv(std::ostream& os, const DimensionReport& report);

/// $HYPDIM_SCHEMA_DIR/report.schema.json when set, else the source-tree copy.
std::filesystem::path default_schema_path();
Json load_schema(const std::filesystem::path& path = default_schema_path());

/// Structural validation against the subset of JSON Schema used by the
/// report schema: type, required, properties, additionalProperties (bool),
/// items, enum, minimum and local $ref. Returns one message per violation; empty when valid.
std::vector<std::string> validate_json(const Json& doc, const Json& schema);

}  // namespace hypdim
