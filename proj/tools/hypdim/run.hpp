#pragma once

#include "hypdim/config.hpp"

#include <iosfwd>
#include <string>

namespace hypdim::cli {

enum ExitCode { kOk = 0, kValidation = 2, kNumerical = 3 };

/// Runs every requested analysis and writes the artifacts under
/// config.output_dir. Results finished before a NumericalError are written
/// before it propagates.
void run(const RunConfig& config);

/// Catalog rows whose name contains `filter`, sorted by name.
std::string list_systems_text(const std::string& filter);
Json list_systems_json(const std::string& filter);

}  // namespace hypdim::cli
