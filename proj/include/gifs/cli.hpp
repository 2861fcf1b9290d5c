#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gifs/config.hpp"

namespace gifs {

enum ExitStatus { ExitOk = 0, ExitFault = 1, ExitViolation = 2 };

const std::vector<std::string>& command_names();

// Runs one subcommand, writing JSON-lines records to `records` and any files
// named in the config. Library errors become an error record; a certified
// condition violation exits with ExitViolation, other faults with ExitFault.
int run(const std::string& command, const RunConfig& config, std::ostream& records);

// Error record for failures before a config exists (e.g. schema violations).
Json error_record(const std::string& command, const std::string& code, const std::string& message);

// Applies "a.b.c=value" overrides to a config document; the value is parsed
// as JSON when possible and taken as a string otherwise.
void apply_override(Json& doc, const std::string& assignment);

}  // namespace gifs
