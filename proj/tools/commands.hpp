#pragma once

#include "output.hpp"

namespace harvest::cli {

// Each returns the process exit code; PreconditionError escapes for the
// caller to map to 2.
int cmd_compute(const RunOptions& o);
int cmd_scan(const RunOptions& o);
int cmd_resonance(const RunOptions& o);
int cmd_corridor(const RunOptions& o);
int cmd_rangefind(const RunOptions& o);
int cmd_oracle(const RunOptions& o, const std::string& suite);

} // namespace harvest::cli
