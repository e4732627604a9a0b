#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. Verbs: verify, measure, partition, scale,
// spectrum, beta-scan, sample, power, cascade.
//
// Exit codes: 0 success, 1 usage or input error, 2 a verification found a
// residual above tolerance. Relative --out paths are resolved against
// OPMEAS_OUT_DIR when that variable is set.

namespace opmeas::cli {

int execute(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace opmeas::cli
