#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace feigencert::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kCertificationFailure = 3,
  kCorruptCheckpoint = 4,
};

/// Version of the JSON documents written with --format json.
inline constexpr int kJsonSchemaVersion = 1;

/// Default checkpoint directory comes from this variable, else ".".
inline constexpr const char* kCheckpointDirVariable = "FEIGENCERT_CHECKPOINT_DIR";

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace feigencert::cli
