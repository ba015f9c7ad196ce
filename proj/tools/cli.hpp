#pragma once

namespace asmxlate::cli {

enum ExitCode : int { kOk = 0, kCandidateFailures = 1, kInfrastructure = 2 };

int run(int argc, char** argv);

}  // namespace asmxlate::cli
