#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kefun::cli {

/// Process exit codes.
enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInputError = 2, kRuntimeError = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "1,4,7-9" -> {1, 4, 7, 8, 9}. Throws ParameterError on malformed lists.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// KEFUN_WORKERS when set to a positive integer, 1 otherwise.
int default_workers();

}  // namespace kefun::cli
