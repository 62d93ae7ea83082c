#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "loxgrow/certificate.hpp"

namespace loxgrow::cli {

inline constexpr const char* kVersion = "loxgrow 0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kElementary = 2,
  kBudget = 3,
  kConfig = 4,
  kInvalidCertificate = 5,
};

struct Budgets {
  int n_max = 10;
  std::size_t memory_cap = 2'000'000;
  int max_n = 64;
  int max_k = 8;
  int exact_check_len = 6;
  int max_rounds = 6;
};

struct RunConfig {
  Problem problem;
  std::uint64_t seed = 7;
  Budgets budgets;
};

// Single JSON document; unknown keys are rejected and every budget must be
// positive. Throws ConfigError.
RunConfig parse_run_config(const std::string& text);

// Entry point behind main(); returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace loxgrow::cli
