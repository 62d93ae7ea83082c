#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "loxgrow/freebasis.hpp"
#include "loxgrow/generating_set.hpp"
#include "loxgrow/space.hpp"

namespace loxgrow {

// Backend plus generating set as the user wrote it. Tree backends take
// words; the half plane takes matrices, named a, b, c, ... in order.
struct Problem {
  BackendConfig backend;
  std::vector<std::string> words;
  std::vector<IntMatrix> int_matrices;
  std::vector<RealMatrix> real_matrices;
  bool symmetrize = true;
};

struct Instance {
  std::unique_ptr<Space> space;
  GeneratingSet S;
};

// Throws ConfigError / NotInGroup / EmptyAfterReduction.
Instance instantiate(const Problem& problem);

// Canonical JSON of the problem (no whitespace, fixed key order).
std::string problem_json(const Problem& problem);
Problem problem_from_json(const std::string& text);

// FNV-1a 64 of problem_json, as 16 hex digits.
std::string config_hash(const Problem& problem);

inline constexpr const char* kCertificateVersion = "loxgrow-cert/1";

std::string certificate_json(const Problem& problem,
                             const PipelineOptions& options,
                             const FreeBasisCertificate& cert);

struct CertificateCheck {
  bool valid = false;
  std::vector<std::string> failures;
};

// Independent re-verification: rebuilds the backend from the embedded
// problem, re-evaluates every element from its word, recomputes m, p_max,
// margin, the exact check, kappa and omega_lower, and finally replays the
// deterministic pipeline under the embedded options and demands identical
// fields. Never throws on malformed input; failures are listed instead.
CertificateCheck check_certificate(const std::string& text);

}  // namespace loxgrow
