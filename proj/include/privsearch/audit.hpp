#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "privsearch/bitvector.hpp"
#include "privsearch/patterns.hpp"

namespace privsearch {

struct ServerAudit {
  std::size_t server = 0;
  // frequencies[t][c]: fraction of sessions for thetas[t] with coefficient c set.
  std::vector<std::vector<double>> frequencies;
  double max_deviation_sigmas = 0.0;
  bool frequency_pass = false;
  // theta x (8-bit query projection) contingency test.
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  bool independence_pass = false;
  bool bijection_pass = false;
};

struct AuditReport {
  std::size_t message_count = 0;
  std::size_t server_count = 0;
  std::size_t trials = 0;  // sessions per theta
  std::vector<std::size_t> thetas;
  double significance = 0.01;
  double sigma_limit = 4.0;
  std::size_t bijection_samples = 0;
  std::vector<ServerAudit> servers;
  bool pass = false;
};

// Fixed 8-bit linear projection: output bit i is the parity of the
// coefficients whose index is congruent to i mod 8.
std::uint8_t project_query(const BitVector& coefficients);

// Distributional audit of the queries each server sees. thetas defaults to
// {1, 2, mu} (deduplicated). Seeds per (theta, session) derive from seed.
AuditReport privacy_audit(const PatternFamily& family, std::size_t server_count,
                          std::size_t trials, std::uint64_t seed,
                          std::vector<std::size_t> thetas = {},
                          std::size_t bijection_samples = 1000);

// Upper tail of the chi-square distribution.
double chi_square_p_value(double statistic, std::size_t degrees_of_freedom);

}  // namespace privsearch
