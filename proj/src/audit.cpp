#include "privsearch/audit.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "privsearch/bitvector.hpp"
#include "privsearch/error.hpp"
#include "privsearch/protocol.hpp"
#include "privsearch/random.hpp"

namespace privsearch {

std::uint8_t project_query(const BitVector& coefficients) {
  std::uint8_t out = 0;
  for (std::size_t c = 0; c < coefficients.size(); ++c) {
    if (coefficients.get(c)) out ^= static_cast<std::uint8_t>(1U << (c % 8));
  }
  return out;
}

double chi_square_p_value(double statistic, std::size_t degrees_of_freedom) {
  if (degrees_of_freedom == 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(degrees_of_freedom) / 2.0, statistic / 2.0);
}

namespace {

constexpr std::uint64_t kQueryStream = 2;
constexpr std::uint64_t kBijectionStream = 3;

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
};

ChiSquare contingency(const std::vector<std::array<std::size_t, 256>>& rows) {
  std::array<double, 256> column{};
  std::vector<double> row_total(rows.size(), 0.0);
  double grand = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t v = 0; v < 256; ++v) {
      column[v] += static_cast<double>(rows[r][v]);
      row_total[r] += static_cast<double>(rows[r][v]);
    }
    grand += row_total[r];
  }
  ChiSquare out;
  std::size_t used_columns = 0;
  for (std::size_t v = 0; v < 256; ++v) {
    if (column[v] == 0.0) continue;
    ++used_columns;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double expected = row_total[r] * column[v] / grand;
      const double diff = static_cast<double>(rows[r][v]) - expected;
      out.statistic += diff * diff / expected;
    }
  }
  out.dof = (rows.size() - 1) * (used_columns > 0 ? used_columns - 1 : 0);
  return out;
}

}  // namespace

AuditReport privacy_audit(const PatternFamily& family, std::size_t server_count,
                          std::size_t trials, std::uint64_t seed, std::vector<std::size_t> thetas,
                          std::size_t bijection_samples) {
  const std::size_t mu = family.size();
  for (const auto& set : family.sets()) {
    if (set.size() != family.pattern(1).size()) {
      fail(ErrorCode::kNotBalanced, "patterns differ in size");
    }
  }
  if (trials == 0) fail(ErrorCode::kDomainError, "audit needs at least one session per theta");
  if (thetas.empty()) thetas = {1, 2, mu};
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  thetas.erase(std::remove_if(thetas.begin(), thetas.end(),
                              [mu](std::size_t t) { return t < 1 || t > mu; }),
               thetas.end());
  if (thetas.empty()) fail(ErrorCode::kDomainError, "no valid theta to audit");

  const std::size_t coords = mu * (server_count - 1);
  AuditReport report;
  report.message_count = mu;
  report.server_count = server_count;
  report.trials = trials;
  report.thetas = thetas;
  report.bijection_samples = bijection_samples;

  // ones[n][t][c], projections[n][t][v]
  std::vector<std::vector<std::vector<std::size_t>>> ones(
      server_count, std::vector<std::vector<std::size_t>>(thetas.size(),
                                                          std::vector<std::size_t>(coords, 0)));
  std::vector<std::vector<std::array<std::size_t, 256>>> projections(
      server_count, std::vector<std::array<std::size_t, 256>>(thetas.size()));

  for (std::size_t t = 0; t < thetas.size(); ++t) {
    for (std::size_t s = 0; s < trials; ++s) {
      const auto client = client_queries(thetas[t], mu, server_count,
                                         derive_seed(seed, kQueryStream, thetas[t] * trials + s));
      for (std::size_t n = 0; n < server_count; ++n) {
        const BitVector& q = client.queries[n].coefficients;
        for (std::size_t c = 0; c < coords; ++c) ones[n][t][c] += q.get(c);
        ++projections[n][t][project_query(q)];
      }
    }
  }

  const double sigma = std::sqrt(0.25 / static_cast<double>(trials));
  report.pass = true;
  for (std::size_t n = 0; n < server_count; ++n) {
    ServerAudit audit;
    audit.server = n + 1;
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      std::vector<double> freq(coords);
      for (std::size_t c = 0; c < coords; ++c) {
        freq[c] = static_cast<double>(ones[n][t][c]) / static_cast<double>(trials);
        audit.max_deviation_sigmas =
            std::max(audit.max_deviation_sigmas, std::abs(freq[c] - 0.5) / sigma);
      }
      audit.frequencies.push_back(std::move(freq));
    }
    audit.frequency_pass = audit.max_deviation_sigmas <= report.sigma_limit;

    const ChiSquare chi = contingency(projections[n]);
    audit.chi_square = chi.statistic;
    audit.degrees_of_freedom = chi.dof;
    audit.p_value = chi_square_p_value(chi.statistic, chi.dof);
    audit.independence_pass = audit.p_value > report.significance;

    audit.bijection_pass = true;
    for (std::size_t theta : thetas) {
      Rng rng(derive_seed(seed, kBijectionStream, theta * server_count + n));
      for (std::size_t s = 0; s < bijection_samples; ++s) {
        const BitVector h = rng.bits(coords);
        const BitVector q = query_for_server(h, theta, n + 1, server_count);
        // The map is its own inverse: applying it to q must give back h.
        if (query_for_server(q, theta, n + 1, server_count) != h) audit.bijection_pass = false;
      }
    }

    report.pass =
        report.pass && audit.frequency_pass && audit.independence_pass && audit.bijection_pass;
    report.servers.push_back(std::move(audit));
  }
  return report;
}

}  // namespace privsearch
