#include "privsearch/report.hpp"

#include <cstdio>

namespace privsearch {

std::string bit_string(const BitVector& bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits.get(i)) out[i] = '1';
  }
  return out;
}

namespace {

Json to_json(const TripleEntry& entry) {
  return Json{{"k1", entry.k1},
              {"k2", entry.k2},
              {"k3", entry.k3},
              {"H_k2_given_k1", entry.second_given_first},
              {"H_k3_given_k1_k2", entry.third_given_first_two}};
}

}  // namespace

Json to_json(const ConverseReport& report) {
  return Json{{"sequence", report.sequence},
              {"N", report.server_count},
              {"strategy", report.strategy},
              {"truncated", report.truncated},
              {"per_record_bound", report.per_record_bound},
              {"normalized_bound", report.normalized_bound},
              {"asymptote", report.asymptote},
              {"gap", report.gap}};
}

Json to_json(const Prop5ScanReport& report) {
  Json out{{"K", report.alphabet_size},
           {"rotation_symmetry", report.used_rotation_symmetry},
           {"max_min", report.max_min},
           {"argmax", to_json(report.argmax)},
           {"quarter_turn_witness", to_json(report.quarter_turn_witness)}};
  if (!report.table.empty()) {
    Json table = Json::array();
    for (const auto& entry : report.table) table.push_back(to_json(entry));
    out["table"] = std::move(table);
  }
  return out;
}

Json to_json(const CodecParams& params) {
  return Json{{"p", params.p},
              {"identity", params.identity},
              {"L", params.message_length},
              {"block_length", params.block_length},
              {"weight_window", {params.min_weight, params.max_weight}},
              {"codeword_bits_per_block", params.codeword_bits},
              {"blocks_per_message", params.blocks_per_message},
              {"B", params.total_bits},
              {"target_failure", params.target_failure},
              {"predicted_failure", params.predicted_failure},
              {"overhead", params.overhead}};
}

Json to_json(const SessionTranscript& transcript) {
  Json queries = Json::array();
  for (const auto& q : transcript.queries) {
    queries.push_back({{"server_id", q.server_id}, {"coefficients", bit_string(q.coefficients)}});
  }
  Json out{{"theta", transcript.theta},
           {"N", transcript.server_count},
           {"L", transcript.message_length},
           {"queries", std::move(queries)},
           {"answer_bits", transcript.answer_bits},
           {"download_bits", transcript.download_bits},
           {"success", transcript.success},
           {"atypical", transcript.atypical},
           {"decoded", transcript.decoded.has_value()},
           {"measured_rate", transcript.measured_rate}};
  if (transcript.decoded) out["decoded_weight"] = transcript.decoded->bits.popcount();
  return out;
}

Json to_json(const RateReport& report) {
  return Json{{"trials", report.trials},
              {"failures", report.failures},
              {"atypical_sessions", report.atypical_sessions},
              {"empirical_error", report.empirical_error},
              {"mean_measured_rate", report.mean_measured_rate},
              {"download_bits", report.download_bits},
              {"achievable_rate", report.achievable_rate},
              {"converse_rate_bound", report.converse_rate_bound},
              {"converse_strategy", report.converse_strategy},
              {"codec", to_json(report.codec)}};
}

Json to_json(const AuditReport& report) {
  Json servers = Json::array();
  for (const auto& s : report.servers) {
    servers.push_back({{"server", s.server},
                       {"frequencies", s.frequencies},
                       {"max_deviation_sigmas", s.max_deviation_sigmas},
                       {"frequency_pass", s.frequency_pass},
                       {"chi_square", s.chi_square},
                       {"degrees_of_freedom", s.degrees_of_freedom},
                       {"p_value", s.p_value},
                       {"independence_pass", s.independence_pass},
                       {"bijection_pass", s.bijection_pass}});
  }
  return Json{{"mu", report.message_count},
              {"N", report.server_count},
              {"sessions_per_theta", report.trials},
              {"thetas", report.thetas},
              {"significance", report.significance},
              {"sigma_limit", report.sigma_limit},
              {"bijection_samples", report.bijection_samples},
              {"servers", std::move(servers)},
              {"pass", report.pass}};
}

Json make_report(const std::string& subcommand, Json config, Json results) {
  return Json{{"tool_version", kToolVersion},
              {"subcommand", subcommand},
              {"config", std::move(config)},
              {"results", std::move(results)}};
}

std::string figure1_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "K,N,normalized_bound,asymptote\n";
  char line[128];
  for (const auto& point : curve) {
    std::snprintf(line, sizeof(line), "%u,%zu,%.12f,%.12f\n", point.alphabet_size,
                  point.server_count, point.normalized_bound, point.asymptote);
    out += line;
  }
  return out;
}

}  // namespace privsearch
