#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "privsearch/audit.hpp"
#include "privsearch/bounds.hpp"
#include "privsearch/codec.hpp"
#include "privsearch/constructions.hpp"
#include "privsearch/protocol.hpp"

namespace privsearch {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

Json to_json(const ConverseReport& report);
Json to_json(const Prop5ScanReport& report);
Json to_json(const CodecParams& params);
Json to_json(const SessionTranscript& transcript);
Json to_json(const RateReport& report);
Json to_json(const AuditReport& report);

// {"tool_version", "subcommand", "config", "results"}
Json make_report(const std::string& subcommand, Json config, Json results);

// Header "K,N,normalized_bound,asymptote" then one row per point.
std::string figure1_csv(const std::vector<CurvePoint>& curve);

// Bit string as '0'/'1' characters, index 0 first.
std::string bit_string(const BitVector& bits);

}  // namespace privsearch
