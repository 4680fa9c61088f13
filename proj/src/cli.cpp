#include "privsearch/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "privsearch/audit.hpp"
#include "privsearch/bounds.hpp"
#include "privsearch/constructions.hpp"
#include "privsearch/error.hpp"
#include "privsearch/patterns.hpp"
#include "privsearch/protocol.hpp"
#include "privsearch/random.hpp"
#include "privsearch/report.hpp"

namespace privsearch {
namespace {

struct Options {
  std::string kind;
  std::uint32_t K = 0;
  std::uint32_t M = 0;
  std::size_t depth = 0;
  std::string family_path;
  std::string N = "";
  std::size_t L = 0;
  std::size_t trials = 0;
  std::size_t theta = 1;
  std::size_t horizon = 0;
  std::size_t max_len = 0;
  std::size_t samples = 1000;
  std::string sequence;
  std::string thetas;
  std::string strategy = "exhaustive";
  std::uint64_t seed = 0;
  double codec_target = kDefaultCodecTarget;
  std::string out_path;
  std::string format = "csv";
  bool table = false;
  bool no_symmetry = false;
};

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string token = text.substr(start, end - start);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      fail(ErrorCode::kParseError, std::string("bad ") + what + " list: '" + text + "'");
    }
    values.push_back(value);
    start = end + 1;
  }
  return values;
}

std::size_t single_n(const Options& opt) {
  const auto values = parse_list(opt.N, "--N");
  if (values.size() != 1) fail(ErrorCode::kUsageError, "--N takes a single value here");
  return values.front();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIOError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIOError, "cannot read " + path);
  return buffer.str();
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path target(opt.out_path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) fail(ErrorCode::kIOError, "cannot write " + tmp.string());
    file << text;
    file.flush();
    if (!file) fail(ErrorCode::kIOError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::kIOError, "cannot rename onto " + target.string());
  }
}

void emit_json(const Options& opt, const Json& doc, std::ostream& out) {
  emit(opt, doc.dump(2) + "\n", out);
}

PatternFamily make_family(const Options& opt) {
  const bool has_kind = !opt.kind.empty();
  const bool has_path = !opt.family_path.empty();
  if (has_kind == has_path) fail(ErrorCode::kUsageError, "give exactly one of --kind or --family");
  if (has_path) return load_family(read_file(opt.family_path));
  if (opt.K == 0) fail(ErrorCode::kUsageError, "--kind needs --K");
  if (opt.kind == "exact") return exact_search_family(opt.K);
  if (opt.kind == "circular") return circular_family(opt.K);
  if (opt.M == 0) fail(ErrorCode::kUsageError, "--kind " + opt.kind + " needs --M");
  if (opt.kind == "disjoint") return disjoint_subfamily(opt.K, opt.M);
  if (opt.depth == 0) fail(ErrorCode::kUsageError, "--kind nested needs --depth");
  return nested_gamma_subfamily(opt.K, opt.M, opt.depth);
}

Json family_config(const Options& opt) {
  Json config;
  if (!opt.family_path.empty()) {
    config["family"] = opt.family_path;
    return config;
  }
  config["kind"] = opt.kind;
  config["K"] = opt.K;
  if (opt.kind == "disjoint" || opt.kind == "nested") config["M"] = opt.M;
  if (opt.kind == "nested") config["depth"] = opt.depth;
  return config;
}

void add_family_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--kind", opt.kind, "Builtin family")
      ->check(CLI::IsMember({"exact", "disjoint", "nested", "circular"}));
  cmd->add_option("--K", opt.K, "Alphabet size");
  cmd->add_option("--M", opt.M, "Pattern size (disjoint, nested)");
  cmd->add_option("--depth", opt.depth, "Number of nested patterns");
  cmd->add_option("--family", opt.family_path, "Family document path");
}

void add_out_option(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out", opt.out_path, "Output path (default stdout)");
}

void cmd_family(const Options& opt, std::ostream& out) {
  emit(opt, save_family(make_family(opt)), out);
}

void cmd_figure1(const Options& opt, std::ostream& out) {
  const auto servers = parse_list(opt.N, "--N");
  const auto curve = figure1_curve(opt.K, servers);
  if (opt.format == "csv") {
    emit(opt, figure1_csv(curve), out);
    return;
  }
  Json rows = Json::array();
  for (const auto& p : curve) {
    rows.push_back({{"K", p.alphabet_size},
                    {"N", p.server_count},
                    {"normalized_bound", p.normalized_bound},
                    {"asymptote", p.asymptote}});
  }
  Json config{{"K_max", opt.K}, {"N", servers}, {"format", opt.format}};
  emit_json(opt, make_report("figure1", std::move(config), Json{{"rows", std::move(rows)}}),
            out);
}

void cmd_bound(const Options& opt, std::ostream& out) {
  const std::size_t n = single_n(opt);
  const PatternFamilyModel model(make_family(opt));
  Json config = family_config(opt);
  config["N"] = n;
  ConverseReport report;
  if (!opt.sequence.empty()) {
    const auto sequence = parse_list(opt.sequence, "--sequence");
    config["sequence"] = sequence;
    report = converse_bound(model, n, sequence);
  } else {
    const auto strategy =
        opt.strategy == "greedy" ? SearchStrategy::kGreedy : SearchStrategy::kExhaustive;
    std::optional<std::size_t> max_length;
    if (opt.max_len > 0) max_length = opt.max_len;
    config["strategy"] = opt.strategy;
    if (max_length) config["max_len"] = *max_length;
    report = best_sequence(model, n, strategy, max_length);
  }
  Json results = to_json(report);
  results["pir_capacity"] = pir_capacity(model.message_count(), n);
  results["achievable_rate"] = achievable_rate(model, n);
  emit_json(opt, make_report("bound", std::move(config), std::move(results)), out);
}

void cmd_suffcond(const Options& opt, std::ostream& out) {
  const PatternFamilyModel model(make_family(opt));
  if (opt.horizon == 0) fail(ErrorCode::kUsageError, "suffcond needs --horizon >= 1");
  std::vector<std::size_t> sequence;
  if (opt.sequence.empty()) {
    for (std::size_t i = 1; i <= std::min(opt.horizon + 1, model.message_count()); ++i) {
      sequence.push_back(i);
    }
  } else {
    sequence = parse_list(opt.sequence, "--sequence");
  }
  const auto rho = sufficient_condition_profile(model, sequence, opt.horizon);
  Json config = family_config(opt);
  config["sequence"] = sequence;
  config["horizon"] = opt.horizon;
  Json results{{"rho", rho}, {"H", model.entropy(sequence.front())}};
  emit_json(opt, make_report("suffcond", std::move(config), std::move(results)), out);
}

void cmd_prop5(const Options& opt, std::ostream& out) {
  if (opt.K == 0) fail(ErrorCode::kUsageError, "prop5 needs --K");
  const auto report = prop5_triple_scan(opt.K, !opt.no_symmetry, opt.table);
  Json config{{"K", opt.K}, {"rotation_symmetry", !opt.no_symmetry}, {"table", opt.table}};
  emit_json(opt, make_report("prop5", std::move(config), to_json(report)), out);
}

void cmd_protocol_run(const Options& opt, std::ostream& out) {
  const std::size_t n = single_n(opt);
  const PatternFamily family = make_family(opt);
  Json config = family_config(opt);
  config["N"] = n;
  config["L"] = opt.L;
  config["trials"] = opt.trials;
  config["seed"] = opt.seed;
  config["codec_target"] = opt.codec_target;
  Json results;
  if (opt.trials == 1) {
    config["theta"] = opt.theta;
    // Same seed derivation as trial 0 of the multi-trial experiment.
    const SessionSeeds seeds{derive_seed(opt.seed, 0, 0), derive_seed(opt.seed, 1, 0)};
    results = to_json(run_session(family, n, opt.L, opt.theta, seeds, opt.codec_target));
  } else {
    if (opt.trials == 0) fail(ErrorCode::kDomainError, "--trials must be positive");
    results = to_json(rate_experiment(family, n, opt.L, opt.trials, opt.seed, opt.codec_target));
  }
  emit_json(opt, make_report("protocol-run", std::move(config), std::move(results)), out);
}

void cmd_protocol_audit(const Options& opt, std::ostream& out) {
  const std::size_t n = single_n(opt);
  const PatternFamily family = make_family(opt);
  std::vector<std::size_t> thetas;
  if (!opt.thetas.empty()) thetas = parse_list(opt.thetas, "--theta");
  if (n < 2 || n > 255) fail(ErrorCode::kDomainError, "N must lie in [2, 255]");
  const auto report = privacy_audit(family, n, opt.trials, opt.seed, thetas, opt.samples);
  Json config = family_config(opt);
  config["N"] = n;
  config["trials"] = opt.trials;
  config["seed"] = opt.seed;
  config["samples"] = opt.samples;
  emit_json(opt, make_report("protocol-audit", std::move(config), to_json(report)), out);
}

void cmd_baseline(const Options& opt, std::ostream& out) {
  const std::size_t n = single_n(opt);
  const PatternFamily family = make_family(opt);
  const auto transcript = baseline_download_all(family, n, opt.L, opt.theta, opt.seed);
  Json config = family_config(opt);
  config["N"] = n;
  config["L"] = opt.L;
  config["theta"] = opt.theta;
  config["seed"] = opt.seed;
  emit_json(opt, make_report("baseline", std::move(config), to_json(transcript)), out);
}

void print_error(std::ostream& err, std::string_view code, const std::string& message) {
  const Json doc{{"error", {{"code", code}, {"message", message}}}};
  err << doc.dump() << "\n";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIOError:
      return kExitIO;
    case ErrorCode::kUsageError:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Private search bounds, constructions and protocol simulator", "privsearch"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* family = app.add_subcommand("family", "Emit a pattern family document");
  add_family_options(family, opt);
  add_out_option(family, opt);

  auto* figure1 = app.add_subcommand("figure1", "Normalized exact-search converse versus K");
  figure1->add_option("--K", opt.K, "Largest alphabet size (default 100)");
  figure1->add_option("--N", opt.N, "Server counts, comma separated (default 2,3,4,5)");
  figure1->add_option("--format", opt.format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_out_option(figure1, opt);

  auto* bound = app.add_subcommand("bound", "Converse bound for a family");
  add_family_options(bound, opt);
  bound->add_option("--N", opt.N, "Server count")->required();
  bound->add_option("--strategy", opt.strategy, "exhaustive or greedy")
      ->check(CLI::IsMember({"exhaustive", "greedy"}));
  bound->add_option("--sequence", opt.sequence, "Evaluate this ordering instead of searching");
  bound->add_option("--max-len", opt.max_len, "Stop the search after this many messages");
  add_out_option(bound, opt);

  auto* suffcond = app.add_subcommand("suffcond", "Mutual-information profile along a sequence");
  add_family_options(suffcond, opt);
  suffcond->add_option("--sequence", opt.sequence, "Ordering (default 1..horizon+1)");
  suffcond->add_option("--horizon", opt.horizon, "Number of rho values")->required();
  add_out_option(suffcond, opt);

  auto* prop5 = app.add_subcommand("prop5", "Triple scan over the circular family");
  prop5->add_option("--K", opt.K, "Even alphabet size >= 8")->required();
  prop5->add_flag("--table", opt.table, "Include every scanned triple");
  prop5->add_flag("--no-symmetry", opt.no_symmetry, "Scan all first arcs");
  add_out_option(prop5, opt);

  auto* run = app.add_subcommand("protocol-run", "Simulate private search sessions");
  add_family_options(run, opt);
  run->add_option("--N", opt.N, "Server count")->required();
  run->add_option("--L", opt.L, "Records per dataset")->required();
  run->add_option("--trials", opt.trials, "Number of sessions (default 1)");
  run->add_option("--theta", opt.theta, "Pattern index for a single session (default 1)");
  run->add_option("--seed", opt.seed, "Random seed")->required();
  run->add_option("--codec-target", opt.codec_target, "Codec failure budget");
  add_out_option(run, opt);

  auto* audit = app.add_subcommand("protocol-audit", "Statistical privacy audit of the queries");
  add_family_options(audit, opt);
  audit->add_option("--N", opt.N, "Server count")->required();
  audit->add_option("--trials", opt.trials, "Sessions per theta (default 10000)");
  audit->add_option("--seed", opt.seed, "Random seed")->required();
  audit->add_option("--samples", opt.samples, "Bijection samples per theta (default 1000)");
  audit->add_option("--theta", opt.thetas, "Thetas to audit, comma separated");
  add_out_option(audit, opt);

  auto* baseline = app.add_subcommand("baseline", "Download-everything reference scheme");
  add_family_options(baseline, opt);
  baseline->add_option("--N", opt.N, "Server count")->required();
  baseline->add_option("--L", opt.L, "Records per dataset")->required();
  baseline->add_option("--theta", opt.theta, "Pattern index (default 1)");
  baseline->add_option("--seed", opt.seed, "Random seed")->required();
  add_out_option(baseline, opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    print_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  // Subcommands share one Options, so per-subcommand defaults go in after parsing.
  if (*figure1) {
    if (figure1->count("--K") == 0) opt.K = 100;
    if (opt.N.empty()) opt.N = "2,3,4,5";
  }
  if (*run && run->count("--trials") == 0) opt.trials = 1;
  if (*audit && audit->count("--trials") == 0) opt.trials = 10000;

  try {
    if (*family) cmd_family(opt, out);
    else if (*figure1) cmd_figure1(opt, out);
    else if (*bound) cmd_bound(opt, out);
    else if (*suffcond) cmd_suffcond(opt, out);
    else if (*prop5) cmd_prop5(opt, out);
    else if (*run) cmd_protocol_run(opt, out);
    else if (*audit) cmd_protocol_audit(opt, out);
    else if (*baseline) cmd_baseline(opt, out);
  } catch (const Error& e) {
    print_error(err, error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    print_error(err, "DomainError", "out of memory");
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace privsearch
