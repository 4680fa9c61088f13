#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "privsearch/cli.hpp"

using namespace privsearch;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const std::string& text) { return nlohmann::json::parse(text); }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::path(PRIVSEARCH_TEST_DATA_DIR) / name;
}

}  // namespace

TEST(Cli, BoundExactK3) {
  const auto r = run({"bound", "--kind", "exact", "--K", "3", "--N", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = parse(r.out);
  for (const char* key : {"tool_version", "subcommand", "config", "results"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["subcommand"], "bound");
  EXPECT_NEAR(doc["results"]["normalized_bound"].get<double>(), 1.3629912289393595, 1e-12);
  EXPECT_EQ(doc["results"]["sequence"], (std::vector<int>{1, 2, 3}));
}

TEST(Cli, Figure1Csv) {
  const auto r = run({"figure1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 397u);
  EXPECT_EQ(rows[0], "K,N,normalized_bound,asymptote");
  EXPECT_EQ(std::count(rows.begin(), rows.end(), rows[0]), 1);
  EXPECT_EQ(rows[1].rfind("2,2,1.0000000", 0), 0u);
  const auto row = std::find_if(rows.begin(), rows.end(),
                                [](const std::string& s) { return s.rfind("10,5,", 0) == 0; });
  ASSERT_NE(row, rows.end());
  EXPECT_EQ(row->substr(0, 12), "10,5,1.23893");
}

TEST(Cli, Figure1Json) {
  const auto r = run({"figure1", "--K", "5", "--N", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["results"]["rows"].size(), 4u);
}

TEST(Cli, FamilyDocumentRoundTrip) {
  const auto path = scratch("nested_family.json");
  ASSERT_EQ(run({"family", "--kind", "nested", "--K", "40", "--M", "10", "--depth", "2", "--out",
                 path.string()})
                .code,
            0);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const auto from_doc = run({"bound", "--family", path.string(), "--N", "3"});
  const auto builtin = run({"bound", "--kind", "nested", "--K", "40", "--M", "10", "--depth", "2",
                            "--N", "3"});
  ASSERT_EQ(from_doc.code, 0) << from_doc.err;
  EXPECT_EQ(parse(from_doc.out)["results"], parse(builtin.out)["results"]);
}

TEST(Cli, ProtocolRunIdentity) {
  const auto r = run({"protocol-run", "--kind", "circular", "--K", "16", "--N", "2", "--L",
                      "65536", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = parse(r.out)["results"];
  EXPECT_EQ(res["measured_rate"].get<double>(), 0.5);
  EXPECT_EQ(res["download_bits"].get<std::size_t>(), 131072u);
  EXPECT_TRUE(res["success"].get<bool>());
}

TEST(Cli, DeterministicOutputFiles) {
  const std::vector<std::string> base{"protocol-run", "--kind", "exact", "--K", "8", "--N",
                                      "3", "--L", "5000", "--trials", "4", "--seed", "99",
                                      "--out"};
  auto a = base;
  a.push_back(scratch("run_a.json").string());
  auto b = base;
  b.push_back(scratch("run_b.json").string());
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(scratch("run_a.json")), slurp(scratch("run_b.json")));
}

TEST(Cli, SuffcondAndTripleScan) {
  const auto s = run({"suffcond", "--kind", "circular", "--K", "8", "--sequence", "1,3,2",
                      "--horizon", "2"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NEAR(parse(s.out)["results"]["rho"][0].get<double>(), 0.0, 1e-12);
  const auto p = run({"prop5", "--K", "8"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_LT(parse(p.out)["results"]["max_min"].get<double>(), 1.0);
}

TEST(Cli, AuditAndBaseline) {
  const auto a = run({"protocol-audit", "--kind", "exact", "--K", "4", "--N", "2", "--trials",
                      "300", "--seed", "1", "--samples", "50"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(parse(a.out)["results"]["sessions_per_theta"], 300);
  const auto b = run({"baseline", "--kind", "exact", "--K", "16", "--N", "2", "--L", "100",
                      "--seed", "1"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(parse(b.out)["results"]["download_bits"], 400);
}

TEST(Cli, ExitCodes) {
  const auto missing_seed =
      run({"protocol-run", "--kind", "circular", "--K", "8", "--N", "2", "--L", "10"});
  EXPECT_EQ(missing_seed.code, kExitUsage);
  EXPECT_EQ(parse(missing_seed.err)["error"]["code"], "UsageError");

  const auto small_n = run({"bound", "--kind", "exact", "--K", "3", "--N", "1"});
  EXPECT_EQ(small_n.code, kExitDomain);
  EXPECT_EQ(parse(small_n.err)["error"]["code"], "NTooSmall");

  const auto bad_list = run({"figure1", "--N", "2,x"});
  EXPECT_EQ(bad_list.code, kExitDomain);
  EXPECT_EQ(parse(bad_list.err)["error"]["code"], "ParseError");

  const auto no_file = run({"bound", "--family", "/nonexistent/f.json", "--N", "2"});
  EXPECT_EQ(no_file.code, kExitIO);

  const auto bad_doc = scratch("bad_family.json");
  std::ofstream(bad_doc) << "{\"K\": 0, \"sets\": [[1]]}";
  EXPECT_EQ(run({"bound", "--family", bad_doc.string(), "--N", "2"}).code, kExitDomain);

  EXPECT_EQ(run({"nosuch"}).code, kExitUsage);
  EXPECT_EQ(run({"bound", "--N", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"prop5", "--K", "9"}).code, kExitDomain);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}
