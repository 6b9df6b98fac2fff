#include <binocoll/json_io.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Invocation {
  int exit_code = -1;
  std::string out;
};

Invocation run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + BINOCOLL_CLI + std::string(" ") + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<binocoll::Json> jsonl(const std::string& text) {
  std::vector<binocoll::Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(binocoll::Json::parse(line));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("binocoll-cli-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST(Cli, SearchJsonl) {
  const Invocation r = run("search --max-value 25000 --format jsonl");
  ASSERT_EQ(r.exit_code, 0);
  const auto lines = jsonl(r.out);
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_EQ(lines[0]["header"]["command"], "search");
  EXPECT_EQ(lines[1]["N"], "120");
  EXPECT_EQ(lines[4]["N"], "3003");
  EXPECT_EQ(lines[4]["reps"], binocoll::Json::parse("[[78,2],[15,5],[14,6]]"));
  EXPECT_EQ(lines[7]["N"], "24310");
}

TEST(Cli, FormatFromOutExtension) {
  const std::string dir = temp_dir("ext");
  ASSERT_EQ(run("search --max-value 3003 --out " + dir + "/c.jsonl").exit_code, 0);
  EXPECT_EQ(jsonl(slurp(dir + "/c.jsonl")).size(), 5u);
  ASSERT_EQ(run("search --max-value 3003 --out " + dir + "/c.json").exit_code, 0);
  const auto j = binocoll::Json::parse(slurp(dir + "/c.json"));
  EXPECT_EQ(j["records"].size(), 4u);
}

TEST(Cli, LemmaText) {
  const Invocation r = run("lemma check21 --x 15 --a 5 --y 14 --b 6 --format text");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("verdict: HOLDS"), std::string::npos);
  EXPECT_NE(r.out.find("header.config.n: 7"), std::string::npos);
}

TEST(Cli, TupleByCoordinates) {
  const Invocation a = run("lemma check23 --delta 0 --n 7 --m 1 --k 2 --l 1");
  const Invocation b = run("lemma check23 --x 15 --a 5 --y 14 --b 6");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(binocoll::Json::parse(a.out)["result"], binocoll::Json::parse(b.out)["result"]);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("lemma check22 --n 500000 --k 587").exit_code, 0);
  EXPECT_EQ(run("lemma check22 --n 500000 --k 588").exit_code, 1);
  EXPECT_EQ(run("lemma check21 --x 21 --a 2 --y 10 --b 4").exit_code, 0);  // INDETERMINATE
  EXPECT_EQ(run("search --max-value 100 --typo").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("param --x 14 --a 6 --y 15 --b 5").exit_code, 2);
  EXPECT_EQ(run("search --max-value 100 --format xml").exit_code, 2);
  EXPECT_EQ(run("search --max-value 100 --out /nonexistent-dir/x.json").exit_code, 3);
}

TEST(Cli, Threshold32) {
  const Invocation r = run("lemma threshold32");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(binocoll::Json::parse(r.out)["result"]["f_star"], 871155);
}

TEST(Cli, Section4ByK) {
  const Invocation r = run("lemma section4 --k 588");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(binocoll::Json::parse(r.out)["result"]["contradiction"], true);
}

TEST(Cli, Bounds) {
  EXPECT_EQ(run("bounds pi-upper --x 1000000").exit_code, 0);
  EXPECT_EQ(run("bounds stirling --nu 100").exit_code, 0);
  const Invocation t = run("bounds thresholds --n 1000000000 --c 0.68");
  ASSERT_EQ(t.exit_code, 0);
  EXPECT_EQ(run("bounds constants").exit_code, 0);
}

TEST(Cli, SieveSubcommands) {
  const auto pi = binocoll::Json::parse(run("sieve pi --x 1000000").out);
  EXPECT_EQ(pi["result"]["pi"], 78498);
  const auto nb = binocoll::Json::parse(run("sieve neighbors --x 100").out);
  EXPECT_EQ(nb["result"]["prev"], 97);
  EXPECT_EQ(nb["result"]["next"], 101);
}

TEST(Cli, ByteIdenticalAcrossRerunsAndThreads) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"sieve gaps --lo 2 --hi 20000000 --min-gap 120 --format jsonl", " --threads "},
      {"certify --qmax 20000000 --format jsonl", " --threads "},
      {"lemma nmax31 --k-max 20000", " --threads "},
  };
  for (const auto& [args, flag] : cases) {
    const Invocation ref = run(args);
    ASSERT_EQ(ref.exit_code, 0) << args;
    EXPECT_EQ(run(args).out, ref.out) << args;
    for (int threads : {1, 4, 8}) EXPECT_EQ(run(args + flag + std::to_string(threads)).out, ref.out) << args << threads;
  }
}

TEST(Cli, ConfigFile) {
  const std::string dir = temp_dir("config");
  std::ofstream(dir + "/ok.ini") << "format=\"text\"\n[certify]\nqmax=1000000\ngap-min=100\n";
  const Invocation r = run("--config " + dir + "/ok.ini certify");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("header.config.q_max: 1000000"), std::string::npos);
  EXPECT_NE(r.out.find("header.config.gap_min: 100"), std::string::npos);
  const Invocation flag = run("--config " + dir + "/ok.ini certify --gap-min 120");
  EXPECT_NE(flag.out.find("header.config.gap_min: 120"), std::string::npos);
  std::ofstream(dir + "/bad.ini") << "qmax=1000000\n";
  EXPECT_EQ(run("--config " + dir + "/bad.ini certify").exit_code, 2);
}

TEST(Cli, CertifyCheckpointInCacheDir) {
  const std::string dir = temp_dir("cache");
  const std::string env = "BINOCOLL_CACHE_DIR=" + dir;
  const Invocation partial = run("certify --qmax 100000000 --max-segments 10", env);
  ASSERT_EQ(partial.exit_code, 0);
  EXPECT_EQ(binocoll::Json::parse(partial.out)["result"]["finished"], false);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    EXPECT_EQ(e.path().filename().string().rfind("certify-", 0), 0u);
    ++files;
  }
  EXPECT_EQ(files, 1u);
  const Invocation resumed = run("certify --qmax 100000000", env);
  ASSERT_EQ(resumed.exit_code, 0);
  const Invocation fresh = run("certify --qmax 100000000");
  EXPECT_EQ(resumed.out, fresh.out);
  const auto j = binocoll::Json::parse(fresh.out)["result"];
  EXPECT_EQ(j["gap_prime_count"], 73);
  EXPECT_EQ(j["certificate_ok"], true);
}

TEST(Cli, CertifyStreamsGapPrimes) {
  const auto lines = jsonl(run("certify --qmax 100000000 --format jsonl").out);
  ASSERT_EQ(lines.size(), 2u + 73u);
  EXPECT_TRUE(lines[0].contains("header"));
  EXPECT_TRUE(lines[1].contains("result"));
  EXPECT_EQ(lines[2]["p"], 17051707);
}

TEST(Cli, CertifyCoverageFailure) {
  EXPECT_EQ(run("certify --qmax 1000000 --windows 152-156").exit_code, 3);
}

TEST(Cli, FibFamily) {
  const Invocation r = run("fib-family --count 5 --format jsonl");
  ASSERT_EQ(r.exit_code, 0);
  const auto lines = jsonl(r.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[2]["x"], "15");
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_EQ(lines[i]["verified"], true);
}
