#include <binocoll/certificate.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"

using namespace binocoll;

namespace {

std::uint64_t oracle_largest_prime(std::uint64_t v) {
  std::uint64_t best = 1;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    while (v % d == 0) {
      best = d;
      v /= d;
    }
  return v > 1 ? std::max(best, v) : best;
}

CertificateConfig desk(std::uint64_t q_max) {
  CertificateConfig cfg;
  cfg.q_max = q_max;
  return cfg;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("binocoll-test-" + name)).string();
}

void expect_same(const CertificateState& a, const CertificateState& b) {
  EXPECT_EQ(a.completed_hi, b.completed_hi);
  EXPECT_EQ(a.gap_prime_count, b.gap_prime_count);
  EXPECT_EQ(a.refutations, b.refutations);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.cap_violations, b.cap_violations);
  EXPECT_EQ(a.max_gap, b.max_gap);
}

}  // namespace

TEST(Windows, ParseAndPrint) {
  const auto w = parse_windows("152-156,303-308");
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].first, 152);
  EXPECT_EQ(w[1].last, 308);
  EXPECT_EQ(to_string(w[1]), "303-308");
  EXPECT_THROW(parse_windows("152"), std::invalid_argument);
  EXPECT_THROW(parse_windows("156-152"), std::invalid_argument);
  EXPECT_THROW(parse_windows("1-2x"), std::invalid_argument);
}

TEST(Coverage, DefaultWindowsCoverEveryPlacement) {
  const auto c = coverage_check(456, 156, {{152, 156}, {303, 308}});
  EXPECT_TRUE(c.ok);
  ASSERT_EQ(c.table.size(), 300u);
  EXPECT_EQ(c.table[0].second, std::optional<std::size_t>(0));
  EXPECT_EQ(c.table[151].second, std::optional<std::size_t>(0));
  EXPECT_EQ(c.table[152].second, std::optional<std::size_t>(1));
  EXPECT_EQ(c.table[299].second, std::optional<std::size_t>(1));
}

TEST(Coverage, SingleWindowMissesLatePlacements) {
  const auto c = coverage_check(456, 156, {{152, 156}});
  EXPECT_FALSE(c.ok);
  std::optional<std::int64_t> first_miss;
  for (const auto& [s, hit] : c.table)
    if (!hit && !first_miss) first_miss = s;
  EXPECT_EQ(first_miss, 152);
}

TEST(Coverage, SinglePlacement) {
  const auto c = coverage_check(157, 156, {{152, 156}});
  EXPECT_TRUE(c.ok);
  ASSERT_EQ(c.table.size(), 1u);
  EXPECT_FALSE(coverage_check(157, 156, {{152, 157}}).ok);
  EXPECT_TRUE(coverage_check(156, 156, {}).table.empty());
}

TEST(Refute, Examples) {
  const auto r = refute_window(3, {1, 2}, 3);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->witness_offset, 2);
  EXPECT_EQ(r->witness_prime, 5u);
  EXPECT_FALSE(refute_window(8, {1, 2}, 7).has_value());
  EXPECT_THROW(refute_window(8, {2, 1}, 7), std::invalid_argument);
  EXPECT_THROW(refute_window(~0ull - 3, {1, 8}, 7), CapabilityError);
}

TEST(Refute, FirstGapPrimeAbove2e7) {
  const auto ev = gap_scan(20'000'000, 40'000'000, 158);
  ASSERT_FALSE(ev.empty());
  const std::uint64_t q = ev.front().p;
  EXPECT_EQ(q, 20'285'099u);
  EXPECT_EQ(ev.front().gap, 164u);
  for (const OffsetWindow w : {OffsetWindow{152, 156}, OffsetWindow{303, 308}}) {
    const auto r = refute_window(q, w, 3427);
    ASSERT_TRUE(r.has_value());
    const std::uint64_t v = q + static_cast<std::uint64_t>(r->witness_offset);
    EXPECT_EQ(oracle_largest_prime(v), r->witness_prime);
    EXPECT_TRUE(oracle::is_prime(r->witness_prime));
    EXPECT_GT(r->witness_prime, 3427u);
    for (std::int64_t off = w.first; off < r->witness_offset; ++off)
      EXPECT_LE(oracle_largest_prime(q + static_cast<std::uint64_t>(off)), 3427u);
  }
  EXPECT_EQ(refute_window(q, {152, 156}, 3427)->witness_offset, 152);
  EXPECT_EQ(refute_window(q, {152, 156}, 3427)->witness_prime, 2'897'893u);
}

TEST(Run, DeskScale) {
  const CertificateReport r = run_certificate(desk(100'000'000));
  EXPECT_TRUE(r.finished);
  EXPECT_TRUE(r.coverage.ok);
  EXPECT_EQ(r.state.gap_prime_count, 73u);
  EXPECT_EQ(r.state.refutations, (std::vector<std::uint64_t>{73, 73}));
  EXPECT_TRUE(r.state.failures.empty());
  EXPECT_TRUE(r.state.cap_violations.empty());
  EXPECT_EQ(r.state.max_gap, 220u);
  EXPECT_TRUE(r.certificate_ok());
  EXPECT_TRUE(r.covers_all_runs());
}

TEST(Run, RunCoverageNeedsSmallEnoughGapMin) {
  CertificateConfig cfg = desk(1'000'000);
  cfg.gap_min = 160;
  EXPECT_TRUE(run_certificate(cfg).certificate_ok());
  EXPECT_FALSE(run_certificate(cfg).covers_all_runs());
}

TEST(Run, DeskScaleMatchesSieve) {
  const CertificateReport r = run_certificate(desk(100'000'000));
  GapScanOptions o;
  o.lo = 2;
  o.hi = 100'000'001;
  o.min_gap = 158;
  EXPECT_EQ(r.state.gap_prime_count, gap_scan(o).size());
}

TEST(Run, IndependentOfThreadsAndSegments) {
  const CertificateReport ref = run_certificate(desk(30'000'000));
  ASSERT_GT(ref.state.gap_prime_count, 0u);
  for (unsigned threads : {1u, 4u, 8u})
    for (std::size_t seg : {std::size_t{1} << 16, kDefaultSegmentSize}) {
      CertificateConfig cfg = desk(30'000'000);
      cfg.threads = threads;
      cfg.segment_size = seg;
      expect_same(run_certificate(cfg).state, ref.state);
    }
}

TEST(Run, GapPrimesStreamInOrder) {
  std::vector<std::uint64_t> seen;
  RunOptions opts;
  opts.on_gap_prime = [&](const GapEvent& e, const std::vector<std::optional<WindowRefutation>>& refs) {
    seen.push_back(e.p);
    EXPECT_EQ(refs.size(), 2u);
  };
  CertificateConfig cfg = desk(30'000'000);
  cfg.threads = 4;
  const auto r = run_certificate(cfg, opts);
  EXPECT_EQ(seen.size(), r.state.gap_prime_count);
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
}

TEST(Run, NoGapsOfHugeSize) {
  CertificateConfig cfg = desk(1'000'000);
  cfg.gap_min = 500;
  const CertificateReport r = run_certificate(cfg);
  EXPECT_EQ(r.state.gap_prime_count, 0u);
}

TEST(Run, CoverageFailureStopsBeforeScanning) {
  CertificateConfig cfg = desk(1'000'000);
  cfg.windows = {{152, 156}};
  EXPECT_THROW(run_certificate(cfg), CoverageError);
}

TEST(Run, CapViolationIsAFailure) {
  CertificateConfig cfg = desk(10'000'000);
  cfg.gap_min = 100;
  cfg.gap_cap = 120;
  cfg.window_len = 100;
  cfg.windows = {{20, 100}};
  const CertificateReport r = run_certificate(cfg);
  EXPECT_FALSE(r.state.cap_violations.empty());
  EXPECT_FALSE(r.certificate_ok());
}

TEST(Checkpoint, ResumeGivesTheSameReport) {
  const std::string path = temp_path("resume.json");
  std::filesystem::remove(path);
  CertificateConfig cfg = desk(100'000'000);
  cfg.checkpoint_path = path;
  const CertificateReport full = run_certificate(desk(100'000'000));

  RunOptions half;
  half.max_segments = full.state.segments_done / 2;
  const CertificateReport partial = run_certificate(cfg, half);
  EXPECT_FALSE(partial.finished);
  EXPECT_LT(partial.state.completed_hi, cfg.q_max);
  EXPECT_TRUE(std::filesystem::exists(path));

  const CertificateReport resumed = run_certificate(cfg);
  EXPECT_TRUE(resumed.finished);
  expect_same(resumed.state, full.state);
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsDifferentConfig) {
  const std::string path = temp_path("mismatch.json");
  CertificateConfig cfg = desk(5'000'000);
  cfg.checkpoint_path = path;
  run_certificate(cfg);
  cfg.gap_min = 100;
  try {
    run_certificate(cfg);
    FAIL() << "expected CheckpointError";
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("config_hash"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(Checkpoint, EmptyFileStartsFresh) {
  const std::string path = temp_path("empty.json");
  { std::ofstream(path, std::ios::trunc); }
  CertificateConfig cfg = desk(5'000'000);
  cfg.checkpoint_path = path;
  const CertificateState s = load_checkpoint(path, cfg);
  EXPECT_EQ(s.completed_hi, 2u);
  EXPECT_EQ(s.gap_prime_count, 0u);
  EXPECT_TRUE(run_certificate(cfg).finished);
  std::filesystem::remove(path);
}

TEST(Checkpoint, CorruptFieldIsNamed) {
  const std::string path = temp_path("corrupt.json");
  CertificateConfig cfg = desk(5'000'000);
  cfg.checkpoint_path = path;
  run_certificate(cfg);
  Json j;
  {
    std::ifstream in(path);
    j = Json::parse(in);
  }
  j["gap_prime_count"] = "many";
  { std::ofstream(path, std::ios::trunc) << j.dump(); }
  try {
    load_checkpoint(path, cfg);
    FAIL() << "expected CheckpointError";
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("gap_prime_count"), std::string::npos);
  }
  j.erase("gap_prime_count");
  { std::ofstream(path, std::ios::trunc) << j.dump(); }
  EXPECT_THROW(load_checkpoint(path, cfg), CheckpointError);
  { std::ofstream(path, std::ios::trunc) << "{not json"; }
  EXPECT_THROW(load_checkpoint(path, cfg), CheckpointError);
  std::filesystem::remove(path);
}

TEST(Checkpoint, RoundTrip) {
  CertificateConfig cfg = desk(5'000'000);
  CertificateState s;
  s.completed_hi = 1234567;
  s.gap_prime_count = 3;
  s.refutations = {3, 2};
  s.failures = {{999, 1}};
  s.cap_violations = {{1000, 500}};
  s.max_gap = 500;
  s.segments_done = 7;
  const std::string path = temp_path("roundtrip.json");
  save_checkpoint(path, cfg, s);
  EXPECT_EQ(load_checkpoint(path, cfg), s);
  std::filesystem::remove(path);
}

TEST(Config, HashIgnoresThreadsAndPath) {
  CertificateConfig a = desk(100'000'000), b = a;
  b.threads = 8;
  b.checkpoint_path = "/tmp/x";
  EXPECT_EQ(a.hash(), b.hash());
  b.gap_min = 159;
  EXPECT_NE(a.hash(), b.hash());
}
