#include <binocoll/collision.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace binocoll;

namespace {

std::vector<Representation> reps(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> l) {
  std::vector<Representation> out;
  for (auto [x, a] : l) out.push_back({x, a});
  return out;
}

}  // namespace

TEST(Enumerate, DisplayTable) {
  const auto recs = enumerate_collisions(Natural(25000));
  ASSERT_EQ(recs.size(), 7u);
  const std::vector<std::pair<int, std::vector<Representation>>> expected = {
      {120, reps({{16, 2}, {10, 3}})},
      {210, reps({{21, 2}, {10, 4}})},
      {1540, reps({{56, 2}, {22, 3}})},
      {3003, reps({{78, 2}, {15, 5}, {14, 6}})},
      {7140, reps({{120, 2}, {36, 3}})},
      {11628, reps({{153, 2}, {19, 5}})},
      {24310, reps({{221, 2}, {17, 8}})},
  };
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].value, expected[i].first);
    EXPECT_EQ(recs[i].reps, expected[i].second);
  }
}

TEST(Enumerate, SmallBounds) {
  EXPECT_TRUE(enumerate_collisions(Natural(100)).empty());
  EXPECT_TRUE(enumerate_collisions(Natural(119)).empty());
  const auto one = enumerate_collisions(Natural(120));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].reps, reps({{16, 2}, {10, 3}}));
}

TEST(Enumerate, MatchesRowOracle) {
  const oracle::BigInt bound("100000000000");
  const auto ours = enumerate_collisions(Natural(bound.str()));
  const auto ref = oracle::collisions_by_rows(bound);
  ASSERT_EQ(ours.size(), ref.size());
  for (std::size_t i = 0; i < ours.size(); ++i) {
    EXPECT_EQ(ours[i].value.str(), ref[i].first.str());
    ASSERT_EQ(ours[i].reps.size(), ref[i].second.size());
    for (std::size_t j = 0; j < ours[i].reps.size(); ++j) {
      EXPECT_EQ(ours[i].reps[j].x, ref[i].second[j].first);
      EXPECT_EQ(ours[i].reps[j].a, ref[i].second[j].second);
      EXPECT_EQ(binomial(ours[i].reps[j].x, static_cast<std::int64_t>(ours[i].reps[j].a)), ours[i].value);
    }
  }
}

TEST(Enumerate, TripleRepresentation) {
  const auto recs = enumerate_collisions(Natural("1000000000000000"));
  std::size_t triples = 0;
  for (const auto& r : recs)
    if (r.reps.size() >= 3) ++triples;
  EXPECT_EQ(triples, 1u);
  EXPECT_EQ(recs.front().value, 120);
}

TEST(Fibonacci, FamilyMembers) {
  for (std::uint64_t i = 0; i <= 4; ++i) EXPECT_TRUE(fib_identity(i).verified) << i;
  const auto f1 = fib_identity(1);
  EXPECT_EQ(f1.x, 15);
  EXPECT_EQ(f1.a, 5);
  EXPECT_EQ(f1.y, 14);
  EXPECT_EQ(f1.b, 6);
  const auto f0 = fib_identity(0);
  EXPECT_EQ(f0.x, 2);
  EXPECT_EQ(f0.a, 0);
  EXPECT_EQ(f0.y, 1);
  EXPECT_EQ(f0.b, 1);
  const auto f2 = fib_identity(2);
  EXPECT_EQ(f2.x, 104);
  EXPECT_EQ(f2.a, 39);
}

TEST(Param, Examples) {
  const ParamTuple t = to_param(15, 5, 14, 6);
  EXPECT_EQ(t, (ParamTuple{0, 7, 1, 2, 1}));
  EXPECT_EQ(t.k0(), 5);
  EXPECT_EQ(t.m0(), 1);
  const Hypotheses h = t.hypotheses();
  EXPECT_TRUE(h.order);
  EXPECT_TRUE(h.m_ratio);
  EXPECT_TRUE(h.l_gt_delta);
  EXPECT_FALSE(h.n_large);

  const ParamTuple u = to_param(21, 2, 10, 4);
  EXPECT_EQ(u, (ParamTuple{0, 5, 1, 3, 11}));
  EXPECT_FALSE(u.hypotheses().order);
  EXPECT_EQ(u.m0(), 5);

  EXPECT_THROW(to_param(14, 6, 15, 5), std::invalid_argument);
  EXPECT_THROW(to_param(14, 6, 14, 6), std::invalid_argument);
}

TEST(Param, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t y = 4 + static_cast<std::int64_t>(rng() % 100000);
    const std::int64_t b = 2 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(y / 2 - 1));
    const std::int64_t x = y + 1 + static_cast<std::int64_t>(rng() % 100000);
    const std::int64_t a = 2 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x / 2 - 1));
    const ParamTuple t = to_param(x, a, y, b);
    ASSERT_EQ(from_param(t), (Positions{x, a, y, b}));
    ASSERT_EQ(2 * t.n + t.delta, y);
  }
}

TEST(Eq12, Examples) {
  EXPECT_TRUE(check_eq12({0, 7, 1, 2, 1}));
  EXPECT_TRUE(check_eq12({0, 5, 1, 3, 11}));
  EXPECT_FALSE(check_eq12({0, 7, 1, 2, 2}));
}
