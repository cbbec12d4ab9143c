#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace fbas;
using namespace testing_support;

TEST(Oracle, HubAndHalvesFamilies) {
  oracle::BruteForce brute(load("hub_and_halves.json"));
  EXPECT_EQ(brute.minimal_quorums(), family({{0, 1, 2}, {0, 3, 4}}));
  EXPECT_EQ(brute.minimal_blocking_sets(), family({{0}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}));
  EXPECT_EQ(brute.minimal_splitting_sets(), family({{0}}));
  EXPECT_TRUE(brute.has_quorum_intersection());
  EXPECT_EQ(brute.quorum_count(), 3u);
}

TEST(Oracle, ThreeNodeQuorums) {
  oracle::BruteForce brute(load("three_node.json"));
  EXPECT_EQ(brute.quorums(), family({{0, 2}, {0, 1, 2}}));
  EXPECT_TRUE(brute.is_quorum(0b101));
  EXPECT_FALSE(brute.is_quorum(0b011));
}

TEST(Oracle, PredicatesOnMasks) {
  oracle::BruteForce brute(load("hub_and_halves.json"));
  EXPECT_TRUE(brute.is_blocking(0b00001));
  EXPECT_TRUE(brute.is_blocking(0b01010));
  EXPECT_FALSE(brute.is_blocking(0b00110));
  EXPECT_TRUE(brute.is_splitting(0b00001));
  EXPECT_FALSE(brute.is_splitting(0b00110));
}

TEST(Oracle, NoIntersection) {
  oracle::BruteForce brute(load("split_halves.json"));
  EXPECT_FALSE(brute.has_quorum_intersection());
  EXPECT_EQ(brute.minimal_splitting_sets(), NodeSetFamily{NodeIdSet{}});
}

TEST(Oracle, SizeGuard) {
  EXPECT_THROW(oracle::BruteForce(generate_flat_topology(21)), std::invalid_argument);
  EXPECT_NO_THROW(oracle::BruteForce(generate_flat_topology(4)));
}

TEST(Oracle, ManyQuorumsUseMinimalPairs) {
  // 6885 quorums, past the all-pairs limit; splitting sets still follow the closed form.
  oracle::BruteForce brute(generate_flat_topology(16));
  ASSERT_GT(brute.quorum_count(), oracle::BruteForce::kAllPairsLimit);
  NodeSetFamily s = brute.minimal_splitting_sets();
  EXPECT_EQ(s.size(), detail::binomial(16, 6));
  for (const auto& set : s) EXPECT_EQ(set.size(), 6u);
}

TEST(Oracle, MinimalPairsAgreeWithAllPairs) {
  // Compare the two pairing strategies directly on small random systems.
  RandomFbas gen(31);
  for (int round = 0; round < 40; ++round) {
    Fbas f = gen(7);
    oracle::BruteForce brute(f);
    auto quorums = brute.quorums().sets();
    auto minimal = brute.minimal_quorums().sets();
    std::vector<NodeIdSet> all_meets, minimal_meets;
    for (std::size_t i = 0; i < quorums.size(); ++i) {
      for (std::size_t j = i + 1; j < quorums.size(); ++j) all_meets.push_back(quorums[i] & quorums[j]);
    }
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      if (quorums.size() > 1) minimal_meets.push_back(minimal[i]);
      for (std::size_t j = i + 1; j < minimal.size(); ++j) minimal_meets.push_back(minimal[i] & minimal[j]);
    }
    EXPECT_EQ(reduce_to_minimal_sets(NodeSetFamily(all_meets)), reduce_to_minimal_sets(NodeSetFamily(minimal_meets)));
  }
}
