#include <gtest/gtest.h>

#include <functional>

#include "test_support.hpp"

using namespace fbas;
using namespace testing_support;

namespace {

SymmetricAnalysis run_symmetric(const Fbas& f) {
  auto clusters = find_symmetric_clusters(f);
  for (const auto& c : clusters) {
    if (contains_quorum(c.members, f)) return symmetric_top_tier_analysis(f, c);
  }
  throw std::logic_error("no cluster with a quorum");
}

void expect_matches_oracle(const Fbas& f) {
  SymmetricAnalysis s = run_symmetric(f);
  oracle::BruteForce brute(f);
  EXPECT_EQ(s.minimal_quorums, brute.minimal_quorums());
  EXPECT_EQ(s.minimal_blocking_sets, brute.minimal_blocking_sets());
  EXPECT_EQ(s.minimal_splitting_sets, brute.minimal_splitting_sets());
  EXPECT_EQ(s.has_quorum_intersection, brute.has_quorum_intersection());
  EXPECT_TRUE(s.complete);
}

Fbas shared(const QuorumSet& qs, std::size_t n) { return make_fbas(std::vector<QuorumSet>(n, qs)); }

}  // namespace

TEST(Symmetric, FlatTopologiesMatchOracle) {
  for (std::size_t m = 1; m <= 9; ++m) expect_matches_oracle(generate_flat_topology(m));
}

TEST(Symmetric, FlatThresholdsMatchOracle) {
  for (std::uint32_t t = 0; t <= 5; ++t) expect_matches_oracle(shared(flat({0, 1, 2, 3, 4}, t), 5));
}

TEST(Symmetric, NestedMatchesOracle) {
  for (std::size_t orgs = 1; orgs <= 4; ++orgs) expect_matches_oracle(generate_stellar_like_topology(orgs));
  expect_matches_oracle(shared(QuorumSet{{0}, {flat({1, 2}, 1), flat({3, 4, 5}, 2)}, 2}, 6));
  expect_matches_oracle(shared(QuorumSet{{0, 1}, {flat({2, 3}, 2), flat({4, 5}, 2)}, 4}, 6));
  expect_matches_oracle(shared(QuorumSet{{}, {flat({0, 1}, 1), flat({2, 3}, 1)}, 1}, 4));
  expect_matches_oracle(shared(QuorumSet{{0}, {flat({1, 2}, 0), flat({3}, 1)}, 3}, 4));
}

TEST(Symmetric, RepeatedNodesMatchOracle) {
  expect_matches_oracle(shared(QuorumSet{{0, 1}, {flat({1, 2}, 2), flat({0, 3}, 1)}, 3}, 4));
  expect_matches_oracle(shared(QuorumSet{{0, 1, 2}, {flat({0, 1, 2}, 3)}, 2}, 3));
}

TEST(Symmetric, FollowersOutsideTheCluster) {
  // Nodes 3 and 4 trust the cluster without being trusted back.
  QuorumSet core = flat({0, 1, 2}, 2);
  Fbas f = make_fbas({core, core, core, flat({0, 1, 2, 3}, 3), flat({4, 0}, 2)});
  expect_matches_oracle(f);
}

TEST(Symmetric, ZeroThresholdGivesSingletonQuorums) {
  Fbas f = shared(flat({0, 1, 2}, 0), 3);
  SymmetricAnalysis s = run_symmetric(f);
  EXPECT_EQ(s.minimal_quorums, family({{0}, {1}, {2}}));
  EXPECT_EQ(s.minimal_blocking_sets, family({{0, 1, 2}}));
  EXPECT_FALSE(s.has_quorum_intersection);
  expect_matches_oracle(f);
}

TEST(Symmetric, RejectsQuorumOutsideCluster) {
  QuorumSet core = flat({0, 1}, 2);
  Fbas f = make_fbas({core, core, flat({2}, 1)});
  auto clusters = find_symmetric_clusters(f);
  auto it = std::find_if(clusters.begin(), clusters.end(),
                         [](const SymmetricCluster& c) { return c.members == NodeIdSet{0, 1}; });
  ASSERT_NE(it, clusters.end());
  EXPECT_THROW(symmetric_top_tier_analysis(f, *it), std::invalid_argument);
}

TEST(Symmetric, AbortKeepsIntersectionAndTopTier) {
  Fbas f = generate_flat_topology(8);
  SymmetricAnalysis s = symmetric_top_tier_analysis(f, find_symmetric_clusters(f).front(), 5);
  EXPECT_FALSE(s.complete);
  EXPECT_TRUE(s.has_quorum_intersection);
  EXPECT_EQ(s.top_tier.size(), 8u);
  EXPECT_TRUE(s.minimal_blocking_sets.empty());
}

TEST(Symmetric, ClosedFormCounts) {
  // m = 10: t = 7, blocking sets of 4, splitting sets of 4.
  SymmetricAnalysis s = run_symmetric(generate_flat_topology(10));
  EXPECT_EQ(s.minimal_quorums.size(), 120u);
  EXPECT_EQ(s.minimal_blocking_sets.size(), 210u);
  EXPECT_EQ(s.minimal_splitting_sets.size(), 210u);
  for (const auto& b : s.minimal_blocking_sets) EXPECT_EQ(b.size(), 4u);
}

TEST(Symmetric, RandomSharedQuorumSetsMatchOracle) {
  std::mt19937_64 rng(61);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::function<QuorumSet(std::size_t, int)> random_qs = [&](std::size_t n, int depth) {
    QuorumSet qs;
    for (NodeId v = 0; v < n; ++v) {
      if (pick(0, 2) == 0) qs.validators.push_back(v);
    }
    if (depth > 0) {
      for (std::size_t i = pick(0, 2); i > 0; --i) qs.inner_quorum_sets.push_back(random_qs(n, depth - 1));
    }
    qs.threshold = static_cast<std::uint32_t>(pick(0, qs.element_count() + 1));
    return qs;
  };
  int checked = 0;
  while (checked < 150) {
    std::size_t n = pick(1, 6);
    QuorumSet qs = random_qs(n, 2);
    if (qs.mentioned_nodes() != NodeIdSet::full(n)) continue;
    Fbas f = shared(qs, n);
    if (!contains_quorum(f.all_nodes(), f)) continue;
    SCOPED_TRACE(emit_nodes(f));
    expect_matches_oracle(f);
    ++checked;
  }
}
