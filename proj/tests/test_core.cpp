#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace fbas;
using namespace testing_support;

TEST(NodeIdSet, BasicOperations) {
  NodeIdSet a{1, 3, 70};
  NodeIdSet b{3, 4};
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(70));
  EXPECT_FALSE(a.contains(2));
  EXPECT_EQ(a & b, (NodeIdSet{3}));
  EXPECT_EQ(a | b, (NodeIdSet{1, 3, 4, 70}));
  EXPECT_EQ(a - b, (NodeIdSet{1, 70}));
  EXPECT_TRUE((NodeIdSet{1, 70}).is_subset_of(a));
  EXPECT_FALSE(b.is_subset_of(a));
  EXPECT_EQ(a.intersection_size(b), 1u);
  EXPECT_EQ(a.first(), 1u);
  EXPECT_EQ(a.to_vector(), (std::vector<NodeId>{1, 3, 70}));
}

TEST(NodeIdSet, EqualityIgnoresCapacity) {
  NodeIdSet wide(200);
  wide.insert(5);
  EXPECT_EQ(wide, (NodeIdSet{5}));
  EXPECT_EQ(wide.hash(), (NodeIdSet{5}).hash());
  NodeIdSet grown{5, 150};
  grown.erase(150);
  EXPECT_EQ(grown, (NodeIdSet{5}));
}

TEST(NodeIdSet, OrdersByMemberList) {
  EXPECT_LT((NodeIdSet{0}), (NodeIdSet{0, 1}));
  EXPECT_LT((NodeIdSet{0, 1}), (NodeIdSet{1}));
  EXPECT_LT((NodeIdSet{}), (NodeIdSet{0}));
}

TEST(QuorumSet, Satisfaction) {
  QuorumSet qs{{0, 1}, {flat({2, 3, 4}, 2)}, 2};
  EXPECT_TRUE(satisfies({0, 1}, qs));
  EXPECT_TRUE(satisfies({0, 2, 3}, qs));
  EXPECT_FALSE(satisfies({0, 2}, qs));
  EXPECT_FALSE(satisfies({2, 3, 4}, qs));
  EXPECT_TRUE(satisfies({}, QuorumSet{{0}, {}, 0}));
  EXPECT_FALSE(satisfies({0, 1, 2}, QuorumSet::unsatisfiable()));
}

TEST(QuorumSet, NormalFormIgnoresOrder) {
  QuorumSet a{{2, 1}, {flat({4, 3}, 1), flat({0}, 1)}, 2};
  QuorumSet b{{1, 2}, {flat({0}, 1), flat({3, 4}, 1)}, 2};
  EXPECT_EQ(a.normalized(), b.normalized());
  EXPECT_NE(a.normalized(), (QuorumSet{{1, 2}, {}, 2}).normalized());
}

TEST(QuorumSet, RepeatedNodes) {
  EXPECT_FALSE((QuorumSet{{0, 1}, {flat({2, 3}, 1)}, 2}).has_repeated_nodes());
  EXPECT_TRUE((QuorumSet{{0, 1}, {flat({1, 3}, 1)}, 2}).has_repeated_nodes());
  EXPECT_EQ((QuorumSet{{0, 1}, {flat({1, 3}, 1)}, 2}).mentioned_nodes(), (NodeIdSet{0, 1, 3}));
}

TEST(Fbas, RejectsUnknownReferences) {
  EXPECT_THROW(make_fbas({flat({0, 1}, 1)}), std::invalid_argument);
  EXPECT_NO_THROW(make_fbas({flat({0, 1}, 1), flat({0}, 1)}));
}

TEST(Fbas, NamesAndLookup) {
  Fbas f = load("hub_and_halves.json");
  EXPECT_EQ(f.size(), 5u);
  EXPECT_EQ(f.find("3"), NodeId{3});
  EXPECT_FALSE(f.find("nope").has_value());
  EXPECT_EQ(f.all_nodes(), (NodeIdSet{0, 1, 2, 3, 4}));
}

TEST(Predicates, HubAndHalvesQuorums) {
  Fbas f = load("hub_and_halves.json");
  EXPECT_TRUE(is_quorum({0, 1, 2}, f));
  EXPECT_TRUE(is_quorum({0, 3, 4}, f));
  EXPECT_TRUE(is_quorum({0, 1, 2, 3, 4}, f));
  EXPECT_FALSE(is_quorum({0, 1}, f));
  EXPECT_FALSE(is_quorum({}, f));
  EXPECT_FALSE(is_quorum({1, 2, 3, 4}, f));
  EXPECT_TRUE(is_slice_for({0, 1, 2}, 1, f));
  EXPECT_FALSE(is_slice_for({0, 1, 2}, 3, f));
  EXPECT_EQ(greatest_quorum({0, 1, 2, 3}, f), (NodeIdSet{0, 1, 2}));
  EXPECT_EQ(greatest_quorum({1, 2, 3, 4}, f), NodeIdSet{});
  EXPECT_TRUE(contains_quorum({0, 1, 2, 4}, f));
}

TEST(Predicates, ThreeNodeQuorums) {
  Fbas f = load("three_node.json");
  EXPECT_EQ(oracle::brute_quorums(f), family({{0, 2}, {0, 1, 2}}));
  EXPECT_FALSE(is_quorum({0, 1}, f));
}

TEST(Predicates, SatisfiableExtension) {
  Fbas f = load("hub_and_halves.json");
  EXPECT_TRUE(is_satisfiable({1}, {0, 1, 2}, f));
  EXPECT_FALSE(is_satisfiable({1}, {1, 2, 3, 4}, f));
}

TEST(Predicates, QuorumsAreClosedUnderUnion) {
  RandomFbas gen(11);
  for (int round = 0; round < 40; ++round) {
    Fbas f = gen(6);
    auto quorums = oracle::brute_quorums(f);
    for (const auto& a : quorums) {
      for (const auto& b : quorums) EXPECT_TRUE(is_quorum(a | b, f));
    }
  }
}

TEST(Predicates, ContainsQuorumIsMonotone) {
  RandomFbas gen(12);
  for (int round = 0; round < 40; ++round) {
    Fbas f = gen(6);
    for (std::uint32_t m = 0; m < 64; ++m) {
      NodeIdSet s = oracle::BruteForce::to_set(m);
      if (!contains_quorum(s, f)) continue;
      for (NodeId v = 0; v < 6; ++v) EXPECT_TRUE(contains_quorum(s.with(v), f));
    }
  }
}

TEST(CompiledFbas, MatchesReferencePredicates) {
  RandomFbas gen(13);
  for (int round = 0; round < 40; ++round) {
    Fbas f = gen(7);
    CompiledFbas engine(f);
    for (std::uint32_t m = 0; m < 128; ++m) {
      NodeIdSet s = oracle::BruteForce::to_set(m);
      EXPECT_EQ(engine.is_quorum(s), is_quorum(s, f));
      EXPECT_EQ(engine.greatest_quorum(s), greatest_quorum(s, f));
    }
  }
}

TEST(CompiledFbas, SubUniverseUsesLocalIds) {
  Fbas f = load("hub_and_halves.json");
  CompiledFbas engine(f, {0, 3, 4});
  EXPECT_EQ(engine.size(), 3u);
  EXPECT_TRUE(engine.is_quorum(engine.all()));
  EXPECT_EQ(engine.to_global({1, 2}), (NodeIdSet{3, 4}));
  EXPECT_FALSE(engine.is_quorum({1, 2}));
}
