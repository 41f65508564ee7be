#include <doctest.h>

#include "oracles.hpp"
#include "rmh/tree.hpp"

using rmh::RootedTree;

namespace {

// The depth-2 example tree: green root, children purple and orange, leaves
// red and blue under purple, yellow under orange.
constexpr int kGreen = 0, kPurple = 1, kOrange = 2, kRed = 3, kBlue = 4, kYellow = 5;

RootedTree example_tree() { return RootedTree::from_parents({-1, 0, 0, 1, 1, 2}); }

} // namespace

TEST_CASE("tree construction validates the parent array") {
    CHECK_THROWS_AS(RootedTree::from_parents({}), std::invalid_argument);
    CHECK_THROWS_AS(RootedTree::from_parents({-1, -1}), std::invalid_argument);
    CHECK_THROWS_AS(RootedTree::from_parents({-1, 5}), std::invalid_argument);
    CHECK_THROWS_AS(RootedTree::from_parents({-1, 2, 1}), std::invalid_argument);

    const RootedTree t = example_tree();
    CHECK(t.root == kGreen);
    CHECK(t.depth[kRed] == 2);
    CHECK(t.children[kPurple] == std::vector<int>{kRed, kBlue});
    CHECK(t.leaves_preorder() == std::vector<int>{kRed, kBlue, kYellow});
    CHECK(t.ancestor_at_depth(kRed, 1) == kPurple);
    CHECK(t.is_ancestor_or_self(kPurple, kBlue));
    CHECK_FALSE(t.is_ancestor_or_self(kOrange, kBlue));
}

TEST_CASE("lca on the example tree") {
    const RootedTree t = example_tree();
    CHECK(rmh::lca(t, kRed, kBlue) == kPurple);
    CHECK(rmh::lca(t, kYellow, kBlue) == kGreen);
    for (int v = 0; v < t.node_count; ++v) CHECK(rmh::lca(t, v, v) == v);
    CHECK_THROWS_AS(rmh::lca(t, 0, 99), std::invalid_argument);
}

TEST_CASE("lca of two leaves under one child") {
    // root r with children u, v; two leaves under u.
    const RootedTree t = RootedTree::from_parents({-1, 0, 0, 1, 1});
    CHECK(rmh::lca(t, 3, 4) == 1);
    CHECK(rmh::lca(t, 3, 4) == oracle::lca_by_paths(t, 3, 4));
}

TEST_CASE("lca_down on the example tree") {
    const RootedTree t = example_tree();
    const auto yb = rmh::lca_down(t, kYellow, kBlue);
    CHECK(std::min(yb.first, yb.second) == kPurple);
    CHECK(std::max(yb.first, yb.second) == kOrange);
    const auto rb = rmh::lca_down(t, kRed, kBlue);
    CHECK(rb == std::pair<int, int>{kRed, kBlue});

    CHECK_THROWS_AS(rmh::lca_down(t, kRed, kRed), std::invalid_argument);
    CHECK_THROWS_AS(rmh::lca_down(t, kPurple, kBlue), std::invalid_argument);
}

TEST_CASE("lca_down on a star tree returns the leaves themselves") {
    std::vector<int> parents{-1};
    for (int i = 0; i < 6; ++i) parents.push_back(0);
    const RootedTree t = RootedTree::from_parents(parents);
    for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j) {
            CHECK(rmh::lca_down(t, i, j) == std::pair<int, int>{i, j});
            CHECK(rmh::lca_down(t, i, j) == oracle::lca_down_by_paths(t, i, j));
        }
}

TEST_CASE("lca and lca_down agree with the path-intersection oracle on random trees") {
    rmh::Rng rng(rmh::Seed{41}.stream("trees"));
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(49));
        const RootedTree t = oracle::random_tree(rng, n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                CHECK(rmh::lca(t, a, b) == oracle::lca_by_paths(t, a, b));
                if (a != b && !t.is_ancestor_or_self(a, b) && !t.is_ancestor_or_self(b, a)) {
                    const auto got = rmh::lca_down(t, a, b);
                    CHECK(got == oracle::lca_down_by_paths(t, a, b));
                    CHECK(t.parent[got.first] == rmh::lca(t, a, b));
                    CHECK(t.parent[got.second] == rmh::lca(t, a, b));
                }
            }
        }
    }
}
