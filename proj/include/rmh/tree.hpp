#ifndef RMH_TREE_HPP
#define RMH_TREE_HPP

#include <utility>
#include <vector>

namespace rmh {

/// Rooted tree over dense node ids 0..node_count-1.  Children are ordered by
/// node id, which fixes the depth-first leaf ordering used for flat block
/// numbering everywhere else.
struct RootedTree {
    int node_count = 0;
    int root = 0;
    std::vector<int> parent;                 // -1 for the root
    std::vector<std::vector<int>> children;  // derived, id-ordered
    std::vector<int> depth;                  // derived, depth(root) = 0

    /// Builds and validates: exactly one root, every parent in range, no
    /// cycles (each parent chain reaches the root in < node_count steps).
    static RootedTree from_parents(const std::vector<int>& parents);

    bool valid_node(int v) const { return v >= 0 && v < node_count; }
    bool is_leaf(int v) const { return children[v].empty(); }

    /// Leaves in depth-first left-to-right order.
    std::vector<int> leaves_preorder() const;

    /// True iff a is an ancestor of b or a == b.
    bool is_ancestor_or_self(int a, int b) const;

    /// Ancestor of v at the given depth (requires depth(v) >= d).
    int ancestor_at_depth(int v, int d) const;
};

/// Lowest common ancestor; lca(a, a) == a.
int lca(const RootedTree& tree, int a, int b);

/// The two children of lca(a, b) on the paths toward a and toward b.
/// Requires a != b and neither an ancestor of the other.
std::pair<int, int> lca_down(const RootedTree& tree, int a, int b);

} // namespace rmh

#endif
