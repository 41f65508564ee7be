#include "rmh/tree.hpp"

#include <stdexcept>
#include <string>

namespace rmh {

RootedTree RootedTree::from_parents(const std::vector<int>& parents) {
    RootedTree t;
    t.node_count = static_cast<int>(parents.size());
    if (t.node_count == 0) throw std::invalid_argument("tree: empty parent array");
    t.parent = parents;
    t.children.assign(t.node_count, {});
    int root = -1;
    for (int v = 0; v < t.node_count; ++v) {
        const int p = parents[v];
        if (p == -1) {
            if (root != -1)
                throw std::invalid_argument("tree: more than one root (nodes " +
                                            std::to_string(root) + " and " +
                                            std::to_string(v) + ")");
            root = v;
        } else if (p < 0 || p >= t.node_count) {
            throw std::invalid_argument("tree: parent of node " + std::to_string(v) +
                                        " out of range");
        } else {
            t.children[p].push_back(v);
        }
    }
    if (root == -1) throw std::invalid_argument("tree: no root node");
    t.root = root;

    t.depth.assign(t.node_count, -1);
    for (int v = 0; v < t.node_count; ++v) {
        int u = v;
        int steps = 0;
        while (u != root) {
            u = parents[u];
            if (++steps >= t.node_count)
                throw std::invalid_argument("tree: cycle through node " + std::to_string(v));
        }
        t.depth[v] = steps;
    }
    return t;
}

std::vector<int> RootedTree::leaves_preorder() const {
    std::vector<int> out;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (is_leaf(v)) {
            out.push_back(v);
            continue;
        }
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

bool RootedTree::is_ancestor_or_self(int a, int b) const {
    if (!valid_node(a) || !valid_node(b)) throw std::invalid_argument("tree: unknown node id");
    while (depth[b] > depth[a]) b = parent[b];
    return a == b;
}

int RootedTree::ancestor_at_depth(int v, int d) const {
    if (!valid_node(v)) throw std::invalid_argument("tree: unknown node id");
    if (d < 0 || d > depth[v])
        throw std::invalid_argument("tree: no ancestor of node " + std::to_string(v) +
                                    " at depth " + std::to_string(d));
    while (depth[v] > d) v = parent[v];
    return v;
}

int lca(const RootedTree& tree, int a, int b) {
    if (!tree.valid_node(a) || !tree.valid_node(b))
        throw std::invalid_argument("lca: unknown node id");
    while (tree.depth[a] > tree.depth[b]) a = tree.parent[a];
    while (tree.depth[b] > tree.depth[a]) b = tree.parent[b];
    while (a != b) {
        a = tree.parent[a];
        b = tree.parent[b];
    }
    return a;
}

std::pair<int, int> lca_down(const RootedTree& tree, int a, int b) {
    if (!tree.valid_node(a) || !tree.valid_node(b))
        throw std::invalid_argument("lca_down: unknown node id");
    if (a == b) throw std::invalid_argument("lca_down: arguments must be distinct");
    const int anc = lca(tree, a, b);
    if (anc == a || anc == b)
        throw std::invalid_argument("lca_down: one argument is an ancestor of the other");
    int ca = a;
    while (tree.parent[ca] != anc) ca = tree.parent[ca];
    int cb = b;
    while (tree.parent[cb] != anc) cb = tree.parent[cb];
    return {ca, cb};
}

} // namespace rmh
