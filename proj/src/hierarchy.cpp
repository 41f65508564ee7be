#include "rmh/hierarchy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rmh/errors.hpp"

namespace rmh {

long long HierarchySpec::total_vertices() const {
    long long n = 0;
    for (long long b : block_sizes) n += b;
    return n;
}

int HierarchySpec::motif_index(const std::string& label) const {
    for (std::size_t i = 0; i < motifs.size(); ++i)
        if (motifs[i].label == label) return static_cast<int>(i);
    return -1;
}

HierarchySpec make_hierarchy_spec(RootedTree tree, int motif_level,
                                  std::vector<Motif> motifs,
                                  const std::map<int, int>& motif_map,
                                  std::vector<long long> block_sizes) {
    if (motif_level < 1) throw input_error("hierarchy spec: motif_level must be >= 1");
    for (std::size_t i = 0; i < motifs.size(); ++i) {
        if (motifs[i].leaf_count < 1)
            throw input_error("hierarchy spec: motifs[" + std::to_string(i) +
                              "] has leaf_count < 1");
        for (std::size_t j = 0; j < i; ++j)
            if (motifs[j].label == motifs[i].label)
                throw input_error("hierarchy spec: duplicate motif label \"" +
                                  motifs[i].label + "\"");
    }

    HierarchySpec spec;
    spec.tree = std::move(tree);
    spec.motif_level = motif_level;
    spec.motifs = std::move(motifs);

    const RootedTree& t = spec.tree;
    spec.leaf_order = t.leaves_preorder();
    const int k_star = static_cast<int>(spec.leaf_order.size());

    spec.block_of_leaf.assign(t.node_count, -1);
    for (int b = 0; b < k_star; ++b) spec.block_of_leaf[spec.leaf_order[b]] = b;

    for (int leaf : spec.leaf_order)
        if (t.depth[leaf] < motif_level)
            throw input_error("hierarchy spec: leaf node " + std::to_string(leaf) +
                              " at depth " + std::to_string(t.depth[leaf]) +
                              " is above motif_level " + std::to_string(motif_level));

    spec.motif_of_metablock.assign(t.node_count, -1);
    for (const auto& [node, motif] : motif_map) {
        if (node < 0 || node >= t.node_count)
            throw input_error("hierarchy spec: motif_map node " + std::to_string(node) +
                              " does not exist");
        if (t.depth[node] != motif_level)
            throw input_error("hierarchy spec: motif_map node " + std::to_string(node) +
                              " is not at motif_level");
        if (motif < 0 || motif >= static_cast<int>(spec.motifs.size()))
            throw input_error("hierarchy spec: motif_map node " + std::to_string(node) +
                              " references unknown motif");
        spec.motif_of_metablock[node] = motif;
    }

    // Every metablock must be mapped, and its leaf count must match its motif.
    spec.metablock_of_node.assign(t.node_count, -1);
    std::vector<int> leaves_below(t.node_count, 0);
    for (int v = 0; v < t.node_count; ++v) {
        if (t.depth[v] < motif_level) continue;
        const int mb = t.ancestor_at_depth(v, motif_level);
        spec.metablock_of_node[v] = mb;
        if (t.is_leaf(v)) ++leaves_below[mb];
    }
    spec.motif_leaf_index.assign(t.node_count, -1);
    std::vector<int> seen(t.node_count, 0);
    for (int b = 0; b < k_star; ++b) {
        const int leaf = spec.leaf_order[b];
        const int mb = spec.metablock_of_node[leaf];
        spec.motif_leaf_index[leaf] = seen[mb]++;
    }
    for (int v = 0; v < t.node_count; ++v) {
        if (t.depth[v] != motif_level) continue;
        const int motif = spec.motif_of_metablock[v];
        if (motif < 0)
            throw input_error("hierarchy spec: metablock node " + std::to_string(v) +
                              " missing from motif_map");
        if (leaves_below[v] != spec.motifs[motif].leaf_count)
            throw input_error("hierarchy spec: metablock node " + std::to_string(v) +
                              " has " + std::to_string(leaves_below[v]) +
                              " leaves but motif \"" + spec.motifs[motif].label +
                              "\" declares " + std::to_string(spec.motifs[motif].leaf_count));
    }

    if (static_cast<int>(block_sizes.size()) != k_star)
        throw input_error("hierarchy spec: block_sizes has " +
                          std::to_string(block_sizes.size()) + " entries, expected " +
                          std::to_string(k_star));
    for (int b = 0; b < k_star; ++b)
        if (block_sizes[b] < 1)
            throw input_error("hierarchy spec: block_sizes[" + std::to_string(b) +
                              "] must be >= 1");
    spec.block_sizes = std::move(block_sizes);
    return spec;
}

long long ParameterGroups::cells_total() const {
    long long n = 0;
    for (const auto& g : groups) n += static_cast<long long>(g.cells.size());
    return n;
}

namespace {

// Group keys: (kind, anchor, i, j) with kind 0 = motif-internal cell,
// 1 = motif-pair under one parent at the motif level, 2 = child-pair entry
// of a level matrix strictly above it.
using GroupKey = std::tuple<int, int, int, int>;

GroupKey cell_key(const HierarchySpec& spec, int l, int k) {
    const RootedTree& t = spec.tree;
    const int u = spec.leaf_order[l];
    const int w = spec.leaf_order[k];
    if (u == w) {
        const int mb = spec.metablock_of_node[u];
        const int i = spec.motif_leaf_index[u];
        return {0, spec.motif_of_metablock[mb], i, i};
    }
    const int anc = lca(t, u, w);
    if (t.depth[anc] >= spec.motif_level) {
        const int mb = spec.metablock_of_node[anc];
        int i = spec.motif_leaf_index[u];
        int j = spec.motif_leaf_index[w];
        if (i > j) std::swap(i, j);
        return {0, spec.motif_of_metablock[mb], i, j};
    }
    const auto [cu, cw] = lca_down(t, u, w);
    if (t.depth[anc] == spec.motif_level - 1) {
        int mu = spec.motif_of_metablock[cu];
        int mw = spec.motif_of_metablock[cw];
        if (mu > mw) std::swap(mu, mw);
        return {1, anc, mu, mw};
    }
    int a = cu, b = cw;
    if (a > b) std::swap(a, b);
    return {2, anc, a, b};
}

} // namespace

ParameterGroups build_parameter_groups(const HierarchySpec& spec) {
    const int k_star = spec.k_star();
    ParameterGroups out;
    out.k_star = k_star;
    out.group_of_cell.assign(cell_count(k_star), -1);

    std::map<GroupKey, int> ids;
    for (int l = 0; l < k_star; ++l) {
        for (int k = l; k < k_star; ++k) {
            const GroupKey key = cell_key(spec, l, k);
            auto [it, inserted] = ids.emplace(key, static_cast<int>(out.groups.size()));
            if (inserted) out.groups.push_back({it->second, {}});
            const int cell = cell_id(l, k, k_star);
            out.groups[it->second].cells.push_back(cell);
            out.group_of_cell[cell] = it->second;
        }
    }
    return out;
}

std::vector<std::vector<double>> FlatModel::dense() const {
    std::vector<std::vector<double>> m(k_star, std::vector<double>(k_star, 0.0));
    for (int l = 0; l < k_star; ++l)
        for (int k = l; k < k_star; ++k) m[l][k] = m[k][l] = probs[cell_id(l, k, k_star)];
    return m;
}

namespace {

void check_matrix(const Matrix& m, std::size_t dim, const std::string& what) {
    if (m.size() != dim)
        throw input_error(what + ": expected " + std::to_string(dim) + " rows, got " +
                          std::to_string(m.size()));
    for (std::size_t i = 0; i < dim; ++i) {
        if (m[i].size() != dim)
            throw input_error(what + ": row " + std::to_string(i) + " has " +
                              std::to_string(m[i].size()) + " entries, expected " +
                              std::to_string(dim));
        for (std::size_t j = 0; j < dim; ++j) {
            if (!(m[i][j] >= 0.0 && m[i][j] <= 1.0))
                throw input_error(what + ": entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") outside [0,1]");
            if (m[i][j] != m[j][i])
                throw input_error(what + ": not symmetric at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        }
    }
}

} // namespace

FlatModel flatten_model(const HierarchySpec& spec,
                        const std::map<int, Matrix>& level_matrices,
                        const std::map<std::string, Matrix>& motif_matrices) {
    const RootedTree& t = spec.tree;
    const int k_star = spec.k_star();

    for (const auto& motif : spec.motifs) {
        auto it = motif_matrices.find(motif.label);
        if (it == motif_matrices.end())
            throw input_error("flatten: missing matrix for motif \"" + motif.label + "\"");
        check_matrix(it->second, static_cast<std::size_t>(motif.leaf_count),
                     "motif matrix \"" + motif.label + "\"");
    }
    // Child position within its parent, for indexing the level matrices.
    std::vector<int> child_pos(t.node_count, -1);
    for (int v = 0; v < t.node_count; ++v)
        for (std::size_t i = 0; i < t.children[v].size(); ++i)
            child_pos[t.children[v][i]] = static_cast<int>(i);
    for (int v = 0; v < t.node_count; ++v) {
        if (t.is_leaf(v) || t.depth[v] >= spec.motif_level) continue;
        auto it = level_matrices.find(v);
        if (it == level_matrices.end())
            throw input_error("flatten: missing level matrix for node " + std::to_string(v));
        check_matrix(it->second, t.children[v].size(),
                     "level matrix at node " + std::to_string(v));
    }

    FlatModel model;
    model.k_star = k_star;
    model.block_sizes = spec.block_sizes;
    model.probs.assign(cell_count(k_star), 0.0);
    for (int l = 0; l < k_star; ++l) {
        for (int k = l; k < k_star; ++k) {
            const int u = spec.leaf_order[l];
            const int w = spec.leaf_order[k];
            double p;
            if (u == w) {
                const int mb = spec.metablock_of_node[u];
                const auto& m =
                    motif_matrices.at(spec.motifs[spec.motif_of_metablock[mb]].label);
                const int i = spec.motif_leaf_index[u];
                p = m[i][i];
            } else {
                const int anc = lca(t, u, w);
                if (t.depth[anc] >= spec.motif_level) {
                    const int mb = spec.metablock_of_node[anc];
                    const auto& m =
                        motif_matrices.at(spec.motifs[spec.motif_of_metablock[mb]].label);
                    p = m[spec.motif_leaf_index[u]][spec.motif_leaf_index[w]];
                } else {
                    const auto [cu, cw] = lca_down(t, u, w);
                    const auto& m = level_matrices.at(anc);
                    p = m[child_pos[cu]][child_pos[cw]];
                }
            }
            model.probs[cell_id(l, k, k_star)] = p;
        }
    }
    return model;
}

Membership membership_from_block_sizes(const std::vector<long long>& block_sizes) {
    Membership tau;
    for (std::size_t b = 0; b < block_sizes.size(); ++b)
        tau.insert(tau.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<int>(b));
    return tau;
}

bool check_compatibility(const Membership& tau, const HierarchySpec& spec) {
    const long long n = spec.total_vertices();
    if (static_cast<long long>(tau.size()) != n) return false;
    const int k_star = spec.k_star();

    // Canonical block of each vertex, then require a bijection between the
    // canonical labels and tau's labels over identical level sets.
    std::vector<int> canon_to_tau(k_star, -1);
    std::vector<int> tau_to_canon(k_star, -1);
    long long v = 0;
    for (int b = 0; b < k_star; ++b) {
        for (long long i = 0; i < spec.block_sizes[b]; ++i, ++v) {
            const int label = tau[static_cast<std::size_t>(v)];
            if (label < 0 || label >= k_star) return false;
            if (canon_to_tau[b] == -1 && tau_to_canon[label] == -1) {
                canon_to_tau[b] = label;
                tau_to_canon[label] = b;
            } else if (canon_to_tau[b] != label || tau_to_canon[label] != b) {
                return false;
            }
        }
    }
    return true;
}

} // namespace rmh
