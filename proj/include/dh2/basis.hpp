#pragma once
//
// Directional cluster bases. A basis stores one node per materialized
// (cluster, direction) pair: leaves keep their explicit #t x k matrix, every
// node keeps the transfer matrices into its children's nodes (t_i, sd_t(c)), so
// that V_tc restricted to t_i equals V_{t_i sd(c)} * transfer[i].
//

#include <vector>

#include <dh2/clustering.hpp>
#include <dh2/common.hpp>
#include <dh2/directions.hpp>

namespace dh2 {

struct BasisNode {
    int                 cluster   = 0;
    int                 direction = 0;
    int                 rank      = 0;
    Matrix              leaf;        // leaves only: #t x rank
    std::vector<int>    children;    // node ids of (t_i, sd(c)), in cluster child order
    std::vector<Matrix> transfer;    // rank(children[i]) x rank
};

class ClusterBasis {
public:
    ClusterBasis() = default;

    // Creates empty nodes for every (t, c) with active[t][c] set. Activity must
    // be closed under sd: an active non-leaf node requires its child nodes.
    ClusterBasis(const ClusterTree& tree, const DirectionFamily& dirs, const std::vector<std::vector<char>>& active);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }

    const BasisNode& node(int id) const { return nodes_[id]; }
    BasisNode&       node(int id) { return nodes_[id]; }

    // node id of (t, c), or -1 when not materialized
    int find(int cluster, int direction) const { return slot_.at(cluster).at(direction); }
    int at(int cluster, int direction) const;

    // node ids per cluster level, ascending
    const std::vector<int>& level_nodes(int level) const { return level_nodes_.at(level); }
    int                     num_levels() const { return static_cast<int>(level_nodes_.size()); }

    // parent node ids (t+, c+) with sd(c+) = c for the node of (t, c)
    const std::vector<int>& parents(int id) const { return parents_.at(id); }

    int  max_rank() const;
    bool orthogonal() const { return orthogonal_; }
    void set_orthogonal(bool v) { orthogonal_ = v; }

    // coefficients of leaf and transfer matrices
    std::size_t coefficient_count() const;

private:
    std::vector<BasisNode>        nodes_;
    std::vector<std::vector<int>> slot_;
    std::vector<std::vector<int>> level_nodes_;
    std::vector<std::vector<int>> parents_;
    bool                          orthogonal_ = false;
};

// Dense #t x rank matrix of a node, expanded through the transfer matrices.
Matrix expand(const ClusterBasis& basis, const ClusterTree& tree, int node);

} // namespace dh2
