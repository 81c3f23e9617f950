#include <dh2/basis.hpp>

#include <algorithm>
#include <string>

namespace dh2 {

ClusterBasis::ClusterBasis(const ClusterTree& tree, const DirectionFamily& dirs,
                           const std::vector<std::vector<char>>& active)
    : slot_(tree.num_clusters()), level_nodes_(tree.depth() + 1)
{
    // cluster ids are level ordered, so nodes end up level ordered as well
    for (int t = 0; t < tree.num_clusters(); ++t) {
        const int l = tree[t].level;
        slot_[t].assign(dirs.size(l), -1);
        for (int c = 0; c < dirs.size(l); ++c)
            if (active.at(t).at(c)) {
                slot_[t][c] = static_cast<int>(nodes_.size());
                level_nodes_[l].push_back(slot_[t][c]);
                BasisNode n;
                n.cluster   = t;
                n.direction = c;
                nodes_.push_back(std::move(n));
            }
    }

    parents_.resize(nodes_.size());
    for (auto& n : nodes_) {
        const auto& cl = tree[n.cluster];
        if (cl.is_leaf())
            continue;
        const int cc = dirs.child_direction(cl.level, n.direction);
        for (int child : cl.children) {
            const int id = slot_[child][cc];
            if (id < 0)
                throw TraversalError("active node (" + std::to_string(n.cluster) + "," +
                                     std::to_string(n.direction) + ") lacks child node");
            n.children.push_back(id);
        }
    }
    for (int id = 0; id < num_nodes(); ++id)
        for (int child : nodes_[id].children)
            parents_[child].push_back(id);
}

int ClusterBasis::at(int cluster, int direction) const
{
    const int id = find(cluster, direction);
    if (id < 0)
        throw TraversalError("basis has no node for cluster " + std::to_string(cluster) + ", direction " +
                             std::to_string(direction));
    return id;
}

int ClusterBasis::max_rank() const
{
    int k = 0;
    for (const auto& n : nodes_)
        k = std::max(k, n.rank);
    return k;
}

std::size_t ClusterBasis::coefficient_count() const
{
    std::size_t count = 0;
    for (const auto& n : nodes_) {
        count += static_cast<std::size_t>(n.leaf.size());
        for (const auto& e : n.transfer)
            count += static_cast<std::size_t>(e.size());
    }
    return count;
}

Matrix expand(const ClusterBasis& basis, const ClusterTree& tree, int id)
{
    const BasisNode& n  = basis.node(id);
    const Cluster&   cl = tree[n.cluster];
    if (cl.is_leaf())
        return n.leaf;

    Matrix result(cl.size(), n.rank);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        const Cluster& child = tree[cl.children[i]];
        result.middleRows(child.begin - cl.begin, child.size()) = expand(basis, tree, n.children[i]) * n.transfer[i];
    }
    return result;
}

} // namespace dh2
