#include <dh2/blocktree.hpp>

#include <algorithm>
#include <string>

namespace dh2 {

bool is_admissible(const BoundingBox& bt, const BoundingBox& bs, real kappa, real eta2)
{
    const real dt   = bt.diameter();
    const real ds   = bs.diameter();
    const real dist = distance(bt, bs);
    const real diam = std::max(dt, ds);

    return diam <= eta2 * dist && kappa * diam * diam <= eta2 * dist;
}

bool satisfies_direction_condition(const BoundingBox& bt, const BoundingBox& bs, const Vec3& c,
                                   real kappa, real eta1)
{
    const Vec3 d    = bt.midpoint() - bs.midpoint();
    const real diam = std::max(bt.diameter(), bs.diameter());
    if (d.norm() == 0.0)
        return false;
    return kappa * (d.normalized() - c).norm() * diam <= eta1;
}

namespace {

const std::vector<int> no_blocks;

void group(std::vector<std::pair<int, std::vector<int>>>& groups, int c, int block)
{
    auto it = std::find_if(groups.begin(), groups.end(), [c](const auto& g) { return g.first == c; });
    if (it == groups.end())
        groups.push_back({c, {block}});
    else
        it->second.push_back(block);
}

const std::vector<int>& lookup(const std::vector<std::pair<int, std::vector<int>>>& groups, int c)
{
    for (const auto& g : groups)
        if (g.first == c)
            return g.second;
    return no_blocks;
}

} // namespace

BlockTree::BlockTree(std::vector<Block> blocks, int num_clusters)
    : blocks_(std::move(blocks)), row_(num_clusters), col_(num_clusters)
{
    for (int id = 0; id < num_blocks(); ++id) {
        auto& b = blocks_[id];
        if (b.kind == BlockKind::admissible) {
            b.leaf_index = static_cast<int>(admissible_.size());
            admissible_.push_back(id);
            group(row_[b.row], b.direction, id);
            group(col_[b.col], b.direction, id);
        }
        else if (b.kind == BlockKind::inadmissible) {
            b.leaf_index = static_cast<int>(inadmissible_.size());
            inadmissible_.push_back(id);
        }
    }
    for (auto* table : {&row_, &col_})
        for (auto& groups : *table)
            std::sort(groups.begin(), groups.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
}

const std::vector<int>& BlockTree::row(int t, int c) const { return lookup(row_.at(t), c); }
const std::vector<int>& BlockTree::col(int s, int c) const { return lookup(col_.at(s), c); }

BlockTree build_block_tree(const ClusterTree& tree, const DirectionFamily& dirs, real kappa, real eta1,
                           real eta2)
{
    if (dirs.num_levels() < tree.depth() + 1)
        throw InvalidParameter("direction family covers " + std::to_string(dirs.num_levels()) +
                               " levels but the cluster tree has " + std::to_string(tree.depth() + 1));
    if (!(eta1 > 0.0) || !(eta2 > 0.0))
        throw InvalidParameter("admissibility parameters must be positive");

    std::vector<Block> blocks;
    blocks.push_back(Block{});

    // breadth first keeps block ids ordered by level
    for (std::size_t id = 0; id < blocks.size(); ++id) {
        const int      t  = blocks[id].row;
        const int      s  = blocks[id].col;
        const Cluster& ct = tree[t];
        const Cluster& cs = tree[s];

        const Vec3 d = ct.box.midpoint() - cs.box.midpoint();
        blocks[id].direction =
            d.norm() > 0.0 ? nearest_direction(dirs, ct.level, d.normalized()) : 0;

        if (is_admissible(ct.box, cs.box, kappa, eta2)) {
            blocks[id].kind = BlockKind::admissible;
            continue;
        }
        if (ct.is_leaf() || cs.is_leaf()) {
            blocks[id].kind = BlockKind::inadmissible;
            continue;
        }
        for (int tc : ct.children)
            for (int sc : cs.children) {
                Block child;
                child.row = tc;
                child.col = sc;
                blocks[id].children.push_back(static_cast<int>(blocks.size()));
                blocks.push_back(std::move(child));
            }
    }

    return BlockTree(std::move(blocks), tree.num_clusters());
}

} // namespace dh2
