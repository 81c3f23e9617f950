#pragma once

#include <vector>

#include <dh2/clustering.hpp>
#include <dh2/directions.hpp>

namespace dh2 {

enum class BlockKind { internal, admissible, inadmissible };

struct Block {
    int              row       = 0;  // cluster t
    int              col       = 0;  // cluster s
    int              direction = 0;  // index into the direction set of level(t)
    BlockKind        kind      = BlockKind::internal;
    std::vector<int> children;
    int              leaf_index = -1; // position in admissible() or inadmissible()
};

// Standard and parabolic admissibility; the directional condition is enforced
// by the direction family's coverage property.
bool is_admissible(const BoundingBox& bt, const BoundingBox& bs, real kappa, real eta2);

// Directional admissibility of an assigned direction c.
bool satisfies_direction_condition(const BoundingBox& bt, const BoundingBox& bs, const Vec3& c,
                                   real kappa, real eta1);

class BlockTree {
public:
    BlockTree() = default;
    BlockTree(std::vector<Block> blocks, int num_clusters);

    const Block& operator[](int id) const { return blocks_[id]; }
    const Block& root() const { return blocks_.front(); }
    int          num_blocks() const { return static_cast<int>(blocks_.size()); }

    // block ids of the leaves
    const std::vector<int>& admissible() const { return admissible_; }
    const std::vector<int>& inadmissible() const { return inadmissible_; }

    // admissible leaf ids (t, s, c) for fixed t, grouped by c
    const std::vector<std::pair<int, std::vector<int>>>& row(int t) const { return row_[t]; }
    // admissible leaf ids (t, s, c) for fixed s, grouped by c
    const std::vector<std::pair<int, std::vector<int>>>& col(int s) const { return col_[s]; }

    // admissible leaves (t, s, c) with fixed t and c; empty if none
    const std::vector<int>& row(int t, int c) const;
    const std::vector<int>& col(int s, int c) const;

private:
    std::vector<Block>                                          blocks_;
    std::vector<int>                                            admissible_;
    std::vector<int>                                            inadmissible_;
    std::vector<std::vector<std::pair<int, std::vector<int>>>> row_;
    std::vector<std::vector<std::pair<int, std::vector<int>>>> col_;
};

BlockTree build_block_tree(const ClusterTree& tree, const DirectionFamily& dirs, real kappa, real eta1,
                           real eta2);

} // namespace dh2
