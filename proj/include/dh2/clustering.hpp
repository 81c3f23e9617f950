#pragma once

#include <span>
#include <vector>

#include <dh2/common.hpp>
#include <dh2/geometry.hpp>

namespace dh2 {

struct BoundingBox {
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();

    Vec3 midpoint() const { return 0.5 * (min + max); }
    Vec3 extent() const { return max - min; }
    real diameter() const { return (max - min).norm(); }
    bool contains(const Vec3& x, real tol = 0.0) const;

    static BoundingBox of_triangles(const TriangleMesh& mesh, std::span<const int> triangles);
};

// Euclidean norm of the per-axis gaps.
real distance(const BoundingBox& a, const BoundingBox& b);

struct Cluster {
    int              begin  = 0;   // range into ClusterTree::permutation()
    int              end    = 0;
    int              level  = 0;
    int              parent = -1;
    std::vector<int> children;
    BoundingBox      box;

    int  size() const { return end - begin; }
    bool is_leaf() const { return children.empty(); }
};

// Binary cluster tree over triangle indices. Cluster ids are assigned level by
// level (breadth first), so id order is the canonical (level, construction) order.
class ClusterTree {
public:
    ClusterTree() = default;
    ClusterTree(std::vector<Cluster> clusters, std::vector<int> permutation);

    const Cluster& operator[](int id) const { return clusters_[id]; }
    const Cluster& root() const { return clusters_.front(); }
    int            num_clusters() const { return static_cast<int>(clusters_.size()); }
    int            depth() const { return static_cast<int>(levels_.size()) - 1; }
    int            num_indices() const { return static_cast<int>(permutation_.size()); }

    const std::vector<int>& level(int l) const { return levels_.at(l); }
    const std::vector<int>& permutation() const { return permutation_; }

    // triangle indices of a cluster
    std::span<const int> indices(int id) const
    {
        const auto& c = clusters_[id];
        return {permutation_.data() + c.begin, static_cast<std::size_t>(c.size())};
    }

private:
    std::vector<Cluster>          clusters_;
    std::vector<int>              permutation_;
    std::vector<std::vector<int>> levels_;
};

ClusterTree build_cluster_tree(const TriangleMesh& mesh, int leaf_size);

// Largest box diameter among the clusters of one level.
real level_max_diameter(const ClusterTree& tree, int level);

std::vector<real> level_max_diameters(const ClusterTree& tree);

} // namespace dh2
