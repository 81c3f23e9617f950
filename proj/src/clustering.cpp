#include <dh2/clustering.hpp>

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

namespace dh2 {

bool BoundingBox::contains(const Vec3& x, real tol) const
{
    for (int d = 0; d < 3; ++d)
        if (x[d] < min[d] - tol || x[d] > max[d] + tol)
            return false;
    return true;
}

BoundingBox BoundingBox::of_triangles(const TriangleMesh& mesh, std::span<const int> triangles)
{
    BoundingBox box;
    box.min = Vec3::Constant(std::numeric_limits<real>::infinity());
    box.max = -box.min;
    for (int i : triangles)
        for (int v : mesh.triangle(i)) {
            box.min = box.min.cwiseMin(mesh.vertex(v));
            box.max = box.max.cwiseMax(mesh.vertex(v));
        }
    return box;
}

real distance(const BoundingBox& a, const BoundingBox& b)
{
    Vec3 gap;
    for (int d = 0; d < 3; ++d)
        gap[d] = std::max({0.0, a.min[d] - b.max[d], b.min[d] - a.max[d]});
    return gap.norm();
}

ClusterTree::ClusterTree(std::vector<Cluster> clusters, std::vector<int> permutation)
    : clusters_(std::move(clusters)), permutation_(std::move(permutation))
{
    for (int id = 0; id < num_clusters(); ++id) {
        const int l = clusters_[id].level;
        if (l >= static_cast<int>(levels_.size()))
            levels_.resize(l + 1);
        levels_[l].push_back(id);
    }
}

ClusterTree build_cluster_tree(const TriangleMesh& mesh, int leaf_size)
{
    if (mesh.empty())
        throw InvalidParameter("cannot cluster an empty mesh");
    if (leaf_size < 1)
        throw InvalidParameter("leaf size must be >= 1");

    const int        n = static_cast<int>(mesh.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<Cluster> clusters;
    clusters.reserve(2 * (n / leaf_size + 1));

    Cluster root;
    root.begin = 0;
    root.end   = n;
    root.box   = BoundingBox::of_triangles(mesh, perm);
    clusters.push_back(root);

    // breadth-first so that ids are sorted by level
    std::deque<int> pending{0};
    while (!pending.empty()) {
        const int id = pending.front();
        pending.pop_front();

        const Cluster c = clusters[id];
        if (c.size() <= leaf_size)
            continue;

        int   axis   = 0;
        Vec3  extent = c.box.extent();
        extent.maxCoeff(&axis);

        auto first = perm.begin() + c.begin;
        auto last  = perm.begin() + c.end;
        std::stable_sort(first, last, [&](int a, int b) {
            return mesh.centroid(a)[axis] < mesh.centroid(b)[axis];
        });

        const int split = c.begin + (c.size() + 1) / 2;
        for (auto [b, e] : {std::pair{c.begin, split}, std::pair{split, c.end}}) {
            Cluster child;
            child.begin  = b;
            child.end    = e;
            child.level  = c.level + 1;
            child.parent = id;
            child.box    = BoundingBox::of_triangles(
                mesh, std::span<const int>(perm.data() + b, static_cast<std::size_t>(e - b)));
            clusters[id].children.push_back(static_cast<int>(clusters.size()));
            pending.push_back(static_cast<int>(clusters.size()));
            clusters.push_back(std::move(child));
        }
    }

    return ClusterTree(std::move(clusters), std::move(perm));
}

real level_max_diameter(const ClusterTree& tree, int level)
{
    if (level < 0 || level > tree.depth())
        throw InvalidParameter("level " + std::to_string(level) + " outside [0," +
                               std::to_string(tree.depth()) + "]");
    real d = 0.0;
    for (int id : tree.level(level))
        d = std::max(d, tree[id].box.diameter());
    return d;
}

std::vector<real> level_max_diameters(const ClusterTree& tree)
{
    std::vector<real> d(tree.depth() + 1);
    for (int l = 0; l <= tree.depth(); ++l)
        d[l] = level_max_diameter(tree, l);
    return d;
}

} // namespace dh2
