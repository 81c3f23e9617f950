#include <dh2/directions.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace dh2 {

DirectionFamily::DirectionFamily(std::vector<std::vector<Vec3>> directions, std::vector<std::vector<int>> child_map)
    : directions_(std::move(directions)), child_map_(std::move(child_map))
{
    parent_map_.resize(child_map_.size());
    for (std::size_t l = 0; l < child_map_.size(); ++l) {
        parent_map_[l].resize(directions_.at(l + 1).size());
        for (int p = 0; p < static_cast<int>(child_map_[l].size()); ++p)
            parent_map_[l].at(child_map_[l][p]).push_back(p);
    }
}

int direction_subdivisions(real level_diameter, real kappa, real eta1)
{
    if (kappa * level_diameter <= eta1)
        return 0;
    return static_cast<int>(std::ceil(std::sqrt(2.0) * kappa * level_diameter / eta1));
}

namespace {

std::vector<Vec3> cube_face_directions(int m)
{
    std::vector<Vec3> dirs;
    dirs.reserve(6 * m * m);
    for (int axis = 0; axis < 3; ++axis)
        for (real side : {-1.0, 1.0})
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    Vec3 center;
                    center[axis]           = side;
                    center[(axis + 1) % 3] = -1.0 + (2.0 * i + 1.0) / m;
                    center[(axis + 2) % 3] = -1.0 + (2.0 * j + 1.0) / m;
                    dirs.push_back(center.normalized());
                }
    return dirs;
}

} // namespace

DirectionFamily build_direction_family(const std::vector<real>& level_diameters, real kappa, real eta1)
{
    if (!(eta1 > 0.0))
        throw InvalidParameter("eta1 must be positive");
    if (!(kappa >= 0.0))
        throw InvalidParameter("kappa must be non-negative");
    if (level_diameters.empty())
        throw InvalidParameter("no levels given");

    std::vector<std::vector<Vec3>> dirs;
    for (std::size_t l = 0; l < level_diameters.size(); ++l) {
        if (!(level_diameters[l] > 0.0))
            throw InvalidParameter("level " + std::to_string(l) + " has non-positive diameter");
        const int m = direction_subdivisions(level_diameters[l], kappa, eta1);
        dirs.push_back(m == 0 ? std::vector<Vec3>{Vec3::Zero()} : cube_face_directions(m));
    }

    std::vector<std::vector<int>> child_map(dirs.size() - 1);
    for (std::size_t l = 0; l + 1 < dirs.size(); ++l)
        for (const auto& c : dirs[l])
            child_map[l].push_back(nearest_in(dirs[l + 1], c));

    return DirectionFamily(std::move(dirs), std::move(child_map));
}

int nearest_in(const std::vector<Vec3>& candidates, const Vec3& y)
{
    int  best      = 0;
    real best_dist = std::numeric_limits<real>::infinity();
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        const real d = (y - candidates[i]).squaredNorm();
        if (d < best_dist) {
            best      = i;
            best_dist = d;
        }
    }
    return best;
}

int nearest_direction(const DirectionFamily& family, int level, const Vec3& y)
{
    if (level < 0 || level >= family.num_levels())
        throw InvalidParameter("direction level " + std::to_string(level) + " out of range");
    return nearest_in(family.level(level), y);
}

} // namespace dh2
