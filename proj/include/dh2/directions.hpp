#pragma once

#include <vector>

#include <dh2/common.hpp>

namespace dh2 {

// Per-level direction sets and the parent-to-child direction maps.
//
// Level l holds either the single zero vector (low-frequency levels) or 6 m^2
// unit vectors obtained by projecting the centers of an m x m subdivision of
// each face of the cube [-1,1]^3 onto the unit sphere.
class DirectionFamily {
public:
    DirectionFamily() = default;
    DirectionFamily(std::vector<std::vector<Vec3>> directions, std::vector<std::vector<int>> child_map);

    int num_levels() const { return static_cast<int>(directions_.size()); }

    const std::vector<Vec3>& level(int l) const { return directions_.at(l); }
    const Vec3& direction(int l, int c) const { return directions_.at(l).at(c); }
    int size(int l) const { return static_cast<int>(directions_.at(l).size()); }

    bool is_low_frequency(int l) const { return size(l) == 1 && direction(l, 0).isZero(); }

    // sd_l: index in level l+1 of the direction best approximating direction c of level l
    int child_direction(int l, int c) const { return child_map_.at(l).at(c); }

    // directions of level l that are mapped onto child direction c of level l+1
    const std::vector<int>& parent_directions(int l, int c) const { return parent_map_.at(l).at(c); }

private:
    std::vector<std::vector<Vec3>> directions_;
    std::vector<std::vector<int>>  child_map_;
    std::vector<std::vector<std::vector<int>>> parent_map_;
};

// Subdivision parameter for a level; 0 means the level is low-frequency.
int direction_subdivisions(real level_diameter, real kappa, real eta1);

DirectionFamily build_direction_family(const std::vector<real>& level_diameters, real kappa, real eta1);

// Index of the direction in `candidates` closest to y; ties go to the lowest index.
int nearest_in(const std::vector<Vec3>& candidates, const Vec3& y);

int nearest_direction(const DirectionFamily& family, int level, const Vec3& y);

} // namespace dh2
