#pragma once
//
// Triangle surface meshes carrying one piecewise-constant basis function per
// triangle. The generators produce closed, consistently oriented surfaces with
// outward normals.
//

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <dh2/common.hpp>

namespace dh2 {

using Triangle = std::array<int, 3>;

class TriangleMesh {
public:
    TriangleMesh() = default;

    // Validates index range and positive areas, then derives per-triangle data.
    // Topological checks are separate (see validate_closed()).
    TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t size() const { return triangles_.size(); }
    bool empty() const { return triangles_.empty(); }

    const std::vector<Vec3>&     vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }

    const Vec3& vertex(int i) const { return vertices_[i]; }
    const Triangle& triangle(std::size_t i) const { return triangles_[i]; }

    real area(std::size_t i) const { return area_[i]; }
    const Vec3& normal(std::size_t i) const { return normal_[i]; }
    const Vec3& centroid(std::size_t i) const { return centroid_[i]; }

    real total_area() const;

    // Largest triangle diameter (longest edge), the mesh width h.
    real mesh_width() const;

    // Throws OpenSurface if an undirected edge is not shared by exactly two
    // triangles, InconsistentOrientation if two neighbours traverse their
    // shared edge in the same direction.
    void validate_closed() const;

    // V - E + F
    long euler_characteristic() const;

private:
    std::vector<Vec3>     vertices_;
    std::vector<Triangle> triangles_;
    std::vector<real>     area_;
    std::vector<Vec3>     normal_;
    std::vector<Vec3>     centroid_;
};

// Surface of [0,1]^3, two triangles per face, each refined into q^2 triangles.
TriangleMesh build_cube_mesh(int q);

// Octahedron |x1|+|x2|+|x3| = 1 refined into 8 q^2 triangles, vertices projected
// onto the unit sphere once after refinement.
TriangleMesh build_sphere_mesh(int q);

// Plain text: "nv nt", nv lines "x y z", nt lines "i j k" (0-based).
void write_mesh(std::ostream& out, const TriangleMesh& mesh);
void export_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);

TriangleMesh read_mesh(std::istream& in);
TriangleMesh import_mesh(const std::filesystem::path& path);

} // namespace dh2
