#include <dh2/geometry.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace dh2 {

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    const auto nv = static_cast<long>(vertices_.size());

    area_.reserve(triangles_.size());
    normal_.reserve(triangles_.size());
    centroid_.reserve(triangles_.size());

    for (std::size_t i = 0; i < triangles_.size(); ++i) {
        for (int v : triangles_[i])
            if (v < 0 || v >= nv)
                throw IndexOutOfRange("triangle " + std::to_string(i) + " references vertex " +
                                      std::to_string(v) + " but the mesh has " +
                                      std::to_string(nv) + " vertices");

        const Vec3& a = vertices_[triangles_[i][0]];
        const Vec3& b = vertices_[triangles_[i][1]];
        const Vec3& c = vertices_[triangles_[i][2]];
        const Vec3  n = (b - a).cross(c - a);
        const real  len = n.norm();

        if (!(len > 0.0))
            throw InvalidParameter("triangle " + std::to_string(i) + " is degenerate");

        area_.push_back(0.5 * len);
        normal_.push_back(n / len);
        centroid_.push_back((a + b + c) / 3.0);
    }
}

real TriangleMesh::total_area() const
{
    real sum = 0.0;
    for (real a : area_)
        sum += a;
    return sum;
}

real TriangleMesh::mesh_width() const
{
    real h = 0.0;
    for (const auto& tri : triangles_)
        for (int k = 0; k < 3; ++k)
            h = std::max(h, (vertices_[tri[k]] - vertices_[tri[(k + 1) % 3]]).norm());
    return h;
}

namespace {

// directed edge occurrences per undirected edge
std::map<std::pair<int, int>, std::vector<std::pair<int, int>>>
edge_map(const std::vector<Triangle>& triangles)
{
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
    for (const auto& tri : triangles)
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}].emplace_back(a, b);
        }
    return edges;
}

} // namespace

void TriangleMesh::validate_closed() const
{
    for (const auto& [key, uses] : edge_map(triangles_)) {
        if (uses.size() != 2)
            throw OpenSurface("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                              ") is shared by " + std::to_string(uses.size()) + " triangles");
        if (uses[0] == uses[1])
            throw InconsistentOrientation("edge (" + std::to_string(key.first) + "," +
                                          std::to_string(key.second) +
                                          ") is traversed twice in the same direction");
    }
}

long TriangleMesh::euler_characteristic() const
{
    const auto ne = static_cast<long>(edge_map(triangles_).size());
    return static_cast<long>(vertices_.size()) - ne + static_cast<long>(triangles_.size());
}

namespace {

using Lattice = std::array<long, 3>;

// Collects lattice points of regularly refined base triangles and merges
// duplicates by exact integer match.
class LatticeBuilder {
public:
    explicit LatticeBuilder(int q) : q_(q) {}

    // a, b, c are base corners already scaled by q
    void refine(const Lattice& a, const Lattice& b, const Lattice& c)
    {
        auto point = [&](long i, long j) {
            Lattice p;
            for (int d = 0; d < 3; ++d)
                p[d] = a[d] + i * (b[d] - a[d]) / q_ + j * (c[d] - a[d]) / q_;
            return index(p);
        };

        for (long j = 0; j < q_; ++j)
            for (long i = 0; i + j < q_; ++i) {
                triangles_.push_back({point(i, j), point(i + 1, j), point(i, j + 1)});
                if (i + j + 1 < q_)
                    triangles_.push_back({point(i + 1, j), point(i + 1, j + 1), point(i, j + 1)});
            }
    }

    template <typename Map>
    TriangleMesh finish(Map&& to_coordinates)
    {
        std::vector<Vec3> vertices(points_.size());
        for (const auto& [p, id] : points_)
            vertices[id] = to_coordinates(p);
        return TriangleMesh(std::move(vertices), std::move(triangles_));
    }

private:
    int index(const Lattice& p)
    {
        const auto [it, inserted] = points_.try_emplace(p, static_cast<int>(points_.size()));
        return it->second;
    }

    long                   q_;
    std::map<Lattice, int> points_;
    std::vector<Triangle>  triangles_;
};

Lattice scaled(const Lattice& p, long q) { return {p[0] * q, p[1] * q, p[2] * q}; }

// Orders (a,b,c) so that (b-a)x(c-a) points along `outward`.
void orient(Lattice& a, Lattice& b, Lattice& c, const Lattice& outward)
{
    const long u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const long v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const long n[3] = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    if (n[0] * outward[0] + n[1] * outward[1] + n[2] * outward[2] < 0)
        std::swap(b, c);
}

} // namespace

TriangleMesh build_cube_mesh(int q)
{
    if (q < 1)
        throw InvalidParameter("cube refinement q must be >= 1");

    LatticeBuilder builder(q);

    for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
            const int u = (axis + 1) % 3;
            const int v = (axis + 2) % 3;

            Lattice corner[4];
            for (int k = 0; k < 4; ++k) {
                corner[k]       = {0, 0, 0};
                corner[k][axis] = side;
            }
            corner[1][u] = 1;
            corner[2][u] = 1;
            corner[2][v] = 1;
            corner[3][v] = 1;

            Lattice outward = {0, 0, 0};
            outward[axis]   = side == 0 ? -1 : 1;

            Lattice t1[3] = {corner[0], corner[1], corner[2]};
            Lattice t2[3] = {corner[0], corner[2], corner[3]};
            orient(t1[0], t1[1], t1[2], outward);
            orient(t2[0], t2[1], t2[2], outward);

            builder.refine(scaled(t1[0], q), scaled(t1[1], q), scaled(t1[2], q));
            builder.refine(scaled(t2[0], q), scaled(t2[1], q), scaled(t2[2], q));
        }

    return builder.finish([q](const Lattice& p) {
        return Vec3(real(p[0]) / q, real(p[1]) / q, real(p[2]) / q);
    });
}

TriangleMesh build_sphere_mesh(int q)
{
    if (q < 1)
        throw InvalidParameter("sphere refinement q must be >= 1");

    LatticeBuilder builder(q);

    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) {
                Lattice a = {sx, 0, 0};
                Lattice b = {0, sy, 0};
                Lattice c = {0, 0, sz};
                orient(a, b, c, {sx, sy, sz});
                builder.refine(scaled(a, q), scaled(b, q), scaled(c, q));
            }

    return builder.finish([](const Lattice& p) {
        const Vec3 x{static_cast<real>(p[0]), static_cast<real>(p[1]), static_cast<real>(p[2])};
        return Vec3(x / x.norm());
    });
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh)
{
    out << mesh.num_vertices() << ' ' << mesh.size() << '\n';
    out << std::setprecision(std::numeric_limits<real>::max_digits10);
    for (const auto& v : mesh.vertices())
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& t : mesh.triangles())
        out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void export_mesh(const std::filesystem::path& path, const TriangleMesh& mesh)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_mesh(out, mesh);
    if (!out)
        throw IoError("failed writing " + path.string());
}

TriangleMesh read_mesh(std::istream& in)
{
    std::string line;
    auto next_line = [&](const char* what) -> std::istringstream {
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                return std::istringstream(line);
        throw ParseError(std::string("unexpected end of file while reading ") + what);
    };

    long nv = -1, nt = -1;
    {
        auto header = next_line("header");
        if (!(header >> nv >> nt) || nv < 0 || nt < 0)
            throw ParseError("malformed header line '" + line + "'");
    }

    std::vector<Vec3> vertices(nv);
    for (long i = 0; i < nv; ++i) {
        auto row = next_line("vertex");
        if (!(row >> vertices[i][0] >> vertices[i][1] >> vertices[i][2]))
            throw ParseError("malformed vertex line '" + line + "'");
    }

    std::vector<Triangle> triangles(nt);
    for (long i = 0; i < nt; ++i) {
        auto row = next_line("triangle");
        if (!(row >> triangles[i][0] >> triangles[i][1] >> triangles[i][2]))
            throw ParseError("malformed triangle line '" + line + "'");
    }

    TriangleMesh mesh(std::move(vertices), std::move(triangles));
    mesh.validate_closed();
    return mesh;
}

TriangleMesh import_mesh(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    return read_mesh(in);
}

} // namespace dh2
