#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <dh2/cli.hpp>
#include <dh2/dh2ops.hpp>
#include <dh2/oracles.hpp>
#include <dh2/recompression.hpp>

namespace py = pybind11;
using namespace dh2;

namespace {

using CArray = py::array_t<complex, py::array::c_style | py::array::forcecast>;

Vector to_vector(const CArray& x)
{
    if (x.ndim() != 1)
        throw DimensionMismatch("expected a one-dimensional array");
    Vector v(x.shape(0));
    std::copy(x.data(), x.data() + x.shape(0), v.data());
    return v;
}

CArray to_array(const Vector& v)
{
    CArray out(v.size());
    std::copy(v.data(), v.data() + v.size(), out.mutable_data());
    return out;
}

CArray to_array(const Matrix& m)
{
    CArray out({m.rows(), m.cols()});
    auto   r = out.mutable_unchecked<2>();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            r(i, j) = m(i, j);
    return out;
}

py::array_t<real> vertices(const TriangleMesh& mesh)
{
    py::array_t<real> out({static_cast<py::ssize_t>(mesh.num_vertices()), py::ssize_t{3}});
    auto              r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
        for (int d = 0; d < 3; ++d)
            r(i, d) = mesh.vertex(static_cast<int>(i))[d];
    return out;
}

py::array_t<int> triangles(const TriangleMesh& mesh)
{
    py::array_t<int> out({static_cast<py::ssize_t>(mesh.size()), py::ssize_t{3}});
    auto             r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < mesh.size(); ++i)
        for (int d = 0; d < 3; ++d)
            r(i, d) = mesh.triangle(i)[d];
    return out;
}

TriangleMesh mesh_from_arrays(const py::array_t<real, py::array::c_style | py::array::forcecast>& v,
                              const py::array_t<int, py::array::c_style | py::array::forcecast>&  t)
{
    if (v.ndim() != 2 || v.shape(1) != 3 || t.ndim() != 2 || t.shape(1) != 3)
        throw DimensionMismatch("vertices and triangles must have shape (n, 3)");
    std::vector<Vec3>     vs(v.shape(0));
    std::vector<Triangle> ts(t.shape(0));
    auto                  rv = v.unchecked<2>();
    auto                  rt = t.unchecked<2>();
    for (py::ssize_t i = 0; i < v.shape(0); ++i)
        vs[i] = Vec3(rv(i, 0), rv(i, 1), rv(i, 2));
    for (py::ssize_t i = 0; i < t.shape(0); ++i)
        ts[i] = {rt(i, 0), rt(i, 1), rt(i, 2)};
    return TriangleMesh(std::move(vs), std::move(ts));
}

py::dict storage_dict(const DH2Matrix& a)
{
    const StorageReport r = storage_report(a);
    py::dict            d;
    d["row_basis_bytes"]   = r.row_basis_bytes;
    d["col_basis_bytes"]   = r.col_basis_bytes;
    d["coupling_bytes"]    = r.coupling_bytes;
    d["nearfield_bytes"]   = r.nearfield_bytes;
    d["basis_kb_per_dof"]  = r.basis_kb_per_dof();
    d["matrix_kb_per_dof"] = r.matrix_kb_per_dof();
    d["total_kb_per_dof"]  = r.total_kb_per_dof();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Directional H2 matrices for the Helmholtz boundary integral operators";

    // base first: translators are tried in reverse order of registration
    auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<OpenSurface>(m, "OpenSurface", PyExc_ValueError);
    py::register_exception<InconsistentOrientation>(m, "InconsistentOrientation", PyExc_ValueError);
    py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", PyExc_ValueError);

    py::class_<TriangleMesh>(m, "Mesh")
        .def(py::init(&mesh_from_arrays), py::arg("vertices"), py::arg("triangles"))
        .def_property_readonly("size", &TriangleMesh::size)
        .def("__len__", &TriangleMesh::size)
        .def_property_readonly("vertices", &vertices)
        .def_property_readonly("triangles", &triangles)
        .def("total_area", &TriangleMesh::total_area)
        .def("mesh_width", &TriangleMesh::mesh_width)
        .def("validate_closed", &TriangleMesh::validate_closed)
        .def("save", [](const TriangleMesh& mesh, const std::string& path) { export_mesh(path, mesh); });

    m.def("cube_mesh", &build_cube_mesh, py::arg("q"));
    m.def("sphere_mesh", &build_sphere_mesh, py::arg("q"));
    m.def("load_mesh", [](const std::string& path) { return import_mesh(path); }, py::arg("path"));
    m.def(
        "kappa_from_rule",
        [](const TriangleMesh& mesh, real kappa_h) {
            RunConfig c;
            c.kappa_h = kappa_h;
            return kappa_from_rule(c, mesh);
        },
        py::arg("mesh"), py::arg("kappa_h") = 0.6);

    py::class_<DH2Matrix>(m, "DH2Matrix")
        .def_property_readonly("size", &DH2Matrix::size)
        .def_property_readonly("kappa", &DH2Matrix::kappa)
        .def_property_readonly("shares_bases", &DH2Matrix::shares_bases)
        .def_property_readonly("num_admissible",
                               [](const DH2Matrix& a) { return a.blocks().admissible().size(); })
        .def_property_readonly("num_inadmissible",
                               [](const DH2Matrix& a) { return a.blocks().inadmissible().size(); })
        .def("max_rank", &max_rank)
        .def("storage", &storage_dict)
        .def("matvec", [](const DH2Matrix& a, const CArray& x) { return to_array(matvec(a, to_vector(x))); })
        .def("matvec_adjoint",
             [](const DH2Matrix& a, const CArray& x) { return to_array(matvec_adjoint(a, to_vector(x))); })
        .def(
            "dense",
            [](const DH2Matrix& a, std::size_t cap) {
                OracleContext ctx;
                ctx.dense_cap = cap;
                return to_array(Oracle(a, ctx).dense());
            },
            py::arg("cap") = 4096);

    m.def(
        "assemble",
        [](const TriangleMesh& mesh, real kappa, int order, int leaf_size, real eta1, real eta2,
           const std::string& op, int singular_order, int regular_order) {
            AssemblyOptions o;
            o.order                    = order;
            o.kappa                    = kappa;
            o.op                       = parse_operator(op);
            o.nearfield.singular_order = singular_order;
            o.nearfield.regular_order  = regular_order;
            py::gil_scoped_release release;
            return assemble_dh2(make_structure(mesh, leaf_size, kappa, eta1, eta2), o);
        },
        py::arg("mesh"), py::arg("kappa"), py::arg("order") = 4, py::arg("leaf_size") = 32, py::arg("eta1") = 10.0,
        py::arg("eta2") = 1.0, py::arg("operator") = "slp", py::arg("singular_order") = 5,
        py::arg("regular_order") = 3);

    m.def(
        "assemble_dense",
        [](const TriangleMesh& mesh, real kappa, const std::string& op, std::size_t cap) {
            AssemblyOptions o;
            o.kappa     = kappa;
            o.op        = parse_operator(op);
            o.dense_cap = cap;
            return to_array(assemble_dense(mesh, kappa, o));
        },
        py::arg("mesh"), py::arg("kappa"), py::arg("operator") = "slp", py::arg("cap") = 4096);

    m.def(
        "recompress",
        [](const DH2Matrix& a, real eps, const std::string& norm) {
            TruncationOptions o;
            o.eps  = eps;
            o.mode = parse_norm_mode(norm);
            py::gil_scoped_release release;
            return recompress(a, o);
        },
        py::arg("matrix"), py::arg("eps") = 1e-4, py::arg("norm") = "frobenius");

    m.def(
        "error_frobenius",
        [](const DH2Matrix& a, const DH2Matrix& b) {
            const ErrorPair e = error_frobenius(a, b);
            return py::make_tuple(e.absolute, e.relative);
        },
        py::arg("reference"), py::arg("approximation"));

    m.def(
        "error_spectral",
        [](const DH2Matrix& a, const DH2Matrix& b, int iters, std::uint64_t seed) {
            const ErrorPair e = error_spectral(a, b, iters, seed);
            return py::make_tuple(e.absolute, e.relative);
        },
        py::arg("reference"), py::arg("approximation"), py::arg("iters") = 50, py::arg("seed") = 20240611);
}
