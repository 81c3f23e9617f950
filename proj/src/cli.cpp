#include <dh2/cli.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <dh2/audit.hpp>
#include <dh2/dh2ops.hpp>
#include <dh2/oracles.hpp>
#include <dh2/recompression.hpp>

namespace dh2 {

void validate(const RunConfig& c)
{
    if (!(c.eta1 > 0.0) || !(c.eta2 > 0.0))
        throw InvalidParameter("eta1 and eta2 must be positive");
    if (c.order < 1)
        throw InvalidParameter("order must be >= 1");
    if (c.leaf_size < 1)
        throw InvalidParameter("leaf size must be >= 1");
    if (!(c.eps >= 0.0))
        throw InvalidParameter("eps must be non-negative");
    if (c.kappa && !(*c.kappa >= 0.0))
        throw InvalidParameter("kappa must be non-negative");
    if (!(c.kappa_h > 0.0))
        throw InvalidParameter("kappa-h must be positive");
    if (c.shape != "cube" && c.shape != "sphere" && c.shape != "import")
        throw InvalidParameter("unknown shape '" + c.shape + "'");
    if (c.shape == "import" && c.mesh_path.empty())
        throw InvalidParameter("import needs --mesh");
    if (c.threads < 1)
        throw InvalidParameter("threads must be >= 1");
}

TriangleMesh make_mesh(const RunConfig& c)
{
    if (c.shape == "cube")
        return build_cube_mesh(c.q);
    if (c.shape == "sphere")
        return build_sphere_mesh(c.q);
    return import_mesh(c.mesh_path);
}

real kappa_from_rule(const RunConfig& c, const TriangleMesh& mesh) { return c.kappa_h / mesh.mesh_width(); }

real resolve_kappa(const RunConfig& c, const TriangleMesh& mesh)
{
    return c.kappa ? *c.kappa : kappa_from_rule(c, mesh);
}

namespace {

using clock_type = std::chrono::steady_clock;

real seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<real>(clock_type::now() - t0).count();
}

void apply_threads(int threads)
{
#ifdef _OPENMP
    omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

AssemblyOptions assembly_options(const RunConfig& c, real kappa)
{
    AssemblyOptions o;
    o.order                    = c.order;
    o.kappa                    = kappa;
    o.op                       = c.op;
    o.basis_quad_order         = c.basis_quad_order;
    o.nearfield.singular_order = c.singular_order;
    o.nearfield.regular_order  = c.regular_order;
    return o;
}

struct Pipeline {
    DH2Matrix           original;
    RecompressionResult rec;
    real                t_assemble   = 0.0;
    real                t_recompress = 0.0;
};

Pipeline run_pipeline(const RunConfig& c, TriangleMesh mesh)
{
    validate(c);
    apply_threads(c.threads);
    const real kappa = resolve_kappa(c, mesh);

    Pipeline p;
    auto     t0    = clock_type::now();
    auto     st    = make_structure(std::move(mesh), c.leaf_size, kappa, c.eta1, c.eta2);
    p.original     = assemble_dh2(st, assembly_options(c, kappa));
    p.t_assemble   = seconds_since(t0);
    t0             = clock_type::now();
    p.rec          = recompress_detailed(p.original, {c.eps, c.mode, false});
    p.t_recompress = seconds_since(t0);
    return p;
}

void write_dump(const std::string& path, const Pipeline& p)
{
    nlohmann::json j;
    const auto&    a = p.rec.matrix;
    j["n"]           = a.size();
    j["kappa"]       = a.kappa();
    for (const auto* side : {&a.row_basis(), &a.col_basis()}) {
        nlohmann::json levels = nlohmann::json::array();
        for (int l = 0; l < side->num_levels(); ++l) {
            nlohmann::json ranks = nlohmann::json::array();
            for (int id : side->level_nodes(l))
                ranks.push_back({{"cluster", side->node(id).cluster},
                                 {"direction", side->node(id).direction},
                                 {"rank", side->node(id).rank}});
            levels.push_back(ranks);
        }
        j[side == &a.row_basis() ? "row_ranks" : "col_ranks"] = levels;
    }
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open dump file '" + path + "'");
    f << j.dump(1) << '\n';
    if (!f)
        throw IoError("failed writing dump file '" + path + "'");
}

CompressRow make_row(const RunConfig& c, const Pipeline& p)
{
    const StorageReport so = storage_report(p.original);
    const StorageReport sr = storage_report(p.rec.matrix);
    CompressRow         r;
    r.n              = p.original.size();
    r.kappa          = p.original.kappa();
    r.basis_kb_orig  = so.basis_kb_per_dof();
    r.matrix_kb_orig = so.matrix_kb_per_dof();
    r.max_rank       = max_rank(p.rec.matrix);
    r.basis_kb_rec   = sr.basis_kb_per_dof();
    r.matrix_kb_rec  = sr.matrix_kb_per_dof();
    const ErrorPair e = c.mode == NormMode::frobenius
                            ? error_frobenius(p.original, p.rec.matrix)
                            : error_spectral(p.original, p.rec.matrix, c.power_iters, c.seed);
    r.abs_err        = e.absolute;
    r.rel_err        = e.relative;
    r.t_assemble_s   = p.t_assemble;
    r.t_recompress_s = p.t_recompress;
    return r;
}

} // namespace

CompressRow run_compress(const RunConfig& c)
{
    validate(c);
    const Pipeline p = run_pipeline(c, make_mesh(c));
    if (!c.dump.empty())
        write_dump(c.dump, p);
    return make_row(c, p);
}

std::string csv_header(bool bench)
{
    std::string h = "n,kappa,basis_kb_orig,matrix_kb_orig,max_rank,basis_kb_rec,matrix_kb_rec,abs_err,rel_err,"
                    "t_assemble_s,t_recompress_s";
    if (bench)
        h += ",t_recompress_us_per_dof";
    return h;
}

std::string csv_row(const CompressRow& r, bool bench)
{
    std::ostringstream s;
    s << r.n << ',' << std::setprecision(6) << r.kappa << ',' << std::fixed << std::setprecision(3)
      << r.basis_kb_orig << ',' << r.matrix_kb_orig << ',' << r.max_rank << ',' << r.basis_kb_rec << ','
      << r.matrix_kb_rec << ',' << std::scientific << std::setprecision(3) << r.abs_err << ',' << r.rel_err << ','
      << std::fixed << std::setprecision(3) << r.t_assemble_s << ',' << r.t_recompress_s;
    if (bench)
        s << ',' << std::setprecision(3) << 1e6 * r.t_recompress_s / r.n;
    return s.str();
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------


std::vector<AuditCheck> run_audit(const RunConfig& c)
{
    validate(c);
    apply_threads(c.threads);
    TriangleMesh mesh = make_mesh(c);
    if (mesh.size() > c.oracle_cap)
        throw CapExceeded("audit on " + std::to_string(mesh.size()) + " triangles exceeds the oracle cap of " +
                          std::to_string(c.oracle_cap));

    Pipeline p = run_pipeline(c, std::move(mesh));
    if (c.corrupt_coupling && !p.rec.matrix.couplings().empty()) {
        auto& s = p.rec.matrix.couplings();
        auto  it = std::max_element(s.begin(), s.end(), [](const Matrix& x, const Matrix& y) { return x.norm() < y.norm(); });
        *it *= 2.0;
    }

    const Structure&        st = p.original.structure();
    std::vector<AuditCheck> out;
    out.push_back(make_check("block tree partition", partition_residual(st), 0.0));
    out.push_back(make_check("direction coverage", coverage_ratio(st, c.seed, 1000), 1.0));
    out.push_back(make_check("admissibility of leaves", admissibility_violations(st), 0.0));

    const Oracle original(p.original, {c.oracle_cap});
    out.push_back(make_check("weight oracle (row)", weight_oracle_residual(p.original, Side::row, original), 1e-10));
    out.push_back(make_check("weight oracle (column)", weight_oracle_residual(p.original, Side::col, original), 1e-10));

    const auto& rec = p.rec.matrix;
    const auto  qr  = expand_all(rec.row_basis(), rec.tree());
    const auto  qc  = expand_all(rec.col_basis(), rec.tree());
    out.push_back(make_check("orthogonality", std::max(orthogonality_residual(rec.row_basis(), qr),
                                                  orthogonality_residual(rec.col_basis(), qc)),
                        1e-10));
    out.push_back(make_check("nestedness", std::max(nestedness_residual(rec.row_basis(), rec.tree(), qr),
                                               nestedness_residual(rec.col_basis(), rec.tree(), qc)),
                        1e-10));
    out.push_back(make_check("basis change", std::max(basis_change_residual(p.original.row_basis(), p.rec.row, rec.tree()),
                                                 basis_change_residual(p.original.col_basis(), p.rec.col, rec.tree())),
                        1e-10));

    const Oracle recomp(rec, {c.oracle_cap});
    std::mt19937_64                rng(c.seed);
    std::normal_distribution<real> normal;
    const Matrix                   dense = recomp.dense();
    real                           mv    = 0.0;
    for (int k = 0; k < 3; ++k) {
        Vector x(rec.size());
        for (auto& v : x)
            v = complex(normal(rng), normal(rng));
        const Vector y = dense * x;
        mv             = std::max(mv, (matvec(rec, x) - y).norm() / y.norm());
    }
    out.push_back(make_check("matvec vs dense", mv, 1e-12));

    const ErrorPair e = c.mode == NormMode::frobenius ? error_frobenius(p.original, rec)
                                                      : error_spectral(p.original, rec, c.power_iters, c.seed);
    out.push_back(make_check("recompression error", e.relative, c.eps));
    return out;
}

// ---------------------------------------------------------------------------
// argument parsing
// ---------------------------------------------------------------------------

namespace {

void add_common(CLI::App* cmd, RunConfig& c, std::string& kappa_text, std::string& mode_text, std::string& op_text)
{
    cmd->add_option("--shape", c.shape, "cube, sphere or import")->check(CLI::IsMember({"cube", "sphere", "import"}));
    cmd->add_option("--mesh", c.mesh_path, "mesh file for --shape import");
    cmd->add_option("--q", c.q, "refinement level");
    cmd->add_option("--kappa", kappa_text, "wave number (default: kappa-h rule)");
    cmd->add_option("--kappa-h", c.kappa_h, "target kappa times mesh width");
    cmd->add_option("--eta1", c.eta1, "directional admissibility parameter");
    cmd->add_option("--eta2", c.eta2, "standard and parabolic admissibility parameter");
    cmd->add_option("--order", c.order, "interpolation points per axis");
    cmd->add_option("--leaf-size", c.leaf_size, "largest leaf cluster");
    cmd->add_option("--eps", c.eps, "truncation tolerance");
    cmd->add_option("--norm", mode_text, "frobenius or spectral")->check(CLI::IsMember({"frobenius", "spectral"}));
    cmd->add_option("--operator", op_text, "slp or dlp")->check(CLI::IsMember({"slp", "dlp"}));
    cmd->add_option("--singular-order", c.singular_order, "Gauss order for touching triangle pairs");
    cmd->add_option("--regular-order", c.regular_order, "Gauss order for separated nearfield pairs");
    cmd->add_option("--basis-quad-order", c.basis_quad_order, "triangle rule order for leaf bases");
    cmd->add_option("--seed", c.seed, "seed for sampled checks and power iteration");
    cmd->add_option("--threads", c.threads, "OpenMP threads");
    cmd->add_option("--power-iters", c.power_iters, "power iteration steps for spectral errors");
    cmd->add_option("--oracle-cap", c.oracle_cap, "largest n for dense audit checks");
    cmd->add_option("--output,-o", c.output, "output file (default stdout)");
}

void finish_config(RunConfig& c, const std::string& kappa_text, const std::string& mode_text, const std::string& op_text)
{
    if (!kappa_text.empty()) {
        try {
            c.kappa = std::stod(kappa_text);
        }
        catch (const std::exception&) {
            throw InvalidParameter("invalid --kappa '" + kappa_text + "'");
        }
    }
    if (!mode_text.empty())
        c.mode = parse_norm_mode(mode_text);
    if (!op_text.empty())
        c.op = parse_operator(op_text);
}

// Writes to the configured output file, or to `out` when none is given.
template <typename F>
void emit(const RunConfig& c, std::ostream& out, F&& body)
{
    if (c.output.empty()) {
        body(out);
        return;
    }
    std::ofstream f(c.output);
    if (!f)
        throw IoError("cannot open output file '" + c.output + "'");
    body(f);
    if (!f)
        throw IoError("failed writing '" + c.output + "'");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Directional H2-matrix compression for Helmholtz boundary element matrices", "dh2"};
    app.require_subcommand(1);

    RunConfig   c;
    std::string kappa_text, mode_text, op_text;

    auto* mesh_cmd = app.add_subcommand("mesh", "write a generated or imported mesh");
    add_common(mesh_cmd, c, kappa_text, mode_text, op_text);

    auto* compress_cmd = app.add_subcommand("compress", "assemble, recompress and report one CSV row");
    add_common(compress_cmd, c, kappa_text, mode_text, op_text);
    compress_cmd->add_option("--dump", c.dump, "JSON summary of the recompressed ranks");

    auto* bench_cmd = app.add_subcommand("bench", "run compress over several refinement levels");
    add_common(bench_cmd, c, kappa_text, mode_text, op_text);
    bench_cmd->add_option("--qs", c.qs, "refinement levels")->required()->delimiter(',');
    bench_cmd->add_option("--kappas", c.kappas, "wave numbers, one per q")->delimiter(',');

    auto* audit_cmd = app.add_subcommand("audit", "run the invariant checks on a small instance");
    add_common(audit_cmd, c, kappa_text, mode_text, op_text);
    audit_cmd->add_flag("--corrupt-coupling", c.corrupt_coupling, "test hook: perturb one coupling matrix");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        finish_config(c, kappa_text, mode_text, op_text);
        validate(c);

        if (mesh_cmd->parsed()) {
            const TriangleMesh mesh = make_mesh(c);
            if (c.output.empty())
                write_mesh(out, mesh);
            else {
                export_mesh(c.output, mesh);
                out << mesh.size() << '\n';
            }
            return exit_ok;
        }
        if (compress_cmd->parsed()) {
            const CompressRow row = run_compress(c);
            emit(c, out, [&](std::ostream& s) { s << csv_header() << '\n' << csv_row(row) << '\n'; });
            return exit_ok;
        }
        if (bench_cmd->parsed()) {
            if (!c.kappas.empty() && c.kappas.size() != c.qs.size())
                throw InvalidParameter("--kappas needs one value per q");
            std::vector<CompressRow> rows;
            for (std::size_t i = 0; i < c.qs.size(); ++i) {
                RunConfig ci = c;
                ci.q         = c.qs[i];
                ci.dump.clear();
                if (!c.kappas.empty())
                    ci.kappa = c.kappas[i];
                rows.push_back(run_compress(ci));
            }
            emit(c, out, [&](std::ostream& s) {
                s << csv_header(true) << '\n';
                for (const auto& r : rows)
                    s << csv_row(r, true) << '\n';
            });
            return exit_ok;
        }
        if (audit_cmd->parsed()) {
            const auto checks = run_audit(c);
            bool       ok     = true;
            emit(c, out, [&](std::ostream& s) {
                for (const auto& k : checks) {
                    s << (k.pass ? "PASS " : "FAIL ") << k.name << " residual=" << std::scientific
                      << std::setprecision(3) << k.residual << " tol=" << k.tolerance << '\n';
                    ok = ok && k.pass;
                }
            });
            return ok ? exit_ok : exit_audit;
        }
    }
    catch (const IoError& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_io;
    }
    catch (const ParseError& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_io;
    }
    catch (const OpenSurface& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_io;
    }
    catch (const InconsistentOrientation& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_io;
    }
    catch (const IndexOutOfRange& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_io;
    }
    catch (const InvalidParameter& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const CapExceeded& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const Error& e) {
        err << "dh2: " << e.what() << '\n';
        return exit_audit;
    }
    return exit_usage;
}

} // namespace dh2
