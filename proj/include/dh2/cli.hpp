#pragma once
//
// Command line front end: configuration, pipeline drivers and CSV output.
//

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <dh2/audit.hpp>
#include <dh2/geometry.hpp>
#include <dh2/kernels.hpp>
#include <dh2/quadrature.hpp>

namespace dh2 {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_audit = 2, exit_io = 3 };

struct RunConfig {
    std::string         shape = "cube"; // cube | sphere | import
    std::string         mesh_path;      // for import
    int                 q = 4;
    std::optional<real> kappa;          // explicit value overrides the kappa-h rule
    real                kappa_h   = 0.6;
    real                eta1      = 10.0;
    real                eta2      = 1.0;
    int                 order     = 4;
    int                 leaf_size = 32;
    real                eps       = 1e-4;
    NormMode            mode      = NormMode::frobenius;
    Operator            op        = Operator::single_layer;
    int                 singular_order   = 5;
    int                 regular_order    = 3;
    int                 basis_quad_order = 8;
    std::uint64_t       seed             = 20240611;
    int                 threads          = 1;
    int                 power_iters      = 50;
    std::size_t         oracle_cap       = 1000;
    std::string         output;           // empty: stdout
    std::string         dump;             // optional JSON summary of the recompressed matrix
    std::vector<int>    qs;               // bench
    std::vector<real>   kappas;           // bench, optional, one per q
    bool                corrupt_coupling = false; // audit test hook
};

void validate(const RunConfig& config);

TriangleMesh make_mesh(const RunConfig& config);

// kappa such that kappa * h equals config.kappa_h, h the largest edge length
real kappa_from_rule(const RunConfig& config, const TriangleMesh& mesh);
real resolve_kappa(const RunConfig& config, const TriangleMesh& mesh);

struct CompressRow {
    int         n              = 0;
    real        kappa          = 0.0;
    real        basis_kb_orig  = 0.0;
    real        matrix_kb_orig = 0.0;
    int         max_rank       = 0;
    real        basis_kb_rec   = 0.0;
    real        matrix_kb_rec  = 0.0;
    real        abs_err        = 0.0;
    real        rel_err        = 0.0;
    real        t_assemble_s   = 0.0;
    real        t_recompress_s = 0.0;
};

std::string csv_header(bool bench = false);
std::string csv_row(const CompressRow& row, bool bench = false);

CompressRow run_compress(const RunConfig& config);

std::vector<AuditCheck> run_audit(const RunConfig& config);

// Parses the arguments (without the program name) and runs a subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dh2
