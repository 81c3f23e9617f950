#include <doctest.h>

#include <dh2/cli.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dh2;

namespace {

struct Run {
    int         code = 0;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args)
{
    std::ostringstream o, e;
    Run                r;
    r.code = run_cli(args, o, e);
    r.out  = o.str();
    r.err  = e.str();
    return r;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> f;
    std::stringstream        ss(line);
    std::string              x;
    while (std::getline(ss, x, sep))
        f.push_back(x);
    return f;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> l = split(text, '\n');
    while (!l.empty() && l.back().empty())
        l.pop_back();
    return l;
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "dh2_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("usage errors")
    {
        CHECK(cli({}).code == exit_usage);
        CHECK(cli({"frobnicate"}).code == exit_usage);
        CHECK(cli({"compress", "--eta1", "0"}).code == exit_usage);
        CHECK(cli({"compress", "--eta1", "-1"}).code == exit_usage);
        CHECK(cli({"compress", "--order", "0"}).code == exit_usage);
        CHECK(cli({"compress", "--kappa", "abc"}).code == exit_usage);
        CHECK(cli({"compress", "--norm", "max"}).code == exit_usage);
        CHECK(cli({"mesh", "--shape", "import"}).code == exit_usage);
        CHECK(cli({"bench", "--qs", "1,2", "--kappas", "1"}).code == exit_usage);
        CHECK(cli({"audit", "--q", "8", "--oracle-cap", "10"}).code == exit_usage);
        CHECK(cli({"--help"}).code == exit_ok);
    }

    TEST_CASE("I/O errors")
    {
        CHECK(cli({"mesh", "--shape", "import", "--mesh", "/nonexistent/file.mesh"}).code == exit_io);
        const auto bad = scratch("bad.mesh");
        std::ofstream(bad) << "this is not a mesh\n";
        CHECK(cli({"mesh", "--shape", "import", "--mesh", bad.string()}).code == exit_io);
        CHECK(cli({"compress", "--q", "1", "-o", "/nonexistent/dir/out.csv"}).code == exit_io);
    }

    TEST_CASE("mesh round trip through a file")
    {
        const auto path = scratch("cube2.mesh");
        const Run  w    = cli({"mesh", "--shape", "cube", "--q", "2", "-o", path.string()});
        REQUIRE(w.code == exit_ok);
        CHECK(lines(w.out) == std::vector<std::string>{"48"});
        const Run r = cli({"mesh", "--shape", "import", "--mesh", path.string()});
        REQUIRE(r.code == exit_ok);
        std::ostringstream direct;
        write_mesh(direct, build_cube_mesh(2));
        CHECK(r.out == direct.str());
    }

    TEST_CASE("compress writes one CSV row with the documented columns")
    {
        const Run r = cli({"compress", "--shape", "cube", "--q", "4", "--leaf-size", "8"});
        REQUIRE(r.code == exit_ok);
        const auto l = lines(r.out);
        REQUIRE(l.size() == 2);
        CHECK(l[0] == "n,kappa,basis_kb_orig,matrix_kb_orig,max_rank,basis_kb_rec,matrix_kb_rec,abs_err,rel_err,"
                      "t_assemble_s,t_recompress_s");
        const auto f = split(l[1], ',');
        REQUIRE(f.size() == 11);
        CHECK(std::stoi(f[0]) == 192);
        RunConfig c;
        c.q = 4;
        CHECK(std::stod(f[1]) == doctest::Approx(kappa_from_rule(c, build_cube_mesh(4))));
        CHECK(std::stod(f[8]) <= 1e-4);
        CHECK(std::stod(f[5]) <= std::stod(f[2]));
    }

    TEST_CASE("kappa rule keeps kappa times h fixed")
    {
        RunConfig c;
        const real k4 = kappa_from_rule(c, build_cube_mesh(4));
        const real k8 = kappa_from_rule(c, build_cube_mesh(8));
        CHECK(k8 == doctest::Approx(2.0 * k4));
        CHECK(k4 * build_cube_mesh(4).mesh_width() == doctest::Approx(0.6));
        c.kappa = 3.0;
        CHECK(resolve_kappa(c, build_cube_mesh(4)) == 3.0);
    }

    TEST_CASE("bench emits one row per level")
    {
        const Run r = cli({"bench", "--qs", "2,3", "--kappas", "1.5,2.5", "--leaf-size", "8"});
        REQUIRE(r.code == exit_ok);
        const auto l = lines(r.out);
        REQUIRE(l.size() == 3);
        CHECK(split(l[0], ',').back() == "t_recompress_us_per_dof");
        CHECK(std::stod(split(l[1], ',')[1]) == 1.5);
        CHECK(std::stod(split(l[2], ',')[1]) == 2.5);
        CHECK(std::stoi(split(l[2], ',')[0]) == 108);
    }

    TEST_CASE("dump file lists ranks")
    {
        const auto path = scratch("dump.json");
        std::filesystem::remove(path);
        REQUIRE(cli({"compress", "--q", "6", "--leaf-size", "4", "--kappa", "10", "--eta1", "2", "--dump", path.string()}).code == exit_ok);
        std::ifstream in(path);
        std::string   text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(text.find("\"rank\"") != std::string::npos);
    }

    TEST_CASE("audit passes on a small instance and catches corruption")
    {
        const std::vector<std::string> base{"audit", "--q", "6", "--leaf-size", "4", "--kappa", "10", "--eta1", "2"};
        const Run ok = cli(base);
        CHECK(ok.code == exit_ok);
        CHECK(ok.out.find("FAIL") == std::string::npos);
        CHECK(lines(ok.out).size() == 10);

        auto bad = base;
        bad.push_back("--corrupt-coupling");
        const Run r = cli(bad);
        CHECK(r.code == exit_audit);
        CHECK(r.out.find("FAIL recompression error") != std::string::npos);
    }
}
