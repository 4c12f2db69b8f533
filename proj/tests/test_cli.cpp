#include "fixtures.hpp"

#include "cli.hpp"
#include "kong/matrix_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace kong;
using namespace kong::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("kong_cli_" + std::to_string(next++)))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
    static inline int next = 0;
};

} // namespace

TEST_CASE("cli: the reference matrix equals the oracle output")
{
    const Outcome via_tfg = run({"matrix", data_path("m1.net"), "--equations", data_path("m1.eq"), "--reduced",
                                 data_path("m2.net")});
    const Outcome oracle = run({"oracle", data_path("m1.net")});
    REQUIRE(via_tfg.code == cli::kOk);
    REQUIRE(oracle.code == cli::kOk);
    CHECK(via_tfg.out == oracle.out);
    CHECK(via_tfg.err.empty());

    TempDir dir;
    write_text_file_atomic(dir / "a.mat", via_tfg.out);
    write_text_file_atomic(dir / "b.mat", oracle.out);
    const Outcome cmp = run({"compare", dir / "a.mat", dir / "b.mat"});
    CHECK(cmp.code == cli::kOk);
    CHECK(cmp.out == "equal\n");
}

TEST_CASE("cli: matrix with a reduced-net relation file and run-length output")
{
    TempDir dir;
    REQUIRE(run({"oracle", data_path("m2.net"), "-o", dir / "m2.mat"}).code == cli::kOk);
    const Outcome r = run({"matrix", data_path("m1.net"), "--equations", data_path("m1.eq"), "--reduced",
                           data_path("m2.net"), "--rel2", dir / "m2.mat", "--rle", "-o", dir / "m1.mat"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.empty());
    const MatrixDocument got = read_matrix(read_text_file(dir / "m1.mat"));
    const MatrixDocument want = read_matrix(run({"oracle", data_path("m1.net")}).out);
    CHECK(got == want);
    CHECK(got.encoding == MatrixEncoding::Rle);
}

TEST_CASE("cli: in-process reduction and the plain oracle agree")
{
    const Outcome reduced = run({"matrix", data_path("m1.net"), "--reduce"});
    const Outcome plain = run({"matrix", data_path("m1.net")});
    REQUIRE(reduced.code == cli::kOk);
    CHECK(reduced.out == plain.out);
    CHECK(run({"matrix", data_path("m1.net"), "--reduce"}).out == reduced.out);
}

TEST_CASE("cli: reduce writes the residual net and its equations")
{
    TempDir dir;
    const Outcome r = run({"reduce", data_path("seq2.net"), "-o", dir.path.string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("ratio: 2/2 (1)") != std::string::npos);
    CHECK(read_text_file(dir / "seq2.eq") == "# A |- a1 = a + b\n# R |- a1 = 1\n");
    CHECK(load_net_file(dir / "seq2.reduced.net").net.place_count() == 0);

    REQUIRE(run({"reduce", data_path("seq2.pnml"), "-o", dir.path.string()}).code == cli::kOk);
    CHECK(fs::exists(dir / "seq2.reduced.pnml"));
    REQUIRE(run({"reduce", data_path("m1.net"), "-o", dir.path.string(), "--format", "pnml"}).code == cli::kOk);
    CHECK(load_net_file(dir / "m1.reduced.pnml").source_format == NetFormat::Pnml);
}

TEST_CASE("cli: check-tfg")
{
    const Outcome ok = run({"check-tfg", data_path("m1.net"), data_path("m2.net"), data_path("m1.eq")});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out == "well-formed: 9 nodes, 3 roots, 4 equations\n");

    const Outcome twice = run({"check-tfg", data_path("m1.net"), data_path("m2.net"), data_path("twice.eq")});
    CHECK(twice.code == cli::kWellFormedness);
    CHECK(twice.err.find("T3") != std::string::npos);
    CHECK(twice.err.find("p5") != std::string::npos);

    // Removed places cannot also be places of the reduced net.
    const Outcome wrong = run({"check-tfg", data_path("m1.net"), data_path("m1.net"), data_path("m1.eq")});
    CHECK(wrong.code == cli::kWellFormedness);
}

TEST_CASE("cli: usage errors")
{
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"matrix"}).code == cli::kUsage);
    CHECK(run({"matrix", data_path("m1.net"), "--equations", data_path("m1.eq")}).code == cli::kUsage);
    CHECK(run({"matrix", data_path("m1.net"), "--rel2", data_path("m1.eq"), "--oracle"}).code == cli::kUsage);
    CHECK(run({"oracle", data_path("m1.net"), "--cap", "0"}).code == cli::kUsage);
    CHECK(run({"oracle", data_path("does-not-exist.net")}).code == cli::kUsage);
    const Outcome help = run({"--help"});
    CHECK(help.code == cli::kOk);
    CHECK(help.out.find("matrix") != std::string::npos);
}

TEST_CASE("cli: parse errors")
{
    TempDir dir;
    write_text_file_atomic(dir / "bad.net", "pl a\ntr t a -> a\n");
    const Outcome r = run({"oracle", dir / "bad.net"});
    CHECK(r.code == cli::kParse);
    CHECK_FALSE(r.err.empty());
    write_text_file_atomic(dir / "bad.mat", "2\na\nb\n1\n0\n");
    CHECK(run({"compare", dir / "bad.mat", dir / "bad.mat"}).code == cli::kParse);
}

TEST_CASE("cli: contradictions exit with 4")
{
    TempDir dir;
    write_text_file_atomic(dir / "a.mat", "2\na\nb\n1\n01\n");
    write_text_file_atomic(dir / "b.mat", "2\na\nb\n1\n11\n");
    write_text_file_atomic(dir / "c.mat", "2\na\nb\n1\n.1\n");
    const Outcome r = run({"compare", dir / "a.mat", dir / "b.mat"});
    CHECK(r.code == cli::kContradiction);
    CHECK(r.out == "contradiction 1\nb a: 0 vs 1\n");
    CHECK(run({"compare", dir / "c.mat", dir / "b.mat"}).out == "compatible 1\n");
}

TEST_CASE("cli: a truncated exploration times out unless partial output is requested")
{
    const Outcome strict = run({"oracle", data_path("m1.net"), "--cap", "1"});
    CHECK(strict.code == cli::kTimeout);
    CHECK(strict.err.find("--partial") != std::string::npos);

    const Outcome partial = run({"oracle", data_path("m1.net"), "--cap", "1", "--partial"});
    REQUIRE(partial.code == cli::kOk);
    const MatrixDocument got = read_matrix(partial.out);
    const MatrixDocument full = read_matrix(run({"oracle", data_path("m1.net")}).out);
    CHECK(compare_matrices(got, full).kind == MatrixComparison::Kind::Compatible);

    const Outcome via_tfg = run({"matrix", data_path("m1.net"), "--equations", data_path("m1.eq"), "--reduced",
                                 data_path("m2.net"), "--cap", "1", "--partial"});
    REQUIRE(via_tfg.code == cli::kOk);
    const MatrixComparison report = compare_matrices(read_matrix(via_tfg.out), full);
    CHECK(report.kind != MatrixComparison::Kind::Contradiction);
}
