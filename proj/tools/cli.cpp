#include "cli.hpp"

#include "kong/concurrency.hpp"
#include "kong/matrix_io.hpp"
#include "kong/net_formats.hpp"
#include "kong/reduction.hpp"
#include "kong/tfg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>

namespace kong::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string net1;
    std::string net2;
    std::string equations;
    std::string rel2_file;
    std::string output;
    std::string format;
    std::string matrix_a;
    std::string matrix_b;
    bool oracle = false;
    bool partial = false;
    bool rle = false;
    bool reduce = false;
    double timeout = 60.0;
    std::size_t cap = 1'000'000;
};

// Exploration stopped before covering the state space.
struct Timeout {
    std::string what;
};

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DuplicateRemoval:
    case ErrorCode::WellFormedness:
    case ErrorCode::NotSafe:
    case ErrorCode::IncompleteRootRelation:
    case ErrorCode::UnknownNode:
        return kWellFormedness;
    default:
        return kParse;
    }
}

ExploreLimits limits_of(const Options& o)
{
    ExploreLimits limits;
    limits.max_states = o.cap;
    limits.budget = std::chrono::milliseconds(static_cast<std::int64_t>(o.timeout * 1000.0));
    return limits;
}

void emit(const Options& o, std::ostream& out, const std::string& text)
{
    if (o.output.empty())
        out << text;
    else
        write_text_file_atomic(o.output, text);
}

MatrixDocument document_for(const PetriNet& net, ConcurrencyMatrix matrix, const Options& o)
{
    return {net.place_names(), std::move(matrix), o.rle ? MatrixEncoding::Rle : MatrixEncoding::Plain};
}

ConcurrencyMatrix oracle_or_timeout(const NetDocument& doc, const Options& o, const std::string& label)
{
    const ReachabilitySet states = explore_reachable(doc.net, doc.initial, limits_of(o));
    if (states.truncated() && !o.partial)
        throw Timeout{"state space of " + label + " not covered within the limits (" + std::to_string(states.size()) +
                      " markings); rerun with --partial for a sound partial matrix"};
    return oracle_matrix(states);
}

int cmd_reduce(const Options& o, std::ostream& out)
{
    const NetDocument doc = load_net_file(o.net1);
    const ReductionResult result = reduce_net(doc);
    NetFormat format = doc.source_format;
    if (o.format == "pnml") format = NetFormat::Pnml;
    if (o.format == "text") format = NetFormat::Textual;

    const fs::path dir(o.output);
    fs::create_directories(dir);
    const std::string stem = fs::path(o.net1).stem().string();
    const fs::path net_path = dir / (stem + (format == NetFormat::Pnml ? ".reduced.pnml" : ".reduced.net"));
    const fs::path eq_path = dir / (stem + ".eq");
    write_text_file_atomic(net_path,
                           format == NetFormat::Pnml ? write_pnml(result.residual) : write_net_text(result.residual));
    write_text_file_atomic(eq_path, write_equation_system(result.equations));
    out << "reduced net: " << net_path.string() << "\n"
        << "equations: " << eq_path.string() << "\n"
        << "ratio: " << result.ratio.removed << "/" << result.ratio.total << " (" << result.ratio.value() << ")\n";
    return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out)
{
    const NetDocument doc = load_net_file(o.net1);
    emit(o, out, write_matrix(document_for(doc.net, oracle_or_timeout(doc, o, o.net1), o)));
    return kOk;
}

int cmd_matrix(const Options& o, std::ostream& out, std::ostream& err)
{
    const NetDocument n1 = load_net_file(o.net1);
    std::optional<EquationSystem> eqs;
    std::optional<NetDocument> n2;
    if (o.reduce) {
        ReductionResult r = reduce_net(n1);
        eqs = std::move(r.equations);
        n2 = std::move(r.residual);
    } else if (!o.equations.empty()) {
        eqs = parse_equation_system(read_text_file(o.equations));
        n2 = load_net_file(o.net2);
    }
    if (!eqs) return cmd_oracle(o, out);

    const auto p1 = n1.net.place_names();
    const auto p2 = n2->net.place_names();
    const TokenFlowGraph tfg = build_tfg(*eqs, p1, p2);
    for (const std::string& w : tfg.warnings())
        err << "warning: " << w << "\n";

    RootRelation rel2 = [&] {
        if (!o.rel2_file.empty()) {
            const MatrixDocument m2 = read_matrix(read_text_file(o.rel2_file));
            return RootRelation::from_reduced(tfg, m2.matrix, m2.order);
        }
        return RootRelation::from_reduced(tfg, oracle_or_timeout(*n2, o, "the reduced net"), p2);
    }();

    const ConcurrencyMatrix full = o.partial ? matrix_partial(tfg, rel2) : matrix_complete(tfg, rel2);
    emit(o, out, write_matrix(document_for(n1.net, initial_places_view(tfg, full), o)));
    return kOk;
}

int cmd_compare(const Options& o, std::ostream& out)
{
    const MatrixDocument a = read_matrix(read_text_file(o.matrix_a));
    const MatrixDocument b = read_matrix(read_text_file(o.matrix_b));
    const MatrixComparison report = compare_matrices(a, b);
    out << to_string(report.kind);
    if (report.kind == MatrixComparison::Kind::Compatible) out << " " << report.resolved;
    if (report.kind == MatrixComparison::Kind::Contradiction) out << " " << report.conflicts.size();
    out << "\n";
    for (const auto& [row, col] : report.conflicts)
        out << a.order[row] << " " << a.order[col] << ": " << to_symbol(a.matrix.at(row, col)) << " vs "
            << to_symbol(b.matrix.at(row, col)) << "\n";
    return report.kind == MatrixComparison::Kind::Contradiction ? kContradiction : kOk;
}

int cmd_check_tfg(const Options& o, std::ostream& out, std::ostream& err)
{
    const NetDocument n1 = load_net_file(o.net1);
    const NetDocument n2 = load_net_file(o.net2);
    const EquationSystem eqs = parse_equation_system(read_text_file(o.equations));
    const auto p1 = n1.net.place_names();
    const auto p2 = n2.net.place_names();
    const TokenFlowGraph tfg = build_tfg(eqs, p1, p2);
    for (const std::string& w : tfg.warnings())
        err << "warning: " << w << "\n";
    out << "well-formed: " << tfg.node_count() << " nodes, " << tfg.roots().size() << " roots, "
        << tfg.equations().size() << " equations\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Concurrency relation of safe Petri nets through structural reductions", "kong"};
    app.require_subcommand(1);

    auto add_limits = [&o](CLI::App* cmd) {
        cmd->add_option("--timeout", o.timeout, "Exploration budget in seconds")->check(CLI::PositiveNumber);
        cmd->add_option("--cap", o.cap, "Maximum number of explored markings")->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
        cmd->add_flag("--partial", o.partial, "Output undecided cells instead of failing on a timeout");
        cmd->add_flag("--rle", o.rle, "Run-length encode matrix rows");
        cmd->add_option("-o,--output", o.output, "Output file (standard output by default)");
    };

    auto* reduce = app.add_subcommand("reduce", "Reduce a net and write the residual net and its equations");
    reduce->add_option("net", o.net1, "Input net (PNML or text)")->required()->check(CLI::ExistingFile);
    reduce->add_option("-o,--output", o.output, "Output directory")->required();
    reduce->add_option("--format", o.format, "Residual net format")->check(CLI::IsMember({"pnml", "text"}));

    auto* matrix = app.add_subcommand("matrix", "Concurrency matrix of a net through its reduction");
    matrix->add_option("net", o.net1, "Initial net")->required()->check(CLI::ExistingFile);
    auto* eq_opt = matrix->add_option("--equations", o.equations, "Reduction equations")->check(CLI::ExistingFile);
    auto* red_opt = matrix->add_option("--reduced", o.net2, "Reduced net")->check(CLI::ExistingFile);
    eq_opt->needs(red_opt);
    red_opt->needs(eq_opt);
    auto* rel2_opt = matrix->add_option("--rel2", o.rel2_file, "Concurrency matrix of the reduced net")
                         ->check(CLI::ExistingFile);
    auto* oracle_flag = matrix->add_flag("--oracle", o.oracle, "Explore the reduced net for its relation (default)");
    rel2_opt->excludes(oracle_flag);
    auto* reduce_flag = matrix->add_flag("--reduce", o.reduce, "Reduce the initial net in-process");
    reduce_flag->excludes(eq_opt);
    reduce_flag->excludes(rel2_opt);
    add_limits(matrix);

    auto* oracle = app.add_subcommand("oracle", "Concurrency matrix by exhaustive exploration");
    oracle->add_option("net", o.net1, "Input net")->required()->check(CLI::ExistingFile);
    add_limits(oracle);

    auto* compare = app.add_subcommand("compare", "Compare two concurrency matrices");
    compare->add_option("first", o.matrix_a, "Matrix file")->required()->check(CLI::ExistingFile);
    compare->add_option("second", o.matrix_b, "Matrix file")->required()->check(CLI::ExistingFile);

    auto* check = app.add_subcommand("check-tfg", "Check that equations yield a well-formed token flow graph");
    check->add_option("net1", o.net1, "Initial net")->required()->check(CLI::ExistingFile);
    check->add_option("net2", o.net2, "Reduced net")->required()->check(CLI::ExistingFile);
    check->add_option("equations", o.equations, "Reduction equations")->required()->check(CLI::ExistingFile);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*reduce) return cmd_reduce(o, out);
        if (*matrix) return cmd_matrix(o, out, err);
        if (*oracle) return cmd_oracle(o, out);
        if (*compare) return cmd_compare(o, out);
        if (*check) return cmd_check_tfg(o, out, err);
    } catch (const Timeout& t) {
        err << "kong: timeout: " << t.what << "\n";
        return kTimeout;
    } catch (const Error& e) {
        err << "kong: " << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "kong: " << e.what() << "\n";
        return kParse;
    }
    return kUsage;
}

} // namespace kong::cli
