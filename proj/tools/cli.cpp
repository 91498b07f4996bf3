#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "rrqr/diagnostics.hpp"
#include "rrqr/format.hpp"
#include "rrqr/genmat.hpp"
#include "rrqr/mmio.hpp"
#include "rrqr/qrcp.hpp"
#include "rrqr/report.hpp"
#include "rrqr/sweep.hpp"

namespace rrqr::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parse_double(const std::string& text, const std::string& what)
{
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw UsageError("cannot parse " + what + " '" + text + "'");
    return v;
}

// Writes to a temporary sibling first and renames, so a partially written
// artifact never appears under the final name.
void write_file(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        os << content;
        if (!os)
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

template <class Writer>
std::string render(Writer&& w)
{
    std::ostringstream os;
    w(os);
    return os.str();
}

void emit_json(const RunConfig& cfg, const json& summary, std::ostream& out)
{
    const std::string text = summary.dump(2) + "\n";
    if (cfg.json.empty())
        out << text;
    else
        write_file(cfg.json, text);
}

Precision precision_of(const RunConfig& cfg)
{
    try {
        return parse_precision(cfg.precision);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// Calls f(Matrix<T>) with the file's field and the requested working precision.
template <class F>
int with_working_type(const AnyMatrix& any, Precision prec, F&& f)
{
    return std::visit(
        [&](const auto& M) -> int {
            using Src = typename std::decay_t<decltype(M)>::value_type;
            if constexpr (is_complex_v<Src>) {
                if (prec == Precision::Single)
                    return f(convert<std::complex<float>>(M));
                return f(M);
            } else {
                if (prec == Precision::Single)
                    return f(convert<float>(M));
                return f(M);
            }
        },
        any);
}

template <Scalar T>
void check_strategy(const StrategyConfig& s)
{
    try {
        s.validate<real_t<T>>();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::size_t count_decisions(std::span<const DowndateEvent> events, Decision d)
{
    std::size_t c = 0;
    for (const auto& e : events)
        c += e.decision == d;
    return c;
}

template <Scalar T>
std::string tau_csv(std::span<const T> taus)
{
    std::ostringstream os;
    os << "k,tau_re,tau_im\n";
    for (std::size_t k = 0; k < taus.size(); ++k)
        os << k << ',' << format_real(real_part(taus[k])) << ','
           << format_real(imag_part(taus[k])) << '\n';
    return os.str();
}

std::vector<std::size_t> read_perm_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::string line;
    std::getline(is, line);
    std::vector<std::size_t> perm;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        std::size_t v = 0;
        const char* first = line.data() + comma + 1;
        const auto [ptr, ec] = std::from_chars(first, line.data() + line.size(), v);
        if (comma == std::string::npos || ec != std::errc{})
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed permutation row");
        perm.push_back(v);
    }
    return perm;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.output.empty())
        throw UsageError("gen: --output is required");
    if (cfg.n == 0)
        throw UsageError("gen: --n must be positive");
    json summary;
    summary["command"] = "gen";
    summary["config"] = to_json(cfg);
    if (cfg.kind == "kahan" || cfg.kind == "symkahan") {
        const double c = parse_double(cfg.c_text, "c");
        const KahanParams p{cfg.n, c};
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        const auto A = cfg.kind == "kahan" ? kahan<double>(p) : symmetrized_kahan<double>(p);
        write_matrix_market(std::filesystem::path(cfg.output), A);
        summary["c"] = format_real(c);
        summary["rows"] = A.rows();
        summary["cols"] = A.cols();
    } else if (cfg.kind == "random") {
        const std::size_t m = cfg.m ? cfg.m : cfg.n;
        if (cfg.field == "complex")
            write_matrix_market(std::filesystem::path(cfg.output),
                                random_gaussian<std::complex<double>>(m, cfg.n, cfg.seed));
        else if (cfg.field == "real")
            write_matrix_market(std::filesystem::path(cfg.output),
                                random_gaussian<double>(m, cfg.n, cfg.seed));
        else
            throw UsageError("gen: --field must be real or complex");
        summary["rows"] = m;
        summary["cols"] = cfg.n;
        summary["generator"] = "gaussian-v1 (mt19937_64 + Box-Muller)";
    } else {
        throw UsageError("gen: unknown matrix kind '" + cfg.kind + "'");
    }
    summary["output"] = cfg.output;
    emit_json(cfg, summary, out);
    return kOk;
}

int cmd_factor(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.input.empty() || cfg.prefix.empty())
        throw UsageError("factor: --input and --prefix are required");
    const Precision prec = precision_of(cfg);
    const StrategyConfig strat = build_strategy(cfg.first);
    const AnyMatrix any = read_matrix_market(std::filesystem::path(cfg.input));
    return with_working_type(any, prec, [&]<Scalar T>(const Matrix<T>& A) {
        check_strategy<T>(strat);
        const auto res = factorize(A, strat);
        const Matrix<T> R = extract_r(res);
        const std::string p = cfg.prefix;
        write_file(p + ".R.mtx", render([&](std::ostream& os) { write_matrix_market(os, R); }));
        write_file(p + ".factors.mtx",
                   render([&](std::ostream& os) { write_matrix_market(os, res.factors); }));
        write_file(p + ".perm.csv", render([&](std::ostream& os) { write_perm_csv(os, res.perm); }));
        write_file(p + ".tau.csv", tau_csv<T>(res.taus));
        write_file(p + ".events.csv",
                   render([&](std::ostream& os) { write_events_csv(os, res.tracker.events); }));

        const auto metrics = residual_metrics(A, res);
        const auto rep = check_structure(R, cfg.slack, cfg.tau);
        json summary;
        summary["command"] = "factor";
        summary["config"] = to_json(cfg);
        summary["resolved_strategy"] = rrqr::to_json<real_t<T>>(strat);
        summary["field"] = is_complex_v<T> ? "complex" : "real";
        summary["rows"] = A.rows();
        summary["cols"] = A.cols();
        summary["residual_rel"] = metrics.residual_rel;
        summary["ortho"] = metrics.ortho;
        summary["recomputes"] = count_decisions(res.tracker.events, Decision::ExplicitRecompute);
        summary["downdates"] = count_decisions(res.tracker.events, Decision::Downdate);
        summary["flushes"] = count_decisions(res.tracker.events, Decision::FlushZero);
        summary["structure"] = rrqr::to_json(rep);
        summary["artifacts"] = {p + ".R.mtx", p + ".factors.mtx", p + ".perm.csv", p + ".tau.csv",
                                p + ".events.csv"};
        emit_json(cfg, summary, out);
        err << "factor: " << A.rows() << "x" << A.cols() << " " << to_string(strat.kind)
            << ", structure " << (rep.ok() ? "ok" : "VIOLATED") << "\n";
        return kOk;
    });
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.input.empty())
        throw UsageError("check: --input is required");
    const Precision prec = precision_of(cfg);
    const AnyMatrix any = read_matrix_market(std::filesystem::path(cfg.input));
    return with_working_type(any, prec, [&]<Scalar T>(const Matrix<T>& R) {
        StructureReport rep;
        try {
            rep = check_structure(R, cfg.slack, cfg.tau);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (!cfg.csv.empty())
            write_file(cfg.csv, render([&](std::ostream& os) { write_profile_csv(os, rep); }));
        json summary;
        summary["command"] = "check";
        summary["config"] = to_json(cfg);
        summary["structure"] = rrqr::to_json(rep);
        emit_json(cfg, summary, out);
        if (rep.ok()) {
            err << "check: structure ok (" << rep.red_line.size() << " diagonal entries)\n";
            return kOk;
        }
        err << "check: structure VIOLATED, " << rep.violations.size()
            << " violation(s), worst monotone ratio " << rep.worst_monotone_ratio
            << ", worst dominance ratio " << rep.worst_dominance_ratio << "\n";
        return kCheckFailed;
    });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.n == 0)
        throw UsageError("sweep: --n must be positive");
    SweepSpec spec;
    try {
        spec.family = parse_family(cfg.family);
        spec.precision = parse_precision(cfg.precision);
        if (!cfg.c_list.empty()) {
            for (const auto& c : cfg.c_list)
                spec.c_values.push_back(parse_double(c, "c"));
        } else {
            spec.c_values = c_grid(cfg.c_from, cfg.c_to, cfg.c_step);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    for (double c : spec.c_values)
        if (!(c >= 0.0 && c < 1.0))
            throw UsageError("sweep: c values must lie in [0, 1)");
    spec.n = cfg.n;
    spec.slack = cfg.slack;
    StrategyFlags base = cfg.first;
    base.grids.clear();
    spec.strategy = build_strategy(base);
    if (!cfg.first.grids.empty()) {
        spec.topologies.clear();
        for (const auto& g : cfg.first.grids)
            spec.topologies.push_back(GridTopology::parse(g, cfg.first.mb, cfg.first.nb));
    }
    if (spec.precision == Precision::Single)
        check_strategy<float>(spec.strategy);
    else
        check_strategy<double>(spec.strategy);

    const auto cases = run_sweep(spec);
    const std::string table = render([&](std::ostream& os) { write_sweep_csv(os, cases); });
    std::size_t failures = 0;
    for (const auto& sc : cases)
        failures += !sc.ok;

    json summary;
    summary["command"] = "sweep";
    summary["config"] = to_json(cfg);
    summary["resolved_strategy"] = spec.precision == Precision::Single
                                       ? rrqr::to_json<float>(spec.strategy)
                                       : rrqr::to_json<double>(spec.strategy);
    summary["cases"] = cases.size();
    summary["failures"] = failures;
    auto failed = json::array();
    for (const auto& sc : cases)
        if (!sc.ok)
            failed.push_back({{"c", format_real(sc.c)},
                              {"grid", sc.topology ? json(sc.topology->to_string()) : json("seq")}});
    summary["failed_cases"] = failed;

    if (cfg.csv.empty()) {
        out << table;
        if (!cfg.json.empty())
            write_file(cfg.json, summary.dump(2) + "\n");
    } else {
        write_file(cfg.csv, table);
        emit_json(cfg, summary, out);
    }
    err << "sweep: " << cases.size() << " case(s), " << failures << " structure failure(s)\n";
    return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.input.empty())
        throw UsageError("compare: --input is required");
    const Precision prec = precision_of(cfg);
    StrategyFlags second = cfg.first;
    if (cfg.second_strategy_given)
        second.strategy = cfg.second.strategy;
    if (cfg.second_tol_given)
        second.tol = cfg.second.tol;
    if (cfg.second_inject_given)
        second.inject = cfg.second.inject;
    if (cfg.second_grid_given) {
        second.grids = cfg.second.grids;
        second.mb = cfg.second.mb;
        second.nb = cfg.second.nb;
    }
    const StrategyConfig sa = build_strategy(cfg.first);
    const StrategyConfig sb = build_strategy(second);
    const AnyMatrix any = read_matrix_market(std::filesystem::path(cfg.input));
    return with_working_type(any, prec, [&]<Scalar T>(const Matrix<T>& A) {
        check_strategy<T>(sa);
        check_strategy<T>(sb);
        const auto ra = factorize(A, sa);
        const auto rb = factorize(A, sb);
        const auto d = compare_pivots(ra, rb, A);
        const auto rep_a = check_structure(extract_r(ra), cfg.slack, cfg.tau);
        const auto rep_b = check_structure(extract_r(rb), cfg.slack, cfg.tau);
        if (!cfg.csv.empty())
            write_file(cfg.csv, render([&](std::ostream& os) {
                           os << "k,perm_a,perm_b\n";
                           for (std::size_t k = 0; k < ra.perm.size(); ++k)
                               os << k << ',' << ra.perm[k] << ',' << rb.perm[k] << '\n';
                       }));
        json summary;
        summary["command"] = "compare";
        summary["config"] = to_json(cfg);
        summary["strategy_a"] = rrqr::to_json<real_t<T>>(sa);
        summary["strategy_b"] = rrqr::to_json<real_t<T>>(sb);
        summary["divergence"] = rrqr::to_json(d);
        summary["structure_a"] = rrqr::to_json(rep_a, 10);
        summary["structure_b"] = rrqr::to_json(rep_b, 10);
        emit_json(cfg, summary, out);
        if (d.diverged)
            err << "compare: pivots diverge at step " << d.step << " (columns " << d.column_a
                << " vs " << d.column_b << ", relative norm gap " << d.relative_gap << ")\n";
        else
            err << "compare: no divergence\n";
        return kOk;
    });
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.prefix.empty())
        throw UsageError("report: --prefix is required");
    const Precision prec = precision_of(cfg);
    const AnyMatrix any = read_matrix_market(std::filesystem::path(cfg.prefix + ".R.mtx"));
    const auto perm = read_perm_csv(cfg.prefix + ".perm.csv");
    return with_working_type(any, prec, [&]<Scalar T>(const Matrix<T>& R) {
        if (perm.size() != R.cols())
            throw std::runtime_error("report: permutation length does not match R");
        const auto rep = check_structure(R, cfg.slack, cfg.tau);
        const double limit = 1.0 + rep.slack;
        const std::size_t p = rep.red_line.size();
        const auto ratio = [](double num, double den) {
            return detail::safe_ratio(detail::resolved<T>(num), detail::resolved<T>(den));
        };
        std::vector<char> mono_bad(p, 0), dom_bad(p, 0);
        for (std::size_t i = 0; i < p; ++i) {
            if (i + 1 < p && ratio(rep.red_line[i + 1], rep.red_line[i]) > limit)
                mono_bad[i] = 1;
            if (ratio(rep.blue_line[i], rep.red_line[i]) > limit)
                dom_bad[i] = 1;
        }
        const std::string path = cfg.csv.empty() ? cfg.prefix + ".profile.csv" : cfg.csv;
        write_file(path, render([&](std::ostream& os) {
                       os << "i,perm,red,blue,monotone_ok,dominance_ok\n";
                       for (std::size_t i = 0; i < rep.red_line.size(); ++i)
                           os << i << ',' << perm[i] << ',' << format_real(rep.red_line[i]) << ','
                              << format_real(rep.blue_line[i]) << ',' << (mono_bad[i] ? 0 : 1)
                              << ',' << (dom_bad[i] ? 0 : 1) << '\n';
                   }));
        json summary;
        summary["command"] = "report";
        summary["config"] = to_json(cfg);
        summary["profile_csv"] = path;
        summary["structure"] = rrqr::to_json(rep);
        emit_json(cfg, summary, out);
        err << "report: wrote " << path << "\n";
        return kOk;
    });
}

void add_strategy_flags(CLI::App* sub, StrategyFlags& f, bool multi_grid)
{
    sub->add_option("--strategy", f.strategy, "classic | robust | exact")
        ->check(CLI::IsMember({"classic", "robust", "exact"}));
    sub->add_option("--tol", f.tol, "robust switch threshold (default sqrt(eps))");
    sub->add_option("--inject", f.inject, "excess-control | wrong-column[:offset]");
    if (multi_grid)
        sub->add_option("--grid", f.grids, "process grid RxC (repeatable)");
    else
        sub->add_option("--grid", f.grids, "process grid RxC")->expected(1);
    sub->add_option("--mb", f.mb, "row block size")->check(CLI::PositiveNumber);
    sub->add_option("--nb", f.nb, "column block size")->check(CLI::PositiveNumber);
}

void add_check_flags(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--precision", cfg.precision, "single | double")
        ->check(CLI::IsMember({"single", "double"}));
    sub->add_option("--slack", cfg.slack, "structure slack (default 100*n*eps)");
    sub->add_option("--tau", cfg.tau, "numerical rank threshold (default n*eps)");
    sub->add_option("--json", cfg.json, "summary JSON path (default stdout)");
}

} // namespace

Injections parse_injections(const std::vector<std::string>& specs)
{
    Injections inj;
    for (const auto& s : specs) {
        if (s == "excess-control") {
            inj.excess_precision_control = true;
        } else if (s == "wrong-column") {
            inj.wrong_column = WrongColumnRecompute{};
        } else if (s.rfind("wrong-column:", 0) == 0) {
            const std::string off = s.substr(13);
            std::ptrdiff_t v = 0;
            const char* first = off.data() + (off.size() && off[0] == '+' ? 1 : 0);
            const auto [ptr, ec] = std::from_chars(first, off.data() + off.size(), v);
            if (off.empty() || ec != std::errc{} || ptr != off.data() + off.size())
                throw UsageError("cannot parse wrong-column offset '" + off + "'");
            inj.wrong_column = WrongColumnRecompute{v};
        } else {
            throw UsageError("unknown injection '" + s + "'");
        }
    }
    return inj;
}

StrategyConfig build_strategy(const StrategyFlags& flags)
{
    StrategyConfig s;
    try {
        s.kind = parse_strategy(flags.strategy);
        s.tol = flags.tol;
        s.inject = parse_injections(flags.inject);
        if (!flags.grids.empty())
            s.topology = GridTopology::parse(flags.grids.front(), flags.mb, flags.nb);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (s.tol && !(*s.tol > 0.0))
        throw UsageError("--tol must be positive");
    return s;
}

json to_json(const RunConfig& cfg)
{
    auto flags = [](const StrategyFlags& f) {
        json j;
        j["strategy"] = f.strategy;
        j["tol"] = f.tol ? json(*f.tol) : json(nullptr);
        j["inject"] = f.inject;
        j["grids"] = f.grids;
        j["mb"] = f.mb;
        j["nb"] = f.nb;
        return j;
    };
    json j;
    j["command"] = cfg.command;
    j["precision"] = cfg.precision;
    j["slack"] = cfg.slack ? json(*cfg.slack) : json(nullptr);
    j["tau"] = cfg.tau ? json(*cfg.tau) : json(nullptr);
    if (cfg.command == "gen") {
        j["kind"] = cfg.kind;
        j["n"] = cfg.n;
        j["m"] = cfg.m ? cfg.m : cfg.n;
        j["c"] = cfg.c_text;
        j["field"] = cfg.field;
        j["seed"] = cfg.seed;
        j["output"] = cfg.output;
        return j;
    }
    j["input"] = cfg.input;
    j["prefix"] = cfg.prefix;
    j["strategy"] = flags(cfg.first);
    if (cfg.command == "compare") {
        json s = flags(cfg.second);
        s["strategy_given"] = cfg.second_strategy_given;
        s["tol_given"] = cfg.second_tol_given;
        s["inject_given"] = cfg.second_inject_given;
        s["grid_given"] = cfg.second_grid_given;
        j["second"] = s;
    }
    if (cfg.command == "sweep") {
        j["family"] = cfg.family;
        j["n"] = cfg.n;
        j["c_from"] = cfg.c_from;
        j["c_to"] = cfg.c_to;
        j["c_step"] = cfg.c_step;
        j["c_list"] = cfg.c_list;
    }
    return j;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        if (cfg.command == "gen")
            return cmd_gen(cfg, out);
        if (cfg.command == "factor")
            return cmd_factor(cfg, out, err);
        if (cfg.command == "check")
            return cmd_check(cfg, out, err);
        if (cfg.command == "sweep")
            return cmd_sweep(cfg, out, err);
        if (cfg.command == "compare")
            return cmd_compare(cfg, out, err);
        if (cfg.command == "report")
            return cmd_report(cfg, out, err);
        err << "error: unknown command '" << cfg.command << "'\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Column-pivoted QR stress-testing tool"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a test matrix");
    gen->add_option("kind", cfg.kind, "kahan | symkahan | random")
        ->check(CLI::IsMember({"kahan", "symkahan", "random"}));
    gen->add_option("--n", cfg.n, "order (columns)")->required();
    gen->add_option("--m", cfg.m, "rows for random matrices (default n)");
    gen->add_option("--c", cfg.c_text, "Kahan parameter, parsed as a double");
    gen->add_option("--field", cfg.field, "real | complex")->check(CLI::IsMember({"real", "complex"}));
    gen->add_option("--seed", cfg.seed, "RNG seed");
    gen->add_option("-o,--output", cfg.output, "output Matrix Market file")->required();
    gen->add_option("--json", cfg.json, "summary JSON path (default stdout)");

    auto* factor = app.add_subcommand("factor", "factor a matrix and write R, perm, tau, events");
    factor->add_option("-i,--input", cfg.input, "input Matrix Market file")->required();
    factor->add_option("-o,--prefix", cfg.prefix, "output prefix")->required();
    add_strategy_flags(factor, cfg.first, false);
    add_check_flags(factor, cfg);

    auto* check = app.add_subcommand("check", "verify the rank-revealing structure of R");
    check->add_option("-i,--input", cfg.input, "R as Matrix Market file")->required();
    check->add_option("--csv", cfg.csv, "red/blue profile CSV path");
    add_check_flags(check, cfg);

    auto* sweep = app.add_subcommand("sweep", "factor Kahan matrices over a range of c");
    sweep->add_option("--family", cfg.family, "kahan | symkahan")
        ->check(CLI::IsMember({"kahan", "symkahan"}));
    sweep->add_option("--n", cfg.n, "order")->required();
    sweep->add_option("--c-from", cfg.c_from, "first c");
    sweep->add_option("--c-to", cfg.c_to, "last c");
    sweep->add_option("--c-step", cfg.c_step, "c increment");
    sweep->add_option("--c", cfg.c_list, "explicit c values (overrides the range)");
    sweep->add_option("--csv", cfg.csv, "table path (default stdout)");
    add_strategy_flags(sweep, cfg.first, true);
    add_check_flags(sweep, cfg);

    auto* compare = app.add_subcommand("compare", "compare pivot sequences of two configurations");
    compare->add_option("-i,--input", cfg.input, "input Matrix Market file")->required();
    compare->add_option("--csv", cfg.csv, "side-by-side permutation CSV");
    add_strategy_flags(compare, cfg.first, false);
    compare->add_option("--strategy2", cfg.second.strategy, "second strategy")
        ->check(CLI::IsMember({"classic", "robust", "exact"}));
    compare->add_option("--tol2", cfg.second.tol, "second tol");
    compare->add_option("--inject2", cfg.second.inject, "second injections");
    compare->add_option("--grid2", cfg.second.grids, "second process grid")->expected(1);
    compare->add_option("--mb2", cfg.second.mb, "second row block size")->check(CLI::PositiveNumber);
    compare->add_option("--nb2", cfg.second.nb, "second column block size")->check(CLI::PositiveNumber);
    add_check_flags(compare, cfg);

    auto* report = app.add_subcommand("report", "merge factor and check output into a profile CSV");
    report->add_option("-p,--prefix", cfg.prefix, "prefix given to factor")->required();
    report->add_option("--csv", cfg.csv, "profile CSV path (default <prefix>.profile.csv)");
    add_check_flags(report, cfg);

    std::vector<std::string> storage{"rrqr"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    for (auto* sub : {gen, factor, check, sweep, compare, report})
        if (sub->parsed())
            cfg.command = sub->get_name();
    cfg.second_strategy_given = compare->count("--strategy2") > 0;
    cfg.second_tol_given = compare->count("--tol2") > 0;
    cfg.second_inject_given = compare->count("--inject2") > 0;
    cfg.second_grid_given = compare->count("--grid2") > 0 || compare->count("--mb2") > 0 ||
                            compare->count("--nb2") > 0;
    if (cfg.second_grid_given && compare->count("--grid2") == 0)
        cfg.second.grids = cfg.first.grids;
    return run(cfg, out, err);
}

} // namespace rrqr::cli
