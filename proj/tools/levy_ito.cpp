// Command-line front end for the levyito library.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyito/combinatorics.hpp"
#include "levyito/error.hpp"
#include "levyito/harness.hpp"
#include "levyito/noise_sim.hpp"

namespace
{
using namespace levyito;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SuiteArgs
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<unsigned> threads;
    std::string out = "-";
    std::string format = "json";
    std::string dump;
    bool strict = false;
    bool no_wall_time = false;
};

void add_common(CLI::App* cmd, SuiteArgs& a, bool config_required)
{
    auto* c = cmd->add_option("--config", a.config, "Experiment config (JSON)");
    if (config_required)
        c->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", a.seed, "Master seed (overrides config)");
    cmd->add_option("--samples", a.samples, "Samples per check (overrides config)");
    cmd->add_option("--threads", a.threads, "Worker threads, 0 for all cores");
    cmd->add_option("--out", a.out, "Output path, - for stdout");
    cmd->add_option("--format", a.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--strict", a.strict, "Exit 1 when any check fails");
}

int run_suite(SuiteArgs const& a, CheckFamily family, std::string const& command)
{
    auto cfg = load_config(a.config);
    if (a.seed)
        cfg.seed = *a.seed;
    if (a.samples)
    {
        require(*a.samples >= cfg.tolerance.sample_floor, Errc::ConfigParseError,
                "--samples must be at least " + std::to_string(cfg.tolerance.sample_floor));
        cfg.samples = *a.samples;
    }
    if (a.threads)
        cfg.threads = *a.threads;

    RunOptions opt;
    opt.family = family;
    opt.command = command;
    opt.collect_samples = !a.dump.empty();
    auto const report = run(cfg, opt);

    auto const format = parse_format(a.format);
    if (format == ReportFormat::json && a.no_wall_time)
    {
        auto const text = to_json(report, false).dump(2) + "\n";
        if (a.out == "-")
            std::cout << text;
        else
        {
            std::ofstream os(a.out, std::ios::binary);
            require(static_cast<bool>(os << text), Errc::IoError, "cannot write '" + a.out + "'");
        }
    }
    else
        emit(report, format, a.out);
    if (!a.dump.empty())
        dump_samples(report, a.dump);

    if (!report.pass)
        std::cerr << "levy-ito: " << std::count_if(report.checks.begin(), report.checks.end(),
                                                    [](auto const& c) { return !c.pass; })
                  << " check(s) failed\n";
    return report.pass || !a.strict ? kExitPass : kExitFailure;
}

//---------------------------------------------------------------------------//
struct SimulateArgs
{
    std::string config;
    std::string measure = "atoms:1@1";
    std::vector<std::string> sets;
    std::optional<double> window;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out = "-";
};

Interval parse_set_arg(std::string const& s)
{
    auto const colon = s.find(':');
    require(colon != std::string::npos, Errc::InvalidArgument, "--set takes lo:hi");
    try
    {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    }
    catch (std::logic_error const&)
    {
        fail(Errc::InvalidArgument, "--set '" + s + "' is not lo:hi");
    }
}

int run_simulate(SimulateArgs const& a)
{
    LevyMeasurePtr model;
    std::vector<IntervalSet> sets;
    double window = 0;
    std::size_t samples = a.samples;
    std::uint64_t seed = a.seed;
    if (!a.config.empty())
    {
        auto const cfg = load_config(a.config);
        model = cfg.model;
        sets = cfg.sets;
        window = cfg.window;
        samples = cfg.samples;
        seed = cfg.seed;
    }
    else
        model = parse_measure_dsl(a.measure);
    if (!a.sets.empty())
    {
        sets.clear();
        for (auto const& s : a.sets)
            sets.push_back(IntervalSet{parse_set_arg(s)});
    }
    if (sets.empty())
        sets.push_back(IntervalSet{{0.0, 1.0}});
    for (auto const& s : sets)
        window = std::max({window, std::abs(s.inf()), std::abs(s.sup())});
    if (a.window)
    {
        window = *a.window;
    }

    McOptions mc;
    mc.n_samples = samples;
    mc.seed = seed;
    mc.threads = a.threads;
    auto const values = simulate_sets(model, window, sets, mc);

    std::ostringstream os;
    os << "index";
    for (auto const& s : sets)
    {
        os << ",L(";
        for (std::size_t i = 0; i < s.parts().size(); ++i)
            os << (i ? "+" : "") << fmt(s.parts()[i].lo) << ':' << fmt(s.parts()[i].hi);
        os << ')';
    }
    os << '\n';
    for (std::size_t j = 0; j < samples; ++j)
    {
        os << j;
        for (std::size_t k = 0; k < sets.size(); ++k)
            os << ',' << fmt(values[j * sets.size() + k]);
        os << '\n';
    }
    if (a.out == "-")
        std::cout << os.str();
    else
    {
        std::ofstream f(a.out, std::ios::binary);
        require(static_cast<bool>(f << os.str()), Errc::IoError, "cannot write '" + a.out + "'");
    }
    return kExitPass;
}

//---------------------------------------------------------------------------//
struct MomentsArgs
{
    std::string measure = "atoms:1@1";
    std::string phi = "0:1:1";
    std::vector<int> orders{2, 3, 4, 6};
    std::string out = "-";
    std::string format = "json";
};

int run_moments(MomentsArgs const& a)
{
    auto const model = parse_measure_dsl(a.measure);
    auto const phi = parse_step_dsl(a.phi);
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "p,moment\n";
    for (int p : a.orders)
    {
        require(p >= 1 && p <= kMaxPartitionSize, Errc::InvalidArgument,
                "--p must be in 1.." + std::to_string(kMaxPartitionSize));
        auto const kappa = cumulants_of_linear_functional(*model, phi, std::max(p, 2));
        double const m = moment_from_cumulants(kappa, p);
        rows.push_back({{"p", p}, {"moment", m}});
        csv << p << ',' << fmt(m) << '\n';
    }
    std::string text;
    if (a.format == "csv")
        text = csv.str();
    else
        text = Json{{"measure", model->describe()}, {"phi", a.phi}, {"moments", rows}}.dump(2)
               + "\n";
    if (a.out == "-")
        std::cout << text;
    else
    {
        std::ofstream f(a.out, std::ios::binary);
        require(static_cast<bool>(f << text), Errc::IoError, "cannot write '" + a.out + "'");
    }
    return kExitPass;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulation and verification toolkit for Ito integrals against Levy white noise",
                 "levy-ito"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Sample L(A) for configured sets as CSV");
    simulate->add_option("--config", sim.config, "Take measure, sets, window, samples and seed from a config")
        ->check(CLI::ExistingFile);
    simulate->add_option("--measure", sim.measure, "atoms:z@mass,... or powerlaw:alpha,eps,zmax[,scale]");
    simulate->add_option("--set", sim.sets, "Interval lo:hi (repeatable)");
    simulate->add_option("--window", sim.window, "Simulation window K");
    simulate->add_option("--samples", sim.samples, "Number of realizations");
    simulate->add_option("--seed", sim.seed, "Master seed");
    simulate->add_option("--threads", sim.threads, "Worker threads, 0 for all cores");
    simulate->add_option("--out", sim.out, "Output path, - for stdout");

    MomentsArgs mom;
    auto* moments = app.add_subcommand("moments", "Exact moments of L(phi) from cumulants");
    moments->add_option("--measure", mom.measure, "atoms:z@mass,... or powerlaw:alpha,eps,zmax");
    moments->add_option("--phi", mom.phi, "Step function lo:hi:value,...");
    moments->add_option("--p", mom.orders, "Moment orders")->delimiter(',');
    moments->add_option("--out", mom.out, "Output path, - for stdout");
    moments->add_option("--format", mom.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    struct Suite
    {
        char const* name;
        char const* help;
        CheckFamily family;
        SuiteArgs args;
        CLI::App* cmd = nullptr;
    };
    std::vector<Suite> suites{
        {"verify-bounds", "Run moment, martingale and bound checks", CheckFamily::bounds, {}},
        {"convolution", "Run convolution bound checks", CheckFamily::convolution, {}},
        {"malliavin-check", "Run derivative, projection and duality checks",
         CheckFamily::malliavin, {}},
        {"report", "Run every check in a config", CheckFamily::all, {}},
    };
    for (auto& s : suites)
    {
        s.cmd = app.add_subcommand(s.name, s.help);
        add_common(s.cmd, s.args, true);
        s.cmd->add_option("--dump-samples", s.args.dump, "Write raw MC samples as CSV");
        s.cmd->add_flag("--no-wall-time", s.args.no_wall_time,
                        "Omit wall time from the JSON report");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try
    {
        if (simulate->parsed())
            return run_simulate(sim);
        if (moments->parsed())
            return run_moments(mom);
        for (auto& s : suites)
            if (s.cmd->parsed())
                return run_suite(s.args, s.family, s.name);
    }
    catch (Error const& e)
    {
        std::cerr << "levy-ito: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (std::exception const& e)
    {
        std::cerr << "levy-ito: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
