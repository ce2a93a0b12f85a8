#include "levyito/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "levyito/combinatorics.hpp"
#include "levyito/error.hpp"
#include "levyito/noise_sim.hpp"
#include "levyito/parallel.hpp"
#include "levyito/rng.hpp"
#include "levyito/stats.hpp"

namespace levyito
{
namespace
{
[[noreturn]] void bad_config(std::string const& what)
{
    fail(Errc::ConfigParseError, what);
}

double number(Json const& j, std::string const& what)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
    {
        auto const s = j.get<std::string>();
        if (s == "inf" || s == "+inf")
            return kInf;
        if (s == "-inf")
            return -kInf;
    }
    bad_config(what + " must be a number");
}

Json const& member(Json const& j, char const* key, std::string const& what)
{
    if (!j.is_object() || !j.contains(key))
        bad_config(what + " needs '" + key + "'");
    return j.at(key);
}

double number_or(Json const& j, char const* key, double fallback)
{
    if (!j.is_object() || !j.contains(key))
        return fallback;
    return number(j.at(key), key);
}

int integer_or(Json const& j, char const* key, int fallback)
{
    double const v = number_or(j, key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        bad_config(std::string(key) + " must be an integer");
    return static_cast<int>(v);
}

std::size_t count_or(Json const& j, char const* key, std::size_t fallback)
{
    double const v = number_or(j, key, static_cast<double>(fallback));
    if (v < 0 || v != std::floor(v))
        bad_config(std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::vector<double> numbers(Json const& j, std::string const& what)
{
    if (!j.is_array())
        bad_config(what + " must be an array of numbers");
    std::vector<double> out;
    for (auto const& v : j)
        out.push_back(number(v, what));
    return out;
}

std::vector<int> integers(Json const& j, std::string const& what)
{
    std::vector<int> out;
    for (double v : numbers(j, what))
    {
        if (v != std::floor(v))
            bad_config(what + " must hold integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

Json num_json(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

double json_num(Json const& j)
{
    if (j.is_number())
        return j.get<double>();
    auto const s = j.get<std::string>();
    if (s == "nan")
        return std::nan("");
    return s == "-inf" ? -kInf : kInf;
}

bool close_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}
}  // namespace

//---------------------------------------------------------------------------//
LevyMeasurePtr parse_measure(Json const& j)
{
    if (j.is_object() && j.contains("atoms"))
    {
        std::vector<Atom> atoms;
        for (auto const& a : j.at("atoms"))
        {
            auto const v = numbers(a, "atom");
            if (v.size() != 2)
                bad_config("atoms are [jump, mass] pairs");
            atoms.push_back({v[0], v[1]});
        }
        return std::make_shared<LevyMeasure const>(LevyMeasure::from_atoms(std::move(atoms)));
    }
    if (j.is_object() && j.contains("power_law"))
    {
        auto const& p = j.at("power_law");
        PowerLawDensity d;
        d.alpha = number_or(p, "alpha", d.alpha);
        d.eps = number_or(p, "eps", d.eps);
        d.z_max = number_or(p, "z_max", d.z_max);
        d.scale = number_or(p, "scale", d.scale);
        return std::make_shared<LevyMeasure const>(LevyMeasure::from_density(d));
    }
    bad_config("measure must be {\"atoms\": ...} or {\"power_law\": ...}");
}

namespace
{
std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        auto const pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s)
{
    double v = 0;
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        bad_config("'" + std::string(s) + "' is not a number");
    return v;
}
}  // namespace

LevyMeasurePtr parse_measure_dsl(std::string_view text)
{
    auto const colon = text.find(':');
    if (colon == std::string_view::npos)
        bad_config("measure must look like 'atoms:z@l,...' or 'powerlaw:alpha,eps,zmax'");
    auto const kind = text.substr(0, colon);
    auto const body = text.substr(colon + 1);
    if (kind == "atoms")
    {
        Json atoms = Json::array();
        for (auto item : split(body, ','))
        {
            auto const at = item.find('@');
            if (at == std::string_view::npos)
                bad_config("atom '" + std::string(item) + "' must be z@mass");
            atoms.push_back({parse_double(item.substr(0, at)), parse_double(item.substr(at + 1))});
        }
        return parse_measure(Json{{"atoms", atoms}});
    }
    if (kind == "powerlaw")
    {
        auto const parts = split(body, ',');
        if (parts.size() < 3 || parts.size() > 4)
            bad_config("powerlaw takes alpha,eps,zmax[,scale]");
        Json p{{"alpha", parse_double(parts[0])},
               {"eps", parse_double(parts[1])},
               {"z_max", parse_double(parts[2])}};
        if (parts.size() == 4)
            p["scale"] = parse_double(parts[3]);
        return parse_measure(Json{{"power_law", p}});
    }
    bad_config("unknown measure kind '" + std::string(kind) + "'");
}

Interval parse_interval(Json const& j)
{
    auto const v = numbers(j, "interval");
    if (v.size() != 2)
        bad_config("intervals are [lo, hi]");
    return {v[0], v[1]};
}

IntervalSet parse_set(Json const& j)
{
    if (!j.is_array())
        bad_config("set must be [lo, hi] or a list of them");
    if (!j.empty() && j.front().is_array())
    {
        std::vector<Interval> parts;
        for (auto const& p : j)
            parts.push_back(parse_interval(p));
        return IntervalSet(std::move(parts));
    }
    if (j.empty())
        return {};
    return IntervalSet{parse_interval(j)};
}

StepFunction parse_step(Json const& j)
{
    if (!j.is_array())
        bad_config("step function must be a list of [lo, hi, value]");
    std::vector<StepPiece> pieces;
    for (auto const& p : j)
    {
        auto const v = numbers(p, "step piece");
        if (v.size() != 3)
            bad_config("step pieces are [lo, hi, value]");
        pieces.push_back({v[0], v[1], v[2]});
    }
    return StepFunction(std::move(pieces));
}

StepFunction parse_step_dsl(std::string_view text)
{
    std::vector<StepPiece> pieces;
    for (auto item : split(text, ','))
    {
        auto const f = split(item, ':');
        if (f.size() != 3)
            bad_config("step pieces are lo:hi:value");
        pieces.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
    }
    return StepFunction(std::move(pieces));
}

Integrand parse_integrand(Json const& j)
{
    if (j.is_object() && j.contains("gaussian"))
    {
        auto const& g = j.at("gaussian");
        Gaussian out;
        out.amplitude = number_or(g, "amplitude", out.amplitude);
        out.center = number_or(g, "center", out.center);
        out.width = number_or(g, "width", out.width);
        if (!(out.width > 0))
            bad_config("gaussian width must be positive");
        return out;
    }
    if (j.is_object() && j.contains("step"))
        return parse_step(j.at("step"));
    bad_config("integrand must be {\"step\": ...} or {\"gaussian\": ...}");
}

Cell parse_cell(Json const& j)
{
    Cell c;
    c.space = parse_interval(member(j, "space", "cell"));
    auto const& jumps = member(j, "jumps", "cell");
    if (jumps.is_string() && jumps.get<std::string>() == "all")
        c.jumps = JumpSet::all();
    else if (jumps.is_object() && jumps.contains("range"))
        c.jumps.range = parse_interval(jumps.at("range"));
    else
        c.jumps.atoms = numbers(jumps, "cell jumps");
    return c;
}

Coefficient parse_coefficient(Json const& j)
{
    if (j.is_number())
        return Coefficient::constant(j.get<double>());
    if (!j.is_object())
        bad_config("coefficient must be a number or an object");
    double const bound = number_or(j, "bound", kDefaultClampBound);
    if (j.contains("constant"))
        return Coefficient::constant(number(j.at("constant"), "constant"));
    if (j.contains("noise"))
        return Coefficient::clamped_noise(parse_set(j.at("noise")), bound);
    if (j.contains("count"))
        return Coefficient::clamped_count(parse_cell(j.at("count")), bound);
    if (j.contains("poly"))
        return Coefficient::polynomial(parse_coefficient(j.at("poly")),
                                       numbers(member(j, "coefficients", "poly"), "coefficients"));
    if (j.contains("product"))
    {
        std::vector<Coefficient> f;
        for (auto const& x : j.at("product"))
            f.push_back(parse_coefficient(x));
        return Coefficient::product(std::move(f));
    }
    if (j.contains("sum"))
    {
        std::vector<std::pair<double, Coefficient>> terms;
        for (auto const& t : j.at("sum"))
        {
            if (!t.is_array() || t.size() != 2)
                bad_config("sum terms are [weight, coefficient]");
            terms.emplace_back(number(t[0], "weight"), parse_coefficient(t[1]));
        }
        return Coefficient::sum(std::move(terms));
    }
    bad_config("unknown coefficient kind");
}

SimpleProcess parse_process(Json const& j)
{
    if (j.is_object() && j.contains("step"))
        return SimpleProcess::deterministic(parse_step(j.at("step")));
    if (j.is_object() && j.contains("breakpoints"))
    {
        std::vector<Coefficient> coefficients;
        for (auto const& c : member(j, "coefficients", "process"))
            coefficients.push_back(parse_coefficient(c));
        return SimpleProcess::make(numbers(j.at("breakpoints"), "breakpoints"),
                                   std::move(coefficients));
    }
    if (j.is_object() && j.value("zero", false))
        return {};
    bad_config("process must have 'step' or 'breakpoints'/'coefficients'");
}

StepKernel parse_kernel(Json const& j)
{
    if (j.is_object() && j.contains("indicator"))
        return StepKernel::indicator(parse_cell(j.at("indicator")), number_or(j, "value", 1.0));
    int const order = integer_or(j, "order", 1);
    std::vector<Cell> cells;
    for (auto const& c : member(j, "cells", "kernel"))
        cells.push_back(parse_cell(c));
    std::vector<KernelEntry> entries;
    for (auto const& e : member(j, "entries", "kernel"))
    {
        if (!e.is_array() || e.size() != 2)
            bad_config("kernel entries are [[indices...], value]");
        entries.push_back({integers(e[0], "entry indices"), number(e[1], "entry value")});
    }
    return StepKernel(order, std::move(cells), std::move(entries));
}

ChaosFunctional parse_functional(Json const& j)
{
    ChaosFunctional f;
    f.constant = number_or(j, "constant", 0.0);
    if (j.is_object() && j.contains("kernels"))
        for (auto const& k : j.at("kernels"))
            f.kernels.push_back(parse_kernel(k));
    validate_chaos(f);
    return f;
}

ConvolutionSpec parse_convolution(Json const& j)
{
    ConvolutionSpec spec;
    auto const& k = member(j, "kernel", "convolution");
    if (k.is_string() && k.get<std::string>() == "zero")
        spec.kernel = ConvolutionKernel::Variant{kernel::Zero{}};
    else if (k.is_object() && k.contains("box"))
    {
        auto const& b = k.at("box");
        spec.kernel = ConvolutionKernel::Variant{kernel::Box{
            number_or(b, "lo", 0.0), number_or(b, "hi", 1.0), number_or(b, "height", 1.0)}};
    }
    else if (k.is_object() && k.contains("heat"))
        spec.kernel =
            ConvolutionKernel::Variant{kernel::Heat{number_or(k.at("heat"), "diffusivity", 0.5)}};
    else
        bad_config("kernel must be \"zero\", {\"box\": ...} or {\"heat\": ...}");

    auto const& f = member(j, "field", "convolution");
    if (f.is_object() && f.contains("constant"))
        spec.field = field::Constant{number(f.at("constant"), "field constant")};
    else if (f.is_object() && f.contains("lagged_noise"))
    {
        auto const& l = f.at("lagged_noise");
        spec.field = field::LaggedNoise{number_or(l, "lag", 1.0),
                                        number_or(l, "bound", kDefaultClampBound),
                                        number_or(l, "spacing", 0.5)};
    }
    else
        bad_config("field must be {\"constant\": c} or {\"lagged_noise\": ...}");
    spec.t = number_or(j, "t", 1.0);
    spec.x = number_or(j, "x", 0.0);
    return spec;
}

//---------------------------------------------------------------------------//
namespace
{
struct CheckInfo
{
    std::string_view type;
    std::string_view family;
};

constexpr CheckInfo kChecks[] = {
    {"c_star", "verify-bounds"},
    {"cumulant_moment", "verify-bounds"},
    {"interpolation", "verify-bounds"},
    {"char_gap", "verify-bounds"},
    {"moment_mc", "verify-bounds"},
    {"centering", "verify-bounds"},
    {"isometry", "verify-bounds"},
    {"seminorm", "verify-bounds"},
    {"martingale", "verify-bounds"},
    {"power_sum", "verify-bounds"},
    {"horizon", "verify-bounds"},
    {"lemma31", "verify-bounds"},
    {"thm34", "verify-bounds"},
    {"tail", "verify-bounds"},
    {"approximation", "verify-bounds"},
    {"thm35", "convolution"},
    {"derivative_oracle", "malliavin-check"},
    {"lemma41", "malliavin-check"},
    {"lemma42", "malliavin-check"},
    {"duality", "malliavin-check"},
    {"chaos_isometry", "malliavin-check"},
    {"chaos_orthogonality", "malliavin-check"},
};

std::string_view family_name(CheckFamily f)
{
    switch (f)
    {
        case CheckFamily::bounds: return "verify-bounds";
        case CheckFamily::convolution: return "convolution";
        case CheckFamily::malliavin: return "malliavin-check";
        case CheckFamily::all: return "report";
    }
    return "report";
}
}  // namespace

std::string_view family_of(std::string_view check_type)
{
    for (auto const& c : kChecks)
        if (c.type == check_type)
            return c.family;
    return {};
}

bool is_known_check(std::string_view check_type)
{
    return !family_of(check_type).empty();
}

std::uint64_t check_seed(std::uint64_t master, std::string_view name)
{
    return derive_seed(master, fnv1a(name), 0);
}

ExperimentConfig parse_config(Json const& doc)
{
    try
    {
        if (!doc.is_object())
            bad_config("config must be a JSON object");
        ExperimentConfig cfg;
        cfg.measure_spec = doc.value("measure", Json{{"atoms", Json::array({{1.0, 1.0}})}});
        cfg.model = parse_measure(cfg.measure_spec);
        cfg.window = number_or(doc, "window", cfg.window);
        if (!(cfg.window >= 0) || !std::isfinite(cfg.window))
            bad_config("window must be finite and >= 0");
        cfg.samples = count_or(doc, "samples", cfg.samples);
        if (doc.contains("seed"))
        {
            if (!doc.at("seed").is_number_integer() && !doc.at("seed").is_number_unsigned())
                bad_config("seed must be an unsigned integer");
            cfg.seed = doc.at("seed").get<std::uint64_t>();
        }
        cfg.threads = static_cast<unsigned>(count_or(doc, "threads", 0));
        if (doc.contains("tolerance"))
        {
            auto const& t = doc.at("tolerance");
            cfg.tolerance.se_multiplier = number_or(t, "se_multiplier", 3.0);
            cfg.tolerance.heavy_se_multiplier = number_or(t, "heavy_se_multiplier", 4.0);
            cfg.tolerance.sample_floor = count_or(t, "sample_floor", kSampleFloor);
        }
        if (cfg.tolerance.se_multiplier < 1 || cfg.tolerance.heavy_se_multiplier < 1)
            bad_config("SE multipliers must be >= 1");
        if (cfg.tolerance.sample_floor < kSampleFloor)
            bad_config("sample floor cannot be below " + std::to_string(kSampleFloor));
        if (cfg.samples < cfg.tolerance.sample_floor)
            bad_config("samples must be at least " + std::to_string(cfg.tolerance.sample_floor));
        if (doc.contains("rosenthal"))
        {
            auto const& r = doc.at("rosenthal");
            cfg.rosenthal.value = number_or(r, "B", 1.0);
            if (r.contains("convention"))
                cfg.rosenthal.convention =
                    parse_rosenthal_convention(r.at("convention").get<std::string>());
        }
        if (doc.contains("sets"))
            for (auto const& s : doc.at("sets"))
                cfg.sets.push_back(parse_set(s));

        std::set<std::string> names;
        if (doc.contains("checks"))
        {
            for (auto const& c : doc.at("checks"))
            {
                CheckSpec spec;
                spec.type = member(c, "type", "check").get<std::string>();
                spec.name = c.value("name", spec.type);
                spec.params = c;
                if (!is_known_check(spec.type))
                    fail(Errc::UnknownCheck, "unknown check type '" + spec.type + "'");
                if (!names.insert(spec.name).second)
                    bad_config("duplicate check name '" + spec.name + "'");
                if (c.contains("samples")
                    && count_or(c, "samples", 0) < cfg.tolerance.sample_floor)
                    bad_config("check '" + spec.name + "' has fewer samples than the floor");
                cfg.checks.push_back(std::move(spec));
            }
        }
        return cfg;
    }
    catch (nlohmann::json::exception const& e)
    {
        bad_config(e.what());
    }
}

ExperimentConfig load_config(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        fail(Errc::IoError, "cannot read config '" + path.string() + "'");
    Json doc;
    try
    {
        doc = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
    }
    catch (nlohmann::json::exception const& e)
    {
        bad_config(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

//---------------------------------------------------------------------------//
namespace
{
struct Context
{
    ExperimentConfig const& cfg;
    CheckSpec const& check;
    LevyMeasurePtr model;
    std::uint64_t seed;
    std::size_t samples;
    std::vector<double>* sink;

    Json const& p() const { return check.params; }

    McOptions mc(std::uint64_t salt = 0) const
    {
        McOptions o;
        o.n_samples = samples;
        o.seed = salt == 0 ? seed : derive_seed(seed, salt, 1);
        o.threads = cfg.threads;
        o.sample_sink = salt == 0 ? sink : nullptr;
        return o;
    }

    double k() const { return number_or(p(), "se_multiplier", cfg.tolerance.se_multiplier); }
    double heavy_k() const
    {
        return number_or(p(), "se_multiplier", cfg.tolerance.heavy_se_multiplier);
    }

    RosenthalConstant rosenthal() const
    {
        RosenthalConstant rc = cfg.rosenthal;
        if (p().contains("rosenthal"))
        {
            auto const& r = p().at("rosenthal");
            rc.value = number_or(r, "B", rc.value);
            if (r.contains("convention"))
                rc.convention = parse_rosenthal_convention(r.at("convention").get<std::string>());
        }
        return rc;
    }
};

void set_ztest(CheckOutcome& out, double estimate, double target, double se, double z)
{
    out.estimate = estimate;
    out.target = target;
    out.se = se;
    out.z = z;
}

Json seminorm_json(SeminormEstimate const& s)
{
    return Json{{"value", num_json(s.value)},
                {"se", num_json(s.se)},
                {"l2_part", num_json(s.l2_part.mean)},
                {"lp_part", num_json(s.lp_part.mean)},
                {"K", num_json(s.K)},
                {"p", s.p}};
}

StepFunction phi_param(Context const& c)
{
    if (c.p().contains("phi"))
        return parse_step(c.p().at("phi"));
    if (c.p().contains("set"))
    {
        std::vector<StepPiece> pieces;
        for (auto const& part : parse_set(c.p().at("set")).parts())
            pieces.push_back({part.lo, part.hi, 1.0});
        return StepFunction(std::move(pieces));
    }
    return StepFunction::indicator({0.0, 1.0});
}

double k_param(Context const& c)
{
    return number_or(c.p(), "K", kInf);
}

//---------------------------------------------------------------------------//
void run_c_star(Context const& c, CheckOutcome& out)
{
    int const p_max = integer_or(c.p(), "p_max", 10);
    Json expected = c.p().value("expected", Json::object());
    Json rows = Json::array();
    out.pass = true;
    for (int p = 2; p <= p_max; ++p)
    {
        auto const pruned = count_c_star(p);
        auto const filtered = count_c_star_filtered(p);
        bool ok = pruned == filtered;
        auto const key = std::to_string(p);
        if (expected.contains(key))
            ok = ok && pruned == expected.at(key).get<std::uint64_t>();
        rows.push_back({{"p", p}, {"c_star", pruned}, {"filtered", filtered}, {"pass", ok}});
        out.pass = out.pass && ok;
    }
    out.details["rows"] = rows;
}

void run_cumulant_moment(Context const& c, CheckOutcome& out)
{
    auto const phi = phi_param(c);
    auto const orders = integers(c.p().value("orders", Json::array({2, 3, 4, 6})), "orders");
    std::vector<double> expected;
    if (c.p().contains("expected"))
        expected = numbers(c.p().at("expected"), "expected");
    if (!expected.empty() && expected.size() != orders.size())
        bad_config("expected must match orders");
    double const tol = number_or(c.p(), "relative_tolerance", 1e-12);
    Json rows = Json::array();
    out.pass = true;
    for (std::size_t i = 0; i < orders.size(); ++i)
    {
        int const m = orders[i];
        auto const kappa = cumulants_of_linear_functional(*c.model, phi, std::max(m, 2));
        double const pruned = moment_from_cumulants(kappa, m);
        double const general = moment_from_all_partitions(kappa, m);
        bool ok = close_rel(pruned, general, tol);
        Json row{{"m", m}, {"moment", num_json(pruned)}, {"all_partitions", num_json(general)}};
        if (!expected.empty())
        {
            ok = ok && close_rel(pruned, expected[i], tol);
            row["expected"] = num_json(expected[i]);
        }
        row["pass"] = ok;
        rows.push_back(row);
        out.pass = out.pass && ok;
    }
    out.details["rows"] = rows;
}

void run_interpolation(Context const& c, CheckOutcome& out)
{
    int const p = integer_or(c.p(), "p", 4);
    auto const rows = interpolation_check(*c.model, p);
    Json table = Json::array();
    out.pass = true;
    bool tight = true;
    for (auto const& r : rows)
    {
        table.push_back({{"r", r.r},
                         {"moment", num_json(r.moment)},
                         {"bound", num_json(r.bound)},
                         {"pass", r.pass},
                         {"tight", r.tight}});
        out.pass = out.pass && r.pass;
        tight = tight && r.tight;
    }
    if (c.p().value("expect_tight", false))
        out.pass = out.pass && tight;
    out.details["rows"] = table;
    out.details["all_tight"] = tight;
}

void run_char_gap(Context const& c, CheckOutcome& out)
{
    Interval const set = parse_interval(c.p().value("set", Json::array({0.0, 1.0})));
    std::vector<double> thetas;
    if (c.p().contains("thetas"))
        thetas = numbers(c.p().at("thetas"), "thetas");
    else
    {
        auto const grid = c.p().value("theta_grid", Json::object());
        double const lo = number_or(grid, "lo", -std::numbers::pi);
        double const hi = number_or(grid, "hi", std::numbers::pi);
        int const n = integer_or(grid, "n", 41);
        for (int i = 0; i < n; ++i)
            thetas.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    auto const result = char_function_gap(c.model, set, thetas, c.mc());
    double const threshold = c.p().contains("max_gap")
                                 ? number(c.p().at("max_gap"), "max_gap")
                                 : number_or(c.p(), "gap_factor", 5.0)
                                       / std::sqrt(static_cast<double>(c.samples));
    out.estimate = result.sup_gap;
    out.rhs = threshold;
    out.pass = result.sup_gap < threshold || (result.sup_gap == 0 && threshold == 0);
    Json rows = Json::array();
    for (auto const& r : result.rows)
        rows.push_back({{"theta", num_json(r.theta)},
                        {"empirical_re", num_json(r.empirical.real())},
                        {"empirical_im", num_json(r.empirical.imag())},
                        {"theoretical_re", num_json(r.theoretical.real())},
                        {"theoretical_im", num_json(r.theoretical.imag())},
                        {"gap", num_json(r.gap)}});
    out.details["rows"] = rows;
}

void run_moment_mc(Context const& c, CheckOutcome& out)
{
    auto const phi = phi_param(c);
    auto const orders = integers(c.p().value("orders", Json::array({2, 3, 4, 6})), "orders");
    double const window = std::max(std::abs(phi.support_lo()), std::abs(phi.support_hi()));
    auto const mc = c.mc();
    std::vector<double> values(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(c.model, window, sample_seed(mc.seed, j));
        values[j] = eval_L_phi(r.view(), phi);
    });
    offer_samples(mc, values);
    Json rows = Json::array();
    out.pass = true;
    double worst = 0;
    std::vector<double> powers(values.size());
    for (int m : orders)
    {
        int const order = std::max(m, 2);
        double const target =
            moment_from_cumulants(cumulants_of_linear_functional(*c.model, phi, order), m);
        for (std::size_t j = 0; j < values.size(); ++j)
            powers[j] = std::pow(values[j], m);
        auto const t = mc_mean_test(powers, target, c.heavy_k());
        rows.push_back({{"p", m},
                        {"target", num_json(target)},
                        {"estimate", num_json(t.estimate)},
                        {"se", num_json(t.se)},
                        {"z", num_json(t.z)},
                        {"pass", t.pass}});
        out.pass = out.pass && t.pass;
        if (std::abs(t.z) >= std::abs(worst))
        {
            worst = t.z;
            set_ztest(out, t.estimate, target, t.se, t.z);
        }
    }
    out.details["rows"] = rows;
}

void run_moment_check(CheckOutcome& out, MomentCheck const& m)
{
    set_ztest(out, m.estimate, m.target, m.se, m.z);
    out.lhs = m.estimate;
    out.rhs = m.target;
    out.pass = m.pass;
    out.details["exact_target"] = m.exact_target;
}

void run_centering(Context const& c, CheckOutcome& out)
{
    auto const x = parse_process(member(c.p(), "process", "centering"));
    run_moment_check(out, centering_check(c.model, x, k_param(c), c.mc(), c.k()));
}

void run_isometry(Context const& c, CheckOutcome& out)
{
    auto const x = parse_process(member(c.p(), "process", "isometry"));
    run_moment_check(out, isometry_check(c.model, x, k_param(c), c.mc(), c.k()));
}

void run_seminorm(Context const& c, CheckOutcome& out)
{
    auto const x = parse_process(member(c.p(), "process", "seminorm"));
    int const p = integer_or(c.p(), "p", 2);
    auto const s = estimate_seminorm(c.model, x, k_param(c), p, c.mc());
    out.estimate = s.value;
    out.se = s.se;
    out.details = seminorm_json(s);
    out.pass = std::isfinite(s.value) && s.value >= 0;
    if (c.p().contains("expected"))
    {
        double const e = number(c.p().at("expected"), "expected");
        out.target = e;
        out.pass = out.pass
                   && (s.se > 0 ? std::abs(s.value - e) <= c.k() * s.se
                                : close_rel(s.value, e, 1e-12));
    }
}

void run_martingale(Context const& c, CheckOutcome& out)
{
    auto const x = parse_process(member(c.p(), "process", "martingale"));
    std::vector<Coefficient> extra;
    if (c.p().contains("functionals"))
        for (auto const& g : c.p().at("functionals"))
            extra.push_back(parse_coefficient(g));
    double const lag = number_or(c.p(), "lag", 1.0);
    Json rows = Json::array();
    out.pass = true;
    double worst = 0;
    std::uint64_t salt = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        double const b = x.breakpoints()[k];
        // the most recent noise before the increment, plus configured functionals
        std::vector<Coefficient> tests{
            Coefficient::clamped_noise(IntervalSet{{b - lag, b}}, 10.0)};
        for (auto const& g : extra)
            if (g.horizon() <= b)
                tests.push_back(g);
        for (std::size_t t = 0; t < tests.size(); ++t)
        {
            auto const m = martingale_check(c.model, x, k, tests[t], c.mc(salt++), c.k());
            rows.push_back({{"increment", k},
                            {"functional", t},
                            {"estimate", num_json(m.estimate)},
                            {"se", num_json(m.se)},
                            {"z", num_json(m.z)},
                            {"pass", m.pass}});
            out.pass = out.pass && m.pass;
            if (std::abs(m.z) >= std::abs(worst))
            {
                worst = m.z;
                set_ztest(out, m.estimate, 0.0, m.se, m.z);
            }
        }
    }
    out.details["rows"] = rows;
}

void run_power_sum(Context const& c, CheckOutcome& out)
{
    auto const x = parse_process(member(c.p(), "process", "power_sum"));
    int const p = integer_or(c.p(), "p", 4);
    auto const mc = c.mc();
    double const window = x.required_window();
    std::vector<char> ok(mc.n_samples, 1);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(c.model, window, sample_seed(mc.seed, j));
        ok[j] = power_sum_inequality_holds(x, x.values(r), p) ? 1 : 0;
    });
    auto const violations = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
    out.details["realizations"] = mc.n_samples;
    out.details["violations"] = violations;
    out.pass = violations == 0;
}

void run_horizon(Context const& c, CheckOutcome& out)
{
    auto const expected = c.p().value("expect", std::string("HorizonViolation"));
    try
    {
        parse_process(member(c.p(), "process", "horizon"));
        out.details["raised"] = "none";
        out.pass = false;
    }
    catch (Error const& e)
    {
        out.details["raised"] = std::string(to_string(e.code()));
        out.details["message"] = e.what();
        out.pass = to_string(e.code()) == expected;
    }
    out.details["expected"] = expected;
}

void run_lemma31(Context const& c, CheckOutcome& out)
{
    int const p = integer_or(c.p(), "p", 4);
    Lemma31Result r;
    if (c.p().contains("integrand"))
        r = bound_lemma31(*c.model, parse_integrand(c.p().at("integrand")), p);
    else
        r = bound_lemma31(*c.model, phi_param(c), p);
    out.lhs = r.exact_moment;
    out.rhs = r.rhs;
    out.pass = r.pass;
    out.details = {{"p", p}, {"c_star", num_json(r.c_star)}, {"ratio", num_json(r.ratio)}};
    if (c.p().contains("expected_exact"))
        out.pass = out.pass
                   && close_rel(r.exact_moment, number(c.p().at("expected_exact"), "expected"),
                                1e-12);
    if (c.p().contains("expected_rhs"))
        out.pass = out.pass
                   && close_rel(r.rhs, number(c.p().at("expected_rhs"), "expected"), 1e-12);
    if (c.p().contains("expected_ratio"))
        out.pass = out.pass
                   && close_rel(r.ratio, number(c.p().at("expected_ratio"), "expected"), 1e-12);
}

void run_thm34(Context const& c, CheckOutcome& out)
{
    int const p = integer_or(c.p(), "p", 4);
    Thm34Result r;
    if (c.p().contains("integrand"))
        r = bound_thm34(c.model, parse_integrand(c.p().at("integrand")), p, c.rosenthal(),
                        c.mc(), c.k(), number_or(c.p(), "tail_tolerance", 1e-12));
    else
        r = bound_thm34(c.model, parse_process(member(c.p(), "process", "thm34")), p,
                        c.rosenthal(), c.mc(), c.k());
    out.lhs = r.lhs.mean;
    out.rhs = r.rhs;
    out.se = std::hypot(r.lhs.se, r.rhs_se);
    out.estimate = r.lhs.mean;
    out.pass = r.pass;
    out.details = {{"p", p},
                   {"lhs_se", num_json(r.lhs.se)},
                   {"rhs_se", num_json(r.rhs_se)},
                   {"constant", num_json(r.constant)},
                   {"rosenthal_B", num_json(r.rosenthal.value)},
                   {"convention", std::string(to_string(r.rosenthal.convention))},
                   {"seminorm", seminorm_json(r.seminorm)}};
    if (r.lhs_exact)
        out.details["lhs_exact"] = num_json(*r.lhs_exact);
    if (c.p().contains("expected_rhs"))
    {
        double const e = number(c.p().at("expected_rhs"), "expected_rhs");
        out.pass = out.pass && close_rel(r.rhs, e, 1e-10);
        out.details["expected_rhs"] = num_json(e);
    }
}

void run_tail(Context const& c, CheckOutcome& out)
{
    auto const phi = parse_integrand(member(c.p(), "integrand", "tail"));
    auto const schedule = numbers(c.p().value("schedule", Json::array({1, 2, 3, 4})), "schedule");
    double const k_outer = number_or(c.p(), "K_outer", 8.0);
    auto const r = tail_convergence(c.model, phi, schedule, k_outer, c.mc(), c.k());
    Json rows = Json::array();
    double worst = 0;
    for (auto const& row : r.rows)
    {
        rows.push_back({{"K", num_json(row.K)},
                        {"estimate", num_json(row.estimate)},
                        {"theory", num_json(row.theory)},
                        {"se", num_json(row.se)},
                        {"z", num_json(row.z)},
                        {"pass", row.pass}});
        if (std::abs(row.z) >= std::abs(worst))
        {
            worst = row.z;
            set_ztest(out, row.estimate, row.theory, row.se, row.z);
        }
    }
    out.details["K_outer"] = num_json(k_outer);
    out.details["rows"] = rows;
    out.pass = r.pass;
}

void run_approximation(Context const& c, CheckOutcome& out)
{
    double const K = number_or(c.p(), "K", 2.0);
    auto const meshes =
        numbers(c.p().value("meshes", Json::array({0.5, 0.25, 0.125, 0.0625})), "meshes");
    std::vector<ApproximationStep> steps;
    if (c.p().contains("integrand"))
        steps = approximate_by_simple(parse_integrand(c.p().at("integrand")), K, meshes);
    else
        steps = approximate_by_simple(c.model, parse_process(member(c.p(), "process", "approx")),
                                      K, meshes, c.mc());
    Json rows = Json::array();
    out.pass = true;
    for (std::size_t i = 0; i < steps.size(); ++i)
    {
        auto const& s = steps[i];
        bool ok = true;
        if (i > 0)
        {
            auto const& prev = steps[i - 1];
            double const slack = c.k() * std::hypot(s.se, prev.se) + 1e-12 * prev.error;
            ok = s.error <= prev.error + slack;
        }
        rows.push_back({{"mesh", num_json(s.mesh)},
                        {"error", num_json(s.error)},
                        {"se", num_json(s.se)},
                        {"pieces", s.process.size()},
                        {"monotone", ok}});
        out.pass = out.pass && ok;
    }
    if (c.p().value("expect_zero", false))
        for (auto const& s : steps)
            out.pass = out.pass && s.error == 0.0;
    if (!steps.empty())
        out.estimate = steps.back().error;
    out.details["rows"] = rows;
}

void run_thm35(Context const& c, CheckOutcome& out)
{
    auto const spec = parse_convolution(c.p());
    int const p = integer_or(c.p(), "p", 2);
    auto const r = bound_thm35(c.model, spec, p, c.rosenthal(), c.mc(), c.k());
    out.lhs = r.lhs.mean;
    out.rhs = r.rhs;
    out.se = r.lhs.se;
    out.estimate = r.lhs.mean;
    out.pass = r.pass;
    out.details = {{"p", p},
                   {"nu_t", num_json(r.nu_t)},
                   {"B_pow_p", num_json(r.b_pow_p)},
                   {"kernel_integral", num_json(r.kernel_integral)},
                   {"field_bound", num_json(r.field_bound)},
                   {"rhs_inflated", num_json(r.rhs_inflated)},
                   {"quadrature_delta", num_json(r.quadrature_delta)},
                   {"window", num_json(r.window)},
                   {"rosenthal_B", num_json(r.rosenthal.value)},
                   {"convention", std::string(to_string(r.rosenthal.convention))}};
    if (c.p().contains("expected_rhs"))
    {
        double const e = number(c.p().at("expected_rhs"), "expected_rhs");
        out.pass = out.pass && close_rel(r.rhs, e, 1e-10);
        out.details["expected_rhs"] = num_json(e);
    }
    if (c.p().contains("expected_lhs"))
    {
        double const e = number(c.p().at("expected_lhs"), "expected_lhs");
        auto const t = z_test(r.lhs.mean, r.lhs.se, e, c.heavy_k());
        out.target = e;
        out.z = t.z;
        out.pass = out.pass && t.pass;
    }
}

void run_derivative_oracle(Context const& c, CheckOutcome& out)
{
    auto const f = parse_functional(member(c.p(), "functional", "derivative_oracle"));
    auto const r = derivative_oracle_check(c.model, f, count_or(c.p(), "realizations", 50),
                                           count_or(c.p(), "probes", 8), c.seed);
    out.pass = r.pass && r.probes >= count_or(c.p(), "min_probes", 0);
    out.details = {{"probes", r.probes},
                   {"mismatches", r.mismatches},
                   {"inside_cells", r.inside_cells}};
}

void gap_outcome(CheckOutcome& out, GapCheck const& g)
{
    out.lhs = g.lhs;
    out.rhs = g.rhs;
    set_ztest(out, g.gap, 0.0, g.se, g.z);
    out.pass = g.pass;
}

void run_lemma41(Context const& c, CheckOutcome& out)
{
    auto const h = parse_kernel(member(c.p(), "kernel", "lemma41"));
    double const y = number(member(c.p(), "y", "lemma41"), "y");
    auto const g = parse_coefficient(c.p().value("test_functional", Json(1.0)));
    auto const r = lemma41_check(c.model, h, y, g, c.mc(), c.k());
    gap_outcome(out, r.projection);
    out.pass = r.pass;
    out.details = {{"contraction_projected", num_json(r.contraction.lhs)},
                   {"contraction_full", num_json(r.contraction.rhs)},
                   {"contraction_z", num_json(r.contraction.z)},
                   {"contraction_pass", r.contraction.pass},
                   {"exact_projected", num_json(r.exact_projected)},
                   {"exact_full", num_json(r.exact_full)}};
}

void run_lemma42(Context const& c, CheckOutcome& out)
{
    auto const f = parse_functional(member(c.p(), "functional", "lemma42"));
    double const y = number(member(c.p(), "y", "lemma42"), "y");
    auto const r = lemma42_check(c.model, f, y, count_or(c.p(), "realizations", 50),
                                 count_or(c.p(), "probes", 8), c.seed);
    out.pass = r.pass;
    out.details = {{"probes", r.probes}, {"nonzero", r.nonzero}};
}

void run_duality(Context const& c, CheckOutcome& out)
{
    auto const f = parse_functional(member(c.p(), "functional", "duality"));
    auto const x = parse_process(member(c.p(), "process", "duality"));
    gap_outcome(out, duality_gap(c.model, f, x, c.mc(), c.k()));
    if (c.p().contains("expected_lhs"))
        out.pass = out.pass && close_rel(*out.lhs, number(c.p().at("expected_lhs"), "expected_lhs"), 1e-12);
}

void run_chaos_isometry(Context const& c, CheckOutcome& out)
{
    auto const h = parse_kernel(member(c.p(), "kernel", "chaos_isometry"));
    auto const r = chaos_isometry_check(c.model, h, c.mc(), c.k());
    set_ztest(out, r.estimate, r.target, r.se, r.z);
    out.pass = r.pass;
    out.details["order"] = h.order();
}

void run_chaos_orthogonality(Context const& c, CheckOutcome& out)
{
    auto const a = parse_kernel(member(c.p(), "kernel_a", "chaos_orthogonality"));
    auto const b = parse_kernel(member(c.p(), "kernel_b", "chaos_orthogonality"));
    auto const r = chaos_orthogonality_check(c.model, a, b, c.mc(), c.k());
    set_ztest(out, r.estimate, r.target, r.se, r.z);
    out.pass = r.pass;
    out.details["orders"] = {a.order(), b.order()};
}

using Runner = void (*)(Context const&, CheckOutcome&);

Runner runner_for(std::string_view type)
{
    static std::map<std::string_view, Runner> const table{
        {"c_star", run_c_star},
        {"cumulant_moment", run_cumulant_moment},
        {"interpolation", run_interpolation},
        {"char_gap", run_char_gap},
        {"moment_mc", run_moment_mc},
        {"centering", run_centering},
        {"isometry", run_isometry},
        {"seminorm", run_seminorm},
        {"martingale", run_martingale},
        {"power_sum", run_power_sum},
        {"horizon", run_horizon},
        {"lemma31", run_lemma31},
        {"thm34", run_thm34},
        {"tail", run_tail},
        {"approximation", run_approximation},
        {"thm35", run_thm35},
        {"derivative_oracle", run_derivative_oracle},
        {"lemma41", run_lemma41},
        {"lemma42", run_lemma42},
        {"duality", run_duality},
        {"chaos_isometry", run_chaos_isometry},
        {"chaos_orthogonality", run_chaos_orthogonality},
    };
    auto it = table.find(type);
    if (it == table.end())
        fail(Errc::UnknownCheck, "unknown check type '" + std::string(type) + "'");
    return it->second;
}
}  // namespace

CheckOutcome run_check(ExperimentConfig const& config, CheckSpec const& check,
                       bool collect_samples)
{
    CheckOutcome out;
    out.name = check.name;
    out.type = check.type;
    auto const runner = runner_for(check.type);
    try
    {
        Context ctx{config,
                    check,
                    check.params.contains("measure") ? parse_measure(check.params.at("measure"))
                                                     : config.model,
                    check_seed(config.seed, check.name),
                    count_or(check.params, "samples", config.samples),
                    collect_samples ? &out.samples : nullptr};
        runner(ctx, out);
        if (!ctx.model->is_atomic())
            out.details["truncation_bias"] = num_json(ctx.model->truncation_bias());
    }
    catch (Error const& e)
    {
        fail(e.code(), "check '" + check.name + "': " + e.message());
    }
    catch (nlohmann::json::exception const& e)
    {
        bad_config("check '" + check.name + "': " + e.what());
    }
    return out;
}

ExperimentReport run(ExperimentConfig const& config, RunOptions const& options)
{
    auto const start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.command = options.command;
    report.seed = config.seed;
    report.samples = config.samples;
    for (auto const& check : config.checks)
    {
        if (options.family != CheckFamily::all
            && family_of(check.type) != family_name(options.family))
            fail(Errc::UnknownCheck, "check '" + check.name + "' of type '" + check.type
                                         + "' does not belong to " + report.command);
    }
    for (auto const& check : config.checks)
    {
        report.checks.push_back(run_check(config, check, options.collect_samples));
        report.pass = report.pass && report.checks.back().pass;
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

//---------------------------------------------------------------------------//
ReportFormat parse_format(std::string_view s)
{
    if (s == "json")
        return ReportFormat::json;
    if (s == "csv")
        return ReportFormat::csv;
    fail(Errc::InvalidArgument, "format must be json or csv");
}

namespace
{
void put(Json& j, char const* key, std::optional<double> const& v)
{
    if (v)
        j[key] = num_json(*v);
}

std::optional<double> take(Json const& j, char const* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return json_num(j.at(key));
}
}  // namespace

Json to_json(ExperimentReport const& report, bool include_wall_time)
{
    Json checks = Json::array();
    std::size_t failed = 0;
    for (auto const& c : report.checks)
    {
        Json j{{"name", c.name}, {"type", c.type}, {"pass", c.pass}};
        put(j, "lhs", c.lhs);
        put(j, "rhs", c.rhs);
        put(j, "target", c.target);
        put(j, "estimate", c.estimate);
        put(j, "se", c.se);
        put(j, "z", c.z);
        j["details"] = c.details;
        checks.push_back(std::move(j));
        failed += c.pass ? 0 : 1;
    }
    Json env{{"version", report.version}, {"seed", report.seed}};
    if (include_wall_time)
        env["wall_time_s"] = report.wall_time_s;
    return Json{{"tool", "levy-ito"},
                {"command", report.command},
                {"seed", report.seed},
                {"samples", report.samples},
                {"pass", report.pass},
                {"n_checks", report.checks.size()},
                {"n_failed", failed},
                {"checks", std::move(checks)},
                {"environment", std::move(env)}};
}

ExperimentReport report_from_json(Json const& j)
{
    try
    {
        ExperimentReport r;
        r.command = j.at("command").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.samples = j.at("samples").get<std::size_t>();
        r.pass = j.at("pass").get<bool>();
        auto const& env = j.at("environment");
        r.version = env.at("version").get<std::string>();
        r.wall_time_s = env.value("wall_time_s", 0.0);
        for (auto const& c : j.at("checks"))
        {
            CheckOutcome o;
            o.name = c.at("name").get<std::string>();
            o.type = c.at("type").get<std::string>();
            o.pass = c.at("pass").get<bool>();
            o.lhs = take(c, "lhs");
            o.rhs = take(c, "rhs");
            o.target = take(c, "target");
            o.estimate = take(c, "estimate");
            o.se = take(c, "se");
            o.z = take(c, "z");
            o.details = c.value("details", Json::object());
            r.checks.push_back(std::move(o));
        }
        return r;
    }
    catch (nlohmann::json::exception const& e)
    {
        bad_config(std::string("malformed report: ") + e.what());
    }
}

namespace
{
std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s)
    {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string csv_number(std::optional<double> const& v)
{
    if (!v)
        return "";
    if (std::isnan(*v))
        return "nan";
    if (std::isinf(*v))
        return *v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::vector<std::string> csv_split(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        char const ch = line[i];
        if (quoted)
        {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"')
            {
                cur += '"';
                ++i;
            }
            else if (ch == '"')
                quoted = false;
            else
                cur += ch;
        }
        else if (ch == '"')
            quoted = true;
        else if (ch == ',')
        {
            out.push_back(std::move(cur));
            cur.clear();
        }
        else
            cur += ch;
    }
    out.push_back(std::move(cur));
    return out;
}

std::optional<double> csv_value(std::string const& s)
{
    if (s.empty())
        return std::nullopt;
    if (s == "nan")
        return std::nan("");
    if (s == "inf")
        return kInf;
    if (s == "-inf")
        return -kInf;
    return parse_double(s);
}
}  // namespace

std::string to_csv(ExperimentReport const& report)
{
    std::ostringstream os;
    os << "name,type,pass,lhs,rhs,target,estimate,se,z\n";
    for (auto const& c : report.checks)
    {
        os << csv_field(c.name) << ',' << csv_field(c.type) << ',' << (c.pass ? "true" : "false")
           << ',' << csv_number(c.lhs) << ',' << csv_number(c.rhs) << ','
           << csv_number(c.target) << ',' << csv_number(c.estimate) << ',' << csv_number(c.se)
           << ',' << csv_number(c.z) << '\n';
    }
    return os.str();
}

ExperimentReport report_from_csv(std::string_view text)
{
    ExperimentReport r;
    r.command = "csv";
    bool header = true;
    for (auto line : split(text, '\n'))
    {
        if (line.empty())
            continue;
        if (header)
        {
            header = false;
            continue;
        }
        auto const f = csv_split(line);
        if (f.size() != 9)
            bad_config("CSV report rows have 9 fields");
        CheckOutcome o;
        o.name = f[0];
        o.type = f[1];
        o.pass = f[2] == "true";
        o.lhs = csv_value(f[3]);
        o.rhs = csv_value(f[4]);
        o.target = csv_value(f[5]);
        o.estimate = csv_value(f[6]);
        o.se = csv_value(f[7]);
        o.z = csv_value(f[8]);
        r.pass = r.pass && o.pass;
        r.checks.push_back(std::move(o));
    }
    return r;
}

std::string render(ExperimentReport const& report, ReportFormat format)
{
    if (format == ReportFormat::csv)
        return to_csv(report);
    return to_json(report).dump(2) + "\n";
}

namespace
{
void write_text(std::string const& text, std::string const& path)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::IoError, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out)
        fail(Errc::IoError, "failed writing '" + path + "'");
}
}  // namespace

void emit(ExperimentReport const& report, ReportFormat format, std::string const& path)
{
    write_text(render(report, format), path);
}

void dump_samples(ExperimentReport const& report, std::string const& path)
{
    std::ostringstream os;
    os << "check,index,value\n";
    char buf[64];
    for (auto const& c : report.checks)
    {
        for (std::size_t j = 0; j < c.samples.size(); ++j)
        {
            std::snprintf(buf, sizeof buf, "%.17g", c.samples[j]);
            os << csv_field(c.name) << ',' << j << ',' << buf << '\n';
        }
    }
    write_text(os.str(), path);
}

}  // namespace levyito
