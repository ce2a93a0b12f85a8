#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "levyito/harness.hpp"
#include "test_support.hpp"

using namespace levyito;
using test::error_of;

namespace
{
ExperimentReport single(CheckOutcome const& c)
{
    ExperimentReport r;
    r.checks.push_back(c);
    return r;
}

Json small_config()
{
    return Json::parse(R"({
      "measure": {"atoms": [[1.0, 1.0]]},
      "window": 2, "samples": 4000, "seed": 11,
      "checks": [
        {"name": "cs", "type": "c_star", "p_max": 6},
        {"name": "cm", "type": "cumulant_moment", "phi": [[0, 1, 1]], "orders": [2, 4],
         "expected": [1, 4]},
        {"name": "iso", "type": "isometry", "process": {"step": [[0, 1, 2]]}},
        {"name": "origin", "type": "char_gap", "thetas": [0], "max_gap": 0},
        {"name": "ortho", "type": "chaos_orthogonality",
         "kernel_a": {"order": 1, "cells": [{"space": [0, 1], "jumps": [1]}], "entries": [[[0], 1]]},
         "kernel_b": {"order": 2, "cells": [{"space": [0, 1], "jumps": [1]}, {"space": [1, 2], "jumps": [1]}],
               "entries": [[[0, 1], 1]]}}
      ]})");
}
}  // namespace

TEST_CASE("config validation")
{
    CHECK(error_of([] { parse_config(Json::array()); }) == Errc::ConfigParseError);
    CHECK(error_of([] { parse_config(Json{{"samples", 10}}); }) == Errc::ConfigParseError);
    CHECK(error_of([] { parse_config(Json{{"window", -1}}); }) == Errc::ConfigParseError);
    CHECK(error_of([] { parse_config(Json{{"seed", "x"}}); }) == Errc::ConfigParseError);
    CHECK(error_of([] { parse_config(Json{{"tolerance", {{"se_multiplier", 0.5}}}}); })
          == Errc::ConfigParseError);
    CHECK(error_of([] { parse_config(Json::parse(R"({"checks": [{"type": "nope"}]})")); })
          == Errc::UnknownCheck);
    CHECK(error_of([] {
              parse_config(Json::parse(R"({"checks": [{"type": "c_star"}, {"type": "c_star"}]})"));
          })
          == Errc::ConfigParseError);
    CHECK(error_of([] { parse_config(Json::parse(R"({"measure": {"atoms": [[0, 1]]}})")); })
          != Errc::UnknownCheck);
    CHECK(error_of([] { load_config("/nonexistent/config.json"); }) == Errc::IoError);
}

TEST_CASE("DSL parsers")
{
    auto const m = parse_measure_dsl("atoms:1@0.5,-2@0.25");
    CHECK(m->total_mass() == doctest::Approx(0.75));
    CHECK(error_of([] { parse_measure_dsl("atoms:1"); }) == Errc::ConfigParseError);
    auto const phi = parse_step_dsl("0:1:2,1:3:-1");
    CHECK(phi(0.5) == 2.0);
    CHECK(phi(2.0) == -1.0);
    CHECK(phi(1.0) == 2.0);
}

TEST_CASE("empty check list passes")
{
    auto const report = run(parse_config(Json::object()));
    CHECK(report.pass);
    CHECK(report.checks.empty());
}

TEST_CASE("small suite, determinism and report formats")
{
    auto cfg = parse_config(small_config());
    cfg.threads = 1;
    auto const a = run(cfg);
    CHECK(a.pass);
    REQUIRE(a.checks.size() == 5);
    CHECK(a.checks[3].estimate == 0.0);

    cfg.threads = 3;
    auto const b = run(cfg);
    CHECK(to_json(a, false).dump() == to_json(b, false).dump());

    // seeds follow names, not positions
    std::reverse(cfg.checks.begin(), cfg.checks.end());
    auto const c = run(cfg);
    for (auto const& x : a.checks)
        for (auto const& y : c.checks)
            if (x.name == y.name)
                CHECK(to_json(single(x), false).dump() == to_json(single(y), false).dump());

    auto const back = report_from_json(to_json(a));
    CHECK(to_json(back).dump() == to_json(a).dump());

    auto const csv = to_csv(a);
    auto const parsed = report_from_csv(csv);
    REQUIRE(parsed.checks.size() == a.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i)
    {
        CHECK(parsed.checks[i].name == a.checks[i].name);
        CHECK(parsed.checks[i].pass == a.checks[i].pass);
        CHECK(parsed.checks[i].estimate == a.checks[i].estimate);
        CHECK(parsed.checks[i].se == a.checks[i].se);
        CHECK(parsed.checks[i].lhs == a.checks[i].lhs);
        auto const& o = a.checks[i];
        if (o.z && o.se && o.target && *o.se > 0)
            CHECK(*o.z == doctest::Approx((*o.estimate - *o.target) / *o.se));
    }
    CHECK(to_csv(parsed) == csv);
}

TEST_CASE("family filtering and error context")
{
    auto const cfg = parse_config(small_config());
    RunOptions opt;
    opt.family = CheckFamily::convolution;
    CHECK(error_of([&] { run(cfg, opt); }) == Errc::UnknownCheck);
    CHECK(family_of("thm35") == "convolution");
    CHECK(family_of("duality") == "malliavin-check");
    CHECK(is_known_check("lemma31"));
    CHECK_FALSE(is_known_check("lemma99"));
    CHECK(check_seed(1, "a") != check_seed(1, "b"));
    CHECK(check_seed(1, "a") == check_seed(1, "a"));

    auto bad = parse_config(Json::parse(R"({"checks": [{"name": "late", "type": "isometry"}]})"));
    try
    {
        run_check(bad, bad.checks[0]);
        FAIL("missing process accepted");
    }
    catch (Error const& e)
    {
        CHECK(e.message().find("check 'late'") != std::string::npos);
    }

    auto late = parse_config(Json::parse(
        R"({"checks": [{"name": "late", "type": "horizon",
            "process": {"breakpoints": [0, 1], "coefficients": [{"noise": [0, 0.5]}]}}]})"));
    CHECK(run_check(late, late.checks[0]).pass);
}

TEST_CASE("output errors")
{
    ExperimentReport r;
    CHECK(error_of([&] { emit(r, ReportFormat::json, "/nonexistent/dir/out.json"); })
          == Errc::IoError);
    CHECK(error_of([] { parse_format("xml"); }) != Errc::IoError);
    auto const path = std::filesystem::temp_directory_path() / "levyito_report_test.csv";
    emit(r, ReportFormat::csv, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "name,type,pass,lhs,rhs,target,estimate,se,z");
    std::filesystem::remove(path);
}

TEST_CASE("truncated densities report the discarded variance")
{
    auto const cfg = parse_config(Json::parse(R"({"checks": [
        {"name": "pl", "type": "lemma31", "p": 4, "phi": [[0, 1, 1]],
         "measure": {"power_law": {"alpha": 1.5, "eps": 0.1, "z_max": 5, "scale": 1}}},
        {"name": "atom", "type": "lemma31", "p": 4, "phi": [[0, 1, 1]]}]})"));
    auto const pl = run_check(cfg, cfg.checks[0]);
    REQUIRE(pl.details.contains("truncation_bias"));
    // 2 * scale * int_0^eps z^{1 - alpha} dz
    CHECK(pl.details.at("truncation_bias").get<double>()
          == doctest::Approx(2 * std::pow(0.1, 0.5) / 0.5).epsilon(1e-8));
    CHECK_FALSE(run_check(cfg, cfg.checks[1]).details.contains("truncation_bias"));
}
