#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "levyito/convolution.hpp"
#include "levyito/functions.hpp"
#include "levyito/ito_integral.hpp"
#include "levyito/levy_measure.hpp"
#include "levyito/malliavin.hpp"
#include "levyito/simple_process.hpp"

namespace levyito
{
using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "1.0.0";

struct TolerancePolicy
{
    double se_multiplier = 3;        //!< equality targets
    double heavy_se_multiplier = 4;  //!< p-th moment targets
    std::size_t sample_floor = kSampleFloor;
};

struct CheckSpec
{
    std::string name;
    std::string type;
    Json params;  //!< the whole check object
};

struct ExperimentConfig
{
    Json measure_spec;
    LevyMeasurePtr model;
    double window = 1;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    TolerancePolicy tolerance;
    RosenthalConstant rosenthal;
    std::vector<IntervalSet> sets;
    std::vector<CheckSpec> checks;
};

//! Parse a config document; throws ConfigParseError / UnknownCheck.
ExperimentConfig parse_config(Json const& doc);
ExperimentConfig load_config(std::filesystem::path const& path);

//---------------------------------------------------------------------------//
// Object parsers (shared with the CLI)

LevyMeasurePtr parse_measure(Json const& j);
//! "atoms:z@l,z@l" or "powerlaw:alpha,eps,zmax[,scale]"
LevyMeasurePtr parse_measure_dsl(std::string_view text);
Interval parse_interval(Json const& j);
IntervalSet parse_set(Json const& j);
StepFunction parse_step(Json const& j);
//! "a:b:v,a:b:v"
StepFunction parse_step_dsl(std::string_view text);
Integrand parse_integrand(Json const& j);
Cell parse_cell(Json const& j);
Coefficient parse_coefficient(Json const& j);
SimpleProcess parse_process(Json const& j);
StepKernel parse_kernel(Json const& j);
ChaosFunctional parse_functional(Json const& j);
ConvolutionSpec parse_convolution(Json const& j);

//---------------------------------------------------------------------------//
struct CheckOutcome
{
    std::string name;
    std::string type;
    bool pass = false;
    std::optional<double> lhs;
    std::optional<double> rhs;
    std::optional<double> target;
    std::optional<double> estimate;
    std::optional<double> se;
    std::optional<double> z;
    Json details = Json::object();
    std::vector<double> samples;  //!< primary MC samples when collected
};

struct ExperimentReport
{
    std::string command;
    std::string version{kVersion};
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    double wall_time_s = 0;
    std::vector<CheckOutcome> checks;
    bool pass = true;
};

//! Which check types a subcommand accepts.
enum class CheckFamily
{
    bounds,
    convolution,
    malliavin,
    all,
};

std::string_view family_of(std::string_view check_type);
bool is_known_check(std::string_view check_type);

struct RunOptions
{
    CheckFamily family = CheckFamily::all;
    std::string command = "report";
    bool collect_samples = false;
};

/*!
 * Run every check. Each check draws from its own seed derived from the master
 * seed and the check name, so results do not depend on order or threads.
 */
ExperimentReport run(ExperimentConfig const& config, RunOptions const& options = {});
CheckOutcome run_check(ExperimentConfig const& config, CheckSpec const& check,
                       bool collect_samples = false);

//! Seed of a named check.
std::uint64_t check_seed(std::uint64_t master, std::string_view name);

//---------------------------------------------------------------------------//
enum class ReportFormat
{
    json,
    csv,
};

ReportFormat parse_format(std::string_view s);

Json to_json(ExperimentReport const& report, bool include_wall_time = true);
ExperimentReport report_from_json(Json const& j);
std::string to_csv(ExperimentReport const& report);
ExperimentReport report_from_csv(std::string_view text);
std::string render(ExperimentReport const& report, ReportFormat format);
//! Write to path ("-" or empty for stdout); IoError when unwritable.
void emit(ExperimentReport const& report, ReportFormat format, std::string const& path);
//! One row per sample: check,index,value.
void dump_samples(ExperimentReport const& report, std::string const& path);

}  // namespace levyito
