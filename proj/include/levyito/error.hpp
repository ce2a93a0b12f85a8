#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levyito
{

enum class Errc
{
    AtomAtZero,
    NonPositiveMass,
    InfiniteSecondMoment,
    InfiniteTotalMass,
    InfinitePMoment,
    QuadratureFailure,
    SizeLimitExceeded,
    MissingCumulant,
    UnboundedSupport,
    WindowExceeded,
    HorizonViolation,
    NonIncreasingBreakpoints,
    UnboundedCoefficient,
    InfiniteNuT,
    DegenerateVariance,
    InvalidKernel,
    InvalidArgument,
    ConfigParseError,
    UnknownCheck,
    IoError,
};

std::string_view to_string(Errc code);

//! Library error: a stable code plus a human-readable message.
class Error : public std::runtime_error
{
  public:
    Error(Errc code, std::string const& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
        , message_(what)
    {
    }

    Errc code() const noexcept { return code_; }
    //! Message without the code prefix.
    std::string const& message() const noexcept { return message_; }

  private:
    Errc code_;
    std::string message_;
};

[[noreturn]] inline void fail(Errc code, std::string const& what)
{
    throw Error(code, what);
}

inline void require(bool cond, Errc code, std::string const& what)
{
    if (!cond)
        fail(code, what);
}

}  // namespace levyito
