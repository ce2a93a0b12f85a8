#include "levyito/error.hpp"

namespace levyito
{
std::string_view to_string(Errc code)
{
    switch (code)
    {
        case Errc::AtomAtZero: return "AtomAtZero";
        case Errc::NonPositiveMass: return "NonPositiveMass";
        case Errc::InfiniteSecondMoment: return "InfiniteSecondMoment";
        case Errc::InfiniteTotalMass: return "InfiniteTotalMass";
        case Errc::InfinitePMoment: return "InfinitePMoment";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::SizeLimitExceeded: return "SizeLimitExceeded";
        case Errc::MissingCumulant: return "MissingCumulant";
        case Errc::UnboundedSupport: return "UnboundedSupport";
        case Errc::WindowExceeded: return "WindowExceeded";
        case Errc::HorizonViolation: return "HorizonViolation";
        case Errc::NonIncreasingBreakpoints: return "NonIncreasingBreakpoints";
        case Errc::UnboundedCoefficient: return "UnboundedCoefficient";
        case Errc::InfiniteNuT: return "InfiniteNuT";
        case Errc::DegenerateVariance: return "DegenerateVariance";
        case Errc::InvalidKernel: return "InvalidKernel";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ConfigParseError: return "ConfigParseError";
        case Errc::UnknownCheck: return "UnknownCheck";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}
}  // namespace levyito
