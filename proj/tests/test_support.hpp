#pragma once

#include <memory>
#include <vector>

#include "levyito/error.hpp"
#include "levyito/levy_measure.hpp"

namespace test
{
inline levyito::LevyMeasurePtr atoms(std::vector<levyito::Atom> a)
{
    return std::make_shared<levyito::LevyMeasure const>(
        levyito::LevyMeasure::from_atoms(std::move(a)));
}

inline levyito::LevyMeasurePtr unit_atom()
{
    return atoms({{1.0, 1.0}});
}

template<class F>
levyito::Errc error_of(F&& f)
{
    try
    {
        f();
    }
    catch (levyito::Error const& e)
    {
        return e.code();
    }
    FAIL("no levyito::Error raised");
    return levyito::Errc::InvalidArgument;
}
}  // namespace test
