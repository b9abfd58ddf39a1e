#pragma once

#include <string>
#include <string_view>

#include "qstat/errors.hpp"

namespace qstat {

/// B: boson-like branch (aa+ - q a+a = q^-N). F: fermion-like branch
/// (aa+ + q^-1 a+a = q^-N).
enum class Family { B, F };

inline std::string_view to_string(Family f) noexcept { return f == Family::B ? "b" : "f"; }

inline Family parse_family(std::string_view s)
{
    if (s == "b" || s == "B") {
        return Family::B;
    }
    if (s == "f" || s == "F") {
        return Family::F;
    }
    throw std::invalid_argument("unknown family '" + std::string(s) + "' (expected b or f)");
}

} // namespace qstat
