#pragma once

#include <cmath>

#include "ellipse_contact/core_types.hpp"

namespace ect {

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline ellipse_contact::Vec2 rotate_deg(ellipse_contact::Vec2 v, double deg)
{
    const double r = deg * M_PI / 180.0;
    return {std::cos(r) * v.x - std::sin(r) * v.y, std::sin(r) * v.x + std::cos(r) * v.y};
}

} // namespace ect
