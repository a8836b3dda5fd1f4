#pragma once

#include <numbers>

namespace loopzeta {

// Euler–Mascheroni and Catalan constants; the literals carry 20 significant
// digits and round to the nearest double.
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kCatalan = 0.91596559417721901505;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrtPi = 1.7724538509055160273;

}  // namespace loopzeta
