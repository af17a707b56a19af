#pragma once

namespace policygame::tol {

// Exact-algebra identities: orthogonality, norms, conservation laws.
inline constexpr double kGeometric = 1e-12;
// Trigonometric round trips (arccos/atan2 recovery of angles).
inline constexpr double kAngle = 1e-9;
// Finite-difference agreement.
inline constexpr double kDerivative = 1e-6;

}  // namespace policygame::tol
