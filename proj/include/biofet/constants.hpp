#pragma once

// Physical constants, CODATA 2018. k_B, N_A and q are exact by definition
// since the 2019 SI redefinition; eps0 is the 2018 measured value.

namespace biofet::constants {

inline constexpr double k_boltzmann = 1.380649e-23;       // J/K
inline constexpr double n_avogadro = 6.02214076e23;       // 1/mol
inline constexpr double q_elementary = 1.602176634e-19;   // C
inline constexpr double eps_vacuum = 8.8541878128e-12;    // F/m
inline constexpr double pi = 3.14159265358979323846;

} // namespace biofet::constants
