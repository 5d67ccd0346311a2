#pragma once

// Transition matrices for the coefficient recurrence of h(x)^n.
//
// With v_k = [h^n_{k-r+1}, ..., h^n_k] the recurrence reads
// v_k = v_{k-1} * M^n_k / (k h_0). Modulo p = 2n+1 the factor n+1 becomes 1/2,
// so 2 M^n_k == M_k (mod p) for an integer matrix M_k that does not depend on p.
// Vectors multiply on the left throughout.

#include <cstdint>

#include "hwmat/curve.hpp"
#include "hwmat/intmatrix.hpp"
#include "hwmat/modarith.hpp"

namespace hwmat {

/// M_k: subdiagonal 2k*h_0, last column (r - i - 2k) * h_{r-i} in row i, zero elsewhere.
IntMatrix build_M(const CurveData& curve, std::uint64_t k);

/// M'_k = M_k when e = 1 and M_{2k-1} M_{2k} when e = 2.
IntMatrix build_Mprime(const CurveData& curve, std::uint64_t k);

/// V_0 = [0, ..., 0, 1] of length r.
IntVector initial_vector(const CurveData& curve);

/// v^n_m mod p by direct iteration of the p-dependent recurrence, starting
/// from v^n_0 = [0, ..., 0, h_0^n]. Throws Error{DivisorVanishes} if p | k*h_0
/// for some step k <= m.
ResidueVector naive_vnm(const CurveData& curve, std::uint64_t n, std::uint64_t m, std::uint64_t p);

} // namespace hwmat
