#pragma once

// Exact integer matrix products through a three-prime number theoretic
// transform. Each entry is transformed once per prime, so an n x k by k x m
// product costs nk + km + nm transforms instead of nkm full multiplications.

#include <cstddef>
#include <span>

#include <gmpxx.h>

namespace hwmat::detail {

/// c[i m + j] = sum_t a[i k + t] b[t m + j]; row-major operands.
void ntt_matmul(std::span<const mpz_class> a, std::span<const mpz_class> b, std::span<mpz_class> c, std::size_t n,
                std::size_t k, std::size_t m);

/// Whether ntt_matmul is expected to beat entrywise GMP products for these
/// shapes, given the largest entry of each operand in limbs.
bool ntt_pays_off(std::size_t a_limbs, std::size_t b_limbs, std::size_t n, std::size_t k, std::size_t m);

} // namespace hwmat::detail
