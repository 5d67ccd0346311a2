#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace hwmat {

using IntPoly = std::vector<mpz_class>;  // constant term first

/// Normalized model of y^2 = f(x) over Z.
///
/// f = x^c * h(x) with c in {0, 1}, h(0) != 0, deg f = d in {2g+1, 2g+2},
/// r = d - c = deg h, and e = 2 - c. The batch recurrence runs on h.
struct CurveData {
    IntPoly f;
    IntPoly h;
    int c = 0;
    int d = 0;
    int g = 0;
    int r = 0;
    int e = 2;

    const mpz_class& h0() const { return h.front(); }
};

/// Throws Error{DegreeOutOfRange | TooDivisibleByX | NotSquarefree}.
/// Trailing zero coefficients are ignored.
CurveData normalize(std::span<const mpz_class> f_coeffs);

/// Comma separated integers, constant term first: "23,19,17,13,11,7,5,3,2".
IntPoly parse_coefficients(std::string_view text);
std::string format_coefficients(std::span<const mpz_class> f);

mpz_class evaluate(std::span<const mpz_class> f, const mpz_class& x);
/// Exact Taylor shift f(x + a).
IntPoly translate(std::span<const mpz_class> f, const mpz_class& a);
/// gcd(f, f') has degree 0 over Q.
bool is_squarefree_over_q(std::span<const mpz_class> f);

/// Reduction of the model at p is squarefree of degree 2g+1 or 2g+2.
bool has_good_reduction(const CurveData& curve, std::uint64_t p);

enum class PrimeKind { Bad, SmallGood, ExceptionalGood, BatchAdmissible };

struct PrimeStatus {
    std::uint64_t p = 0;
    PrimeKind kind = PrimeKind::Bad;
};

/// All primes <= n, ascending (segmented sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

/// One status per prime p <= n (p = 2 is always Bad). For good p:
/// p < g is SmallGood; p dividing some a_i - a_j or some nonzero f(a_i) is
/// ExceptionalGood; everything else is BatchAdmissible.
std::vector<PrimeStatus> classify_primes(const CurveData& curve, std::uint64_t n,
                                         std::span<const mpz_class> a_list);

} // namespace hwmat
