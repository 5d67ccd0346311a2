#include "hwmat/recurrence.hpp"

#include <string>

#include "hwmat/errors.hpp"

namespace hwmat {

IntMatrix build_M(const CurveData& curve, std::uint64_t k)
{
    const auto r = static_cast<std::size_t>(curve.r);
    IntMatrix m(r, r);
    const mpz_class two_k = mpz_class(2) * static_cast<unsigned long>(k);
    const mpz_class sub = two_k * curve.h0();
    for (std::size_t i = 0; i < r; ++i) {
        m(i, r - 1) = (mpz_class(static_cast<unsigned long>(r - i)) - two_k) * curve.h[r - i];
        if (i > 0)
            m(i, i - 1) = sub;
    }
    return m;
}

IntMatrix build_Mprime(const CurveData& curve, std::uint64_t k)
{
    if (curve.e == 1)
        return build_M(curve, k);
    return build_M(curve, 2 * k - 1) * build_M(curve, 2 * k);
}

IntVector initial_vector(const CurveData& curve)
{
    IntVector v(static_cast<std::size_t>(curve.r));
    v.back() = 1;
    return v;
}

ResidueVector naive_vnm(const CurveData& curve, std::uint64_t n, std::uint64_t m, std::uint64_t p)
{
    const auto r = static_cast<std::size_t>(curve.r);
    std::vector<Residue> h(r + 1);
    for (std::size_t i = 0; i <= r; ++i)
        h[i] = reduce(curve.h[i], p);

    ResidueVector v{p, std::vector<Residue>(r, 0)};
    v.entries.back() = pow_mod(h[0], n, p);
    const Residue n1 = (n + 1) % p;
    for (std::uint64_t k = 1; k <= m; ++k) {
        const Residue kk = k % p;
        const Residue denom = mul_mod(kk, h[0], p);
        if (denom == 0)
            throw Error(ErrorCode::DivisorVanishes,
                        "p=" + std::to_string(p) + " divides k*h_0 at k=" + std::to_string(k));
        // new last entry: sum_{j=1..r} ((n+1) j - k) h_j h^n_{k-j}; entry r-j of v holds h^n_{k-j}.
        Residue last = 0;
        for (std::size_t j = 1; j <= r; ++j) {
            const Residue coef = sub_mod(mul_mod(n1, j % p, p), kk, p);
            last = add_mod(last, mul_mod(mul_mod(coef, h[j], p), v.entries[r - j], p), p);
        }
        const Residue inv = mod_inverse(denom, p);
        for (std::size_t i = 0; i + 1 < r; ++i)
            v.entries[i] = v.entries[i + 1];
        v.entries[r - 1] = mul_mod(last, inv, p);
    }
    return v;
}

} // namespace hwmat
