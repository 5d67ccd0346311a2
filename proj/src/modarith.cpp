#include "hwmat/modarith.hpp"

#include <algorithm>
#include <utility>

#include "hwmat/errors.hpp"

namespace hwmat {

Residue pow_mod(Residue base, std::uint64_t exp, std::uint64_t m)
{
    if (m == 1)
        return 0;
    Residue result = 1;
    base %= m;
    while (exp) {
        if (exp & 1)
            result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

Residue reduce(const mpz_class& a, std::uint64_t m)
{
    if (m <= 0xffffffffULL)
        return mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(m));
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), mpz_class(static_cast<unsigned long>(m)).get_mpz_t());
    return r.get_ui();
}

Residue reduce(std::int64_t a, std::uint64_t m)
{
    std::int64_t mm = static_cast<std::int64_t>(m);
    std::int64_t r = a % mm;
    return static_cast<Residue>(r < 0 ? r + mm : r);
}

namespace {

// Jacobi symbol (a|n) for odd n, 0 <= a < n.
int jacobi(std::uint64_t a, std::uint64_t n)
{
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            std::uint64_t r = n & 7;
            if (r == 3 || r == 5)
                t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3)
            t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

} // namespace

int legendre(const mpz_class& a, std::uint64_t p) { return jacobi(reduce(a, p), p); }

int legendre(std::int64_t a, std::uint64_t p) { return jacobi(reduce(a, p), p); }

Residue mod_inverse(Residue a, std::uint64_t m)
{
    if (m == 1)
        return 0;
    // Extended Euclid on signed 128-bit to keep the Bezout coefficients exact.
    __int128 old_r = static_cast<__int128>(a % m), r = m;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_s -= q * s;
        std::swap(old_s, s);
    }
    if (old_r != 1)
        throw Error(ErrorCode::NotInvertible,
                    std::to_string(a) + " has no inverse modulo " + std::to_string(m));
    __int128 x = old_s % static_cast<__int128>(m);
    if (x < 0)
        x += m;
    return static_cast<Residue>(x);
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0)
            return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These witnesses are deterministic for all n < 2^64.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        Residue x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1)
                composite = false;
        }
        if (composite)
            return false;
    }
    return true;
}

ResidueMatrix ResidueMatrix::identity(std::size_t n, std::uint64_t p)
{
    ResidueMatrix m(n, p);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1 % p;
    return m;
}

ResidueMatrix operator*(const ResidueMatrix& a, const ResidueMatrix& b)
{
    const std::size_t n = a.size();
    const std::uint64_t p = a.modulus();
    ResidueMatrix c(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Residue aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                c(i, j) = add_mod(c(i, j), mul_mod(aik, b(k, j), p), p);
        }
    return c;
}

FpPoly::FpPoly(std::vector<Residue> coeffs, std::uint64_t p) : c_(std::move(coeffs)), p_(p)
{
    for (auto& x : c_)
        x %= p_;
    trim();
}

FpPoly FpPoly::from_integers(std::span<const mpz_class> coeffs, std::uint64_t p)
{
    std::vector<Residue> c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        c[i] = reduce(coeffs[i], p);
    return FpPoly(std::move(c), p);
}

void FpPoly::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

Residue FpPoly::evaluate(Residue x) const
{
    Residue acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = add_mod(mul_mod(acc, x, p_), *it, p_);
    return acc;
}

FpPoly FpPoly::derivative() const
{
    if (c_.size() <= 1)
        return FpPoly({}, p_);
    std::vector<Residue> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        d[i - 1] = mul_mod(c_[i], i % p_, p_);
    return FpPoly(std::move(d), p_);
}

FpPoly FpPoly::translate(Residue a) const
{
    // Horner's rule in the ring F_p[x]: f(x+a) = (...(c_d (x+a) + c_{d-1})(x+a) ...).
    a %= p_;
    std::vector<Residue> out;
    out.reserve(c_.size());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        out.push_back(0);
        for (std::size_t i = out.size() - 1; i > 0; --i)
            out[i] = add_mod(out[i - 1], mul_mod(out[i], a, p_), p_);
        out[0] = add_mod(mul_mod(out[0], a, p_), *it, p_);
    }
    return FpPoly(std::move(out), p_);
}

FpPoly operator*(const FpPoly& a, const FpPoly& b)
{
    const std::uint64_t p = a.p_;
    if (a.is_zero() || b.is_zero())
        return FpPoly({}, p);
    std::vector<unsigned __int128> acc(a.c_.size() + b.c_.size() - 1, 0);
    // Each partial product is < p^2 < 2^126 for p < 2^63; fold before overflow.
    const bool small = p < (1ULL << 32);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            unsigned __int128 t = static_cast<unsigned __int128>(a.c_[i]) * b.c_[j];
            if (small)
                acc[i + j] += t;
            else
                acc[i + j] = (acc[i + j] + t % p) % p;
        }
    }
    std::vector<Residue> c(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k)
        c[k] = static_cast<Residue>(acc[k] % p);
    return FpPoly(std::move(c), p);
}

FpPoly operator%(const FpPoly& a, const FpPoly& b)
{
    const std::uint64_t p = a.p_;
    if (b.is_zero())
        throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
    std::vector<Residue> r = a.c_;
    const std::size_t db = b.c_.size() - 1;
    const Residue inv_lead = mod_inverse(b.c_.back(), p);
    while (!r.empty() && r.size() - 1 >= db) {
        const std::size_t shift = r.size() - 1 - db;
        const Residue q = mul_mod(r.back(), inv_lead, p);
        for (std::size_t i = 0; i <= db; ++i)
            r[shift + i] = sub_mod(r[shift + i], mul_mod(q, b.c_[i], p), p);
        while (!r.empty() && r.back() == 0)
            r.pop_back();
    }
    return FpPoly(std::move(r), p);
}

FpPoly gcd(FpPoly a, FpPoly b)
{
    while (!b.is_zero()) {
        FpPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero())
        return a;
    const std::uint64_t p = a.modulus();
    const Residue inv = mod_inverse(a.coeffs().back(), p);
    std::vector<Residue> c = a.coeffs();
    for (auto& x : c)
        x = mul_mod(x, inv, p);
    return FpPoly(std::move(c), p);
}

FpPoly pow(const FpPoly& f, std::uint64_t e)
{
    FpPoly result({1}, f.modulus());
    FpPoly base = f;
    while (e) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return result;
}

bool is_squarefree(const FpPoly& f)
{
    if (f.degree() <= 0)
        return !f.is_zero();
    return gcd(f, f.derivative()).degree() == 0;
}

ResidueMatrix direct_expansion_matrix(const FpPoly& fbar, int g, std::uint64_t p)
{
    const FpPoly power = pow(fbar, (p - 1) / 2);
    ResidueMatrix w(static_cast<std::size_t>(g), p);
    for (int i = 1; i <= g; ++i)
        for (int j = 1; j <= g; ++j)
            w(i - 1, j - 1) = power.coeff(static_cast<std::size_t>(p) * i - j);
    return w;
}

} // namespace hwmat
