#include "hwmat/curve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "hwmat/errors.hpp"
#include "hwmat/modarith.hpp"

namespace hwmat {

namespace {

void trim(IntPoly& f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

long degree(const IntPoly& f) { return static_cast<long>(f.size()) - 1; }

IntPoly derivative(std::span<const mpz_class> f)
{
    IntPoly d;
    for (std::size_t i = 1; i < f.size(); ++i)
        d.push_back(f[i] * static_cast<unsigned long>(i));
    trim(d);
    return d;
}

void make_primitive(IntPoly& f)
{
    if (f.empty())
        return;
    mpz_class content = 0;
    for (const auto& c : f)
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content > 1)
        for (auto& c : f)
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
}

// lc(b)^k * a mod b, for the primitive remainder sequence.
IntPoly pseudo_remainder(IntPoly a, const IntPoly& b)
{
    const long db = degree(b);
    const mpz_class& lb = b.back();
    while (!a.empty() && degree(a) >= db) {
        const mpz_class la = a.back();
        const long shift = degree(a) - db;
        for (auto& c : a)
            c *= lb;
        for (long i = 0; i <= db; ++i)
            a[shift + i] -= la * b[i];
        trim(a);
    }
    return a;
}

} // namespace

bool is_squarefree_over_q(std::span<const mpz_class> f)
{
    IntPoly a(f.begin(), f.end());
    trim(a);
    IntPoly b = derivative(a);
    if (a.empty())
        return false;
    make_primitive(a);
    make_primitive(b);
    while (!b.empty()) {
        IntPoly r = pseudo_remainder(a, b);
        make_primitive(r);
        a = std::move(b);
        b = std::move(r);
    }
    return degree(a) == 0;
}

CurveData normalize(std::span<const mpz_class> f_coeffs)
{
    IntPoly f(f_coeffs.begin(), f_coeffs.end());
    trim(f);
    const long d = degree(f);
    if (d < 3)
        throw Error(ErrorCode::DegreeOutOfRange,
                    "degree " + std::to_string(d) + " is below 3");
    int c = 0;
    while (f[c] == 0)
        ++c;
    if (c >= 2)
        throw Error(ErrorCode::TooDivisibleByX, "x^2 divides f");
    if (!is_squarefree_over_q(f))
        throw Error(ErrorCode::NotSquarefree, "f has a repeated factor over Q");

    CurveData curve;
    curve.f = f;
    curve.c = c;
    curve.d = static_cast<int>(d);
    curve.g = static_cast<int>((d - 1) / 2);
    curve.r = curve.d - c;
    curve.e = 2 - c;
    curve.h.assign(f.begin() + c, f.end());
    return curve;
}

IntPoly parse_coefficients(std::string_view text)
{
    IntPoly f;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string token(text.substr(start, end - start));
        token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char ch) { return std::isspace(ch); }),
                    token.end());
        if (!token.empty() && token.front() == '+')
            token.erase(0, 1);
        mpz_class value;
        if (token.empty() || value.set_str(token, 10) != 0)
            throw Error(ErrorCode::InvalidArgument, "bad coefficient '" + token + "'");
        f.push_back(value);
        start = end + 1;
    }
    return f;
}

std::string format_coefficients(std::span<const mpz_class> f)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < f.size(); ++i)
        out << (i ? "," : "") << f[i].get_str();
    return out.str();
}

mpz_class evaluate(std::span<const mpz_class> f, const mpz_class& x)
{
    mpz_class acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

IntPoly translate(std::span<const mpz_class> f, const mpz_class& a)
{
    IntPoly out;
    out.reserve(f.size());
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        out.emplace_back(0);
        for (std::size_t i = out.size() - 1; i > 0; --i)
            out[i] = out[i - 1] + out[i] * a;
        out[0] = out[0] * a + *it;
    }
    return out;
}

bool has_good_reduction(const CurveData& curve, std::uint64_t p)
{
    if (p == 2)
        return false;
    const FpPoly fbar = FpPoly::from_integers(curve.f, p);
    if (fbar.degree() < 2 * curve.g + 1)
        return false;
    return is_squarefree(fbar);
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n)
{
    std::vector<std::uint64_t> primes;
    if (n < 2)
        return primes;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))) + 1;
    std::vector<bool> small(root + 1, true);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i])
            continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i)
            small[j] = false;
    }
    constexpr std::uint64_t segment = 1 << 18;
    std::vector<char> sieve(segment);
    for (std::uint64_t lo = 2; lo <= n; lo += segment) {
        const std::uint64_t hi = std::min(n, lo + segment - 1);
        std::fill(sieve.begin(), sieve.end(), 1);
        for (std::uint64_t q : base) {
            if (q * q > hi)
                break;
            std::uint64_t start = std::max(q * q, (lo + q - 1) / q * q);
            for (std::uint64_t j = start; j <= hi; j += q)
                sieve[j - lo] = 0;
        }
        for (std::uint64_t i = lo; i <= hi; ++i)
            if (sieve[i - lo])
                primes.push_back(i);
    }
    return primes;
}

std::vector<PrimeStatus> classify_primes(const CurveData& curve, std::uint64_t n,
                                         std::span<const mpz_class> a_list)
{
    std::vector<mpz_class> differences;
    for (std::size_t i = 0; i < a_list.size(); ++i)
        for (std::size_t j = i + 1; j < a_list.size(); ++j)
            differences.push_back(abs(a_list[i] - a_list[j]));
    std::vector<mpz_class> values;
    for (const auto& a : a_list) {
        mpz_class v = abs(evaluate(curve.f, a));
        if (v != 0)
            values.push_back(v);
    }

    std::vector<PrimeStatus> out;
    for (std::uint64_t p : primes_up_to(n)) {
        PrimeStatus status{p, PrimeKind::Bad};
        if (has_good_reduction(curve, p)) {
            const auto divides = [p](const mpz_class& x) {
                return mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
            };
            if (p < static_cast<std::uint64_t>(curve.g))
                status.kind = PrimeKind::SmallGood;
            else if (std::any_of(differences.begin(), differences.end(), divides) ||
                     std::any_of(values.begin(), values.end(), divides))
                status.kind = PrimeKind::ExceptionalGood;
            else
                status.kind = PrimeKind::BatchAdmissible;
        }
        out.push_back(status);
    }
    return out;
}

} // namespace hwmat
