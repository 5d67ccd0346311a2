#pragma once

// Word-size modular arithmetic, F_p[x] polynomials and small matrices over F_p.
// Moduli are odd and below 2^63 so that products fit in unsigned __int128.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace hwmat {

using Residue = std::uint64_t;

inline Residue mul_mod(Residue a, Residue b, std::uint64_t m)
{
    return static_cast<Residue>(static_cast<unsigned __int128>(a) * b % m);
}

inline Residue add_mod(Residue a, Residue b, std::uint64_t m)
{
    Residue s = a + b;
    return s >= m ? s - m : s;
}

inline Residue sub_mod(Residue a, Residue b, std::uint64_t m)
{
    return a >= b ? a - b : a + (m - b);
}

inline Residue neg_mod(Residue a, std::uint64_t m) { return a == 0 ? 0 : m - a; }

Residue pow_mod(Residue base, std::uint64_t exp, std::uint64_t m);

/// Least non-negative residue of an arbitrary integer.
Residue reduce(const mpz_class& a, std::uint64_t m);
Residue reduce(std::int64_t a, std::uint64_t m);

/// Legendre symbol (a|p) by quadratic reciprocity (binary Jacobi algorithm).
int legendre(const mpz_class& a, std::uint64_t p);
int legendre(std::int64_t a, std::uint64_t p);

/// Inverse of a modulo m; throws Error{NotInvertible} when gcd(a, m) != 1.
Residue mod_inverse(Residue a, std::uint64_t m);

bool is_prime(std::uint64_t n);

struct ResidueVector {
    std::uint64_t modulus = 1;
    std::vector<Residue> entries;
};

/// Dense square matrix over Z/pZ, row-major, entries in [0, p).
class ResidueMatrix {
public:
    ResidueMatrix() = default;
    ResidueMatrix(std::size_t n, std::uint64_t p) : n_(n), p_(p), data_(n * n, 0) {}

    static ResidueMatrix identity(std::size_t n, std::uint64_t p);

    std::size_t size() const noexcept { return n_; }
    std::uint64_t modulus() const noexcept { return p_; }

    Residue& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    Residue operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const Residue> data() const noexcept { return data_; }

    bool operator==(const ResidueMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::uint64_t p_ = 1;
    std::vector<Residue> data_;
};

ResidueMatrix operator*(const ResidueMatrix& a, const ResidueMatrix& b);

/// Polynomial over F_p, coefficients constant term first, no trailing zeros.
class FpPoly {
public:
    FpPoly() = default;
    FpPoly(std::vector<Residue> coeffs, std::uint64_t p);

    static FpPoly from_integers(std::span<const mpz_class> coeffs, std::uint64_t p);

    std::uint64_t modulus() const noexcept { return p_; }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    Residue coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    const std::vector<Residue>& coeffs() const noexcept { return c_; }

    Residue evaluate(Residue x) const;
    FpPoly derivative() const;
    /// f(x + a).
    FpPoly translate(Residue a) const;

    friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
    friend FpPoly operator%(const FpPoly& a, const FpPoly& b);
    bool operator==(const FpPoly&) const = default;

private:
    void trim();

    std::vector<Residue> c_;
    std::uint64_t p_ = 1;
};

FpPoly gcd(FpPoly a, FpPoly b);
FpPoly pow(const FpPoly& f, std::uint64_t e);
bool is_squarefree(const FpPoly& f);

/// Hasse-Witt matrix straight from the definition: w_ij is the coefficient of
/// x^(p*i - j) in fbar^((p-1)/2), 1 <= i, j <= g. Schoolbook products make this
/// O(p^2 g^2); it is the reference every faster path is checked against.
ResidueMatrix direct_expansion_matrix(const FpPoly& fbar, int g, std::uint64_t p);

} // namespace hwmat
