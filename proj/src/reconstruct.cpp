#include "hwmat/reconstruct.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hwmat/errors.hpp"

namespace hwmat {

namespace {

// Rows 0..n of Pascal's triangle, exact, reduced mod p on demand.
class Binomials {
public:
    Binomials(int n, std::uint64_t p) : n_(n + 1), table_(static_cast<std::size_t>(n_ * n_))
    {
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k <= i; ++k) {
                mpz_class c;
                mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(k));
                table_[static_cast<std::size_t>(i * n_ + k)] = reduce(c, p);
            }
        }
    }

    Residue operator()(int i, int k) const
    {
        if (k < 0 || k > i)
            return 0;
        return table_[static_cast<std::size_t>(i * n_ + k)];
    }

private:
    int n_;
    std::vector<Residue> table_;
};

// Inverse of the Vandermonde matrix [a_i^k] by Gauss-Jordan elimination over F_p.
ResidueMatrix vandermonde_inverse(const std::vector<Residue>& a, std::uint64_t p)
{
    const std::size_t g = a.size();
    ResidueMatrix m(g, p), inv = ResidueMatrix::identity(g, p);
    for (std::size_t i = 0; i < g; ++i) {
        Residue x = 1 % p;
        for (std::size_t k = 0; k < g; ++k) {
            m(i, k) = x;
            x = mul_mod(x, a[i], p);
        }
    }
    for (std::size_t col = 0; col < g; ++col) {
        std::size_t pivot = col;
        while (pivot < g && m(pivot, col) == 0)
            ++pivot;
        if (pivot == g)
            throw Error(ErrorCode::DuplicateTranslations, "Vandermonde matrix is singular mod " + std::to_string(p));
        if (pivot != col)
            for (std::size_t k = 0; k < g; ++k) {
                std::swap(m(pivot, k), m(col, k));
                std::swap(inv(pivot, k), inv(col, k));
            }
        const Residue scale = mod_inverse(m(col, col), p);
        for (std::size_t k = 0; k < g; ++k) {
            m(col, k) = mul_mod(m(col, k), scale, p);
            inv(col, k) = mul_mod(inv(col, k), scale, p);
        }
        for (std::size_t row = 0; row < g; ++row) {
            if (row == col || m(row, col) == 0)
                continue;
            const Residue factor = m(row, col);
            for (std::size_t k = 0; k < g; ++k) {
                m(row, k) = sub_mod(m(row, k), mul_mod(factor, m(col, k), p), p);
                inv(row, k) = sub_mod(inv(row, k), mul_mod(factor, inv(col, k), p), p);
            }
        }
    }
    return inv;
}

// beta_l(a) = sum_k a^(k-1) w_kl, for one column l (0-based).
Residue beta(const ResidueMatrix& w, std::size_t column, Residue a)
{
    const std::uint64_t p = w.modulus();
    Residue acc = 0;
    for (std::size_t k = w.size(); k-- > 0;)
        acc = add_mod(mul_mod(acc, a, p), w(k, column), p);
    return acc;
}

// w_j(a) from precomputed beta values for columns 1..j-1.
Residue correction_from_betas(int j, Residue a, std::span<const Residue> betas, const Binomials& binom,
                              std::uint64_t p)
{
    const Residue minus_a = neg_mod(a, p);
    Residue acc = 0;
    for (int l = 1; l < j; ++l) {
        const Residue term = mul_mod(binom(j - 1, l - 1),
                                     mul_mod(pow_mod(minus_a, static_cast<std::uint64_t>(j - l), p),
                                             betas[static_cast<std::size_t>(l - 1)], p),
                                     p);
        acc = add_mod(acc, term, p);
    }
    return acc;
}

} // namespace

ResidueMatrix translation_matrix(const mpz_class& a, int g, std::uint64_t p)
{
    const Binomials binom(g, p);
    const Residue ar = reduce(a, p);
    ResidueMatrix t(static_cast<std::size_t>(g), p);
    for (int i = 1; i <= g; ++i)
        for (int j = i; j <= g; ++j)
            t(i - 1, j - 1) = mul_mod(binom(j - 1, i - 1), pow_mod(ar, static_cast<std::uint64_t>(j - i), p), p);
    return t;
}

Residue correction_term(int j, const mpz_class& a, const ResidueMatrix& w)
{
    const std::uint64_t p = w.modulus();
    const int g = static_cast<int>(w.size());
    if (j < 1 || j > g)
        throw Error(ErrorCode::InvalidArgument, "column index out of range");
    const Residue ar = reduce(a, p);
    const Binomials binom(g, p);
    std::vector<Residue> betas;
    for (int l = 1; l < j; ++l)
        betas.push_back(beta(w, static_cast<std::size_t>(l - 1), ar));
    return correction_from_betas(j, ar, betas, binom, p);
}

HasseWittMatrix reconstruct_matrix(std::span<const HasseWittRow> rows, std::uint64_t p)
{
    const std::size_t g = rows.size();
    if (g == 0)
        throw Error(ErrorCode::EmptyInput, "no rows to reconstruct from");
    std::vector<Residue> a(g);
    for (std::size_t i = 0; i < g; ++i) {
        if (rows[i].entries.size() != g)
            throw Error(ErrorCode::InvalidArgument, "row length differs from the number of rows");
        a[i] = reduce(rows[i].a, p);
        for (std::size_t k = 0; k < i; ++k)
            if (a[k] == a[i])
                throw Error(ErrorCode::DuplicateTranslations,
                            "translations " + rows[k].a.get_str() + " and " + rows[i].a.get_str() +
                                " agree mod " + std::to_string(p));
    }

    const ResidueMatrix vinv = vandermonde_inverse(a, p);
    const Binomials binom(static_cast<int>(g), p);
    HasseWittMatrix out{p, ResidueMatrix(g, p), MatrixProvenance::Reconstructed};
    ResidueMatrix& w = out.w;
    // betas[i][l] = beta_l(a_i) for solved columns l.
    std::vector<std::vector<Residue>> betas(g);
    std::vector<Residue> rhs(g);
    for (std::size_t j = 0; j < g; ++j) {
        for (std::size_t i = 0; i < g; ++i) {
            const Residue corr = correction_from_betas(static_cast<int>(j + 1), a[i], betas[i], binom, p);
            rhs[i] = sub_mod(rows[i].entries[j] % p, corr, p);
        }
        for (std::size_t k = 0; k < g; ++k) {
            Residue acc = 0;
            for (std::size_t i = 0; i < g; ++i)
                acc = add_mod(acc, mul_mod(vinv(k, i), rhs[i], p), p);
            w(k, j) = acc;
        }
        for (std::size_t i = 0; i < g; ++i)
            betas[i].push_back(beta(w, j, a[i]));
    }
    return out;
}

} // namespace hwmat
