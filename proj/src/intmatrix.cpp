#include "hwmat/intmatrix.hpp"

#include <algorithm>

#include "hwmat/errors.hpp"
#include "ntt.hpp"

namespace hwmat {

namespace {

std::size_t max_limbs(std::span<const mpz_class> xs)
{
    std::size_t n = 0;
    for (const auto& x : xs)
        n = std::max(n, mpz_size(x.get_mpz_t()));
    return n;
}

} // namespace

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

std::size_t IntMatrix::nonzero_count() const
{
    std::size_t count = 0;
    for (const auto& x : data_)
        count += (sgn(x) != 0);
    return count;
}

std::size_t IntMatrix::limb_bytes() const
{
    std::size_t bytes = 0;
    for (const auto& x : data_)
        bytes += hwmat::limb_bytes(x);
    return bytes;
}

bool IntMatrix::operator==(const IntMatrix& other) const
{
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorCode::InvalidArgument, "matrix dimension mismatch");
    IntMatrix c(a.rows(), b.cols());
    if (detail::ntt_pays_off(max_limbs(a.entries()), max_limbs(b.entries()), a.rows(), a.cols(), b.cols())) {
        detail::ntt_matmul(a.entries(), b.entries(), c.entries(), a.rows(), a.cols(), b.cols());
        return c;
    }
    // Leaves are sparse (subdiagonal plus one column), so skip zero multipliers.
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const mpz_class& aik = a(i, k);
            if (sgn(aik) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                const mpz_class& bkj = b(k, j);
                if (sgn(bkj) != 0)
                    mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
            }
        }
    return c;
}

IntVector operator*(const IntVector& v, const IntMatrix& m)
{
    if (v.size() != m.rows())
        throw Error(ErrorCode::InvalidArgument, "vector/matrix dimension mismatch");
    IntVector out(m.cols());
    if (detail::ntt_pays_off(max_limbs(v), max_limbs(m.entries()), 1, m.rows(), m.cols())) {
        detail::ntt_matmul(v, m.entries(), out, 1, m.rows(), m.cols());
        return out;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (sgn(v[k]) == 0)
            continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (sgn(m(k, j)) != 0)
                mpz_addmul(out[j].get_mpz_t(), v[k].get_mpz_t(), m(k, j).get_mpz_t());
    }
    return out;
}

std::size_t limb_bytes(const mpz_class& x)
{
    return mpz_size(x.get_mpz_t()) * sizeof(mp_limb_t);
}

std::size_t limb_bytes(const IntVector& v)
{
    std::size_t bytes = 0;
    for (const auto& x : v)
        bytes += limb_bytes(x);
    return bytes;
}

} // namespace hwmat
