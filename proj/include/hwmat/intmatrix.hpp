#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace hwmat {

using IntVector = std::vector<mpz_class>;

/// Dense row-major matrix of signed arbitrary-precision integers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const mpz_class> entries() const noexcept { return data_; }
    std::span<mpz_class> entries() noexcept { return data_; }

    std::size_t nonzero_count() const;
    /// Bytes of limb storage currently held by the entries.
    std::size_t limb_bytes() const;

    bool operator==(const IntMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<mpz_class> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

/// Row vector times matrix.
IntVector operator*(const IntVector& v, const IntMatrix& m);

std::size_t limb_bytes(const mpz_class& x);
std::size_t limb_bytes(const IntVector& v);

} // namespace hwmat
