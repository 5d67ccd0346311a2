#pragma once

#include <cstdint>
#include <span>

#include <gmpxx.h>

#include "hwmat/firstrow.hpp"
#include "hwmat/modarith.hpp"

namespace hwmat {

enum class MatrixProvenance { Reconstructed, DirectExpansion, SinglePrimeWhole };

struct HasseWittMatrix {
    std::uint64_t p = 0;
    ResidueMatrix w;
    MatrixProvenance provenance = MatrixProvenance::Reconstructed;
};

/// Upper triangular T(a) with t_ij = C(j-1, i-1) a^(j-i). Conjugating by it
/// gives the matrix of the translated curve: W(a) = T(a) W T(-a).
ResidueMatrix translation_matrix(const mpz_class& a, int g, std::uint64_t p);

/// w_j(a) = sum_{k=1..g} sum_{l=1..j-1} C(j-1, l-1) (-1)^(j-l) a^(k-1+j-l) w_kl,
/// the part of w_1j(a) contributed by columns 1..j-1 of W (j is 1-based).
/// Only those columns of `w` are read.
Residue correction_term(int j, const mpz_class& a, const ResidueMatrix& w);

/// Recovers W from first rows of W(a_1), ..., W(a_g), solving one Vandermonde
/// system per column. Throws Error{DuplicateTranslations} if two a_i agree mod p.
HasseWittMatrix reconstruct_matrix(std::span<const HasseWittRow> rows, std::uint64_t p);

} // namespace hwmat
