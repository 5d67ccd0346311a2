#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "hwmat/curve.hpp"
#include "hwmat/modarith.hpp"
#include "hwmat/remtree.hpp"

namespace hwmat {

enum class RowProvenance { Batch, SinglePrime };

/// First row (w_11(a), ..., w_1g(a)) of the Hasse-Witt matrix of y^2 = f(x + a) at p.
struct HasseWittRow {
    std::uint64_t p = 0;
    mpz_class a = 0;
    std::vector<Residue> entries;
    RowProvenance provenance = RowProvenance::Batch;
};

struct FirstRowOptions {
    std::optional<unsigned> kappa;  // default: default_kappa(depth)
    unsigned threads = 1;
    /// For e = 2, compute (2n)! with a second forest instead of using Wilson's -1.
    bool explicit_factorial = false;
    TreeObserver observer;
};

/// Depth l = ceil(log2 N) - 1 of the forest that covers every odd p <= N.
unsigned first_row_depth(std::uint64_t bound);

/// Rows for every admissible prime p <= bound: odd, good reduction, p not dividing h_0.
std::map<std::uint64_t, HasseWittRow> compute_first_rows(const CurveData& curve, std::uint64_t bound,
                                                         std::optional<unsigned> kappa_override = {});

/// Rows at exactly the given primes, each of which must be admissible for `curve`.
std::map<std::uint64_t, HasseWittRow> compute_first_rows(const CurveData& curve, std::uint64_t bound,
                                                         std::span<const std::uint64_t> primes,
                                                         const FirstRowOptions& options);

/// Linear scan u_k = u_{k-1} M_k over F_p with O(g) memory. fbar is renormalized
/// (its own c, e and h), so p may divide f_0. Throws Error{BadPrime} for p = 2 and
/// Error{NotHyperelliptic} when fbar is not squarefree of degree >= 3.
HasseWittRow compute_first_row_single(const FpPoly& fbar, std::uint64_t p);

/// All g rows for one prime, rows[i] belonging to a_list[i].
struct PrimeRows {
    std::uint64_t p = 0;
    std::vector<HasseWittRow> rows;
};

using RowBatchSink = std::function<void(std::vector<PrimeRows>&&)>;

/// Runs the forests of the translated curves f(x + a_i) in lockstep, one subtree
/// at a time, and hands each finished batch of primes (ascending) to `sink`.
/// Every prime in `primes` must be admissible for every translated curve.
void batch_interleaved(const CurveData& curve, std::uint64_t bound, std::span<const mpz_class> a_list,
                       std::span<const std::uint64_t> primes, const FirstRowOptions& options,
                       const RowBatchSink& sink);

/// Convenience form: primes are the BatchAdmissible ones from classify_primes.
std::vector<PrimeRows> batch_interleaved(const CurveData& curve, std::uint64_t bound,
                                         std::span<const mpz_class> a_list,
                                         const FirstRowOptions& options = {});

} // namespace hwmat
