#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "hwmat/curve.hpp"
#include "hwmat/modarith.hpp"
#include "hwmat/reconstruct.hpp"

namespace hwmat {

struct DriverOptions {
    std::optional<unsigned> kappa;
    unsigned threads = 1;
    /// Translations a_1..a_g; empty means a_i = i - 1.
    std::vector<mpz_class> translations;
    bool explicit_factorial = false;
};

/// Whole W_p at one prime from first rows of f(x + a) for a = 0, ..., g-1.
/// Throws Error{GenusExceedsPrime} when g > p.
HasseWittMatrix compute_matrix_single(const FpPoly& fbar, std::uint64_t p);

using MatrixSink = std::function<void(HasseWittMatrix&&)>;

/// W_p for every odd prime p <= bound of good reduction, each exactly once, in
/// ascending order of p:
///   p < g                direct expansion of f^((p-1)/2),
///   p in the exceptional set   compute_matrix_single,
///   everything else      batch first rows of the g translates, then reconstruction.
void compute_matrices(const CurveData& curve, std::uint64_t bound, const DriverOptions& options,
                      const MatrixSink& sink);

std::vector<HasseWittMatrix> compute_matrices(const CurveData& curve, std::uint64_t bound,
                                              const DriverOptions& options = {});

/// The translations the driver uses for `curve` under `options`.
std::vector<mpz_class> driver_translations(const CurveData& curve, const DriverOptions& options);

} // namespace hwmat
