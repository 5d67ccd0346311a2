#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hwmat/modarith.hpp"
#include "hwmat/reconstruct.hpp"

namespace hwmat {

/// Zeta data at one prime recoverable from W_p.
struct ZetaRecord {
    std::uint64_t p = 0;
    int g = 0;
    std::vector<Residue> charpoly_modp;  // det(x I - W_p), x^0 .. x^g, monic
    std::vector<Residue> lp_modp;        // det(I - T W_p) == L_p(T) mod p, T^0 .. T^g
    Residue trace_modp = 0;
    std::optional<std::int64_t> trace_lifted;  // a_p = p + 1 - #C(F_p), when determined
    std::optional<double> a1_normalized;       // -a_p / sqrt(p)
};

/// det(x I - W) over F_p by reduction to Hessenberg form; coefficients x^0 .. x^n.
std::vector<Residue> charpoly_modp(const ResidueMatrix& w);

/// Char poly, L_p mod p and the trace of W; no lifting.
ZetaRecord lpoly_modp(const HasseWittMatrix& w);

/// The integer t == trace(W) mod p with t^2 <= 4 g^2 p. Only returned for
/// p > 16 g^2, where the interval is shorter than p and t is unique.
std::optional<std::int64_t> lift_trace(const HasseWittMatrix& w, int g);

/// lpoly_modp plus the lifted trace and normalized a_1.
ZetaRecord zeta_record(const HasseWittMatrix& w);

struct Histogram {
    double lo = 0;
    double hi = 0;
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
    double density(std::size_t bin) const;
};

/// Bins a_1 = -a_p / sqrt(p) over [-2g, 2g]. Bins are half-open except the last,
/// which is closed. Records without a lifted trace are skipped; throws
/// Error{EmptyInput} when nothing is left.
Histogram a1_histogram(std::span<const ZetaRecord> records, std::size_t bins);

/// Input to the histogram when records come from a file: just p and a_p.
struct TracePoint {
    std::uint64_t p = 0;
    std::int64_t trace = 0;
};

Histogram a1_histogram(std::span<const TracePoint> points, int g, std::size_t bins);

/// CSV with header `bin_lo,bin_hi,count,density`.
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

} // namespace hwmat
