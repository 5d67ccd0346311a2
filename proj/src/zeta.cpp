#include "hwmat/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "hwmat/errors.hpp"

namespace hwmat {

std::vector<Residue> charpoly_modp(const ResidueMatrix& w)
{
    const std::size_t n = w.size();
    const std::uint64_t p = w.modulus();
    ResidueMatrix h = w;

    // Similarity transforms to upper Hessenberg form.
    for (std::size_t m = 1; m + 1 < n; ++m) {
        std::size_t i = m;
        while (i < n && h(i, m - 1) == 0)
            ++i;
        if (i == n)
            continue;
        if (i != m) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(h(i, j), h(m, j));
            for (std::size_t j = 0; j < n; ++j)
                std::swap(h(j, i), h(j, m));
        }
        const Residue inv = mod_inverse(h(m, m - 1), p);
        for (std::size_t r = m + 1; r < n; ++r) {
            const Residue u = mul_mod(h(r, m - 1), inv, p);
            if (u == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                h(r, j) = sub_mod(h(r, j), mul_mod(u, h(m, j), p), p);
            for (std::size_t j = 0; j < n; ++j)
                h(j, m) = add_mod(h(j, m), mul_mod(u, h(j, r), p), p);
        }
    }

    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (h_{k,k-1} ... h_{i+1,i}) p_{i-1}   (1-based)
    const auto at = [&h](std::size_t i, std::size_t j) { return h(i - 1, j - 1); };
    std::vector<std::vector<Residue>> polys(n + 1);
    polys[0] = {1 % p};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<Residue> next(k + 1, 0);
        const auto& prev = polys[k - 1];
        for (std::size_t d = 0; d < prev.size(); ++d) {
            next[d + 1] = add_mod(next[d + 1], prev[d], p);
            next[d] = sub_mod(next[d], mul_mod(at(k, k), prev[d], p), p);
        }
        Residue t = 1 % p;
        for (std::size_t i = k - 1; i >= 1; --i) {
            t = mul_mod(t, at(i + 1, i), p);
            const Residue coef = mul_mod(at(i, k), t, p);
            if (coef != 0)
                for (std::size_t d = 0; d < polys[i - 1].size(); ++d)
                    next[d] = sub_mod(next[d], mul_mod(coef, polys[i - 1][d], p), p);
        }
        polys[k] = std::move(next);
    }
    return polys[n];
}

ZetaRecord lpoly_modp(const HasseWittMatrix& w)
{
    ZetaRecord z;
    z.p = w.p;
    z.g = static_cast<int>(w.w.size());
    z.charpoly_modp = charpoly_modp(w.w);
    z.lp_modp.assign(z.charpoly_modp.rbegin(), z.charpoly_modp.rend());
    for (std::size_t i = 0; i < w.w.size(); ++i)
        z.trace_modp = add_mod(z.trace_modp, w.w(i, i), w.p);
    return z;
}

std::optional<std::int64_t> lift_trace(const HasseWittMatrix& w, int g)
{
    const std::uint64_t p = w.p;
    const auto gg = static_cast<unsigned __int128>(g);
    if (static_cast<unsigned __int128>(p) <= 16 * gg * gg)
        return std::nullopt;
    Residue tr = 0;
    for (std::size_t i = 0; i < w.w.size(); ++i)
        tr = add_mod(tr, w.w(i, i), p);
    const auto signed_tr = static_cast<__int128>(tr);
    const __int128 t = tr <= p / 2 ? signed_tr : signed_tr - static_cast<__int128>(p);
    if (static_cast<unsigned __int128>(t * t) > 4 * gg * gg * p)
        return std::nullopt;
    return static_cast<std::int64_t>(t);
}

ZetaRecord zeta_record(const HasseWittMatrix& w)
{
    ZetaRecord z = lpoly_modp(w);
    z.trace_lifted = lift_trace(w, z.g);
    if (z.trace_lifted)
        z.a1_normalized = -static_cast<double>(*z.trace_lifted) / std::sqrt(static_cast<double>(w.p));
    return z;
}

double Histogram::density(std::size_t bin) const
{
    if (total == 0)
        return 0.0;
    return static_cast<double>(counts[bin]) / (static_cast<double>(total) * bin_width());
}

Histogram a1_histogram(std::span<const TracePoint> points, int g, std::size_t bins)
{
    if (bins == 0)
        throw Error(ErrorCode::InvalidArgument, "need at least one bin");
    if (points.empty())
        throw Error(ErrorCode::EmptyInput, "no records with a lifted trace");
    Histogram hist;
    hist.lo = -2.0 * g;
    hist.hi = 2.0 * g;
    hist.counts.assign(bins, 0);
    const double width = hist.bin_width();
    for (const auto& point : points) {
        const double a1 = -static_cast<double>(point.trace) / std::sqrt(static_cast<double>(point.p));
        auto bin = static_cast<long>(std::floor((a1 - hist.lo) / width));
        bin = std::clamp(bin, 0L, static_cast<long>(bins) - 1);
        ++hist.counts[static_cast<std::size_t>(bin)];
        ++hist.total;
    }
    return hist;
}

Histogram a1_histogram(std::span<const ZetaRecord> records, std::size_t bins)
{
    std::vector<TracePoint> points;
    int g = 0;
    for (const auto& z : records) {
        if (!z.trace_lifted)
            continue;
        points.push_back({z.p, *z.trace_lifted});
        g = z.g;
    }
    return a1_histogram(points, g, bins);
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram)
{
    out << "bin_lo,bin_hi,count,density\n";
    const double width = histogram.bin_width();
    out << std::setprecision(10);
    for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
        const double lo = histogram.lo + width * static_cast<double>(i);
        out << lo << ',' << lo + width << ',' << histogram.counts[i] << ',' << histogram.density(i) << '\n';
    }
}

} // namespace hwmat
