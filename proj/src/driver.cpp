#include "hwmat/driver.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <string>

#include "hwmat/errors.hpp"
#include "hwmat/firstrow.hpp"
#include "parallel.hpp"

namespace hwmat {

HasseWittMatrix compute_matrix_single(const FpPoly& fbar, std::uint64_t p)
{
    const long d = fbar.degree();
    if (d < 3)
        throw Error(ErrorCode::NotHyperelliptic, "degree below 3 modulo " + std::to_string(p));
    const auto g = static_cast<std::uint64_t>((d - 1) / 2);
    if (g > p)
        throw Error(ErrorCode::GenusExceedsPrime,
                    "genus " + std::to_string(g) + " exceeds p=" + std::to_string(p));
    std::vector<HasseWittRow> rows;
    rows.reserve(g);
    for (std::uint64_t a = 0; a < g; ++a) {
        HasseWittRow row = compute_first_row_single(fbar.translate(a), p);
        row.a = static_cast<unsigned long>(a);
        rows.push_back(std::move(row));
    }
    HasseWittMatrix w = reconstruct_matrix(rows, p);
    w.provenance = MatrixProvenance::SinglePrimeWhole;
    return w;
}

std::vector<mpz_class> driver_translations(const CurveData& curve, const DriverOptions& options)
{
    if (options.translations.empty()) {
        std::vector<mpz_class> a;
        for (int i = 0; i < curve.g; ++i)
            a.emplace_back(i);
        return a;
    }
    if (options.translations.size() != static_cast<std::size_t>(curve.g))
        throw Error(ErrorCode::InvalidArgument, "need exactly g translations");
    for (std::size_t i = 0; i < options.translations.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (options.translations[i] == options.translations[j])
                throw Error(ErrorCode::DuplicateTranslations, "translations must be distinct");
    return options.translations;
}

void compute_matrices(const CurveData& curve, std::uint64_t bound, const DriverOptions& options,
                      const MatrixSink& sink)
{
    const std::vector<mpz_class> a_list = driver_translations(curve, options);
    const std::vector<PrimeStatus> statuses = classify_primes(curve, bound, a_list);

    std::vector<std::uint64_t> batch_primes;
    std::vector<PrimeStatus> individual;
    for (const auto& status : statuses) {
        if (status.kind == PrimeKind::BatchAdmissible)
            batch_primes.push_back(status.p);
        else if (status.kind != PrimeKind::Bad)
            individual.push_back(status);
    }

    // Small and exceptional primes are few; compute them up front and merge them
    // into the batch stream by p.
    std::vector<HasseWittMatrix> extra(individual.size());
    detail::parallel_for(individual.size(), options.threads, [&](std::size_t i) {
        const std::uint64_t p = individual[i].p;
        const FpPoly fbar = FpPoly::from_integers(curve.f, p);
        if (individual[i].kind == PrimeKind::SmallGood)
            extra[i] = HasseWittMatrix{p, direct_expansion_matrix(fbar, curve.g, p), MatrixProvenance::DirectExpansion};
        else
            extra[i] = compute_matrix_single(fbar, p);
    });
    auto pending = extra.begin();

    FirstRowOptions row_options;
    row_options.kappa = options.kappa;
    row_options.threads = options.threads;
    row_options.explicit_factorial = options.explicit_factorial;

    batch_interleaved(curve, bound, a_list, batch_primes, row_options, [&](std::vector<PrimeRows>&& batch) {
        std::vector<HasseWittMatrix> solved(batch.size());
        detail::parallel_for(batch.size(), options.threads, [&](std::size_t k) {
            solved[k] = reconstruct_matrix(batch[k].rows, batch[k].p);
        });
        for (auto& w : solved) {
            while (pending != extra.end() && pending->p < w.p)
                sink(std::move(*pending++));
            sink(std::move(w));
        }
    });
    while (pending != extra.end())
        sink(std::move(*pending++));
}

std::vector<HasseWittMatrix> compute_matrices(const CurveData& curve, std::uint64_t bound,
                                              const DriverOptions& options)
{
    std::vector<HasseWittMatrix> out;
    compute_matrices(curve, bound, options, [&out](HasseWittMatrix&& w) { out.push_back(std::move(w)); });
    return out;
}

} // namespace hwmat
