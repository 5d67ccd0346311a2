#include "hwmat/firstrow.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <utility>

#include "hwmat/errors.hpp"
#include "hwmat/recurrence.hpp"

namespace hwmat {

unsigned first_row_depth(std::uint64_t bound)
{
    if (bound <= 2)
        return 0;
    unsigned ceil_log = 0;
    while ((std::uint64_t{1} << ceil_log) < bound)
        ++ceil_log;
    return ceil_log - 1;
}

namespace {

// Forest state for one translated curve: u_n = V_0 M'_1 ... M'_n mod m_n and,
// when needed, delta_n = (en)! mod m_n, advanced one subtree at a time.
class FirstRowEngine {
public:
    FirstRowEngine(CurveData curve, mpz_class a, const std::vector<std::uint64_t>& moduli, unsigned kappa,
                   const FirstRowOptions& options)
        : curve_(std::make_shared<const CurveData>(std::move(curve))), a_(std::move(a))
    {
        const ForestPlan plan{kappa, options.threads};
        matrices_ = std::make_unique<RemainderForest>(
            initial_vector(*curve_), [c = curve_](std::size_t k) { return build_Mprime(*c, k + 1); }, moduli,
            plan, options.observer);
        if (curve_->e == 1 || options.explicit_factorial) {
            const int e = curve_->e;
            factorials_ = std::make_unique<RemainderForest>(
                IntVector{mpz_class(1)},
                [e](std::size_t k) {
                    IntMatrix m(1, 1);
                    if (e == 1)
                        m(0, 0) = static_cast<unsigned long>(k + 1);
                    else
                        m(0, 0) = mpz_class(static_cast<unsigned long>(2 * k + 1)) *
                                  static_cast<unsigned long>(2 * k + 2);
                    return m;
                },
                moduli, plan);
        }
    }

    bool done() const { return matrices_->done(); }

    /// Rows for the primes of the next subtree, ascending by p.
    std::vector<HasseWittRow> next(const std::vector<std::uint64_t>& moduli)
    {
        SubtreeOutput u = matrices_->next();
        SubtreeOutput delta;
        if (factorials_)
            delta = factorials_->next();

        std::vector<HasseWittRow> rows;
        const auto r = static_cast<std::size_t>(curve_->r);
        const auto g = static_cast<std::size_t>(curve_->g);
        for (std::size_t j = 0; j < u.values.size(); ++j) {
            const std::size_t n = u.first + j;
            const std::uint64_t p = moduli[n];
            if (p == 1)
                continue;
            Residue d = p - 1;  // Wilson: (p-1)! = -1
            if (factorials_)
                d = reduce(delta.values[j][0], p);
            // (2|p)^e / ((h_0|p)^(e-1) delta_n)
            Residue denom = d;
            if (curve_->e == 2 && legendre(curve_->h0(), p) < 0)
                denom = neg_mod(denom, p);
            Residue scale = mod_inverse(denom, p);
            if (curve_->e == 1 && legendre(std::int64_t{2}, p) < 0)
                scale = neg_mod(scale, p);

            HasseWittRow row;
            row.p = p;
            row.a = a_;
            row.provenance = RowProvenance::Batch;
            row.entries.resize(g);
            const IntVector& v = u.values[j];
            for (std::size_t k = 0; k < g; ++k)
                row.entries[k] = mul_mod(reduce(v[r - 1 - k], p), scale, p);
            rows.push_back(std::move(row));
        }
        return rows;
    }

private:
    std::shared_ptr<const CurveData> curve_;
    mpz_class a_;
    std::unique_ptr<RemainderForest> matrices_;
    std::unique_ptr<RemainderForest> factorials_;
};

std::vector<std::uint64_t> moduli_for(std::uint64_t bound, std::span<const std::uint64_t> primes)
{
    const std::size_t b = std::size_t{1} << first_row_depth(bound);
    std::vector<std::uint64_t> moduli(b, 1);
    for (std::uint64_t p : primes) {
        if (p < 3 || p > bound || p % 2 == 0)
            throw Error(ErrorCode::InvalidArgument, "prime " + std::to_string(p) + " is out of range");
        moduli[(p - 1) / 2] = p;
    }
    return moduli;
}

unsigned kappa_for(std::uint64_t bound, const FirstRowOptions& options)
{
    const unsigned depth = first_row_depth(bound);
    return options.kappa ? std::min(*options.kappa, depth) : default_kappa(depth);
}

} // namespace

std::map<std::uint64_t, HasseWittRow> compute_first_rows(const CurveData& curve, std::uint64_t bound,
                                                         std::span<const std::uint64_t> primes,
                                                         const FirstRowOptions& options)
{
    std::map<std::uint64_t, HasseWittRow> out;
    if (bound <= 2 || primes.empty())
        return out;
    const auto moduli = moduli_for(bound, primes);
    FirstRowEngine engine(curve, 0, moduli, kappa_for(bound, options), options);
    while (!engine.done())
        for (auto& row : engine.next(moduli))
            out.emplace(row.p, std::move(row));
    return out;
}

std::map<std::uint64_t, HasseWittRow> compute_first_rows(const CurveData& curve, std::uint64_t bound,
                                                         std::optional<unsigned> kappa_override)
{
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p : primes_up_to(bound)) {
        if (p == 2 || !has_good_reduction(curve, p))
            continue;
        if (mpz_divisible_ui_p(curve.h0().get_mpz_t(), static_cast<unsigned long>(p)))
            continue;
        primes.push_back(p);
    }
    FirstRowOptions options;
    options.kappa = kappa_override;
    return compute_first_rows(curve, bound, primes, options);
}

HasseWittRow compute_first_row_single(const FpPoly& fbar, std::uint64_t p)
{
    if (p == 2)
        throw Error(ErrorCode::BadPrime, "characteristic 2 is not supported");
    if (p % 2 == 0 || p < 3 || fbar.modulus() != p)
        throw Error(ErrorCode::InvalidArgument, "expected an odd prime matching the polynomial's field");
    const long d = fbar.degree();
    if (d < 3 || !is_squarefree(fbar))
        throw Error(ErrorCode::NotHyperelliptic,
                    "f is not squarefree of degree >= 3 modulo " + std::to_string(p));
    const auto g = static_cast<std::size_t>((d - 1) / 2);
    std::size_t c = 0;
    while (fbar.coeff(c) == 0)
        ++c;
    const auto r = static_cast<std::size_t>(d) - c;
    const int e = 2 - static_cast<int>(c);
    std::vector<Residue> h(r + 1);
    for (std::size_t i = 0; i <= r; ++i)
        h[i] = fbar.coeff(i + c);

    // Row i of M_k has last-column entry (r - i - 2k) h_{r-i}; track it incrementally.
    std::vector<Residue> column(r), step(r);
    for (std::size_t i = 0; i < r; ++i) {
        column[i] = mul_mod((r - i) % p, h[r - i], p);
        step[i] = mul_mod(2, h[r - i], p);
    }
    const Residue two_h0 = mul_mod(2, h[0], p);

    std::vector<Residue> u(r, 0);
    u[r - 1] = 1;
    Residue delta = 1;
    Residue sub = 0;  // 2k h_0
    const std::uint64_t n = (p - 1) / 2;
    const std::uint64_t steps = static_cast<std::uint64_t>(e) * n;
    for (std::uint64_t k = 1; k <= steps; ++k) {
        sub = add_mod(sub, two_h0, p);
        Residue last = 0;
        for (std::size_t i = 0; i < r; ++i) {
            column[i] = sub_mod(column[i], step[i], p);
            last = add_mod(last, mul_mod(u[i], column[i], p), p);
        }
        for (std::size_t i = 0; i + 1 < r; ++i)
            u[i] = mul_mod(u[i + 1], sub, p);
        u[r - 1] = last;
        delta = mul_mod(delta, k % p, p);
    }

    Residue denom = delta;
    if (e == 2 && legendre(static_cast<std::int64_t>(h[0]), p) < 0)
        denom = neg_mod(denom, p);
    Residue scale = mod_inverse(denom, p);
    if (e == 1 && legendre(std::int64_t{2}, p) < 0)
        scale = neg_mod(scale, p);

    HasseWittRow row;
    row.p = p;
    row.provenance = RowProvenance::SinglePrime;
    row.entries.resize(g);
    for (std::size_t j = 0; j < g; ++j)
        row.entries[j] = mul_mod(u[r - 1 - j], scale, p);
    return row;
}

void batch_interleaved(const CurveData& curve, std::uint64_t bound, std::span<const mpz_class> a_list,
                       std::span<const std::uint64_t> primes, const FirstRowOptions& options,
                       const RowBatchSink& sink)
{
    if (bound <= 2 || primes.empty() || a_list.empty())
        return;
    const auto moduli = moduli_for(bound, primes);
    const unsigned kappa = kappa_for(bound, options);

    std::vector<FirstRowEngine> engines;
    engines.reserve(a_list.size());
    for (const auto& a : a_list)
        engines.emplace_back(normalize(translate(curve.f, a)), a, moduli, kappa, options);

    while (!engines.front().done()) {
        std::vector<std::vector<HasseWittRow>> per_curve;
        per_curve.reserve(engines.size());
        for (auto& engine : engines)
            per_curve.push_back(engine.next(moduli));

        std::vector<PrimeRows> batch(per_curve.front().size());
        for (std::size_t k = 0; k < batch.size(); ++k) {
            batch[k].p = per_curve.front()[k].p;
            for (auto& rows : per_curve) {
                if (rows.size() != batch.size() || rows[k].p != batch[k].p)
                    throw Error(ErrorCode::InvalidArgument, "translated forests fell out of step");
                batch[k].rows.push_back(std::move(rows[k]));
            }
        }
        if (!batch.empty())
            sink(std::move(batch));
    }
}

std::vector<PrimeRows> batch_interleaved(const CurveData& curve, std::uint64_t bound,
                                         std::span<const mpz_class> a_list, const FirstRowOptions& options)
{
    std::vector<std::uint64_t> primes;
    for (const auto& status : classify_primes(curve, bound, a_list))
        if (status.kind == PrimeKind::BatchAdmissible)
            primes.push_back(status.p);
    std::vector<PrimeRows> out;
    batch_interleaved(curve, bound, a_list, primes, options, [&out](std::vector<PrimeRows>&& batch) {
        for (auto& item : batch)
            out.push_back(std::move(item));
    });
    return out;
}

} // namespace hwmat
