#include <doctest.h>

#include <random>

#include "hwmat/curve.hpp"
#include "hwmat/driver.hpp"
#include "hwmat/errors.hpp"
#include "hwmat/firstrow.hpp"
#include "hwmat/remtree.hpp"
#include "support/oracles.hpp"

using namespace hwmat;

namespace {

std::vector<mpz_class> ints(std::initializer_list<long> xs)
{
    std::vector<mpz_class> out;
    for (long x : xs)
        out.emplace_back(x);
    return out;
}

const std::vector<mpz_class> kExample = ints({23, 19, 17, 13, 11, 7, 5, 3, 2});

bool admissible(const CurveData& c, std::uint64_t p)
{
    return p > 2 && oracle::is_prime_trial(p) && oracle::good_reduction(c.f, p) && oracle::reduce(c.h0(), p) != 0;
}

} // namespace

TEST_CASE("depth of the first row forest")
{
    CHECK(first_row_depth(3) == 1);
    CHECK(first_row_depth(4) == 1);
    CHECK(first_row_depth(100) == 6);
    CHECK(first_row_depth(128) == 6);
    CHECK(first_row_depth(129) == 7);
}

TEST_CASE("batch row of the genus 3 example at p = 97")
{
    const CurveData c = normalize(kExample);
    const auto rows = compute_first_rows(c, 100);
    REQUIRE(rows.count(97) == 1);
    const HasseWittRow& row = rows.at(97);
    CHECK(row.entries == std::vector<Residue>{9, 37, 54});
    CHECK(row.provenance == RowProvenance::Batch);
    CHECK(row.a == 0);
}

TEST_CASE("x^3 + x + 1 at p = 5")
{
    const CurveData c = normalize(ints({1, 1, 0, 1}));
    const auto rows = compute_first_rows(c, 5);
    REQUIRE(rows.count(5) == 1);
    CHECK(rows.at(5).entries == std::vector<Residue>{2});
    const HasseWittRow single = compute_first_row_single(FpPoly({1, 1, 0, 1}, 5), 5);
    CHECK(single.entries == std::vector<Residue>{2});
    CHECK(single.provenance == RowProvenance::SinglePrime);
}

TEST_CASE("single prime rows of the translated example")
{
    const FpPoly f = FpPoly::from_integers(kExample, 97);
    CHECK(compute_first_row_single(f, 97).entries == std::vector<Residue>{9, 37, 54});
    CHECK(compute_first_row_single(f.translate(1), 97).entries == std::vector<Residue>{43, 60, 30});
    CHECK(compute_first_row_single(f.translate(2), 97).entries == std::vector<Residue>{5, 70, 84});
}

TEST_CASE("Wilson shortcut equals the explicit factorial forest")
{
    std::mt19937_64 rng(31);
    for (int t = 0; t < 4; ++t) {
        auto f = oracle::random_curve(rng, t % 3 + 1, 30);
        if (f[0] == 0)
            continue;
        const CurveData c = normalize(f);
        REQUIRE(c.e == 2);
        std::vector<std::uint64_t> primes;
        for (const auto p : primes_up_to(2000))
            if (admissible(c, p))
                primes.push_back(p);
        FirstRowOptions shortcut, explicit_forest;
        explicit_forest.explicit_factorial = true;
        const auto a = compute_first_rows(c, 2000, primes, shortcut);
        const auto b = compute_first_rows(c, 2000, primes, explicit_forest);
        REQUIRE(a.size() == b.size());
        for (const auto& [p, row] : a)
            CHECK(row.entries == b.at(p).entries);
    }
}

TEST_CASE("batch and single prime rows agree")
{
    std::mt19937_64 rng(32);
    for (int t = 0; t < 10; ++t) {
        const int g = t % 3 + 1;
        auto f = oracle::random_curve(rng, g, 50);
        if (t % 4 == 0) {
            // exercise e = 1
            auto shifted = f;
            shifted[0] = 0;
            if (shifted[1] != 0 && is_squarefree_over_q(shifted))
                f = shifted;
        }
        const CurveData c = normalize(f);
        const std::uint64_t N = 1u << 11;
        const auto rows = compute_first_rows(c, N);
        std::size_t expected_count = 0;
        for (const auto p : primes_up_to(N)) {
            if (!admissible(c, p))
                continue;
            ++expected_count;
            REQUIRE(rows.count(p) == 1);
            CHECK(rows.at(p).entries == compute_first_row_single(FpPoly::from_integers(c.f, p), p).entries);
        }
        CHECK(rows.size() == expected_count);
    }
}

TEST_CASE("first rows agree with direct expansion")
{
    std::mt19937_64 rng(33);
    for (int t = 0; t < 9; ++t) {
        const int g = t % 3 + 1;
        const auto f = oracle::random_curve(rng, g, 50);
        const CurveData c = normalize(f);
        const std::uint64_t N = 1u << 10;
        for (const auto& [p, row] : compute_first_rows(c, N, 2u)) {
            const auto w = oracle::hasse_witt(f, g, p);
            CHECK(row.entries == std::vector<Residue>(w[0].begin(), w[0].end()));
        }
    }
}

TEST_CASE("single prime scan renormalizes when p divides f_0")
{
    // f_0 = 7 vanishes mod 7, so the scan runs with c = 1 there.
    const auto f = ints({7, 3, 1, 0, 2, 1});
    const CurveData c = normalize(f);
    REQUIRE(c.e == 2);
    REQUIRE(oracle::good_reduction(f, 7));
    const auto w = oracle::hasse_witt(f, 2, 7);
    CHECK(compute_first_row_single(FpPoly::from_integers(f, 7), 7).entries ==
          std::vector<Residue>(w[0].begin(), w[0].end()));
}

TEST_CASE("single prime scan errors")
{
    CHECK_THROWS_AS(compute_first_row_single(FpPoly({1, 1, 0, 1}, 2), 2), Error);
    try {
        (void)compute_first_row_single(FpPoly({1, 1, 0, 1}, 2), 2);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadPrime);
    }
    try {
        // (x - 1)^2 (x + 1)
        (void)compute_first_row_single(FpPoly({1, 10, 10, 1}, 11), 11);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotHyperelliptic);
    }
    try {
        (void)compute_first_row_single(FpPoly({1, 1, 1}, 11), 11);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotHyperelliptic);
    }
}

TEST_CASE("fourth root of unity")
{
    // ((h_0|p)^(e-1) (en)!)^4 = 1 for admissible p, with (en)! from the scalar forest.
    for (const auto& f : {kExample, ints({0, 1, 0, 3, 0, 1}), ints({1, -1, 0, 0, 0, 0, 0, 1})}) {
        const CurveData c = normalize(f);
        const std::uint64_t N = 1u << 12;
        const std::size_t b = std::size_t{1} << first_row_depth(N);
        std::vector<mpz_class> values(b);
        std::vector<std::uint64_t> moduli(b, 1);
        for (std::size_t k = 0; k < b; ++k) {
            values[k] = c.e == 1 ? mpz_class(static_cast<unsigned long>(k + 1))
                                 : mpz_class(static_cast<unsigned long>((2 * k + 1) * (2 * k + 2)));
            if (admissible(c, 2 * k + 1))
                moduli[k] = 2 * k + 1;
        }
        const auto delta = scalar_remainder_forest(values, moduli, ForestPlan{default_kappa(first_row_depth(N)), 1});
        for (std::size_t n = 1; n < b; ++n) {
            const std::uint64_t p = moduli[n];
            if (p == 1)
                continue;
            std::uint64_t factorial = 1;
            for (std::uint64_t k = 2; k <= static_cast<std::uint64_t>(c.e) * n; ++k)
                factorial = oracle::mulmod(factorial, k, p);
            CHECK(delta[n] == factorial);
            std::uint64_t x = factorial;
            if (c.e == 2 && oracle::legendre_euler(static_cast<std::int64_t>(oracle::reduce(c.h0(), p)), p) < 0)
                x = p - x;
            CHECK(oracle::powmod(x, 4, p) == 1);
            if (c.e == 2)
                CHECK(factorial == p - 1);
        }
    }
}

TEST_CASE("interleaved batches equal independent runs")
{
    const CurveData c = normalize(ints({1, 2, 0, -1, 0, 3, 1}));
    const auto a_list = driver_translations(c, {});
    const std::uint64_t N = 3000;
    FirstRowOptions options;
    options.kappa = 3;
    std::vector<std::size_t> batch_sizes;
    std::vector<PrimeRows> all;
    std::vector<std::uint64_t> primes;
    for (const auto& s : classify_primes(c, N, a_list))
        if (s.kind == PrimeKind::BatchAdmissible)
            primes.push_back(s.p);
    batch_interleaved(c, N, a_list, primes, options, [&](std::vector<PrimeRows>&& batch) {
        batch_sizes.push_back(batch.size());
        for (auto& item : batch)
            all.push_back(std::move(item));
    });
    CHECK(batch_sizes.size() <= 8);
    REQUIRE(all.size() == primes.size());
    for (std::size_t i = 0; i < a_list.size(); ++i) {
        const CurveData shifted = normalize(translate(c.f, a_list[i]));
        const auto independent = compute_first_rows(shifted, N, primes, options);
        for (const auto& item : all) {
            REQUIRE(item.rows.size() == a_list.size());
            CHECK(item.rows[i].a == a_list[i]);
            CHECK(item.rows[i].entries == independent.at(item.p).entries);
        }
    }
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].p < all[i].p);
    CHECK(batch_interleaved(c, N, a_list, options).size() == all.size());
}

TEST_CASE("e = 1 and e = 2 models agree after conjugation")
{
    // f(0) = 0 gives e = 1; f(x + 3) has f(3) != 0 and runs with e = 2.
    const auto f = ints({0, 2, -1, 1, 0, 1});
    const CurveData c = normalize(f);
    REQUIRE(c.e == 1);
    const mpz_class t = 3;
    const CurveData shifted = normalize(translate(f, t));
    REQUIRE(shifted.e == 2);
    const std::uint64_t N = 700;
    const auto direct = compute_matrices(c, N);
    const auto moved = compute_matrices(shifted, N);
    REQUIRE(direct.size() == moved.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        const std::uint64_t p = direct[i].p;
        REQUIRE(moved[i].p == p);
        const ResidueMatrix conj = translation_matrix(t, c.g, p) * direct[i].w * translation_matrix(-t, c.g, p);
        CHECK(conj == moved[i].w);
    }
}
