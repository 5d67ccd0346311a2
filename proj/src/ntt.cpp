#include "ntt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hwmat/errors.hpp"

namespace hwmat::detail {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::size_t kPrimes = 3;
// c 2^s + 1 below 2^62, so lazy values up to 4q fit in a word.
constexpr std::array<u64, kPrimes> kModulus = {4179340454199820289ull, 2485986994308513793ull,
                                                2936346957045563393ull};
constexpr std::array<u64, kPrimes> kGenerator = {3, 5, 3};
constexpr unsigned kMaxLog = 54;

u64 mul_mod(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

u64 pow_mod(u64 a, u64 e, u64 q)
{
    u64 r = 1;
    for (; e; e >>= 1, a = mul_mod(a, a, q))
        if (e & 1)
            r = mul_mod(r, a, q);
    return r;
}

u64 shoup_companion(u64 w, u64 q) { return static_cast<u64>((static_cast<u128>(w) << 64) / q); }

// x w mod q, result in [0, 2q), for any x < 2^64.
inline u64 shoup(u64 x, u64 w, u64 wp, u64 q)
{
    const u64 hi = static_cast<u64>((static_cast<u128>(x) * wp) >> 64);
    return x * w - hi * q;
}

struct Prime {
    u64 q = 0;
    u64 qinv_neg = 0;  // -q^-1 mod 2^64
    u64 r_mod = 0;     // 2^64 mod q
};

Prime make_prime(u64 q)
{
    Prime p;
    p.q = q;
    u64 inv = 1;
    for (int i = 0; i < 6; ++i)
        inv *= 2 - q * inv;
    p.qinv_neg = ~inv + 1;
    p.r_mod = static_cast<u64>((static_cast<u128>(1) << 64) % q);
    return p;
}

// a b / 2^64 mod q in [0, 2q), for a b < q 2^64.
inline u64 redc(u128 t, const Prime& p)
{
    const u64 m = static_cast<u64>(t) * p.qinv_neg;
    return static_cast<u64>((t + static_cast<u128>(m) * p.q) >> 64);
}

struct Tables {
    std::vector<u64> fw, fwp;  // forward twiddles w_{2h}^j at index h + j
    std::vector<u64> iw, iwp;  // inverse twiddles
    u64 scale = 0, scalep = 0;  // 2^64 / L mod q, undoing the pointwise REDC and the length
};

std::shared_ptr<const Tables> tables_for(std::size_t prime, unsigned log_len)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const Tables>> cache;
    const std::lock_guard lock(mutex);
    auto& slot = cache[{prime, log_len}];
    if (slot)
        return slot;

    const u64 q = kModulus[prime];
    const std::size_t len = std::size_t{1} << log_len;
    auto t = std::make_shared<Tables>();
    t->fw.resize(len);
    t->fwp.resize(len);
    t->iw.resize(len);
    t->iwp.resize(len);
    const u64 root = pow_mod(kGenerator[prime], (q - 1) >> log_len, q);
    const u64 iroot = pow_mod(root, q - 2, q);
    for (std::size_t h = 1; h < len; h <<= 1) {
        const u64 step = pow_mod(root, len / (2 * h), q);
        const u64 istep = pow_mod(iroot, len / (2 * h), q);
        u64 w = 1, iw = 1;
        for (std::size_t j = 0; j < h; ++j) {
            t->fw[h + j] = w;
            t->fwp[h + j] = shoup_companion(w, q);
            t->iw[h + j] = iw;
            t->iwp[h + j] = shoup_companion(iw, q);
            w = mul_mod(w, step, q);
            iw = mul_mod(iw, istep, q);
        }
    }
    const u64 len_inv = pow_mod(static_cast<u64>(len % q), q - 2, q);
    t->scale = mul_mod(make_prime(q).r_mod, len_inv, q);
    t->scalep = shoup_companion(t->scale, q);
    slot = std::move(t);
    return slot;
}

// Gentleman-Sande, natural order in, bit-reversed out. Values stay in [0, 2q).
void forward(u64* a, std::size_t len, const Tables& t, u64 q)
{
    const u64 q2 = 2 * q;
    for (std::size_t h = len / 2; h >= 1; h >>= 1) {
        const u64* w = t.fw.data() + h;
        const u64* wp = t.fwp.data() + h;
        for (std::size_t s = 0; s < len; s += 2 * h) {
            u64* x = a + s;
            u64* y = a + s + h;
            for (std::size_t j = 0; j < h; ++j) {
                const u64 u = x[j], v = y[j];
                u64 sum = u + v;
                sum -= (sum >= q2) ? q2 : 0;
                x[j] = sum;
                y[j] = shoup(u - v + q2, w[j], wp[j], q);
            }
        }
    }
}

// Cooley-Tukey, bit-reversed in, natural out, then scaled into [0, q).
void inverse(u64* a, std::size_t len, const Tables& t, u64 q)
{
    const u64 q2 = 2 * q;
    for (std::size_t h = 1; h < len; h <<= 1) {
        const u64* w = t.iw.data() + h;
        const u64* wp = t.iwp.data() + h;
        for (std::size_t s = 0; s < len; s += 2 * h) {
            u64* x = a + s;
            u64* y = a + s + h;
            for (std::size_t j = 0; j < h; ++j) {
                u64 u = x[j];
                u -= (u >= q2) ? q2 : 0;
                const u64 v = shoup(y[j], w[j], wp[j], q);
                x[j] = u + v;
                y[j] = u - v + q2;
            }
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        u64 v = shoup(a[i], t.scale, t.scalep, q);
        a[i] = v - ((v >= q) ? q : 0);
    }
}

void load(const mpz_class& x, u64* out, std::size_t len, u64 q)
{
    const std::size_t n = mpz_size(x.get_mpz_t());
    const mp_limb_t* limbs = mpz_limbs_read(x.get_mpz_t());
    const bool negative = sgn(x) < 0;
    const u64 q2 = 2 * q, q4 = 4 * q;
    for (std::size_t i = 0; i < n; ++i) {
        u64 v = limbs[i];
        v -= (v >= q4) ? q4 : 0;
        v -= (v >= q2) ? q2 : 0;
        v -= (v >= q) ? q : 0;
        out[i] = (negative && v) ? q - v : v;
    }
    std::fill(out + n, out + len, u64{0});
}

struct Garner {
    // v0 + v1 q0 + v2 q0 q1 with v_i in [0, q_i).
    u64 q0_mod_q1 = 0;
    u64 inv_q0_q1 = 0, inv_q0_q1p = 0;      // q0^-1 mod q1
    u64 q0_q2 = 0, q0_q2p = 0;              // q0 mod q2
    u64 inv_q01_q2 = 0, inv_q01_q2p = 0;    // (q0 q1)^-1 mod q2
    std::array<u64, 3> half{};              // floor(P / 2)
    std::array<u64, 3> full{};              // P
    u128 q01 = 0;                           // q0 q1

    Garner()
    {
        const u64 q0 = kModulus[0], q1 = kModulus[1], q2 = kModulus[2];
        q0_mod_q1 = q0 % q1;
        inv_q0_q1 = pow_mod(q0_mod_q1, q1 - 2, q1);
        inv_q0_q1p = shoup_companion(inv_q0_q1, q1);
        q0_q2 = q0 % q2;
        q0_q2p = shoup_companion(q0_q2, q2);
        inv_q01_q2 = pow_mod(mul_mod(q0_q2, q1 % q2, q2), q2 - 2, q2);
        inv_q01_q2p = shoup_companion(inv_q01_q2, q2);
        q01 = static_cast<u128>(q0) * q1;
        // P = q01 * q2 as three limbs.
        const u128 lo = static_cast<u128>(static_cast<u64>(q01)) * q2;
        const u128 hi = static_cast<u128>(static_cast<u64>(q01 >> 64)) * q2 + (lo >> 64);
        full = {static_cast<u64>(lo), static_cast<u64>(hi), static_cast<u64>(hi >> 64)};
        half = {(full[0] >> 1) | (full[1] << 63), (full[1] >> 1) | (full[2] << 63), full[2] >> 1};
    }

    // Signed value as four limbs of two's complement.
    void combine(u64 r0, u64 r1, u64 r2, std::array<u64, 4>& out) const
    {
        const u64 q0 = kModulus[0], q1 = kModulus[1], q2 = kModulus[2];
        const u64 v0 = r0;
        u64 v0m1 = v0 - ((v0 >= q1) ? q1 : 0);
        u64 d1 = r1 + q1 - v0m1;
        d1 -= (d1 >= q1) ? q1 : 0;
        u64 v1 = shoup(d1, inv_q0_q1, inv_q0_q1p, q1);
        v1 -= (v1 >= q1) ? q1 : 0;

        u64 v0m2 = v0 - ((v0 >= q2) ? q2 : 0);
        u64 t = shoup(v1, q0_q2, q0_q2p, q2);
        t -= (t >= q2) ? q2 : 0;
        u64 d2 = r2 + 2 * q2 - v0m2 - t;
        d2 -= (d2 >= q2) ? q2 : 0;
        d2 -= (d2 >= q2) ? q2 : 0;
        u64 v2 = shoup(d2, inv_q01_q2, inv_q01_q2p, q2);
        v2 -= (v2 >= q2) ? q2 : 0;

        // x = v0 + v1 q0 + v2 q01
        u128 acc = static_cast<u128>(v1) * q0 + v0;
        u64 x0 = static_cast<u64>(acc);
        u128 mid = acc >> 64;
        const u128 p_lo = static_cast<u128>(v2) * static_cast<u64>(q01);
        const u128 p_hi = static_cast<u128>(v2) * static_cast<u64>(q01 >> 64);
        u128 s0 = static_cast<u128>(x0) + static_cast<u64>(p_lo);
        x0 = static_cast<u64>(s0);
        u128 s1 = (s0 >> 64) + mid + (p_lo >> 64) + static_cast<u64>(p_hi);
        const u64 x1 = static_cast<u64>(s1);
        const u64 x2 = static_cast<u64>((s1 >> 64) + (p_hi >> 64));

        const bool above = x2 != half[2] ? x2 > half[2] : x1 != half[1] ? x1 > half[1] : x0 > half[0];
        if (!above) {
            out = {x0, x1, x2, 0};
            return;
        }
        // x - P, negative.
        u128 b0 = static_cast<u128>(x0) - full[0];
        const u64 y0 = static_cast<u64>(b0);
        const u64 borrow0 = static_cast<u64>(b0 >> 64) ? 1 : 0;
        u128 b1 = static_cast<u128>(x1) - full[1] - borrow0;
        const u64 y1 = static_cast<u64>(b1);
        const u64 borrow1 = static_cast<u64>(b1 >> 64) ? 1 : 0;
        const u64 y2 = x2 - full[2] - borrow1;
        out = {y0, y1, y2, ~u64{0}};
    }
};

const Garner& garner()
{
    static const Garner g;
    return g;
}

// Sum of 2^(64 t) coeff_t into an mpz, coefficients given as residues per prime.
void assemble(const u64* r0, const u64* r1, const u64* r2, std::size_t len, mpz_class& out)
{
    const Garner& g = garner();
    std::vector<u64> limbs(len + 4);
    std::array<u64, 4> acc{};
    std::array<u64, 4> x{};
    for (std::size_t t = 0; t < len + 4; ++t) {
        if (t < len) {
            g.combine(r0[t], r1[t], r2[t], x);
            u64 carry = 0;
            for (int i = 0; i < 4; ++i) {
                const u128 s = static_cast<u128>(acc[i]) + x[i] + carry;
                acc[i] = static_cast<u64>(s);
                carry = static_cast<u64>(s >> 64);
            }
        }
        limbs[t] = acc[0];
        acc = {acc[1], acc[2], acc[3], (acc[3] >> 63) ? ~u64{0} : 0};
    }
    const bool negative = limbs.back() >> 63;
    if (negative) {
        u64 carry = 1;
        for (auto& l : limbs) {
            const u128 s = static_cast<u128>(~l) + carry;
            l = static_cast<u64>(s);
            carry = static_cast<u64>(s >> 64);
        }
    }
    std::size_t n = limbs.size();
    while (n > 0 && limbs[n - 1] == 0)
        --n;
    mp_limb_t* dst = mpz_limbs_write(out.get_mpz_t(), static_cast<mp_size_t>(std::max<std::size_t>(n, 1)));
    std::copy(limbs.begin(), limbs.begin() + static_cast<std::ptrdiff_t>(n), dst);
    mpz_limbs_finish(out.get_mpz_t(), negative ? -static_cast<mp_size_t>(n) : static_cast<mp_size_t>(n));
}

std::size_t max_limbs(std::span<const mpz_class> xs)
{
    std::size_t n = 0;
    for (const auto& x : xs)
        n = std::max(n, mpz_size(x.get_mpz_t()));
    return n;
}

} // namespace

bool ntt_pays_off(std::size_t a_limbs, std::size_t b_limbs, std::size_t n, std::size_t k, std::size_t m)
{
    const std::size_t small = std::min(a_limbs, b_limbs);
    if (small < 32)
        return false;
    unsigned log_len = 0;
    while ((std::size_t{1} << log_len) < a_limbs + b_limbs)
        ++log_len;
    if (log_len > 21)
        return false;
    // Fitted on this kernel against mpz_addmul: a product of sizes s <= l costs
    // about 17 (l / s) s^1.35 ns, one output entry here about 9 L log L ns per
    // operand or result entry.
    const double s = static_cast<double>(small);
    const double big = static_cast<double>(std::max(a_limbs, b_limbs));
    const double gmp = 17.0 * static_cast<double>(n * k * m) * (big / s) * std::pow(s, 1.35);
    const double ntt = 9.0 * static_cast<double>(n * k + k * m + n * m) *
                       static_cast<double>(std::size_t{1} << log_len) * log_len;
    return 1.2 * ntt < gmp;
}

void ntt_matmul(std::span<const mpz_class> a, std::span<const mpz_class> b, std::span<mpz_class> c, std::size_t n,
                std::size_t k, std::size_t m)
{
    if (a.size() != n * k || b.size() != k * m || c.size() != n * m)
        throw Error(ErrorCode::InvalidArgument, "ntt_matmul: shape mismatch");
    const std::size_t la = max_limbs(a), lb = max_limbs(b);
    if (la == 0 || lb == 0) {
        for (auto& x : c)
            x = 0;
        return;
    }
    unsigned log_len = 0;
    while ((std::size_t{1} << log_len) < la + lb)
        ++log_len;
    if (log_len > kMaxLog)
        throw Error(ErrorCode::InvalidArgument, "ntt_matmul: operands too large");
    const std::size_t len = std::size_t{1} << log_len;

    // Residues of every output coefficient, per prime.
    std::vector<std::vector<u64>> result(kPrimes, std::vector<u64>(n * m * len));
    std::vector<u64> tb(k * m * len), ta(k * len);
    for (std::size_t pi = 0; pi < kPrimes; ++pi) {
        const u64 q = kModulus[pi];
        const Prime prime = make_prime(q);
        const auto tables = tables_for(pi, log_len);
        for (std::size_t e = 0; e < k * m; ++e) {
            load(b[e], tb.data() + e * len, len, q);
            forward(tb.data() + e * len, len, *tables, q);
        }
        const u64 q2 = 2 * q;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t t = 0; t < k; ++t) {
                load(a[i * k + t], ta.data() + t * len, len, q);
                forward(ta.data() + t * len, len, *tables, q);
            }
            for (std::size_t j = 0; j < m; ++j) {
                u64* out = result[pi].data() + (i * m + j) * len;
                std::fill(out, out + len, u64{0});
                for (std::size_t t = 0; t < k; ++t) {
                    const u64* x = ta.data() + t * len;
                    const u64* y = tb.data() + (t * m + j) * len;
                    for (std::size_t e = 0; e < len; ++e) {
                        u64 acc = out[e] + redc(static_cast<u128>(x[e]) * y[e], prime);
                        out[e] = acc - ((acc >= q2) ? q2 : 0);
                    }
                }
                inverse(out, len, *tables, q);
            }
        }
    }
    for (std::size_t e = 0; e < n * m; ++e)
        assemble(result[0].data() + e * len, result[1].data() + e * len, result[2].data() + e * len, len, c[e]);
}

} // namespace hwmat::detail
