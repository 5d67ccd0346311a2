#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hwmat/curve.hpp"
#include "hwmat/driver.hpp"
#include "hwmat/errors.hpp"
#include "hwmat/modarith.hpp"
#include "hwmat/records.hpp"
#include "hwmat/zeta.hpp"

namespace hwmat::cli {

namespace {

constexpr int kUsage = 2;
constexpr int kMismatch = 1;
constexpr std::uint64_t kCheckLimit = 1u << 10;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string curve;
    std::uint64_t bound = 0;
    std::optional<unsigned> kappa;
    unsigned threads = 1;
    std::string format = "csv";
    std::string emit = "matrix";
    std::string out_path;
    std::uint64_t p = 0;
    bool mod_p = false;
    std::string in_path;
    std::size_t bins = 200;
    std::optional<int> genus;
};

// Writes to --out when given, otherwise to the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw UsageError("cannot open " + path + " for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

DriverOptions driver_options(const Settings& s)
{
    DriverOptions options;
    options.kappa = s.kappa;
    options.threads = std::max(1u, s.threads);
    return options;
}

int run_batch(const Settings& s, std::ostream& out, std::ostream& err)
{
    const auto format = parse_format(s.format);
    const auto emit = parse_emit(s.emit);
    if (!format)
        throw UsageError("unknown format '" + s.format + "'");
    if (!emit)
        throw UsageError("unknown emit kind '" + s.emit + "'");
    const CurveData curve = normalize(parse_coefficients(s.curve));
    Sink sink(s.out_path, out);
    std::size_t count = 0;
    compute_matrices(curve, s.bound, driver_options(s), [&](HasseWittMatrix&& w) {
        *sink << format_record(w, zeta_record(w), *format, *emit) << '\n';
        ++count;
    });
    err << "batch: " << count << " primes up to " << s.bound << '\n';
    return 0;
}

int run_prime(const Settings& s, std::ostream& out)
{
    if (s.p < 3 || !is_prime(s.p))
        throw UsageError("--p must be an odd prime");
    const IntPoly f = parse_coefficients(s.curve);
    if (!s.mod_p)
        for (const auto& c : f)
            if (c < 0 || c >= mpz_class(std::to_string(s.p)))
                throw UsageError("coefficients must lie in [0, p) unless --mod-p is given");
    const HasseWittMatrix w = compute_matrix_single(FpPoly::from_integers(f, s.p), s.p);
    const std::size_t g = w.w.size();
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t k = 0; k < g; ++k)
            out << (k ? "," : "") << w.w(i, k);
        out << '\n';
    }
    return 0;
}

int run_check(const Settings& s, std::ostream& out, std::ostream& err)
{
    const CurveData curve = normalize(parse_coefficients(s.curve));
    const std::uint64_t limit = std::min(s.bound, kCheckLimit);
    std::vector<std::uint64_t> expected;
    for (const std::uint64_t p : primes_up_to(limit))
        if (has_good_reduction(curve, p))
            expected.push_back(p);

    std::vector<std::uint64_t> seen;
    std::size_t mismatches = 0;
    compute_matrices(curve, s.bound, driver_options(s), [&](HasseWittMatrix&& w) {
        if (w.p > limit)
            return;
        seen.push_back(w.p);
        const FpPoly fbar = FpPoly::from_integers(curve.f, w.p);
        if (!(direct_expansion_matrix(fbar, curve.g, w.p) == w.w)) {
            err << "mismatch at p=" << w.p << '\n';
            ++mismatches;
        }
    });
    if (seen != expected) {
        err << "emitted primes differ from the good primes up to " << limit << '\n';
        ++mismatches;
    }
    if (mismatches)
        return kMismatch;
    out << "ok: " << seen.size() << " primes verified\n";
    return 0;
}

int run_stats(const Settings& s, std::ostream& out, std::ostream& err)
{
    std::ifstream in(s.in_path);
    if (!in)
        throw UsageError("cannot open " + s.in_path);
    const TraceSeries series = read_trace_series(in, s.genus);
    const Histogram hist = a1_histogram(series.points, series.g, s.bins);
    Sink sink(s.out_path, out);
    write_histogram_csv(*sink, hist);
    err << "stats: " << hist.total << " records, genus " << series.g << '\n';
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hasse-Witt matrices of hyperelliptic curves y^2 = f(x)", "hwmat"};
    app.require_subcommand(1);
    Settings s;

    auto* batch = app.add_subcommand("batch", "W_p for all good odd primes p <= N");
    batch->add_option("--curve", s.curve, "coefficients of f, constant term first")->required();
    batch->add_option("--bound", s.bound, "N")->required()->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1} << 40));
    batch->add_option("--kappa", s.kappa, "forest parameter (default: derived from N)")->check(CLI::Range(0u, 40u));
    batch->add_option("--format", s.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    batch->add_option("--emit", s.emit, "matrix, charpoly or trace (csv)")
        ->check(CLI::IsMember({"matrix", "charpoly", "trace"}));
    batch->add_option("--out", s.out_path, "output file (default: stdout)");
    batch->add_option("--threads", s.threads, "worker threads")->check(CLI::PositiveNumber);

    auto* prime = app.add_subcommand("prime", "W_p at a single prime");
    prime->add_option("--curve", s.curve, "coefficients of f, constant term first")->required();
    prime->add_option("--p", s.p, "odd prime")->required();
    prime->add_flag("--mod-p", s.mod_p, "reduce coefficients modulo p");

    auto* check = app.add_subcommand("check", "verify batch output against direct expansion");
    check->add_option("--curve", s.curve, "coefficients of f, constant term first")->required();
    check->add_option("--bound", s.bound, "N")->required()->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1} << 40));
    check->add_option("--kappa", s.kappa, "forest parameter")->check(CLI::Range(0u, 40u));
    check->add_option("--threads", s.threads, "worker threads")->check(CLI::PositiveNumber);

    auto* stats = app.add_subcommand("stats", "a1 histogram of a batch output");
    stats->add_option("--in", s.in_path, "batch output (jsonl, or csv with --emit trace)")->required();
    stats->add_option("--bins", s.bins, "number of bins")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    stats->add_option("--out", s.out_path, "output file (default: stdout)");
    stats->add_option("--genus", s.genus, "genus, required for csv input")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*batch)
            return run_batch(s, out, err);
        if (*prime)
            return run_prime(s, out);
        if (*check)
            return run_check(s, out, err);
        return run_stats(s, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    }
    return kUsage;
}

} // namespace hwmat::cli
