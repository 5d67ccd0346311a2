#include "hwmat/remtree.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hwmat/errors.hpp"
#include "parallel.hpp"

namespace hwmat {

namespace {

std::size_t bytes_of(const std::vector<mpz_class>& xs)
{
    std::size_t total = 0;
    for (const auto& x : xs)
        total += limb_bytes(x);
    return total;
}

std::size_t bytes_of(const std::vector<IntMatrix>& ms)
{
    std::size_t total = 0;
    for (const auto& m : ms)
        total += m.limb_bytes();
    return total;
}

void reduce_in_place(IntVector& v, const mpz_class& m)
{
    for (auto& x : v)
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

struct TreeResult {
    std::vector<IntVector> C;
    IntMatrix root;
};

// One accumulating remainder tree over t = 2^depth leaves:
//   1. leaves of the m and A product trees,
//   2. every node is the product of its two children,
//   3. top-down: C_{i,j} = C_{i-1,j/2} mod m_{i,j} for even j, and
//      C_{i-1,j/2} A_{i,j-1} mod m_{i,j} for odd j.
// `report(level, level_bytes, tree_bytes)` is called as levels are built.
template <typename Report>
TreeResult run_tree(const IntVector& V, std::vector<IntMatrix> leaves, std::span<const std::uint64_t> leaf_moduli,
                    bool want_root, unsigned threads, Report&& report)
{
    const std::size_t t = leaves.size();
    const unsigned depth = tree_depth(t);
    const std::size_t dim = V.size();

    std::vector<std::vector<mpz_class>> m(depth + 1);
    std::vector<std::vector<IntMatrix>> A(depth + 1);
    m[depth].resize(t);
    for (std::size_t j = 0; j < t; ++j)
        m[depth][j] = static_cast<unsigned long>(leaf_moduli[j]);
    A[depth] = std::move(leaves);

    std::size_t tree_bytes = bytes_of(m[depth]) + bytes_of(A[depth]);
    report(depth, tree_bytes, tree_bytes);

    for (unsigned i = depth; i-- > 0;) {
        const std::size_t width = std::size_t{1} << i;
        m[i].resize(width);
        const bool build_a = i >= 1 || want_root;
        if (build_a)
            A[i].resize(width);
        detail::parallel_for(width, threads, [&](std::size_t j) {
            mpz_mul(m[i][j].get_mpz_t(), m[i + 1][2 * j].get_mpz_t(), m[i + 1][2 * j + 1].get_mpz_t());
            if (build_a)
                A[i][j] = A[i + 1][2 * j] * A[i + 1][2 * j + 1];
        });
        const std::size_t level_bytes = bytes_of(m[i]) + bytes_of(A[i]);
        tree_bytes += level_bytes;
        report(i, level_bytes, tree_bytes);
    }

    TreeResult result;
    if (want_root)
        result.root = std::move(A[0].empty() ? A[depth][0] : A[0][0]);
    A[0].clear();

    std::vector<IntVector> parent(1, V);
    if (m[0][0] == 1)
        parent[0].assign(dim, mpz_class(0));
    else
        reduce_in_place(parent[0], m[0][0]);

    for (unsigned i = 1; i <= depth; ++i) {
        const std::size_t width = std::size_t{1} << i;
        std::vector<IntVector> current(width);
        detail::parallel_for(width, threads, [&](std::size_t j) {
            const mpz_class& mod = m[i][j];
            if (mod == 1) {
                current[j].assign(dim, mpz_class(0));
                return;
            }
            // Reduce before multiplying: the parent is twice the size of mod.
            current[j] = parent[j / 2];
            reduce_in_place(current[j], mod);
            if (j % 2 == 1) {
                current[j] = current[j] * A[i][j - 1];
                reduce_in_place(current[j], mod);
            }
        });
        parent = std::move(current);
        std::vector<IntMatrix>().swap(A[i]);
        std::vector<mpz_class>().swap(m[i - 1]);
    }
    result.C = std::move(parent);
    return result;
}

mpz_class product_range(std::span<const std::uint64_t> xs)
{
    if (xs.empty())
        return 1;
    if (xs.size() <= 8) {
        mpz_class acc = 1;
        for (auto x : xs)
            if (x != 1)
                acc *= static_cast<unsigned long>(x);
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return product_range(xs.first(half)) * product_range(xs.subspan(half));
}

mpz_class product_balanced(std::span<const mpz_class> xs)
{
    if (xs.empty())
        return 1;
    if (xs.size() == 1)
        return xs[0];
    const std::size_t half = xs.size() / 2;
    return product_balanced(xs.first(half)) * product_balanced(xs.subspan(half));
}

} // namespace

mpz_class product_of(std::span<const std::uint64_t> moduli) { return product_range(moduli); }

unsigned tree_depth(std::size_t b)
{
    unsigned l = 0;
    while ((std::size_t{1} << l) < b)
        ++l;
    return l;
}

unsigned default_kappa(unsigned levels)
{
    if (levels <= 1)
        return 0;
    // About l subtrees: the carry then costs the same order as one tree pass.
    const auto k = static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(levels)) - 1e-12));
    return std::min(k, levels);
}

RemainderForest::RemainderForest(IntVector V, MatrixSource A, std::vector<std::uint64_t> moduli, ForestPlan plan,
                                 TreeObserver observer)
    : carry_(std::move(V)), source_(std::move(A)), moduli_(std::move(moduli)), plan_(plan),
      observer_(std::move(observer))
{
    dim_ = carry_.size();
    length_ = moduli_.size();
    if (dim_ == 0 || length_ == 0)
        throw Error(ErrorCode::InvalidArgument, "remainder forest needs a nonempty vector and sequence");
    if (std::find(moduli_.begin(), moduli_.end(), 0) != moduli_.end())
        throw Error(ErrorCode::InvalidArgument, "moduli must be positive");

    depth_ = tree_depth(length_);
    kappa_ = std::min(plan_.kappa, depth_);
    subtree_count_ = std::size_t{1} << kappa_;
    subtree_size_ = std::size_t{1} << (depth_ - kappa_);

    // C_n with m_n = 1 is zero, so nothing after the last nontrivial modulus matters
    // and A_k for k >= that index never enters a needed product.
    std::size_t last = length_;
    for (std::size_t n = length_; n-- > 0;)
        if (moduli_[n] != 1) {
            last = n;
            break;
        }
    if (last == length_) {
        active_length_ = 0;
        last_active_subtree_ = 0;
        next_subtree_ = 0;
        subtree_moduli_.assign(subtree_count_, mpz_class(1));
        remaining_modulus_ = 1;
        carry_.assign(dim_, mpz_class(0));
        has_active_ = false;
        return;
    }
    has_active_ = true;
    active_length_ = last;
    last_active_subtree_ = last / subtree_size_;

    subtree_moduli_.resize(subtree_count_);
    for (std::size_t s = 0; s < subtree_count_; ++s) {
        const std::size_t lo = std::min(length_, s * subtree_size_);
        const std::size_t hi = std::min(length_, lo + subtree_size_);
        subtree_moduli_[s] = product_range(std::span(moduli_).subspan(lo, hi - lo));
    }
    remaining_modulus_ = product_balanced(subtree_moduli_);
    reduce_in_place(carry_, remaining_modulus_);
}

IntMatrix RemainderForest::leaf(std::size_t k) const
{
    if (k >= active_length_)
        return IntMatrix::identity(dim_);
    IntMatrix a = source_(k);
    if (a.rows() != dim_ || a.cols() != dim_)
        throw Error(ErrorCode::InvalidArgument, "leaf matrix " + std::to_string(k) + " has the wrong shape");
    return a;
}

void RemainderForest::note_live(std::size_t subtree, unsigned level, std::size_t level_bytes, std::size_t tree_bytes)
{
    const std::size_t live =
        tree_bytes + limb_bytes(carry_) + limb_bytes(remaining_modulus_) + bytes_of(subtree_moduli_);
    peak_bytes_ = std::max(peak_bytes_, live);
    if (observer_)
        observer_(LevelReport{subtree, level, level_bytes, live});
}

SubtreeOutput RemainderForest::next()
{
    if (done())
        throw Error(ErrorCode::InvalidArgument, "remainder forest already finished");
    const std::size_t s = next_subtree_++;
    const std::size_t first = s * subtree_size_;
    const std::size_t count = first < length_ ? std::min(subtree_size_, length_ - first) : 0;

    SubtreeOutput out;
    out.first = first;
    if (!has_active_ || s > last_active_subtree_) {
        out.values.assign(count, IntVector(dim_));
        return out;
    }

    std::vector<IntMatrix> leaves(subtree_size_);
    std::vector<std::uint64_t> leaf_moduli(subtree_size_, 1);
    for (std::size_t j = 0; j < subtree_size_; ++j) {
        const std::size_t k = first + j;
        leaves[j] = leaf(k);
        if (k < length_)
            leaf_moduli[j] = moduli_[k];
    }

    const bool want_root = s < last_active_subtree_;
    TreeResult tree = run_tree(carry_, std::move(leaves), leaf_moduli, want_root, plan_.threads,
                               [&](unsigned level, std::size_t level_bytes, std::size_t tree_bytes) {
                                   note_live(s, level, level_bytes, tree_bytes);
                               });

    if (want_root) {
        mpz_divexact(remaining_modulus_.get_mpz_t(), remaining_modulus_.get_mpz_t(),
                     subtree_moduli_[s].get_mpz_t());
        carry_ = carry_ * tree.root;
        reduce_in_place(carry_, remaining_modulus_);
    } else {
        carry_.assign(dim_, mpz_class(0));
        remaining_modulus_ = 1;
    }
    subtree_moduli_[s] = 1;

    tree.C.resize(count);
    out.values = std::move(tree.C);
    return out;
}

std::vector<IntVector> remainder_tree(const TreeInput& input, unsigned threads, TreeObserver observer)
{
    const std::size_t b = input.moduli.size();
    if (input.A.size() != b)
        throw Error(ErrorCode::InvalidArgument, "A and moduli must have the same length");
    if (b == 0 || input.V.empty())
        throw Error(ErrorCode::InvalidArgument, "remainder tree needs a nonempty vector and sequence");
    const std::size_t t = std::size_t{1} << tree_depth(b);
    const std::size_t dim = input.V.size();

    std::vector<IntMatrix> leaves(t);
    std::vector<std::uint64_t> leaf_moduli(t, 1);
    for (std::size_t k = 0; k < t; ++k) {
        leaves[k] = k < b ? input.A[k] : IntMatrix::identity(dim);
        if (k < b)
            leaf_moduli[k] = input.moduli[k];
    }
    TreeResult tree = run_tree(input.V, std::move(leaves), leaf_moduli, false, threads,
                               [&](unsigned level, std::size_t level_bytes, std::size_t tree_bytes) {
                                   if (observer)
                                       observer(LevelReport{0, level, level_bytes, tree_bytes});
                               });
    tree.C.resize(b);
    return std::move(tree.C);
}

std::vector<IntVector> remainder_forest(const TreeInput& input, const ForestPlan& plan, TreeObserver observer)
{
    if (input.A.size() != input.moduli.size())
        throw Error(ErrorCode::InvalidArgument, "A and moduli must have the same length");
    RemainderForest forest(
        input.V, [&input](std::size_t k) { return input.A[k]; }, input.moduli, plan, std::move(observer));
    std::vector<IntVector> out;
    out.reserve(input.moduli.size());
    while (!forest.done()) {
        SubtreeOutput part = forest.next();
        for (auto& v : part.values)
            out.push_back(std::move(v));
    }
    return out;
}

std::vector<mpz_class> scalar_remainder_forest(std::span<const mpz_class> values,
                                               std::span<const std::uint64_t> moduli, const ForestPlan& plan)
{
    if (values.size() != moduli.size())
        throw Error(ErrorCode::InvalidArgument, "values and moduli must have the same length");
    RemainderForest forest(
        IntVector{mpz_class(1)},
        [values](std::size_t k) {
            IntMatrix a(1, 1);
            a(0, 0) = values[k];
            return a;
        },
        std::vector<std::uint64_t>(moduli.begin(), moduli.end()), plan);
    std::vector<mpz_class> out;
    out.reserve(moduli.size());
    while (!forest.done())
        for (auto& v : forest.next().values)
            out.push_back(std::move(v[0]));
    return out;
}

} // namespace hwmat
