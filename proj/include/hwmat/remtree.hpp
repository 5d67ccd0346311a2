#pragma once

// Accumulating remainder trees.
//
// Given a row vector V, square integer matrices A_0, ..., A_{b-1} and positive
// moduli m_0, ..., m_{b-1}, compute every C_n = V A_0 ... A_{n-1} mod m_n.
// remainder_tree builds the full product trees; RemainderForest splits the
// leaves into 2^kappa consecutive subtrees and carries V times the product of
// all earlier subtrees, reduced modulo the product of all remaining moduli.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hwmat/intmatrix.hpp"

namespace hwmat {

/// Produces leaf A_k on demand so that long inputs never sit in memory at once.
using MatrixSource = std::function<IntMatrix(std::size_t k)>;

struct TreeInput {
    IntVector V;
    std::vector<IntMatrix> A;
    std::vector<std::uint64_t> moduli;  // moduli[0] is conventionally 1
};

struct ForestPlan {
    unsigned kappa = 0;    // 2^kappa subtrees, clamped to the tree depth
    unsigned threads = 1;  // node products within a level run in parallel
};

/// ceil(log2 levels), clamped to [0, levels].
unsigned default_kappa(unsigned levels);

/// Smallest l with 2^l >= b.
unsigned tree_depth(std::size_t b);

/// Node-storage accounting, emitted after each level of a subtree is built.
struct LevelReport {
    std::size_t subtree = 0;
    unsigned level = 0;
    std::size_t level_bytes = 0;  // limb bytes of the A and m nodes on this level
    std::size_t live_bytes = 0;   // everything currently held by the forest
};

using TreeObserver = std::function<void(const LevelReport&)>;

/// C_n for n in [first, first + values.size()).
struct SubtreeOutput {
    std::size_t first = 0;
    std::vector<IntVector> values;
};

class RemainderForest {
public:
    RemainderForest(IntVector V, MatrixSource A, std::vector<std::uint64_t> moduli, ForestPlan plan,
                    TreeObserver observer = {});

    std::size_t subtree_count() const noexcept { return subtree_count_; }
    std::size_t subtree_size() const noexcept { return subtree_size_; }
    unsigned depth() const noexcept { return depth_; }
    unsigned kappa() const noexcept { return kappa_; }

    bool done() const noexcept { return next_subtree_ >= subtree_count_; }
    /// Processes the next subtree. Output is clipped to the unpadded length b.
    SubtreeOutput next();

    std::size_t peak_bytes() const noexcept { return peak_bytes_; }

private:
    IntMatrix leaf(std::size_t k) const;
    void note_live(std::size_t subtree, unsigned level, std::size_t level_bytes, std::size_t tree_bytes);

    IntVector carry_;
    MatrixSource source_;
    std::vector<std::uint64_t> moduli_;
    ForestPlan plan_;
    TreeObserver observer_;

    std::size_t dim_ = 0;
    std::size_t length_ = 0;         // b before padding
    std::size_t active_length_ = 0;  // leaves past this index are treated as identity
    unsigned depth_ = 0;
    unsigned kappa_ = 0;
    std::size_t subtree_count_ = 0;
    std::size_t subtree_size_ = 0;
    std::size_t last_active_subtree_ = 0;
    std::size_t next_subtree_ = 0;
    bool has_active_ = false;

    std::vector<mpz_class> subtree_moduli_;  // product of moduli in each subtree
    mpz_class remaining_modulus_;            // product over subtrees not yet processed
    std::size_t peak_bytes_ = 0;
};

/// result[n] = C_n for 0 <= n < b (C_0 is V mod m_0).
std::vector<IntVector> remainder_tree(const TreeInput& input, unsigned threads = 1,
                                      TreeObserver observer = {});

/// Same output as remainder_tree for every kappa.
std::vector<IntVector> remainder_forest(const TreeInput& input, const ForestPlan& plan,
                                        TreeObserver observer = {});

/// result[n] = values[0] * ... * values[n-1] mod moduli[n]; the 1x1 case of the forest.
std::vector<mpz_class> scalar_remainder_forest(std::span<const mpz_class> values,
                                               std::span<const std::uint64_t> moduli,
                                               const ForestPlan& plan);

/// Balanced product of a run of word-size moduli.
mpz_class product_of(std::span<const std::uint64_t> moduli);

} // namespace hwmat
