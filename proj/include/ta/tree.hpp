#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ta/ordinal.hpp"
#include "ta/rational_seq.hpp"

namespace ta {

class TreeNode;
using NodePtr = std::shared_ptr<const TreeNode>;

/// A tree node is a construction recipe, not a materialized function: the
/// function it denotes (a map from the ordinals below its level into the
/// naturals) is recovered on demand through restriction.  Three shapes:
///  - root: the empty function at level 0, label 0;
///  - child(parent, n): the parent's function extended by value n at the
///    parent's level; the label is the parent's label plus the n-th positive
///    rational, so the children of one parent carry exactly the rationals
///    above the parent's label;
///  - limit y[x, k] at a limit level: the union of a chain through the
///    level's canonical ladder starting above x, with label(x) + 1/k; the
///    chain is derived lazily and cached.
class TreeNode {
public:
    enum class Kind { root, child, limit };

    static NodePtr make_root();
    static NodePtr make_child(const NodePtr& parent, const mpz_class& branch);
    static NodePtr make_limit(const NodePtr& base, unsigned long long k, const Ordinal& level);

    Kind kind() const { return kind_; }
    const Ordinal& level() const { return level_; }
    const mpq_class& label() const { return label_; }

    const NodePtr& parent() const { return parent_; }
    const mpz_class& branch() const { return branch_; }

    const NodePtr& base() const { return parent_; }
    unsigned long long k() const { return k_; }

    std::string to_text() const;

    /// For a limit node: the first chain element whose level is >= beta
    /// (beta at most this node's level).  Extends and caches the chain.
    NodePtr chain_reach(const Ordinal& beta) const;

private:
    TreeNode() = default;

    Kind kind_ = Kind::root;
    Ordinal level_;
    mpq_class label_;
    NodePtr parent_;            // child: parent; limit: base
    mpz_class branch_;          // child only
    unsigned long long k_ = 0;  // limit only

    mutable std::vector<std::pair<unsigned long long, NodePtr>> chain_;  // limit: (n, y_n)
};

/// Structural identity of recipes (sound for distinctness of the denoted
/// functions within one build: equal recipes denote equal functions).
bool node_eq(const NodePtr& a, const NodePtr& b);

/// The node's function restricted to the levels below beta, as a node of
/// level beta.  Requires beta <= level.
NodePtr restrict_node(const NodePtr& y, const Ordinal& beta);

bool is_ancestor(const NodePtr& x, const NodePtr& y);

/// A node y above x at level rho with label(y) < label(x) + eps: the
/// inductive step's witness object.  At a limit rho it is y[x, k] for the
/// least k with 1/k < eps; at a successor it climbs the run of successor
/// levels with equal label increments, crossing at most one limit level
/// below (on half the slack).
NodePtr star_witness(const NodePtr& x, const Ordinal& rho, const mpq_class& eps);

struct TreeRow {
    NodePtr node;
    mpq_class label;  // copied from the node; verification reads this copy
};

struct TreeLevel {
    Ordinal level;
    std::vector<TreeRow> rows;
    bool truncated = false;  // the full level is infinite; the budget cut it
};

struct TreeLevels {
    Ordinal bound;
    std::size_t budget = 0;
    std::vector<TreeLevel> levels;  // ascending by level

    const TreeLevel* find(const Ordinal& level) const;
};

/// Materializes the closure of the bound downward: predecessors of successor
/// levels and a three-point ladder prefix of limit levels, each level holding
/// at most `budget` nodes.  Level 0 is the root; successor levels enumerate
/// children branch-index-major so low indices are spread across all parents;
/// limit levels enumerate y[x, k] with k outermost over all lower nodes x.
TreeLevels build_levels(const Ordinal& bound, std::size_t budget);

struct TreeViolation {
    std::string what;
    Ordinal level_x;
    Ordinal level_y;
    std::size_t row_x = 0;
    std::size_t row_y = 0;
};

struct TreeReport {
    bool ok = true;
    std::size_t comparable_pairs = 0;
    std::size_t order_checks = 0;
    std::size_t star_checks = 0;
    std::vector<TreeViolation> violations;
};

/// Order check on every materialized comparable pair (labels taken from the
/// table rows, so tampering is visible), plus sampled witness queries
/// (sigma, x, rho, eps = 1/k) drawn from the seed.
TreeReport verify_special(const TreeLevels& t, std::size_t star_samples, std::uint64_t seed);

} // namespace ta
