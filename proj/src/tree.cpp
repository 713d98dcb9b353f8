#include "ta/tree.hpp"

#include <random>
#include <set>
#include <stdexcept>

namespace ta {

namespace {

mpq_class one_over(unsigned long long k) {
    return mpq_class(1) / mpq_class(static_cast<unsigned long>(k));
}

// Least k >= 1 with 1/k strictly below eps.
unsigned long long least_k_below(const mpq_class& eps) {
    if (eps <= 0) throw std::domain_error("witness slack must be positive");
    mpz_class k = eps.get_den() / eps.get_num() + 1;
    if (!k.fits_ulong_p()) throw std::domain_error("witness slack is too small");
    return k.get_ui();
}

} // namespace

NodePtr TreeNode::make_root() {
    std::shared_ptr<TreeNode> n(new TreeNode());
    n->kind_ = Kind::root;
    n->label_ = 0;
    return n;
}

NodePtr TreeNode::make_child(const NodePtr& parent, const mpz_class& branch) {
    if (!parent) throw std::domain_error("child of null node");
    if (branch < 0) throw std::domain_error("branch index must be non-negative");
    std::shared_ptr<TreeNode> n(new TreeNode());
    n->kind_ = Kind::child;
    n->level_ = succ(parent->level_);
    n->label_ = parent->label_ + nth_positive_rational(branch);
    n->parent_ = parent;
    n->branch_ = branch;
    return n;
}

NodePtr TreeNode::make_limit(const NodePtr& base, unsigned long long k, const Ordinal& level) {
    if (!base) throw std::domain_error("limit node over null node");
    if (!level.is_limit()) throw std::domain_error("limit node at a non-limit level");
    if (!(base->level_ < level)) throw std::domain_error("limit node base must lie below its level");
    if (k == 0) throw std::domain_error("limit node needs k >= 1");
    std::shared_ptr<TreeNode> n(new TreeNode());
    n->kind_ = Kind::limit;
    n->level_ = level;
    n->label_ = base->label_ + one_over(k);
    n->parent_ = base;
    n->k_ = k;
    return n;
}

std::string TreeNode::to_text() const {
    switch (kind_) {
        case Kind::root: return "<>";
        case Kind::child: return parent_->to_text() + "." + branch_.get_str();
        default:
            return "y[" + parent_->to_text() + ";k=" + std::to_string(k_) + "]@" + level_.to_text();
    }
}

NodePtr TreeNode::chain_reach(const Ordinal& beta) const {
    if (kind_ != Kind::limit) throw std::domain_error("chain of a non-limit node");
    Ladder lad(level_);
    const NodePtr& x = parent_;
    if (chain_.empty()) {
        unsigned long long n0 = 0;
        while (!(x->level() < lad.at(n0))) ++n0;
        if (n0 < k_ + 1) n0 = k_ + 1;
        chain_.emplace_back(n0, star_witness(x, lad.at(n0), one_over(k_) - one_over(n0)));
    }
    for (const auto& [n, y] : chain_)
        if (!(y->level() < beta)) return y;
    for (;;) {
        unsigned long long n = chain_.back().first + 1;
        const NodePtr& prev = chain_.back().second;
        mpq_class slack = x->label() + one_over(k_) - one_over(n) - prev->label();
        NodePtr y = star_witness(prev, lad.at(n), slack);
        chain_.emplace_back(n, y);
        if (!(y->level() < beta)) return y;
    }
}

bool node_eq(const NodePtr& a, const NodePtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind() != b->kind() || !(a->level() == b->level())) return false;
    switch (a->kind()) {
        case TreeNode::Kind::root: return true;
        case TreeNode::Kind::child:
            return a->branch() == b->branch() && node_eq(a->parent(), b->parent());
        default: return a->k() == b->k() && node_eq(a->base(), b->base());
    }
}

NodePtr restrict_node(const NodePtr& y, const Ordinal& beta) {
    if (!y) throw std::domain_error("restriction of null node");
    if (y->level() < beta) throw std::domain_error("restriction above the node level");
    NodePtr cur = y;
    while (!(cur->level() == beta)) {
        switch (cur->kind()) {
            case TreeNode::Kind::child:
                cur = cur->parent();
                break;
            case TreeNode::Kind::limit:
                if (!(cur->base()->level() < beta)) cur = cur->base();
                else cur = cur->chain_reach(beta);
                break;
            default:
                throw std::logic_error("root reached above the target level");
        }
    }
    return cur;
}

bool is_ancestor(const NodePtr& x, const NodePtr& y) {
    if (!(x->level() < y->level())) return false;
    return node_eq(restrict_node(y, x->level()), x);
}

NodePtr star_witness(const NodePtr& x, const Ordinal& rho, const mpq_class& eps) {
    if (!(x->level() < rho)) throw std::domain_error("witness level must exceed the base level");
    if (eps <= 0) throw std::domain_error("witness slack must be positive");
    if (rho.is_limit()) return TreeNode::make_limit(x, least_k_below(eps), rho);

    // Walk down the run of successor levels to x's level or the run's limit
    // base, then climb back with equal label increments inside the slack.
    Ordinal cur = rho;
    unsigned long long steps = 0;
    while (!(cur == x->level()) && cur.is_successor()) {
        cur = pred(cur);
        ++steps;
    }
    mpq_class target = x->label() + eps;
    NodePtr z = x;
    if (!(cur == x->level())) z = star_witness(x, cur, eps / 2);
    mpq_class inc = (target - z->label()) / mpq_class(static_cast<unsigned long>(steps + 1));
    mpz_class branch = positive_rational_rank(inc);
    NodePtr y = z;
    for (unsigned long long j = 0; j < steps; ++j) y = TreeNode::make_child(y, branch);
    return y;
}

const TreeLevel* TreeLevels::find(const Ordinal& level) const {
    for (const TreeLevel& l : levels)
        if (l.level == level) return &l;
    return nullptr;
}

TreeLevels build_levels(const Ordinal& bound, std::size_t budget) {
    if (budget == 0) throw std::domain_error("budget must be at least 1");

    std::set<Ordinal> want;
    std::vector<Ordinal> work{bound};
    while (!work.empty()) {
        Ordinal o = work.back();
        work.pop_back();
        if (want.count(o)) continue;
        want.insert(o);
        if (o.is_successor()) {
            work.push_back(pred(o));
        } else if (o.is_limit()) {
            for (Ordinal& nu : ladder_prefix(o, 3)) work.push_back(std::move(nu));
        }
    }

    TreeLevels t;
    t.bound = bound;
    t.budget = budget;
    for (const Ordinal& lv : want) {
        TreeLevel level;
        level.level = lv;
        if (lv.is_zero()) {
            NodePtr r = TreeNode::make_root();
            level.rows.push_back({r, r->label()});
        } else if (lv.is_successor()) {
            const TreeLevel* prev = t.find(pred(lv));
            for (unsigned long long n = 0; level.rows.size() < budget; ++n) {
                for (const TreeRow& row : prev->rows) {
                    if (level.rows.size() >= budget) break;
                    NodePtr c = TreeNode::make_child(row.node, mpz_class(static_cast<unsigned long>(n)));
                    level.rows.push_back({c, c->label()});
                }
            }
            level.truncated = true;
        } else {
            std::vector<NodePtr> bases;
            for (const TreeLevel& p : t.levels)
                for (const TreeRow& row : p.rows) bases.push_back(row.node);
            for (unsigned long long k = 1; level.rows.size() < budget; ++k) {
                for (const NodePtr& b : bases) {
                    if (level.rows.size() >= budget) break;
                    NodePtr y = TreeNode::make_limit(b, k, lv);
                    level.rows.push_back({y, y->label()});
                }
            }
            level.truncated = true;
        }
        t.levels.push_back(std::move(level));
    }
    return t;
}

TreeReport verify_special(const TreeLevels& t, std::size_t star_samples, std::uint64_t seed) {
    TreeReport rep;
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        for (std::size_t j = i + 1; j < t.levels.size(); ++j) {
            const TreeLevel& lo = t.levels[i];
            const TreeLevel& hi = t.levels[j];
            for (std::size_t rx = 0; rx < lo.rows.size(); ++rx) {
                for (std::size_t ry = 0; ry < hi.rows.size(); ++ry) {
                    if (!is_ancestor(lo.rows[rx].node, hi.rows[ry].node)) continue;
                    ++rep.comparable_pairs;
                    ++rep.order_checks;
                    if (!(lo.rows[rx].label < hi.rows[ry].label)) {
                        rep.ok = false;
                        rep.violations.push_back({"order: labels must strictly increase",
                                                  lo.level, hi.level, rx, ry});
                    }
                }
            }
        }
    }

    if (t.levels.size() < 2 || star_samples == 0) return rep;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < star_samples; ++s) {
        std::size_t i = rng() % (t.levels.size() - 1);
        std::size_t j = i + 1 + rng() % (t.levels.size() - 1 - i);
        const TreeLevel& lo = t.levels[i];
        std::size_t rx = rng() % lo.rows.size();
        unsigned long long k = 1 + rng() % 8;
        mpq_class eps = one_over(k);
        const NodePtr& x = lo.rows[rx].node;
        NodePtr y = star_witness(x, t.levels[j].level, eps);
        ++rep.star_checks;
        bool good = y->level() == t.levels[j].level && is_ancestor(x, y) &&
                    y->label() < x->label() + eps;
        if (!good) {
            rep.ok = false;
            rep.violations.push_back({"witness: extension with small label failed",
                                      lo.level, t.levels[j].level, rx, s});
        }
    }
    return rep;
}

} // namespace ta
