#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ta/hahn.hpp"
#include "ta/ring.hpp"

namespace ta {

/// Lazy enumerator of polynomial product terms in strictly increasing
/// exponent order with nonzero accumulated coefficients.  Products of many
/// small factors are never expanded: terms are pulled one at a time, so a
/// congruence check that is settled by an early term touches only a prefix.
template <class K>
class TermStream {
public:
    virtual ~TermStream() = default;
    virtual std::optional<std::pair<GroupElement, K>> next() = 0;
};

template <class K>
class PolyTermStream final : public TermStream<K> {
public:
    explicit PolyTermStream(const Poly<K>& p) : terms_(p.terms().begin(), p.terms().end()) {}

    std::optional<std::pair<GroupElement, K>> next() override {
        if (at_ >= terms_.size()) return std::nullopt;
        return terms_[at_++];
    }

private:
    std::vector<std::pair<GroupElement, K>> terms_;
    std::size_t at_ = 0;
};

/// Merge product: pulls from both children on demand, walking the index grid
/// (i, j) through a frontier heap.  From (i, j) the successor (i, j+1) is
/// always scheduled and (i+1, j) only when j == 0, so every grid cell is
/// reached exactly once.  Cells with equal exponent sums are accumulated;
/// zero accumulations are skipped.
template <class K>
class ProductTermStream final : public TermStream<K> {
public:
    ProductTermStream(std::unique_ptr<TermStream<K>> a, std::unique_ptr<TermStream<K>> b)
        : a_(std::move(a)), b_(std::move(b)) {
        if (pull_a(0) && pull_b(0)) schedule(0, 0);
    }

    std::optional<std::pair<GroupElement, K>> next() override {
        while (!frontier_.empty()) {
            GroupElement exp = frontier_.begin()->first;
            K acc = cell_value(frontier_.begin()->second);
            advance(frontier_.begin()->second);
            frontier_.erase(frontier_.begin());
            while (!frontier_.empty() && frontier_.begin()->first == exp) {
                acc = acc + cell_value(frontier_.begin()->second);
                advance(frontier_.begin()->second);
                frontier_.erase(frontier_.begin());
            }
            if (!fe_is_zero(acc)) return std::make_pair(std::move(exp), std::move(acc));
        }
        return std::nullopt;
    }

private:
    std::unique_ptr<TermStream<K>> a_;
    std::unique_ptr<TermStream<K>> b_;
    std::vector<std::pair<GroupElement, K>> ca_;
    std::vector<std::pair<GroupElement, K>> cb_;
    bool a_done_ = false;
    bool b_done_ = false;
    std::multimap<GroupElement, std::pair<std::size_t, std::size_t>> frontier_;

    bool pull_a(std::size_t i) {
        while (!a_done_ && ca_.size() <= i) {
            auto t = a_->next();
            if (!t) a_done_ = true;
            else ca_.push_back(std::move(*t));
        }
        return i < ca_.size();
    }

    bool pull_b(std::size_t j) {
        while (!b_done_ && cb_.size() <= j) {
            auto t = b_->next();
            if (!t) b_done_ = true;
            else cb_.push_back(std::move(*t));
        }
        return j < cb_.size();
    }

    void schedule(std::size_t i, std::size_t j) {
        frontier_.emplace(ca_[i].first + cb_[j].first, std::make_pair(i, j));
    }

    K cell_value(const std::pair<std::size_t, std::size_t>& cell) const {
        return ca_[cell.first].second * cb_[cell.second].second;
    }

    void advance(const std::pair<std::size_t, std::size_t>& cell) {
        auto [i, j] = cell;
        if (pull_b(j + 1)) schedule(i, j + 1);
        if (j == 0 && pull_a(i + 1)) schedule(i + 1, 0);
    }
};

/// A product of unit polynomials with integer exponents, kept factored.
/// Multiplication and inversion are multiset operations, so common factors
/// cancel structurally and congruence checks between related products reduce
/// to small residual factor lists.
template <class K>
class UnitExpr {
public:
    UnitExpr() = default;

    static UnitExpr from_poly(const Poly<K>& p) {
        if (p.is_zero() || !(p.valuation() == GroupElement()))
            throw std::domain_error("unit factor must have valuation zero");
        UnitExpr u;
        if (!is_trivial_one(p)) u.factors_[p] = 1;
        return u;
    }

    static UnitExpr from_quotient(const Quotient<K>& q) {
        UnitExpr u = from_poly(q.num());
        return mul(u, inv(from_poly(q.den())));
    }

    const std::map<Poly<K>, long long>& factors() const { return factors_; }
    bool is_one_structurally() const { return factors_.empty(); }

    bool operator==(const UnitExpr& o) const { return factors_ == o.factors_; }
    bool operator<(const UnitExpr& o) const { return factors_ < o.factors_; }

    /// Materializes the full quotient; intended for reporting and for small
    /// factor lists only.
    Quotient<K> to_quotient(const K& one) const {
        Poly<K> num = Poly<K>::monomial(GroupElement(), one);
        Poly<K> den = num;
        for (const auto& [p, e] : factors_) {
            for (long long k = 0; k < (e > 0 ? e : -e); ++k) {
                if (e > 0) num = ta::mul(num, p);
                else den = ta::mul(den, p);
            }
        }
        return Quotient<K>(num, den);
    }

    std::string to_text() const {
        if (factors_.empty()) return "1";
        std::string out;
        for (const auto& [p, e] : factors_) {
            if (!out.empty()) out += " * ";
            out += "(" + p.to_text() + ")^" + std::to_string(e);
        }
        return out;
    }

    friend UnitExpr mul(const UnitExpr& a, const UnitExpr& b) {
        UnitExpr out = a;
        for (const auto& [p, e] : b.factors_) {
            long long& slot = out.factors_[p];
            slot += e;
            if (slot == 0) out.factors_.erase(p);
        }
        return out;
    }

    friend UnitExpr inv(const UnitExpr& a) {
        UnitExpr out = a;
        for (auto& [p, e] : out.factors_) e = -e;
        return out;
    }

    /// Stream over the numerator-side (positive exponents) or
    /// denominator-side (negative) product.  An empty side streams the
    /// constant 1; `one` supplies the scalar.
    std::unique_ptr<TermStream<K>> side_stream(bool positive, const K& one) const {
        std::vector<std::unique_ptr<TermStream<K>>> parts;
        for (const auto& [p, e] : factors_) {
            long long n = positive ? e : -e;
            for (long long k = 0; k < n; ++k) parts.push_back(std::make_unique<PolyTermStream<K>>(p));
        }
        if (parts.empty())
            return std::make_unique<PolyTermStream<K>>(Poly<K>::monomial(GroupElement(), one));
        while (parts.size() > 1) {
            std::vector<std::unique_ptr<TermStream<K>>> merged;
            for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
                merged.push_back(std::make_unique<ProductTermStream<K>>(std::move(parts[i]), std::move(parts[i + 1])));
            if (parts.size() % 2) merged.push_back(std::move(parts.back()));
            parts = std::move(merged);
        }
        return std::move(parts.front());
    }

private:
    std::map<Poly<K>, long long> factors_;

    static bool is_trivial_one(const Poly<K>& p) {
        if (p.size() != 1) return false;
        const auto& [g, c] = *p.terms().begin();
        return g == GroupElement() && c == c / c;
    }
};

/// Exact congruence of factored units below a cut: with t = a^{-1} b = N/D
/// (both sides units of valuation zero), v(a-b) = v(D-N); the two product
/// streams are merged term by term and the first surviving difference
/// decides.  As soon as both streams have passed the cut the verdict is
/// congruent, so only the sub-cut prefix is ever expanded.
template <class K>
bool unit_congruent(const UnitExpr<K>& a, const UnitExpr<K>& b, const GroupElement& cut, const K& one) {
    UnitExpr<K> t = mul(inv(a), b);
    if (t.is_one_structurally()) return true;
    auto d_stream = t.side_stream(false, one);
    auto n_stream = t.side_stream(true, one);
    auto td = d_stream->next();
    auto tn = n_stream->next();
    while (td || tn) {
        bool take_d = td && (!tn || td->first < tn->first);
        bool both = td && tn && td->first == tn->first;
        if (both) {
            K c = td->second - tn->second;
            if (!fe_is_zero(c)) return !(td->first < cut);
            td = d_stream->next();
            tn = n_stream->next();
        } else if (take_d) {
            if (td->first < cut) return false;
            return true;
        } else {
            if (tn->first < cut) return false;
            return true;
        }
        // Once both frontiers are at or past the cut, no later term matters.
        if (td && tn && !(td->first < cut) && !(tn->first < cut)) return true;
    }
    return true;
}

} // namespace ta
