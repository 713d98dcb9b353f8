#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ta/field.hpp"
#include "ta/group.hpp"

namespace ta {

inline bool fe_less(const mpq_class& a, const mpq_class& b) { return a < b; }
inline bool fe_less(const PrimeFieldElem& a, const PrimeFieldElem& b) { return a.value() < b.value(); }

/// Polynomial over the group algebra K[G]: finite map exponent -> nonzero
/// coefficient, kept in the group order so the first entry is the valuation
/// term.  Zero coefficients are never stored.
template <class K>
class Poly {
public:
    Poly() = default;

    static Poly monomial(const GroupElement& g, const K& coeff) {
        Poly p;
        if (!fe_is_zero(coeff)) p.terms_[g] = coeff;
        return p;
    }

    const std::map<GroupElement, K>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Least exponent in the group order.
    GroupElement valuation() const {
        if (terms_.empty()) throw std::domain_error("valuation of the zero polynomial");
        return terms_.begin()->first;
    }

    const K& valuation_coeff() const {
        if (terms_.empty()) throw std::domain_error("valuation_coeff of the zero polynomial");
        return terms_.begin()->second;
    }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    /// Arbitrary total order so polynomials can key ordered containers.
    bool operator<(const Poly& o) const {
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
            if (a->first != b->first) return a->first < b->first;
            if (!(a->second == b->second)) return fe_less(a->second, b->second);
        }
        return terms_.size() < o.terms_.size();
    }

    std::string to_text() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [g, c] : terms_) {
            if (!out.empty()) out += '+';
            out += fe_text(c);
            out += "*X^(";
            out += g.to_text();
            out += ')';
        }
        return out;
    }

private:
    std::map<GroupElement, K> terms_;

    template <class K2>
    friend Poly<K2> add(const Poly<K2>&, const Poly<K2>&);
    template <class K2>
    friend Poly<K2> neg(const Poly<K2>&);
    template <class K2>
    friend Poly<K2> mul(const Poly<K2>&, const Poly<K2>&);
    template <class K2>
    friend Poly<K2> scale(const Poly<K2>&, const K2&);
};

template <class K>
Poly<K> add(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> out = a;
    for (const auto& [g, c] : b.terms_) {
        auto it = out.terms_.find(g);
        if (it == out.terms_.end()) {
            out.terms_.emplace(g, c);
        } else {
            it->second = it->second + c;
            if (fe_is_zero(it->second)) out.terms_.erase(it);
        }
    }
    return out;
}

template <class K>
Poly<K> neg(const Poly<K>& a) {
    Poly<K> out = a;
    for (auto& [g, c] : out.terms_) c = -c;
    return out;
}

template <class K>
Poly<K> sub(const Poly<K>& a, const Poly<K>& b) {
    return add(a, neg(b));
}

template <class K>
Poly<K> mul(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> out;
    for (const auto& [ga, ca] : a.terms_) {
        for (const auto& [gb, cb] : b.terms_) {
            K c = ca * cb;
            if (fe_is_zero(c)) continue;
            GroupElement g = ga + gb;
            auto it = out.terms_.find(g);
            if (it == out.terms_.end()) {
                out.terms_.emplace(std::move(g), std::move(c));
            } else {
                it->second = it->second + c;
                if (fe_is_zero(it->second)) out.terms_.erase(it);
            }
        }
    }
    return out;
}

template <class K>
Poly<K> scale(const Poly<K>& a, const K& c) {
    Poly<K> out;
    for (const auto& [g, pc] : a.terms_) {
        K v = pc * c;
        if (!fe_is_zero(v)) out.terms_.emplace(g, std::move(v));
    }
    return out;
}

template <class K>
Poly<K> operator+(const Poly<K>& a, const Poly<K>& b) { return add(a, b); }
template <class K>
Poly<K> operator-(const Poly<K>& a, const Poly<K>& b) { return sub(a, b); }
template <class K>
Poly<K> operator*(const Poly<K>& a, const Poly<K>& b) { return mul(a, b); }
template <class K>
Poly<K> operator-(const Poly<K>& a) { return neg(a); }

/// Set of generator indices touched by any exponent of p.
template <class K>
std::set<Ordinal> p_supp(const Poly<K>& p) {
    std::set<Ordinal> out;
    for (const auto& [g, c] : p.terms())
        for (const auto& [idx, coord] : g.coeffs()) out.insert(idx);
    return out;
}

/// Formal quotient num/den, never reduced; represents the Hahn series
/// obtained by valuation-directed long division.  Equality is sameness as a
/// series, i.e. cross-multiplication.
template <class K>
class Quotient {
public:
    Quotient(Poly<K> num, Poly<K> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("quotient with zero denominator");
    }

    static Quotient from_poly(Poly<K> p, const K& one) {
        return Quotient(std::move(p), Poly<K>::monomial(GroupElement(), one));
    }

    const Poly<K>& num() const { return num_; }
    const Poly<K>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    bool operator==(const Quotient& o) const { return mul(num_, o.den_) == mul(o.num_, den_); }

    std::string to_text() const { return "(" + num_.to_text() + ")/(" + den_.to_text() + ")"; }

private:
    Poly<K> num_;
    Poly<K> den_;
};

template <class K>
GroupElement valuation_q(const Quotient<K>& q) {
    return q.num().valuation() - q.den().valuation();
}

template <class K>
Quotient<K> q_add(const Quotient<K>& a, const Quotient<K>& b) {
    return Quotient<K>(add(mul(a.num(), b.den()), mul(b.num(), a.den())), mul(a.den(), b.den()));
}

template <class K>
Quotient<K> q_sub(const Quotient<K>& a, const Quotient<K>& b) {
    return Quotient<K>(sub(mul(a.num(), b.den()), mul(b.num(), a.den())), mul(a.den(), b.den()));
}

template <class K>
Quotient<K> q_mul(const Quotient<K>& a, const Quotient<K>& b) {
    return Quotient<K>(mul(a.num(), b.num()), mul(a.den(), b.den()));
}

template <class K>
Quotient<K> q_inv(const Quotient<K>& a) {
    if (a.is_zero()) throw std::domain_error("inverse of the zero quotient");
    return Quotient<K>(a.den(), a.num());
}

template <class K>
std::set<Ordinal> q_supp(const Quotient<K>& q) {
    std::set<Ordinal> out = p_supp(q.num());
    std::set<Ordinal> d = p_supp(q.den());
    out.insert(d.begin(), d.end());
    return out;
}

/// First n Hahn-series terms of num/den in strictly increasing exponent
/// order.  Each long-division step cancels the current least remainder term,
/// so valuations strictly increase; if the series terminates early, fewer
/// terms are returned.
template <class K>
std::vector<std::pair<GroupElement, K>> expand_prefix(const Quotient<K>& q, std::size_t n) {
    std::vector<std::pair<GroupElement, K>> out;
    Poly<K> r = q.num();
    const Poly<K>& den = q.den();
    GroupElement dv = den.valuation();
    const K& dc = den.valuation_coeff();
    while (out.size() < n && !r.is_zero()) {
        GroupElement g = r.valuation() - dv;
        K c = r.valuation_coeff() / dc;
        r = sub(r, mul(Poly<K>::monomial(g, c), den));
        out.emplace_back(std::move(g), std::move(c));
    }
    return out;
}

/// Exact truncation comparison below beta: the expansions agree on all
/// exponents < beta iff the difference is zero or has valuation >= beta.
template <class K>
bool truncation_equal(const Quotient<K>& a, const Quotient<K>& b, const GroupElement& beta) {
    Quotient<K> d = q_sub(a, b);
    if (d.is_zero()) return true;
    return valuation_q(d) >= beta;
}

/// Canonical parameterization of a quotient relative to a generator cut:
/// basis indices below the cut, position counts, coefficient tuple, and the
/// coordinate vector of every monomial over the full (sorted) basis of the
/// quotient's support.  Equal keys imply equal truncations below the cut;
/// the data above the cut enters only through coordinate patterns, never
/// through the actual generator indices.
struct TruncationKey {
    std::size_t q = 0;
    std::size_t d = 0;
    std::vector<Ordinal> sigma_below;
    std::vector<std::string> coeffs;
    std::vector<std::vector<long long>> t_num;
    std::vector<std::vector<long long>> t_den;

    bool operator==(const TruncationKey&) const = default;
    bool operator<(const TruncationKey& o) const { return to_text() < o.to_text(); }

    std::string to_text() const {
        std::string out = "q=" + std::to_string(q) + ";d=" + std::to_string(d) + ";s=";
        for (const auto& s : sigma_below) {
            out += s.to_text();
            out += ',';
        }
        out += ";a=";
        for (const auto& a : coeffs) {
            out += a;
            out += ',';
        }
        auto emit = [&out](const std::vector<std::vector<long long>>& vs) {
            for (const auto& v : vs) {
                out += '(';
                for (long long x : v) {
                    out += std::to_string(x);
                    out += ',';
                }
                out += ')';
            }
        };
        out += ";tn=";
        emit(t_num);
        out += ";td=";
        emit(t_den);
        return out;
    }
};

/// Requires beta to be a generator cut: a single basis generator with
/// coefficient one.
inline Ordinal cut_index(const GroupElement& beta) {
    if (beta.coeffs().size() != 1 || beta.coeffs().begin()->second != 1)
        throw std::domain_error("cut must be a single generator with coefficient 1");
    return beta.coeffs().begin()->first;
}

template <class K>
TruncationKey truncation_key(const Quotient<K>& qq, const GroupElement& beta) {
    Ordinal delta = cut_index(beta);
    std::set<Ordinal> support = q_supp(qq);
    std::vector<Ordinal> basis(support.begin(), support.end());

    TruncationKey key;
    key.d = basis.size();
    for (const auto& s : basis) {
        if (s < delta) {
            key.sigma_below.push_back(s);
            ++key.q;
        }
    }
    auto emit = [&](const Poly<K>& p, std::vector<std::vector<long long>>& t) {
        for (const auto& [g, c] : p.terms()) {
            key.coeffs.push_back(fe_text(c));
            t.push_back(g.coordinates(basis));
        }
    };
    emit(qq.num(), key.t_num);
    emit(qq.den(), key.t_den);
    return key;
}

/// Term-by-term parser for the poly text form: '+'-joined `c*X^(<group>)`
/// terms (coefficient text may itself start with '-').
template <class F>
Poly<typename F::Elem> poly_parse(std::string_view text, const F& field) {
    using K = typename F::Elem;
    auto strip = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    text = strip(text);
    if (text == "0") return Poly<K>();
    if (text.empty()) throw std::invalid_argument("empty polynomial text");

    Poly<K> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size()) {
            if (text[i] == '(') ++depth;
            if (text[i] == ')') --depth;
        }
        if (i == text.size() || (text[i] == '+' && depth == 0 && i > start)) {
            std::string_view term = strip(text.substr(start, i - start));
            std::size_t mark = term.find("*X^(");
            if (mark == std::string_view::npos || term.back() != ')')
                throw std::invalid_argument("bad polynomial term: \"" + std::string(term) + "\"");
            K coeff = field.parse(term.substr(0, mark));
            GroupElement g;
            std::string_view inner = term.substr(mark + 4, term.size() - mark - 5);
            if (strip(inner) != "0") g = GroupElement::parse(inner);
            out = add(out, Poly<K>::monomial(g, coeff));
            start = i + 1;
        }
    }
    return out;
}

} // namespace ta
