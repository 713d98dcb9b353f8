#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ta/hahn.hpp"

namespace ta {

/// Membership in the valuation ring R: zero, or valuation >= 0.
template <class K>
bool is_member(const Quotient<K>& x) {
    return x.is_zero() || !(valuation_q(x) < GroupElement());
}

/// Units are exactly the members of valuation zero.
template <class K>
bool is_unit(const Quotient<K>& x) {
    return !x.is_zero() && valuation_q(x) == GroupElement();
}

/// Divisibility in R is valuation comparison; everything divides zero.
template <class K>
bool divides(const Quotient<K>& r, const Quotient<K>& s) {
    if (r.is_zero()) return s.is_zero();
    if (s.is_zero()) return true;
    return !(valuation_q(s) < valuation_q(r));
}

/// a == b modulo the ideal rR: v(a-b) >= v(r), decided exactly.
template <class K>
bool congruent_mod(const Quotient<K>& a, const Quotient<K>& b, const Quotient<K>& r) {
    if (r.is_zero()) throw std::domain_error("congruence modulo zero");
    Quotient<K> d = q_sub(a, b);
    if (d.is_zero()) return true;
    return !(valuation_q(d) < valuation_q(r));
}

enum class RingFlavor { R2, R1 };

inline const char* flavor_name(RingFlavor f) { return f == RingFlavor::R2 ? "R2" : "R1"; }

/// The generator sequence r_sigma fixing a type over the ring: by default
/// r_sigma = X^{a(sigma)}; with a designated top index L (standing in for an
/// index beyond every working level) r_sigma = X^{a(sigma)+a(L)}.
/// Divisibility strictly increases along sigma either way.
template <class F>
class TypeSpec {
public:
    using K = typename F::Elem;

    TypeSpec(F field, RingFlavor flavor, Ordinal level_bound, std::optional<Ordinal> lambda = std::nullopt)
        : field_(std::move(field)), flavor_(flavor), bound_(std::move(level_bound)), lambda_(std::move(lambda)) {
        if (lambda_ && !(bound_ < *lambda_))
            throw std::domain_error("designated top index must exceed the level bound");
    }

    const F& field() const { return field_; }
    RingFlavor flavor() const { return flavor_; }
    const Ordinal& level_bound() const { return bound_; }
    const std::optional<Ordinal>& lambda() const { return lambda_; }

    /// Valuation of r_sigma.
    GroupElement rv(const Ordinal& sigma) const {
        require_level(sigma);
        GroupElement g = GroupElement::basis(sigma);
        if (lambda_) g = g + GroupElement::basis(*lambda_);
        return g;
    }

    Quotient<K> r(const Ordinal& sigma) const {
        return Quotient<K>::from_poly(Poly<K>::monomial(rv(sigma), field_.one()), field_.one());
    }

    Quotient<K> one() const {
        return Quotient<K>::from_poly(Poly<K>::monomial(GroupElement(), field_.one()), field_.one());
    }

    void require_level(const Ordinal& sigma) const {
        if (bound_ < sigma) throw std::domain_error("level " + sigma.to_text() + " beyond the configured bound");
    }

private:
    F field_;
    RingFlavor flavor_;
    Ordinal bound_;
    std::optional<Ordinal> lambda_;
};

/// n units pairwise distinguishing the gap at sigma: each is 1 + c X^e with
/// e >= v(r_sigma) and e < v(r_{sigma+1}), so every unit is congruent to 1
/// mod r_sigma and no two are congruent mod r_{sigma+1}.  For a finite field
/// the scalar supply cycles and the exponent walks up by multiples of a(0),
/// which stays below the next level's valuation.
template <class F>
std::vector<Quotient<typename F::Elem>> w_units(const TypeSpec<F>& spec, const Ordinal& sigma, std::size_t n) {
    using K = typename F::Elem;
    spec.require_level(succ(sigma));
    std::optional<unsigned long long> period = spec.field().nonzero_period();
    std::vector<Quotient<K>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        unsigned long long k = period ? i % *period : i;
        unsigned long long m = period ? i / *period : 0;
        GroupElement e = spec.rv(sigma) + ta::scale(GroupElement::basis(Ordinal(0)), static_cast<long long>(m));
        Poly<K> p = add(Poly<K>::monomial(GroupElement(), spec.field().one()),
                        Poly<K>::monomial(e, spec.field().nonzero(k)));
        out.push_back(Quotient<K>::from_poly(p, spec.field().one()));
    }
    return out;
}

/// Finite instance of the series Sum zeta(n) X^{(n+1) a(alpha)} for a binary
/// string zeta.
template <class F>
Poly<typename F::Elem> zeta_sum(const F& field, const std::vector<bool>& zeta, const Ordinal& alpha) {
    using K = typename F::Elem;
    Poly<K> out;
    for (std::size_t n = 0; n < zeta.size(); ++n) {
        if (!zeta[n]) continue;
        GroupElement e = ta::scale(GroupElement::basis(alpha), static_cast<long long>(n) + 1);
        out = add(out, Poly<K>::monomial(e, field.one()));
    }
    return out;
}

inline std::vector<bool> bits_of(unsigned long long x, std::size_t width) {
    std::vector<bool> out(width);
    for (std::size_t i = 0; i < width; ++i) out[i] = (x >> i) & 1;
    return out;
}

struct GapReport {
    bool trivial = false;
    std::string mode;
    std::size_t witnesses = 0;
    std::size_t pair_checks = 0;
    std::size_t violations = 0;
    std::size_t samples = 0;
    std::size_t distinct_keys = 0;
    std::size_t equal_key_pairs = 0;
    bool sound = true;
};

/// Experimental evidence that the gap r_sigma R / r_tau R is infinite, two
/// ways.  R1 mode: 2^budget series witnesses at index sigma, checked pairwise
/// non-congruent mod r_tau.  R2 mode: a truncation-key census over template
/// instantiations whose below-cut data is enumerated deterministically and
/// whose above-cut tail indices are drawn from the seed, so the distinct-key
/// count is seed-independent while equal-key pairs must test truncation-equal.
template <class F>
GapReport classify_gap(const TypeSpec<F>& spec, const Ordinal& sigma, const Ordinal& tau,
                       std::size_t budget, std::uint64_t seed = 1) {
    using K = typename F::Elem;
    GapReport rep;
    if (sigma == tau) {
        rep.trivial = true;
        rep.mode = "trivial";
        return rep;
    }
    if (tau < sigma) throw std::domain_error("classify_gap requires sigma < tau");

    if (spec.flavor() == RingFlavor::R1) {
        rep.mode = "R1-series-witnesses";
        std::size_t n = std::size_t(1) << budget;
        std::vector<Quotient<K>> wit;
        wit.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            wit.push_back(Quotient<K>::from_poly(zeta_sum(spec.field(), bits_of(i, budget), sigma),
                                                 spec.field().one()));
        rep.witnesses = n;
        Quotient<K> rt = spec.r(tau);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                ++rep.pair_checks;
                if (congruent_mod(wit[i], wit[j], rt)) ++rep.violations;
            }
        }
        rep.sound = rep.violations == 0;
        return rep;
    }

    rep.mode = "R2-key-census";
    GroupElement beta = GroupElement::basis(tau);
    std::mt19937_64 rng(seed);

    // Deterministic part: template index t, below-cut scalar c, below-cut
    // exponent multiplier b.  Random part: which above-cut indices are used.
    std::vector<Ordinal> above_pool = {tau, succ(tau), succ(succ(tau)), add(tau, Ordinal(5))};
    std::map<TruncationKey, std::vector<Quotient<K>>> census;
    std::size_t budget_count = budget < 24 ? budget : std::size_t(24);
    std::size_t total = budget_count * 8;
    for (std::size_t s = 0; s < total; ++s) {
        std::size_t tpl = s % 4;
        long long c = static_cast<long long>((s / 4) % 3) + 1;
        long long b = static_cast<long long>((s / 12) % 2) + 1;
        const Ordinal& hi = above_pool[rng() % above_pool.size()];
        GroupElement lo = ta::scale(GroupElement::basis(sigma), b);
        GroupElement up = GroupElement::basis(hi);
        K cc = spec.field().from_int(c);
        Poly<K> one = Poly<K>::monomial(GroupElement(), spec.field().one());
        Poly<K> num, den;
        switch (tpl) {
            case 0:
                num = add(one, Poly<K>::monomial(lo + up, cc));
                den = one;
                break;
            case 1:
                num = one;
                den = sub(one, Poly<K>::monomial(lo, cc));
                break;
            case 2:
                num = add(Poly<K>::monomial(up, spec.field().one()), Poly<K>::monomial(lo, cc));
                den = sub(one, Poly<K>::monomial(lo + up, spec.field().one()));
                break;
            default:
                num = add(one, Poly<K>::monomial(lo, cc));
                den = sub(one, Poly<K>::monomial(up, spec.field().one()));
                break;
        }
        Quotient<K> q(num, den);
        census[truncation_key(q, beta)].push_back(q);
        ++rep.samples;
    }
    rep.distinct_keys = census.size();
    for (const auto& [key, group] : census) {
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                ++rep.equal_key_pairs;
                if (!truncation_equal(group[i], group[j], beta)) {
                    rep.sound = false;
                    ++rep.violations;
                }
            }
        }
    }
    return rep;
}

} // namespace ta
