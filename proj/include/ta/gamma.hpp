#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ta/ring.hpp"

namespace ta {

/// Family of partial sums u_sigma = Sum_{i<=m} zeta(i) r_{nu_i} indexed by a
/// binary string zeta along a ladder to the limit delta, where m is maximal
/// with nu_m < sigma.  Materialized at the ladder points nu_j (m = j-1) and
/// their successors nu_j + 1 (m = j), which is where the separation argument
/// looks.  Successive values agree modulo r_sigma, i.e. the family is Cauchy
/// for the valuation topology.
template <class F>
struct CauchyFamily {
    using K = typename F::Elem;

    std::vector<bool> zeta;
    Ordinal delta;
    std::vector<Ordinal> ladder_pts;
    std::vector<std::pair<Ordinal, Quotient<K>>> values;

    const Quotient<K>& at(const Ordinal& sigma) const {
        for (const auto& [s, u] : values)
            if (s == sigma) return u;
        throw std::domain_error("level " + sigma.to_text() + " not materialized");
    }
};

template <class F>
CauchyFamily<F> build_cauchy(const TypeSpec<F>& spec, const std::vector<bool>& zeta, const Ordinal& delta) {
    using K = typename F::Elem;
    CauchyFamily<F> fam;
    fam.zeta = zeta;
    fam.delta = delta;
    std::size_t n = zeta.size();
    fam.ladder_pts = ladder_prefix(delta, n + 1);

    auto partial = [&](std::size_t upto) {
        Poly<K> p;
        for (std::size_t i = 0; i < upto; ++i) {
            if (!zeta[i]) continue;
            p = add(p, Poly<K>::monomial(spec.rv(fam.ladder_pts[i]), spec.field().one()));
        }
        return Quotient<K>::from_poly(p, spec.field().one());
    };

    for (std::size_t j = 0; j <= n; ++j) {
        fam.values.emplace_back(fam.ladder_pts[j], partial(j));
        if (j < n) fam.values.emplace_back(succ(fam.ladder_pts[j]), partial(j + 1));
    }
    return fam;
}

/// Exhaustive Cauchy check on the materialized grid.
template <class F>
bool verify_cauchy(const CauchyFamily<F>& fam, const TypeSpec<F>& spec) {
    for (std::size_t i = 0; i < fam.values.size(); ++i) {
        for (std::size_t j = 0; j < fam.values.size(); ++j) {
            if (!(fam.values[i].first < fam.values[j].first)) continue;
            if (!congruent_mod(fam.values[j].second, fam.values[i].second, spec.r(fam.values[i].first)))
                return false;
        }
    }
    return true;
}

struct SeparationResult {
    bool ok = false;
    std::size_t m = 0;
    std::string note;
};

/// For zeta != eta with first disagreement at m, the values at level
/// nu_{m+1} differ by exactly +-r_{nu_m}, which r_{nu_{m+1}} does not
/// divide; so distinct strings have visibly distinct limits.
template <class F>
SeparationResult verify_separation(const CauchyFamily<F>& fa, const CauchyFamily<F>& fb,
                                   const TypeSpec<F>& spec) {
    if (fa.zeta.size() != fb.zeta.size() || !(fa.delta == fb.delta))
        throw std::domain_error("separation requires families of one shape");
    std::size_t m = 0;
    while (m < fa.zeta.size() && fa.zeta[m] == fb.zeta[m]) ++m;
    if (m == fa.zeta.size()) throw std::domain_error("separation requires distinct strings");

    SeparationResult res;
    res.m = m;
    const Ordinal& probe = fa.ladder_pts[m + 1];
    auto diff = q_sub(fb.at(probe), fa.at(probe));
    bool exact = diff == spec.r(fa.ladder_pts[m]) ||
                 diff == q_sub(Quotient<typename F::Elem>::from_poly(Poly<typename F::Elem>(), spec.field().one()),
                               spec.r(fa.ladder_pts[m]));
    bool escapes = !divides(spec.r(probe), diff);
    res.ok = exact && escapes;
    if (!exact) res.note = "difference is not +-r at the disagreement level";
    if (!escapes) res.note = "difference still divisible at the next ladder level";
    return res;
}

enum class CertStatus { certified, refuted, inconclusive };

inline const char* cert_name(CertStatus s) {
    switch (s) {
        case CertStatus::certified: return "certified";
        case CertStatus::refuted: return "refuted";
        default: return "inconclusive";
    }
}

struct FiltrationLevelReport {
    Ordinal sigma;
    CertStatus status = CertStatus::inconclusive;
    std::size_t terms_used = 0;
    std::string note;
};

struct FiltrationReport {
    CertStatus overall = CertStatus::certified;
    std::vector<FiltrationLevelReport> levels;
};

/// Decide, per materialized level sigma, whether u_sigma * u_base^{-1} falls
/// in the filtration layer N_delta (elements whose exponents only use
/// generator indices < delta) modulo r_sigma.
///
/// Three exact outcomes:
///  - certified: the quotient's own support lies below delta, or the series
///    prefix reaches v(r_sigma) with every earlier term supported below
///    delta (any congruent element must share that prefix, and the prefix
///    itself is the witness);
///  - refuted: some series term below v(r_sigma) touches an index >= delta
///    (every congruent element shares that term, so none lies in the layer);
///  - inconclusive: the depth budget ran out first.  Never a false verdict.
template <class F>
FiltrationReport verify_gamma_prime_zero(const TypeSpec<F>& spec, const Ordinal& delta,
                                         const std::vector<std::pair<Ordinal, Quotient<typename F::Elem>>>& units,
                                         std::size_t depth) {
    using K = typename F::Elem;
    FiltrationReport rep;
    if (units.empty()) return rep;
    const Quotient<K>& base = units.front().second;
    if (!is_unit(base)) throw std::domain_error("family base is not a unit");

    auto supp_below = [&](const GroupElement& g) {
        for (const auto& [idx, c] : g.coeffs())
            if (!(idx < delta)) return false;
        return true;
    };

    for (const auto& [sigma, u] : units) {
        FiltrationLevelReport lv;
        lv.sigma = sigma;
        Quotient<K> t = q_mul(u, q_inv(base));
        Quotient<K> a = q_sub(t, spec.one());
        GroupElement cut = spec.rv(sigma);

        if (a.is_zero()) {
            lv.status = CertStatus::certified;
            lv.note = "quotient is exactly 1";
        } else {
            bool syntactic = true;
            for (const Ordinal& idx : q_supp(t))
                if (!(idx < delta)) syntactic = false;
            if (syntactic) {
                lv.status = CertStatus::certified;
                lv.note = "support already below the limit";
            } else {
                auto terms = expand_prefix(a, depth);
                lv.status = CertStatus::inconclusive;
                lv.note = "depth budget exhausted below the cut";
                for (std::size_t i = 0; i < terms.size(); ++i) {
                    lv.terms_used = i + 1;
                    if (!(terms[i].first < cut)) {
                        lv.status = CertStatus::certified;
                        lv.note = "clean prefix reaches the cut";
                        break;
                    }
                    if (!supp_below(terms[i].first)) {
                        lv.status = CertStatus::refuted;
                        lv.note = "sub-cut term uses index >= the limit";
                        break;
                    }
                }
                if (lv.status == CertStatus::inconclusive && terms.size() < depth) {
                    lv.status = CertStatus::certified;
                    lv.note = "series terminated with clean terms";
                }
            }
        }

        if (lv.status == CertStatus::refuted) rep.overall = CertStatus::refuted;
        else if (lv.status == CertStatus::inconclusive && rep.overall == CertStatus::certified)
            rep.overall = CertStatus::inconclusive;
        rep.levels.push_back(std::move(lv));
    }
    return rep;
}

/// Candidate limit for the family: must agree with every materialized value
/// at its own level.
template <class F>
bool check_limit_candidate(const CauchyFamily<F>& fam, const Quotient<typename F::Elem>& candidate,
                           const TypeSpec<F>& spec) {
    for (const auto& [sigma, u] : fam.values)
        if (!congruent_mod(candidate, u, spec.r(sigma))) return false;
    return true;
}

/// Shift a series family to a unit family 1 + u_sigma, the form the
/// filtration experiments run on.
template <class F>
std::vector<std::pair<Ordinal, Quotient<typename F::Elem>>> unit_shift(const CauchyFamily<F>& fam,
                                                                       const TypeSpec<F>& spec) {
    std::vector<std::pair<Ordinal, Quotient<typename F::Elem>>> out;
    out.reserve(fam.values.size());
    for (const auto& [sigma, u] : fam.values) out.emplace_back(sigma, q_add(spec.one(), u));
    return out;
}

} // namespace ta
