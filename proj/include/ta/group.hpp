#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ta/ordinal.hpp"

namespace ta {

/// Element of the free abelian group on generators a(alpha), one per ordinal,
/// stored as a finite support map index -> integer coefficient.
///
/// The order is determined at the largest index where two elements differ:
/// whoever has the bigger coefficient there is bigger.  Every generator
/// therefore dominates all integer multiples of smaller-index generators.
/// Text form: "2*a(0)-1*a(w)", zero prints "0".
class GroupElement {
public:
    GroupElement() = default;
    static GroupElement basis(const Ordinal& index, long long coeff = 1);

    const std::map<Ordinal, long long>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_positive() const;

    /// Largest index in the support; throws std::domain_error on zero.
    Ordinal leading_index() const;

    /// Coefficient vector with respect to the given index list; throws if the
    /// support is not contained in it.
    std::vector<long long> coordinates(const std::vector<Ordinal>& basis) const;

    bool operator==(const GroupElement& other) const { return coeffs_ == other.coeffs_; }
    std::strong_ordering operator<=>(const GroupElement& other) const;

    std::string to_text() const;
    static GroupElement parse(std::string_view text);

private:
    std::map<Ordinal, long long> coeffs_;

    friend GroupElement add(const GroupElement&, const GroupElement&);
    friend GroupElement neg(const GroupElement&);
    friend GroupElement scale(const GroupElement&, long long);
};

GroupElement add(const GroupElement& a, const GroupElement& b);
GroupElement neg(const GroupElement& a);
GroupElement sub(const GroupElement& a, const GroupElement& b);
GroupElement scale(const GroupElement& a, long long k);

inline GroupElement operator+(const GroupElement& a, const GroupElement& b) { return add(a, b); }
inline GroupElement operator-(const GroupElement& a, const GroupElement& b) { return sub(a, b); }
inline GroupElement operator-(const GroupElement& a) { return neg(a); }

} // namespace ta
