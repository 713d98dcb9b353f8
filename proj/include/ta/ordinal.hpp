#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ta {

/// Countable ordinal below epsilon_0, kept in Cantor normal form
///   a = w^{e_1}*c_1 + ... + w^{e_k}*c_k,  e_1 > ... > e_k,  c_i >= 1,
/// with the exponents e_i again ordinals of the same kind.
///
/// Values are immutable; arithmetic returns fresh ordinals.  The text form
/// follows the grammar
///   ord  ::= term ("+" term)*
///   term ::= "w" ("^" atom)? ("*" nat)? | nat
///   atom ::= "w" | nat | "(" ord ")"
/// so "w*2+3" is w*2+3 and "w^w" is w^w.  Sums are evaluated with ordinal
/// addition, so non-normal spellings like "3+w" collapse to their value.
class Ordinal {
public:
    struct Term;

    /// Zero.
    Ordinal() = default;
    /// The natural number n (one CNF term w^0*n when n > 0).
    Ordinal(unsigned long long n);

    static Ordinal omega();
    /// w^exp * coeff; coeff 0 gives zero.
    static Ordinal omega_pow(const Ordinal& exp, unsigned long long coeff = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_natural() const;
    /// Value of a natural; throws std::domain_error otherwise.
    unsigned long long natural_value() const;
    bool is_limit() const;
    bool is_successor() const;

    const std::vector<Term>& terms() const { return terms_; }

    std::string to_text() const;
    /// Parses the grammar above; throws std::invalid_argument on bad input.
    static Ordinal parse(std::string_view text);

    bool operator==(const Ordinal& other) const;
    std::strong_ordering operator<=>(const Ordinal& other) const;

private:
    std::vector<Term> terms_;

    friend Ordinal add(const Ordinal&, const Ordinal&);
    friend Ordinal mul(const Ordinal&, const Ordinal&);
};

struct Ordinal::Term {
    Ordinal exp;
    unsigned long long coeff = 0;

    bool operator==(const Term& other) const = default;
};

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
Ordinal succ(const Ordinal& a);
/// Predecessor of a successor ordinal; throws std::domain_error otherwise.
Ordinal pred(const Ordinal& a);

/// Canonical fundamental sequence of a limit ordinal delta = gamma + w^e*c:
/// if e = e'+1 the n-th element is gamma + w^e*(c-1) + w^{e'}*n, and if e is
/// a limit it is gamma + w^e*(c-1) + w^{ladder(e)_n}.  Strictly increasing
/// and cofinal in delta, starting at n = 0.
class Ladder {
public:
    /// Throws std::domain_error unless delta is a limit.
    explicit Ladder(Ordinal delta);

    const Ordinal& delta() const { return delta_; }
    Ordinal at(unsigned long long n) const;

private:
    Ordinal delta_;
    Ordinal base_;                      // gamma + w^e*(c-1)
    Ordinal head_exp_;                  // e
};

std::vector<Ordinal> ladder_prefix(const Ordinal& delta, unsigned long long count);

} // namespace ta
