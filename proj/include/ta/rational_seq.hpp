#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ta {

/// Stern's diatomic sequence: fusc(0)=0, fusc(1)=1, fusc(2n)=fusc(n),
/// fusc(2n+1)=fusc(n)+fusc(n+1).
mpz_class fusc(const mpz_class& n);

/// n-th positive rational (n >= 0) in breadth-first Calkin-Wilf order:
/// 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...  Every positive rational appears exactly
/// once, already in lowest terms.
mpq_class nth_positive_rational(unsigned long long n);
mpq_class nth_positive_rational(const mpz_class& n);

/// Inverse of nth_positive_rational.  Throws on non-positive input.  The
/// result can be astronomically large for rationals with big continued
/// fraction entries, hence the arbitrary-precision return type.
mpz_class positive_rational_rank(const mpq_class& q);

std::string rational_text(const mpq_class& q);
mpq_class parse_rational(std::string_view text);

} // namespace ta
