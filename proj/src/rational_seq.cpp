#include "ta/rational_seq.hpp"

#include <stdexcept>
#include <vector>

namespace ta {

mpz_class fusc(const mpz_class& n) {
    if (n < 0) throw std::domain_error("fusc of negative argument");
    if (n == 0) return 0;
    // Scan the bits of n from most to least significant, carrying the pair
    // (fusc(m), fusc(m+1)) for the prefix m consumed so far.
    mpz_class u = 0;
    mpz_class v = 1;
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        if (mpz_tstbit(n.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            u += v;
        } else {
            v += u;
        }
    }
    return u;
}

mpq_class nth_positive_rational(unsigned long long n) {
    return nth_positive_rational(mpz_class(static_cast<unsigned long>(n)));
}

mpq_class nth_positive_rational(const mpz_class& n) {
    if (n < 0) throw std::domain_error("sequence index must be non-negative");
    mpz_class heap = n + 1;
    mpq_class q(fusc(heap), fusc(heap + 1));
    q.canonicalize();
    return q;
}

mpz_class positive_rational_rank(const mpq_class& q) {
    if (q <= 0) throw std::domain_error("rank of non-positive rational");
    mpz_class a = q.get_num();
    mpz_class b = q.get_den();
    // Walk up the Calkin-Wilf tree to the root, recording left/right steps,
    // then replay them downward as a heap index.
    std::vector<bool> right_steps;
    while (!(a == 1 && b == 1)) {
        if (a < b) {
            right_steps.push_back(false);
            b -= a;
        } else {
            right_steps.push_back(true);
            a -= b;
        }
    }
    mpz_class heap = 1;
    for (auto it = right_steps.rbegin(); it != right_steps.rend(); ++it) {
        heap *= 2;
        if (*it) heap += 1;
    }
    return heap - 1;
}

std::string rational_text(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(std::string_view text) {
    std::string owned(text);
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), owned.c_str(), 10) != 0)
        throw std::invalid_argument("rational parse error: \"" + owned + "\"");
    if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: \"" + owned + "\"");
    q.canonicalize();
    return q;
}

} // namespace ta
