#include "ta/field.hpp"

namespace ta {

PrimeFieldElem PrimeFieldElem::inverse() const {
    if (v_ == 0) throw std::domain_error("inverse of zero");
    // Extended Euclid on (v, p); p is prime so the gcd is 1.
    std::int64_t t = 0, new_t = 1;
    std::uint64_t r = p_, new_r = v_;
    while (new_r != 0) {
        std::uint64_t q = r / new_r;
        std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
        t = new_t;
        new_t = tmp_t;
        std::uint64_t tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    std::int64_t res = t;
    if (res < 0) res += static_cast<std::int64_t>(p_);
    return PrimeFieldElem(static_cast<std::uint64_t>(res), p_);
}

namespace {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

PrimeField::PrimeField(std::uint64_t prime) : p(prime) {
    if (!is_prime_u64(prime)) throw std::domain_error("modulus " + std::to_string(prime) + " is not prime");
    if (prime >> 62) throw std::domain_error("modulus too large");
}

PrimeField::Elem PrimeField::parse(std::string_view text) const {
    bool negative = false;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i >= text.size()) throw std::invalid_argument("empty field element");
    std::uint64_t v = 0;
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("bad field element: \"" + std::string(text) + "\"");
        v = (v * 10 + static_cast<std::uint64_t>(text[i] - '0')) % p;
    }
    Elem e(v, p);
    return negative ? -e : e;
}

} // namespace ta
