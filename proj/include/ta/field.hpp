#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "ta/rational_seq.hpp"

namespace ta {

/// Exact scalar fields used as coefficient domains.  A field object carries
/// the runtime parameters (the prime for GF(p)); elements themselves are
/// self-sufficient for arithmetic so containers of them need no field handle.
///
/// Shared element protocol: +, -, *, /, ==, fe_is_zero, fe_text.
///
/// mpq_class values must be kept canonical (gmp's own requirement for
/// comparisons); every constructor here returns canonical values, and gmp
/// arithmetic preserves canonicity.  Code building mpq_class(num, den)
/// directly must call canonicalize().

inline bool fe_is_zero(const mpq_class& x) { return x == 0; }
inline std::string fe_text(const mpq_class& x) { return x.get_str(); }

struct RationalField {
    using Elem = mpq_class;

    static constexpr const char* name() { return "Q"; }

    Elem zero() const { return mpq_class(0); }
    Elem one() const { return mpq_class(1); }
    Elem from_int(long long n) const { return mpq_class(static_cast<long>(n)); }

    /// Fixed enumeration of the nonzero elements:
    /// 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, ...
    Elem nonzero(unsigned long long n) const {
        mpq_class q = nth_positive_rational(n / 2);
        return (n % 2 == 0) ? q : mpq_class(-q);
    }

    /// Infinitely many nonzero elements.
    std::optional<unsigned long long> nonzero_period() const { return std::nullopt; }

    Elem parse(std::string_view text) const { return parse_rational(text); }
};

class PrimeFieldElem {
public:
    PrimeFieldElem() = default;
    PrimeFieldElem(std::uint64_t value, std::uint64_t p) : v_(value % p), p_(p) {}

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    bool operator==(const PrimeFieldElem& o) const {
        require_same(o);
        return v_ == o.v_;
    }

    friend PrimeFieldElem operator+(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        a.require_same(b);
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return make(s, a.p_);
    }
    friend PrimeFieldElem operator-(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        a.require_same(b);
        std::uint64_t s = (a.v_ >= b.v_) ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_;
        return make(s, a.p_);
    }
    friend PrimeFieldElem operator-(const PrimeFieldElem& a) {
        return make(a.v_ == 0 ? 0 : a.p_ - a.v_, a.p_);
    }
    friend PrimeFieldElem operator*(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        a.require_same(b);
        return make(mulmod(a.v_, b.v_, a.p_), a.p_);
    }
    friend PrimeFieldElem operator/(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        a.require_same(b);
        return a * b.inverse();
    }

    PrimeFieldElem inverse() const;

private:
    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;

    static PrimeFieldElem make(std::uint64_t v, std::uint64_t p) {
        PrimeFieldElem e;
        e.v_ = v;
        e.p_ = p;
        return e;
    }

    static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }

    void require_same(const PrimeFieldElem& o) const {
        if (p_ != o.p_) throw std::domain_error("prime field elements with different moduli");
    }
};

inline bool fe_is_zero(const PrimeFieldElem& x) { return x.value() == 0; }
inline std::string fe_text(const PrimeFieldElem& x) { return std::to_string(x.value()); }

struct PrimeField {
    std::uint64_t p;

    explicit PrimeField(std::uint64_t prime);

    using Elem = PrimeFieldElem;

    std::string name() const { return "GF(" + std::to_string(p) + ")"; }

    Elem zero() const { return Elem(0, p); }
    Elem one() const { return Elem(1, p); }
    Elem from_int(long long n) const {
        long long r = n % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        return Elem(static_cast<std::uint64_t>(r), p);
    }

    /// Cycles through 1, 2, ..., p-1.
    Elem nonzero(unsigned long long n) const { return Elem(1 + n % (p - 1), p); }

    std::optional<unsigned long long> nonzero_period() const { return p - 1; }

    Elem parse(std::string_view text) const;
};

} // namespace ta
