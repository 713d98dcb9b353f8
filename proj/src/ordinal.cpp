#include "ta/ordinal.hpp"

#include <cctype>
#include <stdexcept>

namespace ta {

Ordinal::Ordinal(unsigned long long n) {
    if (n > 0)
        terms_.push_back(Term{Ordinal(), n});
}

Ordinal Ordinal::omega() {
    return omega_pow(Ordinal(1));
}

Ordinal Ordinal::omega_pow(const Ordinal& exp, unsigned long long coeff) {
    Ordinal r;
    if (coeff > 0)
        r.terms_.push_back(Term{exp, coeff});
    return r;
}

bool Ordinal::is_natural() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero());
}

unsigned long long Ordinal::natural_value() const {
    if (!is_natural())
        throw std::domain_error("ordinal is not a natural number");
    return terms_.empty() ? 0 : terms_[0].coeff;
}

bool Ordinal::is_limit() const {
    return !terms_.empty() && !terms_.back().exp.is_zero();
}

bool Ordinal::is_successor() const {
    return !terms_.empty() && terms_.back().exp.is_zero();
}

bool Ordinal::operator==(const Ordinal& other) const {
    return terms_ == other.terms_;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& other) const {
    const auto& a = terms_;
    const auto& b = other.terms_;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (auto c = a[i].exp <=> b[i].exp; c != 0)
            return c;
        if (auto c = a[i].coeff <=> b[i].coeff; c != 0)
            return c;
    }
    return a.size() <=> b.size();
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero())
        return a;
    Ordinal r;
    const Ordinal& lead = b.terms_[0].exp;
    for (const auto& t : a.terms_) {
        if (t.exp > lead)
            r.terms_.push_back(t);
        else
            break;
    }
    size_t kept = r.terms_.size();
    r.terms_.push_back(b.terms_[0]);
    if (kept < a.terms_.size() && a.terms_[kept].exp == lead)
        r.terms_.back().coeff += a.terms_[kept].coeff;
    r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
    return r;
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
    if (a.is_zero() || b.is_zero())
        return Ordinal();
    Ordinal r;
    for (const auto& t : b.terms_) {
        Ordinal part;
        if (t.exp.is_zero()) {
            part = a;
            part.terms_[0].coeff *= t.coeff;
        } else {
            part = Ordinal::omega_pow(add(a.terms_[0].exp, t.exp), t.coeff);
        }
        r = add(r, part);
    }
    return r;
}

Ordinal succ(const Ordinal& a) {
    return add(a, Ordinal(1));
}

Ordinal pred(const Ordinal& a) {
    if (!a.is_successor())
        throw std::domain_error("predecessor of a non-successor ordinal");
    const auto& ts = a.terms();
    Ordinal r;
    for (size_t i = 0; i + 1 < ts.size(); ++i)
        r = add(r, Ordinal::omega_pow(ts[i].exp, ts[i].coeff));
    return add(r, Ordinal(ts.back().coeff - 1));
}

Ladder::Ladder(Ordinal delta) : delta_(std::move(delta)) {
    if (!delta_.is_limit())
        throw std::domain_error("ladder requires a limit ordinal");
    const auto& terms = delta_.terms();
    Ordinal gamma;
    for (size_t i = 0; i + 1 < terms.size(); ++i)
        gamma = add(gamma, Ordinal::omega_pow(terms[i].exp, terms[i].coeff));
    head_exp_ = terms.back().exp;
    base_ = add(gamma, Ordinal::omega_pow(head_exp_, terms.back().coeff - 1));
}

Ordinal Ladder::at(unsigned long long n) const {
    if (head_exp_.is_successor())
        return add(base_, Ordinal::omega_pow(pred(head_exp_), n));
    return add(base_, Ordinal::omega_pow(Ladder(head_exp_).at(n)));
}

std::vector<Ordinal> ladder_prefix(const Ordinal& delta, unsigned long long count) {
    Ladder ladder(delta);
    std::vector<Ordinal> r;
    r.reserve(count);
    for (unsigned long long n = 0; n < count; ++n)
        r.push_back(ladder.at(n));
    return r;
}

namespace {

struct OrdParser {
    std::string_view s;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("bad ordinal at offset " + std::to_string(pos) + ": " + what);
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    unsigned long long nat() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected a natural number");
        unsigned long long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            unsigned long long d = static_cast<unsigned long long>(s[pos] - '0');
            if (v > (~0ull - d) / 10)
                fail("natural number too large");
            v = v * 10 + d;
            ++pos;
        }
        return v;
    }

    Ordinal atom() {
        skip_ws();
        if (eat('(')) {
            Ordinal r = sum();
            if (!eat(')'))
                fail("expected ')'");
            return r;
        }
        if (eat('w'))
            return Ordinal::omega();
        return Ordinal(nat());
    }

    Ordinal term() {
        skip_ws();
        if (eat('w')) {
            Ordinal exp(1);
            if (eat('^'))
                exp = atom();
            unsigned long long coeff = 1;
            if (eat('*'))
                coeff = nat();
            return Ordinal::omega_pow(exp, coeff);
        }
        return Ordinal(nat());
    }

    Ordinal sum() {
        Ordinal r = term();
        while (eat('+'))
            r = add(r, term());
        return r;
    }
};

void append_exponent(std::string& out, const Ordinal& e) {
    if (e.is_natural()) {
        out += std::to_string(e.natural_value());
    } else if (e == Ordinal::omega()) {
        out += 'w';
    } else {
        out += '(';
        out += e.to_text();
        out += ')';
    }
}

} // namespace

std::string Ordinal::to_text() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty())
            out += '+';
        if (t.exp.is_zero()) {
            out += std::to_string(t.coeff);
            continue;
        }
        out += 'w';
        if (!(t.exp == Ordinal(1))) {
            out += '^';
            append_exponent(out, t.exp);
        }
        if (t.coeff != 1) {
            out += '*';
            out += std::to_string(t.coeff);
        }
    }
    return out;
}

Ordinal Ordinal::parse(std::string_view text) {
    OrdParser p{text};
    Ordinal r = p.sum();
    p.skip_ws();
    if (p.pos != text.size())
        p.fail("trailing input");
    return r;
}

} // namespace ta
