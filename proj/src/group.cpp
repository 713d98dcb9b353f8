#include "ta/group.hpp"

#include <limits>
#include <stdexcept>

namespace ta {

GroupElement GroupElement::basis(const Ordinal& index, long long coeff) {
    GroupElement g;
    if (coeff != 0) g.coeffs_[index] = coeff;
    return g;
}

bool GroupElement::is_positive() const {
    if (coeffs_.empty()) return false;
    return coeffs_.rbegin()->second > 0;
}

Ordinal GroupElement::leading_index() const {
    if (coeffs_.empty()) throw std::domain_error("leading_index of zero group element");
    return coeffs_.rbegin()->first;
}

std::vector<long long> GroupElement::coordinates(const std::vector<Ordinal>& basis) const {
    std::vector<long long> out(basis.size(), 0);
    std::map<Ordinal, std::size_t> slot;
    for (std::size_t i = 0; i < basis.size(); ++i) slot[basis[i]] = i;
    for (const auto& [idx, c] : coeffs_) {
        auto it = slot.find(idx);
        if (it == slot.end()) throw std::domain_error("group element support not contained in the given basis");
        out[it->second] += c;
    }
    return out;
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& other) const {
    auto ai = coeffs_.rbegin();
    auto bi = other.coeffs_.rbegin();
    while (ai != coeffs_.rend() || bi != other.coeffs_.rend()) {
        long long ca = 0;
        long long cb = 0;
        if (bi == other.coeffs_.rend() || (ai != coeffs_.rend() && bi->first < ai->first)) {
            ca = ai->second;
            ++ai;
        } else if (ai == coeffs_.rend() || ai->first < bi->first) {
            cb = bi->second;
            ++bi;
        } else {
            ca = ai->second;
            cb = bi->second;
            ++ai;
            ++bi;
        }
        if (ca != cb) return ca <=> cb;
    }
    return std::strong_ordering::equal;
}

GroupElement add(const GroupElement& a, const GroupElement& b) {
    GroupElement out = a;
    for (const auto& [idx, c] : b.coeffs_) {
        long long& slot = out.coeffs_[idx];
        slot += c;
        if (slot == 0) out.coeffs_.erase(idx);
    }
    return out;
}

GroupElement neg(const GroupElement& a) {
    GroupElement out = a;
    for (auto& [idx, c] : out.coeffs_) c = -c;
    return out;
}

GroupElement sub(const GroupElement& a, const GroupElement& b) { return add(a, neg(b)); }

GroupElement scale(const GroupElement& a, long long k) {
    GroupElement out;
    if (k == 0) return out;
    for (const auto& [idx, c] : a.coeffs_) out.coeffs_[idx] = c * k;
    return out;
}

std::string GroupElement::to_text() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [idx, c] : coeffs_) {
        if (first) {
            if (c < 0) out += '-';
            first = false;
        } else {
            out += (c < 0) ? '-' : '+';
        }
        unsigned long long mag = (c < 0) ? (~static_cast<unsigned long long>(c) + 1ULL)
                                         : static_cast<unsigned long long>(c);
        out += std::to_string(mag);
        out += "*a(";
        out += idx.to_text();
        out += ')';
    }
    return out;
}

namespace {

struct GroupParser {
    std::string_view s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("group element parse error at offset " + std::to_string(pos) + ": " + what);
    }

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
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
        if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') fail("expected a number");
        unsigned long long v = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            unsigned long long d = static_cast<unsigned long long>(s[pos] - '0');
            if (v > (~0ULL - d) / 10) fail("number too large");
            v = v * 10 + d;
            ++pos;
        }
        return v;
    }

    Ordinal index() {
        skip_ws();
        std::size_t depth = 0;
        std::size_t start = pos;
        while (pos < s.size()) {
            char c = s[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            ++pos;
        }
        if (pos >= s.size()) fail("unterminated index");
        return Ordinal::parse(s.substr(start, pos - start));
    }
};

} // namespace

GroupElement GroupElement::parse(std::string_view text) {
    GroupParser p{text};
    p.skip_ws();
    if (p.pos >= text.size()) p.fail("empty input");
    if (text.substr(p.pos) == "0") return GroupElement();

    GroupElement out;
    bool first = true;
    for (;;) {
        p.skip_ws();
        long long sign = 1;
        if (p.eat('-')) {
            sign = -1;
        } else if (p.eat('+')) {
            if (first) p.fail("leading '+' not allowed");
        } else if (!first) {
            break;
        }
        unsigned long long mag = p.nat();
        if (mag > static_cast<unsigned long long>(std::numeric_limits<long long>::max()))
            p.fail("coefficient too large");
        if (!p.eat('*')) p.fail("expected '*'");
        if (!p.eat('a')) p.fail("expected 'a'");
        if (!p.eat('(')) p.fail("expected '('");
        Ordinal idx = p.index();
        if (!p.eat(')')) p.fail("expected ')'");
        out = add(out, basis(idx, sign * static_cast<long long>(mag)));
        first = false;
    }
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    if (out.is_zero()) p.fail("terms cancel to zero; write \"0\" instead");
    return out;
}

} // namespace ta
