#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "ta/hahn.hpp"

using ta::GroupElement;
using ta::Ordinal;
using ta::Poly;
using ta::Quotient;

namespace {

const ta::RationalField QQ;

GroupElement g(long long c0, long long c1 = 0, long long cw = 0) {
    GroupElement e = GroupElement::basis(Ordinal(0), c0);
    e = e + GroupElement::basis(Ordinal(1), c1);
    return e + GroupElement::basis(Ordinal::omega(), cw);
}

mpq_class frac(long num, long den = 1) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

Poly<mpq_class> X(const GroupElement& e, long num = 1, long den = 1) {
    return Poly<mpq_class>::monomial(e, frac(num, den));
}

Poly<mpq_class> random_poly(std::mt19937_64& rng, int max_terms = 5) {
    Poly<mpq_class> p;
    std::size_t terms = rng() % static_cast<std::size_t>(max_terms + 1);
    for (std::size_t i = 0; i < terms; ++i) {
        GroupElement e = g(static_cast<long long>(rng() % 5) - 2,
                           static_cast<long long>(rng() % 5) - 2,
                           static_cast<long long>(rng() % 3) - 1);
        long long num = static_cast<long long>(rng() % 9) - 4;
        long long den = 1 + static_cast<long long>(rng() % 3);
        p = add(p, X(e, num, den));
    }
    return p;
}

Poly<mpq_class> random_nonzero(std::mt19937_64& rng) {
    for (;;) {
        Poly<mpq_class> p = random_poly(rng);
        if (!p.is_zero()) return p;
    }
}

// Product oracle on flat term lists: distribute, sort, combine, strip zeros.
Poly<mpq_class> convolve(const Poly<mpq_class>& a, const Poly<mpq_class>& b) {
    std::vector<std::pair<GroupElement, mpq_class>> raw;
    for (const auto& [ga, ca] : a.terms())
        for (const auto& [gb, cb] : b.terms()) raw.emplace_back(ga + gb, ca * cb);
    std::sort(raw.begin(), raw.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Poly<mpq_class> out;
    std::size_t i = 0;
    while (i < raw.size()) {
        mpq_class c = 0;
        std::size_t j = i;
        while (j < raw.size() && raw[j].first == raw[i].first) c += raw[j++].second;
        out = add(out, Poly<mpq_class>::monomial(raw[i].first, c));
        i = j;
    }
    return out;
}

} // namespace

TEST_CASE("polynomial ring identities") {
    CHECK(mul(X(g(1)) + X(g(0)), X(g(1)) - X(g(0))) == X(g(2)) - X(g(0)));
    CHECK(mul(X(g(0)) + X(g(1)), X(g(0)) - X(g(1)) + X(g(2))) == X(g(0)) + X(g(3)));

    std::mt19937_64 rng(42);
    CHECK(mul(random_poly(rng), Poly<mpq_class>()).is_zero());
    for (int i = 0; i < 200; ++i) {
        Poly<mpq_class> a = random_poly(rng);
        Poly<mpq_class> b = random_poly(rng);
        Poly<mpq_class> c = random_poly(rng);
        CHECK(mul(a, b) == convolve(a, b));
        CHECK(mul(a, b) == mul(b, a));
        CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
        CHECK(add(a, neg(a)).is_zero());
        CHECK(scale(a, frac(3, 2)) == mul(a, X(g(0), 3, 2)));
    }
}

TEST_CASE("valuation of polynomials and quotients") {
    CHECK(X(g(0, 1)).valuation() == g(0, 1));
    CHECK((X(g(0, 1)) + scale(X(g(1)), frac(2))).valuation() == g(1));
    CHECK_THROWS(Poly<mpq_class>().valuation());

    Quotient<mpq_class> q(X(g(0, 1)), X(g(1)));
    CHECK(valuation_q(q) == g(-1, 1));

    std::mt19937_64 rng(43);
    for (int i = 0; i < 300; ++i) {
        Quotient<mpq_class> a(random_nonzero(rng), random_nonzero(rng));
        Quotient<mpq_class> b(random_nonzero(rng), random_nonzero(rng));
        CHECK(valuation_q(q_mul(a, b)) == valuation_q(a) + valuation_q(b));
    }
}

TEST_CASE("exponent support") {
    CHECK(p_supp(Poly<mpq_class>()).empty());
    CHECK(p_supp(X(g(1, 1))) == std::set<Ordinal>{Ordinal(0), Ordinal(1)});
    Poly<mpq_class> p = X(g(0)) + scale(Poly<mpq_class>::monomial(GroupElement::basis(Ordinal(2), 2), mpq_class(1)), mpq_class(3));
    CHECK(p_supp(p) == std::set<Ordinal>{Ordinal(2)});
}

TEST_CASE("quotient equality is cross-multiplication") {
    Quotient<mpq_class> a(X(g(1)) + X(g(0)), X(g(0)) - X(g(2)));
    Quotient<mpq_class> b(scale(X(g(1)) + X(g(0)), mpq_class(7)), scale(X(g(0)) - X(g(2)), mpq_class(7)));
    CHECK(a == b);
    Quotient<mpq_class> c(X(g(0)), X(g(0)) - X(g(3)));
    CHECK_FALSE(a == c);
    // (1+X^{g0})/(1-X^{2g0}) is the same series as 1/(1-X^{g0}).
    CHECK(a == Quotient<mpq_class>(X(g(0)), X(g(0)) - X(g(1))));
    CHECK(q_mul(a, q_inv(a)) == Quotient<mpq_class>::from_poly(X(g(0)), QQ.one()));
    CHECK_THROWS(Quotient<mpq_class>(X(g(0)), Poly<mpq_class>()));
    CHECK_THROWS(q_inv(Quotient<mpq_class>(Poly<mpq_class>(), X(g(0)))));
}

TEST_CASE("long-division prefixes") {
    Quotient<mpq_class> geo(X(g(0)), X(g(0)) - X(g(1)));
    auto pre = expand_prefix(geo, 4);
    REQUIRE(pre.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(pre[i].first == g(i));
        CHECK(pre[i].second == 1);
    }

    Quotient<mpq_class> term(X(g(0)) - X(g(2)), X(g(0)) - X(g(1)));
    auto tp = expand_prefix(term, 5);
    REQUIRE(tp.size() == 2);
    CHECK(tp[0].first == g(0));
    CHECK(tp[1].first == g(1));

    Poly<mpq_class> p = X(g(0)) + X(g(2), 5) + X(g(0, 1), -2);
    auto pp = expand_prefix(Quotient<mpq_class>::from_poly(p, QQ.one()), 2);
    REQUIRE(pp.size() == 2);
    CHECK(pp[0].first == g(0));
    CHECK(pp[1].first == g(2));

    std::mt19937_64 rng(44);
    for (int i = 0; i < 200; ++i) {
        Quotient<mpq_class> q(random_nonzero(rng), random_nonzero(rng));
        auto terms = expand_prefix(q, 6);
        for (std::size_t k = 1; k < terms.size(); ++k) CHECK(terms[k - 1].first < terms[k].first);
        if (terms.empty()) continue;
        Poly<mpq_class> prefix;
        for (const auto& [e, c] : terms) prefix = add(prefix, Poly<mpq_class>::monomial(e, c));
        Poly<mpq_class> rem = sub(q.num(), mul(q.den(), prefix));
        if (!rem.is_zero())
            CHECK(terms.back().first < valuation_q(Quotient<mpq_class>(rem, q.den())));
    }
}

TEST_CASE("truncation equality by the valuation rule") {
    Quotient<mpq_class> geo(X(g(0)), X(g(0)) - X(g(1)));
    GroupElement beta = GroupElement::basis(Ordinal(1));
    CHECK(truncation_equal(geo, geo, beta));
    Quotient<mpq_class> shifted = q_add(geo, Quotient<mpq_class>::from_poly(X(g(0, 1)), QQ.one()));
    CHECK(truncation_equal(geo, shifted, beta));
    CHECK_FALSE(truncation_equal(geo, shifted, GroupElement::basis(Ordinal::omega())));
    Quotient<mpq_class> one = Quotient<mpq_class>::from_poly(X(g(0)), QQ.one());
    CHECK_FALSE(truncation_equal(one, q_add(one, Quotient<mpq_class>::from_poly(X(g(1)), QQ.one())), beta));
}

TEST_CASE("truncation keys are sound template parameters") {
    // One template, two instantiations: sigma = (0, 5, w) vs (0, 5, w*2);
    // the tuples agree below the cut at w and differ above it.
    auto instantiate = [](const Ordinal& top) {
        GroupElement s1 = GroupElement::basis(Ordinal(0));
        GroupElement s2 = GroupElement::basis(Ordinal(5));
        GroupElement s3 = GroupElement::basis(top);
        Poly<mpq_class> num = X(s1 + s3, 2, 3) + X(s2);
        Poly<mpq_class> den = X(GroupElement(), 1) - X(s1 + s2 + s3);
        return Quotient<mpq_class>(num, den);
    };
    GroupElement beta = GroupElement::basis(Ordinal::omega());
    Quotient<mpq_class> qa = instantiate(Ordinal::omega());
    Quotient<mpq_class> qb = instantiate(ta::mul(Ordinal::omega(), Ordinal(2)));
    CHECK(truncation_key(qa, beta) == truncation_key(qb, beta));
    CHECK(truncation_equal(qa, qb, beta));

    Quotient<mpq_class> qc(add(qa.num(), X(GroupElement::basis(Ordinal(0)), 1, 7)), qa.den());
    CHECK_FALSE(truncation_key(qc, beta) == truncation_key(qa, beta));

    CHECK(truncation_key(qa, beta) == truncation_key(qa, beta));
    CHECK_THROWS(truncation_key(qa, g(1, 1)));
    CHECK_THROWS(truncation_key(qa, GroupElement::basis(Ordinal(1), 2)));
}

TEST_CASE("prime field polynomials") {
    ta::PrimeField F5(5);
    using E = ta::PrimeFieldElem;
    Poly<E> one = Poly<E>::monomial(GroupElement(), F5.one());
    Poly<E> x = Poly<E>::monomial(GroupElement::basis(Ordinal(0)), F5.one());
    Poly<E> base = add(one, x);
    Poly<E> pw = one;
    for (int i = 0; i < 5; ++i) pw = mul(pw, base);
    Poly<E> expect = add(one, Poly<E>::monomial(GroupElement::basis(Ordinal(0), 5), F5.one()));
    CHECK(pw == expect);

    auto prefix = expand_prefix(Quotient<E>(one, sub(one, x)), 4);
    REQUIRE(prefix.size() == 4);
    for (const auto& [e, c] : prefix) CHECK(c == F5.one());
}

TEST_CASE("polynomial text round trips") {
    Poly<mpq_class> p = X(g(0), -2, 3) + X(g(1, 0, 1));
    CHECK(p.to_text() == "-2/3*X^(0)+1*X^(1*a(0)+1*a(w))");
    CHECK(ta::poly_parse(p.to_text(), QQ) == p);
    CHECK(ta::poly_parse("0", QQ).is_zero());
    CHECK(Poly<mpq_class>().to_text() == "0");

    std::mt19937_64 rng(45);
    for (int i = 0; i < 200; ++i) {
        Poly<mpq_class> r = random_poly(rng);
        CHECK(ta::poly_parse(r.to_text(), QQ) == r);
    }

    ta::PrimeField F7(7);
    Poly<ta::PrimeFieldElem> fp =
        add(Poly<ta::PrimeFieldElem>::monomial(GroupElement(), F7.from_int(3)),
            Poly<ta::PrimeFieldElem>::monomial(g(2), F7.from_int(6)));
    CHECK(ta::poly_parse(fp.to_text(), F7) == fp);

    CHECK_THROWS(ta::poly_parse("", QQ));
    CHECK_THROWS(ta::poly_parse("2*Y^(0)", QQ));
}
