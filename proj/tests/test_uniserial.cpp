#include <doctest.h>

#include <stdexcept>
#include <utility>
#include <vector>

#include "ta/uniserial.hpp"

using ta::GroupElement;
using ta::Ordinal;
using ta::Poly;
using ta::RingFlavor;
using ta::UnitExpr;

namespace {

const ta::RationalField QQ;
using Spec = ta::TypeSpec<ta::RationalField>;
using U = UnitExpr<mpq_class>;
using Build = ta::UniserialBuild<ta::RationalField>;

Spec spec_to(const Ordinal& bound) { return Spec(QQ, RingFlavor::R2, bound); }

U constant(long long n) {
    return U::from_poly(Poly<mpq_class>::monomial(GroupElement(), QQ.from_int(n)));
}

U w_at(const Spec& spec, const Ordinal& sigma, std::size_t i) {
    return U::from_quotient(ta::w_units(spec, sigma, i + 1)[i]);
}

mpq_class frac(long n, unsigned long d) {
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

} // namespace

TEST_CASE("base level enumerates constants with integer labels") {
    Build b = ta::build_uniserial(spec_to(Ordinal(0)), Ordinal(0), 4);
    REQUIRE(b.pres.levels == std::vector<Ordinal>{Ordinal(0)});
    REQUIRE(b.labels.tables.size() == 1);
    const auto& nodes = b.labels.tables[0].nodes;
    REQUIRE(nodes.size() == 4);

    // 1, -1, 1/2, -1/2 in the field's fixed nonzero order; 1 is the empty product.
    CHECK(nodes[0].rep == U());
    CHECK(nodes[1].rep == constant(-1));
    CHECK(nodes[2].rep.to_quotient(QQ.one()) ==
          ta::Quotient<mpq_class>::from_poly(Poly<mpq_class>::monomial(GroupElement(), frac(1, 2)),
                                             QQ.one()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        CHECK(nodes[i].label == mpq_class(static_cast<unsigned long>(i)));

    CHECK(b.witnesses.empty());
    CHECK(b.pres.units.empty());
    CHECK(!b.sector);

    ta::UniserialReport rep = ta::verify_presentation(b);
    CHECK(rep.ok);
    CHECK(rep.unit_triples == 0);
    CHECK(rep.edges == 0);
    CHECK(rep.labels_total == 4);

    // A small coefficient field caps the base table below the budget.
    ta::TypeSpec<ta::PrimeField> mod3(ta::PrimeField(3), RingFlavor::R2, Ordinal(0));
    auto b3 = ta::build_uniserial(mod3, Ordinal(0), 5);
    REQUIRE(b3.labels.tables[0].nodes.size() == 2);
    CHECK(b3.labels.tables[0].nodes[0].label == 0);
    CHECK(b3.labels.tables[0].nodes[1].label == 1);

    CHECK_THROWS_AS(ta::build_uniserial(spec_to(Ordinal(2)), Ordinal(2), 0), std::domain_error);
    CHECK_THROWS_AS(ta::build_uniserial(spec_to(Ordinal(2)), Ordinal(3), 4), std::domain_error);
}

TEST_CASE("successor chain matches the hand enumeration") {
    Spec spec = spec_to(Ordinal(2));
    Build b = ta::build_uniserial(spec, Ordinal(2), 3);

    REQUIRE(b.pres.levels == std::vector<Ordinal>{Ordinal(0), Ordinal(1), Ordinal(2)});
    CHECK(b.pres.unit(Ordinal(0), Ordinal(1)).is_one_structurally());
    CHECK(b.pres.unit(Ordinal(1), Ordinal(2)).is_one_structurally());
    CHECK(b.pres.unit(Ordinal(0), Ordinal(2)).is_one_structurally());

    // Level 0: constants 1, -1, 1/2 labeled 0, 1, 2.
    // Level 1: the even stage relabels 1 at 1/2; the demand on it is met by
    // the first one-below-0 unit at 1/2; the next even stage places -1 at
    // its base label plus the stage step, 1 + 1/6.
    // Level 2 repeats the pattern one level up with anchors 1/2.
    const auto& t0 = b.labels.tables[0].nodes;
    const auto& t1 = b.labels.tables[1].nodes;
    const auto& t2 = b.labels.tables[2].nodes;
    REQUIRE(t0.size() == 3);
    REQUIRE(t1.size() == 3);
    REQUIRE(t2.size() == 3);

    CHECK(t1[0].rep == U());
    CHECK(t1[0].label == frac(1, 2));
    CHECK(t1[1].rep == w_at(spec, Ordinal(0), 0));
    CHECK(t1[1].label == frac(1, 2));
    CHECK(t1[2].rep == constant(-1));
    CHECK(t1[2].label == frac(7, 6));

    CHECK(t2[0].rep == U());
    CHECK(t2[0].label == mpq_class(1));
    CHECK(t2[1].rep == w_at(spec, Ordinal(1), 0));
    CHECK(t2[1].label == mpq_class(1));
    CHECK(t2[2].rep == w_at(spec, Ordinal(0), 0));
    CHECK(t2[2].label == frac(2, 3));

    REQUIRE(b.witnesses.size() == 2);
    const auto& w0 = b.witnesses[0];
    CHECK(w0.level == Ordinal(1));
    CHECK(w0.base == Ordinal(0));
    CHECK(w0.n == 1);
    CHECK(w0.u == w_at(spec, Ordinal(0), 0));
    CHECK(w0.added == std::vector<std::size_t>{1});
    CHECK(w0.anchors == std::vector<mpq_class>{mpq_class(0)});
    const auto& w1 = b.witnesses[1];
    CHECK(w1.level == Ordinal(2));
    CHECK(w1.base == Ordinal(1));
    CHECK(w1.anchors == std::vector<mpq_class>{frac(1, 2)});

    ta::UniserialReport rep = ta::verify_presentation(b);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
    CHECK(rep.unit_triples == 1);
    CHECK(rep.labels_total == 9);
    CHECK(rep.pair_tests == 27);
    CHECK(rep.edges == 9);
    CHECK(rep.witness_instances == 2);
}

TEST_CASE("successor tables fill their budget and stay verified") {
    Spec spec = spec_to(Ordinal(3));
    Build b = ta::build_uniserial(spec, Ordinal(3), 5);

    REQUIRE(b.labels.tables.size() == 4);
    for (const auto& t : b.labels.tables) CHECK(t.nodes.size() == 5);

    CHECK(b.stats.odd_discharged >= 3);
    CHECK(b.stats.even_added >= 6);
    CHECK(b.witnesses.size() == b.stats.odd_discharged);

    for (const auto& w : b.witnesses) {
        CHECK(w.base < w.level);
        CHECK(ta::unit_congruent(w.u, U(), spec.rv(w.base), QQ.one()));
        CHECK(w.added.size() == w.anchors.size());
    }

    ta::UniserialReport rep = ta::verify_presentation(b);
    CHECK(rep.ok);
    CHECK(rep.unit_triples == 4);
    CHECK(rep.labels_total == 20);

    // Two runs of the same configuration agree node for node.
    Build c = ta::build_uniserial(spec, Ordinal(3), 5);
    REQUIRE(c.labels.tables.size() == b.labels.tables.size());
    for (std::size_t li = 0; li < b.labels.tables.size(); ++li) {
        const auto& x = b.labels.tables[li].nodes;
        const auto& y = c.labels.tables[li].nodes;
        REQUIRE(x.size() == y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i].rep == y[i].rep);
            CHECK(x[i].label == y[i].label);
        }
    }
}

TEST_CASE("limit level bridges along the ladder") {
    Spec spec = spec_to(Ordinal::omega());
    Build b = ta::build_uniserial(spec, Ordinal::omega(), 4);

    REQUIRE(b.pres.levels.size() == 6);
    CHECK(b.pres.levels.back() == Ordinal::omega());
    for (unsigned long long k = 0; k < 5; ++k)
        CHECK_NOTHROW(b.pres.unit(Ordinal(k), Ordinal::omega()));

    const ta::LevelTable<ta::RationalField>* top = b.labels.find(Ordinal::omega());
    REQUIRE(top != nullptr);
    CHECK(!top->nodes.empty());

    // The transport correction below the limit forces labels to be added
    // retroactively at ladder points.
    CHECK(b.stats.retro_labels >= 1);

    bool limit_witness = false;
    for (const auto& w : b.witnesses)
        if (w.level == Ordinal::omega()) {
            limit_witness = true;
            CHECK(w.base < Ordinal::omega());
        }
    CHECK(limit_witness);

    ta::UniserialReport rep = ta::verify_presentation(b);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
    CHECK(rep.edges > 0);

    // Determinism across runs, including the retroactive additions.
    Build c = ta::build_uniserial(spec, Ordinal::omega(), 4);
    REQUIRE(c.labels.tables.size() == b.labels.tables.size());
    for (std::size_t li = 0; li < b.labels.tables.size(); ++li) {
        const auto& x = b.labels.tables[li].nodes;
        const auto& y = c.labels.tables[li].nodes;
        REQUIRE(x.size() == y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i].rep == y[i].rep);
            CHECK(x[i].label == y[i].label);
        }
    }
}

TEST_CASE("verification pinpoints tampering") {
    Spec spec = spec_to(Ordinal(2));
    Build b = ta::build_uniserial(spec, Ordinal(2), 3);

    SUBCASE("a rescaled transport breaks the cocycle rule") {
        Build t = b;
        auto key = std::pair<Ordinal, Ordinal>(Ordinal(1), Ordinal(2));
        t.pres.units[key] = mul(t.pres.units[key], constant(2));
        ta::UniserialReport rep = ta::verify_presentation(t);
        CHECK(!rep.ok);
        bool found = false;
        for (const auto& v : rep.violations)
            if (v.what == "transport cocycle rule fails") {
                found = true;
                CHECK(v.lo == Ordinal(0));
                CHECK(v.mid == Ordinal(1));
                CHECK(v.hi == Ordinal(2));
            }
        CHECK(found);
    }

    SUBCASE("a lowered label breaks the edge order") {
        Build t = b;
        t.labels.tables[1].nodes[0].label = mpq_class(-5);
        ta::UniserialReport rep = ta::verify_presentation(t);
        CHECK(!rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].what == "labels do not increase along a tree edge");
        CHECK(rep.violations[0].lo == Ordinal(0));
        CHECK(rep.violations[0].hi == Ordinal(1));
        CHECK(rep.violations[0].i == 0);
        CHECK(rep.violations[0].j == 0);
    }

    SUBCASE("a witness with the wrong unit is rejected") {
        Build t = b;
        t.witnesses[0].u = constant(2);
        ta::UniserialReport rep = ta::verify_presentation(t);
        CHECK(!rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].what == "witness unit is not one below its base level");
    }

    SUBCASE("a shrunk slack window flags the witness labels") {
        Build t = b;
        t.witnesses[1].n = 1000000;
        ta::UniserialReport rep = ta::verify_presentation(t);
        CHECK(!rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].what == "witness label escapes its slack window");
    }

    SUBCASE("a witness pointing nowhere is reported, not followed") {
        Build t = b;
        t.witnesses[0].level = Ordinal(7);
        ta::UniserialReport rep = ta::verify_presentation(t);
        CHECK(!rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].what == "witness points at an unknown level");
    }
}

TEST_CASE("standardness candidates are accepted and refuted") {
    Spec spec = spec_to(Ordinal(2));
    Build b = ta::build_uniserial(spec, Ordinal(2), 3);
    const U& e01 = b.pres.unit(Ordinal(0), Ordinal(1));
    const U& e02 = b.pres.unit(Ordinal(0), Ordinal(2));

    SUBCASE("forward transports of one base unit cohere") {
        U z = b.labels.tables[0].nodes[1].rep;
        std::vector<std::pair<Ordinal, U>> chain{
            {Ordinal(0), z}, {Ordinal(1), mul(e01, z)}, {Ordinal(2), mul(e02, z)}};
        ta::StandardnessVerdict v = ta::check_standardness_candidate(b, chain);
        CHECK(v.coherent);
        CHECK(v.checked == 3);
    }

    SUBCASE("a twist that only appears above its level is caught there") {
        U w = w_at(spec, Ordinal(0), 0);
        std::vector<std::pair<Ordinal, U>> chain{
            {Ordinal(0), U()}, {Ordinal(1), e01}, {Ordinal(2), mul(w, e02)}};
        ta::StandardnessVerdict v = ta::check_standardness_candidate(b, chain);
        CHECK(!v.coherent);
        CHECK(v.lo == Ordinal(1));
        CHECK(v.hi == Ordinal(2));
        CHECK(v.checked == 3);
    }

    SUBCASE("constant twists are refuted at the first pair that sees them") {
        for (std::size_t t = 0; t < 12; ++t) {
            U twist = U::from_poly(
                Poly<mpq_class>::monomial(GroupElement(), QQ.nonzero(2 * (t + 1))));
            bool at_one = t % 2 == 0;
            std::vector<std::pair<Ordinal, U>> chain{
                {Ordinal(0), U()},
                {Ordinal(1), at_one ? mul(twist, e01) : e01},
                {Ordinal(2), at_one ? e02 : mul(twist, e02)}};
            ta::StandardnessVerdict v = ta::check_standardness_candidate(b, chain);
            CHECK(!v.coherent);
            CHECK(v.lo == Ordinal(0));
            CHECK(v.hi == (at_one ? Ordinal(1) : Ordinal(2)));
        }
    }

    SUBCASE("malformed chains are rejected up front") {
        std::vector<std::pair<Ordinal, U>> bad{{Ordinal(1), U()}, {Ordinal(0), U()}};
        CHECK_THROWS_AS(ta::check_standardness_candidate(b, bad), std::domain_error);
        std::vector<std::pair<Ordinal, U>> unknown{{Ordinal(0), U()}, {Ordinal(9), U()}};
        CHECK_THROWS_AS(ta::check_standardness_candidate(b, unknown), std::domain_error);
    }
}

TEST_CASE("coherence across a limit needs the top-down transport") {
    Spec spec = spec_to(Ordinal::omega());
    Build b = ta::build_uniserial(spec, Ordinal::omega(), 4);
    const auto& L = b.pres.levels;
    U z = b.labels.tables[0].nodes[1].rep;

    // Pulling the top transport down makes every pair test a verified
    // cocycle triple, so the chain coheres.
    U top = b.pres.unit(L[0], L.back());
    std::vector<std::pair<Ordinal, U>> down;
    for (std::size_t i = 0; i < L.size(); ++i) {
        U drop = i + 1 < L.size() ? inv(b.pres.unit(L[i], L.back())) : U();
        down.emplace_back(L[i], mul(z, mul(top, drop)));
    }
    ta::StandardnessVerdict ok = ta::check_standardness_candidate(b, down);
    CHECK(ok.coherent);
    CHECK(ok.checked == L.size() * (L.size() - 1) / 2);

    // Pushing z upward from the base instead ignores the ladder correction
    // units, which the pair test at their own level sees.
    std::vector<std::pair<Ordinal, U>> up;
    for (std::size_t i = 0; i < L.size(); ++i)
        up.emplace_back(L[i], i == 0 ? z : mul(b.pres.unit(L[0], L[i]), z));
    ta::StandardnessVerdict bad = ta::check_standardness_candidate(b, up);
    CHECK(!bad.coherent);
    CHECK(bad.lo == Ordinal(1));
    CHECK(bad.hi == Ordinal::omega());
}

TEST_CASE("sector builds stay inside one coset") {
    Spec spec = spec_to(Ordinal(2));
    U z0 = constant(3);
    Build b = ta::build_uniserial_sector(spec, z0, Ordinal(2), 4);

    REQUIRE(b.sector.has_value());
    CHECK(*b.sector == z0);
    REQUIRE(b.labels.tables[0].nodes.size() == 1);
    CHECK(b.labels.tables[0].nodes[0].rep == z0);
    CHECK(b.labels.tables[0].nodes[0].label == 0);
    for (const auto& t : b.labels.tables) CHECK(!t.nodes.empty());

    ta::UniserialReport rep = ta::verify_presentation(b);
    CHECK(rep.ok);

    ta::SectorReport sec = ta::sector_membership_report(b);
    CHECK(sec.ok);
    CHECK(sec.checked == rep.labels_total);

    // The constant 1 lies outside the coset of 3 and must never be labeled.
    for (const auto& t : b.labels.tables)
        for (const auto& n : t.nodes)
            CHECK(!ta::unit_congruent(n.rep, U(), spec.rv(Ordinal(0)), QQ.one()));

    SUBCASE("a planted outside node is caught with its position") {
        Build t = b;
        t.labels.tables[1].nodes.push_back({U(), mpq_class(7)});
        ta::SectorReport bad = ta::sector_membership_report(t);
        CHECK(!bad.ok);
        CHECK(bad.level == Ordinal(1));
        CHECK(bad.node == t.labels.tables[1].nodes.size() - 1);
    }

    SUBCASE("plain builds refuse the sector report") {
        Build plain = ta::build_uniserial(spec, Ordinal(2), 3);
        CHECK_THROWS_AS(ta::sector_membership_report(plain), std::domain_error);
    }
}
