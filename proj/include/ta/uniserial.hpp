#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ta/group.hpp"
#include "ta/hahn.hpp"
#include "ta/ordinal.hpp"
#include "ta/ring.hpp"
#include "ta/unit_expr.hpp"

namespace ta {

/// A unit representative of a coset together with its rational label.
template <typename F>
struct LabeledNode {
    UnitExpr<typename F::Elem> rep;
    mpq_class label;
};

/// The labeled slice of one quotient level: cosets are identified by
/// congruence below `cut`, so membership is a scan with unit_congruent.
template <typename F>
struct LevelTable {
    Ordinal level;
    GroupElement cut;
    std::vector<LabeledNode<F>> nodes;
};

/// A family of transport units e(lo, hi) between materialized levels,
/// multiplicative over intermediate levels up to congruence: the cocycle
/// rule e(mid, hi) * e(lo, mid) == e(lo, hi) holds below cut(lo).
template <typename F>
struct Presentation {
    TypeSpec<F> spec;
    std::vector<Ordinal> levels;  // ascending
    std::map<std::pair<Ordinal, Ordinal>, UnitExpr<typename F::Elem>> units;

    const UnitExpr<typename F::Elem>& unit(const Ordinal& lo, const Ordinal& hi) const {
        auto it = units.find(std::pair<Ordinal, Ordinal>(lo, hi));
        if (it == units.end())
            throw std::domain_error("no transport unit for levels " + lo.to_text() + " and " +
                                    hi.to_text());
        return it->second;
    }
};

template <typename F>
struct SpecialLabels {
    std::vector<LevelTable<F>> tables;  // aligned with the presentation's levels

    const LevelTable<F>* find(const Ordinal& level) const {
        for (const LevelTable<F>& t : tables)
            if (t.level == level) return &t;
        return nullptr;
    }
};

/// Record of one discharged separation instance: the unit u is congruent to
/// one below level `base`, and every label added at `level` stays within
/// 1/(2n) above its anchor label at `base`.
template <typename F>
struct InstanceWitness {
    Ordinal level;
    Ordinal base;
    unsigned long long n = 1;
    UnitExpr<typename F::Elem> u;
    std::vector<std::size_t> added;    // node indices at `level`
    std::vector<mpq_class> anchors;    // base labels, aligned with `added`
    std::size_t repeat = 0;
};

struct BuildStats {
    std::size_t stages = 0;
    std::size_t even_added = 0;
    std::size_t skipped_even = 0;
    std::size_t odd_discharged = 0;
    std::size_t requeued = 0;
    std::size_t retro_labels = 0;
    std::size_t witness_searches = 0;
};

template <typename F>
struct UniserialBuild {
    Presentation<F> pres;
    SpecialLabels<F> labels;
    std::vector<InstanceWitness<F>> witnesses;
    BuildStats stats;
    std::optional<UnitExpr<typename F::Elem>> sector;  // set for sector-restricted builds
};

struct UniserialViolation {
    std::string what;
    Ordinal lo;
    Ordinal mid;  // equals lo except in transport-triple checks
    Ordinal hi;
    std::size_t i = 0;
    std::size_t j = 0;
};

struct UniserialReport {
    bool ok = true;
    std::size_t unit_triples = 0;
    std::size_t pair_tests = 0;
    std::size_t edges = 0;
    std::size_t witness_instances = 0;
    std::size_t labels_total = 0;
    std::vector<UniserialViolation> violations;
};

struct StandardnessVerdict {
    bool coherent = true;
    Ordinal lo;
    Ordinal hi;
    std::size_t checked = 0;
    std::string note;
};

struct SectorReport {
    bool ok = true;
    std::size_t checked = 0;
    Ordinal level;
    std::size_t node = 0;
};

/// One queued separation demand: slack 1/n, a base level, and the node
/// indices at the level under construction whose extensions it constrains.
struct QueuedInstance {
    unsigned long long n = 1;
    std::size_t sigma_idx = 0;
    std::vector<std::size_t> js;
    std::size_t repeat = 0;
};

/// Builds the labeled presentation level by level.  Successor levels copy
/// the transports from below and grow their table by alternating stages:
/// even stages pull the next fresh representative from a deterministic
/// enumeration and label it above all of its labeled predecessors; odd
/// stages discharge the next queued separation demand with a unit that is
/// one below the demand's base level, placing the new labels a half-slack
/// above their anchors.  Limit levels run the same stages along a ladder,
/// rebuilding the transport after every stage so that each table element
/// keeps a labeled predecessor strictly below its own label (labels at the
/// ladder level are added retroactively when the rebuilt transport needs
/// them).  All choices are deterministic, so equal inputs give equal builds.
template <typename F>
class PresentationBuilder {
    using K = typename F::Elem;
    using U = UnitExpr<K>;

public:
    PresentationBuilder(TypeSpec<F> spec, const Ordinal& bound, std::size_t budget,
                        std::optional<U> sector)
        : spec_(std::move(spec)), bound_(bound), budget_(budget), sector_(std::move(sector)) {
        if (budget_ == 0) throw std::domain_error("budget must be at least 1");
        spec_.require_level(bound_);
        one_k_ = spec_.field().one();
        ladder_stages_ = budget_ < 8 ? budget_ : 8;
        levels_ = closure(bound_);
    }

    UniserialBuild<F> run() {
        for (cur_ = 0; cur_ < levels_.size(); ++cur_) {
            tables_.push_back(LevelTable<F>{levels_[cur_], spec_.rv(levels_[cur_]), {}});
            if (levels_[cur_].is_zero()) seed_base();
            else if (levels_[cur_].is_successor()) build_successor_level();
            else build_limit_level();
        }
        return UniserialBuild<F>{Presentation<F>{spec_, levels_, std::move(units_)},
                                 SpecialLabels<F>{std::move(tables_)}, std::move(witnesses_),
                                 stats_, std::move(sector_)};
    }

private:
    TypeSpec<F> spec_;
    Ordinal bound_;
    std::size_t budget_;
    std::optional<U> sector_;
    K one_k_;
    std::size_t ladder_stages_ = 0;

    std::vector<Ordinal> levels_;
    std::vector<LevelTable<F>> tables_;
    std::map<std::pair<Ordinal, Ordinal>, U> units_;
    std::vector<InstanceWitness<F>> witnesses_;
    BuildStats stats_;
    std::map<std::size_t, std::vector<Quotient<K>>> wcache_;

    std::size_t cur_ = 0;
    bool limit_mode_ = false;
    std::size_t stage_k_ = 0;
    std::deque<QueuedInstance> queue_;
    std::vector<U> e_hist_;           // limit level: transport to ladder point k
    std::vector<std::size_t> nu_idx_; // limit level: level indices of the ladder prefix

    std::vector<Ordinal> closure(const Ordinal& bound) const {
        std::set<Ordinal> want;
        std::vector<Ordinal> work{bound};
        while (!work.empty()) {
            Ordinal o = work.back();
            work.pop_back();
            if (want.count(o)) continue;
            want.insert(o);
            if (o.is_successor()) {
                work.push_back(pred(o));
            } else if (o.is_limit()) {
                for (Ordinal& nu : ladder_prefix(o, ladder_stages_ + 1))
                    work.push_back(std::move(nu));
            }
        }
        return std::vector<Ordinal>(want.begin(), want.end());
    }

    U constant_unit(const K& c) const {
        return U::from_poly(Poly<K>::monomial(GroupElement(), c));
    }

    const Quotient<K>& w_unit(std::size_t lj, std::size_t i) {
        std::vector<Quotient<K>>& vec = wcache_[lj];
        if (vec.size() <= i) vec = w_units(spec_, levels_[lj], i + 9);
        return vec[i];
    }

    bool cong(const U& a, const U& b, std::size_t li) const {
        return unit_congruent(a, b, tables_[li].cut, one_k_);
    }

    std::optional<std::size_t> locate(std::size_t li, const U& rep) const {
        for (std::size_t i = 0; i < tables_[li].nodes.size(); ++i)
            if (cong(rep, tables_[li].nodes[i].rep, li)) return i;
        return std::nullopt;
    }

    std::size_t total_labels() const {
        std::size_t n = 0;
        for (const LevelTable<F>& t : tables_) n += t.nodes.size();
        return n;
    }

    const U& unit_at(std::size_t lo, std::size_t hi) const {
        auto it = units_.find(std::pair<Ordinal, Ordinal>(levels_[lo], levels_[hi]));
        if (it == units_.end())
            throw std::logic_error("transport requested before it was defined");
        return it->second;
    }

    void set_unit(std::size_t lo, std::size_t hi, U u) {
        units_[std::pair<Ordinal, Ordinal>(levels_[lo], levels_[hi])] = std::move(u);
    }

    /// Transport from a lower level up to the level under construction, as
    /// committed so far.  At a limit level only the segment at or below the
    /// current ladder point exists yet.
    std::optional<U> stage_transport(std::size_t lj) {
        if (!limit_mode_) return unit_at(lj, cur_);
        std::size_t nk = nu_idx_[stage_k_];
        if (levels_[nk] < levels_[lj]) return std::nullopt;
        if (lj == nk) return e_hist_[stage_k_];
        return mul(e_hist_[stage_k_], unit_at(lj, nk));
    }

    /// Largest label among the already-labeled lower predecessors of `rep`.
    std::optional<mpq_class> pred_ceiling(const U& rep) {
        std::optional<mpq_class> best;
        for (std::size_t lj = 0; lj < cur_; ++lj) {
            std::optional<U> t = stage_transport(lj);
            if (!t) continue;
            U pred = mul(rep, inv(*t));
            if (auto i = locate(lj, pred)) {
                const mpq_class& l = tables_[lj].nodes[*i].label;
                if (!best || *best < l) best = l;
            }
        }
        return best;
    }

    /// True when `rep` is fresh at the target level and `value` sits
    /// strictly above every labeled predecessor there.  `current` selects
    /// stage transports (level under construction) or final ones.
    bool can_label_at(std::size_t li, const U& rep, const mpq_class& value, bool current) {
        if (locate(li, rep)) return false;
        for (std::size_t lj = 0; lj < li; ++lj) {
            std::optional<U> t;
            if (current) t = stage_transport(lj);
            else t = unit_at(lj, li);
            if (!t) continue;
            U pred = mul(rep, inv(*t));
            if (auto i = locate(lj, pred))
                if (!(tables_[lj].nodes[*i].label < value)) return false;
        }
        return true;
    }

    std::size_t add_label(std::size_t li, const U& rep, const mpq_class& value, bool enqueue) {
        tables_[li].nodes.push_back(LabeledNode<F>{rep, value});
        std::size_t idx = tables_[li].nodes.size() - 1;
        if (enqueue && li == cur_ && li > 0) enqueue_for(idx);
        return idx;
    }

    void enqueue_for(std::size_t idx) {
        QueuedInstance a;
        a.n = idx % 3 + 1;
        if (limit_mode_) {
            std::size_t span = nu_idx_.size() > 2 ? nu_idx_.size() - 2 : 1;
            a.sigma_idx = nu_idx_[idx % span];
        } else {
            a.sigma_idx = cur_ - 1;
        }
        a.js = {idx};
        queue_.push_back(a);
        if (idx % 2 == 1) {
            QueuedInstance b = a;
            b.n = (idx / 2) % 3 + 1;
            b.js = {idx - 1, idx};
            queue_.push_back(b);
        }
    }

    void seed_base() {
        if (sector_) {
            add_label(0, *sector_, mpq_class(0), false);
            return;
        }
        std::size_t next = 0;
        for (std::size_t r = 0; r < 4 * budget_ + 16 && tables_[0].nodes.size() < budget_; ++r) {
            U c = constant_unit(spec_.field().nonzero(r));
            if (locate(0, c)) continue;
            add_label(0, c, mpq_class(static_cast<unsigned long>(next++)), false);
        }
    }

    /// Pulls the next fresh representative whose anchor predecessor is
    /// already labeled and labels it just above all its labeled
    /// predecessors.  Representatives are drawn constants-first, then the
    /// one-below-each-level binomials, dovetailed by round.
    bool even_stage(std::size_t k, std::size_t anchor_idx) {
        mpq_class step(1, static_cast<unsigned long>(2 * (k + 1)));
        std::optional<U> base;
        if (sector_) {
            std::optional<U> t0 = stage_transport(0);
            if (t0) base = mul(*sector_, *t0);
        }
        auto try_cand = [&](const U& cand) -> bool {
            if (locate(cur_, cand)) return false;
            std::optional<U> ta = stage_transport(anchor_idx);
            if (!ta) return false;
            if (!locate(anchor_idx, mul(cand, inv(*ta)))) return false;
            std::optional<mpq_class> ceil = pred_ceiling(cand);
            mpq_class label = *ceil + step;
            add_label(cur_, cand, label, true);
            ++stats_.even_added;
            return true;
        };
        if (sector_ && base && try_cand(*base)) return true;
        for (std::size_t r = 0; r < budget_ + 6; ++r) {
            if (!sector_ && try_cand(constant_unit(spec_.field().nonzero(r)))) return true;
            for (std::size_t lj = 0; lj < cur_; ++lj) {
                U w = U::from_quotient(w_unit(lj, r));
                if (sector_) {
                    if (base && try_cand(mul(*base, w))) return true;
                } else if (try_cand(w)) {
                    return true;
                }
            }
        }
        ++stats_.skipped_even;
        return false;
    }

    bool odd_stage() {
        std::size_t tries = queue_.size();
        while (tries-- > 0) {
            QueuedInstance ins = queue_.front();
            queue_.pop_front();
            if (try_discharge(ins)) {
                ++stats_.odd_discharged;
                if (ins.repeat < 1) {
                    ++ins.repeat;
                    queue_.push_back(ins);
                }
                return true;
            }
            ++ins.repeat;
            queue_.push_back(ins);
            ++stats_.requeued;
        }
        return false;
    }

    /// Discharges one queued demand: find a unit w, congruent to one below
    /// the demand's base level, whose products with the demand's nodes are
    /// fresh and can be labeled a half-slack above their anchors.  At a
    /// limit level the products' ladder-point predecessors are labeled on
    /// the spot (a quarter-slack above the anchor) when missing, keeping
    /// every new element anchored strictly below its own label.
    bool try_discharge(const QueuedInstance& ins) {
        if (limit_mode_ && !(levels_[ins.sigma_idx] < levels_[nu_idx_[stage_k_]])) return false;
        std::optional<U> ts = stage_transport(ins.sigma_idx);
        if (!ts) return false;
        std::vector<mpq_class> anchors;
        for (std::size_t j : ins.js) {
            U pj = mul(tables_[cur_].nodes[j].rep, inv(*ts));
            auto ia = locate(ins.sigma_idx, pj);
            if (!ia) return false;
            anchors.push_back(tables_[ins.sigma_idx].nodes[*ia].label);
        }
        mpq_class step(1, static_cast<unsigned long>(2 * ins.n));
        mpq_class retro_step(1, static_cast<unsigned long>(4 * ins.n));
        ++stats_.witness_searches;
        std::size_t cap = 48 + 4 * total_labels();
        for (std::size_t i = 0; i < cap; ++i) {
            U w = U::from_quotient(w_unit(ins.sigma_idx, i));
            bool ok = true;
            std::vector<std::pair<U, mpq_class>> retro;  // at the current ladder point
            std::vector<std::pair<U, mpq_class>> fresh;  // at the level under construction
            for (std::size_t jj = 0; jj < ins.js.size() && ok; ++jj) {
                U x = mul(w, tables_[cur_].nodes[ins.js[jj]].rep);
                mpq_class target = anchors[jj] + step;
                if (limit_mode_) {
                    std::size_t nk = nu_idx_[stage_k_];
                    U pk = mul(x, inv(e_hist_[stage_k_]));
                    if (auto ik = locate(nk, pk)) {
                        if (!(tables_[nk].nodes[*ik].label < target)) {
                            ok = false;
                            break;
                        }
                    } else {
                        mpq_class rv = anchors[jj] + retro_step;
                        bool dup = false;
                        for (const auto& pl : retro)
                            if (cong(pl.first, pk, nk)) {
                                dup = true;
                                break;
                            }
                        if (!dup) {
                            if (!can_label_at(nk, pk, rv, false)) {
                                ok = false;
                                break;
                            }
                            retro.emplace_back(pk, rv);
                        }
                    }
                }
                if (!can_label_at(cur_, x, target, true)) {
                    ok = false;
                    break;
                }
                fresh.emplace_back(x, target);
            }
            if (!ok) continue;
            if (limit_mode_) {
                std::size_t nk = nu_idx_[stage_k_];
                for (auto& [p, val] : retro) {
                    add_label(nk, p, val, false);
                    ++stats_.retro_labels;
                }
            }
            InstanceWitness<F> wit{levels_[cur_], levels_[ins.sigma_idx], ins.n,
                                   w,             {},                     anchors,
                                   ins.repeat};
            for (auto& [x, val] : fresh) wit.added.push_back(add_label(cur_, x, val, true));
            witnesses_.push_back(std::move(wit));
            return true;
        }
        return false;
    }

    /// Rebuilds the transport for the next ladder point so that every table
    /// element keeps a labeled predecessor strictly below its own label:
    /// the candidate transport is corrected by a unit v, congruent to one
    /// at the current point, whose products land on labels (existing or
    /// added here) inside half the smallest remaining slack.
    void e_sweep(std::size_t k) {
        std::size_t nk = nu_idx_[k];
        std::size_t nk1 = nu_idx_[k + 1];
        U eprime = mul(e_hist_[k], inv(unit_at(nk, nk1)));
        std::vector<std::pair<std::size_t, mpq_class>> anchor;
        std::optional<mpq_class> min_slack;
        for (std::size_t i = 0; i < tables_[cur_].nodes.size(); ++i) {
            U pk = mul(tables_[cur_].nodes[i].rep, inv(e_hist_[k]));
            auto ik = locate(nk, pk);
            if (!ik) throw std::runtime_error("limit bridging lost its anchor");
            mpq_class a = tables_[nk].nodes[*ik].label;
            mpq_class slack = tables_[cur_].nodes[i].label - a;
            if (!(slack > 0)) throw std::runtime_error("limit bridging lost its slack");
            anchor.emplace_back(i, a);
            if (!min_slack || slack < *min_slack) min_slack = slack;
        }
        if (!min_slack) {
            e_hist_.push_back(eprime);
            return;
        }
        mpq_class epsp = *min_slack / 2;
        std::size_t cap = 48 + 4 * total_labels();
        for (std::size_t i = 0; i <= cap; ++i) {
            U v = i == 0 ? U() : U::from_quotient(w_unit(nk, i - 1));
            bool ok = true;
            std::vector<std::pair<U, mpq_class>> plan;
            for (const auto& [xi, a] : anchor) {
                U p = mul(mul(v, tables_[cur_].nodes[xi].rep), inv(eprime));
                if (auto ip = locate(nk1, p)) {
                    if (!(tables_[nk1].nodes[*ip].label < a + epsp)) {
                        ok = false;
                        break;
                    }
                } else {
                    mpq_class val = a + epsp / 2;
                    bool dup = false;
                    for (const auto& pl : plan)
                        if (cong(pl.first, p, nk1)) {
                            dup = true;
                            break;
                        }
                    if (dup) continue;
                    if (!can_label_at(nk1, p, val, false)) {
                        ok = false;
                        break;
                    }
                    plan.emplace_back(p, val);
                }
            }
            if (!ok) continue;
            for (auto& [p, val] : plan) {
                add_label(nk1, p, val, false);
                ++stats_.retro_labels;
            }
            e_hist_.push_back(mul(inv(v), eprime));
            return;
        }
        throw std::runtime_error("no unit re-establishes the limit bridging");
    }

    void build_successor_level() {
        limit_mode_ = false;
        std::size_t ti = cur_ - 1;
        set_unit(ti, cur_, U());
        for (std::size_t lj = 0; lj < ti; ++lj) set_unit(lj, cur_, unit_at(lj, ti));
        queue_.clear();
        for (std::size_t k = 0; k < 2 * budget_; ++k) {
            ++stats_.stages;
            if (k % 2 == 0) even_stage(k, ti);
            else odd_stage();
            if (tables_[cur_].nodes.size() >= budget_) break;
        }
    }

    void build_limit_level() {
        limit_mode_ = true;
        std::vector<Ordinal> pts = ladder_prefix(levels_[cur_], ladder_stages_ + 1);
        nu_idx_.clear();
        for (const Ordinal& p : pts) nu_idx_.push_back(index_of(p));
        e_hist_.assign(1, U());
        queue_.clear();
        for (std::size_t k = 0; k + 1 < nu_idx_.size(); ++k) {
            stage_k_ = k;
            ++stats_.stages;
            if (k % 2 == 0) even_stage(k, nu_idx_[k]);
            else odd_stage();
            e_sweep(k);
        }
        for (std::size_t lj = 0; lj < cur_; ++lj) {
            std::size_t kk = 0;
            while (kk < nu_idx_.size() && levels_[nu_idx_[kk]] < levels_[lj]) ++kk;
            if (kk == nu_idx_.size())
                throw std::logic_error("materialized level above the ladder prefix");
            U e = nu_idx_[kk] == lj ? e_hist_[kk] : mul(e_hist_[kk], unit_at(lj, nu_idx_[kk]));
            set_unit(lj, cur_, std::move(e));
        }
        limit_mode_ = false;
    }

    std::size_t index_of(const Ordinal& level) const {
        for (std::size_t i = 0; i < levels_.size(); ++i)
            if (levels_[i] == level) return i;
        throw std::logic_error("level " + level.to_text() + " is not materialized");
    }
};

template <typename F>
UniserialBuild<F> build_uniserial(const TypeSpec<F>& spec, const Ordinal& bound,
                                  std::size_t budget) {
    return PresentationBuilder<F>(spec, bound, budget, std::nullopt).run();
}

template <typename F>
UniserialBuild<F> build_uniserial_sector(const TypeSpec<F>& spec,
                                         const UnitExpr<typename F::Elem>& z0,
                                         const Ordinal& bound, std::size_t budget) {
    return PresentationBuilder<F>(spec, bound, budget, z0).run();
}

/// Exhaustive check of the built data: the transport cocycle rule on every
/// level triple, strict label increase across every comparable labeled pair
/// (two nodes are comparable when the higher one is congruent to the lower
/// one moved by the transport, below the lower cut), and every recorded
/// witness: its unit is one below the base level and each added label stays
/// within the half-slack above its anchor.
template <typename F>
UniserialReport verify_presentation(const UniserialBuild<F>& b) {
    using K = typename F::Elem;
    using U = UnitExpr<K>;
    UniserialReport rep;
    const Presentation<F>& P = b.pres;
    K one = P.spec.field().one();
    std::size_t L = P.levels.size();

    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i + 1; j < L; ++j)
            for (std::size_t k = j + 1; k < L; ++k) {
                ++rep.unit_triples;
                U lhs = mul(P.unit(P.levels[j], P.levels[k]), P.unit(P.levels[i], P.levels[j]));
                if (!unit_congruent(lhs, P.unit(P.levels[i], P.levels[k]),
                                    P.spec.rv(P.levels[i]), one)) {
                    rep.ok = false;
                    rep.violations.push_back({"transport cocycle rule fails", P.levels[i],
                                              P.levels[j], P.levels[k], 0, 0});
                }
            }

    for (std::size_t i = 0; i < L; ++i) {
        const LevelTable<F>& lo = b.labels.tables[i];
        rep.labels_total += lo.nodes.size();
        for (std::size_t j = i + 1; j < L; ++j) {
            const LevelTable<F>& hi = b.labels.tables[j];
            const U& t = P.unit(P.levels[i], P.levels[j]);
            for (std::size_t a = 0; a < lo.nodes.size(); ++a) {
                U lifted = mul(lo.nodes[a].rep, t);
                for (std::size_t c = 0; c < hi.nodes.size(); ++c) {
                    ++rep.pair_tests;
                    if (!unit_congruent(hi.nodes[c].rep, lifted, lo.cut, one)) continue;
                    ++rep.edges;
                    if (!(lo.nodes[a].label < hi.nodes[c].label)) {
                        rep.ok = false;
                        rep.violations.push_back({"labels do not increase along a tree edge",
                                                  P.levels[i], P.levels[i], P.levels[j], a, c});
                    }
                }
            }
        }
    }

    for (const InstanceWitness<F>& w : b.witnesses) {
        ++rep.witness_instances;
        if (!unit_congruent(w.u, U(), P.spec.rv(w.base), one)) {
            rep.ok = false;
            rep.violations.push_back(
                {"witness unit is not one below its base level", w.base, w.base, w.level, 0, 0});
        }
        const LevelTable<F>* t = b.labels.find(w.level);
        if (!t) {
            rep.ok = false;
            rep.violations.push_back(
                {"witness points at an unknown level", w.base, w.base, w.level, 0, 0});
            continue;
        }
        mpq_class step(1, static_cast<unsigned long>(2 * w.n));
        for (std::size_t j = 0; j < w.added.size(); ++j) {
            if (w.added[j] >= t->nodes.size()) {
                rep.ok = false;
                rep.violations.push_back({"witness points at an unknown node", w.base, w.base,
                                          w.level, w.added[j], j});
                continue;
            }
            const mpq_class& l = t->nodes[w.added[j]].label;
            if (!(w.anchors[j] < l) || l > w.anchors[j] + step) {
                rep.ok = false;
                rep.violations.push_back({"witness label escapes its slack window", w.base,
                                          w.base, w.level, w.added[j], j});
            }
        }
    }
    return rep;
}

/// Tests a candidate coherent family: on every ascending pair of queried
/// levels the higher unit must be congruent to the transported lower unit
/// below the lower cut.  Returns the first violating pair.
template <typename F>
StandardnessVerdict check_standardness_candidate(
    const UniserialBuild<F>& b,
    const std::vector<std::pair<Ordinal, UnitExpr<typename F::Elem>>>& chain) {
    using K = typename F::Elem;
    K one = b.pres.spec.field().one();
    StandardnessVerdict v;
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j) {
            if (!(chain[i].first < chain[j].first))
                throw std::domain_error("candidate levels must be strictly ascending");
            ++v.checked;
            if (!unit_congruent(chain[j].second,
                                mul(b.pres.unit(chain[i].first, chain[j].first), chain[i].second),
                                b.pres.spec.rv(chain[i].first), one)) {
                v.coherent = false;
                v.lo = chain[i].first;
                v.hi = chain[j].first;
                v.note = "transport congruence fails at the returned pair";
                return v;
            }
        }
    v.note = "coherent on all queried pairs";
    return v;
}

/// For sector-restricted builds: every labeled node at every level must be
/// congruent, below the base cut, to the sector delegate moved up from
/// level zero.
template <typename F>
SectorReport sector_membership_report(const UniserialBuild<F>& b) {
    using K = typename F::Elem;
    using U = UnitExpr<K>;
    if (!b.sector) throw std::domain_error("build has no sector restriction");
    K one = b.pres.spec.field().one();
    const GroupElement& cut = b.labels.tables.front().cut;
    SectorReport rep;
    for (std::size_t li = 0; li < b.pres.levels.size(); ++li) {
        U target = *b.sector;
        if (li > 0) target = mul(*b.sector, b.pres.unit(b.pres.levels[0], b.pres.levels[li]));
        const LevelTable<F>& t = b.labels.tables[li];
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            ++rep.checked;
            if (!unit_congruent(t.nodes[i].rep, target, cut, one)) {
                rep.ok = false;
                rep.level = t.level;
                rep.node = i;
                return rep;
            }
        }
    }
    return rep;
}

} // namespace ta
