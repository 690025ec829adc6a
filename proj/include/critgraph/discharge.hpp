#pragma once

#include "critgraph/classify.hpp"
#include "critgraph/coloring.hpp"
#include "critgraph/dense.hpp"
#include "critgraph/params.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace critgraph {

/// Partition of V(G) into the static class S0, the absorbed layers S1, S2,
/// ..., the very lordly residue and the discharged set D.
struct Decomposition {
    std::vector<int> layer;       // 0 for S0, i for S_i, -1 outside every layer
    std::vector<char> lordly;     // very lordly and outside every layer
    std::vector<char> discharged; // D
    std::vector<std::vector<vertex_t>> layers;
    std::vector<vertex_t> lordly_set;
    std::vector<vertex_t> D;
    Ordering ordering;            // later layers first

    bool in_layers(vertex_t v) const { return layer[v] >= 0; }
    /// Receives charge from D: any vertex outside D.
    bool receiver(vertex_t v) const { return !discharged[v]; }
};

inline Decomposition build_decomposition(const Analysis& a)
{
    const Graph& g = a.graph();
    const int n = g.order();
    Decomposition dec;
    auto seed = static_saved_set(a);
    dec.layer = build_layers(g, seed, [&](vertex_t v, long long c) { return Real(c) >= a.cal().layer_need(a.save(v)); });
    dec.lordly.assign(static_cast<std::size_t>(n), 0);
    dec.discharged.assign(static_cast<std::size_t>(n), 0);
    for (vertex_t v = 0; v < n; ++v) {
        if (dec.layer[v] >= 0) {
            if (static_cast<int>(dec.layers.size()) <= dec.layer[v]) dec.layers.resize(static_cast<std::size_t>(dec.layer[v]) + 1);
            dec.layers[dec.layer[v]].push_back(v);
        } else if (is_very_lordly(a, v, partition_neighbors(a, v))) {
            dec.lordly[v] = 1;
            dec.lordly_set.push_back(v);
        } else {
            dec.discharged[v] = 1;
            dec.D.push_back(v);
        }
    }
    dec.ordering = ordering_from_layers(dec.layer);
    return dec;
}

struct Transfer {
    std::string rule;  // R1..R4
    vertex_t from = 0, to = 0;
    Affine amount;
};

/// Charges before and after each rule, exact in the rational coefficients,
/// with a double-precision shadow computed by the same transfers.
struct ChargeLedger {
    std::vector<Affine> ch, ch1, ch2, ch_star;
    std::vector<double> ch_f, ch_star_f;
    std::vector<char> heavy;
    std::vector<Transfer> trace;
    Real lambda;

    Affine total(const std::vector<Affine>& xs) const
    {
        Affine s{0, 0};
        for (auto& x : xs) s += x;
        return s;
    }
};

inline ChargeLedger apply_rules(const Analysis& a, const Decomposition& dec)
{
    const Graph& g = a.graph();
    const int n = g.order();
    const auto& p = a.params();
    const double lam = static_cast<double>(a.cal().lambda);
    ChargeLedger led;
    led.lambda = a.cal().lambda;
    led.ch.resize(static_cast<std::size_t>(n));
    led.heavy.assign(static_cast<std::size_t>(n), 0);
    for (vertex_t v = 0; v < n; ++v) {
        led.ch[v] = charge_form(a, v);
        led.heavy[v] = heavy_from(led.ch[v], a.gap(v), p, a.cal().lambda);
    }
    led.ch_f.resize(static_cast<std::size_t>(n));
    for (vertex_t v = 0; v < n; ++v) led.ch_f[v] = led.ch[v].approx(lam);

    std::vector<Affine> cur = led.ch;
    std::vector<double> cur_f = led.ch_f;
    auto send = [&](const char* rule, vertex_t from, vertex_t to, const Affine& amt) {
        cur[from] -= amt;
        cur[to] += amt;
        const double x = amt.approx(lam);
        cur_f[from] -= x;
        cur_f[to] += x;
        led.trace.push_back({rule, from, to, amt});
    };
    const Affine nine_eps{9 * p.epsilon, 0};

    for (vertex_t v : dec.D)
        if (led.heavy[v])
            for (vertex_t u : g.neighbors(v))
                if (!dec.discharged[u]) send("R1", v, u, nine_eps);
    led.ch1 = cur;

    for (vertex_t v : dec.D) {
        if (!led.heavy[v]) continue;
        long long m = 0;
        for (vertex_t u : g.neighbors(v)) m += dec.discharged[u];
        if (m == 0) continue;  // nobody to send to
        const Affine share = Rational(1, 2 * m) * led.ch[v];
        for (vertex_t u : g.neighbors(v))
            if (dec.discharged[u]) send("R2", v, u, share);
    }
    led.ch2 = cur;

    for (vertex_t v : dec.D) {
        if (led.heavy[v]) continue;
        for (vertex_t u : g.neighbors(v)) {
            if (dec.in_layers(u)) send("R3", v, u, nine_eps);
            else if (dec.lordly[u]) send("R4", v, u, nine_eps);
        }
    }
    led.ch_star = cur;
    led.ch_star_f = cur_f;
    return led;
}

struct FinalChargeReport {
    bool hypotheses_hold = false;
    std::vector<std::string> failed_hypotheses;
    std::vector<vertex_t> nonpositive;       // v in D with ch_star(v) <= 0
    std::vector<vertex_t> heavy_over_half;   // heavy v in D with ch1(v) <= ch(v)/2

    bool pass() const { return hypotheses_hold && nonpositive.empty() && heavy_over_half.empty(); }
};

/// Checks ch_star > 0 on D and ch1 > ch/2 for heavy vertices of D, provided
/// the standing hypotheses hold; otherwise reports which one failed.
inline FinalChargeReport verify_positive_final_charge(const Analysis& a, const Decomposition& dec, const ChargeLedger& led,
                                                      bool gate_passes, DenseMode mode = DenseMode::Heuristic)
{
    FinalChargeReport r;
    for (vertex_t v = 0; v < a.graph().order(); ++v)
        if (extremely_heavy_from(led.ch[v], a.degree(v), a.params(), led.lambda)) {
            r.failed_hypotheses.push_back("extremely heavy vertex " + std::to_string(v + 1));
            break;
        }
    if (!has_no_dense_subgraph(a, mode).none) r.failed_hypotheses.push_back("dense subgraph present");
    if (!gate_passes) r.failed_hypotheses.push_back("parameter constraints fail");
    r.hypotheses_hold = r.failed_hypotheses.empty();
    if (!r.hypotheses_hold) return r;
    for (vertex_t v : dec.D) {
        if (sign(led.ch_star[v], led.lambda) <= 0) r.nonpositive.push_back(v);
        if (led.heavy[v] && sign(led.ch1[v] - Rational(1, 2) * led.ch[v], led.lambda) <= 0) r.heavy_over_half.push_back(v);
    }
    return r;
}

// ---- global inequalities ------------------------------------------------

struct InequalityResult {
    Affine lhs, rhs;
    Real lhs_value, rhs_value;
    bool holds = false;
};

namespace detail {
inline void require_lists_within_k(const Analysis& a)
{
    for (vertex_t v = 0; v < a.graph().order(); ++v)
        if (a.list_size(v) > a.params().k) throw precondition_error("|L(v)| > k at vertex " + std::to_string(v + 1));
}
inline InequalityResult finish(Affine lhs, Affine rhs, const Real& lambda, bool strict_greater)
{
    InequalityResult r{lhs, rhs, lhs.value(lambda), rhs.value(lambda), false};
    int s = sign(lhs - rhs, lambda);
    r.holds = strict_greater ? s > 0 : s < 0;
    return r;
}
}  // namespace detail

/// sum (Save + eps log^10 k) > sum (2 eps Gap - 7 eps (k - |L|)).
inline InequalityResult check_main_inequality(const Analysis& a)
{
    detail::require_lists_within_k(a);
    const auto& p = a.params();
    Affine lhs{0, 0}, rhs{0, 0};
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        lhs += Affine{a.save(v), p.epsilon};
        rhs += Affine{2 * p.epsilon * a.gap(v) - 7 * p.epsilon * (p.k - a.list_size(v)), 0};
    }
    return detail::finish(lhs, rhs, a.cal().lambda, true);
}

/// sum Save > eps sum Gap.
inline InequalityResult check_nice_inequality(const Analysis& a)
{
    const auto& p = a.params();
    Affine lhs{0, 0}, rhs{0, 0};
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        lhs += Affine{a.save(v), 0};
        rhs += Affine{p.epsilon * a.gap(v), 0};
    }
    return detail::finish(lhs, rhs, a.cal().lambda, true);
}

/// Over V(G - D): sum (Save + eps log^10 k) < sum (2 eps Gap_{G-D} - 7 eps (k - |L| + |N(v) cap D|)).
/// Save is taken in G, as in the statement.
inline InequalityResult check_residual_inequality(const Analysis& a, const std::vector<vertex_t>& D)
{
    detail::require_lists_within_k(a);
    const Graph& g = a.graph();
    const auto& p = a.params();
    std::vector<char> inD(static_cast<std::size_t>(g.order()), 0);
    for (vertex_t v : D) inD[v] = 1;
    std::vector<vertex_t> rest;
    for (vertex_t v = 0; v < g.order(); ++v)
        if (!inD[v]) rest.push_back(v);
    Graph h = g.induced(rest);
    Affine lhs{0, 0}, rhs{0, 0};
    for (std::size_t i = 0; i < rest.size(); ++i) {
        vertex_t v = rest[i];
        long long into = 0;
        for (vertex_t u : g.neighbors(v)) into += inD[u];
        lhs += Affine{a.save(v), p.epsilon};
        rhs += Affine{2 * p.epsilon * gap(h, static_cast<vertex_t>(i)) - 7 * p.epsilon * (p.k - a.list_size(v) + into), 0};
    }
    return detail::finish(lhs, rhs, a.cal().lambda, false);
}

// ---- reduction pipeline -------------------------------------------------

enum class PipelineOutcome { Saved, Colored, Uncolorable, Stuck, BudgetExhausted };

inline const char* to_string(PipelineOutcome o)
{
    switch (o) {
    case PipelineOutcome::Saved: return "saved";
    case PipelineOutcome::Colored: return "colored";
    case PipelineOutcome::Uncolorable: return "uncolorable";
    case PipelineOutcome::Stuck: return "stuck";
    case PipelineOutcome::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

struct PipelineStep {
    std::string route;  // extremely_heavy | decomposition | lordly_fallback | solver
    std::size_t vertices_before = 0;
    std::size_t vertices_after = 0;
    std::vector<vertex_t> D;  // original ids
};

struct PipelineOptions {
    std::uint64_t budget = default_node_budget;
    bool solver_fallback = true;  // finish with the exact solver when no D can be built
};

struct PipelineResult {
    PipelineOutcome outcome = PipelineOutcome::Stuck;
    std::vector<PipelineStep> steps;
    std::optional<std::vector<color_t>> coloring;  // full coloring of the input, validated
    std::vector<vertex_t> saved_vertices;          // remaining graph when Saved
    Ordering saved_ordering;                       // over saved_vertices
    bool gate_passes = false;
    bool lists_padded = false;  // extra colors were deleted to keep Save fixed
    std::string note;
};

namespace detail {

inline bool greedy_by_ordering(const Graph& h, const ListAssignment& L, const Ordering& rank, std::vector<color_t>& out)
{
    const int n = h.order();
    std::vector<vertex_t> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[rank[i]] = i;
    out.assign(static_cast<std::size_t>(n), -1);
    for (vertex_t v : order) {
        color_t pick = -1;
        for (color_t c : L[v]) {
            bool used = false;
            for (vertex_t u : h.neighbors(v)) used = used || out[u] == c;
            if (!used) {
                pick = c;
                break;
            }
        }
        if (pick < 0) return false;
        out[v] = pick;
    }
    return true;
}

}  // namespace detail

/// Repeatedly removes and colors a discharged set until the remainder is
/// saved, fully colored, or found uncolorable.
inline PipelineResult reduction_pipeline(const Graph& g, const ListAssignment& L, const ParamSet& p,
                                         const PipelineOptions& opt = {})
{
    for (vertex_t v = 0; v < g.order(); ++v)
        if (L.size(v) > std::min<long long>(g.degree(v), p.k))
            throw precondition_error("pipeline needs |L(v)| <= min(d(v), k) at vertex " + std::to_string(v + 1));
    PipelineResult res;
    res.gate_passes = check_inequalities(p).all_pass();
    std::vector<color_t> col(static_cast<std::size_t>(g.order()), -1);

    auto finish_colored = [&] {
        if (!is_proper_list_coloring(g, L, col)) throw std::logic_error("pipeline produced an invalid coloring");
        res.coloring = col;
        res.outcome = PipelineOutcome::Colored;
    };
    auto solve_rest = [&](const std::vector<vertex_t>& rest, const ListAssignment& Lr, const std::string& route) {
        PipelineStep step{route, rest.size(), 0, rest};
        auto r = list_color(g.induced(rest), Lr, opt.budget);
        res.steps.push_back(step);
        if (r.status == SolveStatus::BudgetExhausted) {
            res.outcome = PipelineOutcome::BudgetExhausted;
            return;
        }
        if (r.status == SolveStatus::Uncolorable) {
            res.outcome = PipelineOutcome::Uncolorable;
            return;
        }
        for (std::size_t i = 0; i < rest.size(); ++i) col[rest[i]] = r.coloring[i];
        finish_colored();
    };

    std::vector<vertex_t> rest(static_cast<std::size_t>(g.order()));
    for (int i = 0; i < g.order(); ++i) rest[i] = i;
    ListAssignment Lr = L;
    const std::vector<vertex_t> everything = rest;
    // earlier choices (the coloring of D, padded lists) can make the
    // remainder uncolorable although the input is not
    auto retry_on_input = [&](const std::string& why) {
        std::fill(col.begin(), col.end(), -1);
        res.coloring.reset();
        res.note = why + "; exact solver on the input";
        solve_rest(everything, L, "solver_input");
    };
    auto solve_remainder = [&](const std::string& route) {
        solve_rest(rest, Lr, route);
        if (res.outcome == PipelineOutcome::Uncolorable && rest.size() < everything.size() && opt.solver_fallback)
            retry_on_input("remainder not colorable under the reduced lists");
    };

    if (!res.gate_passes) {
        res.note = "parameter constraints fail; solver only";
        solve_rest(rest, Lr, "solver");
        return res;
    }

    while (true) {
        if (rest.empty()) {
            finish_colored();
            return res;
        }
        Graph h = g.induced(rest);
        Analysis a(h, Lr, p);
        auto sv = is_saved(a);
        if (sv.saved()) {
            res.outcome = PipelineOutcome::Saved;
            res.saved_vertices = rest;
            res.saved_ordering = sv.ordering;
            std::vector<color_t> local;
            if (detail::greedy_by_ordering(h, Lr, sv.ordering, local)) {
                for (std::size_t i = 0; i < rest.size(); ++i) col[rest[i]] = local[i];
                if (!is_proper_list_coloring(g, L, col)) throw std::logic_error("greedy completion produced an invalid coloring");
                res.coloring = col;
            } else if (opt.solver_fallback) {
                auto r = list_color(h, Lr, opt.budget);
                if (r.status == SolveStatus::Colored) {
                    for (std::size_t i = 0; i < rest.size(); ++i) col[rest[i]] = r.coloring[i];
                    if (!is_proper_list_coloring(g, L, col)) throw std::logic_error("solver produced an invalid coloring");
                    res.coloring = col;
                    res.note = "greedy completion along the ordering failed; exact solver finished the coloring";
                } else if (r.status == SolveStatus::BudgetExhausted) {
                    res.note = "greedy completion along the ordering failed; exact solver ran out of budget";
                } else {
                    retry_on_input("saved remainder not colorable under the reduced lists");
                }
            } else {
                res.note = "greedy completion along the ordering failed";
            }
            return res;
        }

        std::vector<vertex_t> D;  // local ids
        std::string route;
        for (vertex_t v = 0; v < h.order() && D.empty(); ++v)
            if (is_extremely_heavy(a, v)) {
                D = {v};
                route = "extremely_heavy";
            }
        if (D.empty()) {
            auto dec = build_decomposition(a);
            if (!dec.D.empty()) {
                D = dec.D;
                route = "decomposition";
            } else if (!dec.lordly_set.empty()) {
                D = dec.lordly_set;
                route = "lordly_fallback";
            }
        }
        if (D.empty()) {
            if (!opt.solver_fallback) {
                res.outcome = PipelineOutcome::Stuck;
                res.saved_vertices = rest;
                return res;
            }
            res.note = "no discharged set; finished with the exact solver";
            solve_remainder("solver");
            return res;
        }
        if (D.size() == rest.size()) {
            solve_remainder("solver");
            return res;
        }

        auto rD = list_color(h.induced(D), Lr.induced(D), opt.budget);
        PipelineStep step{route, rest.size(), 0, {}};
        for (vertex_t v : D) step.D.push_back(rest[v]);
        if (rD.status != SolveStatus::Colored) {
            res.steps.push_back(step);
            res.outcome = rD.status == SolveStatus::BudgetExhausted ? PipelineOutcome::BudgetExhausted : PipelineOutcome::Uncolorable;
            if (res.outcome == PipelineOutcome::Uncolorable && rest.size() < everything.size() && opt.solver_fallback)
                retry_on_input("discharged set not colorable under the reduced lists");
            return res;
        }
        std::vector<char> inD(static_cast<std::size_t>(h.order()), 0);
        std::vector<color_t> local(static_cast<std::size_t>(h.order()), -1);
        for (std::size_t i = 0; i < D.size(); ++i) {
            inD[D[i]] = 1;
            local[D[i]] = rD.coloring[i];
            col[rest[D[i]]] = rD.coloring[i];
        }
        std::vector<vertex_t> next;
        ListAssignment Ln(h.order() - static_cast<int>(D.size()));
        int idx = 0;
        for (vertex_t v = 0; v < h.order(); ++v) {
            if (inD[v]) continue;
            std::vector<color_t> keep;
            int lost_degree = 0;
            for (vertex_t u : h.neighbors(v)) lost_degree += inD[u];
            for (color_t c : Lr[v]) {
                bool used = false;
                for (vertex_t u : h.neighbors(v)) used = used || (inD[u] && local[u] == c);
                if (!used) keep.push_back(c);
            }
            // keep Save fixed: |L'(v)| = |L(v)| - |N(v) cap D|
            const int target = std::max(0, Lr.size(v) - lost_degree);
            if (static_cast<int>(keep.size()) > target) {
                keep.resize(static_cast<std::size_t>(target));
                res.lists_padded = true;
            }
            Ln.set(idx++, keep);
            next.push_back(rest[v]);
        }
        step.vertices_after = next.size();
        res.steps.push_back(step);
        if (next.size() >= rest.size()) throw std::logic_error("pipeline made no progress");
        rest = std::move(next);
        Lr = std::move(Ln);
    }
}

}  // namespace critgraph
