#pragma once

#include "critgraph/classify.hpp"

#include <string>
#include <vector>

namespace critgraph {

/// Structural facts that follow from the charge definition. Each checker
/// tests the fact only where its own hypotheses hold and counts how many
/// vertices (or vertex pairs) it examined.

struct FactViolation {
    vertex_t v = 0;
    vertex_t u = -1;  // neighbour, for pairwise facts
    std::string fact;
};

struct FactReport {
    std::size_t checked = 0;
    std::vector<FactViolation> violations;

    bool pass() const { return violations.empty(); }
};

/// For v not extremely heavy with Save(v) >= 0 and |L(v)| <= k:
///   |L(v)| >= (1 - 11 eps) d(v),  Save(v) < 11 eps d(v),
///   and |L(v)| > k/3 when eps <= 3/154.
inline FactReport check_list_size_bounds(const Analysis& a)
{
    FactReport r;
    const auto& p = a.params();
    const bool small_eps = p.epsilon <= Rational(3, 154);
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        // a negative Save would have to be absorbed by eps log^10 k
        if (a.list_size(v) > p.k || a.save(v) < 0 || is_extremely_heavy(a, v)) continue;
        ++r.checked;
        const Rational d = a.degree(v), l = a.list_size(v);
        if (l < (1 - 11 * p.epsilon) * d) r.violations.push_back({v, -1, "list below (1 - 11 eps) d"});
        if (Rational(a.save(v)) >= 11 * p.epsilon * d) r.violations.push_back({v, -1, "Save not below 11 eps d"});
        if (small_eps && !(3 * l > p.k)) r.violations.push_back({v, -1, "list not above k/3"});
    }
    return r;
}

/// For heavy v that is not extremely heavy, |L(v)| <= k:
///   Gap(v) <= (delta/4) d(v)  and  ch(v) > (Save + eps log^10 k)/(1 + delta/18).
inline FactReport check_heavy_vertex_facts(const Analysis& a)
{
    FactReport r;
    const auto& p = a.params();
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        if (a.list_size(v) > p.k) continue;
        const Affine ch = charge_form(a, v);
        if (!heavy_from(ch, a.gap(v), p, a.cal().lambda) || extremely_heavy_from(ch, a.degree(v), p, a.cal().lambda)) continue;
        ++r.checked;
        if (Rational(a.gap(v)) > p.delta / 4 * a.degree(v)) r.violations.push_back({v, -1, "Gap above (delta/4) d"});
        const Affine margin = (1 + p.delta / 18) * ch - Affine{a.save(v), p.epsilon};
        if (sign(margin, a.cal().lambda) <= 0) r.violations.push_back({v, -1, "charge not above (Save + eps log^10 k)/(1 + delta/18)"});
    }
    return r;
}

/// For normal v with |L(v)| <= k: Gap(v) >= (Save + eps log^10 k) / (eps (36/delta + 2)).
inline FactReport check_normal_gap_bound(const Analysis& a)
{
    FactReport r;
    const auto& p = a.params();
    for (vertex_t v = 0; v < a.graph().order(); ++v) {
        if (a.list_size(v) > p.k || is_heavy(a, v)) continue;
        ++r.checked;
        const Affine margin{p.epsilon * (36 / p.delta + 2) * a.gap(v) - a.save(v), -p.epsilon};
        if (sign(margin, a.cal().lambda) < 0) r.violations.push_back({v, -1, "Gap below (Save + eps log^10 k)/(eps(36/delta + 2))"});
    }
    return r;
}

/// For u in N(v) very lordly with omega(u) >= (1 - delta/4) d(v) + 1, where
/// |L(v)| <= d(v) and u is not extremely heavy with |L(u)| <= k: u is a
/// lordlier neighbour of v. Needs alpha at most its bound and eps' >= 11 eps;
/// otherwise nothing is checked.
inline FactReport check_very_lordly_promotion(const Analysis& a)
{
    FactReport r;
    const auto& p = a.params();
    if (p.alpha > alpha_bound(p.delta, p.epsilon_prime) || p.epsilon_prime < 11 * p.epsilon) return r;
    const Graph& g = a.graph();
    std::vector<char> lordly(static_cast<std::size_t>(g.order()), 0), eligible(static_cast<std::size_t>(g.order()), 0);
    for (vertex_t u = 0; u < g.order(); ++u) {
        lordly[u] = is_very_lordly(a, u, partition_neighbors(a, u));
        eligible[u] = a.list_size(u) <= p.k && !is_extremely_heavy(a, u);
    }
    for (vertex_t v = 0; v < g.order(); ++v) {
        if (a.list_size(v) > a.degree(v)) continue;
        for (vertex_t u : g.neighbors(v)) {
            if (!lordly[u] || !eligible[u]) continue;
            if (Rational(a.omega(u)) < (1 - p.delta / 4) * a.degree(v) + 1) continue;
            ++r.checked;
            if (Rational(a.list_size(u)) < (1 + p.alpha) * a.list_size(v)) r.violations.push_back({v, u, "very lordly neighbour not lordlier"});
        }
    }
    return r;
}

}  // namespace critgraph
