#pragma once

#include "critgraph/numeric.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace critgraph {

/// Proof parameters. Every fraction is exact; K and the derived constants
/// are computed from them on demand.
///
/// epsilon          charge parameter
/// epsilon_prime    list-slack parameter (11 * epsilon by default)
/// sampler_epsilon  equalizing parameter of the random procedure (defaults to epsilon_prime)
/// log_base         base of the log in log^10 k; empty means natural log
struct ParamSet {
    Rational epsilon;
    Rational epsilon_prime;
    Rational delta;
    Rational alpha;
    Rational sigma;
    Rational sampler_epsilon;
    std::int64_t k = 100;
    std::optional<Rational> log_base;
};

/// The largest alpha allowed by the alpha constraint: (delta(2+e') - 4e') / (4 - 3 delta).
inline Rational alpha_bound(const Rational& delta, const Rational& eps_prime)
{
    return (delta * (2 + eps_prime) - 4 * eps_prime) / (4 - 3 * delta);
}

/// Builds a parameter set from epsilon and delta with the default wiring
/// (epsilon' = 11 epsilon, alpha at its bound, sigma = 2/3).
inline ParamSet make_params(const Rational& epsilon, const Rational& delta, std::int64_t k = 100)
{
    ParamSet p;
    p.epsilon = epsilon;
    p.epsilon_prime = 11 * epsilon;
    p.delta = delta;
    p.alpha = alpha_bound(delta, p.epsilon_prime);
    p.sigma = Rational(2, 3);
    p.sampler_epsilon = p.epsilon_prime;
    p.k = k;
    return p;
}

inline ParamSet default_paper_params() { return make_params(parse_rational("2.6e-10"), Rational(1, 100)); }

/// K = .999 exp(-1 / (1 - e)).
template <class T>
T retention_constant(const Rational& eps)
{
    using std::exp;
    T one = rational_to<T>(Rational(1));
    return rational_to<T>(Rational(999, 1000)) * exp(-(one / (one - rational_to<T>(eps))));
}

template <class T>
struct ConstantsT {
    T K, c_A, c_ES, c_BS;
};

/// c_A, c_ES, c_BS evaluated in arithmetic T.
template <class T>
ConstantsT<T> constants_as(const ParamSet& p)
{
    auto q = [](const Rational& r) { return rational_to<T>(r); };
    const T one = q(1);
    const T K = retention_constant<T>(p.epsilon_prime);
    const T e1 = q(p.epsilon_prime), a = q(p.alpha), d = q(p.delta), s = q(p.sigma);
    ConstantsT<T> c{K, T(), T(), T()};
    c.c_A = K * a * (one - e1) / (one + a);
    c.c_ES = K * (one - e1)
             * ((one - q(2) * d) * K / ((one + a) * (one + a))
                - one / (q(3) * (one - d) * (one - d) * (one - e1) * (one - e1)));
    c.c_BS = K * K * (one - e1) * ((d - e1) / (one - e1) - q(15) * d / q(16))
             * ((one - s - d) / ((one + a) * (one - d)));
    return c;
}

struct DerivedConstants {
    Real K;
    Real c_A;
    Real c_ES;
    Real c_BS;
    bool c_ES_positive = false;
    bool c_BS_positive = false;
};

inline DerivedConstants derive_constants(const ParamSet& p)
{
    auto c = constants_as<Real>(p);
    DerivedConstants d{c.K, c.c_A, c.c_ES, c.c_BS};
    d.c_ES_positive = c.c_ES > 0;
    d.c_BS_positive = c.c_BS > 0;
    return d;
}

enum class Relation { Less, LessEqual, Greater };

struct ConstraintResult {
    std::string name;
    std::string statement;
    Relation relation;
    std::string lhs;  // decimal, 20 significant digits
    std::string rhs;
    double lhs_value;
    double rhs_value;
    bool pass;
    bool exact;      // decided in exact rational arithmetic
    bool certified;  // interval evaluation agrees with `pass`
};

struct FeasibilityReport {
    std::vector<ConstraintResult> constraints;
    bool c_ES_positive = false;
    bool c_BS_positive = false;

    std::size_t passed() const
    {
        std::size_t n = 0;
        for (auto& c : constraints) n += c.pass;
        return n;
    }
    bool all_pass() const { return passed() == constraints.size() && c_ES_positive && c_BS_positive; }
    const ConstraintResult& at(const std::string& name) const
    {
        for (auto& c : constraints)
            if (c.name == name) return c;
        throw std::out_of_range("no constraint " + name);
    }
};

namespace detail {

template <class T>
struct Sides {
    T lhs, rhs;
};

// Each constraint, as printed, in arithmetic T.
template <class T>
struct ConstraintSystem {
    const ParamSet& p;
    T one, e, e1, d, a, s, K, cA, cES, cBS;

    explicit ConstraintSystem(const ParamSet& ps) : p(ps)
    {
        auto q = [](const Rational& r) { return rational_to<T>(r); };
        one = q(1);
        e = q(p.epsilon);
        e1 = q(p.epsilon_prime);
        d = q(p.delta);
        a = q(p.alpha);
        s = q(p.sigma);
        auto c = constants_as<T>(p);
        K = c.K;
        cA = c.c_A;
        cES = c.c_ES;
        cBS = c.c_BS;
    }
    T n(long x) const { return rational_to<T>(Rational(x)); }
    T frac(long x, long y) const { return rational_to<T>(Rational(x, y)); }

    Sides<T> egal_sparse_constant_positive() const
    {
        return {(one - n(2) * d) / ((one + a) * (one + a)), K / (n(3) * (one - d) * (one - d) * (one - e1) * (one - e1))};
    }
    Sides<T> aberrance_eps() const { return {e, cA / (n(4) * (n(36) / d + n(2)))}; }
    Sides<T> bip_sparse_eps() const { return {e, cBS / (n(4) * (n(36) / d + n(2)))}; }
    Sides<T> egal_sparse_eps() const
    {
        T inner = d / n(64) - n(11) * e * (d / n(8) + one) * ((one + a) / (one - e1) + one);
        return {e, cES * inner / (n(36) / d + n(2))};
    }
    Sides<T> small_gap_egal_sparse_eps() const
    {
        // "delta(36 + 2 delta) - eps" as printed
        T inner = (one - d) / n(16)
                  - e * ((frac(5, 2) - a) / (d * (n(36) + n(2) * d) - e) + n(22) * (n(2) + a - e1) / (one - e1));
        return {e, (cES / (n(36) / d + n(2))) * inner};
    }
    Sides<T> heavy_eps() const
    {
        T num = one / (n(36) * (one + d / n(18)));
        T den = one / ((one - K) * (one - e1)) + one / cA;
        return {e, num / den};
    }
    Sides<T> delta_bound() const
    {
        T w = n(36) + n(2) * d;
        T f1 = frac(1, 2) - e * w / (n(4) * (one - K) * (one - e1));
        T f2 = (frac(5, 2) - a) * (one - e1) * w
               / ((one - e * w / d) * (n(2) * (one + d / n(18))) * (one + a * d / n(4)));
        T den = n(2) + n(9) * (one + e * (n(36) / d + n(2)) * (one / ((one - K) * (one - e1)) + one / cA));
        return {d, f1 * f2 / den};
    }
};

template <class T>
std::string decimal(const T& x)
{
    std::ostringstream os;
    os.precision(20);
    os << x;
    return os.str();
}

inline bool holds(Relation r, const Real& l, const Real& h)
{
    switch (r) {
    case Relation::Less: return l < h;
    case Relation::LessEqual: return l <= h;
    case Relation::Greater: return l > h;
    }
    return false;
}

inline bool holds_exact(Relation r, const Rational& l, const Rational& h)
{
    switch (r) {
    case Relation::Less: return l < h;
    case Relation::LessEqual: return l <= h;
    case Relation::Greater: return l > h;
    }
    return false;
}

// true if the interval evaluation proves the relation, false if it refutes
// it, empty if the enclosure is too wide to decide.
inline std::optional<bool> decide(Relation r, const Interval& l, const Interval& h)
{
    switch (r) {
    case Relation::Less:
        if (l.certainly_less(h)) return true;
        if (h.certainly_less_equal(l)) return false;
        break;
    case Relation::LessEqual:
        if (l.certainly_less_equal(h)) return true;
        if (h.certainly_less(l)) return false;
        break;
    case Relation::Greater:
        if (h.certainly_less(l)) return true;
        if (l.certainly_less_equal(h)) return false;
        break;
    }
    return std::nullopt;
}

}  // namespace detail

/// Evaluates the 13 parameter constraints. Purely rational constraints are
/// decided exactly; the rest at ~133 bits and re-checked with 256-bit
/// outward-rounded intervals.
inline FeasibilityReport check_inequalities(const ParamSet& p)
{
    FeasibilityReport rep;
    const Rational& e = p.epsilon;
    const Rational& e1 = p.epsilon_prime;
    const Rational& d = p.delta;
    const Rational& a = p.alpha;
    const Rational& s = p.sigma;

    auto exact = [&](std::string name, std::string statement, Relation r, const Rational& lhs, const Rational& rhs) {
        bool ok = detail::holds_exact(r, lhs, rhs);
        rep.constraints.push_back({std::move(name), std::move(statement), r, detail::decimal(rational_to<Real>(lhs)),
                                   detail::decimal(rational_to<Real>(rhs)), to_double(lhs), to_double(rhs), ok, true, true});
    };

    detail::ConstraintSystem<Real> real(p);
    std::optional<detail::ConstraintSystem<Interval>> iv;
    try {
        iv.emplace(p);
    } catch (const std::domain_error&) {
    }
    using S = detail::ConstraintSystem<Real>;
    using SI = detail::ConstraintSystem<Interval>;
    auto both = [&](std::string name, std::string statement, Relation r, detail::Sides<Real> (S::*m)() const,
                    detail::Sides<Interval> (SI::*mi)() const) {
        auto pt = (real.*m)();
        bool ok = detail::holds(r, pt.lhs, pt.rhs);
        bool certified = false;
        try {
            if (!iv) throw std::domain_error("no enclosure");
            auto box = ((*iv).*mi)();
            auto verdict = detail::decide(r, box.lhs, box.rhs);
            certified = verdict.has_value() && *verdict == ok;
        } catch (const std::domain_error&) {
            // enclosure hit a zero divisor; leave uncertified
        }
        rep.constraints.push_back({std::move(name), std::move(statement), r, detail::decimal(pt.lhs), detail::decimal(pt.rhs),
                                   pt.lhs.convert_to<double>(), pt.rhs.convert_to<double>(), ok, false, certified});
    };

    exact("delta_below_one_minus_sigma", "delta < 1 - sigma", Relation::Less, d, 1 - s);
    exact("eps_prime_at_most_half", "eps' <= 1/2", Relation::LessEqual, e1, Rational(1, 2));
    both("egal_sparse_constant_positive", "(1-2delta)/(1+alpha)^2 > K/(3(1-delta)^2(1-eps')^2)", Relation::Greater,
         &S::egal_sparse_constant_positive, &SI::egal_sparse_constant_positive);
    exact("bip_sparse_constant_positive", "(delta-eps')/(1-eps') > 15delta/16", Relation::Greater, (d - e1) / (1 - e1),
          15 * d / 16);
    both("aberrance_eps", "eps <= c_A/(4(36/delta+2))", Relation::LessEqual, &S::aberrance_eps, &SI::aberrance_eps);
    both("bip_sparse_eps", "eps <= c_BS/(4(36/delta+2))", Relation::LessEqual, &S::bip_sparse_eps, &SI::bip_sparse_eps);
    exact("bip_sparse_eps_list", "eps <= delta/(11(16-15delta))", Relation::LessEqual, e, d / (11 * (16 - 15 * d)));
    exact("antimatching_eps", "eps < delta/(36+2delta)", Relation::Less, e, d / (36 + 2 * d));
    both("egal_sparse_eps", "eps <= c_ES(delta/64 - 11eps(delta/8+1)((1+alpha)/(1-eps')+1))/(36/delta+2)",
         Relation::LessEqual, &S::egal_sparse_eps, &SI::egal_sparse_eps);
    both("small_gap_egal_sparse_eps",
         "eps <= (c_ES/(36/delta+2))((1-delta)/16 - eps((5/2-alpha)/(delta(36+2delta)-eps) + 22(2+alpha-eps')/(1-eps')))",
         Relation::LessEqual, &S::small_gap_egal_sparse_eps, &SI::small_gap_egal_sparse_eps);
    exact("alpha_bound", "alpha <= (delta(2+eps')-4eps')/(4-3delta)", Relation::LessEqual, a, alpha_bound(d, e1));
    both("heavy_eps", "eps <= (1/(36(1+delta/18))) / (1/((1-K)(1-eps')) + 1/c_A)", Relation::LessEqual, &S::heavy_eps,
         &SI::heavy_eps);
    both("delta_bound", "delta <= residual-charge bound", Relation::LessEqual, &S::delta_bound, &SI::delta_bound);

    auto dc = derive_constants(p);
    rep.c_ES_positive = dc.c_ES_positive;
    rep.c_BS_positive = dc.c_BS_positive;
    return rep;
}

/// log^10 k, i.e. (log_b k)^10 with b = e unless a base is configured.
inline Real log_term(const ParamSet& p, std::int64_t k)
{
    if (k <= 0) throw precondition_error("k must be positive");
    Real lk = log(Real(k));
    if (p.log_base) lk /= log(rational_to<Real>(*p.log_base));
    return pow(lk, 10);
}

inline void validate(const ParamSet& p)
{
    auto unit = [](const Rational& x, const char* name) {
        if (!(x > 0 && x < 1)) throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
    };
    unit(p.epsilon, "epsilon");
    unit(p.epsilon_prime, "epsilon_prime");
    unit(p.delta, "delta");
    unit(p.alpha, "alpha");
    unit(p.sigma, "sigma");
    unit(p.sampler_epsilon, "sampler_epsilon");
    if (p.k <= 0) throw std::invalid_argument("k must be positive");
    if (p.log_base && (*p.log_base <= 0 || *p.log_base == 1)) throw std::invalid_argument("log_base must be positive and != 1");
}

inline nlohmann::json to_json(const ParamSet& p)
{
    nlohmann::json j;
    j["epsilon"] = p.epsilon.str();
    j["epsilon_prime"] = p.epsilon_prime.str();
    j["delta"] = p.delta.str();
    j["alpha"] = p.alpha.str();
    j["sigma"] = p.sigma.str();
    j["sampler_epsilon"] = p.sampler_epsilon.str();
    j["k"] = p.k;
    j["log_base"] = p.log_base ? nlohmann::json(p.log_base->str()) : nlohmann::json("e");
    j["K"] = detail::decimal(retention_constant<Real>(p.epsilon_prime));
    return j;
}

/// Missing fields fall back to the default wiring derived from the fields
/// that are present (epsilon' = 11 epsilon, alpha at its bound, ...).
inline ParamSet params_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw std::invalid_argument("parameters must be a JSON object");
    auto get = [&](const char* key) -> std::optional<Rational> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        const auto& v = j[key];
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_number()) return rational_from_double(v.get<double>());
        throw std::invalid_argument(std::string("parameter '") + key + "' must be a number or a string");
    };
    ParamSet base = default_paper_params();
    ParamSet p;
    p.epsilon = get("epsilon").value_or(base.epsilon);
    p.epsilon_prime = get("epsilon_prime").value_or(11 * p.epsilon);
    p.delta = get("delta").value_or(base.delta);
    p.alpha = get("alpha").value_or(alpha_bound(p.delta, p.epsilon_prime));
    p.sigma = get("sigma").value_or(Rational(2, 3));
    p.sampler_epsilon = get("sampler_epsilon").value_or(p.epsilon_prime);
    if (j.contains("k")) {
        if (!j["k"].is_number_integer()) throw std::invalid_argument("k must be an integer");
        p.k = j["k"].get<std::int64_t>();
    }
    if (j.contains("log_base") && !(j["log_base"].is_string() && j["log_base"].get<std::string>() == "e"))
        p.log_base = get("log_base");
    validate(p);
    return p;
}

}  // namespace critgraph
