// Command-line front end. Every report starts with a meta record carrying
// the tool version, report schema and the parameters actually used.

#include "critgraph.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cg = critgraph;
using json = nlohmann::json;

namespace {

enum ExitCode { ok = 0, input_failure = 2, budget_failure = 3 };

struct RunConfig {
    std::string graph, lists, matchings, params, out, trace, mode = "heuristic", format = "json", precision = "float";
    std::string bound;
    std::uint64_t seed = 0, trials = 10000, budget = cg::default_node_budget;
    std::optional<int> k, omega_cap, nmax;
    std::optional<std::string> eps;
    std::string out_dir;
};

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- input --------------------------------------------------------------

cg::Graph load_graph(const RunConfig& c)
{
    if (c.graph.empty()) throw usage_error("--graph is required");
    try {
        return cg::parse_dimacs(cg::read_file(c.graph));
    } catch (const cg::input_error& e) {
        throw cg::input_error(c.graph + ": " + e.detail(), e.line(), e.column());
    }
}

cg::ParamSet load_params(const RunConfig& c)
{
    if (c.params.empty()) return cg::default_paper_params();
    try {
        return cg::params_from_json(cg::detail::parse_json(cg::read_file(c.params)));
    } catch (const cg::input_error& e) {
        throw cg::input_error(c.params + ": " + e.detail(), e.line(), e.column());
    } catch (const std::invalid_argument& e) {
        throw cg::input_error(c.params + ": " + e.what());
    }
}

cg::AssignmentInput load_assignment(const RunConfig& c, const cg::Graph& g)
{
    if (c.lists.empty()) throw usage_error("--lists is required");
    cg::AssignmentInput in;
    try {
        in = cg::parse_assignment(cg::read_file(c.lists), g);
    } catch (const cg::input_error& e) {
        throw cg::input_error(c.lists + ": " + e.detail(), e.line(), e.column());
    }
    if (!c.matchings.empty()) {
        try {
            auto text = cg::read_file(c.matchings);
            auto j = cg::detail::parse_json(text);
            if (!j.is_object() || !j.contains("matchings")) throw cg::input_error("missing object field 'matchings'");
            json wrapped{{"lists", json::object()}, {"matchings", j["matchings"]}};
            in.matchings = cg::parse_assignment(wrapped.dump(), g).matchings;
        } catch (const cg::input_error& e) {
            throw cg::input_error(c.matchings + ": " + e.detail(), e.line(), e.column());
        }
    }
    return in;
}

cg::CorrespondenceAssignment correspondence(const cg::Graph& g, const cg::AssignmentInput& in)
{
    if (!in.matchings) return cg::identity_correspondence(g, in.lists);
    try {
        return cg::CorrespondenceAssignment(g, in.lists, *in.matchings);
    } catch (const std::invalid_argument& e) {
        throw cg::input_error(e.what());
    }
}

// ---- output -------------------------------------------------------------

class Report {
public:
    Report(const RunConfig& c, std::string command, const cg::ParamSet* p) : cfg_(c)
    {
        meta_ = {{"record", "meta"}, {"tool", "critgraph"}, {"version", cg::version}, {"schema", cg::report_schema},
                 {"command", std::move(command)}, {"precision", c.precision}};
        if (p) meta_["params"] = cg::to_json(*p);
    }

    json& meta() { return meta_; }
    void add(json record) { records_.push_back(std::move(record)); }
    void text(std::string line) { text_.push_back(std::move(line)); }
    void csv_header(std::vector<std::string> cols) { csv_cols_ = std::move(cols); }
    void csv_row(std::vector<std::string> row) { csv_rows_.push_back(std::move(row)); }

    std::string render() const
    {
        std::ostringstream os;
        if (cfg_.format == "json") {
            os << meta_.dump() << '\n';
            for (auto& r : records_) os << r.dump() << '\n';
        } else if (cfg_.format == "csv") {
            os << "# " << meta_.dump() << '\n';
            if (csv_cols_.empty()) {
                // one column per key, in order of first appearance
                std::vector<std::string> cols;
                for (auto& r : records_)
                    for (auto& [key, value] : r.items())
                        if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
                write_csv_row(os, cols);
                for (auto& r : records_) {
                    std::vector<std::string> row;
                    for (auto& col : cols) {
                        if (!r.contains(col)) row.emplace_back();
                        else if (r[col].is_string()) row.push_back(r[col].get<std::string>());
                        else row.push_back(r[col].dump());
                    }
                    write_csv_row(os, row);
                }
            } else {
                write_csv_row(os, csv_cols_);
                for (auto& r : csv_rows_) write_csv_row(os, r);
            }
        } else {
            os << "critgraph " << cg::version << " (schema " << cg::report_schema << ") " << meta_["command"].get<std::string>() << '\n';
            if (meta_.contains("params")) os << "params: " << meta_["params"].dump() << '\n';
            for (auto& l : text_) os << l << '\n';
        }
        return os.str();
    }

private:
    static void write_csv_row(std::ostream& os, const std::vector<std::string>& row)
    {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const auto& s = row[i];
            if (s.find_first_of(",\"\n") != std::string::npos) {
                os << '"';
                for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
                os << '"';
            } else {
                os << s;
            }
        }
        os << '\n';
    }

    const RunConfig& cfg_;
    json meta_;
    std::vector<json> records_;
    std::vector<std::string> text_;
    std::vector<std::string> csv_cols_;
    std::vector<std::vector<std::string>> csv_rows_;
};

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw cg::input_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw cg::input_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

void emit(const RunConfig& c, const Report& r)
{
    auto s = r.render();
    if (c.out.empty())
        std::cout << s;
    else
        write_atomic(c.out, s);
}

std::string num(const cg::Real& x) { return cg::detail::decimal(x); }
std::string num(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

json charge_json(const RunConfig& c, const cg::Affine& a, const cg::Real& lambda)
{
    if (c.precision == "rational")
        return {{"constant", a.c0.str()}, {"log_coefficient", a.c1.str()}, {"value", num(a.value(lambda))}};
    return a.approx(static_cast<double>(lambda));
}

json vertex_list(const std::vector<cg::vertex_t>& vs)
{
    json j = json::array();
    for (auto v : vs) j.push_back(v + 1);
    return j;
}

cg::Ordering layered_ordering(const cg::Analysis& a, std::vector<int>* layer_out = nullptr)
{
    auto layer = cg::build_layers(a.graph(), cg::static_saved_set(a),
                                  [&](cg::vertex_t v, long long n) { return cg::Real(n) >= a.cal().priority_need(a.save(v)); });
    if (layer_out) *layer_out = layer;
    return cg::ordering_from_layers(layer);
}

// ---- commands -----------------------------------------------------------

int run_check_params(const RunConfig& c)
{
    auto p = load_params(c);
    auto rep = cg::check_inequalities(p);
    auto dc = cg::derive_constants(p);
    Report r(c, "check-params", &p);
    r.csv_header({"constraint", "statement", "lhs", "rhs", "pass", "exact", "certified"});
    for (auto& k : rep.constraints) {
        r.add({{"record", "constraint"}, {"name", k.name}, {"statement", k.statement}, {"lhs", k.lhs}, {"rhs", k.rhs},
               {"pass", k.pass}, {"exact", k.exact}, {"certified", k.certified}});
        r.csv_row({k.name, k.statement, k.lhs, k.rhs, k.pass ? "1" : "0", k.exact ? "1" : "0", k.certified ? "1" : "0"});
        r.text((k.pass ? "pass  " : "FAIL  ") + k.name + "  " + k.lhs + " vs " + k.rhs);
    }
    r.add({{"record", "summary"}, {"passed", rep.passed()}, {"total", rep.constraints.size()}, {"c_A", num(dc.c_A)},
           {"c_ES", num(dc.c_ES)}, {"c_BS", num(dc.c_BS)}, {"K", num(dc.K)}, {"c_ES_positive", rep.c_ES_positive},
           {"c_BS_positive", rep.c_BS_positive}, {"all_pass", rep.all_pass()}});
    r.text(std::to_string(rep.passed()) + "/" + std::to_string(rep.constraints.size()) + " constraints pass; c_A=" + num(dc.c_A) +
           " c_ES=" + num(dc.c_ES) + " c_BS=" + num(dc.c_BS));
    emit(c, r);
    return ok;
}

int run_classify(const RunConfig& c)
{
    auto g = load_graph(c);
    auto in = load_assignment(c, g);
    auto p = load_params(c);
    cg::Analysis a(g, in.lists, p);
    std::vector<int> layer;
    auto rank = layered_ordering(a, &layer);
    Report r(c, "classify", &p);
    r.meta()["ordering"] = "layered by the priority bar; later layers first";
    r.csv_header({"vertex", "degree", "list", "gap", "save", "omega", "charge", "aberrant", "slightly_aberrant", "egalitarian_sparse",
                  "bipartite_sparse", "prioritized", "heavy", "extremely_heavy", "very_lordly", "sponsored", "normal"});
    auto b = [](bool x) { return std::string(x ? "1" : "0"); };
    for (cg::vertex_t v = 0; v < g.order(); ++v) {
        auto vr = cg::classify_vertex(a, v, rank);
        json j{{"record", "vertex"}, {"vertex", v + 1}, {"degree", vr.degree}, {"list_size", vr.list_size}, {"gap", vr.gap},
               {"save", vr.save}, {"omega", vr.omega}, {"layer", layer[v]}};
        j["charge"] = vr.charge ? charge_json(c, *vr.charge, a.cal().lambda) : json(nullptr);
        j["neighbors"] = {{"subservient", vr.n_subserv}, {"egalitarian", vr.n_egal}, {"lordlier", vr.n_lordlier},
                          {"slightly_lordlier", vr.n_slightly_lordlier}, {"sigma_egalitarian", vr.n_egal_sigma}};
        const auto& f = vr.flags;
        j["flags"] = {{"aberrant", f.aberrant},
                      {"slightly_aberrant", f.slightly_aberrant},
                      {"egalitarian_sparse", f.egalitarian_sparse},
                      {"bipartite_sparse", f.bipartite_sparse},
                      {"prioritized", f.prioritized},
                      {"heavy", f.heavy},
                      {"extremely_heavy", f.extremely_heavy},
                      {"very_lordly", f.very_lordly},
                      {"sponsored", f.sponsored},
                      {"normal", f.normal}};
        j["witness"] = vr.witness ? json{{"A", vertex_list(vr.witness->A)}, {"B", vertex_list(vr.witness->B)}} : json(nullptr);
        if (!vr.warnings.empty()) j["warnings"] = vr.warnings;
        std::string ch = vr.charge ? (c.precision == "rational" ? num(vr.charge_value) : num(vr.charge->approx(static_cast<double>(a.cal().lambda)))) : "";
        r.csv_row({std::to_string(v + 1), std::to_string(vr.degree), std::to_string(vr.list_size), std::to_string(vr.gap),
                   std::to_string(vr.save), std::to_string(vr.omega), ch, b(f.aberrant), b(f.slightly_aberrant), b(f.egalitarian_sparse),
                   b(f.bipartite_sparse), b(f.prioritized), b(f.heavy), b(f.extremely_heavy), b(f.very_lordly), b(f.sponsored),
                   b(f.normal)});
        std::string flags;
        for (auto& [k, val] : j["flags"].items())
            if (val.get<bool>()) flags += " " + k;
        r.text("v" + std::to_string(v + 1) + " d=" + std::to_string(vr.degree) + " |L|=" + std::to_string(vr.list_size) +
               " gap=" + std::to_string(vr.gap) + " save=" + std::to_string(vr.save) + " charge=" + ch + flags);
        r.add(std::move(j));
    }
    auto sv = cg::is_saved(a);
    json s{{"record", "summary"}, {"saved", sv.saved()}, {"status", cg::to_string(sv.status)}};
    if (sv.offending) s["offending_vertex"] = *sv.offending + 1;
    s["unabsorbed"] = vertex_list(sv.unabsorbed);
    r.add(s);
    r.text(std::string("saved: ") + cg::to_string(sv.status));
    emit(c, r);
    return ok;
}

cg::DenseMode dense_mode(const std::string& m)
{
    if (m == "heuristic") return cg::DenseMode::Heuristic;
    if (m == "exhaustive") return cg::DenseMode::Exhaustive;
    throw usage_error("--mode must be heuristic or exhaustive");
}

json witness_json(const cg::DenseWitness& w)
{
    json m = json::array();
    for (auto [x, y] : w.M.edges) m.push_back({x + 1, y + 1});
    return {{"host", w.host + 1}, {"H", vertex_list(w.H)}, {"M", m}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"source", w.source}};
}

int run_dense(const RunConfig& c)
{
    auto g = load_graph(c);
    auto in = load_assignment(c, g);
    auto p = load_params(c);
    auto mode = dense_mode(c.mode);
    cg::Analysis a(g, in.lists, p);
    Report r(c, "dense", &p);
    r.meta()["mode"] = c.mode;
    r.csv_header({"vertex", "dense", "h", "matching", "lhs", "rhs", "source"});
    std::size_t found = 0;
    for (cg::vertex_t v = 0; v < g.order(); ++v) {
        std::vector<cg::DenseProbe> log;
        std::optional<cg::DenseWitness> w;
        try {
            w = cg::find_dense_subgraph(a, v, mode, &log);
        } catch (const cg::precondition_error& e) {
            throw cg::input_error(std::string(e.what()) + " (vertex " + std::to_string(v + 1) + ")");
        }
        json probes = json::array();
        for (auto& pr : log)
            probes.push_back({{"source", pr.source}, {"h", pr.h}, {"matching", pr.matching}, {"lhs", pr.lhs}, {"rhs", pr.rhs}});
        r.add({{"record", "vertex"}, {"vertex", v + 1}, {"dense", w.has_value()}, {"witness", w ? witness_json(*w) : json(nullptr)},
               {"probes", probes}});
        if (w) {
            ++found;
            r.csv_row({std::to_string(v + 1), "1", std::to_string(w->H.size()), std::to_string(w->M.size()), std::to_string(w->lhs),
                       std::to_string(w->rhs), w->source});
            r.text("v" + std::to_string(v + 1) + ": dense (" + w->source + ") lhs=" + std::to_string(w->lhs) + " rhs=" + std::to_string(w->rhs));
        } else {
            r.csv_row({std::to_string(v + 1), "0", "", "", "", "", ""});
        }
    }
    r.add({{"record", "summary"}, {"no_dense_subgraph", found == 0}, {"vertices_with_witness", found}});
    r.text(found == 0 ? "no dense subgraph found" : std::to_string(found) + " vertices host a dense subgraph");
    emit(c, r);
    return ok;
}

int run_sample(const RunConfig& c)
{
    if (c.precision == "rational") throw usage_error("sample is randomized and cannot run with --precision rational");
    auto g = load_graph(c);
    auto in = load_assignment(c, g);
    auto p = load_params(c);
    auto lm = correspondence(g, in);
    cg::Analysis a(g, lm.lists(), p);
    auto rank = layered_ordering(a);
    std::optional<cg::Retention> ret;
    try {
        ret.emplace(g, lm, p.sampler_epsilon);
    } catch (const cg::precondition_error& e) {
        throw cg::input_error(std::string("sampler precondition: ") + e.what());
    }
    auto tally = cg::monte_carlo(g, lm, p, c.seed, c.trials, rank);
    Report r(c, "sample", &p);
    r.meta()["seed"] = c.seed;
    r.meta()["trials"] = c.trials;
    r.meta()["total_correspondence"] = lm.is_total(g);
    const double K = ret->K();
    r.csv_header({"vertex", "empirical_uncolored", "target_uncolored", "chi_square_p", "empirical_savings", "exact_savings",
                  "exact_aberrance", "exact_pairs", "exact_trips", "exact_subservience", "bound_aberrance", "bound_egalitarian_sparse",
                  "bound_bipartite_sparse"});
    const double N = static_cast<double>(std::max<std::uint64_t>(tally.trials, 1));
    auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
    auto opts = [](const std::optional<double>& x) { return x ? num(*x) : std::string(); };
    for (cg::vertex_t v = 0; v < g.order(); ++v) {
        auto e = cg::exact_expectations(g, lm, p, v, rank, *ret);
        auto lb = cg::analytic_lower_bounds(g, lm, p, v, rank);
        const double emp_u = static_cast<double>(tally.uncolored[v]) / N;
        const double chi = tally.color_hits[v].size() > 1
                               ? cg::chi_square_p(cg::uniform_chi_square(tally.color_hits[v]), static_cast<double>(tally.color_hits[v].size() - 1))
                               : 1.0;
        const double emp_s = tally.savings_sum[v] / N;
        r.add({{"record", "vertex"},
               {"vertex", v + 1},
               {"empirical_uncolored", emp_u},
               {"target_uncolored", 1 - K},
               {"uniformity_p", chi},
               {"empirical_savings", emp_s},
               {"exact", {{"aberrance", e.aberrance}, {"pairs", e.pairs}, {"trips", e.trips}, {"subservience", e.subservience}, {"savings", e.savings},
                          {"pairs_independent", e.pairs_independent}, {"trips_independent", e.trips_independent}}},
               {"bounds", {{"aberrance", opt(lb.aberrance)}, {"egalitarian_sparse", opt(lb.egalitarian_sparse)},
                           {"bipartite_sparse", opt(lb.bipartite_sparse)}, {"subservience", lb.subservience}}}});
        r.csv_row({std::to_string(v + 1), num(emp_u), num(1 - K), num(chi), num(emp_s), num(e.savings), num(e.aberrance), num(e.pairs),
                   num(e.trips), num(e.subservience), opts(lb.aberrance), opts(lb.egalitarian_sparse), opts(lb.bipartite_sparse)});
        r.text("v" + std::to_string(v + 1) + " P(U)=" + num(emp_u) + " target " + num(1 - K) + " E[savings] " + num(emp_s) +
               " exact " + num(e.savings));
    }
    r.add({{"record", "summary"}, {"trials", tally.trials}, {"improper_samples", tally.improper}, {"identity_failures", tally.identity_failures}});
    r.text("improper samples: " + std::to_string(tally.improper));
    emit(c, r);
    return ok;
}

int run_discharge(const RunConfig& c)
{
    auto g = load_graph(c);
    auto in = load_assignment(c, g);
    auto p = load_params(c);
    cg::Analysis a(g, in.lists, p);
    cg::ChargeLedger led;
    cg::Decomposition dec;
    try {
        dec = cg::build_decomposition(a);
        led = cg::apply_rules(a, dec);
    } catch (const cg::precondition_error& e) {
        throw cg::input_error(e.what());
    }
    const bool gate = cg::check_inequalities(p).all_pass();
    auto fin = cg::verify_positive_final_charge(a, dec, led, gate, dense_mode(c.mode));
    auto mainq = cg::check_main_inequality(a);
    auto nice = cg::check_nice_inequality(a);
    auto resid = cg::check_residual_inequality(a, dec.D);

    Report r(c, "discharge", &p);
    json layers = json::array();
    for (auto& l : dec.layers) layers.push_back(vertex_list(l));
    r.add({{"record", "decomposition"}, {"layers", layers}, {"very_lordly", vertex_list(dec.lordly_set)}, {"D", vertex_list(dec.D)}});
    r.csv_header({"vertex", "layer", "in_D", "heavy", "ch", "ch1", "ch2", "ch_star"});
    const double lam = static_cast<double>(a.cal().lambda);
    for (cg::vertex_t v = 0; v < g.order(); ++v) {
        r.add({{"record", "vertex"}, {"vertex", v + 1}, {"layer", dec.layer[v]}, {"very_lordly", static_cast<bool>(dec.lordly[v])},
               {"in_D", static_cast<bool>(dec.discharged[v])}, {"heavy", static_cast<bool>(led.heavy[v])},
               {"ch", charge_json(c, led.ch[v], a.cal().lambda)}, {"ch1", charge_json(c, led.ch1[v], a.cal().lambda)},
               {"ch2", charge_json(c, led.ch2[v], a.cal().lambda)}, {"ch_star", charge_json(c, led.ch_star[v], a.cal().lambda)}});
        r.csv_row({std::to_string(v + 1), std::to_string(dec.layer[v]), dec.discharged[v] ? "1" : "0", led.heavy[v] ? "1" : "0",
                   num(led.ch[v].approx(lam)), num(led.ch1[v].approx(lam)), num(led.ch2[v].approx(lam)), num(led.ch_star[v].approx(lam))});
    }
    const bool conserved = led.total(led.ch) == led.total(led.ch_star);
    auto ineq = [&](const cg::InequalityResult& q) { return json{{"lhs", num(q.lhs_value)}, {"rhs", num(q.rhs_value)}, {"holds", q.holds}}; };
    json failed = fin.failed_hypotheses;
    r.add({{"record", "summary"},
           {"conserved", conserved},
           {"transfers", led.trace.size()},
           {"gate_passes", gate},
           {"final_charge", {{"hypotheses_hold", fin.hypotheses_hold}, {"failed_hypotheses", failed},
                             {"nonpositive", vertex_list(fin.nonpositive)}, {"heavy_over_half", vertex_list(fin.heavy_over_half)},
                             {"pass", fin.pass()}}},
           {"main_inequality", ineq(mainq)},
           {"nice_inequality", ineq(nice)},
           {"residual_inequality", ineq(resid)}});
    r.text("D = " + vertex_list(dec.D).dump() + ", very lordly = " + vertex_list(dec.lordly_set).dump());
    r.text(std::string("conservation: ") + (conserved ? "exact" : "BROKEN") + ", transfers: " + std::to_string(led.trace.size()));
    r.text(std::string("main inequality: ") + (mainq.holds ? "holds" : "fails"));
    if (!c.trace.empty()) {
        std::ostringstream tr;
        for (auto& t : led.trace)
            tr << json{{"rule", t.rule}, {"from", t.from + 1}, {"to", t.to + 1}, {"amount", charge_json(c, t.amount, a.cal().lambda)}}.dump()
               << '\n';
        write_atomic(c.trace, tr.str());
    }
    emit(c, r);
    return ok;
}

int run_pipeline(const RunConfig& c)
{
    auto g = load_graph(c);
    auto in = load_assignment(c, g);
    auto p = load_params(c);
    cg::PipelineOptions opt;
    opt.budget = c.budget;
    cg::PipelineResult res;
    try {
        res = cg::reduction_pipeline(g, in.lists, p, opt);
    } catch (const cg::precondition_error& e) {
        throw cg::input_error(e.what());
    }
    Report r(c, "pipeline", &p);
    r.csv_header({"step", "route", "vertices_before", "vertices_after", "D"});
    for (std::size_t i = 0; i < res.steps.size(); ++i) {
        const auto& s = res.steps[i];
        r.add({{"record", "step"}, {"step", i + 1}, {"route", s.route}, {"vertices_before", s.vertices_before},
               {"vertices_after", s.vertices_after}, {"D", vertex_list(s.D)}});
        r.csv_row({std::to_string(i + 1), s.route, std::to_string(s.vertices_before), std::to_string(s.vertices_after), vertex_list(s.D).dump()});
        r.text("step " + std::to_string(i + 1) + ": " + s.route + " " + std::to_string(s.vertices_before) + " -> " +
               std::to_string(s.vertices_after));
    }
    json coloring = nullptr;
    if (res.coloring) {
        coloring = json::object();
        for (cg::vertex_t v = 0; v < g.order(); ++v) coloring[std::to_string(v + 1)] = (*res.coloring)[v];
    }
    r.add({{"record", "summary"}, {"outcome", cg::to_string(res.outcome)}, {"gate_passes", res.gate_passes},
           {"lists_padded", res.lists_padded}, {"saved_vertices", vertex_list(res.saved_vertices)}, {"coloring", coloring},
           {"note", res.note}});
    r.text(std::string("outcome: ") + cg::to_string(res.outcome) + (res.note.empty() ? "" : " (" + res.note + ")"));
    emit(c, r);
    return res.outcome == cg::PipelineOutcome::BudgetExhausted ? budget_failure : ok;
}

std::string canonical_bound(const std::string& b)
{
    if (b == "ky" || b == "kostochka-yancey" || b == "critical-density") return "ky";
    if (b == "thm12" || b == "clique-density") return "thm12";
    if (b == "thm14" || b == "chromatic-mad") return "thm14";
    throw usage_error("--bound must be ky|thm12|thm14 (or critical-density|clique-density|chromatic-mad)");
}

int run_verify(const RunConfig& c, const std::string& command)
{
    auto g = load_graph(c);
    auto p = load_params(c);
    const std::string bound = canonical_bound(c.bound);
    cg::Rational eps = c.eps ? cg::parse_rational(*c.eps) : p.epsilon;
    Report r(c, command, &p);
    r.meta()["bound"] = bound;
    json rec{{"record", "bound"}, {"bound", bound}, {"n", g.order()}, {"m", g.size()}};
    int k = 0;
    if (bound != "thm14") {
        if (c.k) {
            k = *c.k;
        } else {
            auto chi = cg::chromatic_number(g, c.budget);
            if (chi.status == cg::SolveStatus::BudgetExhausted) throw cg::budget_exhausted("chromatic number budget exhausted");
            k = chi.chi;
        }
        rec["k"] = k;
        if (!cg::is_k_critical(g, k, c.budget)) throw cg::input_error("graph is not " + std::to_string(k) + "-critical");
    }
    if (bound == "ky") {
        auto margin = cg::average_degree(g) - cg::ky_bound(k, g.order());
        rec["average_degree"] = cg::average_degree(g).str();
        rec["bound_value"] = cg::ky_bound(k, g.order()).str();
        rec["margin"] = margin.str();
        rec["holds"] = margin >= 0;
        r.text("average degree " + cg::average_degree(g).str() + ", bound " + cg::ky_bound(k, g.order()).str() + ", margin " + margin.str());
    } else if (bound == "thm12") {
        const int cap = c.omega_cap.value_or(cg::clique_number(g));
        auto chk = cg::verify_clique_density_bound(g, k, cap, eps, c.budget);
        rec["omega"] = chk.omega;
        rec["omega_cap"] = cap;
        rec["epsilon"] = eps.str();
        rec["average_degree"] = chk.average_degree.str();
        rec["bound_value"] = chk.bound.str();
        rec["holds"] = chk.holds;
        rec["omega_hypothesis"] = chk.omega_hypothesis;
        r.text("average degree " + chk.average_degree.str() + " > " + chk.bound.str() + ": " + (chk.holds ? "holds" : "fails") +
               " (clique hypothesis " + (chk.omega_hypothesis ? "met" : "not met") + ")");
    } else {
        auto chk = cg::verify_chromatic_mad_bound(g, eps, c.budget);
        rec["chi"] = chk.chi;
        rec["mad"] = chk.mad.str();
        rec["omega"] = chk.omega;
        rec["epsilon"] = eps.str();
        rec["bound_value"] = chk.bound.str();
        rec["holds"] = chk.holds;
        rec["omega_hypothesis"] = chk.omega_hypothesis;
        r.text("chi " + std::to_string(chk.chi) + " <= " + chk.bound.str() + ": " + (chk.holds ? "holds" : "fails") + " (clique hypothesis " +
               (chk.omega_hypothesis ? "met" : "not met") + ")");
    }
    r.add(rec);
    emit(c, r);
    return ok;
}

int run_enumerate(const RunConfig& c)
{
    if (!c.k || !c.nmax) throw usage_error("--k and --nmax are required");
    auto certs = cg::enumerate_k_critical(*c.k, *c.nmax, c.budget);
    Report r(c, "critical enumerate", nullptr);
    r.meta()["k"] = *c.k;
    r.meta()["nmax"] = *c.nmax;
    if (!c.out_dir.empty()) std::filesystem::create_directories(c.out_dir);
    std::map<int, int> per_n;
    r.csv_header({"index", "n", "m", "average_degree", "ky_margin"});
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& ct = certs[i];
        const int n = ct.graph.order();
        const int idx = ++per_n[n];
        const std::string stem = "k" + std::to_string(*c.k) + "_n" + std::to_string(n) + "_" + std::to_string(idx);
        auto margin = cg::average_degree(ct.graph) - cg::ky_bound(*c.k, n);
        json cert{{"k", ct.k}, {"k_coloring", ct.k_coloring}};
        json del = json::array();
        for (auto& [e, col] : ct.edge_deleted) del.push_back({{"edge", {e.first + 1, e.second + 1}}, {"coloring", col}});
        cert["edge_deleted_colorings"] = del;
        if (!c.out_dir.empty()) {
            write_atomic(c.out_dir + "/" + stem + ".dimacs", cg::to_dimacs(ct.graph, stem));
            write_atomic(c.out_dir + "/" + stem + ".cert.json", cert.dump(1) + "\n");
        }
        r.add({{"record", "graph"}, {"name", stem}, {"n", n}, {"m", ct.graph.size()}, {"average_degree", cg::average_degree(ct.graph).str()},
               {"ky_margin", margin.str()}});
        r.csv_row({stem, std::to_string(n), std::to_string(ct.graph.size()), cg::average_degree(ct.graph).str(), margin.str()});
        r.text(stem + ": m=" + std::to_string(ct.graph.size()) + " margin " + margin.str());
    }
    json counts = json::object();
    for (auto [n, cnt] : per_n) counts[std::to_string(n)] = cnt;
    r.add({{"record", "summary"}, {"count", certs.size()}, {"per_n", counts}});
    r.text(std::to_string(certs.size()) + " graphs");
    emit(c, r);
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gap/Save accounting, discharging and density-bound checks for list-critical graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cg::version);
    RunConfig cfg;

    auto common = [&](CLI::App* s, bool lists) {
        s->add_option("--graph", cfg.graph, "DIMACS edge file");
        if (lists) {
            s->add_option("--lists", cfg.lists, "JSON list assignment (optionally with matchings)");
            s->add_option("--matchings", cfg.matchings, "JSON file with a 'matchings' object");
        }
        s->add_option("--params", cfg.params, "JSON parameter overrides");
        s->add_option("--out", cfg.out, "write the report here (atomically) instead of stdout");
        s->add_option("--format", cfg.format, "json|csv|text")->check(CLI::IsMember({"json", "csv", "text"}));
        s->add_option("--precision", cfg.precision, "float|rational")->check(CLI::IsMember({"float", "rational"}));
        s->add_option("--budget", cfg.budget, "node budget of the exact solvers");
    };

    auto* check = app.add_subcommand("check-params", "evaluate the parameter constraints");
    check->add_option("--params", cfg.params, "JSON parameter overrides");
    check->add_option("--out", cfg.out, "output file");
    check->add_option("--format", cfg.format, "json|csv|text")->check(CLI::IsMember({"json", "csv", "text"}));
    check->add_option("--precision", cfg.precision, "float|rational")->check(CLI::IsMember({"float", "rational"}));

    auto* classify = app.add_subcommand("classify", "per-vertex classification report");
    common(classify, true);

    auto* dense = app.add_subcommand("dense", "search for dense subgraphs in neighbourhoods");
    common(dense, true);
    dense->add_option("--mode", cfg.mode, "heuristic|exhaustive");

    auto* sample = app.add_subcommand("sample", "Monte Carlo run of the random partial coloring");
    common(sample, true);
    sample->add_option("--seed", cfg.seed, "random seed");
    sample->add_option("--trials", cfg.trials, "number of samples");

    auto* discharge = app.add_subcommand("discharge", "decomposition, discharging rules and final charges");
    common(discharge, true);
    discharge->add_option("--trace", cfg.trace, "write the per-rule transfer trace (JSON lines)");
    discharge->add_option("--mode", cfg.mode, "dense search mode for the hypothesis check");

    auto* pipeline = app.add_subcommand("pipeline", "run the reduction pipeline");
    common(pipeline, true);

    auto add_verify = [&](CLI::App* s) {
        common(s, false);
        s->add_option("--bound", cfg.bound, "ky|thm12|thm14 (aliases critical-density|clique-density|chromatic-mad)")->required();
        s->add_option("--k", cfg.k, "chromatic number (default: computed)");
        s->add_option("--omega-cap", cfg.omega_cap, "clique-number cap (default: clique number)");
        s->add_option("--eps", cfg.eps, "epsilon (default: from parameters)");
    };
    auto* verify = app.add_subcommand("verify", "check a density bound on a critical graph");
    add_verify(verify);

    auto* critical = app.add_subcommand("critical", "critical graph tools");
    critical->require_subcommand(1);
    auto* enumerate = critical->add_subcommand("enumerate", "all k-critical graphs up to isomorphism");
    enumerate->add_option("--k", cfg.k, "k")->required();
    enumerate->add_option("--nmax", cfg.nmax, "largest vertex count (<= 10)")->required();
    enumerate->add_option("--out", cfg.out_dir, "directory for DIMACS files and certificates");
    enumerate->add_option("--report", cfg.out, "report file (default stdout)");
    enumerate->add_option("--format", cfg.format, "json|csv|text")->check(CLI::IsMember({"json", "csv", "text"}));
    enumerate->add_option("--budget", cfg.budget, "node budget of the exact solvers");
    auto* cverify = critical->add_subcommand("verify", "check a density bound on a critical graph");
    add_verify(cverify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : input_failure;
    }

    try {
        if (*check) return run_check_params(cfg);
        if (*classify) return run_classify(cfg);
        if (*dense) return run_dense(cfg);
        if (*sample) return run_sample(cfg);
        if (*discharge) return run_discharge(cfg);
        if (*pipeline) return run_pipeline(cfg);
        if (*verify) return run_verify(cfg, "verify");
        if (*enumerate) return run_enumerate(cfg);
        if (*cverify) return run_verify(cfg, "critical verify");
    } catch (const cg::input_error& e) {
        std::cerr << "input error";
        if (e.line() > 0) std::cerr << " at line " << e.line() << ", column " << e.column();
        std::cerr << ": " << e.detail() << '\n';
        return input_failure;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return input_failure;
    } catch (const cg::budget_exhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << '\n';
        return budget_failure;
    } catch (const cg::precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << '\n';
        return input_failure;
    }
    return ok;
}
