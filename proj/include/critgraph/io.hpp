#pragma once

#include "critgraph/assignment.hpp"
#include "critgraph/graph.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace critgraph {

/// Malformed input. line/column are 1-based; 0 means unknown.
class input_error : public std::runtime_error {
public:
    input_error(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(format(what, line, column)), detail_(what), line_(line), column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }
    /// The message without the location prefix.
    const std::string& detail() const { return detail_; }

private:
    static std::string format(const std::string& what, int line, int column)
    {
        if (line == 0) return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }
    std::string detail_;
    int line_;
    int column_;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// DIMACS edge format: "c" comments, one "p edge n m" line, "e u v" lines
/// with 1-based vertex ids.
inline Graph parse_dimacs(std::string_view text)
{
    int n = -1;
    std::vector<std::pair<vertex_t, vertex_t>> edges;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::vector<std::pair<std::string_view, int>> tok;  // token, column
        for (std::size_t i = 0; i < line.size();) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
            if (j > i) tok.emplace_back(line.substr(i, j - i), static_cast<int>(i) + 1);
            i = j;
        }
        if (tok.empty() || tok[0].first == "c") continue;

        auto number = [&](std::size_t k) {
            if (k >= tok.size()) throw input_error("missing field", line_no, static_cast<int>(line.size()) + 1);
            long long x = 0;
            auto s = tok[k].first;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
            if (ec != std::errc() || p != s.data() + s.size() || x < 0 || x > 1'000'000)
                throw input_error("expected a non-negative integer, got '" + std::string(s) + "'", line_no, tok[k].second);
            return static_cast<int>(x);
        };

        if (tok[0].first == "p") {
            if (n >= 0) throw input_error("duplicate problem line", line_no, tok[0].second);
            if (tok.size() < 4) throw input_error("problem line must be 'p edge N M'", line_no, tok[0].second);
            if (tok[1].first != "edge" && tok[1].first != "col")
                throw input_error("unsupported problem type '" + std::string(tok[1].first) + "'", line_no, tok[1].second);
            n = number(2);
            number(3);
        } else if (tok[0].first == "e") {
            if (n < 0) throw input_error("edge before problem line", line_no, tok[0].second);
            int u = number(1), v = number(2);
            if (u < 1 || u > n) throw input_error("vertex id out of range", line_no, tok[1].second);
            if (v < 1 || v > n) throw input_error("vertex id out of range", line_no, tok[2].second);
            if (u == v) throw input_error("self-loop", line_no, tok[1].second);
            edges.emplace_back(u - 1, v - 1);
        } else {
            throw input_error("unknown line type '" + std::string(tok[0].first) + "'", line_no, tok[0].second);
        }
    }
    if (n < 0) throw input_error("missing problem line 'p edge N M'");
    return Graph::from_edges(n, edges);
}

inline std::string to_dimacs(const Graph& g, const std::string& comment = {})
{
    std::ostringstream out;
    if (!comment.empty()) out << "c " << comment << '\n';
    out << "p edge " << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

namespace detail {

inline void line_col(std::string_view text, std::size_t byte, int& line, int& col)
{
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

inline nlohmann::json parse_json(std::string_view text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        int line, col;
        // byte is 1-based and points one past the offending character
        line_col(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw input_error("invalid JSON: " + msg, line, col);
    }
}

inline vertex_t vertex_key(const std::string& key, int n)
{
    int id = 0;
    auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc() || p != key.data() + key.size() || id < 1 || id > n)
        throw input_error("bad vertex id '" + key + "' (expected 1.." + std::to_string(n) + ")");
    return id - 1;
}

inline color_t color_value(const nlohmann::json& j, const std::string& where)
{
    if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > INT32_MAX)
        throw input_error("color ids must be non-negative integers (" + where + ")");
    return j.get<color_t>();
}

}  // namespace detail

/// {"lists": {"1": [..], ...}, "matchings": {"1-2": [[cu, cv], ...]}}.
/// Vertex ids are 1-based as in DIMACS. A vertex absent from "lists" gets
/// an empty list.
struct AssignmentInput {
    ListAssignment lists;
    std::optional<std::map<std::pair<vertex_t, vertex_t>, CorrespondenceAssignment::Pairs>> matchings;
};

inline AssignmentInput parse_assignment(std::string_view text, const Graph& g)
{
    auto j = detail::parse_json(text);
    if (!j.is_object()) throw input_error("assignment must be a JSON object");
    AssignmentInput out{ListAssignment(g.order()), std::nullopt};
    if (!j.contains("lists") || !j["lists"].is_object()) throw input_error("missing object field 'lists'");
    for (auto& [key, val] : j["lists"].items()) {
        vertex_t v = detail::vertex_key(key, g.order());
        if (!val.is_array()) throw input_error("list of vertex " + key + " must be an array");
        std::vector<color_t> cs;
        for (auto& c : val) cs.push_back(detail::color_value(c, "list of vertex " + key));
        out.lists.set(v, cs);
    }
    if (j.contains("matchings") && !j["matchings"].is_null()) {
        if (!j["matchings"].is_object()) throw input_error("'matchings' must be an object");
        std::map<std::pair<vertex_t, vertex_t>, CorrespondenceAssignment::Pairs> m;
        for (auto& [key, val] : j["matchings"].items()) {
            auto dash = key.find('-');
            if (dash == std::string::npos) throw input_error("matching key '" + key + "' must be 'u-v'");
            vertex_t u = detail::vertex_key(key.substr(0, dash), g.order());
            vertex_t v = detail::vertex_key(key.substr(dash + 1), g.order());
            if (!val.is_array()) throw input_error("matching " + key + " must be an array of pairs");
            CorrespondenceAssignment::Pairs pairs;
            for (auto& pr : val) {
                if (!pr.is_array() || pr.size() != 2) throw input_error("matching " + key + " entries must be [cu, cv]");
                color_t cu = detail::color_value(pr[0], "matching " + key);
                color_t cv = detail::color_value(pr[1], "matching " + key);
                if (u < v)
                    pairs.emplace_back(cu, cv);
                else
                    pairs.emplace_back(cv, cu);
            }
            auto k = std::minmax(u, v);
            if (m.count({k.first, k.second})) throw input_error("duplicate matching for edge " + key);
            m[{k.first, k.second}] = std::move(pairs);
        }
        out.matchings = std::move(m);
    }
    return out;
}

inline nlohmann::json assignment_to_json(const CorrespondenceAssignment& lm)
{
    nlohmann::json j;
    j["lists"] = nlohmann::json::object();
    const auto& L = lm.lists();
    for (vertex_t v = 0; v < L.order(); ++v) j["lists"][std::to_string(v + 1)] = L[v];
    j["matchings"] = nlohmann::json::object();
    for (auto& [key, pairs] : lm.matchings()) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto [a, b] : pairs) arr.push_back({a, b});
        j["matchings"][std::to_string(key.first + 1) + "-" + std::to_string(key.second + 1)] = arr;
    }
    return j;
}

}  // namespace critgraph
