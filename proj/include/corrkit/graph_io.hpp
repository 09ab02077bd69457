#pragma once

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "corrkit/graph.hpp"

namespace corrkit {

/// A graph plus optional per-edge label strings (group element names).
struct GraphDocument {
    DirectedGraph graph;
    std::vector<std::string> labels;  // empty, or one entry per edge
};

/// Label strings of an edge labeling, in edge order.
inline std::vector<std::string> label_strings(const EdgeLabeling& lab) {
    std::vector<std::string> out;
    out.reserve(lab.labels.size());
    for (int l : lab.labels) out.push_back(lab.group.label(l));
    return out;
}

/// Rebuild an edge labeling from label strings over a known group.
inline EdgeLabeling edge_labeling_from_strings(const FiniteGroup& group, const std::vector<std::string>& labels) {
    EdgeLabeling out;
    out.group = group;
    for (const auto& name : labels) {
        int found = -1;
        for (int s = 0; s < group.order(); ++s)
            if (group.label(s) == name) found = s;
        if (found < 0) throw std::invalid_argument("edge_labeling_from_strings: unknown group element " + name);
        out.labels.push_back(found);
    }
    return out;
}

/// DOT export: one node line per vertex, one arrow per edge carrying the
/// edge name and, when given, the label attribute (the delta value).
inline std::string to_dot(const DirectedGraph& g, const std::vector<std::string>& labels = {}) {
    if (!labels.empty() && static_cast<int>(labels.size()) != g.num_edges())
        throw std::invalid_argument("to_dot: one label per edge required");
    std::ostringstream out;
    out << "digraph G {\n";
    for (int v = 0; v < g.num_vertices(); ++v) out << "  \"" << g.vertex(v) << "\";\n";
    for (int e = 0; e < g.num_edges(); ++e) {
        out << "  \"" << g.vertex(g.src(e)) << "\" -> \"" << g.vertex(g.dst(e)) << "\" [name=\"" << g.edge(e).name
            << "\"";
        if (!labels.empty()) out << ", label=\"" << labels[static_cast<size_t>(e)] << "\"";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

namespace detail {

[[noreturn]] inline void dot_error(int line, const std::string& message) {
    throw std::runtime_error("dot parse error at line " + std::to_string(line) + ": " + message);
}

/// Reads a double-quoted token starting at pos; advances pos past it.
inline std::string dot_quoted(const std::string& s, size_t& pos, int line) {
    if (pos >= s.size() || s[pos] != '"') dot_error(line, "expected a quoted name");
    const size_t end = s.find('"', pos + 1);
    if (end == std::string::npos) dot_error(line, "unterminated quote");
    std::string out = s.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return out;
}

inline void dot_skip_space(const std::string& s, size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

}  // namespace detail

/// Parses the subset of DOT emitted by to_dot, with line diagnostics.
inline GraphDocument from_dot(const std::string& text) {
    std::vector<std::string> vertices;
    struct RawEdge {
        std::string name, src, dst, label;
        bool has_label = false;
        int line = 0;
    };
    std::vector<RawEdge> raw;
    bool header_seen = false;
    bool closed = false;
    bool any_label = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t pos = 0;
        detail::dot_skip_space(line, pos);
        if (pos >= line.size()) continue;
        if (!header_seen) {
            if (line.find("digraph") == std::string::npos || line.find('{') == std::string::npos)
                detail::dot_error(lineno, "expected 'digraph <name> {'");
            header_seen = true;
            continue;
        }
        if (line[pos] == '}') {
            closed = true;
            continue;
        }
        if (closed) detail::dot_error(lineno, "content after closing brace");
        std::string first = detail::dot_quoted(line, pos, lineno);
        detail::dot_skip_space(line, pos);
        if (pos < line.size() && line[pos] == ';') {
            vertices.push_back(std::move(first));
            continue;
        }
        if (line.compare(pos, 2, "->") != 0) detail::dot_error(lineno, "expected ';' or '->'");
        pos += 2;
        detail::dot_skip_space(line, pos);
        RawEdge e;
        e.src = std::move(first);
        e.dst = detail::dot_quoted(line, pos, lineno);
        e.line = lineno;
        detail::dot_skip_space(line, pos);
        if (pos >= line.size() || line[pos] != '[') detail::dot_error(lineno, "expected an attribute list");
        ++pos;
        while (true) {
            detail::dot_skip_space(line, pos);
            if (pos < line.size() && line[pos] == ']') {
                ++pos;
                break;
            }
            const size_t eq = line.find('=', pos);
            if (eq == std::string::npos) detail::dot_error(lineno, "expected attribute '='");
            std::string key = line.substr(pos, eq - pos);
            while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
            pos = eq + 1;
            detail::dot_skip_space(line, pos);
            const std::string value = detail::dot_quoted(line, pos, lineno);
            if (key == "name") {
                e.name = value;
            } else if (key == "label") {
                e.label = value;
                e.has_label = true;
            } else {
                detail::dot_error(lineno, "unknown attribute '" + key + "'");
            }
            detail::dot_skip_space(line, pos);
            if (pos < line.size() && line[pos] == ',') ++pos;
        }
        if (e.name.empty()) detail::dot_error(lineno, "edge is missing the name attribute");
        if (e.has_label) any_label = true;
        raw.push_back(std::move(e));
    }
    if (!header_seen) detail::dot_error(lineno, "missing 'digraph' header");
    if (!closed) detail::dot_error(lineno, "missing closing brace");

    auto vertex_index = [&](const std::string& name, int at) {
        for (size_t v = 0; v < vertices.size(); ++v)
            if (vertices[v] == name) return static_cast<int>(v);
        detail::dot_error(at, "edge endpoint '" + name + "' is not a declared vertex");
    };
    GraphDocument doc;
    std::vector<GraphEdge> edges;
    for (const auto& e : raw) {
        if (any_label && !e.has_label) detail::dot_error(e.line, "edge is missing the label attribute");
        edges.push_back({e.name, vertex_index(e.src, e.line), vertex_index(e.dst, e.line)});
        if (any_label) doc.labels.push_back(e.label);
    }
    doc.graph = DirectedGraph(std::move(vertices), std::move(edges));
    return doc;
}

/// JSON schema: {"vertices": [names], "edges": [{"name", "src", "dst", "label"?}]}.
inline std::string to_json_string(const DirectedGraph& g, const std::vector<std::string>& labels = {}) {
    if (!labels.empty() && static_cast<int>(labels.size()) != g.num_edges())
        throw std::invalid_argument("to_json_string: one label per edge required");
    nlohmann::json doc;
    doc["vertices"] = g.vertices();
    doc["edges"] = nlohmann::json::array();
    for (int e = 0; e < g.num_edges(); ++e) {
        nlohmann::json je;
        je["name"] = g.edge(e).name;
        je["src"] = g.src(e);
        je["dst"] = g.dst(e);
        if (!labels.empty()) je["label"] = labels[static_cast<size_t>(e)];
        doc["edges"].push_back(std::move(je));
    }
    return doc.dump(2) + "\n";
}

inline GraphDocument from_json_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        size_t lineno = 1;
        for (size_t i = 0; i < err.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++lineno;
        throw std::runtime_error("json parse error at line " + std::to_string(lineno) + ": " + err.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw std::runtime_error("json graph: expected an object with 'vertices' and 'edges'");
    GraphDocument out;
    std::vector<std::string> vertices;
    for (const auto& v : doc["vertices"]) {
        if (!v.is_string()) throw std::runtime_error("json graph: vertex names must be strings");
        vertices.push_back(v.get<std::string>());
    }
    std::vector<GraphEdge> edges;
    bool any_label = false;
    for (const auto& je : doc["edges"]) {
        if (!je.is_object() || !je.contains("name") || !je.contains("src") || !je.contains("dst"))
            throw std::runtime_error("json graph: each edge needs 'name', 'src', 'dst'");
        GraphEdge e;
        e.name = je["name"].get<std::string>();
        e.src = je["src"].get<int>();
        e.dst = je["dst"].get<int>();
        edges.push_back(std::move(e));
        if (je.contains("label")) {
            any_label = true;
            out.labels.push_back(je["label"].get<std::string>());
        } else if (any_label) {
            throw std::runtime_error("json graph: either every edge carries a label or none does");
        }
    }
    if (any_label && out.labels.size() != edges.size())
        throw std::runtime_error("json graph: either every edge carries a label or none does");
    out.graph = DirectedGraph(std::move(vertices), std::move(edges));
    return out;
}

}  // namespace corrkit
