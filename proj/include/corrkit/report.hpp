#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "common.hpp"

namespace corrkit {

/// Fixed-format rendering of a double for report facts: shortest %.12g form,
/// locale independent, identical bytes for identical values.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Result of one task of a spec file: the per-check evidence of a CheckReport
/// plus deterministic key-value facts (dimensions, degrees, norms) recorded
/// by the handler in insertion order.
struct TaskResult {
    std::string kind;                                      // task type (operation name)
    std::string name;                                      // instance label, defaults to kind
    bool passed = true;
    double max_residual = 0.0;
    double tolerance = kDefaultTol;
    std::vector<Witness> witnesses;                        // failed checks only
    std::vector<std::pair<std::string, std::string>> facts;

    void fact(const std::string& key, std::string value) { facts.emplace_back(key, std::move(value)); }
    void fact(const std::string& key, double value) { facts.emplace_back(key, format_double(value)); }
    void fact(const std::string& key, int value) { facts.emplace_back(key, std::to_string(value)); }
    void fact(const std::string& key, bool value) { facts.emplace_back(key, value ? "true" : "false"); }

    void absorb(const CheckReport& report) {
        passed = passed && report.passed;
        max_residual = std::max(max_residual, report.max_residual);
        for (const auto& w : report.witnesses) {
            Witness tagged = w;
            if (!report.name.empty()) tagged.identity = report.name + ": " + w.identity;
            witnesses.push_back(std::move(tagged));
        }
    }
};

/// Report of a whole run, serialized deterministically: fixed key order,
/// fixed float formatting, no timing or environment data.
struct RunReport {
    double tolerance = kDefaultTol;
    unsigned seed = 0;
    std::vector<TaskResult> tasks;

    [[nodiscard]] bool passed() const {
        for (const auto& t : tasks)
            if (!t.passed) return false;
        return true;
    }

    [[nodiscard]] nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json doc;
        doc["schema"] = "corrkit-report/1";
        doc["passed"] = passed();
        doc["tolerance"] = format_double(tolerance);
        doc["seed"] = seed;
        doc["tasks"] = nlohmann::ordered_json::array();
        for (const auto& t : tasks) {
            nlohmann::ordered_json jt;
            jt["task"] = t.kind;
            jt["name"] = t.name.empty() ? t.kind : t.name;
            jt["passed"] = t.passed;
            jt["max_residual"] = format_double(t.max_residual);
            jt["tolerance"] = format_double(t.tolerance);
            jt["facts"] = nlohmann::ordered_json::object();
            for (const auto& [k, v] : t.facts) jt["facts"][k] = v;
            jt["witnesses"] = nlohmann::ordered_json::array();
            for (const auto& w : t.witnesses) {
                nlohmann::ordered_json jw;
                jw["identity"] = w.identity;
                jw["detail"] = w.detail;
                jw["residual"] = format_double(w.residual);
                jt["witnesses"].push_back(std::move(jw));
            }
            doc["tasks"].push_back(std::move(jt));
        }
        return doc;
    }

    [[nodiscard]] std::string to_json_string() const { return to_json().dump(2) + "\n"; }

    [[nodiscard]] std::string to_text() const {
        std::string out;
        for (const auto& t : tasks) {
            out += (t.passed ? "pass" : "FAIL");
            out += "  " + (t.name.empty() ? t.kind : t.name);
            out += "  (task " + t.kind + ", max residual " + format_double(t.max_residual) + ", tolerance " +
                   format_double(t.tolerance) + ")\n";
            for (const auto& [k, v] : t.facts) out += "      " + k + " = " + v + "\n";
            for (const auto& w : t.witnesses) {
                out += "      witness: " + w.identity;
                if (!w.detail.empty()) out += " [" + w.detail + "]";
                out += " residual " + format_double(w.residual) + "\n";
            }
        }
        out += std::string(passed() ? "PASS" : "FAIL") + "  " + std::to_string(tasks.size()) + " task" +
               (tasks.size() == 1 ? "" : "s") + "\n";
        return out;
    }
};

}  // namespace corrkit
