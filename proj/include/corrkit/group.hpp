#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "corrkit/common.hpp"

namespace corrkit {

/// Finite group given by an explicit multiplication table over element indices.
class FiniteGroup {
public:
    FiniteGroup() = default;

    FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table)
        : labels_(std::move(labels)), table_(std::move(table)) {
        validate();
    }

    /// Z_n with elements "0".."n-1" and addition mod n.
    static FiniteGroup cyclic(int n) {
        if (n < 1) throw std::invalid_argument("cyclic: order must be >= 1");
        std::vector<std::string> labels(static_cast<size_t>(n));
        std::vector<std::vector<int>> table(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
        for (int i = 0; i < n; ++i) {
            labels[static_cast<size_t>(i)] = std::to_string(i);
            for (int j = 0; j < n; ++j) table[static_cast<size_t>(i)][static_cast<size_t>(j)] = (i + j) % n;
        }
        return FiniteGroup(std::move(labels), std::move(table));
    }

    [[nodiscard]] int order() const { return static_cast<int>(labels_.size()); }
    [[nodiscard]] int identity_element() const { return identity_; }
    [[nodiscard]] int mul(int a, int b) const { return table_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
    [[nodiscard]] int inv(int a) const { return inverse_[static_cast<size_t>(a)]; }
    [[nodiscard]] const std::string& label(int a) const { return labels_[static_cast<size_t>(a)]; }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

    [[nodiscard]] int element(const std::string& label) const {
        for (int i = 0; i < order(); ++i)
            if (labels_[static_cast<size_t>(i)] == label) return i;
        throw std::invalid_argument("unknown group element label: " + label);
    }

    [[nodiscard]] bool is_abelian() const {
        for (int a = 0; a < order(); ++a)
            for (int b = 0; b < order(); ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    /// Same order and multiplication table (labels may differ).
    [[nodiscard]] bool same_table(const FiniteGroup& other) const {
        if (order() != other.order()) return false;
        for (int a = 0; a < order(); ++a)
            for (int b = 0; b < order(); ++b)
                if (mul(a, b) != other.mul(a, b)) return false;
        return true;
    }

private:
    void validate() {
        const int n = order();
        if (n == 0) throw std::invalid_argument("group: empty element list");
        if (table_.size() != static_cast<size_t>(n)) throw std::invalid_argument("group: table row count mismatch");
        for (const auto& row : table_) {
            if (row.size() != static_cast<size_t>(n)) throw std::invalid_argument("group: table column count mismatch");
            for (int v : row)
                if (v < 0 || v >= n) throw std::invalid_argument("group: table entry out of range");
        }
        identity_ = -1;
        for (int e = 0; e < n; ++e) {
            bool ok = true;
            for (int a = 0; a < n; ++a) ok = ok && mul(e, a) == a && mul(a, e) == a;
            if (ok) {
                identity_ = e;
                break;
            }
        }
        if (identity_ < 0) throw std::invalid_argument("group: no identity element");
        inverse_.assign(static_cast<size_t>(n), -1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b)
                if (mul(a, b) == identity_ && mul(b, a) == identity_) {
                    inverse_[static_cast<size_t>(a)] = b;
                    break;
                }
            if (inverse_[static_cast<size_t>(a)] < 0) throw std::invalid_argument("group: missing inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw std::invalid_argument("group: multiplication not associative");
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_ = 0;
};

}  // namespace corrkit
