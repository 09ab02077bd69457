#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/group.hpp"

namespace corrkit {

/// Grading (algebraic coaction) of an FDAlgebra by a finite group: a choice of
/// spanning homogeneous components A_s whose union basis is a basis of A.
class AlgGrading {
public:
    AlgGrading() = default;

    AlgGrading(FiniteGroup group, FDAlgebra algebra, std::vector<std::vector<AlgElement>> components)
        : data_(std::make_shared<Data>()) {
        auto& d = *std::const_pointer_cast<Data>(data_);
        d.group = std::move(group);
        d.algebra = std::move(algebra);
        d.components = std::move(components);
        if (static_cast<int>(d.components.size()) != d.group.order())
            throw std::invalid_argument("AlgGrading: one component list per group element required");
        for (int s = 0; s < d.group.order(); ++s) {
            Mat cols(d.algebra.zero().vec().size(), static_cast<Eigen::Index>(d.components[static_cast<size_t>(s)].size()));
            for (size_t k = 0; k < d.components[static_cast<size_t>(s)].size(); ++k)
                cols.col(static_cast<Eigen::Index>(k)) = d.components[static_cast<size_t>(s)][k].vec();
            d.component_solvers.emplace_back(cols);
        }
        Eigen::Index total = 0;
        for (const auto& comp : d.components) total += static_cast<Eigen::Index>(comp.size());
        Mat all(d.algebra.zero().vec().size(), total);
        Eigen::Index col = 0;
        for (const auto& comp : d.components)
            for (const auto& e : comp) all.col(col++) = e.vec();
        d.union_solver = SpanSolver(all);
    }

    /// Everything concentrated in degree e.
    static AlgGrading trivial(const FiniteGroup& group, const FDAlgebra& algebra) {
        std::vector<std::vector<AlgElement>> comps(static_cast<size_t>(group.order()));
        comps[static_cast<size_t>(group.identity_element())] = algebra.basis();
        return AlgGrading(group, algebra, std::move(comps));
    }

    [[nodiscard]] const FiniteGroup& group() const { return data_->group; }
    [[nodiscard]] const FDAlgebra& algebra() const { return data_->algebra; }
    [[nodiscard]] const std::vector<AlgElement>& component(int s) const {
        return data_->components[static_cast<size_t>(s)];
    }
    [[nodiscard]] const SpanSolver& component_solver(int s) const {
        return data_->component_solvers[static_cast<size_t>(s)];
    }

    /// Union basis with degrees, ordered by group element then position.
    [[nodiscard]] std::vector<std::pair<AlgElement, int>> homogeneous_basis() const {
        std::vector<std::pair<AlgElement, int>> out;
        for (int s = 0; s < data_->group.order(); ++s)
            for (const auto& e : data_->components[static_cast<size_t>(s)]) out.emplace_back(e, s);
        return out;
    }

    [[nodiscard]] int total_count() const {
        int n = 0;
        for (const auto& comp : data_->components) n += static_cast<int>(comp.size());
        return n;
    }

    struct Decomposition {
        std::vector<AlgElement> parts;
        double residual = 0.0;
    };

    /// Splits a into homogeneous parts a = sum_s a_s along the union basis.
    [[nodiscard]] Decomposition homogeneous_decomposition(const AlgElement& a) const {
        Decomposition dec;
        const Vec v = a.vec();
        const Vec c = data_->union_solver.solve(v);
        dec.residual = (data_->union_solver.columns() * c - v).norm();
        dec.parts.reserve(data_->components.size());
        Eigen::Index k = 0;
        for (const auto& comp : data_->components) {
            AlgElement part = data_->algebra.zero();
            for (const auto& e : comp) part += c(k++) * e;
            dec.parts.push_back(std::move(part));
        }
        return dec;
    }

    /// Degree of a homogeneous element; -1 when zero, throws when not homogeneous.
    [[nodiscard]] int degree_of(const AlgElement& a, double tol = kDefaultTol) const {
        const double scale = std::max(1.0, a.frobenius());
        Decomposition dec = homogeneous_decomposition(a);
        if (dec.residual > tol * scale) throw std::invalid_argument("degree_of: element not in the graded span");
        int deg = -1;
        for (int s = 0; s < data_->group.order(); ++s) {
            if (dec.parts[static_cast<size_t>(s)].frobenius() > tol * scale) {
                if (deg >= 0) throw std::invalid_argument("degree_of: element not homogeneous");
                deg = s;
            }
        }
        return deg;
    }

private:
    struct Data {
        FiniteGroup group;
        FDAlgebra algebra;
        std::vector<std::vector<AlgElement>> components;
        std::vector<SpanSolver> component_solvers;
        SpanSolver union_solver;
    };
    std::shared_ptr<const Data> data_;
};

/// Checks the grading axioms: the union of component bases is a basis of A,
/// A_s A_t is contained in A_st, and A_s* = A_{s^-1}.
inline CheckReport verify_grading(const AlgGrading& grading, double tol = kDefaultTol) {
    CheckReport report;
    report.name = "verify_grading";
    report.tolerance = tol;
    const auto& g = grading.group();
    const auto& alg = grading.algebra();

    report.require("spanning: union basis size equals dim A", grading.total_count() == alg.dim(),
                   "count " + std::to_string(grading.total_count()) + " vs dim " + std::to_string(alg.dim()));
    Mat all(alg.zero().vec().size(), static_cast<Eigen::Index>(grading.total_count()));
    Eigen::Index col = 0;
    for (int s = 0; s < g.order(); ++s)
        for (const auto& e : grading.component(s)) {
            report.check("component inside algebra span", alg.span_residual(e), "degree " + g.label(s));
            all.col(col++) = e.vec();
        }
    report.require("spanning: union basis linearly independent",
                   span_rank(all, tol) == static_cast<Eigen::Index>(grading.total_count()));

    for (int s = 0; s < g.order(); ++s)
        for (int t = 0; t < g.order(); ++t) {
            const int st = g.mul(s, t);
            for (size_t i = 0; i < grading.component(s).size(); ++i)
                for (size_t j = 0; j < grading.component(t).size(); ++j) {
                    const AlgElement prod = grading.component(s)[i] * grading.component(t)[j];
                    const double res = grading.component_solver(st).residual(prod.vec());
                    report.check("product rule: A_s A_t inside A_st", res,
                                 "s=" + g.label(s) + " t=" + g.label(t) + " pair (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
                }
        }
    for (int s = 0; s < g.order(); ++s) {
        const int si = g.inv(s);
        for (size_t i = 0; i < grading.component(s).size(); ++i) {
            const double res = grading.component_solver(si).residual(grading.component(s)[i].adjoint().vec());
            report.check("involution rule: A_s* = A_{s^-1}", res, "s=" + g.label(s) + " basis " + std::to_string(i));
        }
        report.require("involution rule: matching component dimensions",
                       grading.component(s).size() == grading.component(si).size(), "s=" + g.label(s));
    }
    return report;
}

/// Same group table, same algebra, and componentwise equal spans.
inline bool same_grading(const AlgGrading& a, const AlgGrading& b, double tol = kDefaultTol) {
    if (!a.group().same_table(b.group()) || !same_algebra(a.algebra(), b.algebra(), tol)) return false;
    const Eigen::Index veclen = a.algebra().zero().vec().size();
    for (int s = 0; s < a.group().order(); ++s) {
        Mat ca(veclen, static_cast<Eigen::Index>(a.component(s).size()));
        for (size_t i = 0; i < a.component(s).size(); ++i) ca.col(static_cast<Eigen::Index>(i)) = a.component(s)[i].vec();
        Mat cb(veclen, static_cast<Eigen::Index>(b.component(s).size()));
        for (size_t i = 0; i < b.component(s).size(); ++i) cb.col(static_cast<Eigen::Index>(i)) = b.component(s)[i].vec();
        if (ca.cols() == 0 && cb.cols() == 0) continue;
        if (ca.cols() == 0 || cb.cols() == 0) {
            if (ca.cols() == 0 && span_rank(cb, tol) == 0) continue;
            if (cb.cols() == 0 && span_rank(ca, tol) == 0) continue;
            return false;
        }
        if (!spans_equal(ca, cb, tol)) return false;
    }
    return true;
}

}  // namespace corrkit
