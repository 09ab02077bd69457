#pragma once

#include <string>

#include "corrkit/common.hpp"
#include "corrkit/group.hpp"
#include "corrkit/group_algebra.hpp"

namespace corrkit {

/// The multiplication/translation pair on l^2(G): m(f) acts diagonally,
/// lambda(s) permutes the canonical basis by left translation. Together they
/// satisfy the covariance relation
///   lambda(s)* m(f) lambda(s) = m(f o lambda_s),  (f o lambda_s)(t) = f(st),
/// which is the defining property used by the twisted product construction.
class HeisenbergModel {
public:
    explicit HeisenbergModel(FiniteGroup group) : group_(std::move(group)) {}

    [[nodiscard]] const FiniteGroup& group() const { return group_; }

    /// Diagonal multiplication operator for f given by its values on G.
    [[nodiscard]] Mat mult(const Vec& f) const {
        const int n = group_.order();
        if (f.size() != n) throw std::invalid_argument("HeisenbergModel::mult: wrong number of values");
        Mat m = Mat::Zero(n, n);
        for (int t = 0; t < n; ++t) m(t, t) = f(t);
        return m;
    }

    /// Left-regular permutation unitary: lambda(s) e_t = e_{st}.
    [[nodiscard]] Mat lambda(int s) const { return left_regular(group_, s); }

    /// f o lambda_s, the translate appearing in the covariance relation.
    [[nodiscard]] Vec translate(int s, const Vec& f) const {
        const int n = group_.order();
        Vec out(n);
        for (int t = 0; t < n; ++t) out(t) = f(group_.mul(s, t));
        return out;
    }

    [[nodiscard]] CheckReport verify(double tol = 1e-12) const {
        CheckReport report;
        report.name = "heisenberg_model";
        report.tolerance = tol;
        const int n = group_.order();
        report.check("lambda(e) = 1", (lambda(group_.identity_element()) - Mat::Identity(n, n)).norm());
        for (int s = 0; s < n; ++s) {
            report.check("lambda(s) unitary", (lambda(s).adjoint() * lambda(s) - Mat::Identity(n, n)).norm(),
                         "s=" + group_.label(s));
            for (int t = 0; t < n; ++t)
                report.check("lambda is a representation",
                             (lambda(s) * lambda(t) - lambda(group_.mul(s, t))).norm(),
                             "s=" + group_.label(s) + " t=" + group_.label(t));
            for (int g = 0; g < n; ++g) {
                Vec chi = Vec::Zero(n);
                chi(g) = 1.0;
                report.check("covariance: lambda(s)* m(f) lambda(s) = m(f o lambda_s)",
                             (lambda(s).adjoint() * mult(chi) * lambda(s) - mult(translate(s, chi))).norm(),
                             "s=" + group_.label(s) + " f=chi_" + group_.label(g));
            }
        }
        return report;
    }

private:
    FiniteGroup group_;
};

inline HeisenbergModel heisenberg_model(const FiniteGroup& g) { return HeisenbergModel(g); }

}  // namespace corrkit
