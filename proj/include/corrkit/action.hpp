#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/group.hpp"

namespace corrkit {

/// One *-automorphism of a block-sum algebra: a dimension-preserving block
/// permutation followed by a per-block unitary conjugation. Block j maps to
/// block perm[j]; the landing block is conjugated by unitary[j].
struct BlockAutomorphism {
    std::vector<int> perm;
    std::vector<Mat> unitary;
};

/// Action of a finite group on an FDAlgebra by *-automorphisms.
class AlgAction {
public:
    AlgAction() = default;

    AlgAction(FiniteGroup group, FDAlgebra algebra, std::vector<BlockAutomorphism> maps)
        : group_(std::move(group)), algebra_(std::move(algebra)), maps_(std::move(maps)) {
        if (static_cast<int>(maps_.size()) != group_.order())
            throw std::invalid_argument("AlgAction: one automorphism per group element required");
        const auto& dims = algebra_.block_dims();
        for (const auto& m : maps_) {
            if (m.perm.size() != dims.size() || m.unitary.size() != dims.size())
                throw std::invalid_argument("AlgAction: block count mismatch");
            std::vector<bool> hit(dims.size(), false);
            for (size_t j = 0; j < dims.size(); ++j) {
                const int p = m.perm[j];
                if (p < 0 || p >= static_cast<int>(dims.size()))
                    throw std::invalid_argument("AlgAction: permutation entry out of range");
                if (hit[static_cast<size_t>(p)]) throw std::invalid_argument("AlgAction: not a permutation");
                hit[static_cast<size_t>(p)] = true;
                if (dims[j] != dims[static_cast<size_t>(p)])
                    throw std::invalid_argument("AlgAction: permutation mixes blocks of different size");
                if (m.unitary[j].rows() != dims[j] || m.unitary[j].cols() != dims[j])
                    throw std::invalid_argument("AlgAction: conjugator size mismatch");
            }
        }
    }

    static AlgAction trivial(const FiniteGroup& group, const FDAlgebra& algebra) {
        std::vector<BlockAutomorphism> maps;
        maps.reserve(static_cast<size_t>(group.order()));
        BlockAutomorphism id;
        for (size_t j = 0; j < algebra.block_dims().size(); ++j) {
            id.perm.push_back(static_cast<int>(j));
            id.unitary.push_back(Mat::Identity(algebra.block_dims()[j], algebra.block_dims()[j]));
        }
        for (int s = 0; s < group.order(); ++s) maps.push_back(id);
        return AlgAction(group, algebra, std::move(maps));
    }

    [[nodiscard]] const FiniteGroup& group() const { return group_; }
    [[nodiscard]] const FDAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] const BlockAutomorphism& map(int s) const { return maps_[static_cast<size_t>(s)]; }

    [[nodiscard]] AlgElement apply(int s, const AlgElement& a) const {
        const auto& m = maps_[static_cast<size_t>(s)];
        AlgElement out = algebra_.zero();
        for (size_t j = 0; j < a.blocks.size(); ++j)
            out.blocks[static_cast<size_t>(m.perm[j])] = m.unitary[j] * a.blocks[j] * m.unitary[j].adjoint();
        return out;
    }

    [[nodiscard]] AlgElement apply_inv(int s, const AlgElement& a) const { return apply(group_.inv(s), a); }

    /// Unitary on the ambient block sum implementing the automorphism.
    [[nodiscard]] Mat ambient_unitary(int s) const {
        const auto& dims = algebra_.block_dims();
        const auto& m = maps_[static_cast<size_t>(s)];
        std::vector<int> offset(dims.size() + 1, 0);
        for (size_t i = 0; i < dims.size(); ++i) offset[i + 1] = offset[i] + dims[i];
        Mat v = Mat::Zero(algebra_.ambient_size(), algebra_.ambient_size());
        for (size_t j = 0; j < dims.size(); ++j)
            v.block(offset[static_cast<size_t>(m.perm[j])], offset[j], dims[j], dims[j]) = m.unitary[j];
        return v;
    }

private:
    FiniteGroup group_;
    FDAlgebra algebra_;
    std::vector<BlockAutomorphism> maps_;
};

/// Checks that an AlgAction is a genuine action by *-automorphisms: unitary
/// conjugators, unit preservation, multiplicativity, involution equivariance,
/// identity at e, the homomorphism law, and span preservation for subalgebras.
inline CheckReport verify_action(const AlgAction& action, double tol = kDefaultTol) {
    CheckReport report;
    report.name = "verify_action";
    report.tolerance = tol;
    const auto& g = action.group();
    const auto& alg = action.algebra();
    const auto& basis = alg.basis();

    for (int s = 0; s < g.order(); ++s) {
        const auto& m = action.map(s);
        for (size_t j = 0; j < m.unitary.size(); ++j) {
            const Mat& u = m.unitary[j];
            report.check("conjugator unitary", (u * u.adjoint() - Mat::Identity(u.rows(), u.cols())).norm(),
                         "s=" + g.label(s) + " block " + std::to_string(j));
        }
        report.check("unit preservation: alpha_s(1) = 1", (action.apply(s, alg.one()) - alg.one()).frobenius(),
                     "s=" + g.label(s));
        for (size_t i = 0; i < basis.size(); ++i) {
            const AlgElement ai = action.apply(s, basis[i]);
            report.check("involution equivariance: alpha_s(a*) = alpha_s(a)*",
                         (action.apply(s, basis[i].adjoint()) - ai.adjoint()).frobenius(),
                         "s=" + g.label(s) + " basis " + std::to_string(i));
            if (!alg.is_full())
                report.check("span preservation: alpha_s(A) = A", alg.span_residual(ai),
                             "s=" + g.label(s) + " basis " + std::to_string(i));
            for (size_t k = 0; k < basis.size(); ++k)
                report.check("multiplicativity: alpha_s(ab) = alpha_s(a)alpha_s(b)",
                             (action.apply(s, basis[i] * basis[k]) - ai * action.apply(s, basis[k])).frobenius(),
                             "s=" + g.label(s) + " pair (" + std::to_string(i) + "," + std::to_string(k) + ")");
        }
    }
    for (size_t i = 0; i < basis.size(); ++i)
        report.check("identity map: alpha_e = id",
                     (action.apply(g.identity_element(), basis[i]) - basis[i]).frobenius(),
                     "basis " + std::to_string(i));
    for (int s = 0; s < g.order(); ++s)
        for (int t = 0; t < g.order(); ++t)
            for (size_t i = 0; i < basis.size(); ++i)
                report.check("homomorphism: alpha_s(alpha_t(a)) = alpha_st(a)",
                             (action.apply(s, action.apply(t, basis[i])) - action.apply(g.mul(s, t), basis[i]))
                                 .frobenius(),
                             "s=" + g.label(s) + " t=" + g.label(t) + " basis " + std::to_string(i));
    return report;
}

/// Same group table, same algebra, and the same map on the algebra basis.
inline bool same_action(const AlgAction& a, const AlgAction& b, double tol = kDefaultTol) {
    if (!a.group().same_table(b.group()) || !same_algebra(a.algebra(), b.algebra(), tol)) return false;
    for (int s = 0; s < a.group().order(); ++s)
        for (const auto& x : a.algebra().basis())
            if ((a.apply(s, x) - b.apply(s, x)).frobenius() > tol * std::max(1.0, x.frobenius())) return false;
    return true;
}

}  // namespace corrkit
