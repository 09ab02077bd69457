#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/module.hpp"

namespace corrkit {

/// Linear map between algebras, stored by images of the domain basis.
struct AlgebraMap {
    FDAlgebra domain;
    FDAlgebra codomain;
    std::vector<AlgElement> images;

    [[nodiscard]] AlgElement apply(const AlgElement& a) const {
        const Vec c = domain.coords(a);
        AlgElement out = codomain.zero();
        for (int k = 0; k < domain.dim(); ++k)
            if (c(k) != cplx(0.0, 0.0)) out += c(k) * images[static_cast<size_t>(k)];
        return out;
    }

    [[nodiscard]] static AlgebraMap identity_map(const FDAlgebra& a) { return {a, a, a.basis()}; }
};

inline CheckReport verify_algebra_isomorphism(const AlgebraMap& f, double tol = kDefaultTol) {
    CheckReport report;
    report.name = "algebra_isomorphism";
    report.tolerance = tol;
    const auto& dom = f.domain;
    const auto& cod = f.codomain;
    report.require("map defined on the whole basis", static_cast<int>(f.images.size()) == dom.dim());
    if (!report.passed) return report;
    report.require("dimensions match", dom.dim() == cod.dim());
    Mat cols(cod.zero().vec().size(), dom.dim());
    for (int k = 0; k < dom.dim(); ++k) {
        cols.col(k) = f.images[static_cast<size_t>(k)].vec();
        report.check("image lands in the codomain span", cod.span_residual(f.images[static_cast<size_t>(k)]),
                     "basis " + std::to_string(k));
    }
    report.require("bijective: images span the codomain", span_rank(cols, tol) == cod.dim());
    for (int k = 0; k < dom.dim(); ++k)
        for (int l = 0; l < dom.dim(); ++l)
            report.check("multiplicative: f(ab) = f(a)f(b)",
                         (f.apply(dom.basis()[static_cast<size_t>(k)] * dom.basis()[static_cast<size_t>(l)]) -
                          f.images[static_cast<size_t>(k)] * f.images[static_cast<size_t>(l)])
                             .frobenius(),
                         "pair (" + std::to_string(k) + "," + std::to_string(l) + ")");
    for (int k = 0; k < dom.dim(); ++k)
        report.check("star: f(a*) = f(a)*",
                     (f.apply(dom.basis()[static_cast<size_t>(k)].adjoint()) -
                      f.images[static_cast<size_t>(k)].adjoint())
                         .frobenius(),
                     "basis " + std::to_string(k));
    report.check("unital: f(1) = 1", (f.apply(dom.one()) - cod.one()).frobenius());
    return report;
}

/// Certificate for an isomorphism of correspondences built from generator
/// data: maps f_A, f_B between the algebras and a pairing of module
/// generators. The linear extension Phi is solved for and every structure
/// identity is then re-checked on a full basis.
struct CorrespondenceIsomorphism {
    Mat phi;             // module map X -> Y on coordinates
    CheckReport report;
};

inline CorrespondenceIsomorphism verify_correspondence_isomorphism(
    const Correspondence& x, const Correspondence& y, const AlgebraMap& fa, const AlgebraMap& fb,
    const std::vector<std::pair<Vec, Vec>>& generator_pairs, double tol = kDefaultTol) {
    CorrespondenceIsomorphism out;
    CheckReport& report = out.report;
    report.name = "correspondence_isomorphism";
    report.tolerance = tol;
    report.absorb(verify_algebra_isomorphism(fa, tol));
    report.absorb(verify_algebra_isomorphism(fb, tol));
    report.require("dimensions match", x.dim() == y.dim());
    if (x.dim() != y.dim()) return out;
    const int d = x.dim();

    Mat sx(d, static_cast<Eigen::Index>(generator_pairs.size()));
    Mat sy(d, static_cast<Eigen::Index>(generator_pairs.size()));
    for (size_t i = 0; i < generator_pairs.size(); ++i) {
        sx.col(static_cast<Eigen::Index>(i)) = generator_pairs[i].first;
        sy.col(static_cast<Eigen::Index>(i)) = generator_pairs[i].second;
    }
    report.require("generators span the domain module", span_rank(sx, tol) == d,
                   "rank " + std::to_string(span_rank(sx, tol)) + " of " + std::to_string(d));

    // Well-definedness of the linear extension: every linear relation among
    // the domain generators must hold among their images.
    Mat stacked(2 * d, sx.cols());
    stacked.topRows(d) = sx;
    stacked.bottomRows(d) = sy;
    report.require("linear extension well defined", span_rank(stacked, tol) == span_rank(sx, tol));
    if (!report.passed) return out;

    Eigen::CompleteOrthogonalDecomposition<Mat> cod(sx);
    out.phi = sy * cod.pseudoInverse();
    report.check("extension interpolates the generators", (out.phi * sx - sy).norm() / std::max(1.0, sy.norm()));
    report.require("bijective on modules", span_rank(out.phi, tol) == d);

    // Structure identities on a full coordinate basis.
    for (int i = 0; i < d; ++i) {
        Vec ei = Vec::Zero(d);
        ei(i) = 1.0;
        for (int j = 0; j < d; ++j) {
            Vec ej = Vec::Zero(d);
            ej(j) = 1.0;
            report.check("inner products: <Phi x, Phi y> = f_B<x, y>",
                         (y.module().inner(out.phi * ei, out.phi * ej) - fb.apply(x.module().inner(ei, ej)))
                             .frobenius(),
                         "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        for (int k = 0; k < x.algebra().dim(); ++k) {
            const AlgElement& bk = x.algebra().basis()[static_cast<size_t>(k)];
            report.check("right action: Phi(x.b) = Phi(x).f_B(b)",
                         (out.phi * x.module().right_apply(ei, bk) -
                          y.module().right_apply(out.phi * ei, fb.apply(bk)))
                             .norm(),
                         "b basis " + std::to_string(k));
        }
        for (int k = 0; k < x.left_algebra().dim(); ++k) {
            const AlgElement& ak = x.left_algebra().basis()[static_cast<size_t>(k)];
            report.check("left action: Phi(a.x) = f_A(a).Phi(x)",
                         (out.phi * x.left_apply(ak, ei) - y.left_apply(fa.apply(ak), out.phi * ei)).norm(),
                         "a basis " + std::to_string(k));
        }
    }
    return out;
}

}  // namespace corrkit
