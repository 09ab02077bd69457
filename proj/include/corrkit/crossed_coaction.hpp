#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/common.hpp"
#include "corrkit/grading.hpp"
#include "corrkit/group_algebra.hpp"
#include "corrkit/isom.hpp"
#include "corrkit/module.hpp"
#include "corrkit/twisted_algebra.hpp"
#include "corrkit/twisted_correspondence.hpp"

namespace corrkit {

/// Crossed product of a G-graded algebra B by the dual coaction, modeled
/// concretely on B_amb (x) M_|G| by
///     j_B(b_s) = b_s (x) lambda(s),   j_G(f) = 1 (x) m(f),
/// with lambda the left regular representation and m(f) the multiplication
/// operator. Writing b (x) f for j_B(b) j_G(f), the defining relations read
///     (b (x) f)(b'_t (x) g) = b b'_t (x) lambda_{t^-1}(f) g,
///     (b_s (x) f)^*        = b_s^* (x) lambda_s(conj f),
/// where (lambda_t f)(chi_{t j}) = f(chi_j) is translation of functions.
class CoactionCrossed {
public:
    CoactionCrossed() = default;

    explicit CoactionCrossed(AlgGrading grading, double tol = kDefaultTol) : grading_(std::move(grading)) {
        const FiniteGroup& g = grading_.group();
        const FDAlgebra& b = grading_.algebra();
        auto hb = grading_.homogeneous_basis();
        if (static_cast<int>(hb.size()) != b.dim())
            throw std::invalid_argument("CoactionCrossed: grading components do not form a basis");
        for (auto& [elem, deg] : hb) {
            homog_.push_back(elem);
            hdeg_.push_back(deg);
        }
        std::vector<int> dims;
        dims.reserve(b.block_dims().size());
        for (int n : b.block_dims()) dims.push_back(n * g.order());
        std::vector<AlgElement> basis;
        basis.reserve(homog_.size() * static_cast<size_t>(g.order()));
        for (size_t i = 0; i < homog_.size(); ++i)
            for (int w = 0; w < g.order(); ++w) basis.push_back(j_b(homog_[i]) * j_g(chi(w)));
        algebra_ = FDAlgebra(std::move(dims), std::move(basis), b.name() + " x| G^", tol);
    }

    [[nodiscard]] const AlgGrading& grading() const { return grading_; }
    [[nodiscard]] const FiniteGroup& group() const { return grading_.group(); }
    [[nodiscard]] const FDAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] const std::vector<AlgElement>& homogeneous_basis() const { return homog_; }
    [[nodiscard]] int homogeneous_degree(int i) const { return hdeg_[static_cast<size_t>(i)]; }
    [[nodiscard]] const AlgElement& basis_element(int i, int w) const {
        return algebra_.basis()[static_cast<size_t>(i) * static_cast<size_t>(group().order()) + static_cast<size_t>(w)];
    }

    /// Indicator function of the group element w.
    [[nodiscard]] Vec chi(int w) const {
        Vec f = Vec::Zero(group().order());
        f(w) = 1.0;
        return f;
    }

    /// Translation of functions: (lambda_t f)(t j) = f(j).
    [[nodiscard]] Vec translate(int t, const Vec& f) const {
        const FiniteGroup& g = group();
        Vec out = Vec::Zero(g.order());
        for (int j = 0; j < g.order(); ++j) out(g.mul(t, j)) = f(j);
        return out;
    }

    [[nodiscard]] AlgElement j_b(const AlgElement& b) const {
        const FiniteGroup& g = group();
        auto dec = grading_.homogeneous_decomposition(b);
        AlgElement out = ambient_zero();
        for (int s = 0; s < g.order(); ++s) {
            const Mat l = left_regular(g, s);
            for (size_t blk = 0; blk < out.blocks.size(); ++blk)
                out.blocks[blk] += kron(dec.parts[static_cast<size_t>(s)].blocks[blk], l);
        }
        return out;
    }

    [[nodiscard]] AlgElement j_g(const Vec& f) const {
        AlgElement out = ambient_zero();
        const Mat m = Mat(f.asDiagonal());
        for (size_t blk = 0; blk < out.blocks.size(); ++blk) {
            const int n = grading_.algebra().block_dims()[blk];
            out.blocks[blk] = kron(Mat::Identity(n, n), m);
        }
        return out;
    }

    [[nodiscard]] AlgElement elementary(const AlgElement& b, const Vec& f) const { return j_b(b) * j_g(f); }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "coaction_crossed";
        report.tolerance = tol;
        report.absorb(verify_grading(grading_, tol));
        const FiniteGroup& g = grading_.group();
        const FDAlgebra& b = grading_.algebra();

        for (int i = 0; i < b.dim(); ++i) {
            const AlgElement& bi = b.basis()[static_cast<size_t>(i)];
            report.check("j_B star: j_B(b*) = j_B(b)*", (j_b(bi.adjoint()) - j_b(bi).adjoint()).frobenius(),
                         "basis " + std::to_string(i));
            for (int k = 0; k < b.dim(); ++k)
                report.check("j_B multiplicative: j_B(b)j_B(b') = j_B(bb')",
                             (j_b(bi) * j_b(b.basis()[static_cast<size_t>(k)]) -
                              j_b(bi * b.basis()[static_cast<size_t>(k)]))
                                 .frobenius(),
                             "pair (" + std::to_string(i) + "," + std::to_string(k) + ")");
        }
        report.check("j_B unital", (j_b(b.one()) - algebra_.one()).frobenius());
        for (int v = 0; v < g.order(); ++v) {
            report.check("j_G star: j_G(conj f) = j_G(f)*", (j_g(chi(v)) - j_g(chi(v)).adjoint()).frobenius(),
                         "chi_" + g.label(v));
            for (int w = 0; w < g.order(); ++w) {
                const double expect = v == w ? 1.0 : 0.0;
                report.check("j_G multiplicative on indicators",
                             (j_g(chi(v)) * j_g(chi(w)) - j_g(chi(v) * expect)).frobenius(),
                             "pair (" + g.label(v) + "," + g.label(w) + ")");
            }
        }
        report.check("j_G unital", (j_g(Vec::Ones(g.order())) - algebra_.one()).frobenius());

        // Covariance: j_G(f) j_B(b_t) = j_B(b_t) j_G(lambda_{t^-1} f).
        for (size_t i = 0; i < homog_.size(); ++i) {
            const int t = hdeg_[i];
            for (int w = 0; w < g.order(); ++w)
                report.check("covariance: j_G(f) j_B(b_t) = j_B(b_t) j_G(lambda_{t^-1} f)",
                             (j_g(chi(w)) * j_b(homog_[i]) - j_b(homog_[i]) * j_g(translate(g.inv(t), chi(w))))
                                 .frobenius(),
                             "b index " + std::to_string(i) + ", chi_" + g.label(w));
        }

        // Displayed product and star formulas on the spanning elements.
        for (size_t i = 0; i < homog_.size(); ++i)
            for (int v = 0; v < g.order(); ++v) {
                const AlgElement lhs_star = elementary(homog_[i], chi(v)).adjoint();
                report.check("star formula: (b_s (x) f)* = b_s* (x) lambda_s(conj f)",
                             (lhs_star - elementary(homog_[i].adjoint(), translate(hdeg_[i], chi(v)))).frobenius(),
                             "b index " + std::to_string(i) + ", chi_" + g.label(v));
                for (size_t k = 0; k < homog_.size(); ++k)
                    for (int w = 0; w < g.order(); ++w) {
                        const int t = hdeg_[k];
                        const Vec mid = translate(g.inv(t), chi(v)).cwiseProduct(chi(w));
                        report.check("product formula: (b (x) f)(b'_t (x) g) = b b'_t (x) lambda_{t^-1}(f) g",
                                     (elementary(homog_[i], chi(v)) * elementary(homog_[k], chi(w)) -
                                      elementary(homog_[i] * homog_[k], mid))
                                         .frobenius(),
                                     "pair (" + std::to_string(i) + "," + g.label(v) + ")x(" + std::to_string(k) +
                                         "," + g.label(w) + ")");
                    }
            }
        return report;
    }

private:
    [[nodiscard]] AlgElement ambient_zero() const {
        std::vector<Mat> blocks;
        for (int n : grading_.algebra().block_dims()) {
            const int m = n * grading_.group().order();
            blocks.push_back(Mat::Zero(m, m));
        }
        return AlgElement(std::move(blocks));
    }

    AlgGrading grading_;
    std::vector<AlgElement> homog_;
    std::vector<int> hdeg_;
    FDAlgebra algebra_;
};

/// The crossed product of a graded correspondence by the dual coaction,
/// as a correspondence over CoactionCrossed. On the homogeneous module
/// basis eta_q (degree tau_q) and indicators chi_g the structure maps are
///     (y_s (x) f)(b_t (x) g) = y_s b_t (x) lambda_{t^-1}(f) g,
///     <y_s (x) f, y_t (x) g> = <y_s, y_t> (x) lambda_{t^-1 s}(conj f) g,
///     (b_s (x) f)(y_t (x) g) = b_s y_t (x) lambda_{t^-1}(f) g.
class CoactionCrossedCorrespondence {
public:
    CoactionCrossedCorrespondence() = default;

    CoactionCrossedCorrespondence(CoactionCrossed crossed, CorrGrading ygrad, double tol = kDefaultTol)
        : crossed_(std::move(crossed)), ygrad_(std::move(ygrad)) {
        const FiniteGroup& g = crossed_.group();
        const int n = g.order();
        const Correspondence& y = ygrad_.correspondence();
        const int dy = y.dim();

        auto hb = ygrad_.homogeneous_basis();
        if (static_cast<int>(hb.size()) != dy)
            throw std::invalid_argument("CoactionCrossedCorrespondence: module grading components do not form a basis");
        hm_ = Mat::Zero(dy, dy);
        for (int q = 0; q < dy; ++q) {
            hm_.col(q) = hb[static_cast<size_t>(q)].first;
            mdeg_.push_back(hb[static_cast<size_t>(q)].second);
        }
        hminv_ = hm_.inverse();

        const FDAlgebra& p = crossed_.algebra();
        const int d = dy * n;

        std::vector<std::vector<AlgElement>> gram(static_cast<size_t>(d),
                                                  std::vector<AlgElement>(static_cast<size_t>(d), p.zero()));
        for (int q = 0; q < dy; ++q)
            for (int gg = 0; gg < n; ++gg)
                for (int l = 0; l < dy; ++l) {
                    const AlgElement yin = y.module().inner(hm_.col(q), hm_.col(l));
                    const int h = g.mul(g.mul(g.inv(mdeg_[static_cast<size_t>(l)]), mdeg_[static_cast<size_t>(q)]),
                                        gg);
                    gram[static_cast<size_t>(q * n + gg)][static_cast<size_t>(l * n + h)] =
                        crossed_.elementary(yin, crossed_.chi(h));
                }

        std::vector<Mat> right;
        std::vector<Mat> left;
        const int db = crossed_.grading().algebra().dim();
        for (int i = 0; i < db; ++i) {
            const AlgElement& bi = crossed_.homogeneous_basis()[static_cast<size_t>(i)];
            const int si = crossed_.homogeneous_degree(i);
            const Mat ry = hminv_ * y.module().right_matrix(bi) * hm_;
            const Mat ly = hminv_ * y.left_matrix(bi) * hm_;
            for (int w = 0; w < n; ++w) {
                Mat ew = Mat::Zero(n, n);
                ew(w, g.mul(si, w)) = 1.0;
                right.push_back(kron(ry, ew));
                Mat lm = Mat::Zero(d, d);
                for (int q = 0; q < dy; ++q) {
                    Mat eqq = Mat::Zero(dy, dy);
                    eqq(q, q) = 1.0;
                    Mat evv = Mat::Zero(n, n);
                    const int v = g.mul(g.inv(mdeg_[static_cast<size_t>(q)]), w);
                    evv(v, v) = 1.0;
                    lm += kron(ly * eqq, evv);
                }
                left.push_back(std::move(lm));
            }
        }
        corr_ = Correspondence(p, HilbertModule(p, std::move(gram), std::move(right)), std::move(left));
    }

    [[nodiscard]] const CoactionCrossed& crossed() const { return crossed_; }
    [[nodiscard]] const CorrGrading& y_grading() const { return ygrad_; }
    [[nodiscard]] const Correspondence& correspondence() const { return corr_; }
    [[nodiscard]] const std::vector<int>& y_degrees() const { return mdeg_; }

    /// Coordinates of y (x) f in the crossed module.
    [[nodiscard]] Vec elementary(const Vec& y, const Vec& f) const { return kron(hminv_ * y, f); }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "coaction_crossed_module";
        report.tolerance = tol;
        report.absorb(ygrad_.verify(tol));
        report.absorb(corr_.validate(tol));
        if (!report.passed) return report;

        const FiniteGroup& g = crossed_.group();
        const int n = g.order();
        const Correspondence& y = ygrad_.correspondence();
        const int dy = y.dim();
        const int db = crossed_.grading().algebra().dim();

        for (int q = 0; q < dy; ++q) {
            const int s = mdeg_[static_cast<size_t>(q)];
            for (int gg = 0; gg < n; ++gg) {
                const Vec e = elementary(hm_.col(q), crossed_.chi(gg));
                for (int i = 0; i < db; ++i) {
                    const AlgElement& bi = crossed_.homogeneous_basis()[static_cast<size_t>(i)];
                    const int t = crossed_.homogeneous_degree(i);
                    for (int w = 0; w < n; ++w) {
                        const Vec mid = crossed_.translate(g.inv(t), crossed_.chi(gg)).cwiseProduct(crossed_.chi(w));
                        report.check("right formula: (y_s (x) f)(b_t (x) g) = y_s b_t (x) lambda_{t^-1}(f) g",
                                     (corr_.module().right_apply(e, crossed_.basis_element(i, w)) -
                                      elementary(y.module().right_apply(hm_.col(q), bi), mid))
                                         .norm(),
                                     "y=" + std::to_string(q) + " f=chi_" + g.label(gg) + " b=" + std::to_string(i) +
                                         " g=chi_" + g.label(w));
                        const Vec mid2 = crossed_.translate(g.inv(s), crossed_.chi(w)).cwiseProduct(crossed_.chi(gg));
                        report.check("left formula: (b_s (x) f)(y_t (x) g) = b_s y_t (x) lambda_{t^-1}(f) g",
                                     (corr_.left_apply(crossed_.basis_element(i, w), e) -
                                      elementary(y.left_apply(bi, hm_.col(q)), mid2))
                                         .norm(),
                                     "b=" + std::to_string(i) + " f=chi_" + g.label(w) + " y=" + std::to_string(q) +
                                         " g=chi_" + g.label(gg));
                    }
                }
                for (int l = 0; l < dy; ++l) {
                    const int t = mdeg_[static_cast<size_t>(l)];
                    for (int h = 0; h < n; ++h) {
                        const Vec f2 = elementary(hm_.col(l), crossed_.chi(h));
                        const Vec mid =
                            crossed_.translate(g.mul(g.inv(t), s), crossed_.chi(gg)).cwiseProduct(crossed_.chi(h));
                        report.check(
                            "inner formula: <y_s (x) f, y_t (x) g> = <y_s,y_t> (x) lambda_{t^-1 s}(conj f) g",
                            (corr_.module().inner(e, f2) -
                             crossed_.elementary(y.module().inner(hm_.col(q), hm_.col(l)), mid))
                                .frobenius(),
                            "pair (" + std::to_string(q) + ",chi_" + g.label(gg) + ")x(" + std::to_string(l) +
                                ",chi_" + g.label(h) + ")");
                    }
                }
            }
        }

        const auto cy = compacts_span(y.module());
        const auto cp = compacts_span(corr_.module());
        report.require("compacts dimension: dim K(Y x| G^) = |G| dim K(Y)",
                       cp.solver.rank(tol) == n * cy.solver.rank(tol),
                       "got " + std::to_string(cp.solver.rank(tol)) + ", factor " +
                           std::to_string(cy.solver.rank(tol)));
        return report;
    }

private:
    CoactionCrossed crossed_;
    CorrGrading ygrad_;
    Mat hm_;
    Mat hminv_;
    std::vector<int> mdeg_;
    Correspondence corr_;
};

/// Both models of the coaction crossed product together with the certified
/// identification between them:
///     Phi(b_s (x) f) = lambda_s(f) (x) b_s,   Psi(y_s (x) f) = lambda_s(f) (x) y_s,
/// mapping the two-leg model onto the twisted product of the translation
/// correspondence on c0(G) with the graded correspondence.
struct CoactionModel {
    CoactionCrossed algebra_model;
    CoactionCrossedCorrespondence module_model;
    TwistedAlgebra twisted;
    TwistedCorrespondence twisted_module;
    AlgebraMap phi;
    CorrespondenceIsomorphism psi;
};

inline CoactionModel crossed_by_coaction(const CorrGrading& ygrad, double tol = kDefaultTol) {
    CoactionModel out;
    const AlgGrading& grading = ygrad.coefficient_grading();
    const FiniteGroup& g = grading.group();
    const int n = g.order();
    out.algebra_model = CoactionCrossed(grading, tol);
    out.module_model = CoactionCrossedCorrespondence(out.algebra_model, ygrad, tol);

    FunctionAlgebra fa = function_algebra(g);
    out.twisted = TwistedAlgebra(fa.translation, grading, tol);
    out.twisted_module = TwistedCorrespondence(out.twisted, standard_corr_action(fa.translation), ygrad, tol);

    out.phi.domain = out.algebra_model.algebra();
    out.phi.codomain = out.twisted.algebra();
    const int db = grading.algebra().dim();
    for (int i = 0; i < db; ++i) {
        const AlgElement& bi = out.algebra_model.homogeneous_basis()[static_cast<size_t>(i)];
        const int si = out.algebra_model.homogeneous_degree(i);
        for (int w = 0; w < n; ++w)
            out.phi.images.push_back(
                out.twisted.elementary(fa.chi[static_cast<size_t>(g.mul(si, w))], bi));
    }

    std::vector<std::pair<Vec, Vec>> pairs;
    const int dy = ygrad.correspondence().dim();
    const auto& ydeg = out.module_model.y_degrees();
    Mat hm = Mat::Zero(dy, dy);
    {
        auto hb = ygrad.homogeneous_basis();
        for (int q = 0; q < dy; ++q) hm.col(q) = hb[static_cast<size_t>(q)].first;
    }
    for (int q = 0; q < dy; ++q)
        for (int w = 0; w < n; ++w) {
            Vec xu = Vec::Zero(n);
            xu(g.mul(ydeg[static_cast<size_t>(q)], w)) = 1.0;
            pairs.emplace_back(out.module_model.elementary(hm.col(q), out.algebra_model.chi(w)),
                               out.twisted_module.elementary(xu, hm.col(q)));
        }
    out.psi = verify_correspondence_isomorphism(out.module_model.correspondence(),
                                                out.twisted_module.correspondence(), out.phi, out.phi, pairs, tol);
    return out;
}

}  // namespace corrkit
