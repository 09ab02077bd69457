#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/common.hpp"
#include "corrkit/group_algebra.hpp"
#include "corrkit/module.hpp"
#include "corrkit/twisted_algebra.hpp"

namespace corrkit {

/// Twisted tensor product of correspondences: (X, gamma) over (A, alpha) and
/// a graded (Y, sigma) over (B, grading), assembled into a correspondence
/// over the twisted product algebra A boxtimes B. On homogeneous tensors the
/// structure maps are
///     (x (x) y_s) . (a (x) b) = x alpha_s(a) (x) y_s b,
///     < x (x) y_s, x' (x) y' > = alpha_{s^-1}(<x, x'>_A) (x) <y_s, y'>_B,
///     (a (x) b_s) . (x (x) y)  = a gamma_s(x) (x) b_s y,
/// extended (sesqui)linearly through the homogeneous module basis of Y.
class TwistedCorrespondence {
public:
    TwistedCorrespondence() = default;

    TwistedCorrespondence(TwistedAlgebra twist, CorrAction xact, CorrGrading ygrad, double tol = kDefaultTol)
        : twist_(std::move(twist)), xact_(std::move(xact)), ygrad_(std::move(ygrad)) {
        const Correspondence& x = xact_.correspondence();
        const Correspondence& y = ygrad_.correspondence();
        const int dx = x.dim();
        const int dy = y.dim();

        auto hb = ygrad_.homogeneous_basis();
        if (static_cast<int>(hb.size()) != dy)
            throw std::invalid_argument("TwistedCorrespondence: module grading components do not form a basis");
        hm_ = Mat::Zero(dy, dy);
        for (int q = 0; q < dy; ++q) {
            hm_.col(q) = hb[static_cast<size_t>(q)].first;
            mdeg_.push_back(hb[static_cast<size_t>(q)].second);
        }
        hminv_ = hm_.inverse();

        const FDAlgebra& p = twist_.algebra();
        const AlgAction& alpha = twist_.action();
        const int d = dx * dy;

        // Gram matrix on the basis x_p (x) eta_q.
        std::vector<std::vector<AlgElement>> gram(static_cast<size_t>(d),
                                                  std::vector<AlgElement>(static_cast<size_t>(d), p.zero()));
        std::vector<std::vector<AlgElement>> xg(static_cast<size_t>(dx),
                                                std::vector<AlgElement>(static_cast<size_t>(dx)));
        for (int pp = 0; pp < dx; ++pp)
            for (int k = 0; k < dx; ++k)
                xg[static_cast<size_t>(pp)][static_cast<size_t>(k)] =
                    x.module().inner(unit_vec(dx, pp), unit_vec(dx, k));
        for (int pp = 0; pp < dx; ++pp)
            for (int q = 0; q < dy; ++q)
                for (int k = 0; k < dx; ++k)
                    for (int l = 0; l < dy; ++l) {
                        const AlgElement yin = y.module().inner(hm_.col(q), hm_.col(l));
                        gram[index(pp, q)][index(k, l)] =
                            twist_.elementary(alpha.apply_inv(mdeg_[static_cast<size_t>(q)],
                                                              xg[static_cast<size_t>(pp)][static_cast<size_t>(k)]),
                                              yin);
                    }

        // Right action of the product basis element a_i (x) beta_j.
        std::vector<Mat> right;
        std::vector<Mat> left;
        const FDAlgebra& a = twist_.left_factor();
        const int db = twist_.right_factor().dim();
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < db; ++j) {
                const AlgElement& ai = a.basis()[static_cast<size_t>(i)];
                const AlgElement& bj = twist_.homogeneous_basis()[static_cast<size_t>(j)];
                const int sj = twist_.homogeneous_degree(j);
                const Mat ry = hminv_ * y.module().right_matrix(bj) * hm_;
                Mat r = Mat::Zero(d, d);
                for (int q = 0; q < dy; ++q) {
                    Mat eqq = Mat::Zero(dy, dy);
                    eqq(q, q) = 1.0;
                    r += kron(x.module().right_matrix(alpha.apply(mdeg_[static_cast<size_t>(q)], ai)), ry * eqq);
                }
                right.push_back(std::move(r));
                const Mat ly = hminv_ * y.left_matrix(bj) * hm_;
                left.push_back(kron(x.left_matrix(ai) * xact_.gamma(sj), ly));
            }

        corr_ = Correspondence(p, HilbertModule(p, std::move(gram), std::move(right)), std::move(left));
    }

    [[nodiscard]] const TwistedAlgebra& twist() const { return twist_; }
    [[nodiscard]] const CorrAction& x_action() const { return xact_; }
    [[nodiscard]] const CorrGrading& y_grading() const { return ygrad_; }
    [[nodiscard]] const Correspondence& correspondence() const { return corr_; }

    /// Coordinates of x (x) y in the product module (y arbitrary).
    [[nodiscard]] Vec elementary(const Vec& x, const Vec& y) const { return kron(x, hminv_ * y); }

    /// Coordinates of a Y vector in the homogeneous module basis.
    [[nodiscard]] Vec y_coords(const Vec& y) const { return hminv_ * y; }

    /// Degrees of the Y-side homogeneous module basis, by position.
    [[nodiscard]] const std::vector<int>& y_degrees() const { return mdeg_; }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "twisted_correspondence";
        report.tolerance = tol;
        report.require("action matches the product twist", same_action(xact_.alpha(), twist_.action(), tol));
        report.require("grading matches the product twist",
                       same_grading(ygrad_.coefficient_grading(), twist_.grading(), tol));
        report.absorb(xact_.verify(tol));
        report.absorb(ygrad_.verify(tol));
        report.absorb(corr_.validate(tol));
        if (!report.passed) return report;

        const Correspondence& x = xact_.correspondence();
        const Correspondence& y = ygrad_.correspondence();
        const AlgAction& alpha = twist_.action();
        const int dx = x.dim();
        const int dy = y.dim();
        const FDAlgebra& a = twist_.left_factor();
        const int db = twist_.right_factor().dim();

        for (int pp = 0; pp < dx; ++pp)
            for (int q = 0; q < dy; ++q) {
                const Vec e = elementary(unit_vec(dx, pp), hm_.col(q));
                const int tq = mdeg_[static_cast<size_t>(q)];
                for (int i = 0; i < a.dim(); ++i)
                    for (int j = 0; j < db; ++j) {
                        const AlgElement& ai = a.basis()[static_cast<size_t>(i)];
                        const AlgElement& bj = twist_.homogeneous_basis()[static_cast<size_t>(j)];
                        const int sj = twist_.homogeneous_degree(j);
                        report.check(
                            "right formula: (x (x) y_s)(a (x) b) = x alpha_s(a) (x) y_s b",
                            (corr_.module().right_apply(e, twist_.basis_element(i, j)) -
                             elementary(x.module().right_apply(unit_vec(dx, pp), alpha.apply(tq, ai)),
                                        y.module().right_apply(hm_.col(q), bj)))
                                .norm(),
                            "x=" + std::to_string(pp) + " y=" + std::to_string(q) + " a=" + std::to_string(i) +
                                " b=" + std::to_string(j));
                        report.check(
                            "left formula: (a (x) b_s)(x (x) y) = a gamma_s(x) (x) b_s y",
                            (corr_.left_apply(twist_.basis_element(i, j), e) -
                             elementary(x.left_apply(ai, xact_.gamma(sj) * unit_vec(dx, pp)),
                                        y.left_apply(bj, hm_.col(q))))
                                .norm(),
                            "x=" + std::to_string(pp) + " y=" + std::to_string(q) + " a=" + std::to_string(i) +
                                " b=" + std::to_string(j));
                    }
                for (int k = 0; k < dx; ++k)
                    for (int l = 0; l < dy; ++l) {
                        const Vec f = elementary(unit_vec(dx, k), hm_.col(l));
                        report.check(
                            "inner formula: <x (x) y_s, x' (x) y'> = alpha_{s^-1}(<x,x'>) (x) <y_s,y'>",
                            (corr_.module().inner(e, f) -
                             twist_.elementary(
                                 alpha.apply_inv(tq, x.module().inner(unit_vec(dx, pp), unit_vec(dx, k))),
                                 y.module().inner(hm_.col(q), hm_.col(l))))
                                .frobenius(),
                            "pair (" + std::to_string(pp) + "," + std::to_string(q) + ")x(" + std::to_string(k) +
                                "," + std::to_string(l) + ")");
                    }
            }

        // K(X boxtimes Y) has the dimension of K(X) boxtimes K(Y).
        const auto cx = compacts_span(x.module());
        const auto cy = compacts_span(y.module());
        const auto cp = compacts_span(corr_.module());
        report.require("compacts dimension: dim K(X (x) Y) = dim K(X) dim K(Y)",
                       cp.solver.rank(tol) == cx.solver.rank(tol) * cy.solver.rank(tol),
                       "got " + std::to_string(cp.solver.rank(tol)) + ", factors " +
                           std::to_string(cx.solver.rank(tol)) + " and " + std::to_string(cy.solver.rank(tol)));
        return report;
    }

private:
    static Vec unit_vec(int n, int i) {
        Vec v = Vec::Zero(n);
        v(i) = 1.0;
        return v;
    }
    [[nodiscard]] size_t index(int p, int q) const {
        return static_cast<size_t>(p) * static_cast<size_t>(ygrad_.correspondence().dim()) + static_cast<size_t>(q);
    }

    TwistedAlgebra twist_;
    CorrAction xact_;
    CorrGrading ygrad_;
    Mat hm_;
    Mat hminv_;
    std::vector<int> mdeg_;
    Correspondence corr_;
};

/// Generating system for the product from systems for the factors; the
/// report flags hypothesis violations (actions must stabilize the X data,
/// the Y data must be homogeneous).
struct TwistedSystem {
    GeneratingSystem system;
    CheckReport report;
};

inline TwistedSystem twisted_generating_system(const TwistedCorrespondence& tc, const GeneratingSystem& xsys,
                                               const GeneratingSystem& ysys, double tol = kDefaultTol) {
    TwistedSystem out;
    out.report.name = "twisted_generating_system";
    out.report.tolerance = tol;
    const CorrAction& xact = tc.x_action();
    const CorrGrading& ygrad = tc.y_grading();
    const Correspondence& x = xact.correspondence();
    const FiniteGroup& g = xact.group();

    Mat a0(xact.alpha().algebra().zero().vec().size(), static_cast<Eigen::Index>(xsys.a0.size()));
    for (size_t i = 0; i < xsys.a0.size(); ++i) a0.col(static_cast<Eigen::Index>(i)) = xsys.a0[i].vec();
    SpanSolver a0span(a0);
    Mat x0(x.dim(), static_cast<Eigen::Index>(xsys.x0.size()));
    for (size_t i = 0; i < xsys.x0.size(); ++i) x0.col(static_cast<Eigen::Index>(i)) = xsys.x0[i];
    SpanSolver x0span(x0);
    for (int s = 0; s < g.order(); ++s) {
        for (size_t i = 0; i < xsys.a0.size(); ++i)
            out.report.check("A0 stable under the action", a0span.residual(xact.alpha().apply(s, xsys.a0[i]).vec()),
                             "generator " + std::to_string(i) + ", s=" + g.label(s));
        for (size_t i = 0; i < xsys.x0.size(); ++i)
            out.report.check("X0 stable under the action", x0span.residual(xact.gamma(s) * xsys.x0[i]),
                             "generator " + std::to_string(i) + ", s=" + g.label(s));
    }
    for (size_t i = 0; i < ysys.b0.size(); ++i) {
        try {
            (void)ygrad.coefficient_grading().degree_of(ysys.b0[i], tol);
        } catch (const std::invalid_argument&) {
            out.report.require("B0 homogeneous", false, "generator " + std::to_string(i));
        }
    }
    const auto& ydeg = tc.y_degrees();
    for (size_t i = 0; i < ysys.x0.size(); ++i) {
        // Homogeneous iff the coordinates in the homogeneous module basis are
        // supported in a single degree.
        const Vec coords = tc.y_coords(ysys.x0[i]);
        int seen = -1;
        bool homogeneous = true;
        for (Eigen::Index q = 0; q < coords.size(); ++q)
            if (std::abs(coords(q)) > tol * std::max(1.0, ysys.x0[i].norm())) {
                if (seen >= 0 && ydeg[static_cast<size_t>(q)] != seen) homogeneous = false;
                seen = ydeg[static_cast<size_t>(q)];
            }
        out.report.require("Y0 homogeneous", homogeneous, "generator " + std::to_string(i));
    }
    if (!out.report.passed) return out;

    const TwistedAlgebra& tw = tc.twist();
    for (const auto& a : xsys.a0) {
        out.system.a0.push_back(tw.embed_left(a));
        out.system.b0.push_back(tw.embed_left(a));
    }
    for (const auto& b : ysys.b0) {
        out.system.a0.push_back(tw.embed_right(b));
        out.system.b0.push_back(tw.embed_right(b));
    }
    for (const auto& xv : xsys.x0)
        for (const auto& yv : ysys.x0) out.system.x0.push_back(tc.elementary(xv, yv));
    return out;
}

/// The crossed product by a group action, as the twisted product with the
/// group algebra: X x| G = X boxtimes C*(G).
struct ActionCrossed {
    GroupAlgebra group_alg;
    TwistedAlgebra algebra;           // A boxtimes C*(G)
    TwistedCorrespondence module;     // X boxtimes C*(G)
};

inline ActionCrossed crossed_by_action(const CorrAction& act, double tol = kDefaultTol) {
    ActionCrossed out;
    out.group_alg = group_algebra(act.group());
    out.algebra = TwistedAlgebra(act.alpha(), out.group_alg.grading, tol);
    Correspondence ycorr = algebra_as_correspondence(out.group_alg.algebra);
    std::vector<std::vector<Vec>> comps(static_cast<size_t>(act.group().order()));
    for (int s = 0; s < act.group().order(); ++s)
        comps[static_cast<size_t>(s)].push_back(out.group_alg.algebra.coords(out.group_alg.u[static_cast<size_t>(s)]));
    CorrGrading ygrad(act.group(), ycorr, std::move(comps), out.group_alg.grading);
    out.module = TwistedCorrespondence(out.algebra, act, ygrad, tol);
    return out;
}

/// The three crossed-product identities on generators x (x) u_s:
///   (x (x) u_s)(a (x) u_t) = x alpha_s(a) (x) u_st
///   <x (x) u_s, y (x) u_t> = alpha_{s^-1}(<x, y>) (x) u_{s^-1 t}
///   (a (x) u_s)(x (x) u_t) = a gamma_s(x) (x) u_st
inline CheckReport verify_action_crossed_identities(const ActionCrossed& ac, double tol = kDefaultTol) {
    CheckReport report;
    report.name = "action_crossed_identities";
    report.tolerance = tol;
    const CorrAction& act = ac.module.x_action();
    const Correspondence& x = act.correspondence();
    const FiniteGroup& g = act.group();
    const FDAlgebra& a = act.alpha().algebra();
    const Correspondence& prod = ac.module.correspondence();
    auto ucoords = [&](int s) { return ac.group_alg.algebra.coords(ac.group_alg.u[static_cast<size_t>(s)]); };

    for (int p = 0; p < x.dim(); ++p) {
        Vec ep = Vec::Zero(x.dim());
        ep(p) = 1.0;
        for (int s = 0; s < g.order(); ++s) {
            const Vec xs = ac.module.elementary(ep, ucoords(s));
            for (int t = 0; t < g.order(); ++t) {
                for (int k = 0; k < a.dim(); ++k) {
                    const AlgElement& ak = a.basis()[static_cast<size_t>(k)];
                    const AlgElement gen = ac.algebra.elementary(ak, ac.group_alg.u[static_cast<size_t>(t)]);
                    report.check("right rule: (x u_s)(a u_t) = x alpha_s(a) u_st",
                                 (prod.module().right_apply(xs, gen) -
                                  ac.module.elementary(x.module().right_apply(ep, act.alpha().apply(s, ak)),
                                                       ucoords(g.mul(s, t))))
                                     .norm(),
                                 "s=" + g.label(s) + " t=" + g.label(t) + " a=" + std::to_string(k));
                    report.check("left rule: (a u_s)(x u_t) = a gamma_s(x) u_st",
                                 (prod.left_apply(ac.algebra.elementary(ak, ac.group_alg.u[static_cast<size_t>(s)]),
                                                  ac.module.elementary(ep, ucoords(t))) -
                                  ac.module.elementary(x.left_apply(ak, act.gamma(s) * ep), ucoords(g.mul(s, t))))
                                     .norm(),
                                 "s=" + g.label(s) + " t=" + g.label(t) + " a=" + std::to_string(k));
                }
                for (int q = 0; q < x.dim(); ++q) {
                    Vec eq = Vec::Zero(x.dim());
                    eq(q) = 1.0;
                    const Vec yt = ac.module.elementary(eq, ucoords(t));
                    report.check(
                        "inner rule: <x u_s, y u_t> = alpha_{s^-1}(<x,y>) u_{s^-1 t}",
                        (prod.module().inner(xs, yt) -
                         ac.algebra.elementary(act.alpha().apply_inv(s, x.module().inner(ep, eq)),
                                               ac.group_alg.u[static_cast<size_t>(g.mul(g.inv(s), t))]))
                            .frobenius(),
                        "s=" + g.label(s) + " t=" + g.label(t) + " pair (" + std::to_string(p) + "," +
                            std::to_string(q) + ")");
                }
            }
        }
    }
    return report;
}

}  // namespace corrkit
