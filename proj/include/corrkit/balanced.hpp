#pragma once

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/twisted_algebra.hpp"

namespace corrkit {

/// A finitely supported grading of an algebra by the dual of a compact
/// abelian group Z. Degrees are integers; `modulus` m > 0 means the dual is
/// Z/m (so Z = Z/m), while m = 0 means the dual is Z itself (so Z is the
/// circle and the grading is by integer winding degrees).
class DualGrading {
public:
    DualGrading() = default;

    DualGrading(FDAlgebra algebra, std::vector<std::pair<int, std::vector<AlgElement>>> components, int modulus = 0)
        : algebra_(std::move(algebra)), modulus_(modulus) {
        if (modulus_ < 0) throw std::invalid_argument("DualGrading: modulus must be nonnegative");
        for (auto& [deg, elems] : components) {
            auto& slot = components_[normalize(deg)];
            for (auto& e : elems) slot.push_back(std::move(e));
        }
        for (const auto& [deg, elems] : components_) {
            Mat m(algebra_.zero().vec().size(), static_cast<Eigen::Index>(elems.size()));
            for (size_t i = 0; i < elems.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = elems[i].vec();
            solvers_.emplace(deg, SpanSolver(m));
        }
    }

    [[nodiscard]] const FDAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] int modulus() const { return modulus_; }

    [[nodiscard]] int normalize(int d) const { return modulus_ > 0 ? ((d % modulus_) + modulus_) % modulus_ : d; }

    [[nodiscard]] std::vector<int> support() const {
        std::vector<int> out;
        for (const auto& [deg, elems] : components_)
            if (!elems.empty()) out.push_back(deg);
        return out;
    }

    [[nodiscard]] const std::vector<AlgElement>& component(int deg) const {
        static const std::vector<AlgElement> empty;
        auto it = components_.find(normalize(deg));
        return it == components_.end() ? empty : it->second;
    }

    /// All component elements with their degrees, in increasing degree order.
    [[nodiscard]] std::vector<std::pair<AlgElement, int>> homogeneous_basis() const {
        std::vector<std::pair<AlgElement, int>> out;
        for (const auto& [deg, elems] : components_)
            for (const auto& e : elems) out.emplace_back(e, deg);
        return out;
    }

    /// Degree of a homogeneous element; throws if the element is not
    /// homogeneous or not in the graded span.
    [[nodiscard]] int degree_of(const AlgElement& a, double tol = kDefaultTol) const {
        const double scale = std::max(1.0, a.frobenius());
        int found = 0;
        bool any = false;
        for (const auto& [deg, solver] : solvers_) {
            if (solver.dimension() == 0) continue;
            if (solver.residual(a.vec()) <= tol * scale) {
                if (any) throw std::invalid_argument("DualGrading: degree ambiguous");
                found = deg;
                any = true;
            }
        }
        if (!any) throw std::invalid_argument("DualGrading: element not homogeneous for the dual grading");
        return found;
    }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "dual_grading";
        report.tolerance = tol;
        auto hb = homogeneous_basis();
        Mat all(algebra_.zero().vec().size(), static_cast<Eigen::Index>(hb.size()));
        for (size_t i = 0; i < hb.size(); ++i) all.col(static_cast<Eigen::Index>(i)) = hb[i].first.vec();
        report.require("homogeneous elements linearly independent",
                       span_rank(all, tol) == static_cast<int>(hb.size()));
        report.require("homogeneous elements span the algebra", static_cast<int>(hb.size()) == algebra_.dim() &&
                                                                    span_rank(all, tol) == algebra_.dim());
        report.check("unit has degree zero",
                     components_.count(0) != 0 && !components_.at(0).empty()
                         ? solvers_.at(0).residual(algebra_.one().vec())
                         : algebra_.one().frobenius());
        for (const auto& [ep, p] : hb) {
            const AlgElement star = ep.adjoint();
            const auto it = solvers_.find(normalize(-p));
            report.check("star rule: A_p* inside A_{-p}",
                         it != solvers_.end() && it->second.dimension() > 0 ? it->second.residual(star.vec())
                                                                            : star.frobenius(),
                         "degree " + std::to_string(p));
            for (const auto& [eq, q] : hb) {
                const AlgElement prod = ep * eq;
                const auto jt = solvers_.find(normalize(p + q));
                report.check("product rule: A_p A_q inside A_{p+q}",
                             jt != solvers_.end() && jt->second.dimension() > 0 ? jt->second.residual(prod.vec())
                                                                                : prod.frobenius(),
                             "degrees " + std::to_string(p) + " + " + std::to_string(q));
            }
        }
        return report;
    }

private:
    FDAlgebra algebra_;
    int modulus_ = 0;
    std::map<int, std::vector<AlgElement>> components_;
    std::map<int, SpanSolver> solvers_;
};

/// The Z-balanced part of a twisted product whose factors carry finitely
/// supported dual gradings. Elementary basis vectors a_i boxtimes beta_j get
/// a bidegree (p_i, q_j); lambda_z scales such a vector by z^{p_i - q_j},
/// the conditional expectation keeps the matched part p_i = q_j (mod m), and
/// the balanced subalgebra is the span of the matched vectors.
///
/// The designated basis of the left factor and the homogeneous basis of the
/// right factor must each be homogeneous for their dual gradings (construct
/// the factor on a homogeneous spanning basis if needed); the constructor
/// throws otherwise.
class BalancedAlgebra {
public:
    BalancedAlgebra() = default;

    BalancedAlgebra(TwistedAlgebra twisted, DualGrading left, DualGrading right, double tol = kDefaultTol)
        : twisted_(std::move(twisted)), left_(std::move(left)), right_(std::move(right)) {
        if (left_.modulus() != right_.modulus())
            throw std::invalid_argument("BalancedAlgebra: factor gradings over different dual groups");
        const FDAlgebra& a = twisted_.left_factor();
        for (int i = 0; i < a.dim(); ++i) adeg_.push_back(left_.degree_of(a.basis()[static_cast<size_t>(i)], tol));
        const int db = twisted_.right_factor().dim();
        for (int j = 0; j < db; ++j)
            bdeg_.push_back(right_.degree_of(twisted_.homogeneous_basis()[static_cast<size_t>(j)], tol));
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < db; ++j)
                if (matched(i, j)) matched_pairs_.emplace_back(i, j);
    }

    [[nodiscard]] const TwistedAlgebra& twisted() const { return twisted_; }
    [[nodiscard]] const DualGrading& left_grading() const { return left_; }
    [[nodiscard]] const DualGrading& right_grading() const { return right_; }
    [[nodiscard]] int modulus() const { return left_.modulus(); }
    [[nodiscard]] int left_degree(int i) const { return adeg_[static_cast<size_t>(i)]; }
    [[nodiscard]] int right_degree(int j) const { return bdeg_[static_cast<size_t>(j)]; }

    [[nodiscard]] bool matched(int i, int j) const {
        const int e = adeg_[static_cast<size_t>(i)] - bdeg_[static_cast<size_t>(j)];
        return modulus() > 0 ? left_.normalize(e) == 0 : e == 0;
    }

    [[nodiscard]] const std::vector<std::pair<int, int>>& matched_pairs() const { return matched_pairs_; }

    /// Basis of the balanced subalgebra span{S_chi} as product elements.
    [[nodiscard]] std::vector<AlgElement> basis() const {
        std::vector<AlgElement> out;
        out.reserve(matched_pairs_.size());
        for (auto [i, j] : matched_pairs_) out.push_back(twisted_.basis_element(i, j));
        return out;
    }

    /// Basis of S_chi (matched vectors of left degree chi).
    [[nodiscard]] std::vector<AlgElement> s_component(int chi) const {
        std::vector<AlgElement> out;
        for (auto [i, j] : matched_pairs_)
            if (left_.normalize(adeg_[static_cast<size_t>(i)]) == left_.normalize(chi))
                out.push_back(twisted_.basis_element(i, j));
        return out;
    }

    /// Degrees chi with S_chi nonzero, increasing.
    [[nodiscard]] std::vector<int> s_support() const {
        std::map<int, int> seen;
        for (auto [i, j] : matched_pairs_) seen[left_.normalize(adeg_[static_cast<size_t>(i)])]++;
        std::vector<int> out;
        for (const auto& [deg, n] : seen) out.push_back(deg);
        return out;
    }

    /// lambda at the root of unity z = exp(2 pi i k / n), on abstract
    /// coordinates: the (i, j) coordinate scales by z^{p_i - q_j}.
    [[nodiscard]] Vec lambda_coords(int k, int n, const Vec& u) const {
        const int db = twisted_.right_factor().dim();
        Vec out = u;
        for (int i = 0; i < twisted_.left_factor().dim(); ++i)
            for (int j = 0; j < db; ++j) {
                const int e = adeg_[static_cast<size_t>(i)] - bdeg_[static_cast<size_t>(j)];
                const double angle = 2.0 * EIGEN_PI * static_cast<double>(k) * static_cast<double>(e) /
                                     static_cast<double>(n);
                out(i * db + j) *= cplx(std::cos(angle), std::sin(angle));
            }
        return out;
    }

    /// lambda as a map on product elements. For finite Z pass z in Z/m and
    /// n = modulus; for the circle pass any root of unity k / n.
    [[nodiscard]] AlgElement lambda(int k, int n, const AlgElement& d) const {
        return twisted_.intertwine(lambda_coords(k, n, twisted_.intertwine_inverse(d)));
    }

    /// Number of roots of unity that make the averaged expectation exact.
    [[nodiscard]] int averaging_order() const {
        if (modulus() > 0) return modulus();
        int maxdeg = 0;
        for (int p : adeg_) maxdeg = std::max(maxdeg, std::abs(p));
        for (int q : bdeg_) maxdeg = std::max(maxdeg, std::abs(q));
        return 2 * maxdeg + 1;
    }

    [[nodiscard]] Vec expectation_coords(const Vec& u) const {
        const int db = twisted_.right_factor().dim();
        Vec out = u;
        for (int i = 0; i < twisted_.left_factor().dim(); ++i)
            for (int j = 0; j < db; ++j)
                if (!matched(i, j)) out(i * db + j) = 0.0;
        return out;
    }

    /// Conditional expectation onto the balanced subalgebra (matched part).
    [[nodiscard]] AlgElement conditional_expectation(const AlgElement& d) const {
        return twisted_.intertwine(expectation_coords(twisted_.intertwine_inverse(d)));
    }

    /// Averaging oracle: the finite mean of lambda over enough roots of
    /// unity, which equals the Haar integral for bounded-degree gradings.
    [[nodiscard]] Vec average_coords(const Vec& u) const {
        const int n = averaging_order();
        Vec out = Vec::Zero(u.size());
        for (int k = 0; k < n; ++k) out += lambda_coords(k, n, u);
        return out / static_cast<double>(n);
    }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "balanced_algebra";
        report.tolerance = tol;
        report.absorb(left_.verify(tol));
        report.absorb(right_.verify(tol));

        const FDAlgebra& a = twisted_.left_factor();
        const AlgAction& alpha = twisted_.action();
        // The twisting action must preserve the dual grading of the left
        // factor, otherwise the balanced span is not an algebra.
        for (int s = 0; s < twisted_.group().order(); ++s)
            for (const auto& [h, p] : left_.homogeneous_basis()) {
                const AlgElement moved = alpha.apply(s, h);
                Mat comp(h.vec().size(), static_cast<Eigen::Index>(left_.component(p).size()));
                for (size_t c = 0; c < left_.component(p).size(); ++c)
                    comp.col(static_cast<Eigen::Index>(c)) = left_.component(p)[c].vec();
                report.check("twisting action preserves the dual grading", SpanSolver(comp).residual(moved.vec()),
                             "s index " + std::to_string(s) + ", degree " + std::to_string(p));
            }

        const int d = twisted_.abstract_dim();
        const int n = averaging_order();
        auto unit = [&](int t) {
            Vec v = Vec::Zero(d);
            v(t) = 1.0;
            return v;
        };

        // lambda is a one-parameter group of *-automorphisms.
        std::mt19937 rng(20240915);
        std::normal_distribution<double> dist(0.0, 1.0);
        auto random_coords = [&]() {
            Vec v(d);
            for (int t = 0; t < d; ++t) v(t) = cplx(dist(rng), dist(rng));
            return v;
        };
        for (int k = 0; k < n; ++k) {
            for (int trial = 0; trial < 3; ++trial) {
                const Vec u = random_coords();
                const Vec v = random_coords();
                report.check("lambda multiplicative",
                             (twisted_.abstract_product(lambda_coords(k, n, u), lambda_coords(k, n, v)) -
                              lambda_coords(k, n, twisted_.abstract_product(u, v)))
                                 .norm(),
                             "k=" + std::to_string(k) + "/" + std::to_string(n));
                report.check("lambda star: lambda_z(d*) = lambda_z(d)*",
                             (twisted_.abstract_star(lambda_coords(k, n, u)) -
                              lambda_coords(k, n, twisted_.abstract_star(u)))
                                 .norm(),
                             "k=" + std::to_string(k) + "/" + std::to_string(n));
                for (int k2 = 0; k2 < n; ++k2)
                    if (trial == 0)
                        report.check("lambda composes: lambda_z lambda_w = lambda_zw",
                                     (lambda_coords(k, n, lambda_coords(k2, n, u)) -
                                      lambda_coords((k + k2) % n, n, u))
                                         .norm(),
                                     "k=" + std::to_string(k) + ",k2=" + std::to_string(k2));
            }
            report.check("lambda fixes the unit",
                         (lambda_coords(k, n, twisted_.intertwine_inverse(twisted_.algebra().one())) -
                          twisted_.intertwine_inverse(twisted_.algebra().one()))
                             .norm(),
                         "k=" + std::to_string(k));
        }

        // The projection equals the averaged integral, is idempotent, fixes
        // exactly the matched span, and annihilates the unmatched span.
        for (int t = 0; t < d; ++t) {
            report.check("expectation equals the Haar average",
                         (expectation_coords(unit(t)) - average_coords(unit(t))).norm(),
                         "basis " + std::to_string(t));
            report.check("expectation idempotent",
                         (expectation_coords(expectation_coords(unit(t))) - expectation_coords(unit(t))).norm());
        }
        for (int trial = 0; trial < 5; ++trial) {
            const Vec u = random_coords();
            report.check("expectation equals the Haar average (random)",
                         (expectation_coords(u) - average_coords(u)).norm());
        }
        for (auto [i, j] : matched_pairs_)
            report.check("expectation fixes S elements",
                         (expectation_coords(unit(i * twisted_.right_factor().dim() + j)) -
                          unit(i * twisted_.right_factor().dim() + j))
                             .norm());
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < twisted_.right_factor().dim(); ++j)
                if (!matched(i, j))
                    report.check("expectation kills unmatched vectors",
                                 expectation_coords(unit(i * twisted_.right_factor().dim() + j)).norm());

        // The balanced span is closed under products and star.
        const int db = twisted_.right_factor().dim();
        auto unmatched_mass = [&](const Vec& u) {
            double mass = 0.0;
            for (int i = 0; i < a.dim(); ++i)
                for (int j = 0; j < db; ++j)
                    if (!matched(i, j)) mass += std::abs(u(i * db + j));
            return mass;
        };
        for (auto [i, j] : matched_pairs_) {
            report.check("balanced span star closed",
                         unmatched_mass(twisted_.abstract_star(unit(i * db + j))));
            for (auto [k2, l2] : matched_pairs_)
                report.check("balanced span product closed",
                             unmatched_mass(twisted_.abstract_product(unit(i * db + j), unit(k2 * db + l2))),
                             "(" + std::to_string(i) + "," + std::to_string(j) + ")x(" + std::to_string(k2) + "," +
                                 std::to_string(l2) + ")");
        }

        // Bimodule property of the expectation over the balanced subalgebra.
        for (auto [i, j] : matched_pairs_)
            for (auto [k2, l2] : matched_pairs_)
                for (int t = 0; t < d; ++t) {
                    const Vec x = unit(i * db + j);
                    const Vec y = unit(k2 * db + l2);
                    const Vec mid = twisted_.abstract_product(twisted_.abstract_product(x, unit(t)), y);
                    const Vec rhs =
                        twisted_.abstract_product(twisted_.abstract_product(x, expectation_coords(unit(t))), y);
                    report.check("expectation bimodule: E(x d y) = x E(d) y",
                                 (expectation_coords(mid) - rhs).norm(), "d basis " + std::to_string(t));
                }

        // Fixed-point characterization: lambda-invariance equals matching.
        for (int t = 0; t < d; ++t) {
            bool fixed = true;
            for (int k = 0; k < n; ++k)
                if ((lambda_coords(k, n, unit(t)) - unit(t)).norm() > tol) fixed = false;
            const bool proj = (expectation_coords(unit(t)) - unit(t)).norm() <= tol;
            report.require("fixed points of lambda are the balanced vectors", fixed == proj,
                           "basis " + std::to_string(t));
        }
        return report;
    }

private:
    TwistedAlgebra twisted_;
    DualGrading left_;
    DualGrading right_;
    std::vector<int> adeg_;
    std::vector<int> bdeg_;
    std::vector<std::pair<int, int>> matched_pairs_;
};

/// On the S basis the induced degree action, mu (x) id, and id (x) nu agree,
/// and the exchange identity mu_z(a) (x) b = a (x) nu_z(b) holds inside the
/// balanced part. All three act by phases determined by the degrees.
inline CheckReport induced_action_check(const BalancedAlgebra& bal, double tol = 1e-12) {
    CheckReport report;
    report.name = "induced_action";
    report.tolerance = tol;
    const TwistedAlgebra& tw = bal.twisted();
    const int n = bal.averaging_order();
    auto phase = [&](int k, int e) {
        const double angle = 2.0 * EIGEN_PI * static_cast<double>(k) * static_cast<double>(e) /
                             static_cast<double>(n);
        return cplx(std::cos(angle), std::sin(angle));
    };
    const FDAlgebra& a = tw.left_factor();
    const auto& homb = tw.homogeneous_basis();
    for (auto [i, j] : bal.matched_pairs()) {
        const AlgElement& ai = a.basis()[static_cast<size_t>(i)];
        const AlgElement& bj = homb[static_cast<size_t>(j)];
        const AlgElement s = tw.basis_element(i, j);
        const int p = bal.left_degree(i);
        const int q = bal.right_degree(j);
        const std::string tag = "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
        for (int k = 0; k < n; ++k) {
            const AlgElement gamma = s * phase(k, p);
            const AlgElement mu_side = tw.elementary(ai * phase(k, p), bj);
            const AlgElement nu_side = tw.elementary(ai, bj * phase(k, q));
            report.check("induced action equals mu (x) id", (gamma - mu_side).frobenius(), tag);
            report.check("induced action equals id (x) nu", (gamma - nu_side).frobenius(), tag);
            report.check("exchange identity: mu_z(a) (x) b = a (x) nu_z(b)", (mu_side - nu_side).frobenius(),
                         tag);
        }
    }
    return report;
}

/// Saturation: factor components multiply onto the right components, and
/// then the S_chi components of the balanced algebra do as well. Each
/// balanced entry records (chi, omega, product rank, dim S_{chi omega}).
struct SaturationReport {
    CheckReport report;
    bool factors_saturated = false;
    int factor_pairs_checked = 0;
    int balanced_pairs_checked = 0;
    std::vector<std::array<int, 4>> balanced_dims;
};

namespace detail {

inline bool factor_saturated(CheckReport& report, const DualGrading& g, const std::string& which, double tol,
                             int& pairs) {
    bool ok = true;
    for (int p : g.support())
        for (int q : g.support()) {
            ++pairs;
            const auto& target = g.component(p + q);
            std::vector<Vec> prods;
            for (const auto& ep : g.component(p))
                for (const auto& eq : g.component(q)) prods.push_back((ep * eq).vec());
            const Eigen::Index rows = g.algebra().zero().vec().size();
            Mat pm(rows, static_cast<Eigen::Index>(prods.size()));
            for (size_t c = 0; c < prods.size(); ++c) pm.col(static_cast<Eigen::Index>(c)) = prods[c];
            Mat tm(rows, static_cast<Eigen::Index>(target.size()));
            for (size_t c = 0; c < target.size(); ++c) tm.col(static_cast<Eigen::Index>(c)) = target[c].vec();
            const bool sat = spans_equal(pm, tm, tol);
            if (!sat) ok = false;
            report.require("factor grading saturated (" + which + "): A_p A_q = A_{p+q}", sat,
                           "degrees " + std::to_string(p) + " + " + std::to_string(q));
        }
    return ok;
}

}  // namespace detail

inline SaturationReport saturation_check(const BalancedAlgebra& bal, double tol = kDefaultTol) {
    SaturationReport out;
    out.report.name = "saturation";
    out.report.tolerance = tol;
    const bool la = detail::factor_saturated(out.report, bal.left_grading(), "left", tol, out.factor_pairs_checked);
    const bool rb =
        detail::factor_saturated(out.report, bal.right_grading(), "right", tol, out.factor_pairs_checked);
    out.factors_saturated = la && rb;
    if (!out.factors_saturated) return out;

    for (int chi : bal.s_support())
        for (int omega : bal.s_support()) {
            std::vector<AlgElement> schi = bal.s_component(chi);
            std::vector<AlgElement> somega = bal.s_component(omega);
            std::vector<AlgElement> target = bal.s_component(chi + omega);
            Mat pm(bal.twisted().algebra().zero().vec().size(),
                   static_cast<Eigen::Index>(schi.size() * somega.size()));
            Eigen::Index c = 0;
            for (const auto& x : schi)
                for (const auto& y : somega) pm.col(c++) = (x * y).vec();
            Mat tm(pm.rows(), static_cast<Eigen::Index>(target.size()));
            for (size_t t = 0; t < target.size(); ++t) tm.col(static_cast<Eigen::Index>(t)) = target[t].vec();
            ++out.balanced_pairs_checked;
            out.balanced_dims.push_back(
                {chi, omega, static_cast<int>(span_rank(pm, tol)), static_cast<int>(target.size())});
            out.report.require("balanced grading saturated: S_chi S_omega spans S_{chi omega}",
                               spans_equal(pm, tm, tol),
                               "chi=" + std::to_string(chi) + " omega=" + std::to_string(omega) + " (" +
                                   std::to_string(span_rank(pm, tol)) + " vs " + std::to_string(target.size()) +
                                   ")");
        }
    return out;
}

}  // namespace corrkit
