#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/balanced.hpp"
#include "corrkit/common.hpp"
#include "corrkit/graph.hpp"
#include "corrkit/isom.hpp"
#include "corrkit/katsura.hpp"
#include "corrkit/module.hpp"

namespace corrkit {

namespace detail {

inline cplx block_trace(const AlgElement& a) {
    cplx t(0.0, 0.0);
    for (const auto& b : a.blocks) t += b.trace();
    return t;
}

}  // namespace detail

/// Internal tensor powers W_n of a correspondence X over A, with the algebra
/// glued on as the innermost factor: W_0 = A and W_{n+1} = X (x) W_n, so that
/// W_n = X^{(x)n} (x) A carries both the left and the right action of A.
///
/// Each level is stored reduced: the raw elementary tensors e_i (x) w_k are
/// ordered lexicographically by factor indices (raw index i*dim(W) + k) and
/// null vectors are removed greedily by Gram-matrix rank at the tolerance
/// given at construction.  For every reduced basis vector the chain of factor
/// indices [i_n, ..., i_1, k] is retained (outermost factor first, algebra
/// basis index last) so representations can evaluate n-fold products on it.
class TensorPowers {
public:
    TensorPowers() = default;

    TensorPowers(Correspondence x, int max_level, double tol = kDefaultTol) : x_(std::move(x)), tol_(tol) {
        if (max_level < 0) throw std::invalid_argument("TensorPowers: max_level must be nonnegative");
        if (!same_algebra(x_.left_algebra(), x_.algebra(), tol))
            throw std::invalid_argument("TensorPowers: the correspondence must be over a single algebra");
        const FDAlgebra& a = x_.algebra();
        levels_.push_back(algebra_as_correspondence(a));
        chains_.emplace_back();
        for (int k = 0; k < a.dim(); ++k) chains_.back().push_back({k});
        quotients_.push_back(Mat::Identity(a.dim(), a.dim()));
        accepted_.emplace_back();
        for (int k = 0; k < a.dim(); ++k) accepted_.back().push_back(k);
        for (int n = 0; n < max_level; ++n) grow();
    }

    /// Highest constructed level N; levels 0..N are available.
    [[nodiscard]] int levels() const { return static_cast<int>(levels_.size()) - 1; }
    [[nodiscard]] const Correspondence& base() const { return x_; }
    [[nodiscard]] double tolerance() const { return tol_; }

    [[nodiscard]] const Correspondence& level(int n) const {
        check_level(n);
        return levels_[static_cast<size_t>(n)];
    }

    /// Factor-index chains of the reduced basis vectors of W_n.
    [[nodiscard]] const std::vector<std::vector<int>>& chains(int n) const {
        check_level(n);
        return chains_[static_cast<size_t>(n)];
    }

    /// Quotient map from raw coordinates (dim X * dim W_{n-1}) onto the
    /// reduced basis of W_n; the identity at level 0.
    [[nodiscard]] const Mat& quotient(int n) const {
        check_level(n);
        return quotients_[static_cast<size_t>(n)];
    }

    /// Raw indices retained as the reduced basis of W_n.
    [[nodiscard]] const std::vector<int>& accepted(int n) const {
        check_level(n);
        return accepted_[static_cast<size_t>(n)];
    }

    /// Reduced coordinates of x (x) eta in W_{n+1}, for eta in W_n.
    [[nodiscard]] Vec embed(int n, const Vec& x, const Vec& eta) const {
        check_level(n + 1);
        if (x.size() != x_.dim() || eta.size() != levels_[static_cast<size_t>(n)].dim())
            throw std::invalid_argument("TensorPowers::embed: coordinate size mismatch");
        return quotients_[static_cast<size_t>(n) + 1] * kron(x, eta);
    }

private:
    void check_level(int n) const {
        if (n < 0 || n > levels()) throw std::out_of_range("TensorPowers: level out of range");
    }

    void grow() {
        const Correspondence& w = levels_.back();
        const FDAlgebra& a = x_.algebra();
        const int dx = x_.dim();
        const int dw = w.dim();
        const int raw = dx * dw;

        // Raw A-valued Gram: <e_i (x) w_k, e_j (x) w_l> = <w_k, phi(<e_i, e_j>) w_l>.
        std::vector<std::vector<AlgElement>> rawg(static_cast<size_t>(raw),
                                                  std::vector<AlgElement>(static_cast<size_t>(raw)));
        for (int i = 0; i < dx; ++i)
            for (int j = 0; j < dx; ++j) {
                const Mat lw = w.left_matrix(x_.module().gram(i, j));
                for (int k = 0; k < dw; ++k) {
                    Vec ek = Vec::Zero(dw);
                    ek(k) = 1.0;
                    for (int l = 0; l < dw; ++l)
                        rawg[static_cast<size_t>(i * dw + k)][static_cast<size_t>(j * dw + l)] =
                            w.module().inner(ek, lw.col(l));
                }
            }

        Mat s = Mat::Zero(raw, raw);
        for (int p = 0; p < raw; ++p)
            for (int q = 0; q < raw; ++q)
                s(p, q) = detail::block_trace(rawg[static_cast<size_t>(p)][static_cast<size_t>(q)]);
        s = 0.5 * (s + Mat(s.adjoint()));

        double scale = 1.0;
        for (int p = 0; p < raw; ++p) scale = std::max(scale, s(p, p).real());

        // Greedy lexicographic acceptance by Schur-complement residual.
        std::vector<int> acc;
        for (int p = 0; p < raw; ++p) {
            double res = s(p, p).real();
            if (!acc.empty()) {
                const Eigen::Index nb = static_cast<Eigen::Index>(acc.size());
                Mat sbb(nb, nb);
                Vec sbp(nb);
                for (Eigen::Index m = 0; m < nb; ++m) {
                    sbp(m) = s(acc[static_cast<size_t>(m)], p);
                    for (Eigen::Index m2 = 0; m2 < nb; ++m2)
                        sbb(m, m2) = s(acc[static_cast<size_t>(m)], acc[static_cast<size_t>(m2)]);
                }
                const Vec sol = sbb.ldlt().solve(sbp);
                res -= (sbp.adjoint() * sol)(0, 0).real();
            }
            if (res > tol_ * scale) acc.push_back(p);
        }

        const Eigen::Index red = static_cast<Eigen::Index>(acc.size());
        Mat q;
        if (red > 0) {
            Mat sbb(red, red);
            Mat sbr(red, raw);
            for (Eigen::Index m = 0; m < red; ++m) {
                sbr.row(m) = s.row(acc[static_cast<size_t>(m)]);
                for (Eigen::Index m2 = 0; m2 < red; ++m2)
                    sbb(m, m2) = s(acc[static_cast<size_t>(m)], acc[static_cast<size_t>(m2)]);
            }
            q = sbb.ldlt().solve(sbr);
        } else {
            q = Mat::Zero(0, raw);
        }

        std::vector<std::vector<AlgElement>> gram(static_cast<size_t>(red),
                                                  std::vector<AlgElement>(static_cast<size_t>(red)));
        for (Eigen::Index m = 0; m < red; ++m)
            for (Eigen::Index m2 = 0; m2 < red; ++m2)
                gram[static_cast<size_t>(m)][static_cast<size_t>(m2)] =
                    rawg[static_cast<size_t>(acc[static_cast<size_t>(m)])]
                        [static_cast<size_t>(acc[static_cast<size_t>(m2)])];

        std::vector<Mat> rightm;
        std::vector<Mat> leftm;
        rightm.reserve(static_cast<size_t>(a.dim()));
        leftm.reserve(static_cast<size_t>(a.dim()));
        for (int k = 0; k < a.dim(); ++k) {
            const Mat rw = kron(Mat::Identity(dx, dx), w.module().right_matrix(a.basis()[static_cast<size_t>(k)]));
            const Mat lx = kron(x_.left_matrix(a.basis()[static_cast<size_t>(k)]), Mat::Identity(dw, dw));
            Mat rcols(raw, red);
            Mat lcols(raw, red);
            for (Eigen::Index m = 0; m < red; ++m) {
                rcols.col(m) = rw.col(acc[static_cast<size_t>(m)]);
                lcols.col(m) = lx.col(acc[static_cast<size_t>(m)]);
            }
            rightm.push_back(q * rcols);
            leftm.push_back(q * lcols);
        }

        std::vector<std::vector<int>> chains;
        chains.reserve(static_cast<size_t>(red));
        for (Eigen::Index m = 0; m < red; ++m) {
            const int rawidx = acc[static_cast<size_t>(m)];
            std::vector<int> chain;
            chain.push_back(rawidx / dw);
            const auto& tail = chains_.back()[static_cast<size_t>(rawidx % dw)];
            chain.insert(chain.end(), tail.begin(), tail.end());
            chains.push_back(std::move(chain));
        }

        HilbertModule mod(a, std::move(gram), std::move(rightm));
        levels_.emplace_back(a, std::move(mod), std::move(leftm));
        chains_.push_back(std::move(chains));
        quotients_.push_back(std::move(q));
        accepted_.push_back(std::move(acc));
    }

    Correspondence x_;
    double tol_ = kDefaultTol;
    std::vector<Correspondence> levels_;
    std::vector<std::vector<std::vector<int>>> chains_;
    std::vector<Mat> quotients_;
    std::vector<std::vector<int>> accepted_;
};

/// A representation (psi, pi) of a correspondence on a concrete target
/// algebra: pi is a unital *-homomorphism of the coefficient algebra, psi a
/// linear map on the module satisfying
///   (1) psi(x.a)    = psi(x) pi(a)
///   (2) pi(<x, y>)  = psi(x)* psi(y)
///   (3) psi(a.x)    = pi(a) psi(x).
/// Truncated representations (finite pieces of an infinite picture) declare
/// their validity domain explicitly: `validity` is a projection, identities
/// are asserted compressed by it, and checkers refuse to assert anything
/// outside it.  Exact representations use validity = 1.
struct ToeplitzRep {
    Correspondence corr;
    FDAlgebra target;
    std::vector<AlgElement> psi_images;  // one image per module coordinate
    AlgebraMap pi;                       // coefficient algebra -> target
    AlgElement validity;                 // projection bounding asserted identities
    bool truncated = false;
    std::string name;

    [[nodiscard]] AlgElement psi(const Vec& x) const {
        if (x.size() != corr.dim()) throw std::invalid_argument("ToeplitzRep::psi: coordinate size mismatch");
        AlgElement out = target.zero();
        for (int i = 0; i < corr.dim(); ++i)
            if (x(i) != cplx(0.0, 0.0)) out += x(i) * psi_images[static_cast<size_t>(i)];
        return out;
    }

    [[nodiscard]] AlgElement pi_of(const AlgElement& a) const { return pi.apply(a); }

    [[nodiscard]] AlgElement compress(const AlgElement& c) const { return validity * c * validity; }

    /// Checks that pi is a unital *-homomorphism and that the three
    /// representation identities hold: (1) and (3) everywhere, (2) compressed
    /// by the validity projection.  For truncated representations the defect
    /// of the uncompressed identity (2) must be confined to the complement of
    /// the validity domain; for exact ones identity (2) must hold outright.
    [[nodiscard]] CheckReport verify(double tol = 1e-12) const {
        CheckReport report;
        report.name = name.empty() ? "toeplitz_representation" : name;
        report.tolerance = tol;
        const FDAlgebra& a = corr.algebra();
        report.require("one psi image per module coordinate",
                       static_cast<int>(psi_images.size()) == corr.dim());
        if (!report.passed) return report;

        report.check("validity is idempotent", (validity * validity - validity).frobenius());
        report.check("validity is self-adjoint", (validity.adjoint() - validity).frobenius());
        report.check("pi is unital", (pi_of(a.one()) - target.one()).frobenius());
        for (int k = 0; k < a.dim(); ++k) {
            const AlgElement& bk = a.basis()[static_cast<size_t>(k)];
            report.check("pi respects involution", (pi_of(bk.adjoint()) - pi_of(bk).adjoint()).frobenius(),
                         "basis " + std::to_string(k));
            for (int l = 0; l < a.dim(); ++l) {
                const AlgElement& bl = a.basis()[static_cast<size_t>(l)];
                report.check("pi is multiplicative", (pi_of(bk * bl) - pi_of(bk) * pi_of(bl)).frobenius(),
                             "pair (" + std::to_string(k) + "," + std::to_string(l) + ")");
            }
        }

        const AlgElement top = target.one() - validity;
        for (int i = 0; i < corr.dim(); ++i) {
            Vec ei = Vec::Zero(corr.dim());
            ei(i) = 1.0;
            for (int k = 0; k < a.dim(); ++k) {
                const AlgElement& bk = a.basis()[static_cast<size_t>(k)];
                report.check("(1) psi(x.a) = psi(x) pi(a)",
                             (psi(corr.module().right_apply(ei, bk)) - psi(ei) * pi_of(bk)).frobenius(),
                             "x = e" + std::to_string(i) + ", a basis " + std::to_string(k));
                report.check("(3) psi(a.x) = pi(a) psi(x)",
                             (psi(corr.left_apply(bk, ei)) - pi_of(bk) * psi(ei)).frobenius(),
                             "x = e" + std::to_string(i) + ", a basis " + std::to_string(k));
            }
            for (int j = 0; j < corr.dim(); ++j) {
                Vec ej = Vec::Zero(corr.dim());
                ej(j) = 1.0;
                const AlgElement defect = psi(ei).adjoint() * psi(ej) - pi_of(corr.module().inner(ei, ej));
                report.check("(2) pi(<x,y>) = psi(x)* psi(y) on the validity domain",
                             compress(defect).frobenius(),
                             "pair (e" + std::to_string(i) + ",e" + std::to_string(j) + ")");
                if (truncated)
                    report.check("(2) defect is confined outside the validity domain",
                                 (defect - top * defect * top).frobenius(),
                                 "pair (e" + std::to_string(i) + ",e" + std::to_string(j) + ")");
                else
                    report.check("(2) pi(<x,y>) = psi(x)* psi(y)", defect.frobenius(),
                                 "pair (e" + std::to_string(i) + ",e" + std::to_string(j) + ")");
            }
        }
        return report;
    }
};

/// Truncated Fock representation of a correspondence X over A on the direct
/// sum of the reduced tensor powers W_0 (+) ... (+) W_N, orthonormalized
/// level by level with respect to the faithful scalar product tr<.,.>.
/// Creation maps raise the level by exactly one and annihilate level N, so
/// identities (1) and (3) hold outright while the defect of identity (2)
/// lives in the level-N corner; the validity projection is onto levels < N.
class TruncatedFock {
public:
    TruncatedFock() = default;

    TruncatedFock(Correspondence x, int max_level, double tol = kDefaultTol)
        : powers_(std::move(x), max_level, tol) {
        if (max_level < 1) throw std::invalid_argument("TruncatedFock: need at least one level above the vacuum");
        const int nlev = powers_.levels();
        offsets_.assign(static_cast<size_t>(nlev) + 2, 0);
        onb_.resize(static_cast<size_t>(nlev) + 1);
        onb_inv_.resize(static_cast<size_t>(nlev) + 1);
        for (int n = 0; n <= nlev; ++n) {
            const HilbertModule& mod = powers_.level(n).module();
            const Eigen::Index d = mod.dim();
            offsets_[static_cast<size_t>(n) + 1] = offsets_[static_cast<size_t>(n)] + static_cast<int>(d);
            if (d == 0) {
                onb_[static_cast<size_t>(n)] = Mat::Zero(0, 0);
                onb_inv_[static_cast<size_t>(n)] = Mat::Zero(0, 0);
                continue;
            }
            const Mat s = 0.5 * (mod.scalar_gram() + Mat(mod.scalar_gram().adjoint()));
            Eigen::SelfAdjointEigenSolver<Mat> es(s);
            Vec sqrts(d);
            for (Eigen::Index i = 0; i < d; ++i) {
                const double ev = es.eigenvalues()(i);
                if (ev <= 0.0)
                    throw std::runtime_error("TruncatedFock: level Gram is not positive definite after reduction");
                sqrts(i) = std::sqrt(ev);
            }
            onb_[static_cast<size_t>(n)] = es.eigenvectors() * sqrts.cwiseInverse().asDiagonal();
            onb_inv_[static_cast<size_t>(n)] = sqrts.asDiagonal() * es.eigenvectors().adjoint();
        }
        total_ = offsets_[static_cast<size_t>(nlev) + 1];
        target_ = FDAlgebra({total_}, "Fock[" + std::to_string(nlev) + "]");

        const FDAlgebra& a = powers_.base().algebra();
        std::vector<AlgElement> pi_images;
        pi_images.reserve(static_cast<size_t>(a.dim()));
        for (int k = 0; k < a.dim(); ++k) {
            Mat big = Mat::Zero(total_, total_);
            for (int n = 0; n <= nlev; ++n) {
                const Correspondence& lev = powers_.level(n);
                if (lev.dim() == 0) continue;
                big.block(offsets_[static_cast<size_t>(n)], offsets_[static_cast<size_t>(n)], lev.dim(), lev.dim()) =
                    onb_inv_[static_cast<size_t>(n)] * lev.left_matrix(a.basis()[static_cast<size_t>(k)]) *
                    onb_[static_cast<size_t>(n)];
            }
            pi_images.push_back(AlgElement({big}));
        }

        std::vector<AlgElement> psi_images;
        const int dx = powers_.base().dim();
        psi_images.reserve(static_cast<size_t>(dx));
        for (int i = 0; i < dx; ++i) {
            Vec ei = Vec::Zero(dx);
            ei(i) = 1.0;
            Mat big = Mat::Zero(total_, total_);
            for (int n = 0; n + 1 <= nlev; ++n) {
                const int dn = powers_.level(n).dim();
                const int dn1 = powers_.level(n + 1).dim();
                if (dn == 0 || dn1 == 0) continue;
                const Mat create = powers_.quotient(n + 1) * kron(ei, Mat::Identity(dn, dn));
                big.block(offsets_[static_cast<size_t>(n) + 1], offsets_[static_cast<size_t>(n)], dn1, dn) =
                    onb_inv_[static_cast<size_t>(n) + 1] * create * onb_[static_cast<size_t>(n)];
            }
            psi_images.push_back(AlgElement({big}));
        }

        Mat valid = Mat::Zero(total_, total_);
        valid.topLeftCorner(offsets_[static_cast<size_t>(nlev)], offsets_[static_cast<size_t>(nlev)]) =
            Mat::Identity(offsets_[static_cast<size_t>(nlev)], offsets_[static_cast<size_t>(nlev)]);

        rep_.corr = powers_.base();
        rep_.target = target_;
        rep_.psi_images = std::move(psi_images);
        rep_.pi = AlgebraMap{a, target_, std::move(pi_images)};
        rep_.validity = AlgElement({valid});
        rep_.truncated = true;
        rep_.name = "fock[" + std::to_string(nlev) + "]";
    }

    [[nodiscard]] const TensorPowers& powers() const { return powers_; }
    [[nodiscard]] const ToeplitzRep& rep() const { return rep_; }
    [[nodiscard]] int levels() const { return powers_.levels(); }
    [[nodiscard]] int dim() const { return total_; }
    [[nodiscard]] int offset(int n) const { return offsets_[static_cast<size_t>(n)]; }
    [[nodiscard]] int level_dim(int n) const { return powers_.level(n).dim(); }

    /// Projection onto the level-n summand, as a target-algebra element.
    [[nodiscard]] AlgElement level_projection(int n) const {
        Mat p = Mat::Zero(total_, total_);
        const int d = level_dim(n);
        p.block(offset(n), offset(n), d, d) = Mat::Identity(d, d);
        return AlgElement({p});
    }

    /// Ambient vector (in the orthonormal coordinates of the representation
    /// space) of the level-n module vector with the given reduced coordinates.
    [[nodiscard]] Vec lift(int n, const Vec& reduced) const {
        if (reduced.size() != level_dim(n)) throw std::invalid_argument("TruncatedFock::lift: size mismatch");
        Vec big = Vec::Zero(total_);
        big.segment(offset(n), level_dim(n)) = onb_inv_[static_cast<size_t>(n)] * reduced;
        return big;
    }

private:
    TensorPowers powers_;
    FDAlgebra target_;
    ToeplitzRep rep_;
    std::vector<int> offsets_;
    std::vector<Mat> onb_;      // orthonormal -> reduced coordinates
    std::vector<Mat> onb_inv_;  // reduced -> orthonormal coordinates
    int total_ = 0;
};

namespace detail {

/// psi^n of every reduced basis vector of W_n, as products along the chains:
/// psi^n(e_{i_n} (x) ... (x) e_{i_1} (x) b_k) = psi(e_{i_n}) ... psi(e_{i_1}) pi(b_k).
inline std::vector<AlgElement> chain_operators(const ToeplitzRep& rep, const TensorPowers& powers, int n) {
    const auto& chains = powers.chains(n);
    std::vector<AlgElement> out;
    out.reserve(chains.size());
    for (const auto& chain : chains) {
        AlgElement acc = rep.pi.images[static_cast<size_t>(chain.back())];
        for (size_t t = chain.size() - 1; t-- > 0;)
            acc = rep.psi_images[static_cast<size_t>(chain[t])] * acc;
        out.push_back(std::move(acc));
    }
    return out;
}

}  // namespace detail

/// n-fold product map psi^n applied to a vector of W_n (reduced coordinates);
/// psi^0 = pi under the identification W_0 = A.
[[nodiscard]] inline AlgElement psi_n(const ToeplitzRep& rep, const TensorPowers& powers, int n, const Vec& xi) {
    if (xi.size() != powers.level(n).dim()) throw std::invalid_argument("psi_n: coordinate size mismatch");
    const auto ops = detail::chain_operators(rep, powers, n);
    AlgElement out = rep.target.zero();
    for (Eigen::Index m = 0; m < xi.size(); ++m)
        if (xi(m) != cplx(0.0, 0.0)) out += xi(m) * ops[static_cast<size_t>(m)];
    return out;
}

/// psi^(n) applied to the compact operator sum_{ij} coeff(i,j) Theta_{w_i, w_j}
/// on W_n: returns sum_{ij} coeff(i,j) psi^n(w_i) psi^n(w_j)*.
[[nodiscard]] inline AlgElement psi_paren_n(const ToeplitzRep& rep, const TensorPowers& powers, int n,
                                            const Mat& coeff) {
    const int d = powers.level(n).dim();
    if (coeff.rows() != d || coeff.cols() != d) throw std::invalid_argument("psi_paren_n: coefficient size mismatch");
    const auto ops = detail::chain_operators(rep, powers, n);
    AlgElement out = rep.target.zero();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (coeff(i, j) != cplx(0.0, 0.0))
                out += coeff(i, j) * (ops[static_cast<size_t>(i)] * ops[static_cast<size_t>(j)].adjoint());
    return out;
}

/// Structural identities of the induced compact-operator maps psi^(n):
///   (a) pi(a) psi^(n)(k)      = psi^(n)(phi_n(a) k)
///   (b) psi^(n)(k) psi^n(xi)  = psi^n(k xi)
///   (c) psi^(n)(k) psi^(n)(k') = psi^(n)(k k')
/// checked over the Theta-matrix-unit basis of K(W_n).  All three hold on the
/// whole representation space even for truncated Fock representations.
[[nodiscard]] inline CheckReport psi_paren_checks(const ToeplitzRep& rep, const TensorPowers& powers, int n,
                                                  double tol = kDefaultTol) {
    CheckReport report;
    report.name = "psi_paren[" + std::to_string(n) + "]";
    report.tolerance = tol;
    const Correspondence& w = powers.level(n);
    const FDAlgebra& a = w.algebra();
    const int d = w.dim();
    const auto ops = detail::chain_operators(rep, powers, n);

    std::vector<AlgElement> theta;  // psi^(n)(Theta_{w_i, w_j}) for all pairs, index i*d + j
    theta.reserve(static_cast<size_t>(d) * static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            theta.push_back(ops[static_cast<size_t>(i)] * ops[static_cast<size_t>(j)].adjoint());

    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const AlgElement& tij = theta[static_cast<size_t>(i * d + j)];
            for (int k = 0; k < a.dim(); ++k) {
                // phi_n(a) Theta_{w_i, w_j} = Theta_{a.w_i, w_j}.
                const Mat lw = w.left_matrix(a.basis()[static_cast<size_t>(k)]);
                AlgElement rhs = rep.target.zero();
                for (int m = 0; m < d; ++m)
                    if (lw(m, i) != cplx(0.0, 0.0)) rhs += lw(m, i) * theta[static_cast<size_t>(m * d + j)];
                report.check("pi(a) psi^(n)(k) = psi^(n)(phi(a) k)",
                             (rep.pi.images[static_cast<size_t>(k)] * tij - rhs).frobenius(),
                             "a basis " + std::to_string(k) + ", Theta(" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
            }
            for (int l = 0; l < d; ++l) {
                // Theta_{w_i, w_j} w_l = w_i . <w_j, w_l>.
                Vec ei = Vec::Zero(d);
                ei(i) = 1.0;
                const Vec kxi = w.module().right_apply(ei, w.module().gram(j, l));
                Vec el = Vec::Zero(d);
                el(l) = 1.0;
                report.check("psi^(n)(k) psi^n(xi) = psi^n(k xi)",
                             (tij * psi_n(rep, powers, n, el) - psi_n(rep, powers, n, kxi)).frobenius(),
                             "Theta(" + std::to_string(i) + "," + std::to_string(j) + "), xi = w" +
                                 std::to_string(l));
                for (int j2 = 0; j2 < d; ++j2) {
                    // Theta_{w_i, w_j} Theta_{w_l, w_j2} = Theta_{w_i . <w_j, w_l>, w_j2}.
                    const Vec left = w.module().right_apply(ei, w.module().gram(j, l));
                    AlgElement rhs = rep.target.zero();
                    for (int m = 0; m < d; ++m)
                        if (left(m) != cplx(0.0, 0.0)) rhs += left(m) * theta[static_cast<size_t>(m * d + j2)];
                    report.check("psi^(n) is multiplicative on compacts",
                                 (tij * theta[static_cast<size_t>(l * d + j2)] - rhs).frobenius(),
                                 "Theta(" + std::to_string(i) + "," + std::to_string(j) + ") Theta(" +
                                     std::to_string(l) + "," + std::to_string(j2) + ")");
                }
            }
        }
    return report;
}

/// Covariance defect of a representation on a given ideal: for each ideal
/// basis element a, the left action phi(a) is expanded in rank-one operators
/// Theta_{e_i, e_j} and the defect || psi^(1)(phi(a)) - pi(a) || is measured
/// on the validity domain.  A representation is covariant on the ideal
/// exactly when the defect vanishes.
struct CovarianceDefect {
    double defect = 0.0;              // max operator-norm defect over the ideal basis
    double expansion_residual = 0.0;  // worst Theta-expansion residual of phi(a)
};

[[nodiscard]] inline CovarianceDefect cp_covariance_defect(const ToeplitzRep& rep,
                                                           const std::vector<AlgElement>& ideal_basis) {
    CovarianceDefect out;
    const int d = rep.corr.dim();
    const CompactsSpan cs = compacts_span(rep.corr.module());
    for (const auto& a : ideal_basis) {
        const auto [coeff, residual] = cs.theta_coords(d, rep.corr.left_matrix(a));
        out.expansion_residual = std::max(out.expansion_residual, residual);
        AlgElement dfct = rep.target.zero() - rep.pi_of(a);
        for (int i = 0; i < d; ++i) {
            Vec ei = Vec::Zero(d);
            ei(i) = 1.0;
            const AlgElement pi_ei = rep.psi(ei);
            for (int j = 0; j < d; ++j)
                if (coeff(i, j) != cplx(0.0, 0.0)) {
                    Vec ej = Vec::Zero(d);
                    ej(j) = 1.0;
                    dfct += coeff(i, j) * (pi_ei * rep.psi(ej).adjoint());
                }
        }
        out.defect = std::max(out.defect, rep.compress(dfct).norm());
    }
    return out;
}

/// Cuntz-Krieger representation of the graph correspondence of a finite
/// acyclic graph on its (finite) path space.  Paths begin at the vertices
/// that receive no edge and grow at the arrival end; the path space carries
/// one basis vector per path, pi(chi_v) projects onto the paths arriving at
/// v, and psi(chi_e) extends each path arriving at s(e) by the edge e.  The
/// representation is exact (validity = 1) and covariant: its covariance
/// defect on the receiver ideal vanishes identically.
struct CKRepresentation {
    ToeplitzRep rep;
    std::vector<std::vector<int>> paths;  // edge indices, outermost (= last traversed) first
    std::vector<int> start;               // vertex where the path begins
    std::vector<int> arrival;             // vertex where the path currently ends
};

[[nodiscard]] inline CKRepresentation ck_representation(const DirectedGraph& g) {
    if (g.num_vertices() == 0) throw std::invalid_argument("ck_representation: the graph has no vertices");

    // Kahn's algorithm: reject directed cycles, which would make the path
    // space infinite.
    {
        std::vector<int> indeg(static_cast<size_t>(g.num_vertices()), 0);
        for (int e = 0; e < g.num_edges(); ++e) ++indeg[static_cast<size_t>(g.dst(e))];
        std::vector<int> order;
        for (int v = 0; v < g.num_vertices(); ++v)
            if (indeg[static_cast<size_t>(v)] == 0) order.push_back(v);
        for (size_t h = 0; h < order.size(); ++h)
            for (int e = 0; e < g.num_edges(); ++e)
                if (g.src(e) == order[h] && --indeg[static_cast<size_t>(g.dst(e))] == 0)
                    order.push_back(g.dst(e));
        if (static_cast<int>(order.size()) != g.num_vertices())
            throw std::invalid_argument("ck_representation: the graph has a directed cycle");
    }

    CKRepresentation out;
    std::vector<int> parent;     // index of the path extended, -1 for empty paths
    std::vector<int> last_edge;  // edge appended last, -1 for empty paths
    for (int v = 0; v < g.num_vertices(); ++v) {
        bool receives = false;
        for (int e = 0; e < g.num_edges(); ++e)
            if (g.dst(e) == v) receives = true;
        if (!receives) {
            out.paths.emplace_back();
            out.start.push_back(v);
            out.arrival.push_back(v);
            parent.push_back(-1);
            last_edge.push_back(-1);
        }
    }
    for (size_t p = 0; p < out.paths.size(); ++p)
        for (int e = 0; e < g.num_edges(); ++e)
            if (g.src(e) == out.arrival[p]) {
                std::vector<int> grown;
                grown.push_back(e);
                grown.insert(grown.end(), out.paths[p].begin(), out.paths[p].end());
                out.paths.push_back(std::move(grown));
                out.start.push_back(out.start[p]);
                out.arrival.push_back(g.dst(e));
                parent.push_back(static_cast<int>(p));
                last_edge.push_back(e);
            }

    const int np = static_cast<int>(out.paths.size());
    FDAlgebra target({np}, "paths(" + std::to_string(np) + ")");

    const FDAlgebra va = vertex_algebra(g);
    std::vector<AlgElement> pi_images;
    pi_images.reserve(static_cast<size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) {
        Mat m = Mat::Zero(np, np);
        for (int p = 0; p < np; ++p)
            if (out.arrival[static_cast<size_t>(p)] == v) m(p, p) = 1.0;
        pi_images.push_back(AlgElement({m}));
    }

    std::vector<AlgElement> psi_images;
    psi_images.reserve(static_cast<size_t>(g.num_edges()));
    for (int e = 0; e < g.num_edges(); ++e) {
        Mat m = Mat::Zero(np, np);
        for (int p = 0; p < np; ++p)
            if (last_edge[static_cast<size_t>(p)] == e) m(p, parent[static_cast<size_t>(p)]) = 1.0;
        psi_images.push_back(AlgElement({m}));
    }

    out.rep.corr = graph_correspondence(g);
    out.rep.target = target;
    out.rep.psi_images = std::move(psi_images);
    out.rep.pi = AlgebraMap{va, target, std::move(pi_images)};
    out.rep.validity = target.one();
    out.rep.truncated = false;
    out.rep.name = "ck";
    return out;
}

/// Checks that every product of at most three generators (pi images, psi
/// images and their adjoints) lies in span{ psi^n(w_i) psi^m(w_j)* } with
/// n, m running over the constructed levels.
[[nodiscard]] inline CheckReport spanning_check(const ToeplitzRep& rep, const TensorPowers& powers,
                                                double tol = kDefaultTol) {
    CheckReport report;
    report.name = "spanning";
    report.tolerance = tol;

    std::vector<std::vector<AlgElement>> ops;
    for (int n = 0; n <= powers.levels(); ++n) ops.push_back(detail::chain_operators(rep, powers, n));
    std::vector<Vec> cols;
    for (const auto& on : ops)
        for (const auto& x : on)
            for (const auto& om : ops)
                for (const auto& y : om) cols.push_back((x * y.adjoint()).vec());
    if (cols.empty()) {
        report.require("span is nonempty", false);
        return report;
    }
    Mat colmat(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) colmat.col(static_cast<Eigen::Index>(c)) = cols[c];
    const SpanSolver solver(std::move(colmat));

    std::vector<std::pair<std::string, AlgElement>> gens;
    const FDAlgebra& a = rep.corr.algebra();
    for (int k = 0; k < a.dim(); ++k)
        gens.emplace_back("pi(b" + std::to_string(k) + ")", rep.pi.images[static_cast<size_t>(k)]);
    for (int i = 0; i < rep.corr.dim(); ++i) {
        gens.emplace_back("psi(e" + std::to_string(i) + ")", rep.psi_images[static_cast<size_t>(i)]);
        gens.emplace_back("psi(e" + std::to_string(i) + ")*", rep.psi_images[static_cast<size_t>(i)].adjoint());
    }

    const auto check_product = [&](const AlgElement& prod, const std::string& label) {
        report.check("generator product lies in span{psi^n psi^m*}", solver.residual(prod.vec()), label);
    };
    for (const auto& [n1, g1] : gens) {
        check_product(g1, n1);
        for (const auto& [n2, g2] : gens) {
            check_product(g1 * g2, n1 + " " + n2);
            for (const auto& [n3, g3] : gens) check_product(g1 * g2 * g3, n1 + " " + n2 + " " + n3);
        }
    }
    return report;
}

/// The integer (gauge) grading of the algebra generated by a representation:
/// the degree-d component is spanned by the operators psi^n(w_i) psi^m(w_j)*
/// with n - m = d.  The returned algebra is the span of all such operators
/// inside the representation target; construction fails if that span is not
/// closed under products and adjoints at the given tolerance.
[[nodiscard]] inline DualGrading gauge_dual_grading(const ToeplitzRep& rep, const TensorPowers& powers,
                                                    double tol = kDefaultTol) {
    std::vector<std::vector<AlgElement>> ops;
    for (int n = 0; n <= powers.levels(); ++n) ops.push_back(detail::chain_operators(rep, powers, n));

    std::map<int, std::vector<AlgElement>> comps;
    std::map<int, std::vector<Vec>> comp_cols;
    for (int n = 0; n <= powers.levels(); ++n)
        for (int m = 0; m <= powers.levels(); ++m)
            for (const auto& x : ops[static_cast<size_t>(n)])
                for (const auto& y : ops[static_cast<size_t>(m)]) {
                    AlgElement cand = x * y.adjoint();
                    const Vec v = cand.vec();
                    if (v.norm() <= tol) continue;
                    auto& cc = comp_cols[n - m];
                    Mat cur(v.size(), static_cast<Eigen::Index>(cc.size()));
                    for (size_t c = 0; c < cc.size(); ++c) cur.col(static_cast<Eigen::Index>(c)) = cc[c];
                    if (!cc.empty() && SpanSolver(std::move(cur)).residual(v) <= tol * std::max(1.0, v.norm()))
                        continue;
                    cc.push_back(v);
                    comps[n - m].push_back(std::move(cand));
                }

    std::vector<AlgElement> basis;
    std::vector<std::pair<int, std::vector<AlgElement>>> components;
    for (const auto& [deg, elems] : comps) {
        components.emplace_back(deg, elems);
        for (const auto& e : elems) basis.push_back(e);
    }
    FDAlgebra generated(rep.target.block_dims(), std::move(basis), rep.name + " C*(psi,pi)", tol);
    return DualGrading(std::move(generated), std::move(components), 0);
}

}  // namespace corrkit
