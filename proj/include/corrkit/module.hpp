#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/action.hpp"
#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/grading.hpp"
#include "corrkit/group.hpp"

namespace corrkit {

/// Right Hilbert module over an FDAlgebra B. Elements are coordinate vectors
/// in C^d relative to a fixed linear basis x_1..x_d; the structure is carried
/// by the B-valued Gram matrix G[i][j] = <x_i, x_j> (conjugate-linear in the
/// first slot) and by the right-action matrices of the basis of B.
class HilbertModule {
public:
    HilbertModule() = default;

    HilbertModule(FDAlgebra algebra, std::vector<std::vector<AlgElement>> gram, std::vector<Mat> right_mats)
        : data_(std::make_shared<Data>()) {
        auto& d = *std::const_pointer_cast<Data>(data_);
        d.algebra = std::move(algebra);
        d.gram = std::move(gram);
        d.right = std::move(right_mats);
        d.dim = static_cast<int>(d.gram.size());
        for (const auto& row : d.gram)
            if (static_cast<int>(row.size()) != d.dim) throw std::invalid_argument("HilbertModule: gram not square");
        if (static_cast<int>(d.right.size()) != d.algebra.dim())
            throw std::invalid_argument("HilbertModule: one right-action matrix per algebra basis element required");
        for (const auto& r : d.right)
            if (r.rows() != d.dim || r.cols() != d.dim)
                throw std::invalid_argument("HilbertModule: right-action matrix size mismatch");
        const int N = d.algebra.ambient_size();
        d.big_gram = Mat::Zero(static_cast<Eigen::Index>(d.dim) * N, static_cast<Eigen::Index>(d.dim) * N);
        for (int i = 0; i < d.dim; ++i)
            for (int j = 0; j < d.dim; ++j)
                d.big_gram.block(static_cast<Eigen::Index>(i) * N, static_cast<Eigen::Index>(j) * N, N, N) =
                    d.algebra.ambient(d.gram[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        d.scalar_gram = Mat::Zero(d.dim, d.dim);
        for (int i = 0; i < d.dim; ++i)
            for (int j = 0; j < d.dim; ++j)
                d.scalar_gram(i, j) =
                    d.big_gram.block(static_cast<Eigen::Index>(i) * N, static_cast<Eigen::Index>(j) * N, N, N).trace();
    }

    [[nodiscard]] int dim() const { return data_->dim; }
    [[nodiscard]] const FDAlgebra& algebra() const { return data_->algebra; }
    [[nodiscard]] const AlgElement& gram(int i, int j) const {
        return data_->gram[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    /// B-valued inner product of coordinate vectors: sum of conj(x_i) y_j <x_i, x_j>.
    [[nodiscard]] AlgElement inner(const Vec& x, const Vec& y) const {
        AlgElement out = data_->algebra.zero();
        for (int i = 0; i < data_->dim; ++i) {
            const cplx xi = std::conj(x(i));
            if (xi == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < data_->dim; ++j) {
                const cplx c = xi * y(j);
                if (c != cplx(0.0, 0.0)) out += c * gram(i, j);
            }
        }
        return out;
    }

    /// Matrix of the right action x -> x.b on coordinates.
    [[nodiscard]] Mat right_matrix(const AlgElement& b) const {
        const Vec c = data_->algebra.coords(b);
        Mat r = Mat::Zero(data_->dim, data_->dim);
        for (int k = 0; k < data_->algebra.dim(); ++k)
            if (c(k) != cplx(0.0, 0.0)) r += c(k) * data_->right[static_cast<size_t>(k)];
        return r;
    }

    [[nodiscard]] const Mat& right_basis_matrix(int k) const { return data_->right[static_cast<size_t>(k)]; }

    [[nodiscard]] Vec right_apply(const Vec& x, const AlgElement& b) const { return right_matrix(b) * x; }

    /// Hilbert-module norm sqrt(||<x,x>||).
    [[nodiscard]] double norm(const Vec& x) const { return std::sqrt(inner(x, x).norm()); }

    /// Ambient-block Gram matrix (dN x dN), PSD for a valid module.
    [[nodiscard]] const Mat& big_gram() const { return data_->big_gram; }

    /// Scalarized Gram K_ij = tr<x_i, x_j>; positive definite iff the inner
    /// product is nondegenerate.
    [[nodiscard]] const Mat& scalar_gram() const { return data_->scalar_gram; }

    [[nodiscard]] CheckReport validate(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "hilbert_module";
        report.tolerance = tol;
        const auto& d = *data_;
        for (int i = 0; i < d.dim; ++i)
            for (int j = 0; j < d.dim; ++j)
                report.check("hermitian symmetry: <x,y>* = <y,x>",
                             (gram(i, j).adjoint() - gram(j, i)).frobenius(),
                             "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (d.big_gram.size() > 0) {
            Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (d.big_gram + d.big_gram.adjoint()));
            const double scale = std::max(1.0, d.big_gram.norm());
            report.check("positivity: Gram matrix PSD", std::max(0.0, -es.eigenvalues().minCoeff()) / scale);
        }
        if (d.scalar_gram.size() > 0) {
            Eigen::SelfAdjointEigenSolver<Mat> ks(0.5 * (d.scalar_gram + d.scalar_gram.adjoint()));
            report.require("nondegeneracy: <x,x> = 0 implies x = 0",
                           ks.eigenvalues().minCoeff() > tol * std::max(1.0, ks.eigenvalues().maxCoeff()),
                           "scalar Gram minimal eigenvalue " + std::to_string(ks.eigenvalues().minCoeff()));
        }
        const auto& basis = d.algebra.basis();
        for (int k = 0; k < d.algebra.dim(); ++k) {
            for (int i = 0; i < d.dim; ++i)
                for (int j = 0; j < d.dim; ++j) {
                    AlgElement lhs = d.algebra.zero();
                    for (int l = 0; l < d.dim; ++l) {
                        const cplx c = d.right[static_cast<size_t>(k)](l, j);
                        if (c != cplx(0.0, 0.0)) lhs += c * gram(i, l);
                    }
                    report.check("compatibility: <x, y.b> = <x,y> b",
                                 (lhs - gram(i, j) * basis[static_cast<size_t>(k)]).frobenius(),
                                 "b basis " + std::to_string(k));
                }
            for (int l = 0; l < d.algebra.dim(); ++l) {
                const Mat lhs = d.right[static_cast<size_t>(l)] * d.right[static_cast<size_t>(k)];
                const Mat rhs = right_matrix(basis[static_cast<size_t>(k)] * basis[static_cast<size_t>(l)]);
                report.check("associativity: (x.b).b' = x.(bb')", (lhs - rhs).norm(),
                             "pair (" + std::to_string(k) + "," + std::to_string(l) + ")");
            }
        }
        report.check("unitality: x.1 = x", (right_matrix(d.algebra.one()) - Mat::Identity(d.dim, d.dim)).norm());
        return report;
    }

private:
    struct Data {
        FDAlgebra algebra;
        std::vector<std::vector<AlgElement>> gram;
        std::vector<Mat> right;
        Mat big_gram;
        Mat scalar_gram;
        int dim = 0;
    };
    std::shared_ptr<const Data> data_;
};

/// Module operator together with its certified adjoint.
struct ModuleOperator {
    Mat op;
    Mat adj;
    bool adjointable = false;
    double residual = 0.0;
};

/// Solves <S x_i, x_j> = <x_i, T x_j> for S; reports the defect when T is not
/// adjointable (e.g. not a module map).
inline ModuleOperator adjoint_of(const HilbertModule& m, const Mat& T, double tol = kDefaultTol) {
    const int d = m.dim();
    const int N = m.algebra().ambient_size();
    const Eigen::Index rows_per = static_cast<Eigen::Index>(N) * N;
    Mat lhs = Mat::Zero(rows_per * d * d, static_cast<Eigen::Index>(d) * d);
    Vec rhs = Vec::Zero(rows_per * d * d);
    // Unknown S stored column-major: S_{ki} at index i*d + k.
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Eigen::Index block_row = (static_cast<Eigen::Index>(i) * d + j) * rows_per;
            AlgElement r = m.algebra().zero();
            for (int k = 0; k < d; ++k)
                if (T(k, j) != cplx(0.0, 0.0)) r += T(k, j) * m.gram(i, k);
            const Mat ramb = m.algebra().ambient(r);
            for (Eigen::Index p = 0; p < rows_per; ++p) rhs(block_row + p) = std::conj(ramb(p / N, p % N));
            for (int k = 0; k < d; ++k) {
                const Mat gamb = m.algebra().ambient(m.gram(k, j));
                for (Eigen::Index p = 0; p < rows_per; ++p)
                    lhs(block_row + p, static_cast<Eigen::Index>(i) * d + k) = std::conj(gamb(p / N, p % N));
            }
        }
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(lhs);
    const Vec sol = cod.solve(rhs);
    ModuleOperator out;
    out.op = T;
    out.adj = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) out.adj(k, i) = sol(static_cast<Eigen::Index>(i) * d + k);
    double res = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Vec si = out.adj.col(i);
            Vec tj = T.col(j);
            Vec ei = Vec::Zero(d);
            ei(i) = 1.0;
            Vec ej = Vec::Zero(d);
            ej(j) = 1.0;
            res = std::max(res, (m.inner(si, ej) - m.inner(ei, tj)).frobenius());
        }
    out.residual = res;
    const double scale = std::max(1.0, T.norm() * m.big_gram().norm());
    out.adjointable = res <= tol * scale;
    return out;
}

/// Rank-one operator Theta_{x,y} z = x . <y, z>.
inline ModuleOperator theta(const HilbertModule& m, const Vec& x, const Vec& y) {
    const int d = m.dim();
    ModuleOperator out;
    out.op = Mat::Zero(d, d);
    out.adj = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        Vec ej = Vec::Zero(d);
        ej(j) = 1.0;
        out.op.col(j) = m.right_apply(x, m.inner(y, ej));
        out.adj.col(j) = m.right_apply(y, m.inner(x, ej));
    }
    out.adjointable = true;
    out.residual = 0.0;
    return out;
}

/// Span of the rank-one operators (the compacts K(X); equals L(X) here).
struct CompactsSpan {
    SpanSolver solver;
    std::vector<Mat> basis_ops;          // theta(e_i, e_j) flattened order i*d+j
    std::vector<std::pair<int, int>> basis_pairs;

    /// Coefficients c with K = sum c_{ij} Theta_{e_i, e_j}; second = residual.
    [[nodiscard]] std::pair<Mat, double> theta_coords(int d, const Mat& k) const {
        const Vec v = flatten(k);
        const Vec c = solver.solve(v);
        const double res = (solver.columns() * c - v).norm();
        Mat coeff = Mat::Zero(d, d);
        for (size_t n = 0; n < basis_pairs.size(); ++n)
            coeff(basis_pairs[n].first, basis_pairs[n].second) = c(static_cast<Eigen::Index>(n));
        return {coeff, res};
    }
};

inline CompactsSpan compacts_span(const HilbertModule& m) {
    const int d = m.dim();
    CompactsSpan out;
    Mat cols(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Vec ei = Vec::Zero(d);
            ei(i) = 1.0;
            Vec ej = Vec::Zero(d);
            ej(j) = 1.0;
            const ModuleOperator th = theta(m, ei, ej);
            cols.col(static_cast<Eigen::Index>(i) * d + j) = flatten(th.op);
            out.basis_ops.push_back(th.op);
            out.basis_pairs.emplace_back(i, j);
        }
    out.solver = SpanSolver(cols);
    return out;
}

/// Whether span{<x_i, x_j>} is all of B.
inline bool is_full(const HilbertModule& m, double tol = kDefaultTol) {
    const int d = m.dim();
    Mat cols(m.algebra().zero().vec().size(), static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) cols.col(static_cast<Eigen::Index>(i) * d + j) = m.gram(i, j).vec();
    Mat alg_cols(m.algebra().zero().vec().size(), m.algebra().dim());
    for (int k = 0; k < m.algebra().dim(); ++k) alg_cols.col(k) = m.algebra().basis()[static_cast<size_t>(k)].vec();
    return spans_equal(cols, alg_cols, tol);
}

/// C*-correspondence: a right Hilbert module over B with a left action of A
/// by adjointable operators.
class Correspondence {
public:
    Correspondence() = default;

    Correspondence(FDAlgebra left_algebra, HilbertModule module, std::vector<Mat> left_mats)
        : data_(std::make_shared<Data>()) {
        auto& d = *std::const_pointer_cast<Data>(data_);
        d.left_algebra = std::move(left_algebra);
        d.module = std::move(module);
        d.left = std::move(left_mats);
        if (static_cast<int>(d.left.size()) != d.left_algebra.dim())
            throw std::invalid_argument("Correspondence: one left-action matrix per algebra basis element required");
        for (const auto& l : d.left)
            if (l.rows() != d.module.dim() || l.cols() != d.module.dim())
                throw std::invalid_argument("Correspondence: left-action matrix size mismatch");
    }

    [[nodiscard]] const FDAlgebra& left_algebra() const { return data_->left_algebra; }
    [[nodiscard]] const HilbertModule& module() const { return data_->module; }
    [[nodiscard]] const FDAlgebra& algebra() const { return data_->module.algebra(); }
    [[nodiscard]] int dim() const { return data_->module.dim(); }

    [[nodiscard]] Mat left_matrix(const AlgElement& a) const {
        const Vec c = data_->left_algebra.coords(a);
        Mat l = Mat::Zero(dim(), dim());
        for (int k = 0; k < data_->left_algebra.dim(); ++k)
            if (c(k) != cplx(0.0, 0.0)) l += c(k) * data_->left[static_cast<size_t>(k)];
        return l;
    }

    [[nodiscard]] const Mat& left_basis_matrix(int k) const { return data_->left[static_cast<size_t>(k)]; }

    [[nodiscard]] Vec left_apply(const AlgElement& a, const Vec& x) const { return left_matrix(a) * x; }

    [[nodiscard]] CheckReport validate(double tol = kDefaultTol) const {
        CheckReport report = data_->module.validate(tol);
        report.name = "correspondence";
        const auto& A = data_->left_algebra;
        const int d = dim();
        for (int k = 0; k < A.dim(); ++k) {
            const AlgElement& ak = A.basis()[static_cast<size_t>(k)];
            for (int l = 0; l < A.dim(); ++l)
                report.check("left action multiplicative: phi(a)phi(a') = phi(aa')",
                             (data_->left[static_cast<size_t>(k)] * data_->left[static_cast<size_t>(l)] -
                              left_matrix(ak * A.basis()[static_cast<size_t>(l)]))
                                 .norm(),
                             "pair (" + std::to_string(k) + "," + std::to_string(l) + ")");
            const Mat adj_action = left_matrix(ak.adjoint());
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    Vec ei = Vec::Zero(d);
                    ei(i) = 1.0;
                    Vec ej = Vec::Zero(d);
                    ej(j) = 1.0;
                    const AlgElement lhs = data_->module.inner(data_->left[static_cast<size_t>(k)] * ei, ej);
                    const AlgElement rhs = data_->module.inner(ei, adj_action * ej);
                    report.check("left action adjointable: <phi(a)x, y> = <x, phi(a*)y>", (lhs - rhs).frobenius(),
                                 "a basis " + std::to_string(k));
                }
        }
        report.check("left action unital: phi(1) = id",
                     (left_matrix(A.one()) - Mat::Identity(dim(), dim())).norm());
        const FDAlgebra& B = data_->module.algebra();
        for (int k = 0; k < A.dim(); ++k)
            for (int l = 0; l < B.dim(); ++l)
                report.check("bimodule: (a.x).b = a.(x.b)",
                             (data_->module.right_basis_matrix(l) * data_->left[static_cast<size_t>(k)] -
                              data_->left[static_cast<size_t>(k)] * data_->module.right_basis_matrix(l))
                                 .norm(),
                             "a basis " + std::to_string(k) + ", b basis " + std::to_string(l));
        return report;
    }

private:
    struct Data {
        FDAlgebra left_algebra;
        HilbertModule module;
        std::vector<Mat> left;
    };
    std::shared_ptr<const Data> data_;
};

/// A (unital) algebra viewed as the standard correspondence over itself.
inline Correspondence algebra_as_correspondence(const FDAlgebra& a) {
    const int d = a.dim();
    std::vector<std::vector<AlgElement>> gram(static_cast<size_t>(d), std::vector<AlgElement>(static_cast<size_t>(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            gram[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                a.basis()[static_cast<size_t>(i)].adjoint() * a.basis()[static_cast<size_t>(j)];
    std::vector<Mat> right(static_cast<size_t>(d));
    std::vector<Mat> left(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
        Mat r(d, d), l(d, d);
        for (int i = 0; i < d; ++i) {
            r.col(i) = a.coords(a.basis()[static_cast<size_t>(i)] * a.basis()[static_cast<size_t>(k)]);
            l.col(i) = a.coords(a.basis()[static_cast<size_t>(k)] * a.basis()[static_cast<size_t>(i)]);
        }
        right[static_cast<size_t>(k)] = r;
        left[static_cast<size_t>(k)] = l;
    }
    return Correspondence(a, HilbertModule(a, std::move(gram), std::move(right)), std::move(left));
}

/// Generating system (A0, X0, B0) for a correspondence.
struct GeneratingSystem {
    std::vector<AlgElement> a0;
    std::vector<Vec> x0;
    std::vector<AlgElement> b0;
};

namespace detail {
inline bool generates_algebra(const FDAlgebra& alg, const std::vector<AlgElement>& gens, double tol) {
    std::vector<AlgElement> seeds = gens;
    for (const auto& g : gens) seeds.push_back(g.adjoint());
    auto rank_of = [&](const std::vector<AlgElement>& elems) {
        Mat cols(alg.zero().vec().size(), static_cast<Eigen::Index>(elems.size()));
        for (size_t i = 0; i < elems.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = elems[i].vec();
        return span_rank(cols, tol);
    };
    std::vector<AlgElement> current = seeds;
    Eigen::Index rank = rank_of(current);
    for (int round = 0; round < alg.dim() + 1; ++round) {
        std::vector<AlgElement> next = current;
        for (const auto& a : current)
            for (const auto& g : seeds) next.push_back(a * g);
        const Eigen::Index next_rank = rank_of(next);
        current = std::move(next);
        if (next_rank == rank) break;
        rank = next_rank;
    }
    return rank == alg.dim();
}
}  // namespace detail

inline CheckReport verify_generating_system(const Correspondence& corr, const GeneratingSystem& sys,
                                            double tol = kDefaultTol) {
    CheckReport report;
    report.name = "generating_system";
    report.tolerance = tol;
    const int d = corr.dim();
    report.require("A0 generates the left algebra", detail::generates_algebra(corr.left_algebra(), sys.a0, tol));
    report.require("B0 generates the right algebra", detail::generates_algebra(corr.algebra(), sys.b0, tol));
    Mat xcols(d, static_cast<Eigen::Index>(sys.x0.size()));
    for (size_t i = 0; i < sys.x0.size(); ++i) xcols.col(static_cast<Eigen::Index>(i)) = sys.x0[i];
    report.require("X0 spans the module", span_rank(xcols, tol) == d);
    SpanSolver xspan(xcols);
    for (size_t i = 0; i < sys.x0.size(); ++i) {
        for (const auto& a : sys.a0)
            report.check("A0 X0 inside span X0", xspan.residual(corr.left_apply(a, sys.x0[i])),
                         "generator " + std::to_string(i));
        for (const auto& b : sys.b0)
            report.check("X0 B0 inside span X0", xspan.residual(corr.module().right_apply(sys.x0[i], b)),
                         "generator " + std::to_string(i));
    }
    return report;
}

/// Group action on a correspondence: gamma_s on module coordinates together
/// with an AlgAction alpha on the coefficient algebra.
class CorrAction {
public:
    CorrAction() = default;

    CorrAction(FiniteGroup group, Correspondence corr, AlgAction alpha, std::vector<Mat> gamma)
        : group_(std::move(group)), corr_(std::move(corr)), alpha_(std::move(alpha)), gamma_(std::move(gamma)) {
        if (static_cast<int>(gamma_.size()) != group_.order())
            throw std::invalid_argument("CorrAction: one gamma per group element required");
        for (const auto& g : gamma_)
            if (g.rows() != corr_.dim() || g.cols() != corr_.dim())
                throw std::invalid_argument("CorrAction: gamma size mismatch");
    }

    [[nodiscard]] const FiniteGroup& group() const { return group_; }
    [[nodiscard]] const Correspondence& correspondence() const { return corr_; }
    [[nodiscard]] const AlgAction& alpha() const { return alpha_; }
    [[nodiscard]] const Mat& gamma(int s) const { return gamma_[static_cast<size_t>(s)]; }
    [[nodiscard]] Vec apply(int s, const Vec& x) const { return gamma_[static_cast<size_t>(s)] * x; }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "verify_corr_action";
        report.tolerance = tol;
        report.absorb(verify_action(alpha_, tol));
        const int d = corr_.dim();
        const auto& g = group_;
        report.check("gamma_e = id", (gamma_[static_cast<size_t>(g.identity_element())] - Mat::Identity(d, d)).norm());
        for (int s = 0; s < g.order(); ++s)
            for (int t = 0; t < g.order(); ++t)
                report.check("gamma homomorphism",
                             (gamma_[static_cast<size_t>(s)] * gamma_[static_cast<size_t>(t)] -
                              gamma_[static_cast<size_t>(g.mul(s, t))])
                                 .norm(),
                             "s=" + g.label(s) + " t=" + g.label(t));
        for (int s = 0; s < g.order(); ++s) {
            for (int i = 0; i < d; ++i) {
                Vec ei = Vec::Zero(d);
                ei(i) = 1.0;
                for (int j = 0; j < d; ++j) {
                    Vec ej = Vec::Zero(d);
                    ej(j) = 1.0;
                    report.check("inner product equivariance: <g x, g y> = alpha<x, y>",
                                 (corr_.module().inner(apply(s, ei), apply(s, ej)) -
                                  alpha_.apply(s, corr_.module().inner(ei, ej)))
                                     .frobenius(),
                                 "s=" + g.label(s));
                }
                for (int k = 0; k < corr_.algebra().dim(); ++k) {
                    const AlgElement& bk = corr_.algebra().basis()[static_cast<size_t>(k)];
                    report.check("right equivariance: gamma(x.b) = gamma(x).alpha(b)",
                                 (apply(s, corr_.module().right_apply(ei, bk)) -
                                  corr_.module().right_apply(apply(s, ei), alpha_.apply(s, bk)))
                                     .norm(),
                                 "s=" + g.label(s));
                }
                for (int k = 0; k < corr_.left_algebra().dim(); ++k) {
                    const AlgElement& ak = corr_.left_algebra().basis()[static_cast<size_t>(k)];
                    report.check("left equivariance: gamma(a.x) = alpha(a).gamma(x)",
                                 (apply(s, corr_.left_apply(ak, ei)) -
                                  corr_.left_apply(alpha_.apply(s, ak), apply(s, ei)))
                                     .norm(),
                                 "s=" + g.label(s));
                }
            }
        }
        return report;
    }

private:
    FiniteGroup group_;
    Correspondence corr_;
    AlgAction alpha_;
    std::vector<Mat> gamma_;
};

/// Coordinate matrix of alpha_s on the algebra basis.
inline Mat action_coord_matrix(const AlgAction& act, int s) {
    const FDAlgebra& a = act.algebra();
    Mat m(a.dim(), a.dim());
    for (int j = 0; j < a.dim(); ++j) m.col(j) = a.coords(act.apply(s, a.basis()[static_cast<size_t>(j)]));
    return m;
}

/// The canonical lift of an algebra action to the standard correspondence
/// over that algebra (gamma_s = alpha_s on coordinates).
inline CorrAction standard_corr_action(const AlgAction& alpha) {
    Correspondence corr = algebra_as_correspondence(alpha.algebra());
    std::vector<Mat> gamma;
    gamma.reserve(static_cast<size_t>(alpha.group().order()));
    for (int s = 0; s < alpha.group().order(); ++s) gamma.push_back(action_coord_matrix(alpha, s));
    return CorrAction(alpha.group(), std::move(corr), alpha, std::move(gamma));
}

/// Grading of a correspondence by a finite group, over a graded coefficient
/// algebra: components X_s with X_s B_t inside X_st, <X_s, X_t> inside
/// B_{s^-1 t}, and A_s X_t inside X_st.
class CorrGrading {
public:
    CorrGrading() = default;

    CorrGrading(FiniteGroup group, Correspondence corr, std::vector<std::vector<Vec>> components, AlgGrading coeff)
        : group_(std::move(group)), corr_(std::move(corr)), components_(std::move(components)),
          coeff_(std::move(coeff)) {
        if (static_cast<int>(components_.size()) != group_.order())
            throw std::invalid_argument("CorrGrading: one component list per group element required");
        for (int s = 0; s < group_.order(); ++s) {
            Mat cols(corr_.dim(), static_cast<Eigen::Index>(components_[static_cast<size_t>(s)].size()));
            for (size_t k = 0; k < components_[static_cast<size_t>(s)].size(); ++k)
                cols.col(static_cast<Eigen::Index>(k)) = components_[static_cast<size_t>(s)][k];
            solvers_.emplace_back(cols);
        }
    }

    [[nodiscard]] const FiniteGroup& group() const { return group_; }
    [[nodiscard]] const Correspondence& correspondence() const { return corr_; }
    [[nodiscard]] const std::vector<Vec>& component(int s) const { return components_[static_cast<size_t>(s)]; }
    [[nodiscard]] const AlgGrading& coefficient_grading() const { return coeff_; }

    /// Module basis with degrees, ordered by degree then position.
    [[nodiscard]] std::vector<std::pair<Vec, int>> homogeneous_basis() const {
        std::vector<std::pair<Vec, int>> out;
        for (int s = 0; s < group_.order(); ++s)
            for (const auto& x : components_[static_cast<size_t>(s)]) out.emplace_back(x, s);
        return out;
    }

    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "verify_corr_grading";
        report.tolerance = tol;
        report.absorb(verify_grading(coeff_, tol));
        const auto& g = group_;
        int total = 0;
        for (const auto& comp : components_) total += static_cast<int>(comp.size());
        report.require("spanning: union of components is a module basis", total == corr_.dim());
        Mat all(corr_.dim(), total);
        Eigen::Index col = 0;
        for (const auto& comp : components_)
            for (const auto& x : comp) all.col(col++) = x;
        report.require("spanning: components linearly independent", span_rank(all, tol) == corr_.dim());

        for (int s = 0; s < g.order(); ++s)
            for (size_t i = 0; i < components_[static_cast<size_t>(s)].size(); ++i) {
                const Vec& xs = components_[static_cast<size_t>(s)][i];
                for (int t = 0; t < g.order(); ++t) {
                    for (const auto& bt : coeff_.component(t))
                        report.check("right rule: X_s B_t inside X_st",
                                     solvers_[static_cast<size_t>(g.mul(s, t))].residual(
                                         corr_.module().right_apply(xs, bt)),
                                     "s=" + g.label(s) + " t=" + g.label(t));
                    for (const auto& at : coeff_.component(t))
                        report.check("left rule: A_t X_s inside X_ts",
                                     solvers_[static_cast<size_t>(g.mul(t, s))].residual(corr_.left_apply(at, xs)),
                                     "s=" + g.label(s) + " t=" + g.label(t));
                    for (const auto& xt : components_[static_cast<size_t>(t)]) {
                        const AlgElement ip = corr_.module().inner(xs, xt);
                        report.check("inner rule: <X_s, X_t> inside B_{s^-1 t}",
                                     coeff_.component_solver(g.mul(g.inv(s), t)).residual(ip.vec()),
                                     "s=" + g.label(s) + " t=" + g.label(t));
                    }
                }
            }
        return report;
    }

private:
    FiniteGroup group_;
    Correspondence corr_;
    std::vector<std::vector<Vec>> components_;
    AlgGrading coeff_;
    std::vector<SpanSolver> solvers_;
};

/// The canonical lift of an algebra grading to the standard correspondence
/// over that algebra (module components = algebra components).
inline CorrGrading standard_corr_grading(const AlgGrading& grading) {
    Correspondence corr = algebra_as_correspondence(grading.algebra());
    std::vector<std::vector<Vec>> comps(static_cast<size_t>(grading.group().order()));
    for (int s = 0; s < grading.group().order(); ++s)
        for (const auto& e : grading.component(s))
            comps[static_cast<size_t>(s)].push_back(grading.algebra().coords(e));
    return CorrGrading(grading.group(), std::move(corr), std::move(comps), grading);
}

}  // namespace corrkit
