#pragma once

#include <stdexcept>
#include <vector>

#include "corrkit/common.hpp"
#include "corrkit/module.hpp"

namespace corrkit {

/// Concrete linking algebra of a right Hilbert B-module X: everything is
/// represented on (X (x)_B H) (+) H where H = C^N carries B by its ambient
/// block-diagonal matrices. The X corner lands in the off-diagonal block, the
/// compacts K(X) in the top-left corner, B in the bottom-right.
class LinkingAlgebra {
public:
    explicit LinkingAlgebra(const HilbertModule& m, double tol = kDefaultTol) : module_(m) {
        const int d = m.dim();
        const int N = m.algebra().ambient_size();
        const Eigen::Index raw = static_cast<Eigen::Index>(d) * N;
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m.big_gram() + m.big_gram().adjoint()));
        const double lmax = std::max(1.0, es.eigenvalues().maxCoeff());
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) > tol * lmax) keep.push_back(i);
        rank_ = static_cast<int>(keep.size());
        q_ = Mat::Zero(rank_, raw);
        qplus_ = Mat::Zero(raw, rank_);
        for (int r = 0; r < rank_; ++r) {
            const double lam = es.eigenvalues()(keep[static_cast<size_t>(r)]);
            q_.row(r) = std::sqrt(lam) * es.eigenvectors().col(keep[static_cast<size_t>(r)]).adjoint();
            qplus_.col(r) = es.eigenvectors().col(keep[static_cast<size_t>(r)]) / std::sqrt(lam);
        }
        size_ = rank_ + N;
    }

    [[nodiscard]] int size() const { return size_; }
    [[nodiscard]] int top_rank() const { return rank_; }
    [[nodiscard]] const HilbertModule& module() const { return module_; }

    /// x as an off-diagonal corner element of the linking algebra.
    [[nodiscard]] Mat embed_module(const Vec& x) const {
        const int N = module_.algebra().ambient_size();
        Mat out = Mat::Zero(size_, size_);
        out.block(0, rank_, rank_, N) = q_ * kron(x, Mat::Identity(N, N));
        return out;
    }

    /// b in the bottom-right corner.
    [[nodiscard]] Mat embed_algebra(const AlgElement& b) const {
        const int N = module_.algebra().ambient_size();
        Mat out = Mat::Zero(size_, size_);
        out.block(rank_, rank_, N, N) = module_.algebra().ambient(b);
        return out;
    }

    /// An adjointable operator T on X in the top-left corner.
    [[nodiscard]] Mat embed_operator(const Mat& t) const {
        const int N = module_.algebra().ambient_size();
        Mat out = Mat::Zero(size_, size_);
        out.block(0, 0, rank_, rank_) = q_ * kron(t, Mat::Identity(N, N)) * qplus_;
        return out;
    }

    /// The corner identities tying module, algebra, and compacts together:
    ///   (1) embed(x)* embed(y) = embed(<x, y>)
    ///   (2) embed(x) embed(b) = embed(x.b)
    ///   (3) embed(x) embed(y)* = embed(Theta_{x, y})
    [[nodiscard]] CheckReport verify(double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "linking_algebra";
        report.tolerance = tol;
        const int d = module_.dim();
        for (int i = 0; i < d; ++i) {
            Vec ei = Vec::Zero(d);
            ei(i) = 1.0;
            const Mat li = embed_module(ei);
            for (int j = 0; j < d; ++j) {
                Vec ej = Vec::Zero(d);
                ej(j) = 1.0;
                const Mat lj = embed_module(ej);
                report.check("corner (1): x* y = <x, y>",
                             spectral_norm(li.adjoint() * lj - embed_algebra(module_.inner(ei, ej))),
                             "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
                report.check("corner (3): x y* = Theta_{x,y}",
                             spectral_norm(li * lj.adjoint() - embed_operator(theta(module_, ei, ej).op)),
                             "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            for (int k = 0; k < module_.algebra().dim(); ++k) {
                const AlgElement& bk = module_.algebra().basis()[static_cast<size_t>(k)];
                report.check("corner (2): x b = x.b",
                             spectral_norm(li * embed_algebra(bk) - embed_module(module_.right_apply(ei, bk))),
                             "x basis " + std::to_string(i) + ", b basis " + std::to_string(k));
            }
        }
        return report;
    }

private:
    HilbertModule module_;
    Mat q_;
    Mat qplus_;
    int rank_ = 0;
    int size_ = 0;
};

inline LinkingAlgebra linking_algebra(const HilbertModule& m, double tol = kDefaultTol) {
    return LinkingAlgebra(m, tol);
}

}  // namespace corrkit
