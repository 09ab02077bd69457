#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"

namespace corrkit {

/// Isomorphism-class signature of a finite-dimensional C*-algebra: the
/// dimension of its center and the sizes of its simple summands.
struct AlgebraSignature {
    int center_dim = 0;
    std::vector<int> block_dims;  // sorted ascending

    [[nodiscard]] bool operator==(const AlgebraSignature& other) const {
        return center_dim == other.center_dim && block_dims == other.block_dims;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s = "center " + std::to_string(center_dim) + ", blocks [";
        for (size_t i = 0; i < block_dims.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(block_dims[i]);
        }
        return s + "]";
    }
};

/// Basis of the center as coordinate vectors.
inline std::vector<AlgElement> center_basis(const FDAlgebra& a, double tol = kDefaultTol) {
    const Eigen::Index veclen = a.zero().vec().size();
    Mat constraints(veclen * a.dim(), a.dim());
    for (int c = 0; c < a.dim(); ++c) {
        const AlgElement& ec = a.basis()[static_cast<size_t>(c)];
        for (int k = 0; k < a.dim(); ++k) {
            const AlgElement& ak = a.basis()[static_cast<size_t>(k)];
            constraints.block(static_cast<Eigen::Index>(k) * veclen, c, veclen, 1) = (ec * ak - ak * ec).vec();
        }
    }
    const Mat null = null_space(constraints, tol);
    std::vector<AlgElement> out;
    for (Eigen::Index c = 0; c < null.cols(); ++c) out.push_back(a.from_coords(null.col(c)));
    return out;
}

/// Classify by spectral projections of a generic self-adjoint central
/// element; the corner cut by each minimal central idempotent is a full
/// matrix algebra whose size is recovered from its linear dimension.
inline AlgebraSignature classify(const FDAlgebra& a, double tol = kDefaultTol) {
    AlgebraSignature sig;
    std::vector<AlgElement> center = center_basis(a, tol);
    sig.center_dim = static_cast<int>(center.size());

    std::vector<AlgElement> herm;
    for (const auto& z : center) {
        herm.push_back(0.5 * (z + z.adjoint()));
        herm.push_back(cplx(0.0, 0.5) * (z.adjoint() - z));
    }

    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> dist(1.0, 2.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        AlgElement c = a.zero();
        for (const auto& h : herm) c += cplx(dist(rng), 0.0) * h;
        const Mat amb = a.ambient(c);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (amb + amb.adjoint()));
        const Eigen::Index n = es.eigenvalues().size();

        // Cluster the spectrum; each cluster's spectral projection is a
        // candidate minimal central idempotent.
        const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        const double gap = 1e-7 * scale;
        std::vector<std::pair<double, Mat>> projections;
        Eigen::Index i = 0;
        while (i < n) {
            Eigen::Index j = i;
            while (j + 1 < n && es.eigenvalues()(j + 1) - es.eigenvalues()(j) <= gap) ++j;
            Mat p = Mat::Zero(amb.rows(), amb.cols());
            for (Eigen::Index k = i; k <= j; ++k)
                p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            projections.emplace_back(es.eigenvalues()(i), p);
            i = j + 1;
        }
        // Keep the spectral projections that lie in the algebra (for a
        // non-unital span the ambient complement shows up at eigenvalue 0
        // and is discarded); an eigenvalue collision merges two idempotents
        // and shrinks the count, in which case we redraw the coefficients.
        std::vector<AlgElement> idempotents;
        for (const auto& [eig, p] : projections) {
            const AlgElement pe = a.from_ambient(p);
            if (a.span_residual(pe) <= 1e-6 * std::max(1.0, pe.frobenius())) idempotents.push_back(pe);
        }
        if (static_cast<int>(idempotents.size()) != sig.center_dim) continue;

        std::vector<int> dims;
        bool ok = true;
        for (const auto& pe : idempotents) {
            Mat corner_cols(a.zero().vec().size(), a.dim());
            for (int k = 0; k < a.dim(); ++k)
                corner_cols.col(k) = (pe * a.basis()[static_cast<size_t>(k)] * pe).vec();
            const Eigen::Index r = span_rank(corner_cols, tol);
            const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(r))));
            if (d * d != static_cast<int>(r)) {
                ok = false;
                break;
            }
            dims.push_back(d);
        }
        if (!ok) continue;
        int total = 0;
        for (int d : dims) total += d * d;
        if (total != a.dim()) continue;
        std::sort(dims.begin(), dims.end());
        sig.block_dims = std::move(dims);
        return sig;
    }
    throw std::runtime_error("classify: could not separate the center spectrally");
}

}  // namespace corrkit
