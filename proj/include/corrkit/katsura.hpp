#pragma once

#include <string>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/module.hpp"

namespace corrkit {

/// The ideal J_X = (ker phi)^perp. In finite dimensions every adjointable
/// operator is compact, so phi^{-1}(K(X)) is all of A and only the kernel
/// annihilator matters.
struct KatsuraIdeal {
    std::vector<AlgElement> basis;      // orthonormal coordinate basis of J_X
    std::vector<AlgElement> kernel;     // basis of ker phi
    std::vector<int> full_blocks;       // for full A: ambient blocks inside J_X
    bool blockwise = false;             // whether full_blocks is meaningful
};

inline KatsuraIdeal katsura_ideal(const Correspondence& corr, double tol = kDefaultTol) {
    KatsuraIdeal out;
    const FDAlgebra& a = corr.left_algebra();
    const int d = corr.dim();

    // ker phi as a subspace of A-coordinates.
    Mat phi_cols(static_cast<Eigen::Index>(d) * d, a.dim());
    for (int k = 0; k < a.dim(); ++k) phi_cols.col(k) = flatten(corr.left_basis_matrix(k));
    const Mat kernel_coords = null_space(phi_cols, tol);
    for (Eigen::Index c = 0; c < kernel_coords.cols(); ++c) out.kernel.push_back(a.from_coords(kernel_coords.col(c)));

    if (a.is_full()) {
        // Each ambient block is simple, so phi either vanishes on it or is
        // injective there; J_X is the sum of the blocks where it is injective.
        out.blockwise = true;
        int k = 0;
        for (size_t b = 0; b < a.block_dims().size(); ++b) {
            const int n = a.block_dims()[b];
            bool vanishes = true;
            for (int i = 0; i < n * n; ++i)
                if (corr.left_basis_matrix(k + i).norm() > tol) vanishes = false;
            if (!vanishes) {
                out.full_blocks.push_back(static_cast<int>(b));
                for (int i = 0; i < n * n; ++i) out.basis.push_back(a.basis()[static_cast<size_t>(k + i)]);
            }
            k += n * n;
        }
        return out;
    }

    // General case: two-sided annihilator of ker phi inside A.
    if (out.kernel.empty()) {
        out.basis = a.basis();
        return out;
    }
    const Eigen::Index veclen = a.zero().vec().size();
    Mat constraints(2 * veclen * static_cast<Eigen::Index>(out.kernel.size()), a.dim());
    for (int c = 0; c < a.dim(); ++c) {
        Eigen::Index row = 0;
        for (const auto& k : out.kernel) {
            constraints.block(row, c, veclen, 1) = (a.basis()[static_cast<size_t>(c)] * k).vec();
            row += veclen;
            constraints.block(row, c, veclen, 1) = (k * a.basis()[static_cast<size_t>(c)]).vec();
            row += veclen;
        }
    }
    const Mat null_coords = null_space(constraints, tol);
    for (Eigen::Index c = 0; c < null_coords.cols(); ++c) out.basis.push_back(a.from_coords(null_coords.col(c)));
    return out;
}

/// Outcome of the X.J_X = X probe, with the left-sided span reported too.
struct KatsuraNondegeneracy {
    bool nondegenerate = false;         // X.J_X = X
    Eigen::Index right_rank = 0;        // dim span(X.J_X)
    Eigen::Index left_rank = 0;         // dim span(phi(J_X)X)
    int module_dim = 0;
};

inline KatsuraNondegeneracy katsura_nondegeneracy(const Correspondence& corr, const KatsuraIdeal& ideal,
                                                  double tol = kDefaultTol) {
    KatsuraNondegeneracy out;
    const int d = corr.dim();
    out.module_dim = d;
    if (ideal.basis.empty()) {
        out.nondegenerate = (d == 0);
        return out;
    }
    Mat right_cols(d, static_cast<Eigen::Index>(ideal.basis.size()) * d);
    Mat left_cols(d, static_cast<Eigen::Index>(ideal.basis.size()) * d);
    Eigen::Index col = 0;
    for (const auto& j : ideal.basis) {
        const Mat r = corr.module().right_matrix(j);
        const Mat l = corr.left_matrix(j);
        for (int i = 0; i < d; ++i) {
            right_cols.col(col) = r.col(i);
            left_cols.col(col) = l.col(i);
            ++col;
        }
    }
    out.right_rank = span_rank(right_cols, tol);
    out.left_rank = span_rank(left_cols, tol);
    out.nondegenerate = (out.right_rank == d);
    return out;
}

inline bool is_katsura_nondegenerate(const Correspondence& corr, double tol = kDefaultTol) {
    return katsura_nondegeneracy(corr, katsura_ideal(corr, tol), tol).nondegenerate;
}

}  // namespace corrkit
