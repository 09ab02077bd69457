#pragma once

#include <utility>
#include <vector>

#include "corrkit/action.hpp"
#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/grading.hpp"
#include "corrkit/group.hpp"

namespace corrkit {

/// Left-regular permutation matrix of s on l^2(G): e_t -> e_{st}.
inline Mat left_regular(const FiniteGroup& g, int s) {
    Mat m = Mat::Zero(g.order(), g.order());
    for (int t = 0; t < g.order(); ++t) m(g.mul(s, t), t) = 1.0;
    return m;
}

/// Reduced group C*-algebra span{u_s} inside M_{|G|}, with its canonical grading.
struct GroupAlgebra {
    FDAlgebra algebra;
    AlgGrading grading;
    std::vector<AlgElement> u;
};

inline GroupAlgebra group_algebra(const FiniteGroup& g) {
    std::vector<AlgElement> u;
    u.reserve(static_cast<size_t>(g.order()));
    for (int s = 0; s < g.order(); ++s) u.emplace_back(std::vector<Mat>{left_regular(g, s)});
    FDAlgebra alg({g.order()}, u, "C*(" + std::to_string(g.order()) + ")");
    std::vector<std::vector<AlgElement>> comps(static_cast<size_t>(g.order()));
    for (int s = 0; s < g.order(); ++s) comps[static_cast<size_t>(s)] = {u[static_cast<size_t>(s)]};
    AlgGrading grading(g, alg, std::move(comps));
    return {std::move(alg), std::move(grading), std::move(u)};
}

/// c_0(G) as |G| one-dimensional blocks, with the left-translation action
/// (lambda_s f)(t) = f(s^-1 t) as a pure block permutation.
struct FunctionAlgebra {
    FDAlgebra algebra;
    AlgAction translation;
    std::vector<AlgElement> chi;
};

inline FunctionAlgebra function_algebra(const FiniteGroup& g) {
    std::vector<int> dims(static_cast<size_t>(g.order()), 1);
    FDAlgebra alg(dims, "c0(" + std::to_string(g.order()) + ")");
    std::vector<AlgElement> chi;
    chi.reserve(static_cast<size_t>(g.order()));
    for (int s = 0; s < g.order(); ++s) chi.push_back(alg.matrix_unit(s, 0, 0));
    std::vector<BlockAutomorphism> maps;
    maps.reserve(static_cast<size_t>(g.order()));
    for (int s = 0; s < g.order(); ++s) {
        BlockAutomorphism m;
        m.perm.resize(static_cast<size_t>(g.order()));
        m.unitary.assign(static_cast<size_t>(g.order()), Mat::Identity(1, 1));
        for (int j = 0; j < g.order(); ++j) m.perm[static_cast<size_t>(j)] = g.mul(s, j);
        maps.push_back(std::move(m));
    }
    AlgAction translation(g, alg, std::move(maps));
    return {std::move(alg), std::move(translation), std::move(chi)};
}

/// Dual action of Z_n on C*(Z_n): u_k -> exp(2 pi i s k / n) u_k, realized by
/// diagonal unitary conjugation.
inline AlgAction cyclic_dual_action(const FiniteGroup& g, const GroupAlgebra& ga) {
    const int n = g.order();
    std::vector<BlockAutomorphism> maps;
    maps.reserve(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        BlockAutomorphism m;
        m.perm = {0};
        Mat d = Mat::Zero(n, n);
        for (int t = 0; t < n; ++t) {
            const double angle = 2.0 * EIGEN_PI * static_cast<double>(s) * static_cast<double>(t) / static_cast<double>(n);
            d(t, t) = cplx(std::cos(angle), std::sin(angle));
        }
        m.unitary = {d};
        maps.push_back(std::move(m));
    }
    return AlgAction(g, ga.algebra, std::move(maps));
}

}  // namespace corrkit
