#pragma once

#include <utility>
#include <vector>

#include "corrkit/action.hpp"
#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/grading.hpp"
#include "corrkit/isom.hpp"
#include "corrkit/twisted_algebra.hpp"

namespace corrkit {

/// The action alpha (x) id on the tensor product A (x) C.
inline AlgAction action_tensor_id(const AlgAction& alpha, const FDAlgebra& c) {
    FDAlgebra prod = tensor_product(alpha.algebra(), c);
    const auto& adims = alpha.algebra().block_dims();
    const auto& cdims = c.block_dims();
    const int nc = static_cast<int>(cdims.size());
    std::vector<BlockAutomorphism> maps;
    maps.reserve(static_cast<size_t>(alpha.group().order()));
    for (int s = 0; s < alpha.group().order(); ++s) {
        const BlockAutomorphism& m = alpha.map(s);
        BlockAutomorphism t;
        t.perm.resize(adims.size() * cdims.size());
        t.unitary.resize(adims.size() * cdims.size());
        for (size_t i = 0; i < adims.size(); ++i)
            for (size_t j = 0; j < cdims.size(); ++j) {
                const size_t pb = i * cdims.size() + j;
                t.perm[pb] = m.perm[i] * nc + static_cast<int>(j);
                t.unitary[pb] = kron(m.unitary[i], Mat::Identity(cdims[j], cdims[j]));
            }
        maps.push_back(std::move(t));
    }
    return AlgAction(alpha.group(), std::move(prod), std::move(maps));
}

/// The grading of B (x) C whose degree-s part is B_s (x) C.
inline AlgGrading grading_tensor_full(const AlgGrading& gb, const FDAlgebra& c) {
    FDAlgebra prod = tensor_product(gb.algebra(), c);
    std::vector<std::vector<AlgElement>> comps(static_cast<size_t>(gb.group().order()));
    for (int s = 0; s < gb.group().order(); ++s)
        for (const auto& h : gb.component(s))
            for (int k = 0; k < c.dim(); ++k)
                comps[static_cast<size_t>(s)].push_back(tensor_element(h, c.basis()[static_cast<size_t>(k)]));
    return AlgGrading(gb.group(), std::move(prod), std::move(comps));
}

/// The flip isomorphism A boxtimes (B (x) C) -> (A (x) C) boxtimes B that
/// moves the untwisted tensor factor C across the twisted product:
///     i_A(a) i_{B(x)C}(b (x) c)  |->  i_{A(x)C}(a (x) c) i_B(b).
struct Sigma23Flip {
    TwistedAlgebra lhs;
    TwistedAlgebra rhs;
    AlgebraMap iso;
    CheckReport report;
};

inline Sigma23Flip flip_sigma23(const AlgAction& alpha, const AlgGrading& gb, const FDAlgebra& c,
                                double tol = kDefaultTol) {
    Sigma23Flip out;
    out.lhs = TwistedAlgebra(alpha, grading_tensor_full(gb, c), tol);
    out.rhs = TwistedAlgebra(action_tensor_id(alpha, c), gb, tol);
    out.iso.domain = out.lhs.algebra();
    out.iso.codomain = out.rhs.algebra();
    const FDAlgebra& a = alpha.algebra();
    auto homb = gb.homogeneous_basis();
    // The homogeneous basis of the tensor grading enumerates (h, c_k) pairs
    // degree by degree, so lhs basis index (i, b dC + k) pairs with h_b, c_k.
    for (int i = 0; i < a.dim(); ++i)
        for (const auto& [h, deg] : homb)
            for (int k = 0; k < c.dim(); ++k)
                out.iso.images.push_back(out.rhs.elementary(
                    tensor_element(a.basis()[static_cast<size_t>(i)], c.basis()[static_cast<size_t>(k)]), h));
    out.report = verify_algebra_isomorphism(out.iso, tol);
    out.report.name = "sigma23_flip";
    return out;
}

}  // namespace corrkit
