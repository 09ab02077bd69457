#include <catch2/catch_amalgamated.hpp>

#include "corrkit/classify.hpp"
#include "corrkit/flip.hpp"
#include "corrkit/graded_tensor.hpp"
#include "corrkit/group_algebra.hpp"

#include "test_util.hpp"

using namespace corrkit;
using namespace corrkit::testing;

namespace {

GradedAlgebra pauli_m2() {
    FDAlgebra m2({2}, "M2");
    std::vector<std::vector<AlgElement>> comps(2);
    comps[0] = {m2.matrix_unit(0, 0, 0), m2.matrix_unit(0, 1, 1)};
    comps[1] = {m2.matrix_unit(0, 0, 1), m2.matrix_unit(0, 1, 0)};
    AlgGrading grading(FiniteGroup::cyclic(2), m2, std::move(comps));
    Mat u = Mat::Identity(2, 2);
    u(1, 1) = -1.0;
    BlockAutomorphism id{{0}, {Mat::Identity(2, 2)}};
    BlockAutomorphism flip{{0}, {u}};
    AlgAction theta(FiniteGroup::cyclic(2), m2, {id, flip});
    return {m2, std::move(grading), std::move(theta)};
}

}  // namespace

TEST_CASE("the flip moves an untwisted factor across the twisted product") {
    FunctionAlgebra fa = function_algebra(FiniteGroup::cyclic(2));
    GroupAlgebra ga = group_algebra(FiniteGroup::cyclic(2));
    for (const FDAlgebra& c : {FDAlgebra({2}, "M2"), FDAlgebra({1}, "C")}) {
        Sigma23Flip flip = flip_sigma23(fa.translation, ga.grading, c);
        INFO(flip.report.summary());
        CHECK(flip.report.passed);
        CHECK(flip.lhs.verify().passed);
        CHECK(flip.rhs.verify().passed);
    }
}

TEST_CASE("the flip works for a three element group and a two block factor") {
    FunctionAlgebra fa = function_algebra(FiniteGroup::cyclic(3));
    GroupAlgebra ga = group_algebra(FiniteGroup::cyclic(3));
    Sigma23Flip flip = flip_sigma23(fa.translation, ga.grading, FDAlgebra({1, 1}, "C2"));
    INFO(flip.report.summary());
    CHECK(flip.report.passed);
}

TEST_CASE("the one generator Clifford algebra is a graded algebra") {
    CliffordOne cl = clifford_one();
    CheckReport report = verify_graded_algebra(cl.graded());
    INFO(report.summary());
    CHECK(report.passed);
    CHECK((cl.e * cl.e - cl.algebra.one()).frobenius() < 1e-12);
    CHECK((cl.e - cl.e.adjoint()).frobenius() < 1e-12);
}

TEST_CASE("the graded tensor square of the Clifford algebra is a full matrix algebra") {
    CliffordOne cl = clifford_one();
    GradedTensorCorrespondence gt = graded_tensor_correspondence(cl.graded(), cl.standard_correspondence(),
                                                                 cl.grading, standard_corr_grading(cl.grading));
    INFO(gt.koszul.summary());
    REQUIRE(gt.koszul.passed);
    CheckReport mod = gt.module.verify();
    INFO(mod.summary());
    CHECK(mod.passed);

    // Cl(1) graded-tensor Cl(1) is the Clifford algebra on two generators,
    // which is the simple algebra of two by two matrices...
    CHECK(classify(gt.algebra.algebra()) == AlgebraSignature{1, {2}});
    // ...whereas the ungraded tensor square is commutative of dimension four.
    TwistedAlgebra plain(AlgAction::trivial(FiniteGroup::cyclic(2), cl.algebra), cl.grading);
    CHECK(classify(plain.algebra()) == AlgebraSignature{4, {1, 1, 1, 1}});
}

TEST_CASE("odd elements pick up the Koszul sign in the inner product") {
    CliffordOne cl = clifford_one();
    GradedTensorCorrespondence gt = graded_tensor_correspondence(cl.graded(), cl.standard_correspondence(),
                                                                 cl.grading, standard_corr_grading(cl.grading));
    const Vec ecoords = cl.algebra.coords(cl.e);
    const Vec onecoords = cl.algebra.coords(cl.algebra.one());
    const AlgElement lhs = gt.module.correspondence().module().inner(
        gt.module.elementary(ecoords, ecoords), gt.module.elementary(onecoords, onecoords));
    // <e (x) e, 1 (x) 1> = (-1)^{1 (1+0)} <e,1> (x) <e,1> = -(e (x) e).
    const AlgElement rhs = gt.algebra.elementary(cl.e, cl.e) * cplx(-1.0, 0.0);
    CHECK((lhs - rhs).frobenius() < 1e-9);
}

TEST_CASE("the graded tensor with the Pauli grading gives the third Clifford algebra") {
    GradedAlgebra m2 = pauli_m2();
    REQUIRE(verify_graded_algebra(m2).passed);
    CliffordOne cl = clifford_one();
    GradedCorrespondence xm2{standard_corr_action(m2.theta), standard_corr_grading(m2.grading)};
    GradedTensorCorrespondence gt =
        graded_tensor_correspondence(m2, xm2, cl.grading, standard_corr_grading(cl.grading));
    INFO(gt.koszul.summary());
    REQUIRE(gt.koszul.passed);
    CHECK(gt.module.verify().passed);
    CHECK(classify(gt.algebra.algebra()) == AlgebraSignature{2, {2, 2}});
}

TEST_CASE("a wrong grading automorphism is reported") {
    CliffordOne cl = clifford_one();
    GradedAlgebra broken = cl.graded();
    broken.theta = AlgAction::trivial(FiniteGroup::cyclic(2), cl.algebra);
    CheckReport report = verify_graded_algebra(broken);
    CHECK_FALSE(report.passed);
    CHECK(has_witness(report, "theta is the grading sign automorphism"));
}
