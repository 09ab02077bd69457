#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corrkit/action.hpp"
#include "corrkit/algebra.hpp"
#include "corrkit/grading.hpp"
#include "corrkit/group.hpp"
#include "corrkit/group_algebra.hpp"

#include "test_util.hpp"

using namespace corrkit;
using corrkit::testing::random_full_element;
using corrkit::testing::random_span_element;

namespace {

// Independent norm oracle: sqrt of the largest eigenvalue of a* a per block.
double norm_oracle(const AlgElement& a) {
    double best = 0.0;
    for (const auto& b : a.blocks) {
        Eigen::SelfAdjointEigenSolver<Mat> es(b.adjoint() * b);
        if (es.eigenvalues().size() > 0) best = std::max(best, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
    }
    return best;
}

// Independent product oracle for permutation matrices via index composition.
Mat permutation_product_oracle(const FiniteGroup& g, int s, int t) {
    Mat m = Mat::Zero(g.order(), g.order());
    for (int x = 0; x < g.order(); ++x) m(g.mul(s, g.mul(t, x)), x) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("cyclic groups satisfy the defining table", "[group]") {
    const FiniteGroup z1 = FiniteGroup::cyclic(1);
    CHECK(z1.order() == 1);
    CHECK(z1.identity_element() == 0);

    const FiniteGroup z6 = FiniteGroup::cyclic(6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) CHECK(z6.mul(i, j) == (i + j) % 6);
        CHECK(z6.inv(i) == (6 - i) % 6);
    }
    CHECK(z6.is_abelian());
}

TEST_CASE("invalid multiplication tables are rejected", "[group]") {
    // Not associative: a Latin square that is not a group table.
    std::vector<std::vector<int>> latin = {{0, 1, 2, 3, 4},
                                           {1, 0, 3, 4, 2},
                                           {2, 4, 0, 1, 3},
                                           {3, 2, 4, 0, 1},
                                           {4, 3, 1, 2, 0}};
    CHECK_THROWS_AS(FiniteGroup({"e", "a", "b", "c", "d"}, latin), std::invalid_argument);
    // Row with a repeated value has no inverse for element 1.
    CHECK_THROWS_AS(FiniteGroup({"e", "a"}, {{0, 1}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("block algebra arithmetic matches direct oracles", "[fdalg]") {
    std::mt19937 rng(12345);
    const FDAlgebra alg({2, 3}, "A");
    CHECK(alg.dim() == 13);
    CHECK(alg.ambient_size() == 5);

    for (int trial = 0; trial < 20; ++trial) {
        const AlgElement a = random_full_element(rng, alg);
        const AlgElement b = random_full_element(rng, alg);

        const AlgElement ab = multiply(alg, a, b);
        for (size_t blk = 0; blk < ab.blocks.size(); ++blk) {
            // Triple-loop multiplication oracle.
            const Mat& x = a.blocks[blk];
            const Mat& y = b.blocks[blk];
            Mat expect = Mat::Zero(x.rows(), y.cols());
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                for (Eigen::Index j = 0; j < y.cols(); ++j)
                    for (Eigen::Index k = 0; k < x.cols(); ++k) expect(i, j) += x(i, k) * y(k, j);
            CHECK((ab.blocks[blk] - expect).norm() < 1e-12);
        }

        const AlgElement astar = involution(alg, a);
        for (size_t blk = 0; blk < astar.blocks.size(); ++blk)
            for (Eigen::Index i = 0; i < astar.blocks[blk].rows(); ++i)
                for (Eigen::Index j = 0; j < astar.blocks[blk].cols(); ++j)
                    CHECK(astar.blocks[blk](i, j) == std::conj(a.blocks[blk](j, i)));

        CHECK(operator_norm(alg, a) == Catch::Approx(norm_oracle(a)).margin(1e-10));
    }
}

TEST_CASE("C*-identity and norm properties hold on random elements", "[fdalg][property]") {
    std::mt19937 rng(777);
    const FDAlgebra alg({1, 2, 2}, "A");
    for (int trial = 0; trial < 25; ++trial) {
        const AlgElement a = random_full_element(rng, alg);
        const AlgElement b = random_full_element(rng, alg);
        const double na = a.norm();
        CHECK((a.adjoint() * a).norm() == Catch::Approx(na * na).epsilon(1e-9));
        CHECK(a.adjoint().norm() == Catch::Approx(na).epsilon(1e-9));
        CHECK((a * b).norm() <= na * b.norm() + 1e-9);
        CHECK((a + b).norm() <= na + b.norm() + 1e-9);
    }
}

TEST_CASE("group algebra realizes the left regular representation", "[fdalg]") {
    const FiniteGroup z2 = FiniteGroup::cyclic(2);
    const GroupAlgebra ga = group_algebra(z2);

    CHECK(ga.algebra.dim() == 2);
    CHECK(ga.algebra.ambient_size() == 2);
    CHECK((ga.u[0].blocks[0] - Mat::Identity(2, 2)).norm() == 0.0);
    Mat swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK((ga.u[1].blocks[0] - swap).norm() == 0.0);
    CHECK((ga.u[1] * ga.u[1] - ga.u[0]).frobenius() == 0.0);

    const FiniteGroup z5 = FiniteGroup::cyclic(5);
    const GroupAlgebra ga5 = group_algebra(z5);
    for (int s = 0; s < 5; ++s)
        for (int t = 0; t < 5; ++t) {
            const AlgElement prod = ga5.u[static_cast<size_t>(s)] * ga5.u[static_cast<size_t>(t)];
            CHECK((prod.blocks[0] - permutation_product_oracle(z5, s, t)).norm() == 0.0);
            CHECK((prod - ga5.u[static_cast<size_t>(z5.mul(s, t))]).frobenius() == 0.0);
        }

    SECTION("canonical grading passes verification") {
        const CheckReport rep = verify_grading(ga5.grading);
        CAPTURE(rep.witnesses.empty() ? "" : rep.witnesses.front().identity);
        CHECK(rep.passed);
    }
    SECTION("unitaries have norm one and the span is closed") {
        for (const auto& u : ga5.u) CHECK(u.norm() == Catch::Approx(1.0).margin(1e-12));
        CHECK(ga5.algebra.contains(ga5.u[1] * ga5.u[3]));
        Mat e00 = Mat::Zero(5, 5);
        e00(0, 0) = 1.0;
        CHECK_FALSE(ga5.algebra.contains(AlgElement({e00})));
    }
}

TEST_CASE("function algebra carries the translation action", "[fdalg]") {
    const FiniteGroup z3 = FiniteGroup::cyclic(3);
    const FunctionAlgebra fa = function_algebra(z3);
    CHECK(fa.algebra.dim() == 3);

    // (lambda_s chi_g) = chi_{sg}: independent index oracle.
    for (int s = 0; s < 3; ++s)
        for (int g = 0; g < 3; ++g) {
            const AlgElement moved = fa.translation.apply(s, fa.chi[static_cast<size_t>(g)]);
            CHECK((moved - fa.chi[static_cast<size_t>(z3.mul(s, g))]).frobenius() == 0.0);
        }
    CHECK(verify_action(fa.translation).passed);
}

TEST_CASE("verify_action flags broken data with named identities", "[fdalg]") {
    const FiniteGroup z2 = FiniteGroup::cyclic(2);

    SECTION("non-unitary conjugator yields a non-unital linear map") {
        const FDAlgebra alg({1}, "C");
        BlockAutomorphism id{{0}, {Mat::Identity(1, 1)}};
        BlockAutomorphism bad{{0}, {Mat::Identity(1, 1) * 2.0}};
        const AlgAction action(z2, alg, {id, bad});
        const CheckReport rep = verify_action(action);
        CHECK_FALSE(rep.passed);
        bool unit_violation = false;
        for (const auto& w : rep.witnesses)
            if (w.identity.find("unit preservation") != std::string::npos) unit_violation = true;
        CHECK(unit_violation);
    }

    SECTION("inconsistent composition table breaks the homomorphism law") {
        const FiniteGroup z3 = FiniteGroup::cyclic(3);
        const FunctionAlgebra fa = function_algebra(z3);
        // Reuse the translation by 1 for both nontrivial elements.
        std::vector<BlockAutomorphism> maps = {fa.translation.map(0), fa.translation.map(1), fa.translation.map(1)};
        const AlgAction action(z3, fa.algebra, std::move(maps));
        const CheckReport rep = verify_action(action);
        CHECK_FALSE(rep.passed);
        bool hom_violation = false;
        for (const auto& w : rep.witnesses)
            if (w.identity.find("homomorphism") != std::string::npos) hom_violation = true;
        CHECK(hom_violation);
    }

    SECTION("actions preserve norms once verified") {
        std::mt19937 rng(99);
        const FunctionAlgebra fa = function_algebra(z2);
        REQUIRE(verify_action(fa.translation).passed);
        for (int trial = 0; trial < 10; ++trial) {
            const AlgElement a = random_full_element(rng, fa.algebra);
            CHECK(fa.translation.apply(1, a).norm() == Catch::Approx(a.norm()).margin(1e-12));
        }
    }
}

TEST_CASE("gradings verify and decompose correctly", "[fdalg]") {
    const FiniteGroup z2 = FiniteGroup::cyclic(2);

    SECTION("matrix units of M2 grade by parity") {
        const FDAlgebra m2({2}, "M2");
        std::vector<std::vector<AlgElement>> comps(2);
        comps[0] = {m2.matrix_unit(0, 0, 0), m2.matrix_unit(0, 1, 1)};
        comps[1] = {m2.matrix_unit(0, 0, 1), m2.matrix_unit(0, 1, 0)};
        const AlgGrading grading(z2, m2, comps);
        CHECK(verify_grading(grading).passed);

        std::mt19937 rng(5);
        const AlgElement a = random_full_element(rng, m2);
        const auto dec = grading.homogeneous_decomposition(a);
        CHECK(dec.residual < 1e-12);
        CHECK(dec.parts[0].blocks[0](0, 1) == cplx(0.0, 0.0));
        CHECK(dec.parts[1].blocks[0](0, 0) == cplx(0.0, 0.0));
        CHECK((dec.parts[0] + dec.parts[1] - a).frobenius() < 1e-12);
    }

    SECTION("group algebra decomposition recovers known coordinates") {
        const GroupAlgebra ga = group_algebra(z2);
        const AlgElement a = cplx(2.0, 0.0) * ga.u[0] + cplx(0.0, 3.0) * ga.u[1];
        const auto dec = ga.grading.homogeneous_decomposition(a);
        CHECK(dec.residual < 1e-12);
        CHECK((dec.parts[0] - cplx(2.0, 0.0) * ga.u[0]).frobenius() < 1e-12);
        CHECK((dec.parts[1] - cplx(0.0, 3.0) * ga.u[1]).frobenius() < 1e-12);
        CHECK(ga.grading.degree_of(ga.u[1]) == 1);
        CHECK_THROWS_AS(ga.grading.degree_of(a), std::invalid_argument);
    }

    SECTION("misassigned components fail the product rule") {
        const GroupAlgebra ga = group_algebra(z2);
        std::vector<std::vector<AlgElement>> comps(2);
        comps[0] = {ga.u[1]};
        comps[1] = {ga.u[0]};
        const AlgGrading grading(z2, ga.algebra, comps);
        const CheckReport rep = verify_grading(grading);
        CHECK_FALSE(rep.passed);
        bool product_violation = false;
        for (const auto& w : rep.witnesses)
            if (w.identity.find("product rule") != std::string::npos) product_violation = true;
        CHECK(product_violation);
    }

    SECTION("non-spanning components are reported") {
        const FDAlgebra m2({2}, "M2");
        std::vector<std::vector<AlgElement>> comps(2);
        comps[0] = {m2.matrix_unit(0, 0, 0)};
        comps[1] = {m2.matrix_unit(0, 0, 1), m2.matrix_unit(0, 1, 0)};
        const AlgGrading grading(z2, m2, comps);
        const CheckReport rep = verify_grading(grading);
        CHECK_FALSE(rep.passed);
        const AlgElement outside = m2.matrix_unit(0, 1, 1);
        const auto dec = grading.homogeneous_decomposition(outside);
        CHECK(dec.residual > 0.5);
    }
}

TEST_CASE("subalgebra span bases must be closed", "[fdalg]") {
    // span{E01} inside M2 is not involution-closed.
    CHECK_THROWS_AS(FDAlgebra({2}, {AlgElement({(Mat(2, 2) << 0, 1, 0, 0).finished()})}, "bad"),
                    std::invalid_argument);
}

TEST_CASE("tensor products multiply blockwise", "[fdalg]") {
    std::mt19937 rng(2024);
    const FDAlgebra a({1, 2}, "A");
    const FDAlgebra b({2}, "B");
    const FDAlgebra ab = tensor_product(a, b);
    CHECK(ab.block_dims() == std::vector<int>{2, 4});
    CHECK(ab.dim() == a.dim() * b.dim());

    const AlgElement x1 = random_full_element(rng, a);
    const AlgElement x2 = random_full_element(rng, a);
    const AlgElement y1 = random_full_element(rng, b);
    const AlgElement y2 = random_full_element(rng, b);
    const AlgElement lhs = tensor_element(x1, y1) * tensor_element(x2, y2);
    const AlgElement rhs = tensor_element(x1 * x2, y1 * y2);
    CHECK((lhs - rhs).frobenius() < 1e-10);
}

TEST_CASE("cyclic dual action is a verified action with known phases", "[fdalg]") {
    const FiniteGroup z4 = FiniteGroup::cyclic(4);
    const GroupAlgebra ga = group_algebra(z4);
    const AlgAction dual = cyclic_dual_action(z4, ga);
    CHECK(verify_action(dual).passed);
    // alpha_1(u_1) = i u_1
    const AlgElement moved = dual.apply(1, ga.u[1]);
    CHECK((moved - cplx(0.0, 1.0) * ga.u[1]).frobenius() < 1e-12);
    // alpha_2(u_3) = exp(2 pi i * 6/4) u_3 = -i^2... phase exp(3 pi i) = -1
    const AlgElement moved2 = dual.apply(2, ga.u[3]);
    CHECK((moved2 - cplx(-1.0, 0.0) * ga.u[3]).frobenius() < 1e-12);
}
