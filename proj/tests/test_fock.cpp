#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <stdexcept>
#include <vector>

#include "corrkit/fock.hpp"
#include "corrkit/graph.hpp"
#include "corrkit/katsura.hpp"

#include "test_util.hpp"

using namespace corrkit;
using namespace corrkit::testing;

namespace {

/// The 2-cycle v0 --a--> v1 --b--> v0.
DirectedGraph two_cycle() {
    return DirectedGraph({"v0", "v1"}, {{"a", 0, 1}, {"b", 1, 0}});
}

/// The chain v0 --e1--> v1 --e2--> v2.
DirectedGraph chain_graph() {
    return DirectedGraph({"v0", "v1", "v2"}, {{"e1", 0, 1}, {"e2", 1, 2}});
}

/// Two edges with a common range: v0 --a--> v2 <--b-- v1.
DirectedGraph vee_graph() {
    return DirectedGraph({"v0", "v1", "v2"}, {{"a", 0, 2}, {"b", 1, 2}});
}

/// Number of composable edge chains of the given length, via powers of the
/// vertex adjacency matrix (entry (u, v) = number of edges from u to v).
long path_count(const DirectedGraph& g, int length) {
    const int nv = g.num_vertices();
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(nv, nv);
    for (int e = 0; e < g.num_edges(); ++e) adj(g.src(e), g.dst(e)) += 1.0;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(nv, nv);
    for (int k = 0; k < length; ++k) power = power * adj;
    return static_cast<long>(std::lround(power.sum()));
}

Vec unit(int dim, int i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("tensor powers of a graph correspondence count composable chains") {
    for (const DirectedGraph& g : {two_cycle(), chain_graph(), vee_graph()}) {
        const TensorPowers powers(graph_correspondence(g), 4);
        REQUIRE(powers.levels() == 4);
        REQUIRE(powers.level(0).dim() == g.num_vertices());
        for (int n = 1; n <= 4; ++n) {
            INFO("level " << n);
            REQUIRE(powers.level(n).dim() == path_count(g, n));
        }
        for (int n = 0; n <= 2; ++n) {
            REQUIRE(powers.level(n).module().validate().passed);
            REQUIRE(powers.level(n).validate().passed);
        }
    }

    // The chains of the 2-cycle at level 2 are the two closed walks, each
    // remembering the source vertex of its innermost edge.
    const TensorPowers powers(graph_correspondence(two_cycle()), 2);
    REQUIRE(powers.chains(2) == std::vector<std::vector<int>>{{0, 1, 1}, {1, 0, 0}});
    REQUIRE(powers.chains(1) == std::vector<std::vector<int>>{{0, 0}, {1, 1}});
}

TEST_CASE("tensor powers of an algebra over itself stay the algebra") {
    const FDAlgebra m2({2}, "M2");
    const Correspondence x = algebra_as_correspondence(m2);
    const TensorPowers powers(x, 3);
    for (int n = 0; n <= 3; ++n) {
        INFO("level " << n);
        REQUIRE(powers.level(n).dim() == 4);
        REQUIRE(powers.level(n).module().validate().passed);
        REQUIRE(powers.level(n).validate().passed);
    }

    // Under W_1 = A (x) A -> A, x (x) y -> xy, inner products must match:
    // <x (x) y, u (x) v> = (xy)* (uv).
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const Vec xy = powers.embed(0, unit(4, i), unit(4, j));
                    const Vec uv = powers.embed(0, unit(4, k), unit(4, l));
                    const AlgElement lhs = powers.level(1).module().inner(xy, uv);
                    const AlgElement rhs = (m2.basis()[i] * m2.basis()[j]).adjoint() * (m2.basis()[k] * m2.basis()[l]);
                    REQUIRE((lhs - rhs).frobenius() <= 1e-12);
                }

    REQUIRE_THROWS_AS(powers.level(4), std::out_of_range);
    REQUIRE_THROWS_AS(TensorPowers(x, -1), std::invalid_argument);
}

TEST_CASE("fock representation of the complex numbers is a truncated shift") {
    const FDAlgebra c({1}, "C");
    const Correspondence x = algebra_as_correspondence(c);
    const TruncatedFock fock(x, 4);
    REQUIRE(fock.dim() == 5);
    const ToeplitzRep& rep = fock.rep();

    const CheckReport report = rep.verify();
    INFO(report.summary());
    REQUIRE(report.passed);
    REQUIRE(report.max_residual <= 1e-12);

    // psi of the generator is the shift that raises the level by exactly one
    // and annihilates the top level.
    const Mat t = rep.psi(unit(1, 0)).blocks[0];
    const Mat tt = (t.adjoint() * t).real().cast<cplx>();
    for (int n = 0; n <= 4; ++n) {
        REQUIRE(std::abs((t.adjoint() * t)(n, n) - cplx(n < 4 ? 1.0 : 0.0)) <= 1e-12);
        REQUIRE(std::abs((t * t.adjoint())(n, n) - cplx(n > 0 ? 1.0 : 0.0)) <= 1e-12);
    }
    REQUIRE(tt.isApprox(Mat(tt.adjoint()), 1e-12));

    // The covariance defect of the Fock representation is exactly the norm of
    // the vacuum projection: strictly positive, and equal to one here.
    const auto j = katsura_ideal(x);
    REQUIRE(j.basis.size() == 1);
    const CovarianceDefect defect = cp_covariance_defect(rep, j.basis);
    REQUIRE(defect.expansion_residual <= 1e-12);
    REQUIRE(defect.defect > 0.5);
    REQUIRE(defect.defect == Catch::Approx(1.0).margin(1e-12));

    REQUIRE_THROWS_AS(TruncatedFock(x, 0), std::invalid_argument);
}

TEST_CASE("fock representation of a matrix algebra over itself") {
    const FDAlgebra m2({2}, "M2");
    const Correspondence x = algebra_as_correspondence(m2);
    const TruncatedFock fock(x, 2);
    REQUIRE(fock.dim() == 12);

    const CheckReport report = fock.rep().verify();
    INFO(report.summary());
    REQUIRE(report.passed);

    // phi is injective into the compacts, so the whole algebra is the
    // covariance ideal, and the Fock defect is the norm of a matrix unit
    // acting on the vacuum level: one.
    const auto j = katsura_ideal(x);
    REQUIRE(j.basis.size() == 4);
    const CovarianceDefect defect = cp_covariance_defect(fock.rep(), j.basis);
    REQUIRE(defect.expansion_residual <= 1e-9);
    REQUIRE(defect.defect == Catch::Approx(1.0).margin(1e-9));

    // psi^(0) on Theta_{a,b} acting on W_0 = A recovers pi(a b*).
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            Mat coeff = Mat::Zero(4, 4);
            coeff(i, k) = 1.0;
            const AlgElement lhs = psi_paren_n(fock.rep(), fock.powers(), 0, coeff);
            const AlgElement rhs = fock.rep().pi_of(m2.basis()[i] * m2.basis()[k].adjoint());
            REQUIRE((lhs - rhs).frobenius() <= 1e-12);
        }
}

TEST_CASE("fock representation of graph correspondences") {
    const DirectedGraph cyc = two_cycle();
    const Correspondence x = graph_correspondence(cyc);
    const TruncatedFock fock(x, 3);
    REQUIRE(fock.dim() == 8);
    const ToeplitzRep& rep = fock.rep();

    const CheckReport report = rep.verify();
    INFO(report.summary());
    REQUIRE(report.passed);

    // Creation concretely: psi(e) sends the lift of a level-n vector to the
    // lift of the embedded tensor at level n+1.
    const TensorPowers& powers = fock.powers();
    for (int i = 0; i < 2; ++i)
        for (int n = 0; n <= 2; ++n)
            for (int k = 0; k < powers.level(n).dim(); ++k) {
                const Vec in = fock.lift(n, unit(powers.level(n).dim(), k));
                const Vec expect = fock.lift(n + 1, powers.embed(n, unit(2, i), unit(powers.level(n).dim(), k)));
                REQUIRE((rep.psi(unit(2, i)).blocks[0] * in - expect).norm() <= 1e-12);
            }

    // psi^n via chain products obeys the recursion psi^{n+1}(x (x) eta) =
    // psi(x) psi^n(eta) on arbitrary (deterministic pseudo-random) vectors.
    std::mt19937 rng(2357u);
    for (int n = 0; n <= 2; ++n) {
        const Vec eta = random_vector(rng, powers.level(n).dim());
        const Vec xv = random_vector(rng, 2);
        const AlgElement lhs = psi_n(rep, powers, n + 1, powers.embed(n, xv, eta));
        const AlgElement rhs = rep.psi(xv) * psi_n(rep, powers, n, eta);
        REQUIRE((lhs - rhs).frobenius() <= 1e-9);
    }

    // Iterated identity (2): psi^n(w)* psi^n(w') = pi(<w, w'>) on the levels
    // that creation can still reach (0 .. N - n).
    for (int n = 1; n <= 3; ++n) {
        AlgElement low = rep.target.zero();
        for (int l = 0; l + n <= 3; ++l) low += fock.level_projection(l);
        for (int m = 0; m < powers.level(n).dim(); ++m)
            for (int m2 = 0; m2 < powers.level(n).dim(); ++m2) {
                const AlgElement lhs = psi_n(rep, powers, n, unit(powers.level(n).dim(), m)).adjoint() *
                                       psi_n(rep, powers, n, unit(powers.level(n).dim(), m2));
                const AlgElement rhs = rep.pi_of(powers.level(n).module().gram(m, m2));
                REQUIRE((low * (lhs - rhs) * low).frobenius() <= 1e-12);
            }
    }

    // psi^(n) identities hold on the whole truncated space.
    for (int n = 0; n <= 2; ++n) {
        const CheckReport pp = psi_paren_checks(rep, powers, n);
        INFO(pp.summary());
        REQUIRE(pp.passed);
        REQUIRE(pp.max_residual <= 1e-9);
    }

    // The receivers generate the covariance ideal; the Fock defect is the
    // norm of a vertex projection on the vacuum level.
    const CovarianceDefect defect = cp_covariance_defect(rep, katsura_ideal(x).basis);
    REQUIRE(defect.expansion_residual <= 1e-9);
    REQUIRE(defect.defect > 0.5);
    REQUIRE(defect.defect == Catch::Approx(1.0).margin(1e-9));

    // A graph whose paths die out: levels shrink to zero dimension and the
    // representation stays consistent.
    const TruncatedFock chain(graph_correspondence(chain_graph()), 3);
    REQUIRE(chain.dim() == 6);
    REQUIRE(chain.level_dim(0) == 3);
    REQUIRE(chain.level_dim(1) == 2);
    REQUIRE(chain.level_dim(2) == 1);
    REQUIRE(chain.level_dim(3) == 0);
    const CheckReport chain_report = chain.rep().verify();
    INFO(chain_report.summary());
    REQUIRE(chain_report.passed);
    const CovarianceDefect chain_defect = cp_covariance_defect(chain.rep(), katsura_ideal(chain.rep().corr).basis);
    REQUIRE(chain_defect.defect == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("cuntz-krieger representations of acyclic graphs") {
    SECTION("a single edge gives the 2x2 matrix-unit picture") {
        const CKRepresentation ck = ck_representation(DirectedGraph({"v0", "v1"}, {{"e", 0, 1}}));
        REQUIRE(ck.paths.size() == 2);
        REQUIRE(ck.start == std::vector<int>{0, 0});
        REQUIRE(ck.arrival == std::vector<int>{0, 1});
        const CheckReport report = ck.rep.verify();
        INFO(report.summary());
        REQUIRE(report.passed);
        const Mat psi = ck.rep.psi_images[0].blocks[0];
        REQUIRE(std::abs(psi(1, 0) - cplx(1.0)) <= 1e-15);
        REQUIRE(psi.cwiseAbs().sum() == Catch::Approx(1.0));
        const CovarianceDefect defect = cp_covariance_defect(ck.rep, katsura_ideal(ck.rep.corr).basis);
        REQUIRE(defect.defect <= 1e-12);
    }

    SECTION("two edges with a common range have a four-dimensional path space") {
        const CKRepresentation ck = ck_representation(vee_graph());
        REQUIRE(ck.paths.size() == 4);
        REQUIRE(ck.paths == std::vector<std::vector<int>>{{}, {}, {0}, {1}});
        REQUIRE(ck.arrival == std::vector<int>{0, 1, 2, 2});
        const CheckReport report = ck.rep.verify();
        INFO(report.summary());
        REQUIRE(report.passed);
        REQUIRE(report.max_residual <= 1e-12);

        // pi is faithful: every vertex supports at least one path.
        for (int v = 0; v < 3; ++v) REQUIRE(ck.rep.pi.images[v].frobenius() > 0.5);
        // pi(chi_v2) is the projection onto the two length-one paths.
        Mat expect = Mat::Zero(4, 4);
        expect(2, 2) = 1.0;
        expect(3, 3) = 1.0;
        REQUIRE((ck.rep.pi.images[2].blocks[0] - expect).norm() <= 1e-15);

        const CovarianceDefect defect = cp_covariance_defect(ck.rep, katsura_ideal(ck.rep.corr).basis);
        REQUIRE(defect.expansion_residual <= 1e-12);
        REQUIRE(defect.defect <= 1e-12);
    }

    SECTION("the chain graph has one maximal path of each length") {
        const CKRepresentation ck = ck_representation(chain_graph());
        REQUIRE(ck.paths.size() == 3);
        REQUIRE(ck.arrival == std::vector<int>{0, 1, 2});
        REQUIRE(ck.paths[2] == std::vector<int>{1, 0});
        REQUIRE(ck.rep.verify().passed);
        const CovarianceDefect defect = cp_covariance_defect(ck.rep, katsura_ideal(ck.rep.corr).basis);
        REQUIRE(defect.defect <= 1e-12);
    }

    SECTION("an edgeless graph is its own path space") {
        const CKRepresentation ck = ck_representation(DirectedGraph({"v0", "v1"}, {}));
        REQUIRE(ck.paths.size() == 2);
        REQUIRE(ck.rep.verify().passed);
        REQUIRE(cp_covariance_defect(ck.rep, katsura_ideal(ck.rep.corr).basis).defect == 0.0);
    }

    SECTION("cyclic graphs are rejected") {
        REQUIRE_THROWS_AS(ck_representation(two_cycle()), std::invalid_argument);
        REQUIRE_THROWS_AS(ck_representation(DirectedGraph({"v"}, {{"loop", 0, 0}})), std::invalid_argument);
        REQUIRE_THROWS_WITH(ck_representation(two_cycle()), Catch::Matchers::ContainsSubstring("cycle"));
        REQUIRE_THROWS_AS(ck_representation(DirectedGraph()), std::invalid_argument);
    }
}

TEST_CASE("generator products stay in the psi^n psi^m* span") {
    SECTION("cuntz-krieger representations") {
        for (const DirectedGraph& g : {vee_graph(), chain_graph()}) {
            const CKRepresentation ck = ck_representation(g);
            const TensorPowers powers(ck.rep.corr, 3);
            const CheckReport report = spanning_check(ck.rep, powers);
            INFO(report.summary());
            REQUIRE(report.passed);
        }
    }
    SECTION("truncated fock representations") {
        const FDAlgebra c({1}, "C");
        const TruncatedFock shift(algebra_as_correspondence(c), 4);
        REQUIRE(spanning_check(shift.rep(), shift.powers()).passed);

        const TruncatedFock cyc(graph_correspondence(two_cycle()), 3);
        const CheckReport report = spanning_check(cyc.rep(), cyc.powers());
        INFO(report.summary());
        REQUIRE(report.passed);
    }
}

TEST_CASE("gauge grading of the generated algebra") {
    SECTION("the chain graph generates the full 3x3 matrix algebra") {
        const CKRepresentation ck = ck_representation(chain_graph());
        const TensorPowers powers(ck.rep.corr, 3);
        const DualGrading grading = gauge_dual_grading(ck.rep, powers);
        REQUIRE(grading.algebra().dim() == 9);
        REQUIRE(grading.support() == std::vector<int>{-2, -1, 0, 1, 2});
        REQUIRE(grading.component(0).size() == 3);
        REQUIRE(grading.component(1).size() == 2);
        REQUIRE(grading.component(2).size() == 1);
        REQUIRE(grading.component(-1).size() == 2);
        REQUIRE(grading.component(-2).size() == 1);
        const CheckReport report = grading.verify();
        INFO(report.summary());
        REQUIRE(report.passed);
    }

    SECTION("two edges with a common range generate a proper subalgebra") {
        const CKRepresentation ck = ck_representation(vee_graph());
        const TensorPowers powers(ck.rep.corr, 2);
        const DualGrading grading = gauge_dual_grading(ck.rep, powers);
        REQUIRE(grading.algebra().dim() == 8);
        REQUIRE(grading.algebra().ambient_size() == 4);
        REQUIRE(grading.support() == std::vector<int>{-1, 0, 1});
        REQUIRE(grading.component(0).size() == 4);
        REQUIRE(grading.component(1).size() == 2);
        REQUIRE(grading.verify().passed);
    }

    SECTION("truncated fock representations are gauge graded") {
        const TruncatedFock shift(algebra_as_correspondence(FDAlgebra({1}, "C")), 3);
        REQUIRE(gauge_dual_grading(shift.rep(), shift.powers()).verify().passed);

        const TruncatedFock cyc(graph_correspondence(two_cycle()), 2);
        const DualGrading grading = gauge_dual_grading(cyc.rep(), cyc.powers());
        const CheckReport report = grading.verify();
        INFO(report.summary());
        REQUIRE(report.passed);
    }
}
