#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "corrkit/fock.hpp"
#include "corrkit/graph.hpp"
#include "corrkit/product_rep.hpp"

#include "test_util.hpp"

using namespace corrkit;
using Catch::Matchers::ContainsSubstring;

namespace {

Vec unit(int dim, int i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    return v;
}

/// Two sources feeding a shared sink through swapped middle vertices:
/// a: v0 -> v2, b: v1 -> v3, c: v2 -> v4, d: v3 -> v4.
DirectedGraph two_track_graph() {
    return DirectedGraph({"v0", "v1", "v2", "v3", "v4"},
                         {{"a", 0, 2}, {"b", 1, 3}, {"c", 2, 4}, {"d", 3, 4}});
}

/// Z/2 symmetry of the two-track graph swapping the tracks.
GraphAction two_track_swap() {
    return {FiniteGroup::cyclic(2), {{0, 1, 2, 3, 4}, {1, 0, 3, 2, 4}}, {{0, 1, 2, 3}, {1, 0, 3, 2}}};
}

/// Two edges with a common range and swapped sources: A: v0 -> v2 <- v1 :B.
DirectedGraph vee_graph() {
    return DirectedGraph({"v0", "v1", "v2"}, {{"A", 0, 2}, {"B", 1, 2}});
}

GraphAction vee_swap() {
    return {FiniteGroup::cyclic(2), {{0, 1, 2}, {1, 0, 2}}, {{0, 1}, {1, 0}}};
}

/// The chain v0 -> v1 -> v2 -> v3 with the trivial Z/2 symmetry.
DirectedGraph three_chain_graph() {
    return DirectedGraph({"v0", "v1", "v2", "v3"}, {{"e1", 0, 1}, {"e2", 1, 2}, {"e3", 2, 3}});
}

GraphAction three_chain_trivial() {
    return {FiniteGroup::cyclic(2), {{0, 1, 2, 3}, {0, 1, 2, 3}}, {{0, 1, 2}, {0, 1, 2}}};
}

/// One edge w0 -> w1 labeled by the generator of Z/2.
DirectedGraph one_edge_graph() {
    return DirectedGraph({"w0", "w1"}, {{"f", 0, 1}});
}

EdgeLabeling one_edge_labels() {
    return {FiniteGroup::cyclic(2), {1}};
}

/// Out-star w1 <- w0 -> w2 with labels e and the generator.
DirectedGraph out_star_graph() {
    return DirectedGraph({"w0", "w1", "w2"}, {{"f0", 0, 1}, {"f1", 0, 2}});
}

EdgeLabeling out_star_labels() {
    return {FiniteGroup::cyclic(2), {0, 1}};
}

/// The labeled chain w0 --f0 (generator)--> w1 --f1 (e)--> w2.
DirectedGraph labeled_chain_graph() {
    return DirectedGraph({"w0", "w1", "w2"}, {{"f0", 0, 1}, {"f1", 1, 2}});
}

EdgeLabeling labeled_chain_labels() {
    return {FiniteGroup::cyclic(2), {1, 0}};
}

struct ProductFixture {
    DirectedGraph e;
    DirectedGraph f;
    GraphAction act;
    EdgeLabeling lab;
    CKRepresentation ckx;
    CKRepresentation cky;
    CorrAction xact;
    CorrGrading ygrad;
    ProductRepresentation pr;
};

ProductFixture make_fixture(DirectedGraph e, GraphAction act, DirectedGraph f, EdgeLabeling lab) {
    CKRepresentation ckx = ck_representation(e);
    CKRepresentation cky = ck_representation(f);
    CorrAction xact = graph_action_lift(e, act);
    CorrGrading ygrad = labeling_grading(f, lab);
    const AlgAction induced = ck_induced_action(ckx, act);
    const AlgGrading induced_grading = ck_induced_grading(cky, lab);
    ProductRepresentation pr = product_representation(ckx.rep, xact, induced, cky.rep, ygrad, induced_grading);
    return {std::move(e),   std::move(f),    std::move(act),   std::move(lab), std::move(ckx),
            std::move(cky), std::move(xact), std::move(ygrad), std::move(pr)};
}

const ProductFixture& two_track_fixture() {
    static const ProductFixture fx = make_fixture(two_track_graph(), two_track_swap(), one_edge_graph(),
                                                  one_edge_labels());
    return fx;
}

const ProductFixture& vee_star_fixture() {
    static const ProductFixture fx = make_fixture(vee_graph(), vee_swap(), out_star_graph(), out_star_labels());
    return fx;
}

const ProductFixture& chain_fixture() {
    static const ProductFixture fx = make_fixture(three_chain_graph(), three_chain_trivial(), labeled_chain_graph(),
                                                  labeled_chain_labels());
    return fx;
}

/// Index of the reduced chain basis vector with the given chain content.
int chain_index(const TensorPowers& powers, int level, const std::vector<int>& chain) {
    const auto& chains = powers.chains(level);
    for (size_t i = 0; i < chains.size(); ++i)
        if (chains[i] == chain) return static_cast<int>(i);
    FAIL("chain not found in level " << level);
    return -1;
}

}  // namespace

TEST_CASE("induced path space action and grading of a graph symmetry") {
    const DirectedGraph e = two_track_graph();
    const GraphAction act = two_track_swap();
    const CKRepresentation ck = ck_representation(e);
    REQUIRE(ck.paths.size() == 6);

    const AlgAction induced = ck_induced_action(ck, act);
    const CheckReport action_report = verify_action(induced, 1e-12);
    INFO(action_report.summary());
    REQUIRE(action_report.passed);

    // pi(chi_{v0}) and pi(chi_{v1}) are swapped, and the edge lift commutes
    // with the path permutation through psi.
    const CorrAction xact = graph_action_lift(e, act);
    REQUIRE((induced.apply(1, ck.rep.pi.images[0]) - ck.rep.pi.images[1]).frobenius() <= 1e-12);
    for (int i = 0; i < e.num_edges(); ++i)
        REQUIRE((ck.rep.psi(xact.gamma(1).col(i)) - induced.apply(1, ck.rep.psi_images[static_cast<size_t>(i)]))
                    .frobenius() <= 1e-12);

    SECTION("a permutation that is not a graph symmetry is rejected") {
        GraphAction bogus = act;
        bogus.eperm[1] = {2, 3, 0, 1};  // exchanges edges with different endpoints
        REQUIRE_THROWS_MATCHES(ck_induced_action(ck, bogus), std::invalid_argument,
                               Catch::Matchers::MessageMatches(ContainsSubstring("path space")));
    }

    SECTION("the labeled chain grades its path space by label products") {
        const CKRepresentation cky = ck_representation(labeled_chain_graph());
        const AlgGrading grading = ck_induced_grading(cky, labeled_chain_labels());
        const CheckReport grading_report = verify_grading(grading, 1e-12);
        INFO(grading_report.summary());
        REQUIRE(grading_report.passed);
        // Path degrees are delta(empty) = e, delta(f0) = g, delta(f1 f0) = g,
        // so E_{10} has degree g and E_{21} degree e.
        REQUIRE(grading.degree_of(cky.rep.target.matrix_unit(0, 1, 0)) == 1);
        REQUIRE(grading.degree_of(cky.rep.target.matrix_unit(0, 2, 1)) == 0);
        REQUIRE(grading.degree_of(cky.rep.target.matrix_unit(0, 2, 0)) == 1);
    }
}

TEST_CASE("product representations of equivariant graph pairs satisfy the Toeplitz identities") {
    SECTION("two-track graph boxtimes labeled edge") {
        const ProductFixture& fx = two_track_fixture();
        REQUIRE(fx.pr.rep.target.dim() == 36 * 4);
        REQUIRE(fx.pr.rep.corr.dim() == 4 * 1);
        const CheckReport report = fx.pr.rep.verify(1e-9);
        INFO(report.summary());
        REQUIRE(report.passed);
        REQUIRE(report.max_residual <= 1e-12);
    }

    SECTION("vee graph boxtimes out-star") {
        const ProductFixture& fx = vee_star_fixture();
        REQUIRE(fx.pr.rep.target.dim() == 16 * 9);
        REQUIRE(fx.pr.rep.corr.dim() == 2 * 2);
        const CheckReport report = fx.pr.rep.verify(1e-9);
        INFO(report.summary());
        REQUIRE(report.passed);
        REQUIRE(report.max_residual <= 1e-12);
    }

    SECTION("three-chain boxtimes labeled chain") {
        const ProductFixture& fx = chain_fixture();
        REQUIRE(fx.pr.rep.target.dim() == 16 * 9);
        const CheckReport report = fx.pr.rep.verify(1e-9);
        INFO(report.summary());
        REQUIRE(report.passed);
        REQUIRE(report.max_residual <= 1e-12);
    }

    SECTION("the trivial group gives the plain tensor product") {
        const FiniteGroup g1 = FiniteGroup::cyclic(1);
        const DirectedGraph e = vee_graph();
        const DirectedGraph f = one_edge_graph();
        const GraphAction act{g1, {{0, 1, 2}}, {{0, 1}}};
        const EdgeLabeling lab{g1, {0}};
        const CKRepresentation ckx = ck_representation(e);
        const CKRepresentation cky = ck_representation(f);
        const ProductRepresentation pr =
            product_representation(ckx.rep, graph_action_lift(e, act), ck_induced_action(ckx, act), cky.rep,
                                   labeling_grading(f, lab), ck_induced_grading(cky, lab));
        const CheckReport report = pr.rep.verify(1e-9);
        INFO(report.summary());
        REQUIRE(report.passed);
        // With |G| = 1 the embeddings are a (x) 1 and 1 (x) b, so every psi
        // image is a Kronecker product of the factor images.
        const int dy = cky.rep.corr.dim();
        for (int p = 0; p < ckx.rep.corr.dim(); ++p)
            for (int q = 0; q < dy; ++q) {
                const Mat expect = kron(ckx.rep.psi_images[static_cast<size_t>(p)].blocks[0],
                                        cky.rep.psi_images[static_cast<size_t>(q)].blocks[0]);
                REQUIRE((pr.rep.psi_images[static_cast<size_t>(p * dy + q)].blocks[0] - expect).norm() <= 1e-12);
            }
    }
}

TEST_CASE("product representation preconditions are verified, not assumed") {
    const DirectedGraph e = two_track_graph();
    const GraphAction act = two_track_swap();
    const CKRepresentation ckx = ck_representation(e);
    const CorrAction xact = graph_action_lift(e, act);
    const DirectedGraph f = one_edge_graph();
    const EdgeLabeling lab = one_edge_labels();
    const CKRepresentation cky = ck_representation(f);
    const CorrGrading ygrad = labeling_grading(f, lab);

    SECTION("a non-equivariant target action is rejected") {
        const AlgAction wrong = AlgAction::trivial(act.group, ckx.rep.target);
        REQUIRE_THROWS_MATCHES(
            product_representation(ckx.rep, xact, wrong, cky.rep, ygrad, ck_induced_grading(cky, lab)),
            std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("preconditions")));
    }

    SECTION("an incompatible target grading is rejected") {
        const AlgGrading wrong = AlgGrading::trivial(lab.group, cky.rep.target);
        REQUIRE_THROWS_MATCHES(
            product_representation(ckx.rep, xact, ck_induced_action(ckx, act), cky.rep, ygrad, wrong),
            std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("preconditions")));
    }

    SECTION("truncated factors are rejected") {
        const TruncatedFock fock(xact.correspondence(), 2);
        REQUIRE_THROWS_MATCHES(
            product_representation(fock.rep(), xact, ck_induced_action(ckx, act), cky.rep, ygrad,
                                   ck_induced_grading(cky, lab)),
            std::invalid_argument, Catch::Matchers::MessageMatches(ContainsSubstring("exact")));
    }
}

TEST_CASE("compacts in the product factor through the degree twist") {
    const ProductFixture& fx = vee_star_fixture();
    const int dx = fx.pr.repx.corr.dim();
    const int dy = fx.pr.repy.corr.dim();

    double worst = 0.0;
    bool twisted_nonzero = false;
    for (int xi = 0; xi < dx; ++xi)
        for (int xj = 0; xj < dx; ++xj)
            for (int yi = 0; yi < dy; ++yi)
                for (int yj = 0; yj < dy; ++yj) {
                    const CompactsProductResult res = compacts_product_check(
                        fx.pr, unit(dx, xi), unit(dx, xj), unit(dy, yi), unit(dy, yj), 1e-9);
                    INFO("x=" << xi << " x'=" << xj << " y=" << yi << " y'=" << yj << "\n"
                              << res.report.summary());
                    REQUIRE(res.report.passed);
                    worst = std::max(worst, res.report.max_residual);
                    if (res.s != res.t && res.lhs_norm > 0.5) twisted_nonzero = true;
                }
    REQUIRE(worst <= 1e-12);
    // The out-star labels mix both degrees over a common source, so the
    // twisted case deg y != deg y' is exercised on a nonzero operator.
    REQUIRE(twisted_nonzero);

    SECTION("mixed-degree module vectors are reported") {
        Vec mixed = Vec::Zero(dy);
        mixed(0) = 1.0;
        mixed(1) = 1.0;
        const CompactsProductResult res =
            compacts_product_check(fx.pr, unit(dx, 0), unit(dx, 0), mixed, unit(dy, 0), 1e-9);
        REQUIRE_FALSE(res.report.passed);
        REQUIRE_THAT(res.report.summary(), ContainsSubstring("homogeneous"));
    }

    SECTION("the zero vector gives the zero operator") {
        const CompactsProductResult res =
            compacts_product_check(fx.pr, Vec::Zero(dx), unit(dx, 0), unit(dy, 0), unit(dy, 0), 1e-9);
        REQUIRE(res.report.passed);
        REQUIRE(res.lhs_norm <= 1e-14);
    }
}

TEST_CASE("covariance passes to the product exactly when the factors are covariant") {
    for (const ProductFixture* fxp : {&two_track_fixture(), &vee_star_fixture(), &chain_fixture()}) {
        const ProductFixture& fx = *fxp;
        const std::vector<AlgElement> jx = graph_katsura_ideal(fx.e).basis;
        const std::vector<AlgElement> jy = graph_katsura_ideal(fx.f).basis;
        const CheckReport report = cp_product_check(fx.pr, jx, jy, 1e-9);
        INFO(report.summary());
        REQUIRE(report.passed);
        REQUIRE(report.max_residual <= 1e-12);
    }

    SECTION("a non-covariant ideal is reported and the product check is skipped") {
        const ProductFixture& fx = two_track_fixture();
        std::vector<AlgElement> jx = graph_katsura_ideal(fx.e).basis;
        jx.push_back(vertex_algebra(fx.e).basis()[0]);  // chi_{v0} receives nothing
        const std::vector<AlgElement> jy = graph_katsura_ideal(fx.f).basis;
        const CheckReport report = cp_product_check(fx.pr, jx, jy, 1e-9);
        REQUIRE_FALSE(report.passed);
        REQUIRE_THAT(report.summary(), ContainsSubstring("skipped"));
    }
}

TEST_CASE("the generator factorization chain reproduces the generators") {
    SECTION("n = 0, m = 0 with a nontrivial twist on the two-track graph") {
        const ProductFixture& fx = two_track_fixture();
        const TensorPowers powx(fx.pr.repx.corr, 1);
        const TensorPowers powy(fx.pr.repy.corr, 1);
        const std::vector<AlgElement> jx = graph_katsura_ideal(fx.e).basis;
        const FDAlgebra a = vertex_algebra(fx.e);
        const FDAlgebra b = vertex_algebra(fx.f);

        GeneratorFactorizationData data;
        data.n = 0;
        data.m = 0;
        data.x = unit(powx.level(1).dim(), chain_index(powx, 1, {2, 2}));  // chi_c . chi_{v2}
        data.xp = a.coords(a.basis()[2]);                                  // chi_{v2} in J_X
        data.y1 = unit(powy.level(1).dim(), 0);                           // chi_f, degree g
        data.y2 = b.coords(b.basis()[0]);                                  // chi_{w0}
        data.yp1 = b.coords(b.basis()[0]);
        data.yp2 = b.coords(b.basis()[0]);

        const GeneratorFactorizationResult res = generator_factorization_check(fx.pr, powx, powy, data, jx, 1e-9);
        INFO(res.report.summary());
        REQUIRE(res.report.passed);
        REQUIRE(res.report.max_residual <= 1e-12);
        REQUIRE(res.generator_norm > 0.5);
        // deg y = g and deg y' = e, so both the middle twist alpha_{u^-1} and
        // the right twist gamma_{ts^-1} act by the nontrivial track swap.
        REQUIRE(res.u == 1);
        REQUIRE(res.s == 1);
        REQUIRE(res.t == 0);
        const Mat swap0 = level_action_matrix(fx.xact, powx, 0, 1);
        REQUIRE((swap0 * a.coords(a.basis()[2]) - a.coords(a.basis()[3])).norm() <= 1e-12);

        SECTION("bilinear sums of factorizable vectors") {
            GeneratorFactorizationData sum = data;
            sum.x = unit(powx.level(1).dim(), chain_index(powx, 1, {2, 2})) +
                    2.0 * unit(powx.level(1).dim(), chain_index(powx, 1, {3, 3}));
            sum.xp = a.coords(a.basis()[2]) + a.coords(a.basis()[3]) + 0.5 * a.coords(a.basis()[4]);
            const GeneratorFactorizationResult sres =
                generator_factorization_check(fx.pr, powx, powy, sum, jx, 1e-9);
            INFO(sres.report.summary());
            REQUIRE(sres.report.passed);
            REQUIRE(sres.report.max_residual <= 1e-12);
            REQUIRE(sres.generator_norm > 0.5);
        }

        SECTION("a vector outside X . J_X fails with a witness") {
            GeneratorFactorizationData bad = data;
            bad.x = unit(powx.level(1).dim(), chain_index(powx, 1, {0, 0}));  // chi_a starts at v0
            const GeneratorFactorizationResult bres =
                generator_factorization_check(fx.pr, powx, powy, bad, jx, 1e-9);
            REQUIRE_FALSE(bres.report.passed);
            REQUIRE(bres.factor_residual_x > 0.5);
            REQUIRE_THAT(bres.report.summary(), ContainsSubstring("factors through"));
        }
    }

    SECTION("n = 0, m = 1 on the chain pair") {
        const ProductFixture& fx = chain_fixture();
        const TensorPowers powx(fx.pr.repx.corr, 1);
        const TensorPowers powy(fx.pr.repy.corr, 1);
        const std::vector<AlgElement> jx = graph_katsura_ideal(fx.e).basis;
        const FDAlgebra b = vertex_algebra(fx.f);

        GeneratorFactorizationData data;
        data.n = 0;
        data.m = 1;
        data.x = unit(powx.level(1).dim(), chain_index(powx, 1, {1, 1}));   // chi_{e2} . chi_{v1}
        data.xp = vertex_algebra(fx.e).coords(vertex_algebra(fx.e).basis()[1]);
        data.y1 = unit(powy.level(1).dim(), chain_index(powy, 1, {1, 1}));  // chi_{f1}, degree e
        data.y2 = unit(powy.level(1).dim(), chain_index(powy, 1, {0, 0}));  // chi_{f0}, degree g
        data.yp1 = b.coords(b.basis()[1]);                                  // chi_{w1}
        data.yp2 = unit(powy.level(1).dim(), chain_index(powy, 1, {0, 0}));

        const GeneratorFactorizationResult res = generator_factorization_check(fx.pr, powx, powy, data, jx, 1e-9);
        INFO(res.report.summary());
        REQUIRE(res.report.passed);
        REQUIRE(res.report.max_residual <= 1e-12);
        REQUIRE(res.generator_norm > 0.5);
        REQUIRE(res.s == 1);
        REQUIRE(res.t == 1);
    }

    SECTION("n = 1, m = 1 on the chain pair") {
        const ProductFixture& fx = chain_fixture();
        const TensorPowers powx(fx.pr.repx.corr, 2);
        const TensorPowers powy(fx.pr.repy.corr, 2);
        const std::vector<AlgElement> jx = graph_katsura_ideal(fx.e).basis;
        const FDAlgebra b = vertex_algebra(fx.f);

        GeneratorFactorizationData data;
        data.n = 1;
        data.m = 1;
        data.x = unit(powx.level(2).dim(), chain_index(powx, 2, {2, 1, 1}));  // e3 e2 . chi_{v1}
        data.xp = unit(powx.level(1).dim(), chain_index(powx, 1, {1, 1}));    // chi_{e2} . chi_{v1}
        data.y1 = unit(powy.level(2).dim(), chain_index(powy, 2, {1, 0, 0}));  // f1 f0, degree g
        data.y2 = b.coords(b.basis()[0]);                                      // chi_{w0}
        data.yp1 = unit(powy.level(1).dim(), chain_index(powy, 1, {0, 0}));    // chi_{f0}, degree g
        data.yp2 = b.coords(b.basis()[0]);

        const GeneratorFactorizationResult res = generator_factorization_check(fx.pr, powx, powy, data, jx, 1e-9);
        INFO(res.report.summary());
        REQUIRE(res.report.passed);
        REQUIRE(res.report.max_residual <= 1e-12);
        REQUIRE(res.generator_norm > 0.5);
        REQUIRE(res.u == 1);
        REQUIRE(res.s == 1);
        REQUIRE(res.t == 1);
    }

    SECTION("n > m is a contract violation") {
        const ProductFixture& fx = chain_fixture();
        const TensorPowers powx(fx.pr.repx.corr, 2);
        const TensorPowers powy(fx.pr.repy.corr, 2);
        GeneratorFactorizationData data;
        data.n = 1;
        data.m = 0;
        REQUIRE_THROWS_AS(
            generator_factorization_check(fx.pr, powx, powy, data, graph_katsura_ideal(fx.e).basis, 1e-9),
            std::invalid_argument);
    }
}

TEST_CASE("level actions and level degrees agree with the chain structure") {
    const ProductFixture& fx = two_track_fixture();
    const TensorPowers powx(fx.pr.repx.corr, 2);

    // The level-1 action permutes the chains exactly as the edge swap does,
    // and the homomorphism law survives the reduction.
    const Mat g1 = level_action_matrix(fx.xact, powx, 1, 1);
    REQUIRE((g1 * g1 - Mat::Identity(g1.rows(), g1.cols())).norm() <= 1e-12);
    const int ia = chain_index(powx, 1, {0, 0});
    const int ib = chain_index(powx, 1, {1, 1});
    REQUIRE((g1.col(ia) - unit(powx.level(1).dim(), ib)).norm() <= 1e-12);

    const Mat g2 = level_action_matrix(fx.xact, powx, 2, 1);
    const int ica = chain_index(powx, 2, {2, 0, 0});
    const int idb = chain_index(powx, 2, {3, 1, 1});
    REQUIRE((g2.col(ica) - unit(powx.level(2).dim(), idb)).norm() <= 1e-12);

    const TensorPowers powy(fx.pr.repy.corr, 1);
    const auto degs0 = level_degrees(powy, fx.ygrad, 0);
    REQUIRE(degs0 == std::vector<int>{0, 0});
    const auto degs1 = level_degrees(powy, fx.ygrad, 1);
    REQUIRE(degs1 == std::vector<int>{1});

    const ProductFixture& cfx = chain_fixture();
    const TensorPowers cpowy(cfx.pr.repy.corr, 2);
    const auto cdegs = level_degrees(cpowy, cfx.ygrad, 2);
    REQUIRE(cdegs == std::vector<int>{1});  // f1 (e) then f0 (g) multiply to g
    REQUIRE(level_degree_of(cpowy, cfx.ygrad, 2, unit(1, 0)) == 1);
    REQUIRE_THROWS_AS(level_degree_of(cpowy, cfx.ygrad, 1, Vec::Ones(2)), std::invalid_argument);
}
