#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/algebra.hpp"
#include "corrkit/common.hpp"
#include "corrkit/grading.hpp"
#include "corrkit/group.hpp"
#include "corrkit/isom.hpp"
#include "corrkit/katsura.hpp"
#include "corrkit/module.hpp"
#include "corrkit/twisted_algebra.hpp"
#include "corrkit/twisted_correspondence.hpp"

namespace corrkit {

/// A directed edge: src = s(e) (where the edge starts), dst = r(e).
struct GraphEdge {
    std::string name;
    int src = 0;
    int dst = 0;
};

/// Finite directed graph with ordered, named vertices and edges.
class DirectedGraph {
public:
    DirectedGraph() = default;

    DirectedGraph(std::vector<std::string> vertices, std::vector<GraphEdge> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)) {
        std::set<std::string> seen;
        for (const auto& v : vertices_)
            if (!seen.insert(v).second) throw std::invalid_argument("DirectedGraph: duplicate vertex name " + v);
        seen.clear();
        for (const auto& e : edges_) {
            if (!seen.insert(e.name).second)
                throw std::invalid_argument("DirectedGraph: duplicate edge name " + e.name);
            if (e.src < 0 || e.src >= num_vertices() || e.dst < 0 || e.dst >= num_vertices())
                throw std::invalid_argument("DirectedGraph: edge " + e.name + " has an undeclared endpoint");
        }
    }

    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }
    [[nodiscard]] const std::vector<std::string>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<GraphEdge>& edges() const { return edges_; }
    [[nodiscard]] const std::string& vertex(int v) const { return vertices_[static_cast<size_t>(v)]; }
    [[nodiscard]] const GraphEdge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
    [[nodiscard]] int src(int e) const { return edges_[static_cast<size_t>(e)].src; }
    [[nodiscard]] int dst(int e) const { return edges_[static_cast<size_t>(e)].dst; }

    [[nodiscard]] int vertex_index(const std::string& name) const {
        for (int v = 0; v < num_vertices(); ++v)
            if (vertices_[static_cast<size_t>(v)] == name) return v;
        throw std::invalid_argument("DirectedGraph: unknown vertex " + name);
    }

    /// Vertices with at least one incoming edge, ascending.
    [[nodiscard]] std::vector<int> receivers() const {
        std::set<int> rec;
        for (const auto& e : edges_) rec.insert(e.dst);
        return {rec.begin(), rec.end()};
    }

    /// Vertices emitting no edge, ascending.
    [[nodiscard]] std::vector<int> sinks() const {
        std::vector<bool> emits(static_cast<size_t>(num_vertices()), false);
        for (const auto& e : edges_) emits[static_cast<size_t>(e.src)] = true;
        std::vector<int> out;
        for (int v = 0; v < num_vertices(); ++v)
            if (!emits[static_cast<size_t>(v)]) out.push_back(v);
        return out;
    }

    /// Vertices receiving no edge, ascending.
    [[nodiscard]] std::vector<int> sources() const {
        std::vector<bool> rec(static_cast<size_t>(num_vertices()), false);
        for (const auto& e : edges_) rec[static_cast<size_t>(e.dst)] = true;
        std::vector<int> out;
        for (int v = 0; v < num_vertices(); ++v)
            if (!rec[static_cast<size_t>(v)]) out.push_back(v);
        return out;
    }

private:
    std::vector<std::string> vertices_;
    std::vector<GraphEdge> edges_;
};

/// Group action on a graph by automorphisms: one vertex permutation and one
/// edge permutation per group element.
struct GraphAction {
    FiniteGroup group;
    std::vector<std::vector<int>> vperm;  // vperm[s][v]
    std::vector<std::vector<int>> eperm;  // eperm[s][e]

    [[nodiscard]] CheckReport verify(const DirectedGraph& g, double tol = kDefaultTol) const {
        CheckReport report;
        report.name = "graph_action";
        report.tolerance = tol;
        const int n = group.order();
        report.require("one vertex permutation per group element", static_cast<int>(vperm.size()) == n);
        report.require("one edge permutation per group element", static_cast<int>(eperm.size()) == n);
        if (!report.passed) return report;
        auto is_perm = [](const std::vector<int>& p, int m) {
            if (static_cast<int>(p.size()) != m) return false;
            std::vector<bool> hit(static_cast<size_t>(m), false);
            for (int x : p) {
                if (x < 0 || x >= m || hit[static_cast<size_t>(x)]) return false;
                hit[static_cast<size_t>(x)] = true;
            }
            return true;
        };
        for (int s = 0; s < n; ++s) {
            report.require("vertex map is a permutation", is_perm(vperm[static_cast<size_t>(s)], g.num_vertices()),
                           "s=" + group.label(s));
            report.require("edge map is a permutation", is_perm(eperm[static_cast<size_t>(s)], g.num_edges()),
                           "s=" + group.label(s));
        }
        if (!report.passed) return report;
        const int e0 = group.identity_element();
        for (int v = 0; v < g.num_vertices(); ++v)
            report.require("identity acts trivially on vertices", vperm[static_cast<size_t>(e0)][static_cast<size_t>(v)] == v);
        for (int e = 0; e < g.num_edges(); ++e)
            report.require("identity acts trivially on edges", eperm[static_cast<size_t>(e0)][static_cast<size_t>(e)] == e);
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) {
                const int st = group.mul(s, t);
                for (int v = 0; v < g.num_vertices(); ++v)
                    report.require("vertex homomorphism: alpha_s alpha_t = alpha_st",
                                   vperm[static_cast<size_t>(s)][static_cast<size_t>(
                                       vperm[static_cast<size_t>(t)][static_cast<size_t>(v)])] ==
                                       vperm[static_cast<size_t>(st)][static_cast<size_t>(v)],
                                   "s=" + group.label(s) + " t=" + group.label(t));
                for (int e = 0; e < g.num_edges(); ++e)
                    report.require("edge homomorphism: alpha_s alpha_t = alpha_st",
                                   eperm[static_cast<size_t>(s)][static_cast<size_t>(
                                       eperm[static_cast<size_t>(t)][static_cast<size_t>(e)])] ==
                                       eperm[static_cast<size_t>(st)][static_cast<size_t>(e)],
                                   "s=" + group.label(s) + " t=" + group.label(t));
            }
        for (int s = 0; s < n; ++s)
            for (int e = 0; e < g.num_edges(); ++e) {
                const int ae = eperm[static_cast<size_t>(s)][static_cast<size_t>(e)];
                report.require("action intertwines the source map: s(alpha e) = alpha(s(e))",
                               g.src(ae) == vperm[static_cast<size_t>(s)][static_cast<size_t>(g.src(e))],
                               "s=" + group.label(s) + " edge " + g.edge(e).name);
                report.require("action intertwines the range map: r(alpha e) = alpha(r(e))",
                               g.dst(ae) == vperm[static_cast<size_t>(s)][static_cast<size_t>(g.dst(e))],
                               "s=" + group.label(s) + " edge " + g.edge(e).name);
            }
        return report;
    }

    [[nodiscard]] static GraphAction trivial(const FiniteGroup& group, const DirectedGraph& g) {
        GraphAction out;
        out.group = group;
        std::vector<int> vid(static_cast<size_t>(g.num_vertices()));
        std::vector<int> eid(static_cast<size_t>(g.num_edges()));
        for (int v = 0; v < g.num_vertices(); ++v) vid[static_cast<size_t>(v)] = v;
        for (int e = 0; e < g.num_edges(); ++e) eid[static_cast<size_t>(e)] = e;
        out.vperm.assign(static_cast<size_t>(group.order()), vid);
        out.eperm.assign(static_cast<size_t>(group.order()), eid);
        return out;
    }
};

/// Group labeling of edges: one group element per edge.
struct EdgeLabeling {
    FiniteGroup group;
    std::vector<int> labels;

    [[nodiscard]] CheckReport verify(const DirectedGraph& g) const {
        CheckReport report;
        report.name = "edge_labeling";
        report.require("one label per edge", static_cast<int>(labels.size()) == g.num_edges());
        for (int l : labels)
            report.require("labels are group elements", l >= 0 && l < group.order());
        return report;
    }

    [[nodiscard]] static EdgeLabeling identity(const FiniteGroup& group, const DirectedGraph& g) {
        return {group, std::vector<int>(static_cast<size_t>(g.num_edges()), group.identity_element())};
    }
};

/// Skew product graph: vertices E0 x F0 and edges E1 x F1 with
///     s(e x f) = alpha_{delta(f)}(s_E(e)) x s_F(f),
///     r(e x f) = r_E(e) x r_F(f).
/// Pairs are flattened with the F index fastest.
inline DirectedGraph skew_product(const DirectedGraph& e, const GraphAction& act, const DirectedGraph& f,
                                  const EdgeLabeling& lab) {
    if (!act.group.same_table(lab.group))
        throw std::invalid_argument("skew_product: action and labeling must share the group");
    std::vector<std::string> vertices;
    vertices.reserve(static_cast<size_t>(e.num_vertices()) * static_cast<size_t>(f.num_vertices()));
    for (int v = 0; v < e.num_vertices(); ++v)
        for (int w = 0; w < f.num_vertices(); ++w) vertices.push_back(e.vertex(v) + "x" + f.vertex(w));
    std::vector<GraphEdge> edges;
    edges.reserve(static_cast<size_t>(e.num_edges()) * static_cast<size_t>(f.num_edges()));
    const int nf = f.num_vertices();
    for (int p = 0; p < e.num_edges(); ++p)
        for (int q = 0; q < f.num_edges(); ++q) {
            const int d = lab.labels[static_cast<size_t>(q)];
            GraphEdge pq;
            pq.name = e.edge(p).name + "x" + f.edge(q).name;
            pq.src = act.vperm[static_cast<size_t>(d)][static_cast<size_t>(e.src(p))] * nf + f.src(q);
            pq.dst = e.dst(p) * nf + f.dst(q);
            edges.push_back(std::move(pq));
        }
    return DirectedGraph(std::move(vertices), std::move(edges));
}

/// c_0(E^0) as one block per vertex; chi_v = matrix_unit(v, 0, 0).
inline FDAlgebra vertex_algebra(const DirectedGraph& g) {
    return FDAlgebra(std::vector<int>(static_cast<size_t>(g.num_vertices()), 1),
                     "c0(" + std::to_string(g.num_vertices()) + ")");
}

/// The graph correspondence X(E) over c_0(E^0): basis {chi_e},
///     <chi_e, chi_e'> = delta_{e,e'} chi_{s(e)},
///     chi_v . chi_e = [r(e) = v] chi_e  (left action via the range map),
///     chi_e . chi_v = [s(e) = v] chi_e  (right action via the source map).
inline Correspondence graph_correspondence(const DirectedGraph& g) {
    const FDAlgebra a = vertex_algebra(g);
    const int d = g.num_edges();
    std::vector<std::vector<AlgElement>> gram(static_cast<size_t>(d),
                                              std::vector<AlgElement>(static_cast<size_t>(d), a.zero()));
    for (int e = 0; e < d; ++e) gram[static_cast<size_t>(e)][static_cast<size_t>(e)] = a.matrix_unit(g.src(e), 0, 0);
    std::vector<Mat> right(static_cast<size_t>(g.num_vertices()));
    std::vector<Mat> left(static_cast<size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) {
        Mat r = Mat::Zero(d, d);
        Mat l = Mat::Zero(d, d);
        for (int e = 0; e < d; ++e) {
            if (g.src(e) == v) r(e, e) = 1.0;
            if (g.dst(e) == v) l(e, e) = 1.0;
        }
        right[static_cast<size_t>(v)] = r;
        left[static_cast<size_t>(v)] = l;
    }
    return Correspondence(a, HilbertModule(a, std::move(gram), std::move(right)), std::move(left));
}

/// The algebra action f -> f o alpha_s on c_0(E^0): chi_v -> chi_{alpha_{s^-1}(v)}.
inline AlgAction vertex_action(const DirectedGraph& g, const GraphAction& act) {
    const FDAlgebra a = vertex_algebra(g);
    std::vector<BlockAutomorphism> maps;
    maps.reserve(static_cast<size_t>(act.group.order()));
    for (int s = 0; s < act.group.order(); ++s) {
        const auto& pv = act.vperm[static_cast<size_t>(act.group.inv(s))];
        BlockAutomorphism m;
        m.perm.resize(static_cast<size_t>(g.num_vertices()));
        m.unitary.assign(static_cast<size_t>(g.num_vertices()), Mat::Identity(1, 1));
        for (int v = 0; v < g.num_vertices(); ++v) m.perm[static_cast<size_t>(v)] = pv[static_cast<size_t>(v)];
        maps.push_back(std::move(m));
    }
    return AlgAction(act.group, a, std::move(maps));
}

/// Lift of a graph action to X(E): gamma_s(chi_e) = chi_{alpha_{s^-1}(e)}
/// over the vertex action on c_0(E^0).
inline CorrAction graph_action_lift(const DirectedGraph& g, const GraphAction& act) {
    Correspondence corr = graph_correspondence(g);
    std::vector<Mat> gamma;
    gamma.reserve(static_cast<size_t>(act.group.order()));
    for (int s = 0; s < act.group.order(); ++s) {
        const auto& pe = act.eperm[static_cast<size_t>(act.group.inv(s))];
        Mat m = Mat::Zero(g.num_edges(), g.num_edges());
        for (int e = 0; e < g.num_edges(); ++e) m(pe[static_cast<size_t>(e)], e) = 1.0;
        gamma.push_back(std::move(m));
    }
    return CorrAction(act.group, std::move(corr), vertex_action(g, act), std::move(gamma));
}

/// Grading of X(F) induced by an edge labeling: X_s = span{chi_f : delta(f) = s},
/// over the trivial grading of c_0(F^0).
inline CorrGrading labeling_grading(const DirectedGraph& g, const EdgeLabeling& lab) {
    Correspondence corr = graph_correspondence(g);
    std::vector<std::vector<Vec>> comps(static_cast<size_t>(lab.group.order()));
    for (int e = 0; e < g.num_edges(); ++e) {
        Vec x = Vec::Zero(g.num_edges());
        x(e) = 1.0;
        comps[static_cast<size_t>(lab.labels[static_cast<size_t>(e)])].push_back(std::move(x));
    }
    AlgGrading coeff = AlgGrading::trivial(lab.group, corr.algebra());
    return CorrGrading(lab.group, std::move(corr), std::move(comps), std::move(coeff));
}

/// Katsura ideal support of X(E): the receiving vertices (finiteness is
/// automatic for a finite graph) and the corresponding chi_v basis.
struct GraphKatsuraIdeal {
    std::vector<int> vertices;
    std::vector<AlgElement> basis;
};

inline GraphKatsuraIdeal graph_katsura_ideal(const DirectedGraph& g) {
    GraphKatsuraIdeal out;
    out.vertices = g.receivers();
    const FDAlgebra a = vertex_algebra(g);
    for (int v : out.vertices) out.basis.push_back(a.matrix_unit(v, 0, 0));
    return out;
}

/// Regularity survey of a finite graph. The infinite-receiver clause of the
/// nondegeneracy criterion is vacuous for finite graphs and reported as such.
struct GraphRegularity {
    std::vector<int> sinks;
    std::vector<int> sources;
    std::vector<int> proper_sources;
    bool katsura_nondegenerate = false;  // no proper sources (finite graphs)
    bool full = false;                   // no sinks: every vertex emits
    bool infinite_receiver_clause_vacuous = true;
};

inline GraphRegularity graph_regularity_report(const DirectedGraph& g) {
    GraphRegularity out;
    out.sinks = g.sinks();
    out.sources = g.sources();
    const std::vector<int> sinks = out.sinks;
    for (int v : out.sources)
        if (!std::binary_search(sinks.begin(), sinks.end(), v)) out.proper_sources.push_back(v);
    out.katsura_nondegenerate = out.proper_sources.empty();
    out.full = out.sinks.empty();
    return out;
}

/// The twisted coefficient algebra c_0(E^0) boxtimes c_0(F^0) for graph data:
/// the vertex action against the trivial grading (the labeling's coaction is
/// trivial on coefficients).
inline TwistedAlgebra graph_twisted_coefficients(const DirectedGraph& e, const GraphAction& act,
                                                 const DirectedGraph& f) {
    AlgAction alpha = vertex_action(e, act);
    AlgGrading grading = AlgGrading::trivial(act.group, vertex_algebra(f));
    return TwistedAlgebra(std::move(alpha), std::move(grading));
}

/// The canonical identification c_0(E^0 x F^0) -> A boxtimes B,
/// chi_{v x w} -> chi_v (x) chi_w, as an algebra map.
inline AlgebraMap graph_vertex_identification(const DirectedGraph& e, const DirectedGraph& f,
                                              const DirectedGraph& skew, const TwistedAlgebra& tw) {
    AlgebraMap fa;
    fa.domain = vertex_algebra(skew);
    fa.codomain = tw.algebra();
    const FDAlgebra a = vertex_algebra(e);
    const FDAlgebra b = vertex_algebra(f);
    for (int v = 0; v < e.num_vertices(); ++v)
        for (int w = 0; w < f.num_vertices(); ++w)
            fa.images.push_back(tw.elementary(a.matrix_unit(v, 0, 0), b.matrix_unit(w, 0, 0)));
    return fa;
}

/// Certifies J_{X(E x F)} = J_{X(E)} boxtimes J_{X(F)} through the canonical
/// identification: both sides are computed independently and compared as
/// spans inside the twisted coefficient algebra.
struct IdealCompatibilityReport {
    CheckReport report;
    int skew_ideal_dim = 0;
    int product_ideal_dim = 0;
    std::vector<int> skew_vertices;
};

inline IdealCompatibilityReport ideal_compatibility_check(const DirectedGraph& e, const GraphAction& act,
                                                          const DirectedGraph& f, const EdgeLabeling& lab,
                                                          double tol = kDefaultTol) {
    IdealCompatibilityReport out;
    CheckReport& report = out.report;
    report.name = "ideal_compatibility";
    report.tolerance = tol;
    report.absorb(act.verify(e, tol));
    report.absorb(lab.verify(f));

    const DirectedGraph skew = skew_product(e, act, f, lab);
    const TwistedAlgebra tw = graph_twisted_coefficients(e, act, f);
    const AlgebraMap ident = graph_vertex_identification(e, f, skew, tw);
    report.absorb(verify_algebra_isomorphism(ident, tol));

    const GraphKatsuraIdeal skew_ideal = graph_katsura_ideal(skew);
    out.skew_vertices = skew_ideal.vertices;
    const Eigen::Index veclen = tw.algebra().zero().vec().size();
    Mat lhs(veclen, static_cast<Eigen::Index>(skew_ideal.basis.size()));
    for (size_t k = 0; k < skew_ideal.basis.size(); ++k)
        lhs.col(static_cast<Eigen::Index>(k)) = ident.apply(skew_ideal.basis[k]).vec();

    const GraphKatsuraIdeal je = graph_katsura_ideal(e);
    const GraphKatsuraIdeal jf = graph_katsura_ideal(f);
    Mat rhs(veclen, static_cast<Eigen::Index>(je.basis.size() * jf.basis.size()));
    Eigen::Index col = 0;
    for (const auto& av : je.basis)
        for (const auto& bw : jf.basis) rhs.col(col++) = tw.elementary(av, bw).vec();

    out.skew_ideal_dim = static_cast<int>(span_rank(lhs, tol));
    out.product_ideal_dim = static_cast<int>(span_rank(rhs, tol));
    report.require("ideal compatibility: J_{X(E x F)} = J_{X(E)} boxtimes J_{X(F)}", spans_equal(lhs, rhs, tol),
                   std::to_string(out.skew_ideal_dim) + " vs " + std::to_string(out.product_ideal_dim));
    return out;
}

/// Builds X(E x F) and X(E) boxtimes X(F) and certifies the correspondence
/// isomorphism chi_{e x f} -> chi_e boxtimes chi_f over chi_{v x w} ->
/// chi_v (x) chi_w.
inline CorrespondenceIsomorphism verify_graph_product_isomorphism(const DirectedGraph& e, const GraphAction& act,
                                                                  const DirectedGraph& f, const EdgeLabeling& lab,
                                                                  double tol = kDefaultTol) {
    CorrespondenceIsomorphism out;
    out.report.name = "graph_product_isomorphism";
    out.report.tolerance = tol;
    out.report.absorb(act.verify(e, tol));
    out.report.absorb(lab.verify(f));
    if (!out.report.passed) return out;

    const DirectedGraph skew = skew_product(e, act, f, lab);
    const Correspondence skew_corr = graph_correspondence(skew);

    const TwistedAlgebra tw = graph_twisted_coefficients(e, act, f);
    const CorrAction xact = graph_action_lift(e, act);
    const CorrGrading ygrad = labeling_grading(f, lab);
    const TwistedCorrespondence tc(tw, xact, ygrad);

    const AlgebraMap ident = graph_vertex_identification(e, f, skew, tw);
    std::vector<std::pair<Vec, Vec>> pairs;
    pairs.reserve(static_cast<size_t>(skew.num_edges()));
    for (int p = 0; p < e.num_edges(); ++p)
        for (int q = 0; q < f.num_edges(); ++q) {
            Vec xe = Vec::Zero(skew.num_edges());
            xe(p * f.num_edges() + q) = 1.0;
            Vec xef = Vec::Zero(e.num_edges());
            xef(p) = 1.0;
            Vec yf = Vec::Zero(f.num_edges());
            yf(q) = 1.0;
            pairs.emplace_back(std::move(xe), tc.elementary(xef, yf));
        }
    CorrespondenceIsomorphism iso =
        verify_correspondence_isomorphism(skew_corr, tc.correspondence(), ident, ident, pairs, tol);
    iso.report.absorb(out.report);
    iso.report.name = "graph_product_isomorphism";
    return iso;
}

}  // namespace corrkit
