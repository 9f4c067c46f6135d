#ifndef CSTAR_GRAPHALG_HPP
#define CSTAR_GRAPHALG_HPP

#include <cstar/rep.hpp>

#include <json.hpp>

#include <map>
#include <sstream>

// Directed graphs and their correspondences. Convention: the right Hilbert
// module structure sums over r^{-1}(v) and the left action reads the source
// vertex, so fiber v collects the edges ranging at v. Vertices may be flagged
// as infinite emitters; those participate in classification, ideal formulas
// and relation emission symbolically, but are rejected by the numeric
// correspondence constructor (C_0 of an infinite set has no finite matrix
// model).

namespace cstar {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphEdge {
    std::string name;
    std::string source;
    std::string range;
};

struct Graph {
    std::vector<std::string> vertices;
    std::vector<GraphEdge> edges;
    std::set<std::string> infinite_emitters;

    std::map<std::string, int> vertex_index;

    Graph() = default;
    Graph(std::vector<std::string> vs, std::vector<GraphEdge> es,
          std::set<std::string> inf = {})
        : vertices(std::move(vs)), edges(std::move(es)),
          infinite_emitters(std::move(inf)) {
        for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
            if (!vertex_index.emplace(vertices[static_cast<size_t>(i)], i).second)
                throw GraphError("duplicate vertex name: " + vertices[static_cast<size_t>(i)]);
        std::set<std::string> edge_names;
        for (const GraphEdge& e : edges) {
            if (!edge_names.insert(e.name).second)
                throw GraphError("duplicate edge name: " + e.name);
            if (!vertex_index.count(e.source))
                throw GraphError("edge " + e.name + " references unknown vertex: " + e.source);
            if (!vertex_index.count(e.range))
                throw GraphError("edge " + e.name + " references unknown vertex: " + e.range);
        }
        for (const std::string& v : infinite_emitters)
            if (!vertex_index.count(v))
                throw GraphError("infinite emitter references unknown vertex: " + v);
    }

    bool is_infinite_emitter(const std::string& v) const {
        return infinite_emitters.count(v) > 0;
    }
    int out_count(const std::string& v) const {
        int c = 0;
        for (const GraphEdge& e : edges)
            if (e.source == v) ++c;
        return c;
    }
    int in_count(const std::string& v) const {
        int c = 0;
        for (const GraphEdge& e : edges)
            if (e.range == v) ++c;
        return c;
    }
    /// Edges ranging at v, in input order; fixes the fiber basis ordering.
    std::vector<int> edges_into(const std::string& v) const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(edges.size()); ++i)
            if (edges[static_cast<size_t>(i)].range == v) out.push_back(i);
        return out;
    }
    std::vector<int> edges_out_of(const std::string& v) const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(edges.size()); ++i)
            if (edges[static_cast<size_t>(i)].source == v) out.push_back(i);
        return out;
    }
};

/// Graph file: {"vertices":[...], "edges":[[name, source, range],...],
/// "infinite_emitters":[...]}; unknown fields rejected.
inline Graph parse_graph(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw GraphError(std::string("graph file syntax error: ") + e.what());
    }
    if (!j.is_object()) throw GraphError("graph file: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "vertices" && it.key() != "edges" &&
            it.key() != "infinite_emitters")
            throw GraphError("graph file: unknown field \"" + it.key() + "\"");
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw GraphError("graph file: missing \"vertices\" array");
    if (!j.contains("edges") || !j["edges"].is_array())
        throw GraphError("graph file: missing \"edges\" array");
    std::vector<std::string> vs;
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) throw GraphError("graph file: vertex names must be strings");
        vs.push_back(v.get<std::string>());
    }
    std::vector<GraphEdge> es;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() ||
            !e[2].is_string())
            throw GraphError("graph file: each edge must be [name, source, range]");
        es.push_back({e[0].get<std::string>(), e[1].get<std::string>(),
                      e[2].get<std::string>()});
    }
    std::set<std::string> inf;
    if (j.contains("infinite_emitters")) {
        if (!j["infinite_emitters"].is_array())
            throw GraphError("graph file: \"infinite_emitters\" must be an array");
        for (const auto& v : j["infinite_emitters"]) {
            if (!v.is_string())
                throw GraphError("graph file: infinite emitter names must be strings");
            inf.insert(v.get<std::string>());
        }
    }
    return Graph(std::move(vs), std::move(es), std::move(inf));
}

struct VertexClassification {
    std::vector<std::string> sinks;     // no out-edges
    std::vector<std::string> sources;   // no in-edges
    std::vector<std::string> regular;   // 0 < |s^{-1}(v)| < infinity
    std::vector<std::string> infinite;  // flagged infinite emitters
};

inline VertexClassification classify_vertices(const Graph& g) {
    VertexClassification c;
    for (const std::string& v : g.vertices) {
        bool inf = g.is_infinite_emitter(v);
        int out = g.out_count(v);
        if (inf)
            c.infinite.push_back(v);
        else if (out == 0)
            c.sinks.push_back(v);
        else
            c.regular.push_back(v);
        if (g.in_count(v) == 0) c.sources.push_back(v);
    }
    return c;
}

struct GraphIdeals {
    std::vector<std::string> jx;          // regular vertices
    std::vector<std::string> ker_phi;     // sinks
    std::vector<std::string> preimage_K;  // finite emitters (including sinks)
};

/// The graph-level ideals, computed symbolically so infinite emitters are
/// handled exactly: ker phi = {|s^{-1}(v)| = 0}, preimage of the compacts =
/// {|s^{-1}(v)| < infinity}, jx = the regular vertices.
inline GraphIdeals graph_ideals(const Graph& g) {
    GraphIdeals out;
    for (const std::string& v : g.vertices) {
        bool inf = g.is_infinite_emitter(v);
        int oc = g.out_count(v);
        if (!inf) out.preimage_K.push_back(v);
        if (!inf && oc == 0) out.ker_phi.push_back(v);
        if (!inf && oc > 0) out.jx.push_back(v);
    }
    return out;
}

/// The correspondence of a finite graph: one size-1 block per vertex, fiber
/// k_v = |r^{-1}(v)|, multiplicity M[v][u] = #{e : r(e) = v, s(e) = u}.
inline Correspondence graph_correspondence(const Graph& g) {
    if (!g.infinite_emitters.empty())
        throw GraphError(
            "graph_correspondence: graph has infinite emitters; only the symbolic "
            "operations (classification, ideals, relations) support them");
    int m = static_cast<int>(g.vertices.size());
    FdAlgebra alg(std::vector<int>(static_cast<size_t>(m), 1));
    std::vector<int> fibers(static_cast<size_t>(m), 0);
    Eigen::MatrixXi mult = Eigen::MatrixXi::Zero(m, m);
    for (const GraphEdge& e : g.edges) {
        int v = g.vertex_index.at(e.range);
        int u = g.vertex_index.at(e.source);
        fibers[static_cast<size_t>(v)] += 1;
        mult(v, u) += 1;
    }
    return {HilbertModule(alg, fibers), StarHom(alg, fibers, std::move(mult))};
}

/// The defining relations, rendered deterministically: two global orthogonality
/// statements, per-edge relations in input order, then the summation relation
/// for each regular vertex. Infinite emitters get no summation relation.
inline std::string ck_relations(const Graph& g) {
    std::ostringstream os;
    os << "mutually orthogonal projections:";
    for (size_t i = 0; i < g.vertices.size(); ++i)
        os << (i ? ", " : " ") << "p[" << g.vertices[i] << "]";
    os << "\n";
    os << "mutually orthogonal ranges:";
    for (size_t i = 0; i < g.edges.size(); ++i)
        os << (i ? ", " : " ") << "s[" << g.edges[i].name << "]";
    os << "\n";
    for (const GraphEdge& e : g.edges) {
        os << "s[" << e.name << "]* s[" << e.name << "] = p[" << e.range << "]\n";
        os << "s[" << e.name << "] s[" << e.name << "]* <= p[" << e.source << "]\n";
    }
    for (const std::string& v : g.vertices) {
        if (g.is_infinite_emitter(v)) continue;
        std::vector<int> out = g.edges_out_of(v);
        if (out.empty()) continue;
        os << "p[" << v << "] =";
        for (size_t i = 0; i < out.size(); ++i) {
            const std::string& e = g.edges[static_cast<size_t>(out[i])].name;
            os << (i ? " + " : " ") << "s[" << e << "] s[" << e << "]*";
        }
        os << "\n";
    }
    return os.str();
}

/// Checks a concrete family of projections and partial isometries against the
/// defining relations, and cross-validates the induced pair (pi, t) with the
/// representation checkers when the graph has no infinite emitters.
inline CovarianceReport check_ck_family(const Graph& g,
                                        const std::map<std::string, Mat>& projections,
                                        const std::map<std::string, Mat>& isometries,
                                        double tol = 1e-9) {
    if (g.vertices.empty())
        throw std::invalid_argument("check_ck_family: graph has no vertices");
    int dim = -1;
    auto check_dim = [&](const Mat& m, const std::string& name) {
        if (dim < 0) dim = static_cast<int>(m.rows());
        if (m.rows() != dim || m.cols() != dim)
            throw std::invalid_argument("check_ck_family: matrix dimension mismatch at " + name);
    };
    for (const std::string& v : g.vertices) {
        if (!projections.count(v))
            throw std::invalid_argument("check_ck_family: missing projection for vertex " + v);
        check_dim(projections.at(v), v);
    }
    for (const GraphEdge& e : g.edges) {
        if (!isometries.count(e.name))
            throw std::invalid_argument("check_ck_family: missing isometry for edge " + e.name);
        check_dim(isometries.at(e.name), e.name);
    }

    CovarianceReport rep;
    rep.tol = tol;
    for (const std::string& v : g.vertices) {
        const Mat& p = projections.at(v);
        rep.add("projection[" + v + "]",
                std::max((p * p - p).norm(), (p.adjoint() - p).norm()));
    }
    for (size_t a = 0; a < g.vertices.size(); ++a)
        for (size_t b = a + 1; b < g.vertices.size(); ++b)
            rep.add("orthogonal[" + g.vertices[a] + "," + g.vertices[b] + "]",
                    (projections.at(g.vertices[a]) * projections.at(g.vertices[b])).norm());
    for (const GraphEdge& e : g.edges) {
        const Mat& s = isometries.at(e.name);
        rep.add("range[" + e.name + "]",
                (s.adjoint() * s - projections.at(e.range)).norm());
        // operator inequality s s* <= p_{s(e)}: smallest eigenvalue of the difference
        Mat diff = projections.at(e.source) - s * s.adjoint();
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + Mat(diff.adjoint())));
        double lam = es.eigenvalues().size() ? es.eigenvalues().minCoeff() : 0.0;
        rep.add("domination[" + e.name + "]", std::max(0.0, -lam));
    }
    for (size_t a = 0; a < g.edges.size(); ++a)
        for (size_t b = a + 1; b < g.edges.size(); ++b)
            rep.add("range_orthogonal[" + g.edges[a].name + "," + g.edges[b].name + "]",
                    (isometries.at(g.edges[a].name).adjoint() *
                     isometries.at(g.edges[b].name))
                        .norm());
    for (const std::string& v : g.vertices) {
        if (g.is_infinite_emitter(v)) continue;
        std::vector<int> out = g.edges_out_of(v);
        if (out.empty()) continue;
        Mat sum = Mat::Zero(dim, dim);
        for (int i : out) {
            const Mat& s = isometries.at(g.edges[static_cast<size_t>(i)].name);
            sum += s * s.adjoint();
        }
        rep.add("ck_sum[" + v + "]", (projections.at(v) - sum).norm());
    }

    if (g.infinite_emitters.empty()) {
        Correspondence X = graph_correspondence(g);
        std::vector<std::vector<Mat>> pi_basis, t_basis;
        for (const std::string& v : g.vertices)
            pi_basis.push_back({projections.at(v)});
        for (const std::string& v : g.vertices) {
            std::vector<Mat> fb;
            for (int i : g.edges_into(v))
                fb.push_back(isometries.at(g.edges[static_cast<size_t>(i)].name));
            t_basis.push_back(std::move(fb));
        }
        Representation R(X, dim, std::move(pi_basis), std::move(t_basis));
        CovarianceReport vr = verify_representation(R, tol);
        for (auto& e : vr.entries) rep.add("induced_" + e.label, e.defect);
        std::set<int> reg;
        for (const std::string& v : graph_ideals(g).jx) reg.insert(g.vertex_index.at(v));
        CovarianceReport cr =
            check_relative_covariance(R, Ideal(X.algebra(), std::move(reg)), tol);
        for (auto& e : cr.entries) rep.add("induced_" + e.label, e.defect);
    }
    return rep;
}

}  // namespace cstar

#endif  // CSTAR_GRAPHALG_HPP
