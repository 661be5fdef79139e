#include "hoinfo/hypergraph.hpp"

#include <sstream>

namespace hoinfo {

HypergraphPair build_hypergraphs(const SignificanceReport& report, const std::vector<std::string>& names,
                                 double alpha) {
    std::vector<Hyperedge> red, syn;
    for (const auto& e : report.retained) {
        Hyperedge h{e.multiplet.indices(), e.omega, e.ci_low, e.ci_high, e.p_adj};
        (e.sign() == Sign::Redundant ? red : syn).push_back(std::move(h));
    }
    return {Hypergraph(Sign::Redundant, alpha, names, std::move(red)),
            Hypergraph(Sign::Synergistic, alpha, names, std::move(syn))};
}

std::string export_incidence_csv(const Hypergraph& h) {
    const auto& nodes = h.nodes();
    const auto& edges = h.edges();
    std::vector<std::vector<char>> incidence(nodes.size(), std::vector<char>(edges.size(), 0));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (auto m : edges[e].members) incidence[m][e] = 1;
    }
    std::ostringstream os;
    os << "node";
    for (std::size_t e = 0; e < edges.size(); ++e) os << ",e" << e;
    os << '\n';
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        os << csv_escape(nodes[n]);
        for (std::size_t e = 0; e < edges.size(); ++e) os << ',' << (incidence[n][e] ? '1' : '0');
        os << '\n';
    }
    return os.str();
}

std::string export_dot(const Hypergraph& h) {
    std::ostringstream os;
    os << "graph " << (h.sign() == Sign::Redundant ? "redundancy" : "synergy") << " {\n";
    for (const auto& n : h.nodes()) os << "  " << dot_quote(n) << ";\n";
    const auto& edges = h.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& m = edges[e].members;
        for (std::size_t a = 0; a < m.size(); ++a) {
            for (std::size_t b = a + 1; b < m.size(); ++b) {
                os << "  " << dot_quote(h.nodes()[m[a]]) << " -- " << dot_quote(h.nodes()[m[b]]) << " [label=\"e"
                   << e << "\", omega=" << format_number(edges[e].omega) << "];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace hoinfo
