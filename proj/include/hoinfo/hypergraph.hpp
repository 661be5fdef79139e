#pragma once

#include "hoinfo/datamodel.hpp"
#include "hoinfo/inference.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hoinfo {

struct HypergraphPair {
    Hypergraph redundancy;
    Hypergraph synergy;
};

/// One hyperedge per retained multiplet, in the hypergraph matching the sign
/// of its Omega. Both graphs carry every variable as a node.
HypergraphPair build_hypergraphs(const SignificanceReport& report, const std::vector<std::string>& names,
                                 double alpha);

/// Node-by-edge 0/1 incidence matrix; header "node,e0,e1,...".
std::string export_incidence_csv(const Hypergraph& h);

/// Pairwise projection in DOT: each hyperedge becomes a clique whose edges
/// are labelled with the hyperedge id.
std::string export_dot(const Hypergraph& h);

}  // namespace hoinfo
