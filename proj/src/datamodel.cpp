#include "hoinfo/datamodel.hpp"

#include "hoinfo/error.hpp"

#include <Eigen/Cholesky>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hoinfo {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DuplicateIndex: return "DuplicateIndex";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::MixedSigns: return "MixedSigns";
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::DegenerateConditioning: return "DegenerateConditioning";
        case ErrorCode::CombinatorialOverflow: return "CombinatorialOverflow";
        case ErrorCode::DegenerateResample: return "DegenerateResample";
        case ErrorCode::MissingSubsetEstimate: return "MissingSubsetEstimate";
        case ErrorCode::TargetUnattainable: return "TargetUnattainable";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

std::string_view to_string(Sign s) noexcept {
    return s == Sign::Redundant ? "redundant" : "synergistic";
}

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(Matrix values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
    if (values_.rows() < 3) {
        throw Error(ErrorCode::InvalidArgument, "dataset needs at least 3 observations");
    }
    if (values_.cols() < 3) {
        throw Error(ErrorCode::InvalidArgument, "dataset needs at least 3 variables");
    }
    if (names_.size() != n_vars()) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(n_vars()) + " names, got " + std::to_string(names_.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw Error(ErrorCode::InvalidArgument, "empty variable name");
        if (!seen.insert(n).second) throw Error(ErrorCode::InvalidArgument, "duplicate variable name '" + n + "'");
    }
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
        for (Eigen::Index i = 0; i < values_.rows(); ++i) {
            if (!std::isfinite(values_(i, j))) {
                throw Error(ErrorCode::MalformedInput, "non-finite value at row " + std::to_string(i) +
                                                           ", column '" + names_[static_cast<std::size_t>(j)] + "'");
            }
        }
    }
}

std::vector<std::string> default_names(std::size_t p) {
    std::vector<std::string> out;
    out.reserve(p);
    for (std::size_t j = 0; j < p; ++j) out.push_back("V" + std::to_string(j + 1));
    return out;
}

// ---------------------------------------------------------------- Multiplet

Multiplet Multiplet::canonicalize(std::span<const Index> indices, std::size_t universe) {
    std::vector<Index> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= universe) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "index " + std::to_string(sorted[i]) + " outside [0, " + std::to_string(universe) + ")");
        }
        if (i > 0 && sorted[i] == sorted[i - 1]) {
            throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(sorted[i]) + " repeated");
        }
    }
    if (sorted.size() < 3) {
        throw Error(ErrorCode::InvalidArgument, "a multiplet has at least 3 members");
    }
    return from_sorted(std::move(sorted));
}

Multiplet Multiplet::from_sorted(std::vector<Index> indices) noexcept {
    Multiplet m;
    m.indices_ = std::move(indices);
    return m;
}

std::vector<Index> Multiplet::without(std::size_t pos) const {
    std::vector<Index> out;
    out.reserve(indices_.size() - 1);
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i != pos) out.push_back(indices_[i]);
    }
    return out;
}

std::strong_ordering operator<=>(const Multiplet& a, const Multiplet& b) {
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.indices_.begin(), a.indices_.end(), b.indices_.begin(),
                                                  b.indices_.end());
}

// ---------------------------------------------------------------- Hypergraph

namespace {

bool edge_less(const Hyperedge& a, const Hyperedge& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
}

bool weight_matches(Sign s, double w) {
    return s == Sign::Redundant ? w > 0.0 : w < 0.0;
}

}  // namespace

Hypergraph::Hypergraph(Sign sign, double alpha, std::vector<std::string> nodes, std::vector<Hyperedge> edges)
    : sign_(sign), alpha_(alpha), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.members.empty()) throw Error(ErrorCode::SchemaViolation, "hyperedge without members");
        std::sort(e.members.begin(), e.members.end());
        for (std::size_t i = 0; i < e.members.size(); ++i) {
            if (e.members[i] >= nodes_.size()) {
                throw Error(ErrorCode::IndexOutOfRange, "hyperedge member " + std::to_string(e.members[i]) +
                                                            " exceeds node count " + std::to_string(nodes_.size()));
            }
            if (i > 0 && e.members[i] == e.members[i - 1]) {
                throw Error(ErrorCode::DuplicateIndex, "hyperedge repeats member " + std::to_string(e.members[i]));
            }
        }
        if (!weight_matches(sign_, e.omega)) {
            throw Error(ErrorCode::MixedSigns, "edge weight " + format_number(e.omega) + " in a " +
                                                   std::string(to_string(sign_)) + " hypergraph");
        }
    }
    std::sort(edges_.begin(), edges_.end(), edge_less);
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i].members == edges_[i - 1].members) {
            throw Error(ErrorCode::SchemaViolation, "duplicate hyperedge");
        }
    }
}

std::string hypergraph_to_json(const Hypergraph& h) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["sign"] = h.sign() == Sign::Redundant ? "redundancy" : "synergy";
    doc["alpha"] = h.alpha();
    doc["nodes"] = h.nodes();
    auto edges = ordered_json::array();
    for (const auto& e : h.edges()) {
        ordered_json je;
        je["members"] = e.members;
        auto names = ordered_json::array();
        for (auto m : e.members) names.push_back(h.nodes()[m]);
        je["names"] = std::move(names);
        je["omega"] = e.omega;
        je["ci"] = {e.ci_low, e.ci_high};
        je["p_adj"] = e.p_adj;
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

Hypergraph hypergraph_from_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what());
    }
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw Error(ErrorCode::SchemaViolation, what);
    };
    require(doc.is_object(), "top level must be an object");
    for (const char* key : {"sign", "alpha", "nodes", "edges"}) {
        require(doc.contains(key), std::string("missing key '") + key + "'");
    }
    require(doc["sign"].is_string(), "'sign' must be a string");
    const auto sign_text = doc["sign"].get<std::string>();
    require(sign_text == "redundancy" || sign_text == "synergy", "'sign' must be redundancy or synergy");
    require(doc["alpha"].is_number(), "'alpha' must be a number");
    require(doc["nodes"].is_array(), "'nodes' must be an array");
    std::vector<std::string> nodes;
    for (const auto& n : doc["nodes"]) {
        require(n.is_string(), "node names must be strings");
        nodes.push_back(n.get<std::string>());
    }
    require(doc["edges"].is_array(), "'edges' must be an array");
    std::vector<Hyperedge> edges;
    for (const auto& je : doc["edges"]) {
        require(je.is_object(), "edge must be an object");
        require(je.contains("members") && je["members"].is_array(), "edge needs 'members' array");
        require(je.contains("omega") && je["omega"].is_number(), "edge needs numeric 'omega'");
        require(je.contains("ci") && je["ci"].is_array() && je["ci"].size() == 2 && je["ci"][0].is_number() &&
                    je["ci"][1].is_number(),
                "edge needs 'ci' pair");
        require(je.contains("p_adj") && je["p_adj"].is_number(), "edge needs numeric 'p_adj'");
        Hyperedge e;
        for (const auto& m : je["members"]) {
            require(m.is_number_unsigned(), "members must be non-negative integers");
            e.members.push_back(m.get<Index>());
        }
        e.omega = je["omega"].get<double>();
        e.ci_low = je["ci"][0].get<double>();
        e.ci_high = je["ci"][1].get<double>();
        e.p_adj = je["p_adj"].get<double>();
        require(e.ci_low <= e.ci_high, "ci must be ordered");
        if (je.contains("names")) {
            require(je["names"].is_array() && je["names"].size() == e.members.size(), "'names' must match members");
            for (std::size_t i = 0; i < e.members.size(); ++i) {
                require(e.members[i] < nodes.size() && je["names"][i] == nodes[e.members[i]],
                        "'names' disagree with node list");
            }
        }
        edges.push_back(std::move(e));
    }
    return Hypergraph(sign_text == "redundancy" ? Sign::Redundant : Sign::Synergistic, doc["alpha"].get<double>(),
                      std::move(nodes), std::move(edges));
}

// ---------------------------------------------------------------- CorrelationModel

CorrelationModel::CorrelationModel(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw Error(ErrorCode::InvalidArgument, "correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        if (std::abs(m_(i, i) - 1.0) > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "correlation matrix diagonal must be 1");
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            if (!std::isfinite(m_(i, j)) || std::abs(m_(i, j) - m_(j, i)) > 1e-12) {
                throw Error(ErrorCode::InvalidArgument, "correlation matrix must be symmetric");
            }
        }
    }
    Eigen::LLT<Matrix> llt(m_);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "correlation matrix is not positive definite");
    }
}

// ---------------------------------------------------------------- text output

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string dot_quote(std::string_view id) {
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string estimates_to_csv(std::span<const OInfoEstimate> estimates, const std::vector<std::string>& names,
                             std::span<const std::string> status) {
    if (!status.empty() && status.size() != estimates.size()) {
        throw Error(ErrorCode::InvalidArgument, "status column length mismatch");
    }
    std::ostringstream os;
    os << "order,members,omega,ci_low,ci_high,p_raw,p_adj,sign";
    if (!status.empty()) os << ",status";
    os << '\n';
    for (std::size_t r = 0; r < estimates.size(); ++r) {
        const auto& e = estimates[r];
        std::string members;
        for (std::size_t i = 0; i < e.multiplet.order(); ++i) {
            if (i) members += ';';
            members += names.at(e.multiplet[i]);
        }
        os << e.multiplet.order() << ',' << csv_escape(members) << ',' << format_number(e.omega) << ','
           << format_number(e.ci_low) << ',' << format_number(e.ci_high) << ',' << format_number(e.p_raw) << ','
           << format_number(e.p_adj) << ',' << to_string(e.sign());
        if (!status.empty()) os << ',' << status[r];
        os << '\n';
    }
    return os.str();
}

}  // namespace hoinfo
