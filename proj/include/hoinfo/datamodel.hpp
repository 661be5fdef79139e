#pragma once

#include <Eigen/Core>

#include <compare>
#include <initializer_list>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hoinfo {

using Index = std::uint32_t;
using Matrix = Eigen::MatrixXd;

/// N observations (rows) by P named variables (columns).
class Dataset {
public:
    Dataset(Matrix values, std::vector<std::string> names);

    std::size_t n_obs() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t n_vars() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    Matrix values_;
    std::vector<std::string> names_;
};

/// Names V1..Vp, used when a caller has no labels of its own.
std::vector<std::string> default_names(std::size_t p);

/// A strictly increasing set of at least three variable indices.
class Multiplet {
public:
    Multiplet() = default;

    /// Sorts and validates; every index must lie in [0, universe).
    static Multiplet canonicalize(std::span<const Index> indices, std::size_t universe);
    static Multiplet canonicalize(std::initializer_list<Index> indices, std::size_t universe) {
        return canonicalize(std::span<const Index>(indices.begin(), indices.size()), universe);
    }

    /// Trusts the caller: indices must already be strictly increasing with k >= 3.
    static Multiplet from_sorted(std::vector<Index> indices) noexcept;

    const std::vector<Index>& indices() const noexcept { return indices_; }
    std::size_t order() const noexcept { return indices_.size(); }
    Index operator[](std::size_t i) const noexcept { return indices_[i]; }

    /// The order-(k-1) multiplet with member position `pos` dropped.
    std::vector<Index> without(std::size_t pos) const;

    /// Canonical ordering: ascending order k, then lexicographic indices.
    friend std::strong_ordering operator<=>(const Multiplet& a, const Multiplet& b);
    friend bool operator==(const Multiplet& a, const Multiplet& b) = default;

private:
    std::vector<Index> indices_;
};

enum class Sign { Redundant, Synergistic };

constexpr Sign sign_of(double omega) noexcept {
    return omega > 0.0 ? Sign::Redundant : Sign::Synergistic;
}

std::string_view to_string(Sign s) noexcept;

struct OInfoEstimate {
    Multiplet multiplet;
    double omega = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_raw = 1.0;
    double p_adj = 1.0;

    Sign sign() const noexcept { return sign_of(omega); }
};

struct Hyperedge {
    std::vector<Index> members;
    double omega = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_adj = 1.0;

    friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Named nodes plus same-signed weighted hyperedges. Edges are kept in
/// canonical order (size, then lexicographic members).
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(Sign sign, double alpha, std::vector<std::string> nodes, std::vector<Hyperedge> edges);

    Sign sign() const noexcept { return sign_; }
    double alpha() const noexcept { return alpha_; }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<Hyperedge>& edges() const noexcept { return edges_; }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    Sign sign_ = Sign::Redundant;
    double alpha_ = 0.01;
    std::vector<std::string> nodes_;
    std::vector<Hyperedge> edges_;
};

std::string hypergraph_to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(std::string_view text);

/// Symmetric, unit-diagonal, positive-definite matrix.
class CorrelationModel {
public:
    explicit CorrelationModel(Matrix m);

    const Matrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

private:
    Matrix m_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

std::string csv_escape(std::string_view field);

/// Double-quoted DOT identifier.
std::string dot_quote(std::string_view id);

/// Flat per-multiplet table: order, members, omega, ci_low, ci_high, p_raw,
/// p_adj, sign. When `status` is given, a trailing status column is added.
std::string estimates_to_csv(std::span<const OInfoEstimate> estimates,
                             const std::vector<std::string>& names,
                             std::span<const std::string> status = {});

}  // namespace hoinfo
