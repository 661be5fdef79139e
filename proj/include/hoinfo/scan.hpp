#pragma once

#include "hoinfo/datamodel.hpp"
#include "hoinfo/gaussian_info.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace hoinfo {

inline constexpr std::uint64_t kDefaultMultipletCap = 10'000'000;

struct ScanConfig {
    std::size_t max_order = 4;
    /// Restricts the universe of variables; empty means all.
    std::vector<Index> subset_filter;
    /// Upper bound on the number of enumerated multiplets; 0 disables it.
    std::uint64_t cap = kDefaultMultipletCap;

    void validate(std::size_t p) const;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// Lexicographic enumeration of all k-subsets (k = 3..max_order) of the
/// universe, orders ascending. Random access by ordinal lets workers start
/// anywhere without materializing the sequence.
class MultipletEnumerator {
public:
    /// Throws CombinatorialOverflow when the total exceeds the cap.
    MultipletEnumerator(std::size_t p, const ScanConfig& cfg);

    std::uint64_t size() const noexcept { return total_; }
    std::size_t min_order() const noexcept { return 3; }
    std::size_t max_order() const noexcept { return max_order_; }

    /// The multiplet at position `ordinal` of the canonical sequence.
    Multiplet at(std::uint64_t ordinal) const;

    /// Visits ordinals [begin, end) in order, reusing one index buffer.
    void for_each(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, std::span<const Index>)>& fn) const;

    /// Ordinal of a canonical multiplet drawn from the universe.
    std::optional<std::uint64_t> ordinal_of(std::span<const Index> members) const;

private:
    std::vector<Index> universe_;
    std::size_t max_order_;
    std::vector<std::uint64_t> offset_;  // first ordinal of each order
    std::uint64_t total_ = 0;
};

/// Materialized canonical sequence.
std::vector<Multiplet> enumerate_multiplets(std::size_t p, const ScanConfig& cfg);

struct ScanEntry {
    Multiplet multiplet;
    double omega = 0.0;
};

struct ScanResult {
    std::vector<ScanEntry> estimates;
};

struct ScanOptions {
    std::size_t threads = 0;
    EstimatorOptions estimator;
};

/// Omega for every enumerated multiplet, in canonical order. The full
/// correlation matrix is computed once and each multiplet reads its
/// principal submatrix.
ScanResult scan(const CopulaData& d, const ScanConfig& cfg, const ScanOptions& opts = {});

}  // namespace hoinfo
