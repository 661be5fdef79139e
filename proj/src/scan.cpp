#include "hoinfo/scan.hpp"

#include "hoinfo/error.hpp"
#include "hoinfo/parallel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hoinfo {

void ScanConfig::validate(std::size_t p) const {
    const std::size_t universe = subset_filter.empty() ? p : subset_filter.size();
    for (auto j : subset_filter) {
        if (j >= p) throw Error(ErrorCode::IndexOutOfRange, "subset filter index " + std::to_string(j));
    }
    if (universe < 3) throw Error(ErrorCode::InvalidArgument, "the variable universe needs at least 3 members");
    if (max_order < 3 || max_order > universe) {
        throw Error(ErrorCode::InvalidArgument, "max order must lie in [3, " + std::to_string(universe) + "]");
    }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

MultipletEnumerator::MultipletEnumerator(std::size_t p, const ScanConfig& cfg) : max_order_(cfg.max_order) {
    cfg.validate(p);
    if (cfg.subset_filter.empty()) {
        universe_.resize(p);
        std::iota(universe_.begin(), universe_.end(), Index{0});
    } else {
        universe_ = cfg.subset_filter;
        std::sort(universe_.begin(), universe_.end());
        if (std::adjacent_find(universe_.begin(), universe_.end()) != universe_.end()) {
            throw Error(ErrorCode::DuplicateIndex, "subset filter repeats an index");
        }
    }
    const std::uint64_t n = universe_.size();
    offset_.assign(max_order_ + 2, 0);
    std::uint64_t total = 0;
    for (std::size_t k = 3; k <= max_order_; ++k) {
        offset_[k] = total;
        const auto c = binomial(n, k);
        total = (c > std::numeric_limits<std::uint64_t>::max() - total) ? std::numeric_limits<std::uint64_t>::max()
                                                                         : total + c;
    }
    offset_[max_order_ + 1] = total;
    total_ = total;
    if (cfg.cap != 0 && total_ > cfg.cap) {
        throw Error(ErrorCode::CombinatorialOverflow,
                    std::to_string(total_) + " multiplets exceed the cap of " + std::to_string(cfg.cap) +
                        "; lower the maximum order or raise the cap");
    }
}

Multiplet MultipletEnumerator::at(std::uint64_t ordinal) const {
    if (ordinal >= total_) throw Error(ErrorCode::IndexOutOfRange, "multiplet ordinal out of range");
    std::size_t k = 3;
    while (ordinal >= offset_[k + 1]) ++k;
    std::uint64_t r = ordinal - offset_[k];
    const std::uint64_t n = universe_.size();
    std::vector<Index> out;
    out.reserve(k);
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (;; ++c) {
            const auto block = binomial(n - c - 1, k - i - 1);
            if (r < block) break;
            r -= block;
        }
        out.push_back(universe_[c]);
        ++c;
    }
    return Multiplet::from_sorted(std::move(out));
}

void MultipletEnumerator::for_each(std::uint64_t begin, std::uint64_t end,
                                   const std::function<void(std::uint64_t, std::span<const Index>)>& fn) const {
    end = std::min(end, total_);
    if (begin >= end) return;
    const std::size_t n = universe_.size();
    // positions into universe_
    std::vector<std::size_t> pos;
    {
        const auto first = at(begin);
        for (auto v : first.indices()) {
            pos.push_back(static_cast<std::size_t>(std::lower_bound(universe_.begin(), universe_.end(), v) -
                                                   universe_.begin()));
        }
    }
    std::vector<Index> members(pos.size());
    for (std::uint64_t ord = begin; ord < end; ++ord) {
        const std::size_t k = pos.size();
        for (std::size_t i = 0; i < k; ++i) members[i] = universe_[pos[i]];
        fn(ord, std::span<const Index>(members.data(), k));
        // advance to the lexicographic successor, or the first set of order k + 1
        std::size_t i = k;
        while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) {
            pos.resize(k + 1);
            members.resize(k + 1);
            std::iota(pos.begin(), pos.end(), std::size_t{0});
        } else {
            ++pos[i - 1];
            for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
        }
    }
}

std::optional<std::uint64_t> MultipletEnumerator::ordinal_of(std::span<const Index> members) const {
    const std::size_t k = members.size();
    if (k < 3 || k > max_order_) return std::nullopt;
    const std::uint64_t n = universe_.size();
    std::uint64_t rank = 0;
    std::uint64_t next = 0;
    for (std::size_t i = 0; i < k; ++i) {
        auto it = std::lower_bound(universe_.begin(), universe_.end(), members[i]);
        if (it == universe_.end() || *it != members[i]) return std::nullopt;
        const auto p = static_cast<std::uint64_t>(it - universe_.begin());
        if (p < next) return std::nullopt;
        for (std::uint64_t c = next; c < p; ++c) rank += binomial(n - c - 1, k - i - 1);
        next = p + 1;
    }
    return offset_[k] + rank;
}

std::vector<Multiplet> enumerate_multiplets(std::size_t p, const ScanConfig& cfg) {
    MultipletEnumerator e(p, cfg);
    std::vector<Multiplet> out;
    out.reserve(e.size());
    e.for_each(0, e.size(), [&](std::uint64_t, std::span<const Index> m) {
        out.push_back(Multiplet::from_sorted(std::vector<Index>(m.begin(), m.end())));
    });
    return out;
}

ScanResult scan(const CopulaData& d, const ScanConfig& cfg, const ScanOptions& opts) {
    MultipletEnumerator e(d.n_vars(), cfg);
    if (d.n_obs() < cfg.max_order + 2) {
        throw Error(ErrorCode::InvalidArgument, "need N >= max order + 2 observations");
    }
    const OmegaEvaluator eval(correlation_matrix(d.scores()), d.name_rank(), d.n_obs(), opts.estimator);

    ScanResult result;
    result.estimates.resize(e.size());
    parallel_for(e.size(), opts.threads, 4096, [&](std::size_t begin, std::size_t end) {
        e.for_each(begin, end, [&](std::uint64_t ord, std::span<const Index> members) {
            auto omega = eval(members);
            auto& slot = result.estimates[ord];
            slot.multiplet = Multiplet::from_sorted(std::vector<Index>(members.begin(), members.end()));
            if (!omega) {
                std::string names;
                for (auto j : members) names += (names.empty() ? "" : ", ") + d.names()[j];
                throw Error(ErrorCode::NotPositiveDefinite,
                            "sample correlation of {" + names + "} is not positive definite");
            }
            slot.omega = *omega;
        });
    });
    return result;
}

}  // namespace hoinfo
