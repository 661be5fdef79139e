#pragma once

#include "hoinfo/datamodel.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hoinfo {

/// Header row of variable names, then one numeric row per observation.
/// Errors name the 1-based line and column.
Dataset parse_csv(std::string_view text);
Dataset read_csv(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

/// Full-precision CSV of a Dataset, header included.
std::string dataset_to_csv(const Dataset& d);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Collects output files in memory and publishes them together: every file
/// is first written to a temporary name in the target directory and only
/// renamed into place once all writes succeeded.
class ArtifactSet {
public:
    explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(std::string name, std::string content);
    void commit() const;

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace hoinfo
