#include "hoinfo/io.hpp"

#include "hoinfo/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace hoinfo {

namespace {

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": unterminated quote");
    out.push_back(std::move(cur));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Dataset parse_csv(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<std::string> names;
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_record(line, line_no);
        if (names.empty()) {
            for (auto& f : fields) names.emplace_back(trim(f));
            continue;
        }
        if (fields.size() != names.size()) {
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": expected " +
                                                       std::to_string(names.size()) + " fields, found " +
                                                       std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto cell = trim(fields[j]);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ", column " +
                                                           std::to_string(j + 1) + " (" + names[j] +
                                                           "): not a finite number: '" + std::string(cell) + "'");
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (names.empty()) throw Error(ErrorCode::MalformedInput, "empty input: a header row is required");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < names.size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * names.size() + j];
        }
    }
    return Dataset(std::move(m), std::move(names));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Dataset read_csv(const std::filesystem::path& path) {
    return parse_csv(read_file(path));
}

std::string dataset_to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t j = 0; j < d.n_vars(); ++j) out += (j ? "," : "") + csv_escape(d.names()[j]);
    out += '\n';
    for (Eigen::Index i = 0; i < d.values().rows(); ++i) {
        for (Eigen::Index j = 0; j < d.values().cols(); ++j) {
            if (j) out += ',';
            out += format_number(d.values()(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void ArtifactSet::add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
}

void ArtifactSet::commit() const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir_.string() + ": " + ec.message());
    const std::string suffix = ".tmp." + std::to_string(::getpid());
    std::vector<fs::path> staged;
    auto discard = [&] {
        for (const auto& p : staged) fs::remove(p, ec);
    };
    for (const auto& [name, content] : files_) {
        const fs::path tmp = dir_ / ("." + name + suffix);
        staged.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) {
            discard();
            throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
        }
    }
    for (std::size_t i = 0; i < files_.size(); ++i) {
        fs::rename(staged[i], dir_ / files_[i].first, ec);
        if (ec) {
            const auto msg = ec.message();
            for (std::size_t j = 0; j < i; ++j) fs::remove(dir_ / files_[j].first, ec);
            discard();
            throw Error(ErrorCode::IoFailure, "cannot move " + staged[i].string() + " into place: " + msg);
        }
    }
}

}  // namespace hoinfo
