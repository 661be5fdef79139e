#include "hoinfo/pairwise.hpp"

#include "hoinfo/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hoinfo {

PairwiseNetwork partial_correlation_network(const CorrelationModel& sigma, std::vector<std::string> names) {
    const auto p = static_cast<Eigen::Index>(sigma.dim());
    if (names.empty()) names = default_names(sigma.dim());
    if (names.size() != sigma.dim()) throw Error(ErrorCode::InvalidArgument, "one name per variable is required");
    Eigen::LLT<Matrix> llt(sigma.matrix());
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "correlation matrix is not positive definite; N may be too small for P");
    }
    const Matrix prec = llt.solve(Matrix::Identity(p, p));
    Matrix out = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            const double c = 0.5 * (prec(i, j) + prec(j, i));
            const double r = std::clamp(-c / std::sqrt(prec(i, i) * prec(j, j)), -1.0, 1.0);
            out(i, j) = r;
            out(j, i) = r;
        }
    }
    return {std::move(out), std::move(names)};
}

PairwiseNetwork partial_correlation_network(const CopulaData& d) {
    return partial_correlation_network(correlation(d), d.names());
}

std::string export_edge_list_csv(const PairwiseNetwork& net) {
    std::string out = "i,j,name_i,name_j,partial_correlation\n";
    const auto p = net.partial.rows();
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            out += std::to_string(i) + "," + std::to_string(j) + "," +
                   csv_escape(net.names[static_cast<std::size_t>(i)]) + "," +
                   csv_escape(net.names[static_cast<std::size_t>(j)]) + "," + format_number(net.partial(i, j)) + "\n";
        }
    }
    return out;
}

std::string export_pairwise_dot(const PairwiseNetwork& net, double min_abs) {
    std::ostringstream os;
    os << "graph pairwise {\n";
    for (const auto& n : net.names) os << "  " << dot_quote(n) << ";\n";
    const auto p = net.partial.rows();
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            const double r = net.partial(i, j);
            if (std::abs(r) <= min_abs) continue;
            os << "  " << dot_quote(net.names[static_cast<std::size_t>(i)]) << " -- "
               << dot_quote(net.names[static_cast<std::size_t>(j)]) << " [weight=" << format_number(r) << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace hoinfo
