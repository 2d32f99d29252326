#include "codafin/coda/balance.hpp"

#include "codafin/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codafin::coda {

Eigen::MatrixXd contrast_matrix(const SbpTree& sbp, const std::vector<std::string>& labels) {
    sbp.check_labels(labels);
    const auto column = [&](const std::string& l) {
        return static_cast<Eigen::Index>(std::find(labels.begin(), labels.end(), l) - labels.begin());
    };
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sbp.coordinates()),
                                              static_cast<Eigen::Index>(labels.size()));
    for (std::size_t k = 0; k < sbp.coordinates(); ++k) {
        const auto& s = sbp.splits()[k];
        const double r = static_cast<double>(s.numerator.size());
        const double d = static_cast<double>(s.denominator.size());
        const double scale = std::sqrt(r * d / (r + d));
        for (const auto& l : s.numerator) v(static_cast<Eigen::Index>(k), column(l)) = scale / r;
        for (const auto& l : s.denominator) v(static_cast<Eigen::Index>(k), column(l)) = -scale / d;
    }
    return v;
}

BalanceVector ilr(const Composition& x, const SbpTree& sbp) {
    if (x.size() != sbp.parts()) {
        throw StructuralError("composition has " + std::to_string(x.size()) + " parts, SBP covers " +
                              std::to_string(sbp.parts()));
    }
    BalanceVector out;
    out.values.reserve(sbp.coordinates());
    out.names.reserve(sbp.coordinates());
    for (const auto& s : sbp.splits()) {
        out.values.push_back(balance(x, s.numerator, s.denominator));
        out.names.push_back(s.name());
    }
    return out;
}

Composition ilr_inverse(const std::vector<double>& z, const SbpTree& sbp,
                        const std::vector<std::string>& labels) {
    if (z.size() != sbp.coordinates()) {
        throw std::invalid_argument("balance vector has " + std::to_string(z.size()) +
                                    " entries, SBP defines " + std::to_string(sbp.coordinates()));
    }
    const Eigen::MatrixXd v = contrast_matrix(sbp, labels);
    const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
    Eigen::VectorXd logs = v.transpose() * zv;
    logs.array() -= logs.maxCoeff();
    Eigen::VectorXd parts = logs.array().exp();
    parts /= parts.sum();
    return Composition(std::vector<double>(parts.data(), parts.data() + parts.size()), labels);
}

Composition ilr_inverse(const std::vector<double>& z, const SbpTree& sbp) {
    return ilr_inverse(z, sbp, sbp.labels());
}

}  // namespace codafin::coda
