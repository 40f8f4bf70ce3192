#include "hardcomplete/decode_psd.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hardcomplete {

namespace {

int paired_index(int i) { return (i % 2 == 1) ? i + 1 : i - 1; }

const PartitionMeta& partition_meta(const GramConstraintSystem& sys) {
    if (const auto* meta = std::get_if<PartitionMeta>(&sys.meta)) return *meta;
    throw std::invalid_argument("expected a partition-gadget system");
}

const CspMeta& csp_meta(const GramConstraintSystem& sys) {
    if (const auto* meta = std::get_if<CspMeta>(&sys.meta)) return *meta;
    throw std::invalid_argument("expected a CSP-gadget system");
}

} // namespace

DecodedPartition decode_partition(const GramConstraintSystem& sys, const VectorAssignment& va,
                                  double tol) {
    const PartitionMeta& meta = partition_meta(sys);
    const int n = meta.n;
    const std::vector<double>& a = meta.weights;

    if (va.dim() != 2 && va.dim() != 3)
        throw std::invalid_argument("decode_partition: ambient dimension must be 2 or 3");

    DecodedPartition out;

    // In dimension 3 the basis pairs of an (approximately) feasible
    // assignment are coplanar; read the rotations inside that plane.
    Eigen::MatrixXd coords(n, 2);
    if (va.dim() == 3) {
        Eigen::MatrixXd stacked(2 * n, 3);
        for (int i = 0; i < n; ++i) {
            stacked.row(2 * i) = va.at(labels::partition(i, 1)).transpose();
            stacked.row(2 * i + 1) = va.at(labels::partition(i, 2)).transpose();
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinV);
        out.planarity_residual = svd.singularValues()(2);
        if (out.planarity_residual > tol)
            throw std::runtime_error("decode_partition: vectors are not coplanar (residual " +
                                     std::to_string(out.planarity_residual) + ")");
        const Eigen::MatrixXd plane = svd.matrixV().leftCols(2); // ordered principal basis
        for (int i = 0; i < n; ++i)
            coords.row(i) = (va.at(labels::partition(i, 1)).transpose() * plane);
    } else {
        for (int i = 0; i < n; ++i)
            coords.row(i) = va.at(labels::partition(i, 1)).transpose();
    }

    out.rotation_signs.resize(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::RowVector2d w = coords.row(i);
        const Eigen::RowVector2d w_next = coords.row((i + 1) % n);
        const double cross = w(0) * w_next(1) - w(1) * w_next(0);
        const double dot = w.dot(w_next);
        const double angle = std::atan2(cross, dot);
        if (std::abs(angle) < 1e-12 && a[i] > tol)
            throw std::runtime_error("decode_partition: ambiguous rotation sign at item " +
                                     std::to_string(i + 1));
        out.rotation_signs[i] = angle >= 0.0 ? 1 : -1;
        out.angle_sum += out.rotation_signs[i] * a[i];
        if (out.rotation_signs[i] > 0) {
            out.split.in_set.push_back(i);
            out.in_sum += a[i];
        }
    }
    return out;
}

VectorAssignment repair_internal(const VectorAssignment& va, const GramConstraintSystem& sys,
                                 double eps) {
    const CspMeta& meta = csp_meta(sys);
    const int k = meta.k;
    const int two_k = 2 * k;
    if (!(eps >= 0.0 && eps < 0.25 / k))
        throw std::invalid_argument(
            "repair_internal: eps outside the O(1/k) regime the repair is valid for");

    // start from a copy; variable blocks are overwritten below, clause
    // vectors and anything else pass through untouched
    VectorAssignment out(va.dim());
    for (const auto& [label, vec] : va.vectors()) out.set(label, vec);

    for (int t = 0; t <= meta.n_vars; ++t) {
        // current basis, repaired in place left to right
        std::vector<Eigen::VectorXd> basis(two_k);
        for (int i = 1; i <= two_k; ++i) basis[i - 1] = va.at(labels::csp_basis(t, i));

        // degeneracy gate: Gram determinant of the block far from 1 means
        // the vectors no longer span a usable 2k-frame
        Eigen::MatrixXd gram(two_k, two_k);
        for (int i = 0; i < two_k; ++i)
            for (int j = 0; j < two_k; ++j) gram(i, j) = basis[i].dot(basis[j]);
        if (std::abs(gram.determinant()) < 1e-6)
            throw std::runtime_error("repair_internal: variable block x" + std::to_string(t) +
                                     " is numerically degenerate");

        for (int i = 0; i < two_k; ++i) {
            // span of everyone else: already-repaired vectors before i,
            // original vectors after i
            Eigen::MatrixXd peers(va.dim(), two_k - 1);
            int col = 0;
            for (int j = 0; j < two_k; ++j)
                if (j != i) peers.col(col++) = basis[j];
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(peers);
            Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(va.dim(), two_k - 1);
            Eigen::VectorXd perp = basis[i] - q * (q.transpose() * basis[i]);
            const double norm = perp.norm();
            if (norm < 1e-8)
                throw std::runtime_error("repair_internal: variable block x" + std::to_string(t) +
                                         " is numerically degenerate");
            basis[i] = perp / norm;
        }

        for (int i = 1; i <= two_k; ++i) out.set(labels::csp_basis(t, i), basis[i - 1]);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int i = 1; i <= two_k; ++i)
            for (int j = i + 1; j <= two_k; ++j) {
                out.set(labels::csp_sum(t, i, j, +1),
                        ((basis[i - 1] + basis[j - 1]) * inv_sqrt2).eval());
                out.set(labels::csp_sum(t, i, j, -1),
                        ((basis[i - 1] - basis[j - 1]) * inv_sqrt2).eval());
            }
    }
    return out;
}

DecodedAssignment decode_assignment(const GramConstraintSystem& sys, const VectorAssignment& va,
                                    double eps) {
    const CspMeta& meta = csp_meta(sys);
    const int k = meta.k;
    const int two_k = 2 * k;
    if (va.dim() > 4 * k - 1)
        throw std::invalid_argument(
            "decode_assignment: ambient dimension exceeds 4k-1, outside the soundness regime");

    VectorAssignment repaired = repair_internal(va, sys, eps);

    DecodedAssignment out;
    out.delta_threshold =
        std::min(2.0 / (13.0 * k * k), 2.0 / (24.0 * k + static_cast<double>(k) * k));
    for (const auto& [label, vec] : repaired.vectors())
        out.repair_max_drift = std::max(out.repair_max_drift, (vec - va.at(label)).norm());

    out.assignment.values.resize(meta.n_vars);
    out.magnitudes.resize(meta.n_vars);
    for (int t = 1; t <= meta.n_vars; ++t) {
        int sign = 0;
        double min_magnitude = 1.0;
        for (int i = 1; i <= two_k; i += 2) {
            const double dot = repaired.at(labels::csp_basis(0, i))
                                   .dot(repaired.at(labels::csp_basis(t, paired_index(i))));
            const int s = dot >= 0.0 ? 1 : -1;
            if (sign == 0)
                sign = s;
            else if (s != sign)
                throw std::runtime_error(
                    "decode_assignment: inconsistent rotation signs for variable x" +
                    std::to_string(t) + "; constraint errors exceed the soundness regime");
            min_magnitude = std::min(min_magnitude, std::abs(dot));
        }
        out.assignment.values[t - 1] = sign;
        out.magnitudes[t - 1] = min_magnitude;
    }

    // clause diagnostics on the rebuilt clause vectors
    const double inv_sqrtk = 1.0 / std::sqrt(static_cast<double>(k));
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(va.dim());
    for (int g = 1; g <= k; ++g) c0 += repaired.at(labels::csp_basis(0, 2 * g - 1));
    c0 *= inv_sqrtk;
    out.clause_residuals.resize(meta.clauses.size());
    for (std::size_t j = 0; j < meta.clauses.size(); ++j) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(va.dim());
        for (int g = 1; g <= k; ++g) {
            const Literal& lit = meta.clauses[j][g - 1];
            c += lit.sign * repaired.at(labels::csp_basis(lit.var + 1, 2 * g));
        }
        c *= inv_sqrtk;
        out.clause_residuals[j] = std::abs(c0.dot(c) - (1.0 - 2.0 / k));
        if (out.clause_residuals[j] >= out.delta_threshold) out.clauses_within_threshold = false;
    }
    return out;
}

} // namespace hardcomplete
