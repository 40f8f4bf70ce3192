#include "hardcomplete/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hardcomplete {

namespace {

Eigen::VectorXd singular_values(const DenseMatrix& m) {
    // Jacobi is the most accurate option at small sizes; divide-and-conquer
    // takes over once matrices grow past a cache-friendly size.
    if (m.rows() <= 128 && m.cols() <= 128)
        return Eigen::JacobiSVD<DenseMatrix>(m).singularValues();
    return Eigen::BDCSVD<DenseMatrix>(m).singularValues();
}

void require_symmetric(const DenseMatrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(who) + ": matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
}

} // namespace

PartialMatrix::PartialMatrix(int n, double coeff_bound) : n_(n), c_(coeff_bound) {
    if (n <= 0) throw std::invalid_argument("PartialMatrix: dimension must be positive");
    if (!(coeff_bound > 0.0))
        throw std::invalid_argument("PartialMatrix: coefficient bound must be positive");
}

void PartialMatrix::reveal(int i, int j, double v) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("PartialMatrix::reveal: index out of range");
    if (!std::isfinite(v) || std::abs(v) > c_)
        throw std::invalid_argument("PartialMatrix::reveal: |value| exceeds coefficient bound " +
                                    std::to_string(c_));
    const Key key{std::min(i, j), std::max(i, j)};
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        if (it->second != v)
            throw std::invalid_argument("PartialMatrix::reveal: conflicting value at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
        return;
    }
    entries_.emplace(key, v);
    omega_ += (key.first == key.second) ? 1 : 2;
}

std::optional<double> PartialMatrix::at(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("PartialMatrix::at: index out of range");
    auto it = entries_.find(Key{std::min(i, j), std::max(i, j)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

double Factorization::max_row_norm() const {
    double best = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) best = std::max(best, u.row(i).norm());
    for (Eigen::Index i = 0; i < v.rows(); ++i) best = std::max(best, v.row(i).norm());
    return best;
}

ConsistencyReport consistency(const PartialMatrix& pm, const DenseMatrix& b, double rank_tol) {
    if (b.rows() != pm.dim() || b.cols() != pm.dim())
        throw std::invalid_argument("consistency: completion has wrong dimensions");

    ConsistencyReport rep;
    for (const auto& [key, value] : pm.canonical_entries()) {
        const auto [i, j] = key;
        // Ω contains both orientations of an off-diagonal entry, and b is not
        // required to be symmetric, so (i,j) and (j,i) contribute separately.
        const double err = std::abs(value - b(i, j));
        rep.rmse_sum += err * err;
        rep.max_entry_err = std::max(rep.max_entry_err, err);
        if (i != j) {
            const double err_t = std::abs(value - b(j, i));
            rep.rmse_sum += err_t * err_t;
            rep.max_entry_err = std::max(rep.max_entry_err, err_t);
        }
    }
    rep.rank_est = numerical_rank(b, rank_tol);
    rep.coeff_bound_ok = b.cwiseAbs().maxCoeff() <= pm.coeff_bound();
    return rep;
}

int numerical_rank(const DenseMatrix& m, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("numerical_rank: tol must be positive");
    if (m.size() == 0) return 0;
    const Eigen::VectorXd sv = singular_values(m);
    const double cutoff = tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

double coherence(const DenseMatrix& m, double tol) {
    require_symmetric(m, "coherence");
    if (max_abs(m) == 0.0) throw std::invalid_argument("coherence: undefined for the zero matrix");

    const auto n = m.rows();
    auto compute = [&](const auto& svd) {
        const Eigen::VectorXd& sv = svd.singularValues();
        const double cutoff = tol * sv(0);
        int k = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cutoff) ++k;

        double max_proj_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            max_proj_sq = std::max(max_proj_sq, svd.matrixU().row(i).head(k).squaredNorm());
            max_proj_sq = std::max(max_proj_sq, svd.matrixV().row(i).head(k).squaredNorm());
        }
        return static_cast<double>(n) / k * max_proj_sq;
    };
    if (n <= 128)
        return compute(Eigen::JacobiSVD<DenseMatrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV));
    return compute(Eigen::BDCSVD<DenseMatrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV));
}

bool is_psd(const DenseMatrix& m, double tol) {
    require_symmetric(m, "is_psd");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double max_abs(const DenseMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace hardcomplete
