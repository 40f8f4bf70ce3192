#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <utility>

namespace hardcomplete {

/// Dense matrices are plain Eigen matrices; everything in this library is
/// desk-scale dense double precision.
using DenseMatrix = Eigen::MatrixXd;

/// Symmetric n×n matrix with a revealed-entry mask and a coefficient bound.
/// Unrevealed entries are simply absent from the map (no sentinel values).
/// Entries are stored under the canonical key (min(i,j), max(i,j)) and
/// mirrored on read, so symmetry holds by construction.
class PartialMatrix {
public:
    using Key = std::pair<int, int>;

    PartialMatrix(int n, double coeff_bound);

    /// Reveals entry (i,j) (and its mirror) with value v, 0-based indices.
    /// Throws on out-of-range indices, |v| > coefficient bound, or a
    /// conflicting re-reveal of the same entry.
    void reveal(int i, int j, double v);

    /// Value at (i,j) if revealed.
    std::optional<double> at(int i, int j) const;

    bool revealed(int i, int j) const { return at(i, j).has_value(); }

    int dim() const { return n_; }
    double coeff_bound() const { return c_; }

    /// |Ω|: number of revealed positions counting both orientations
    /// (diagonal entries once, off-diagonal pairs twice).
    std::size_t omega_size() const { return omega_; }

    std::size_t unrevealed_count() const {
        return static_cast<std::size_t>(n_) * n_ - omega_;
    }

    /// p = |Ω| / n².
    double revealed_fraction() const {
        return static_cast<double>(omega_) / (static_cast<double>(n_) * n_);
    }

    /// Canonical entries (i ≤ j), ordered; the file format and all iteration
    /// go through this view.
    const std::map<Key, double>& canonical_entries() const { return entries_; }

private:
    int n_;
    double c_;
    std::size_t omega_ = 0;
    std::map<Key, double> entries_;
};

/// Measured agreement between a partial matrix A and a candidate completion B.
struct ConsistencyReport {
    double rmse_sum = 0.0;      ///< Σ_{(i,j)∈Ω} (A(i,j) − B(i,j))², both orientations
    double max_entry_err = 0.0; ///< max over Ω of |A(i,j) − B(i,j)|
    int rank_est = 0;           ///< numerical rank of B
    bool coeff_bound_ok = true; ///< all |B(i,j)| ≤ c, over every entry of B
};

/// Two families of row vectors u_i, v_j with u_i · v_j reconstructing a
/// matrix. Rows of u and v are stored as matrix rows; rank() is the inner
/// dimension.
struct Factorization {
    Eigen::MatrixXd u; ///< n_rows × r
    Eigen::MatrixXd v; ///< n_cols × r

    int rank() const { return static_cast<int>(u.cols()); }
    double reconstruct(int i, int j) const { return u.row(i).dot(v.row(j)); }
    DenseMatrix reconstruct() const { return u * v.transpose(); }
    double max_row_norm() const;
};

/// Compares b against the revealed entries of pm. Throws on dimension
/// mismatch. rank_est uses the given relative singular-value threshold.
ConsistencyReport consistency(const PartialMatrix& pm, const DenseMatrix& b,
                              double rank_tol = 1e-9);

/// Number of singular values exceeding tol · σ_max; 0 for the zero matrix.
int numerical_rank(const DenseMatrix& m, double tol = 1e-9);

/// Coherence μ of a symmetric matrix per its SVD: the smallest μ such that
/// every projected basis-vector norm ‖e_iᵀU‖ (and ‖e_iᵀV‖) is ≤ √(kμ/n),
/// where k is the numerical rank at threshold tol. Reported for the computed
/// decomposition, i.e. an upper bound on the optimal μ. Throws for the zero
/// matrix (undefined) and for asymmetric input.
double coherence(const DenseMatrix& m, double tol = 1e-9);

/// True iff the smallest eigenvalue is ≥ −tol. Throws on asymmetric input.
bool is_psd(const DenseMatrix& m, double tol = 1e-9);

/// Largest absolute entry (0 for empty matrices).
double max_abs(const DenseMatrix& m);

} // namespace hardcomplete
