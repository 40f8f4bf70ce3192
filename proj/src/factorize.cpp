#include "hardcomplete/factorize.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace hardcomplete {

namespace {

// Clips negative eigenvalues; returns the projected matrix and its factor
// W with Z⁺ = W Wᵀ (columns scaled by √λ over the kept spectrum).
struct PsdProjection {
    Eigen::MatrixXd z;
    Eigen::MatrixXd factor;
};

PsdProjection project_psd(const Eigen::MatrixXd& z) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lam_max = std::max(0.0, lam.maxCoeff());
    const double keep = lam_max * 1e-14;

    int kept = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > keep) ++kept;
    if (kept == 0) {
        return {Eigen::MatrixXd::Zero(z.rows(), z.cols()), Eigen::MatrixXd::Zero(z.rows(), 1)};
    }

    Eigen::MatrixXd w(z.rows(), kept);
    int col = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > keep) w.col(col++) = es.eigenvectors().col(i) * std::sqrt(lam(i));
    return {w * w.transpose(), std::move(w)};
}

} // namespace

SdpFactorSolution sdp_min_rownorm_factor(const DenseMatrix& m, const SdpFactorOptions& opts) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    const int dim = rows + cols;
    if (dim > 512)
        throw std::invalid_argument("sdp_min_rownorm_factor: matrix beyond supported scale");
    if (!m.allFinite())
        throw std::invalid_argument("sdp_min_rownorm_factor: non-finite entries");

    const double c = max_abs(m);
    if (c == 0.0) {
        SdpFactorSolution sol;
        sol.u = Eigen::MatrixXd::Zero(rows, 1);
        sol.v = Eigen::MatrixXd::Zero(cols, 1);
        sol.dim = 1;
        return sol;
    }

    const int r = numerical_rank(m, 1e-9);

    // Warm start from the SVD factorization U√Σ, V√Σ with each component
    // rescaled so the two sides peak at the same magnitude. For rank-1 input
    // this is already the optimal-η factorization.
    Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd w0(dim, r);
    for (int i = 0; i < r; ++i) {
        const double s = std::sqrt(svd.singularValues()(i));
        const double u_peak = svd.matrixU().col(i).cwiseAbs().maxCoeff();
        const double v_peak = svd.matrixV().col(i).cwiseAbs().maxCoeff();
        const double balance = (u_peak > 0 && v_peak > 0) ? std::sqrt(v_peak / u_peak) : 1.0;
        w0.col(i).head(rows) = svd.matrixU().col(i) * (s * balance);
        w0.col(i).tail(cols) = svd.matrixV().col(i) * (s / balance);
    }
    Eigen::MatrixXd z = w0 * w0.transpose();

    double best_residual = std::numeric_limits<double>::infinity();
    int iterations_used = 0;

    // Douglas–Rachford splitting between the PSD cone and the affine/box
    // constraint set; the PSD shadow sequence converges to the intersection.
    auto run = [&](double eta_target, int budget) -> std::optional<SdpFactorSolution> {
        auto apply_constraints = [&](Eigen::MatrixXd& zz) {
            zz.block(0, rows, rows, cols) = m;
            zz.block(rows, 0, cols, rows) = m.transpose();
            for (int i = 0; i < dim; ++i) zz(i, i) = std::min(zz(i, i), eta_target);
        };
        // the governing sequence diverges when the target is infeasible;
        // a residual plateau is the cue to stop burning the budget
        double plateau_mark = std::numeric_limits<double>::infinity();
        int since_improvement = 0;
        for (int iter = 1; iter <= budget; ++iter) {
            ++iterations_used;
            PsdProjection psd = project_psd(z);

            const double residual =
                (psd.z.block(0, rows, rows, cols) - m).cwiseAbs().maxCoeff();
            const double diag_violation =
                std::max(0.0, psd.z.diagonal().maxCoeff() - eta_target);
            best_residual = std::min(best_residual, std::max(residual, diag_violation));

            if (residual <= opts.residual_tol && diag_violation <= opts.residual_tol) {
                SdpFactorSolution sol;
                sol.u = psd.factor.topRows(rows);
                sol.v = psd.factor.bottomRows(cols);
                sol.dim = static_cast<int>(psd.factor.cols());
                sol.eta = psd.z.diagonal().maxCoeff();
                sol.eta_target = eta_target;
                sol.constraint_residual = residual;
                sol.iterations = iterations_used;
                return sol;
            }

            if (best_residual < 0.99 * plateau_mark) {
                plateau_mark = best_residual;
                since_improvement = 0;
            } else if (++since_improvement >= 500) {
                return std::nullopt;
            }

            Eigen::MatrixXd reflected = 2.0 * psd.z - z;
            apply_constraints(reflected); // reflected is now P_C(2 P_psd(z) − z)
            z += opts.relaxation * (reflected - psd.z);
        }
        return std::nullopt;
    };

    auto with_margin = [&](double cert) {
        double slack = cert * opts.eta_rel_margin;
        if (opts.eta_abs_margin >= 0.0) slack = std::min(slack, opts.eta_abs_margin);
        return cert + slack;
    };

    // Primary target: the (cr)^{1/4} row-norm certificate, i.e. η = √(cr).
    // That certificate only scales correctly for c ≤ 1; the general guarantee
    // is row norms ≤ √c·r^{1/4}, i.e. η = c√r. Try the tight target first,
    // then fall back to the always-feasible one.
    const double eta_tight = with_margin(std::min(std::sqrt(c * r), c * std::sqrt(r)));
    const double eta_safe = with_margin(c * std::sqrt(static_cast<double>(r)));

    const int phase1 = std::min(opts.max_iter, std::max(2000, opts.max_iter / 4));
    if (auto sol = run(eta_tight, phase1)) return *sol;
    z = w0 * w0.transpose(); // restart: an infeasible phase leaves z diverged
    if (eta_safe > eta_tight * (1.0 + 1e-12)) {
        if (auto sol = run(eta_safe, opts.max_iter - phase1)) return *sol;
    } else if (auto sol = run(eta_tight, opts.max_iter - phase1)) {
        return *sol;
    }

    std::ostringstream msg;
    msg << "sdp_min_rownorm_factor: no convergence in " << iterations_used
        << " iterations (best residual " << best_residual << ")";
    throw std::runtime_error(msg.str());
}

SdpFactorSolution sdp_min_rownorm_factor(const DenseMatrix& m, double tol, int max_iter) {
    SdpFactorOptions opts;
    opts.residual_tol = tol;
    opts.eta_abs_margin = tol / 2.0;
    opts.max_iter = max_iter;
    return sdp_min_rownorm_factor(m, opts);
}

Eigen::MatrixXd project_rows_to_rowspace(const Eigen::MatrixXd& u_basis,
                                         const Eigen::MatrixXd& v, double tol) {
    if (u_basis.rows() == 0 || max_abs(u_basis) == 0.0)
        return Eigen::MatrixXd::Zero(v.rows(), v.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u_basis, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = tol * sv(0);
    int rho = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rho;
    const Eigen::MatrixXd basis = svd.matrixV().leftCols(rho);
    return v * basis * basis.transpose();
}

Factorization rebase_factorization(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v_proj,
                                   int r, double tol) {
    if (r < 1) throw std::invalid_argument("rebase_factorization: r must be >= 1");
    const Eigen::Index ambient = v_proj.cols();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v_proj.transpose());
    qr.setThreshold(tol);
    const int detected = static_cast<int>(qr.rank());
    if (detected == 0)
        throw std::invalid_argument("rebase_factorization: projected rows are numerically zero");
    const int dim = std::min(r, detected);

    // Leading dim columns of Q span the dominant pivoted directions of the
    // row space of v_proj; a detected rank below r surfaces as a smaller
    // output dimension.
    Eigen::MatrixXd basis =
        qr.householderQ() * Eigen::MatrixXd::Identity(ambient, dim);
    return Factorization{u * basis, v_proj * basis};
}

Factorization bounded_factorize(const DenseMatrix& m, double norm_slack) {
    if (max_abs(m) == 0.0)
        throw std::invalid_argument("bounded_factorize: matrix must be nonzero");

    const int r = numerical_rank(m, 1e-9);
    SdpFactorOptions opts;
    opts.eta_rel_margin = 0.9 * norm_slack;
    SdpFactorSolution sol = sdp_min_rownorm_factor(m, opts);
    Eigen::MatrixXd v_proj = project_rows_to_rowspace(sol.u, sol.v);
    return rebase_factorization(sol.u, v_proj, r);
}

} // namespace hardcomplete
