#pragma once

#include "hardcomplete/matrix.hpp"

namespace hardcomplete {

/// Controls for the Gram-matrix feasibility solve behind
/// sdp_min_rownorm_factor. The solver accepts any feasible point whose max
/// squared row norm is within the margin of the √(c·r) certificate; it does
/// not chase a true optimum, which the downstream pipeline never needs.
struct SdpFactorOptions {
    double residual_tol = 1e-8;  ///< max |u_i·v_j − M(i,j)| at convergence
    double eta_rel_margin = 5e-4; ///< allowed relative slack above √(c·r)
    double eta_abs_margin = -1.0; ///< absolute slack cap; negative = unused
    int max_iter = 20000;
    double relaxation = 1.0;      ///< Douglas–Rachford step scaling; 1 is standard
};

/// Result of the factorization SDP: row-vector families for U and V with
/// u_i · v_j ≈ M(i,j), living in an ambient dimension that may be as large
/// as m+n.
struct SdpFactorSolution {
    double eta = 0.0;                 ///< achieved max squared row norm
    Eigen::MatrixXd u;                ///< m × dim
    Eigen::MatrixXd v;                ///< n × dim
    int dim = 0;
    double eta_target = 0.0;          ///< the η bound the solve converged under
    double constraint_residual = 0.0; ///< max |u_i·v_j − M(i,j)|
    int iterations = 0;
};

/// Finds vector families u_i, v_j with u_i · v_j = M(i,j) and small maximum
/// squared row norm η, via Douglas–Rachford splitting between the PSD cone
/// and the affine/box set {Z : off-diagonal block = M, diag(Z) ≤ η_target}
/// over the (m+n)×(m+n) Gram matrix.
///
/// The target is tried in two phases: first η = √(c·r) (the (cr)^{1/4}
/// row-norm certificate, feasible whenever c ≤ 1 and often beyond), then the
/// always-feasible η = c·√r. The achieved target is reported in the solution.
/// Throws on non-convergence (message carries the best residual) and on
/// inputs beyond the supported scale (m+n > 512).
SdpFactorSolution sdp_min_rownorm_factor(const DenseMatrix& m, const SdpFactorOptions& opts = {});

/// Convenience form: residual tolerance tol, η within tol of √(c·rank).
SdpFactorSolution sdp_min_rownorm_factor(const DenseMatrix& m, double tol, int max_iter);

/// Projects every row of v onto the row space of u_basis (detected at the
/// given relative singular-value threshold). Never increases a row norm, and
/// leaves u_basis · vᵀ unchanged because the projector acts as the identity
/// on rows of u_basis.
Eigen::MatrixXd project_rows_to_rowspace(const Eigen::MatrixXd& u_basis,
                                         const Eigen::MatrixXd& v, double tol = 1e-9);

/// Rewrites (u, v_proj) in an orthonormal basis of the row space of v_proj
/// (pivoted QR, rank at relative threshold tol), producing a factorization of
/// dimension min(r, detected rank). Row norms never increase. A detected rank
/// below r is reported through the smaller output dimension.
Factorization rebase_factorization(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v_proj,
                                   int r, double tol = 1e-9);

/// Full pipeline: SDP factor, project V onto the row space of U, re-base to
/// rank(m) dimensions. The result reconstructs m with every row norm at most
/// (c·r)^{1/4} · (1 + norm_slack) whenever that bound is feasible — always
/// the case for c = max |m(i,j)| ≤ 1 — and at most √c · r^{1/4} ·
/// (1 + norm_slack) in general. Throws for the zero matrix.
Factorization bounded_factorize(const DenseMatrix& m, double norm_slack = 1e-3);

} // namespace hardcomplete
