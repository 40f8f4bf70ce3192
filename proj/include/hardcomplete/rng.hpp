#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cmath>

namespace hardcomplete {

/// Deterministic random source. All randomness in the library flows through
/// this generator so that runs are reproducible from a single seed across
/// platforms and standard-library versions (std distributions are
/// implementation-defined; we hand-roll the few samplers we need).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds diverge immediately
        next();
        next();
    }

    /// splitmix64 step.
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Standard normal via Box-Muller (no cached spare, fully deterministic).
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Eigen::VectorXd gaussian_vector(int dim) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = gaussian();
        return v;
    }

    /// Uniform point on the unit sphere S^{dim-1}.
    Eigen::VectorXd unit_vector(int dim) {
        for (;;) {
            Eigen::VectorXd v = gaussian_vector(dim);
            const double n = v.norm();
            if (n > 1e-12) return v / n;
        }
    }

    /// Haar-ish random rotation (QR of a Gaussian matrix, det forced to +1).
    Eigen::MatrixXd random_rotation(int dim) {
        Eigen::MatrixXd g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = gaussian();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ();
        Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < dim; ++j)
            if (r(j, j) < 0) q.col(j) = -q.col(j);
        if (q.determinant() < 0) q.col(dim - 1) = -q.col(dim - 1);
        return q;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream from (seed, stream index); used to fan out
/// per-trial and per-restart generators without correlations.
inline Rng rng_for_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
}

} // namespace hardcomplete
