#include "owladv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace owladv::kernels {

namespace {

constexpr Eigen::Index kParallelThreshold = 1 << 15;

bool use_parallel(const Matrix& A) {
    return A.size() >= kParallelThreshold && !omp_in_parallel() && omp_get_max_threads() > 1;
}

void check_matvec(const Matrix& A, const Vector& x) {
    if (A.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
}

void check_matvec_t(const Matrix& A, const Vector& r) {
    if (A.rows() != r.size()) throw std::invalid_argument("matvec_t: dimension mismatch");
}

constexpr Eigen::Index kRowBlock = 64;

// Rows [i0, i0 + kRowBlock) of A x, walking down columns so the reads are
// contiguous. Each entry still sums over j in order.
inline void row_block(const Matrix& A, Eigen::Index i0, const Vector& x, Vector& y) {
    const Eigen::Index rows = A.rows();
    const Eigen::Index len = std::min(kRowBlock, rows - i0);
    double acc[kRowBlock] = {};
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double* col = A.data() + j * rows + i0;
        const double xj = x(j);
        for (Eigen::Index k = 0; k < len; ++k) acc[k] += col[k] * xj;
    }
    for (Eigen::Index k = 0; k < len; ++k) y(i0 + k) = acc[k];
}

inline double col_dot(const Matrix& A, Eigen::Index j, const Vector& r) {
    const double* col = A.data() + j * A.rows();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) acc += col[i] * r(i);
    return acc;
}

double checked_difference(const ScalarFn& f, Vector& probe, Eigen::Index i, double h) {
    const double base = probe(i);
    probe(i) = base + h;
    const double up = f(probe);
    probe(i) = base - h;
    const double down = f(probe);
    probe(i) = base;
    if (!std::isfinite(up) || !std::isfinite(down)) {
        throw std::domain_error("central_difference: function returned a non-finite value");
    }
    return (up - down) / (2.0 * h);
}

void check_step(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("central_difference: h must be positive");
}

}  // namespace

Vector matvec_serial(const Matrix& A, const Vector& x) {
    check_matvec(A, x);
    Vector y(A.rows());
    for (Eigen::Index i0 = 0; i0 < A.rows(); i0 += kRowBlock) row_block(A, i0, x, y);
    return y;
}

Vector matvec_omp(const Matrix& A, const Vector& x) {
    check_matvec(A, x);
    Vector y(A.rows());
    const Eigen::Index blocks = (A.rows() + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < blocks; ++b) row_block(A, b * kRowBlock, x, y);
    return y;
}

Vector matvec_t_serial(const Matrix& A, const Vector& r) {
    check_matvec_t(A, r);
    Vector y(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) y(j) = col_dot(A, j, r);
    return y;
}

Vector matvec_t_omp(const Matrix& A, const Vector& r) {
    check_matvec_t(A, r);
    Vector y(A.cols());
    const Eigen::Index cols = A.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j) y(j) = col_dot(A, j, r);
    return y;
}

Vector matvec(const Matrix& A, const Vector& x) {
    return use_parallel(A) ? matvec_omp(A, x) : matvec_serial(A, x);
}

Vector matvec_t(const Matrix& A, const Vector& r) {
    return use_parallel(A) ? matvec_t_omp(A, r) : matvec_t_serial(A, r);
}

Vector central_difference_serial(const ScalarFn& f, const Vector& x, double h) {
    check_step(h);
    Vector grad(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) grad(i) = checked_difference(f, probe, i, h);
    return grad;
}

Vector central_difference_omp(const ScalarFn& f, const Vector& x, double h) {
    check_step(h);
    Vector grad(x.size());
    const Eigen::Index n = x.size();
    bool failed = false;
#pragma omp parallel
    {
        Vector probe = x;
#pragma omp for schedule(dynamic)
        for (Eigen::Index i = 0; i < n; ++i) {
            try {
                grad(i) = checked_difference(f, probe, i, h);
            } catch (...) {
#pragma omp atomic write
                failed = true;
            }
        }
    }
    if (failed) {
        throw std::domain_error("central_difference: function returned a non-finite value");
    }
    return grad;
}

}  // namespace owladv::kernels
