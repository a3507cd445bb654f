#pragma once

// Data-parallel building blocks. Every kernel has a serial reference and an
// OpenMP variant. Each output entry is accumulated by exactly one thread in
// the same order as the serial loop, so both variants agree bit-for-bit.

#include <functional>

#include "owladv/owl.hpp"

namespace owladv::kernels {

// y = A x
Vector matvec_serial(const Matrix& A, const Vector& x);
Vector matvec_omp(const Matrix& A, const Vector& x);

// y = A^T r
Vector matvec_t_serial(const Matrix& A, const Vector& r);
Vector matvec_t_omp(const Matrix& A, const Vector& r);

/// Dispatches to the OpenMP variant for large operands when not already
/// inside a parallel region.
Vector matvec(const Matrix& A, const Vector& x);
Vector matvec_t(const Matrix& A, const Vector& r);

using ScalarFn = std::function<double(const Vector&)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h) per coordinate.
/// The OpenMP variant calls f concurrently, so f must be safe to share.
Vector central_difference_serial(const ScalarFn& f, const Vector& x, double h);
Vector central_difference_omp(const ScalarFn& f, const Vector& x, double h);

}  // namespace owladv::kernels
