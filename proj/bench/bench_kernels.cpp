// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "owladv/kernels.hpp"

using namespace owladv;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (auto& v : m.reshaped()) v = g(rng);
    return m;
}

template <Vector (*Kernel)(const Matrix&, const Vector&)>
void BM_matvec(benchmark::State& state) {
    const auto n = state.range(0);
    const Matrix A = random_matrix(n, 2 * n);
    const Vector x = Vector::Ones(2 * n);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(A, x));
    state.SetItemsProcessed(state.iterations() * A.size());
}

template <Vector (*Kernel)(const Matrix&, const Vector&)>
void BM_matvec_t(benchmark::State& state) {
    const auto n = state.range(0);
    const Matrix A = random_matrix(n, 2 * n);
    const Vector r = Vector::Ones(n);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(A, r));
    state.SetItemsProcessed(state.iterations() * A.size());
}

// Finite differences of a quadratic form, the shape of the gradient oracle.
template <Vector (*Kernel)(const kernels::ScalarFn&, const Vector&, double)>
void BM_central_difference(benchmark::State& state) {
    const auto n = state.range(0);
    const Matrix A = random_matrix(n, n);
    const kernels::ScalarFn f = [&](const Vector& v) { return (A * v).squaredNorm(); };
    const Vector x = Vector::Ones(n);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, x, 1e-6));
}

}  // namespace

BENCHMARK(BM_matvec<kernels::matvec_serial>)->Name("matvec/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_matvec<kernels::matvec_omp>)->Name("matvec/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_matvec_t<kernels::matvec_t_serial>)->Name("matvec_t/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_matvec_t<kernels::matvec_t_omp>)->Name("matvec_t/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_central_difference<kernels::central_difference_serial>)
    ->Name("central_difference/serial")->Arg(50)->Arg(200);
BENCHMARK(BM_central_difference<kernels::central_difference_omp>)
    ->Name("central_difference/omp")->Arg(50)->Arg(200);

BENCHMARK_MAIN();
