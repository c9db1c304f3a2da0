#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace steinmm::kernels {

// Reduction kernels behind the estimators and the simulation summaries.
// Every backend computes the same quantities; SIMD variants may differ from
// the scalar reference only by floating-point reassociation.
enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);

bool backend_available(Backend backend);

// Best available backend, unless overridden by force_backend() or by the
// STEINMM_SIMD environment variable (scalar | avx2 | neon).
Backend active_backend();

// Pins the backend for the whole process; throws UnsupportedError when the
// CPU lacks the instruction set.
void force_backend(Backend backend);

// Clears a previous force_backend() and re-runs detection.
void reset_backend();

struct SumSq {
  double sum;
  double sum_sq;
};

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
// Σ x_i y_i z_i
double dot3(std::span<const double> x, std::span<const double> y, std::span<const double> z);
SumSq sum_and_squares(std::span<const double> x);

// Explicit-backend entry points used by the equivalence tests.
double sum(Backend backend, std::span<const double> x);
double dot(Backend backend, std::span<const double> x, std::span<const double> y);
double dot3(Backend backend, std::span<const double> x, std::span<const double> y,
            std::span<const double> z);
SumSq sum_and_squares(Backend backend, std::span<const double> x);

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* x, const double* y, const double* z, std::size_t n);
SumSq sum_and_squares(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool supported();
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* x, const double* y, const double* z, std::size_t n);
SumSq sum_and_squares(const double* x, std::size_t n);
}  // namespace avx2

namespace neon {
bool supported();
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* x, const double* y, const double* z, std::size_t n);
SumSq sum_and_squares(const double* x, std::size_t n);
}  // namespace neon

}  // namespace steinmm::kernels
