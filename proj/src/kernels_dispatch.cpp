#include <atomic>
#include <cstdlib>
#include <string>

#include "steinmm/errors.hpp"
#include "steinmm/kernels.hpp"

namespace steinmm::kernels {

namespace {

// -1 means "not yet detected".
std::atomic<int> g_backend{-1};

Backend detect() {
  if (const char* env = std::getenv("STEINMM_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && avx2::supported()) return Backend::Avx2;
    if (want == "neon" && neon::supported()) return Backend::Neon;
  }
  if (avx2::supported()) return Backend::Avx2;
  if (neon::supported()) return Backend::Neon;
  return Backend::Scalar;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("kernel inputs must have equal length");
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "?";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return avx2::supported();
    case Backend::Neon:
      return neon::supported();
  }
  return false;
}

Backend active_backend() {
  int current = g_backend.load(std::memory_order_acquire);
  if (current < 0) {
    current = static_cast<int>(detect());
    int expected = -1;
    g_backend.compare_exchange_strong(expected, current, std::memory_order_acq_rel);
    current = g_backend.load(std::memory_order_acquire);
  }
  return static_cast<Backend>(current);
}

void force_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw UnsupportedError("SIMD backend " + std::string(to_string(backend)) +
                           " is not available on this CPU");
  }
  g_backend.store(static_cast<int>(backend), std::memory_order_release);
}

void reset_backend() { g_backend.store(-1, std::memory_order_release); }

double sum(Backend backend, std::span<const double> x) {
  switch (backend) {
    case Backend::Avx2:
      return avx2::sum(x.data(), x.size());
    case Backend::Neon:
      return neon::sum(x.data(), x.size());
    default:
      return scalar::sum(x.data(), x.size());
  }
}

double dot(Backend backend, std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size());
  switch (backend) {
    case Backend::Avx2:
      return avx2::dot(x.data(), y.data(), x.size());
    case Backend::Neon:
      return neon::dot(x.data(), y.data(), x.size());
    default:
      return scalar::dot(x.data(), y.data(), x.size());
  }
}

double dot3(Backend backend, std::span<const double> x, std::span<const double> y,
            std::span<const double> z) {
  require_same_size(x.size(), y.size());
  require_same_size(x.size(), z.size());
  switch (backend) {
    case Backend::Avx2:
      return avx2::dot3(x.data(), y.data(), z.data(), x.size());
    case Backend::Neon:
      return neon::dot3(x.data(), y.data(), z.data(), x.size());
    default:
      return scalar::dot3(x.data(), y.data(), z.data(), x.size());
  }
}

SumSq sum_and_squares(Backend backend, std::span<const double> x) {
  switch (backend) {
    case Backend::Avx2:
      return avx2::sum_and_squares(x.data(), x.size());
    case Backend::Neon:
      return neon::sum_and_squares(x.data(), x.size());
    default:
      return scalar::sum_and_squares(x.data(), x.size());
  }
}

double sum(std::span<const double> x) { return sum(active_backend(), x); }
double dot(std::span<const double> x, std::span<const double> y) {
  return dot(active_backend(), x, y);
}
double dot3(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
  return dot3(active_backend(), x, y, z);
}
SumSq sum_and_squares(std::span<const double> x) { return sum_and_squares(active_backend(), x); }

}  // namespace steinmm::kernels
