#include "steinmm/kernels.hpp"

namespace steinmm::kernels::scalar {

// Four independent accumulators, matching the lane layout of the vector
// kernels so that results stay close for long inputs.
double sum(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) acc[j] += x[i + j];
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) acc[j] += x[i + j] * y[i + j];
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double dot3(const double* x, const double* y, const double* z, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) acc[j] += x[i + j] * y[i + j] * z[i + j];
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < n; ++i) total += x[i] * y[i] * z[i];
  return total;
}

SumSq sum_and_squares(const double* x, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  double q[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) {
      s[j] += x[i + j];
      q[j] += x[i + j] * x[i + j];
    }
  }
  SumSq out{(s[0] + s[1]) + (s[2] + s[3]), (q[0] + q[1]) + (q[2] + q[3])};
  for (; i < n; ++i) {
    out.sum += x[i];
    out.sum_sq += x[i] * x[i];
  }
  return out;
}

}  // namespace steinmm::kernels::scalar
