#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <vector>

namespace specgap {

/// Every nonempty subset A of {0, .., n-1} in reflected Gray-code order, with
/// the boundary mass sum_{i in A, j notin A} w_ij kept current by O(n)
/// updates per step. w need not be symmetric; its diagonal is ignored.
///
/// visit(mask, boundary, measure_of_A) is called 2^n - 1 times; bit i of mask
/// is set when state i belongs to A. The subset measure comes from two
/// half-word lookup tables, so it carries no accumulated drift.
template <class Visit>
void for_each_subset(const Eigen::MatrixXd& w, const Eigen::VectorXd& measure, Visit&& visit) {
  const int n = static_cast<int>(w.rows());
  const int low_bits = n / 2;
  const int high_bits = n - low_bits;

  std::vector<double> low_sum(std::size_t{1} << low_bits, 0.0);
  std::vector<double> high_sum(std::size_t{1} << high_bits, 0.0);
  for (std::size_t m = 1; m < low_sum.size(); ++m) {
    const int b = std::countr_zero(m);
    low_sum[m] = low_sum[m & (m - 1)] + measure(b);
  }
  for (std::size_t m = 1; m < high_sum.size(); ++m) {
    const int b = std::countr_zero(m);
    high_sum[m] = high_sum[m & (m - 1)] + measure(low_bits + b);
  }
  const std::uint64_t low_mask = (std::uint64_t{1} << low_bits) - 1;

  std::vector<double> row_total(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) row_total[i] += w(i, j);
    }
  }
  std::vector<double> into(n, 0.0);   // sum_{i in A} w_ik
  std::vector<double> outof(n, 0.0);  // sum_{j in A} w_kj

  std::uint64_t mask = 0;
  double boundary = 0.0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < count; ++step) {
    const int k = std::countr_zero(step);
    const std::uint64_t bit = std::uint64_t{1} << k;
    const double leaving = row_total[k] - outof[k];
    if (mask & bit) {
      boundary += into[k] - leaving;
      mask &= ~bit;
      for (int m = 0; m < n; ++m) {
        if (m == k) continue;
        into[m] -= w(k, m);
        outof[m] -= w(m, k);
      }
    } else {
      boundary += leaving - into[k];
      mask |= bit;
      for (int m = 0; m < n; ++m) {
        if (m == k) continue;
        into[m] += w(k, m);
        outof[m] += w(m, k);
      }
    }
    const double mass = low_sum[mask & low_mask] + high_sum[mask >> low_bits];
    visit(mask, boundary, mass);
  }
}

}  // namespace specgap
