#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hmz/errors.hpp"

namespace hmz {

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit-shift QL
/// iteration (no eigenvectors). `diagonal` has size n, `off_diagonal` size n-1
/// (entry i couples rows i and i+1). Returned in descending order.
inline std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diagonal,
                                                             std::vector<double> off_diagonal) {
  const int n = static_cast<int>(diagonal.size());
  if (n == 0) return {};
  if (static_cast<int>(off_diagonal.size()) != n - 1)
    throw shape_error("symmetric_tridiagonal_eigenvalues: off-diagonal must have n-1 entries");

  std::vector<double>& d = diagonal;
  std::vector<double>& e = off_diagonal;
  e.push_back(0.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 60;

  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (sweeps++ == max_sweeps)
          throw numerical_error("symmetric_tridiagonal_eigenvalues: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

}  // namespace hmz
