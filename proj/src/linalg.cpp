// SPDX-License-Identifier: Apache-2.0
#include "elgrat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elgrat {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1),
      data_(size_t(n) * size_t(2 * kl + ku + 1), Complex(0.0, 0.0)) {}

Complex BandedMatrix::get(int i, int j) const {
  return in_band(i, j) ? ref(i, j) : Complex(0.0, 0.0);
}

void BandedMatrix::add(int i, int j, Complex v) {
  if (!in_band(i, j))
    throw NumericalError("banded matrix: entry outside band");
  ref(i, j) += v;
}

void BandedMatrix::set(int i, int j, Complex v) {
  if (!in_band(i, j))
    throw NumericalError("banded matrix: entry outside band");
  ref(i, j) = v;
}

void BandedMatrix::factor() {
  ipiv_.assign(n_, 0);
  double max_abs = 0.0;
  for (const Complex& v : data_) max_abs = std::max(max_abs, std::abs(v));
  const double tiny = 1e-14 * std::max(max_abs, 1.0);

  for (int j = 0; j < n_; ++j) {
    const int last_row = std::min(n_ - 1, j + kl_);
    int ip = j;
    double best = std::abs(ref(j, j));
    for (int i = j + 1; i <= last_row; ++i) {
      const double a = std::abs(ref(i, j));
      if (a > best) {
        best = a;
        ip = i;
      }
    }
    ipiv_[j] = ip;
    if (best < tiny)
      throw NumericalError("banded matrix: singular pivot at column " +
                           std::to_string(j));
    const int last_col = std::min(n_ - 1, j + kl_ + ku_);
    if (ip != j)
      for (int k = j; k <= last_col; ++k) std::swap(ref(j, k), ref(ip, k));
    const Complex pivot = ref(j, j);
    for (int i = j + 1; i <= last_row; ++i) {
      const Complex m = ref(i, j) / pivot;
      ref(i, j) = m;
      if (m != Complex(0.0, 0.0))
        for (int k = j + 1; k <= last_col; ++k) ref(i, k) -= m * ref(j, k);
    }
  }
  factored_ = true;
}

CVecX BandedMatrix::solve(const CVecX& rhs) const {
  if (!factored_)
    throw NumericalError("banded matrix: solve before factor");
  CVecX b = rhs;
  for (int j = 0; j < n_; ++j) {
    if (ipiv_[j] != j) std::swap(b[j], b[ipiv_[j]]);
    const int last_row = std::min(n_ - 1, j + kl_);
    for (int i = j + 1; i <= last_row; ++i) b[i] -= ref(i, j) * b[j];
  }
  for (int j = n_ - 1; j >= 0; --j) {
    const int last_col = std::min(n_ - 1, j + kl_ + ku_);
    Complex s = b[j];
    for (int k = j + 1; k <= last_col; ++k) s -= ref(j, k) * b[k];
    b[j] = s / ref(j, j);
  }
  return b;
}

CVecX BandedMatrix::multiply(const CVecX& x) const {
  if (factored_)
    throw NumericalError("banded matrix: multiply after factor");
  CVecX y = CVecX::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int lo = std::max(0, j - kl_ - ku_);
    const int hi = std::min(n_ - 1, j + kl_);
    for (int i = lo; i <= hi; ++i) y[i] += ref(i, j) * x[j];
  }
  return y;
}

double BandedMatrix::pivot_ratio() const {
  if (!factored_) return 0.0;
  double lo = std::abs(ref(0, 0)), hi = lo;
  for (int j = 1; j < n_; ++j) {
    const double d = std::abs(ref(j, j));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw ParameterError("fit_line: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / d;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  const double mean = sy / n;
  double ss_tot = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double p = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - p) * (y[i] - p);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

} // namespace elgrat
