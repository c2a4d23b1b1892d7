// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "elgrat/types.hpp"

namespace elgrat {

/// Complex banded matrix with LU factorization and partial pivoting.
/// The storage reserves kl extra superdiagonals for pivoting fill.
class BandedMatrix {
public:
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  bool factored() const { return factored_; }

  Complex get(int i, int j) const;
  void add(int i, int j, Complex v);
  void set(int i, int j, Complex v);

  /// In-place LU with row pivoting; throws NumericalError when singular.
  void factor();
  CVecX solve(const CVecX& rhs) const;
  /// Matrix-vector product with the unfactored entries.
  CVecX multiply(const CVecX& x) const;

  /// max|U_jj| / min|U_jj| after factorization; a cheap conditioning signal.
  double pivot_ratio() const;

private:
  bool in_band(int i, int j) const {
    const int d = i - j;
    return d <= kl_ && d >= -(kl_ + ku_);
  }
  Complex& ref(int i, int j) { return data_[size_t(j) * ld_ + (i - j + kl_ + ku_)]; }
  const Complex& ref(int i, int j) const {
    return data_[size_t(j) * ld_ + (i - j + kl_ + ku_)];
  }

  int n_, kl_, ku_, ld_;
  bool factored_ = false;
  std::vector<Complex> data_;
  std::vector<int> ipiv_;
};

/// Least-squares slope and R^2 of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace elgrat
