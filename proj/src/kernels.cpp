#include "influx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace influx::kernels {

namespace {

inline double z_at(const double* y, const double* k_prev, double c,
                   std::ptrdiff_t j, std::ptrdiff_t n) {
  if (j < 0 || j >= n) return 0.0;
  return k_prev ? y[j] + c * k_prev[j] : y[j];
}

template <bool Parallel>
void rk4_stage_impl(const double* q, const double* r, const double* y,
                    const double* k_prev, double c, double* k_out,
                    std::ptrdiff_t n) {
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    double zm = z_at(y, k_prev, c, j - 1, n);
    double zj = k_prev ? y[j] + c * k_prev[j] : y[j];
    double zp = z_at(y, k_prev, c, j + 1, n);
    double in_left = (j > 0) ? zm * q[j - 1] : 0.0;
    double in_right = (j + 1 < n) ? zp * r[j + 1] : 0.0;
    k_out[j] = in_left - zj * (q[j] + r[j]) + in_right;
  }
}

}  // namespace

void rk4_stage(const double* q, const double* r, const double* y,
               const double* k_prev, double c, double* k_out, std::size_t n,
               Exec exec) {
  auto sn = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::parallel)
    rk4_stage_impl<true>(q, r, y, k_prev, c, k_out, sn);
  else
    rk4_stage_impl<false>(q, r, y, k_prev, c, k_out, sn);
}

void rk4_combine(double* rho, const double* k1, const double* k2,
                 const double* k3, const double* k4, double h, std::size_t n,
                 Exec exec) {
  const double s = h / 6.0;
  auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t j = 0; j < sn; ++j)
    rho[j] += s * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

double clip_and_renormalize(double* rho, std::size_t n, double tol,
                            Exec exec) {
  auto sn = static_cast<std::ptrdiff_t>(n);
  double worst = 0.0;
  double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(min : worst) \
    reduction(+ : sum) if (exec == Exec::parallel)
  for (std::ptrdiff_t j = 0; j < sn; ++j) {
    double v = rho[j];
    worst = std::min(worst, v);
    if (v < 0.0) v = 0.0;
    rho[j] = v;
    sum += v;
  }
  if (sum > 0.0 && sum != 1.0) {
    const double inv = 1.0 / sum;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::ptrdiff_t j = 0; j < sn; ++j) rho[j] *= inv;
  }
  (void)tol;
  return worst;
}

// ---------------------------------------------------------------------------
// BandedPropagator
//
// Built diagonal-wise: diag[b][i] holds Phi[i][i + (b - 4)] for b = 0..8,
// offsets -4..+4 relative to the row, with out-of-range columns stored as
// 0. The constructor then repacks into the contiguous gather layout used
// by apply(), which turns the nine diagonal streams into a single one.
// ---------------------------------------------------------------------------

namespace {

// C = B * A with A tridiagonal given by (q, r): A[i][i+1] = q[i],
// A[i][i] = -(q[i] + r[i]), A[i][i-1] = r[i]. Bands widen by one.
std::vector<std::vector<double>> band_mul_tridiag(
    const std::vector<std::vector<double>>& B, const std::vector<double>& q,
    const std::vector<double>& r, std::ptrdiff_t n) {
  std::vector<std::vector<double>> C(9, std::vector<double>(n, 0.0));
  for (int b = 0; b < 9; ++b) {
    const std::ptrdiff_t o = b - 4;  // C column offset
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      std::ptrdiff_t j = i + o;
      if (j < 0 || j >= n) continue;
      double acc = 0.0;
      // l runs over A rows feeding column j: l = j-1, j, j+1.
      for (std::ptrdiff_t l = j - 1; l <= j + 1; ++l) {
        if (l < 0 || l >= n) continue;
        std::ptrdiff_t bo = l - i + 4;  // B offset index
        if (bo < 0 || bo > 8) continue;
        double a;
        if (l == j - 1) a = q[l];
        else if (l == j) a = -(q[l] + r[l]);
        else a = r[l];
        acc += B[bo][i] * a;
      }
      C[b][i] = acc;
    }
  }
  return C;
}

}  // namespace

BandedPropagator::BandedPropagator(const std::vector<double>& q,
                                   const std::vector<double>& r, double h) {
  if (q.size() != r.size()) throw std::invalid_argument("q/r size mismatch");
  n_ = q.size();
  const auto n = static_cast<std::ptrdiff_t>(n_);
  std::vector<std::vector<double>> diag(9, std::vector<double>(n_, 0.0));
  for (std::ptrdiff_t i = 0; i < n; ++i) diag[4][i] = 1.0;  // identity

  std::vector<std::vector<double>> power = diag;  // A^0
  double coeff = 1.0;
  for (int m = 1; m <= 4; ++m) {
    power = band_mul_tridiag(power, q, r, n);
    coeff *= h / m;
    for (int b = 0; b < 9; ++b)
      for (std::ptrdiff_t i = 0; i < n; ++i)
        diag[b][i] += coeff * power[b][i];
  }
  power.clear();
  power.shrink_to_fit();

  // Repack column-wise: band_[9 j + u] multiplies rho[j - 4 + u], i.e.
  // Phi[row][j] with row = j - 4 + u, which lives on diagonal b = 8 - u.
  band_.assign(9 * n_, 0.0);
  for (std::ptrdiff_t j = 0; j < n; ++j)
    for (std::ptrdiff_t u = 0; u < 9; ++u) {
      std::ptrdiff_t row = j - 4 + u;
      if (row < 0 || row >= n) continue;
      band_[9 * j + u] = diag[8 - u][row];
    }
}

void BandedPropagator::apply(const double* rho, double* out, Exec exec) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const double* band = band_.data();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double* c = band + 9 * j;
    const std::ptrdiff_t lo = j >= 4 ? 0 : 4 - j;
    const std::ptrdiff_t hi = j + 4 < n ? 9 : 4 + (n - j);
    double acc = 0.0;
    for (std::ptrdiff_t u = lo; u < hi; ++u) acc += c[u] * rho[j - 4 + u];
    out[j] = acc;
  }
}

double BandedPropagator::apply_scaled(const double* rho, double* out,
                                      double scale, Exec exec, double* worst,
                                      std::size_t lo, std::size_t hi) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const auto jlo = static_cast<std::ptrdiff_t>(lo);
  const auto jhi = static_cast<std::ptrdiff_t>(std::min(hi, n_));
  const double* band = band_.data();
  double sum = 0.0;
  double neg = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum) \
    reduction(min : neg) if (exec == Exec::parallel)
  for (std::ptrdiff_t j = jlo; j < jhi; ++j) {
    const double* c = band + 9 * j;
    const std::ptrdiff_t lo = j >= 4 ? 0 : 4 - j;
    const std::ptrdiff_t hi = j + 4 < n ? 9 : 4 + (n - j);
    double acc = 0.0;
    for (std::ptrdiff_t u = lo; u < hi; ++u) acc += c[u] * rho[j - 4 + u];
    acc *= scale;
    if (acc < 0.0) {
      neg = std::min(neg, acc);
      acc = 0.0;
    }
    out[j] = acc;
    sum += acc;
  }
  *worst = neg;
  return sum;
}

}  // namespace influx::kernels
