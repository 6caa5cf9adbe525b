#pragma once

#include <cstddef>
#include <vector>

namespace influx::kernels {

/// Kernel execution policy. `serial` is the reference implementation kept
/// for testing; `parallel` uses OpenMP worksharing.
enum class Exec { serial, parallel };

/// One RK4 stage for rho' = rho (Q + R): writes
///   k_out = f(y + c * k_prev)
/// where f(z)[j] = z[j-1] q[j-1] - z[j] (q[j] + r[j]) + z[j+1] r[j+1].
/// q and r have length n with q[n-1] = 0 and r[0] = 0; k_prev may be null
/// when c == 0. Single fused pass.
void rk4_stage(const double* q, const double* r, const double* y,
               const double* k_prev, double c, double* k_out, std::size_t n,
               Exec exec);

/// rho += (h/6) (k1 + 2 k2 + 2 k3 + k4).
void rk4_combine(double* rho, const double* k1, const double* k2,
                 const double* k3, const double* k4, double h, std::size_t n,
                 Exec exec);

/// Clips entries in [-tol, 0) to zero and renormalizes to unit sum.
/// Returns the most negative raw entry seen (0 when none).
double clip_and_renormalize(double* rho, std::size_t n, double tol, Exec exec);

/// Precomputed one-step RK4 propagator for a constant tridiagonal
/// generator: Phi = sum_{m=0..4} (h A)^m / m!, a 9-diagonal band. One step
/// is then a single fused pass, which is what makes the large-K solves
/// memory- rather than compute-bound.
class BandedPropagator {
 public:
  BandedPropagator(const std::vector<double>& q, const std::vector<double>& r,
                   double h);

  /// out = rho * Phi (row-vector convention).
  void apply(const double* rho, double* out, Exec exec) const;

  /// out = clip(scale * (rho * Phi)): negatives are zeroed. Returns the
  /// post-clip sum; *worst records the most negative pre-clip entry seen
  /// (0 when none). Folding the previous step's 1/sum into `scale` defers
  /// renormalization into the next pass, saving a full sweep per step.
  /// Only rows in [lo, hi) are written; rho must be zero outside
  /// [lo + 4, hi - 4), which the band structure guarantees when the caller
  /// widens the previous nonzero window by 4 on each side.
  double apply_scaled(const double* rho, double* out, double scale, Exec exec,
                      double* worst, std::size_t lo, std::size_t hi) const;

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  /// Gather layout, one contiguous stream: band_[9 j + u] = Phi[j-4+u][j],
  /// the coefficient of rho[j-4+u] in out[j]; out-of-range rows hold 0.
  std::vector<double> band_;
};

}  // namespace influx::kernels
