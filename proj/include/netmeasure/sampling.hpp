#pragma once

#include "netmeasure/stationary.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace netmeasure {

struct SimConfig {
  double dt = 1e-3;
  double burn_in = 10.0;   ///< time units discarded per chain
  double horizon = 100.0;  ///< time units retained per chain
  int thin = 1;            ///< steps between retained samples
  int chains = 1;
  std::uint64_t seed = 0;
  /// Reflect coordinates at 0 (mass-action fields live in the orthant).
  bool reflect_at_zero = false;
  /// Chains whose state exceeds this norm are discarded.
  double overflow_guard = 1e8;

  void validate() const;
  /// Retained samples per chain: floor((horizon / dt) / thin).
  Index samples_per_chain() const;
};

/// min(1e-3, 0.1 / ||J||_inf)
double default_dt(const MatrixXd& J);
/// Ten relaxation times, 10 / |spectral abscissa|.
double default_burn_in(double spectral_abscissa);

/// Euler-Maruyama samples of dX = f dt + eps sigma dW, row per sample.
struct SampleEnsemble {
  MatrixXd points;  ///< N x n
  double eps = 0.0;
  SimConfig config;
  std::string fingerprint;
  int discarded_chains = 0;

  Index size() const noexcept { return points.rows(); }
  Index dimension() const noexcept { return points.cols(); }
};

/// Runs `config.chains` independent chains from `x_start`. Each chain draws
/// from its own generator keyed by (seed, chain index) and writes into a
/// fixed slot, so the result is bit-identical for a given seed regardless of
/// the worker count. Diverged chains are dropped and counted; if every chain
/// diverges a ConvergenceError is thrown.
SampleEnsemble simulate(const VectorField& field, const NoiseModel& noise, double eps, const SimConfig& config,
                        const VectorXd& x_start, const std::string& fingerprint = {});

/// Flat binary format: one JSON header line (n, N, eps, seed, fingerprint,
/// config) followed by N x n little-endian doubles, row-major.
void save_ensemble(const SampleEnsemble& ens, std::ostream& out);
void save_ensemble(const SampleEnsemble& ens, const std::string& path);
SampleEnsemble load_ensemble(std::istream& in);
SampleEnsemble load_ensemble(const std::string& path);

/// Workers used by parallel loops: NETMEASURE_THREADS if set, else the
/// hardware concurrency, never below 1.
unsigned worker_count();

/// Pairwise (cascade) summation; the split points depend only on the length.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace netmeasure
