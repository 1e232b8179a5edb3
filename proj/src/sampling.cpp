#include "netmeasure/sampling.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <thread>
#include <vector>

namespace netmeasure {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("SimConfig: dt must be positive");
  if (!(burn_in >= 0.0)) throw InvalidArgument("SimConfig: burn_in must be nonnegative");
  if (!(horizon > 0.0)) throw InvalidArgument("SimConfig: horizon must be positive");
  if (thin < 1) throw InvalidArgument("SimConfig: thin must be at least 1");
  if (chains < 1) throw InvalidArgument("SimConfig: chains must be at least 1");
  if (samples_per_chain() < 1) throw InvalidArgument("SimConfig: horizon too short for a single retained sample");
}

Index SimConfig::samples_per_chain() const {
  const auto steps = static_cast<Index>(std::floor(horizon / dt + 1e-9));
  return steps / thin;
}

double default_dt(const MatrixXd& J) {
  const double norm = J.cwiseAbs().rowwise().sum().maxCoeff();
  return norm > 0.0 ? std::min(1e-3, 0.1 / norm) : 1e-3;
}

double default_burn_in(double spectral_abscissa) {
  if (!(spectral_abscissa < 0.0)) throw InvalidArgument("default burn-in needs a negative spectral abscissa");
  return 10.0 / std::abs(spectral_abscissa);
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NETMEASURE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

namespace {

struct ChainOutcome {
  bool diverged = false;
};

ChainOutcome run_chain(const VectorField& field, const NoiseModel& noise, double eps, const SimConfig& cfg,
                       const VectorXd& x_start, Index chain, MatrixXd& out, Index row0) {
  const Index n = field.dimension();
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(chain), static_cast<std::uint32_t>(chain >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;

  const bool noisy = eps > 0.0;
  const double scale = eps * std::sqrt(cfg.dt);
  Index m = n;
  if (noisy && !noise.is_identity()) m = noise(x_start).cols();

  VectorXd x = x_start, drift(n), dw(m);
  auto step = [&]() -> bool {
    field.evaluate(x, drift);
    if (noisy) {
      for (Index i = 0; i < m; ++i) dw[i] = normal(rng);
      if (noise.is_identity())
        x += cfg.dt * drift + scale * dw;
      else
        x += cfg.dt * drift + scale * (noise(x) * dw);
    } else {
      x += cfg.dt * drift;
    }
    if (cfg.reflect_at_zero) x = x.cwiseAbs();
    return x.allFinite() && x.norm() <= cfg.overflow_guard;
  };

  const auto burn_steps = static_cast<Index>(std::llround(cfg.burn_in / cfg.dt));
  for (Index s = 0; s < burn_steps; ++s)
    if (!step()) return {true};
  const Index retained = cfg.samples_per_chain();
  for (Index r = 0; r < retained; ++r) {
    for (int t = 0; t < cfg.thin; ++t)
      if (!step()) return {true};
    out.row(row0 + r) = x.transpose();
  }
  return {false};
}

}  // namespace

SampleEnsemble simulate(const VectorField& field, const NoiseModel& noise, double eps, const SimConfig& config,
                        const VectorXd& x_start, const std::string& fingerprint) {
  config.validate();
  const Index n = field.dimension();
  if (x_start.size() != n) throw InvalidArgument("simulate: start point has wrong dimension");
  if (noise.dimension() != n) throw InvalidArgument("simulate: noise dimension does not match the field");
  if (!(eps >= 0.0)) throw InvalidArgument("simulate: eps must be nonnegative");

  const Index per_chain = config.samples_per_chain();
  MatrixXd raw(per_chain * config.chains, n);
  std::vector<ChainOutcome> outcomes(static_cast<std::size_t>(config.chains));

  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(config.chains));
  auto work = [&](unsigned w) {
    for (int c = static_cast<int>(w); c < config.chains; c += static_cast<int>(workers))
      outcomes[static_cast<std::size_t>(c)] = run_chain(field, noise, eps, config, x_start, c, raw, c * per_chain);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SampleEnsemble ens;
  ens.eps = eps;
  ens.config = config;
  ens.fingerprint = fingerprint.empty() ? field.description() : fingerprint;
  int kept = 0;
  for (const auto& o : outcomes) kept += o.diverged ? 0 : 1;
  ens.discarded_chains = config.chains - kept;
  if (kept == 0) throw ConvergenceError("simulate: every chain diverged past the overflow guard");
  ens.points.resize(per_chain * kept, n);
  Index row = 0;
  for (int c = 0; c < config.chains; ++c) {
    if (outcomes[static_cast<std::size_t>(c)].diverged) continue;
    ens.points.middleRows(row, per_chain) = raw.middleRows(c * per_chain, per_chain);
    row += per_chain;
  }
  return ens;
}

namespace {

nlohmann::json header_of(const SampleEnsemble& ens) {
  const auto& c = ens.config;
  return {{"format", "netmeasure-ensemble-1"},
          {"n", ens.dimension()},
          {"N", ens.size()},
          {"eps", ens.eps},
          {"seed", c.seed},
          {"fingerprint", ens.fingerprint},
          {"discarded_chains", ens.discarded_chains},
          {"config",
           {{"dt", c.dt},
            {"burn_in", c.burn_in},
            {"horizon", c.horizon},
            {"thin", c.thin},
            {"chains", c.chains},
            {"seed", c.seed},
            {"reflect_at_zero", c.reflect_at_zero},
            {"overflow_guard", c.overflow_guard}}}};
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return out;
}

}  // namespace

void save_ensemble(const SampleEnsemble& ens, std::ostream& out) {
  out << header_of(ens).dump() << '\n';
  for (Index r = 0; r < ens.size(); ++r) {
    for (Index c = 0; c < ens.dimension(); ++c) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(ens.points(r, c)));
      char buf[8];
      std::memcpy(buf, &bits, 8);
      out.write(buf, 8);
    }
  }
  if (!out) throw Error("failed to write ensemble");
}

void save_ensemble(const SampleEnsemble& ens, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_ensemble(ens, out);
}

SampleEnsemble load_ensemble(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputMismatchError("ensemble file is empty");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InputMismatchError(std::string("ensemble header is not valid JSON: ") + e.what());
  }
  if (h.value("format", "") != "netmeasure-ensemble-1") throw InputMismatchError("unknown ensemble format");
  SampleEnsemble ens;
  const Index n = h.at("n").get<Index>();
  const Index count = h.at("N").get<Index>();
  ens.eps = h.at("eps").get<double>();
  ens.fingerprint = h.at("fingerprint").get<std::string>();
  ens.discarded_chains = h.value("discarded_chains", 0);
  const auto& c = h.at("config");
  ens.config.dt = c.at("dt").get<double>();
  ens.config.burn_in = c.at("burn_in").get<double>();
  ens.config.horizon = c.at("horizon").get<double>();
  ens.config.thin = c.at("thin").get<int>();
  ens.config.chains = c.at("chains").get<int>();
  ens.config.seed = c.at("seed").get<std::uint64_t>();
  ens.config.reflect_at_zero = c.value("reflect_at_zero", false);
  ens.config.overflow_guard = c.value("overflow_guard", 1e8);
  if (n < 1 || count < 0) throw InputMismatchError("ensemble header has invalid shape");
  ens.points.resize(count, n);
  for (Index r = 0; r < count; ++r) {
    for (Index col = 0; col < n; ++col) {
      char buf[8];
      if (!in.read(buf, 8)) throw InputMismatchError("ensemble payload is truncated");
      std::uint64_t bits = 0;
      std::memcpy(&bits, buf, 8);
      ens.points(r, col) = std::bit_cast<double>(to_little_endian(bits));
    }
  }
  return ens;
}

SampleEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputMismatchError("cannot open ensemble '" + path + "'");
  return load_ensemble(in);
}

}  // namespace netmeasure
