#include "netmeasure/sweep.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace netmeasure {

ParamRange ParamRange::linspace(std::string name, double start, double stop, int count) {
  if (count < 1) throw InvalidArgument("parameter range '" + name + "' needs at least one value");
  ParamRange r{std::move(name), {}};
  for (int i = 0; i < count; ++i)
    r.values.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1));
  return r;
}

ParamRange ParamRange::parse(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw InvalidArgument("expected name=start:stop:count, got '" + spec + "'");
  const std::string name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw InvalidArgument("bad number '" + s + "' in range '" + spec + "'");
    return v;
  };
  if (rest.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidArgument("expected name=start:stop:count, got '" + spec + "'");
    const double count = to_double(parts[2]);
    if (count < 1 || count != static_cast<int>(count)) throw InvalidArgument("count must be a positive integer in '" + spec + "'");
    return linspace(name, to_double(parts[0]), to_double(parts[1]), static_cast<int>(count));
  }
  ParamRange r{name, {}};
  std::stringstream ss(rest);
  for (std::string p; std::getline(ss, p, ',');) r.values.push_back(to_double(p));
  if (r.values.empty()) throw InvalidArgument("empty range '" + spec + "'");
  return r;
}

std::size_t SweepResult::invalid_count() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.valid ? 0 : 1;
  return n;
}

SweepResult mi_sweep(const ReactionNetwork& base, const std::vector<ParamRange>& grid, const IndexSet& ik,
                     const IndexSet& ikc, const IndexSet& o, const SweepOptions& options) {
  for (const auto& r : grid) {
    if (!base.param(r.name)) throw InvalidArgument("unknown parameter '" + r.name + "'");
    if (r.values.empty()) throw InvalidArgument("parameter '" + r.name + "' has no values");
  }
  const Index n = base.dimension();
  for (const auto* s : {&ik, &ikc, &o})
    if (s->max_index() >= n) throw InvalidArgument("index set " + s->to_string() + " out of range");
  if (!disjoint(ik, ikc) || !disjoint(ik, o) || !disjoint(ikc, o))
    throw InvalidArgument("mi_sweep: index sets must be pairwise disjoint");

  const NoiseModel noise = options.noise.value_or(NoiseModel::identity(n));
  SweepResult result;
  for (const auto& r : grid) result.names.push_back(r.name);

  std::vector<std::size_t> counter(grid.size(), 0);
  std::optional<VectorXd> previous;
  while (true) {
    SweepCell cell;
    std::map<std::string, double> binding;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cell.params.push_back(grid[i].values[counter[i]]);
      binding[grid[i].name] = cell.params.back();
    }
    try {
      const VectorField field = mass_action_field(base.with_params(binding));
      Equilibrium eq;
      try {
        eq = find_equilibrium(field, VectorXd::Ones(n), options.newton);
      } catch (const ConvergenceError&) {
        if (!previous) throw;
        eq = find_equilibrium(field, *previous, options.newton);
      }
      cell.spectral_abscissa = eq.spectral_abscissa;
      const StationaryShape shape = stationary_shape(eq, noise);
      cell.mi = multivariate_mi(gaussian_oracle(shape.S), ik, ikc, o);
      cell.valid = std::isfinite(cell.mi);
      cell.status = cell.valid ? "ok" : "non-finite MI";
      previous = eq.x0;
    } catch (const Error& e) {
      cell.valid = false;
      cell.status = e.what();
    }
    result.cells.push_back(std::move(cell));

    // Odometer increment, last parameter fastest.
    std::size_t d = grid.size();
    while (d > 0) {
      --d;
      if (++counter[d] < grid[d].values.size()) break;
      counter[d] = 0;
      if (d == 0) return result;
    }
    if (grid.empty()) return result;
  }
}

namespace {
std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  return out + "\"";
}
}  // namespace

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  for (const auto& n : result.names) os << csv_field(n) << ',';
  os << "MI,status\n";
  for (const auto& c : result.cells) {
    for (double p : c.params) os << g10(p) << ',';
    os << (c.valid ? g10(c.mi) : std::string("nan")) << ',' << csv_field(c.valid ? "ok" : "invalid: " + c.status) << '\n';
  }
  return os.str();
}

}  // namespace netmeasure
