#include "netmeasure/systems.hpp"

#include "netmeasure/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace netmeasure {

std::optional<Index> System::coordinate(std::string_view name) const {
  for (std::size_t i = 0; i < coordinate_names.size(); ++i)
    if (coordinate_names[i] == name) return static_cast<Index>(i);
  return std::nullopt;
}

System ou_system(Index n) {
  if (n < 1) throw InvalidArgument("OU dimension must be positive");
  System s{.name = "builtin:ou",
           .fingerprint = fingerprint("builtin:ou:n=" + std::to_string(n)),
           .field = linear_field(-MatrixXd::Identity(n, n), "builtin:ou"),
           .noise = NoiseModel::identity(n),
           .start = VectorXd::Zero(n)};
  for (Index i = 0; i < n; ++i) s.coordinate_names.push_back("x" + std::to_string(i + 1));
  return s;
}

System limit_cycle_system() {
  VectorField field(
      3,
      [](const Eigen::Ref<const VectorXd>& v, Eigen::Ref<VectorXd> out) {
        const double x = v[0], y = v[1], z = v[2];
        const double g = 1.0 - x * x - y * y;
        out[0] = y + x * g;
        out[1] = -x + y * g;
        out[2] = -z;
      },
      [](const Eigen::Ref<const VectorXd>& v, Eigen::Ref<MatrixXd> out) {
        const double x = v[0], y = v[1];
        const double g = 1.0 - x * x - y * y;
        out << g - 2 * x * x, 1.0 - 2 * x * y, 0.0,  //
            -1.0 - 2 * x * y, g - 2 * y * y, 0.0,    //
            0.0, 0.0, -1.0;
      },
      "builtin:limitcycle");
  System s{.name = "builtin:limitcycle",
           .fingerprint = fingerprint(std::string_view("builtin:limitcycle")),
           .field = std::move(field),
           .noise = NoiseModel::constant(std::sqrt(2.0) * MatrixXd::Identity(3, 3), "sqrt(2) I"),
           .start = (VectorXd(3) << 1.0, 0.0, 0.0).finished(),
           .coordinate_names = {"x", "y", "z"}};
  s.stationary_density = [](const Eigen::Ref<const VectorXd>& v, double eps) {
    const double g = 1.0 - v[0] * v[0] - v[1] * v[1];
    return std::exp(-(0.5 * v[2] * v[2] + 0.25 * g * g) / (eps * eps));
  };
  s.density_box = [](double eps) {
    const double h = std::max(std::sqrt(1.0 + 10.0 * eps), 7.0 * eps);
    return Box{VectorXd::Constant(3, -h), VectorXd::Constant(3, h)};
  };
  return s;
}

System network_system(const ReactionNetwork& net, std::string name) {
  System s{.name = std::move(name),
           .fingerprint = fingerprint(net),
           .field = mass_action_field(net),
           .noise = NoiseModel::identity(net.dimension()),
           .start = VectorXd::Ones(net.dimension()),
           .network = net,
           .reflect_at_zero = true};
  for (const auto& sp : net.species()) s.coordinate_names.push_back(sp.name);
  return s;
}

std::string_view enzyme_network_source() {
  return R"(# Substrate competition: S1 and S2 are converted by a single enzyme E.
param k1 = 5;
param k2 = 10;
param k3 = 20;
param k3r = 0.1;
param k4 = 5;
param k5 = 10;
param k5r = 0.1;
param k6 = 10;
param k7 = 1;
param k8 = 1;
param k9 = 2.5;
param k10 = 3;

0 -> S1 @ k1
0 -> S2 @ k2
S1 + E <-> S1E @ k3, k3r
S2 + E <-> S2E @ k5, k5r
S1E -> P1 + E @ k4
S2E -> P2 + E @ k6
P1 -> 0 @ k7
P2 -> 0 @ k8
E <-> 0 @ k9, k10
)";
}

System load_system(const std::string& spec, Index ou_dimension) {
  if (spec == "builtin:ou") return ou_system(ou_dimension);
  if (spec == "builtin:limitcycle") return limit_cycle_system();
  if (spec == "builtin:enzyme") return network_system(parse_network(enzyme_network_source()), spec);
  if (spec.rfind("builtin:", 0) == 0) throw InvalidArgument("unknown built-in system '" + spec + "'");
  std::ifstream in(spec);
  if (!in) throw InvalidArgument("cannot read '" + spec + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return network_system(parse_network(text.str()), spec);
}

}  // namespace netmeasure
