#pragma once

#include "netmeasure/vector_field.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netmeasure {

struct Species {
  std::string name;
  Index index = 0;

  bool operator==(const Species&) const = default;
};

struct StoichTerm {
  Index species = 0;
  int coefficient = 1;

  bool operator==(const StoichTerm&) const = default;
};

/// A rate constant is either an inline literal or a reference to a named
/// parameter; `value` always holds the resolved number.
struct Rate {
  double value = 0.0;
  std::string param;

  bool is_named() const noexcept { return !param.empty(); }
  bool operator==(const Rate&) const = default;
};

/// Irreversible reaction. Either side may be empty (inflow/outflow) but not
/// both; terms on one side are merged by species and kept in first-seen order.
struct Reaction {
  std::vector<StoichTerm> reactants;
  std::vector<StoichTerm> products;
  Rate rate;

  /// Net stoichiometric change of `species` (products minus reactants).
  int net_change(Index species) const;
  bool operator==(const Reaction&) const = default;
};

class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions,
                  std::vector<std::pair<std::string, double>> params);

  const std::vector<Species>& species() const noexcept { return species_; }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  /// Parameters in declaration order.
  const std::vector<std::pair<std::string, double>>& params() const noexcept { return params_; }

  Index dimension() const noexcept { return static_cast<Index>(species_.size()); }
  std::optional<Index> species_index(std::string_view name) const;
  std::optional<double> param(std::string_view name) const;

  /// Copy with the named parameters rebound; every reaction that references a
  /// rebound name picks up the new value. Throws InvalidArgument for unknown
  /// names or negative values.
  ReactionNetwork with_params(const std::map<std::string, double>& values) const;

  bool operator==(const ReactionNetwork&) const = default;

 private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  std::vector<std::pair<std::string, double>> params_;
};

/// Parses the line-oriented reaction language:
///
///     # comment
///     param k1 = 5;
///     0 -> S1 @ k1
///     S1 + E <-> S1E @ 20, 0.1
///     2 A -> B @ 1.5
///
/// `0` denotes the empty complex. Reversible arrows take two rates (forward,
/// reverse) and are expanded into two irreversible reactions. Species are
/// indexed in order of first appearance. Throws ParseError with the 1-based
/// line and column of the offending token.
ReactionNetwork parse_network(std::string_view source);

/// Canonical source text for `net`: parameter block followed by one
/// irreversible reaction per line. parse_network(to_source(net)) == net.
std::string to_source(const ReactionNetwork& net);

/// Mass-action drift: f_i(x) = sum_r nu_ir * k_r * prod_j x_j^{s_jr}, with the
/// analytic Jacobian attached.
VectorField mass_action_field(const ReactionNetwork& net);

/// Stable 64-bit FNV-1a digest of the canonical source, as 16 hex digits.
std::string fingerprint(const ReactionNetwork& net);
std::string fingerprint(std::string_view text);

}  // namespace netmeasure
