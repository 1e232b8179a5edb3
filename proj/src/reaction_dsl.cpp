#include "netmeasure/reaction_dsl.hpp"

#include "netmeasure/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <unordered_map>

namespace netmeasure {

int Reaction::net_change(Index species) const {
  int change = 0;
  for (const auto& t : products)
    if (t.species == species) change += t.coefficient;
  for (const auto& t : reactants)
    if (t.species == species) change -= t.coefficient;
  return change;
}

ReactionNetwork::ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions,
                                 std::vector<std::pair<std::string, double>> params)
    : species_(std::move(species)), reactions_(std::move(reactions)), params_(std::move(params)) {}

std::optional<Index> ReactionNetwork::species_index(std::string_view name) const {
  for (const auto& s : species_)
    if (s.name == name) return s.index;
  return std::nullopt;
}

std::optional<double> ReactionNetwork::param(std::string_view name) const {
  for (const auto& [n, v] : params_)
    if (n == name) return v;
  return std::nullopt;
}

ReactionNetwork ReactionNetwork::with_params(const std::map<std::string, double>& values) const {
  ReactionNetwork out = *this;
  for (const auto& [name, value] : values) {
    auto it = std::find_if(out.params_.begin(), out.params_.end(),
                           [&](const auto& p) { return p.first == name; });
    if (it == out.params_.end()) throw InvalidArgument("unknown parameter '" + name + "'");
    if (!(value >= 0.0) || !std::isfinite(value))
      throw InvalidArgument("parameter '" + name + "' must be a finite nonnegative number");
    it->second = value;
  }
  for (auto& r : out.reactions_) {
    if (!r.rate.is_named()) continue;
    auto it = values.find(r.rate.param);
    if (it != values.end()) r.rate.value = it->second;
  }
  return out;
}

namespace {

struct Token {
  enum Kind { Ident, Number, Plus, Arrow, BiArrow, At, Comma, Equals, Semicolon, End } kind;
  std::string_view text;
  int column;
};

std::string describe(const Token& t) {
  if (t.kind == Token::End) return "end of line";
  return "'" + std::string(t.text) + "'";
}

class LineLexer {
 public:
  LineLexer(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line_.size()) {
      const char c = line_[i];
      if (c == '#') break;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      const int col = static_cast<int>(i) + 1;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i + 1;
        while (j < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[j])) || line_[j] == '_')) ++j;
        out.push_back({Token::Ident, line_.substr(i, j - i), col});
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
                 (c == '-' && i + 1 < line_.size() && line_[i + 1] != '>' &&
                  (std::isdigit(static_cast<unsigned char>(line_[i + 1])) || line_[i + 1] == '.'))) {
        std::size_t j = i + 1;
        while (j < line_.size()) {
          const char d = line_[j];
          if (std::isdigit(static_cast<unsigned char>(d)) || d == '.') {
            ++j;
          } else if ((d == 'e' || d == 'E') && j + 1 < line_.size() &&
                     (std::isdigit(static_cast<unsigned char>(line_[j + 1])) || line_[j + 1] == '-' ||
                      line_[j + 1] == '+')) {
            j += 2;
          } else {
            break;
          }
        }
        out.push_back({Token::Number, line_.substr(i, j - i), col});
        i = j;
      } else if (line_.compare(i, 3, "<->") == 0) {
        out.push_back({Token::BiArrow, line_.substr(i, 3), col});
        i += 3;
      } else if (line_.compare(i, 2, "->") == 0) {
        out.push_back({Token::Arrow, line_.substr(i, 2), col});
        i += 2;
      } else {
        Token::Kind kind;
        switch (c) {
          case '+': kind = Token::Plus; break;
          case '@': kind = Token::At; break;
          case ',': kind = Token::Comma; break;
          case '=': kind = Token::Equals; break;
          case ';': kind = Token::Semicolon; break;
          default:
            throw ParseError("unexpected character '" + std::string(1, c) + "'", line_no_, col);
        }
        out.push_back({kind, line_.substr(i, 1), col});
        ++i;
      }
    }
    out.push_back({Token::End, {}, static_cast<int>(line_.size()) + 1});
    return out;
  }

 private:
  std::string_view line_;
  int line_no_;
};

double parse_number(const Token& t, int line_no) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ParseError("malformed number " + describe(t), line_no, t.column);
  return v;
}

struct PendingRate {
  Rate rate;
  int line;
  int column;
};

class Parser {
 public:
  ReactionNetwork parse(std::string_view source) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
      std::size_t end = source.find('\n', pos);
      if (end == std::string_view::npos) end = source.size();
      std::string_view line = source.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      parse_line(line, line_no);
      if (end == source.size()) break;
      pos = end + 1;
    }
    if (reactions_.empty()) throw ParseError("no reactions", 0, 0);

    std::vector<Reaction> reactions;
    reactions.reserve(reactions_.size());
    for (auto& [reaction, rate] : reactions_) {
      if (rate.rate.is_named()) {
        auto it = param_values_.find(rate.rate.param);
        if (it == param_values_.end())
          throw ParseError("unknown rate constant '" + rate.rate.param + "'", rate.line, rate.column);
        rate.rate.value = it->second;
      }
      reaction.rate = rate.rate;
      reactions.push_back(std::move(reaction));
    }
    std::vector<Species> species;
    for (std::size_t i = 0; i < species_names_.size(); ++i)
      species.push_back({species_names_[i], static_cast<Index>(i)});
    return ReactionNetwork(std::move(species), std::move(reactions), std::move(params_));
  }

 private:
  void parse_line(std::string_view line, int line_no) {
    auto tokens = LineLexer(line, line_no).tokenize();
    if (tokens.front().kind == Token::End) return;
    line_no_ = line_no;
    tokens_ = std::move(tokens);
    cursor_ = 0;
    if (peek().kind == Token::Ident && peek().text == "param" && tokens_.size() > 2 &&
        tokens_[1].kind == Token::Ident && tokens_[2].kind == Token::Equals) {
      parse_param();
    } else {
      parse_reaction();
    }
  }

  const Token& peek() const { return tokens_[cursor_]; }
  const Token& next() { return tokens_[cursor_++]; }

  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    throw ParseError(what + ", found " + describe(t), line_no_, t.column);
  }

  const Token& expect(Token::Kind kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what, peek());
    return next();
  }

  void parse_param() {
    next();  // 'param'
    const Token& name = expect(Token::Ident, "parameter name");
    expect(Token::Equals, "'='");
    const Token& value_tok = expect(Token::Number, "number");
    const double value = parse_number(value_tok, line_no_);
    if (peek().kind == Token::Semicolon) next();
    if (peek().kind != Token::End) fail("expected end of statement", peek());
    const std::string key(name.text);
    if (param_values_.count(key))
      throw ParseError("duplicate rate constant '" + key + "'", line_no_, name.column);
    if (value < 0.0)
      throw ParseError("negative rate constant '" + key + "'", line_no_, value_tok.column);
    param_values_[key] = value;
    params_.emplace_back(key, value);
  }

  std::vector<StoichTerm> parse_complex() {
    std::vector<StoichTerm> terms;
    if (peek().kind == Token::Number && peek().text == "0") {
      const Token& zero = next();
      if (peek().kind == Token::Ident) fail("empty complex '0' cannot carry a species", peek());
      if (peek().kind == Token::Plus) fail("empty complex '0' cannot be combined", zero);
      return terms;
    }
    while (true) {
      int coefficient = 1;
      if (peek().kind == Token::Number) {
        const Token& c = next();
        int value = 0;
        auto [ptr, ec] = std::from_chars(c.text.data(), c.text.data() + c.text.size(), value);
        if (ec != std::errc() || ptr != c.text.data() + c.text.size() || value < 1)
          throw ParseError("stoichiometric coefficient must be a positive integer, found " + describe(c),
                           line_no_, c.column);
        coefficient = value;
      }
      const Token& name = expect(Token::Ident, "species name");
      const Index idx = intern(name.text);
      auto it = std::find_if(terms.begin(), terms.end(), [&](const StoichTerm& t) { return t.species == idx; });
      if (it == terms.end())
        terms.push_back({idx, coefficient});
      else
        it->coefficient += coefficient;
      if (peek().kind != Token::Plus) break;
      next();
    }
    return terms;
  }

  PendingRate parse_rate() {
    const Token& t = next();
    PendingRate out{{}, line_no_, t.column};
    if (t.kind == Token::Number) {
      out.rate.value = parse_number(t, line_no_);
      if (!(out.rate.value > 0.0)) throw ParseError("nonpositive rate " + describe(t), line_no_, t.column);
    } else if (t.kind == Token::Ident) {
      out.rate.param = std::string(t.text);
    } else {
      fail("expected rate constant", t);
    }
    return out;
  }

  void parse_reaction() {
    const Token& start = peek();
    auto lhs = parse_complex();
    const Token& arrow = peek();
    if (arrow.kind != Token::Arrow && arrow.kind != Token::BiArrow) fail("expected '->' or '<->'", arrow);
    next();
    auto rhs = parse_complex();
    if (lhs.empty() && rhs.empty())
      throw ParseError("reaction has no reactants and no products", line_no_, start.column);
    expect(Token::At, "'@'");
    PendingRate forward = parse_rate();
    std::optional<PendingRate> reverse;
    if (peek().kind == Token::Comma) {
      next();
      if (arrow.kind != Token::BiArrow) fail("irreversible reaction takes a single rate", tokens_[cursor_ - 1]);
      reverse = parse_rate();
    } else if (arrow.kind == Token::BiArrow) {
      fail("reversible reaction needs forward and reverse rates", peek());
    }
    if (peek().kind != Token::End) fail("expected end of statement", peek());
    reactions_.push_back({Reaction{lhs, rhs, {}}, forward});
    if (reverse) reactions_.push_back({Reaction{rhs, lhs, {}}, *reverse});
  }

  Index intern(std::string_view name) {
    const std::string key(name);
    auto it = species_lookup_.find(key);
    if (it != species_lookup_.end()) return it->second;
    const Index idx = static_cast<Index>(species_names_.size());
    species_names_.push_back(key);
    species_lookup_.emplace(key, idx);
    return idx;
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  int line_no_ = 0;
  std::vector<std::string> species_names_;
  std::unordered_map<std::string, Index> species_lookup_;
  std::vector<std::pair<std::string, double>> params_;
  std::unordered_map<std::string, double> param_values_;
  std::vector<std::pair<Reaction, PendingRate>> reactions_;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_complex(std::ostringstream& os, const ReactionNetwork& net, const std::vector<StoichTerm>& terms) {
  if (terms.empty()) {
    os << '0';
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) os << " + ";
    if (terms[i].coefficient != 1) os << terms[i].coefficient << ' ';
    os << net.species()[static_cast<std::size_t>(terms[i].species)].name;
  }
}

// Flattened reaction table for allocation-free evaluation.
struct CompiledNetwork {
  Index n = 0;
  std::vector<double> rates;
  std::vector<int> reactant_offset;  // size R + 1
  std::vector<Index> reactant_species;
  std::vector<int> reactant_power;
  std::vector<int> change_offset;  // size R + 1
  std::vector<Index> change_species;
  std::vector<double> change_value;

  explicit CompiledNetwork(const ReactionNetwork& net) : n(net.dimension()) {
    reactant_offset.push_back(0);
    change_offset.push_back(0);
    for (const auto& r : net.reactions()) {
      rates.push_back(r.rate.value);
      for (const auto& t : r.reactants) {
        reactant_species.push_back(t.species);
        reactant_power.push_back(t.coefficient);
      }
      reactant_offset.push_back(static_cast<int>(reactant_species.size()));
      std::vector<Index> touched;
      for (const auto& t : r.reactants) touched.push_back(t.species);
      for (const auto& t : r.products) touched.push_back(t.species);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (Index s : touched) {
        const int nu = r.net_change(s);
        if (nu == 0) continue;
        change_species.push_back(s);
        change_value.push_back(nu);
      }
      change_offset.push_back(static_cast<int>(change_species.size()));
    }
  }

  std::size_t size() const { return rates.size(); }

  double propensity(std::size_t r, const Eigen::Ref<const VectorXd>& x) const {
    double p = rates[r];
    for (int t = reactant_offset[r]; t < reactant_offset[r + 1]; ++t) p *= ipow(x[reactant_species[t]], reactant_power[t]);
    return p;
  }

  static double ipow(double base, int power) {
    double out = 1.0;
    for (int i = 0; i < power; ++i) out *= base;
    return out;
  }

  void evaluate(const Eigen::Ref<const VectorXd>& x, Eigen::Ref<VectorXd> out) const {
    out.setZero();
    for (std::size_t r = 0; r < size(); ++r) {
      const double p = propensity(r, x);
      if (p == 0.0) continue;
      for (int c = change_offset[r]; c < change_offset[r + 1]; ++c) out[change_species[c]] += change_value[c] * p;
    }
  }

  void jacobian(const Eigen::Ref<const VectorXd>& x, Eigen::Ref<MatrixXd> out) const {
    out.setZero();
    for (std::size_t r = 0; r < size(); ++r) {
      if (rates[r] == 0.0) continue;
      for (int t = reactant_offset[r]; t < reactant_offset[r + 1]; ++t) {
        // d/dx_m of k * prod_j x_j^{s_j}
        double d = rates[r] * reactant_power[t] * ipow(x[reactant_species[t]], reactant_power[t] - 1);
        for (int u = reactant_offset[r]; u < reactant_offset[r + 1]; ++u)
          if (u != t) d *= ipow(x[reactant_species[u]], reactant_power[u]);
        if (d == 0.0) continue;
        for (int c = change_offset[r]; c < change_offset[r + 1]; ++c)
          out(change_species[c], reactant_species[t]) += change_value[c] * d;
      }
    }
  }
};

}  // namespace

ReactionNetwork parse_network(std::string_view source) { return Parser().parse(source); }

std::string to_source(const ReactionNetwork& net) {
  std::ostringstream os;
  for (const auto& [name, value] : net.params()) os << "param " << name << " = " << format_double(value) << ";\n";
  for (const auto& r : net.reactions()) {
    append_complex(os, net, r.reactants);
    os << " -> ";
    append_complex(os, net, r.products);
    os << " @ " << (r.rate.is_named() ? r.rate.param : format_double(r.rate.value)) << '\n';
  }
  return os.str();
}

VectorField mass_action_field(const ReactionNetwork& net) {
  auto compiled = std::make_shared<const CompiledNetwork>(net);
  return VectorField(
      net.dimension(),
      [compiled](const Eigen::Ref<const VectorXd>& x, Eigen::Ref<VectorXd> out) { compiled->evaluate(x, out); },
      [compiled](const Eigen::Ref<const VectorXd>& x, Eigen::Ref<MatrixXd> out) { compiled->jacobian(x, out); },
      "mass-action:" + fingerprint(net));
}

std::string fingerprint(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fingerprint(const ReactionNetwork& net) { return fingerprint(to_source(net)); }

}  // namespace netmeasure
