#include "aggdiff/profiles.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "aggdiff/rng.hpp"

namespace aggdiff {

namespace {

double parse_number(const std::string& tok) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw std::invalid_argument("trailing characters in number '" + tok + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> out;
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

void require_unit_range(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(what + " must lie in [0,1]");
}

}  // namespace

InitialProfile parse_profile(const std::string& text) {
  InitialProfile p;
  p.text = text;
  const std::vector<std::string> toks = split_ws(text);
  if (toks.empty()) throw std::invalid_argument("empty initial-data spec");

  if (toks[0] == "constant") {
    if (toks.size() != 2)
      throw std::invalid_argument("usage: constant <c>");
    p.kind = InitialProfile::Kind::Constant;
    p.a = parse_number(toks[1]);
    require_unit_range(p.a, "constant value");
    return p;
  }
  if (toks[0] == "ramp") {
    if (toks.size() != 3) throw std::invalid_argument("usage: ramp <a> <b>");
    p.kind = InitialProfile::Kind::Ramp;
    p.a = parse_number(toks[1]);
    p.b = parse_number(toks[2]);
    require_unit_range(p.a, "ramp start");
    require_unit_range(p.b, "ramp end");
    return p;
  }
  if (toks[0] == "random") {
    if (toks.size() != 3 && !(toks.size() == 5 && toks[3] == "seed"))
      throw std::invalid_argument("usage: random <lo> <hi> [seed <s>]");
    p.kind = InitialProfile::Kind::Random;
    p.lo = parse_number(toks[1]);
    p.hi = parse_number(toks[2]);
    require_unit_range(p.lo, "random lo");
    require_unit_range(p.hi, "random hi");
    if (p.lo > p.hi) throw std::invalid_argument("random needs lo <= hi");
    if (toks.size() == 5)
      p.seed = static_cast<std::uint64_t>(std::stoull(toks[3 + 1]));
    return p;
  }

  // Single token: either a comma list or a cosine expression.
  if (toks.size() == 1) {
    const std::string& s = toks[0];
    if (s.find("cos") != std::string::npos) {
      // a+b*cos(k*pi*x)  with optional sign on b and optional "k*".
      static const std::regex re(
          R"(^([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*([-+])\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\*cos\((?:([0-9]*\.?[0-9]+)\*)?pi\*x\)$)");
      std::smatch m;
      if (!std::regex_match(s, m, re))
        throw std::invalid_argument(
            "cannot parse cosine profile '" + s +
            "' (expected a+b*cos(k*pi*x))");
      p.kind = InitialProfile::Kind::Cosine;
      p.a = parse_number(m[1]);
      p.b = parse_number(m[3]);
      if (m[2] == "-") p.b = -p.b;
      p.k = m[4].matched ? parse_number(m[4]) : 1.0;
      return p;
    }
    if (s.find(',') != std::string::npos) {
      p.kind = InitialProfile::Kind::List;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const double v = parse_number(item);
        require_unit_range(v, "list entry");
        p.values.push_back(v);
      }
      if (p.values.empty()) throw std::invalid_argument("empty list");
      return p;
    }
    // Bare number: constant.
    p.kind = InitialProfile::Kind::Constant;
    p.a = parse_number(s);
    require_unit_range(p.a, "constant value");
    return p;
  }
  throw std::invalid_argument("cannot parse initial-data spec '" + text + "'");
}

double InitialProfile::at(double x, std::uint64_t) const {
  switch (kind) {
    case Kind::Constant: return a;
    case Kind::Ramp: return a + (b - a) * x;
    case Kind::Cosine: return a + b * std::cos(k * std::numbers::pi * x);
    case Kind::List:
      throw std::logic_error("list profiles have no pointwise value");
    case Kind::Random:
      throw std::logic_error("random profiles have no pointwise value");
  }
  return 0.0;
}

std::vector<double> InitialProfile::sample(
    int n, const std::function<double(int)>& x_of_i,
    std::uint64_t run_seed) const {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (kind == Kind::List) {
    if (static_cast<int>(values.size()) != n)
      throw std::invalid_argument("list profile has " +
                                  std::to_string(values.size()) +
                                  " entries, need " + std::to_string(n));
    return values;
  }
  if (kind == Kind::Random) {
    std::mt19937_64 rng(seed.value_or(run_seed));
    for (auto& v : out) v = uniform(rng, lo, hi);
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const double v = at(x_of_i(i));
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("profile leaves [0,1] at x = " +
                                  std::to_string(x_of_i(i)));
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

std::vector<double> lattice_values(const InitialProfile& p, int n_points,
                                   std::uint64_t run_seed) {
  if (p.kind == InitialProfile::Kind::List) {
    return p.sample(static_cast<int>(p.values.size()), {}, run_seed);
  }
  if (n_points < 2) throw std::invalid_argument("lattice needs N >= 2");
  const int n = n_points - 1;
  return p.sample(
      n,
      [n_points](int i) {
        return static_cast<double>(i + 1) / static_cast<double>(n_points);
      },
      run_seed);
}

std::vector<double> continuum_values(const InitialProfile& p, int m,
                                     std::uint64_t run_seed) {
  if (p.kind == InitialProfile::Kind::List) {
    return p.sample(static_cast<int>(p.values.size()), {}, run_seed);
  }
  if (m < 2) throw std::invalid_argument("continuum grid needs M >= 2");
  return p.sample(
      m,
      [m](int i) {
        return (static_cast<double>(i) + 0.5) / static_cast<double>(m);
      },
      run_seed);
}

}  // namespace aggdiff
