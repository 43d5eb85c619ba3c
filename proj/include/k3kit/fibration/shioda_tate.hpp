#pragma once

#include <string>
#include <utility>
#include <vector>

#include "k3kit/exactmath/rational.hpp"
#include "k3kit/fibration/kodaira.hpp"
#include "k3kit/lattice/lattice.hpp"

namespace k3kit {

// A fiber pinned to a place of the base curve. The place is a free-form
// label ("0", "1", "t1*t2", "oo"); arithmetic never depends on it.
struct PlacedFiber {
  std::string place;
  KodairaFiber fiber;
};

// Configuration of singular fibers of an elliptic surface together with the
// Mordell-Weil data needed by the Shioda-Tate bookkeeping.
struct FiberConfig {
  std::vector<PlacedFiber> fibers;
  long mw_rank = 0;
  BigInt mw_torsion{1};
};

inline FiberConfig config_from_symbols(const std::vector<std::string>& symbols,
                                       long mw_rank = 0,
                                       const BigInt& mw_torsion = BigInt(1)) {
  FiberConfig cfg;
  for (size_t i = 0; i < symbols.size(); ++i)
    cfg.fibers.push_back({"v" + std::to_string(i), kodaira_fiber(symbols[i])});
  cfg.mw_rank = mw_rank;
  cfg.mw_torsion = mw_torsion;
  return cfg;
}

namespace detail {

inline void check_config(const FiberConfig& cfg, const char* who) {
  if (cfg.mw_rank < 0)
    throw k3_error(std::string(who) + ": negative Mordell-Weil rank");
  if (cfg.mw_torsion < 1)
    throw k3_error(std::string(who) + ": torsion order must be positive");
}

} // namespace detail

// Picard number from the Shioda-Tate formula: 2 for the zero section and a
// general fiber, m_v - 1 per singular fiber, plus the Mordell-Weil rank.
inline long shioda_tate_rho(const FiberConfig& cfg) {
  detail::check_config(cfg, "shioda_tate_rho");
  long rho = 2 + cfg.mw_rank;
  for (const PlacedFiber& pf : cfg.fibers) rho += pf.fiber.m_v - 1;
  return rho;
}

// Total Euler number e = sum over fibers of (tame Euler number + wild term),
// with chi = e/12 reported when it is an integer.
struct EulerTotal {
  long e = 0;
  bool chi_integral = false;
  long chi = 0;
};

inline EulerTotal euler_total(const FiberConfig& cfg) {
  detail::check_config(cfg, "euler_total");
  EulerTotal out;
  for (const PlacedFiber& pf : cfg.fibers)
    out.e += pf.fiber.euler + pf.fiber.wild_delta;
  out.chi_integral = out.e % 12 == 0;
  out.chi = out.chi_integral ? out.e / 12 : 0;
  return out;
}

// Discriminant of the Neron-Severi lattice predicted by the configuration:
// (-1)^(rho-1) times the product over fibers of the order of the root
// lattice's discriminant group, times the Mordell-Weil lattice discriminant,
// divided by the square of the torsion order. The order factors reuse the
// lattice module so the fiber/root dictionary stays in one place.
inline BigRat ns_discriminant(const FiberConfig& cfg, const BigRat& mwl_disc) {
  detail::check_config(cfg, "ns_discriminant");
  if (cfg.mw_rank == 0 && mwl_disc != 1)
    throw k3_error(
        "ns_discriminant: mwl_disc must be 1 when the Mordell-Weil rank is 0");
  BigInt prod(1);
  for (const PlacedFiber& pf : cfg.fibers) {
    if (pf.fiber.root_type.empty()) continue;
    BigInt d = standard_lattice(pf.fiber.root_type).disc;
    prod *= sgn(d) < 0 ? BigInt(-d) : d;
  }
  long rho = shioda_tate_rho(cfg);
  BigInt tor2 = cfg.mw_torsion * cfg.mw_torsion;
  BigRat value = BigRat(prod) * mwl_disc / BigRat(tor2);
  if ((rho - 1) % 2 != 0) value = -value;
  return value;
}

} // namespace k3kit
