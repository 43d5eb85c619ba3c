#pragma once

#include <cctype>
#include <string>

#include "k3kit/exactmath/rational.hpp"

namespace k3kit {

// One Kodaira fiber type. symbol is the canonical ASCII spelling ("I1",
// "I0*", "IV*", ...), n the subscript for the two I-series, m_v the number of
// irreducible components, euler the tame Euler number contribution. The root
// lattice of the fiber has rank m_v - 1; root_type names it in the summand
// grammar of standard_lattice, or is empty for I1 and II.
struct KodairaFiber {
  std::string symbol;
  long n = 0;
  bool i_series = false;
  bool star = false;
  long m_v = 0;
  long euler = 0;
  std::string root_type;
  bool additive = false;
  // Split/nonsplit matters only for point counting of multiplicative fibers;
  // everything here defaults to split, and counting routines that care take
  // the flag as explicit input.
  bool split = true;
  long wild_delta = 0;
};

namespace detail {

inline KodairaFiber make_fiber(std::string symbol, long n, bool i_series,
                               bool star, long m_v, long euler,
                               std::string root_type, bool additive) {
  KodairaFiber f;
  f.symbol = std::move(symbol);
  f.n = n;
  f.i_series = i_series;
  f.star = star;
  f.m_v = m_v;
  f.euler = euler;
  f.root_type = std::move(root_type);
  f.additive = additive;
  return f;
}

} // namespace detail

// Parse a canonical fiber symbol: I<n> (n >= 1), I<n>* (n >= 0), II, III,
// IV, IV*, III*, II*.
inline KodairaFiber kodaira_fiber(const std::string& symbol) {
  using detail::make_fiber;
  if (symbol == "II") return make_fiber("II", 0, false, false, 1, 2, "", true);
  if (symbol == "III")
    return make_fiber("III", 0, false, false, 2, 3, "A1", true);
  if (symbol == "IV")
    return make_fiber("IV", 0, false, false, 3, 4, "A2", true);
  if (symbol == "IV*")
    return make_fiber("IV*", 0, false, true, 7, 8, "E6", true);
  if (symbol == "III*")
    return make_fiber("III*", 0, false, true, 8, 9, "E7", true);
  if (symbol == "II*")
    return make_fiber("II*", 0, false, true, 9, 10, "E8", true);
  if (symbol.size() >= 2 && symbol[0] == 'I' &&
      (std::isdigit(static_cast<unsigned char>(symbol[1])) != 0)) {
    bool star = symbol.back() == '*';
    std::string digits = symbol.substr(1, symbol.size() - 1 - (star ? 1 : 0));
    if (!digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string::npos) {
      long n = std::stol(digits);
      if (star) {
        // I_n*: n + 5 components, Euler number n + 6, root lattice D_{n+4}.
        return make_fiber("I" + digits + "*", n, true, true, n + 5, n + 6,
                          "D" + std::to_string(n + 4), true);
      }
      if (n >= 1) {
        std::string root = n >= 2 ? "A" + std::to_string(n - 1) : "";
        return make_fiber("I" + digits, n, true, false, n, n, root, false);
      }
    }
  }
  throw k3_error("kodaira_fiber: unknown Kodaira symbol '" + symbol + "'");
}

// Tame Kodaira type from the valuations of (c4, c6, Delta) at a place of the
// base, residue characteristic not 2 or 3. Valuations of 0 are passed as a
// value at least as large as the table row demands (so v(c4) for II* may be
// given as 4 even when c4 vanishes identically).
inline KodairaFiber kodaira_from_valuations(long v_c4, long v_c6,
                                            long v_delta) {
  if (v_delta < 1)
    throw k3_error("kodaira_from_valuations: v(Delta) must be at least 1");
  if (v_c4 < 0 || v_c6 < 0)
    throw k3_error("kodaira_from_valuations: negative valuation");
  if (v_c4 >= 4 && v_c6 >= 6 && v_delta >= 12)
    throw k3_error("kodaira_from_valuations: non-minimal model, translate "
                   "and rescale before classifying");
  if (v_c4 == 0 && v_c6 == 0)
    return kodaira_fiber("I" + std::to_string(v_delta));
  if (v_delta == 2 && v_c4 >= 1 && v_c6 == 1) return kodaira_fiber("II");
  if (v_delta == 3 && v_c4 == 1 && v_c6 >= 2) return kodaira_fiber("III");
  if (v_delta == 4 && v_c4 >= 2 && v_c6 == 2) return kodaira_fiber("IV");
  if (v_delta == 6 && v_c4 >= 2 && v_c6 >= 3) return kodaira_fiber("I0*");
  if (v_delta >= 7 && v_c4 == 2 && v_c6 == 3)
    return kodaira_fiber("I" + std::to_string(v_delta - 6) + "*");
  if (v_delta == 8 && v_c4 >= 3 && v_c6 == 4) return kodaira_fiber("IV*");
  if (v_delta == 9 && v_c4 == 3 && v_c6 >= 5) return kodaira_fiber("III*");
  if (v_delta == 10 && v_c4 >= 4 && v_c6 == 5) return kodaira_fiber("II*");
  throw k3_error("kodaira_from_valuations: inconsistent valuation triple (" +
                 std::to_string(v_c4) + ", " + std::to_string(v_c6) + ", " +
                 std::to_string(v_delta) + ")");
}

} // namespace k3kit
