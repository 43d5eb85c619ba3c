#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "k3kit/fibration/kodaira.hpp"

namespace k3kit {

// Bumped whenever a row of the extremal tables changes; mirrored into the
// shipped JSON data file so stale copies are detectable.
inline constexpr int extremal_table_version = 1;

// One row of the classification of nonisotrivial extremal rational elliptic
// fibrations. Rows are stored exactly as tabulated: mw_group is the display
// string, char_not the excluded residue characteristics, char_only a single
// required characteristic (0 when unconstrained), isogeny_class a 1-based
// group index within the semistable respectively unstable half. locations
// gives the singular places of the isogeny class when the table pins them
// down (semistable half only, up to Aut P^1).
struct ExtremalRow {
  std::vector<std::string> fibers;
  std::string mw_group;
  long mw_order = 1;
  std::vector<long> char_not;
  long char_only = 0;
  int isogeny_class = 0;
  bool semistable = false;
  std::string locations;
  std::string note;
};

inline const std::vector<ExtremalRow>& extremal_table() {
  static const std::vector<ExtremalRow> rows = [] {
    std::vector<ExtremalRow> t;
    auto add = [&t](std::vector<std::string> fibers, std::string mw,
                    long order, std::vector<long> char_not, long char_only,
                    int cls, bool semistable, std::string locations,
                    std::string note) {
      ExtremalRow r;
      r.fibers = std::move(fibers);
      r.mw_group = std::move(mw);
      r.mw_order = order;
      r.char_not = std::move(char_not);
      r.char_only = char_only;
      r.isogeny_class = cls;
      r.semistable = semistable;
      r.locations = std::move(locations);
      r.note = std::move(note);
      t.push_back(std::move(r));
    };
    // Semistable half: four multiplicative fibers, locations fixed up to
    // an automorphism of the base.
    add({"I3", "I3", "I3", "I3"}, "(Z/3)^2", 9, {3}, 0, 1, true,
        "(1, w, w', oo)", "w, w' the roots of x^2 + x + 1");
    add({"I1", "I1", "I1", "I9"}, "Z/3", 3, {}, 0, 1, true,
        "(1, w, w', oo)", "w, w' the roots of x^2 + x + 1");
    add({"I2", "I2", "I4", "I4"}, "Z/4 x Z/2", 8, {2}, 0, 2, true,
        "(-1, 1, 0, oo)", "");
    add({"I1", "I1", "I2", "I8"}, "(Z/2)^2", 4, {}, 0, 2, true,
        "(-1, 1, 0, oo)", "");
    add({"I1", "I2", "I3", "I6"}, "Z/6", 6, {2, 3}, 0, 3, true,
        "(4, -1/2, 0, oo)", "");
    add({"I1", "I1", "I5", "I5"}, "Z/5", 5, {5}, 0, 4, true,
        "(phi, phi', 1, oo)", "phi, phi' the roots of x^2 - x - 1");
    // Unstable half: three fibers, locations normalized away by the triply
    // transitive Aut P^1 action.
    add({"I2*", "I2", "I2"}, "(Z/2)^2", 4, {2}, 0, 1, false, "", "");
    add({"I4*", "I1", "I1"}, "Z/2", 2, {}, 0, 1, false, "", "");
    add({"I1*", "I1", "I4"}, "Z/4", 4, {}, 0, 1, false, "", "");
    add({"II*", "I1", "I1"}, "0", 1, {2, 3}, 0, 2, false, "", "");
    add({"III*", "I1", "I2"}, "Z/2", 2, {2}, 0, 3, false, "", "");
    add({"III", "I3", "I6"}, "Z/6", 6, {}, 3, 3, false, "", "");
    add({"IV*", "I1", "I3"}, "0", 1, {2, 3}, 0, 4, false, "", "");
    add({"IV", "I2", "I6"}, "Z/6", 6, {}, 2, 5, false, "", "");
    add({"IV*", "I1", "I3"}, "Z/3", 3, {}, 0, 5, false, "", "");
    add({"II", "I5", "I5"}, "Z/5", 5, {}, 5, 6, false, "", "");
    return t;
  }();
  return rows;
}

namespace detail {

inline std::vector<std::string>
canonical_fiber_multiset(const std::vector<std::string>& symbols) {
  std::vector<std::string> out;
  for (const std::string& s : symbols) out.push_back(kodaira_fiber(s).symbol);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

// All table rows whose fiber multiset matches; char_p > 0 additionally keeps
// only rows whose characteristic constraints allow that characteristic.
// Throws when nothing matches.
inline std::vector<ExtremalRow>
lookup_extremal(const std::vector<std::string>& symbols, long char_p = 0) {
  std::vector<std::string> want = detail::canonical_fiber_multiset(symbols);
  std::vector<ExtremalRow> hits;
  for (const ExtremalRow& row : extremal_table()) {
    if (detail::canonical_fiber_multiset(row.fibers) != want) continue;
    if (char_p > 0) {
      if (row.char_only != 0 && row.char_only != char_p) continue;
      if (std::find(row.char_not.begin(), row.char_not.end(), char_p) !=
          row.char_not.end())
        continue;
    }
    hits.push_back(row);
  }
  if (hits.empty())
    throw k3_error("lookup_extremal: no matching extremal fibration");
  return hits;
}

} // namespace k3kit
