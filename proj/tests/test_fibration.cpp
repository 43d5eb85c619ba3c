#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "k3kit/fibration/classification.hpp"
#include "k3kit/fibration/classification_json.hpp"
#include "k3kit/fibration/kodaira.hpp"
#include "k3kit/fibration/shioda_tate.hpp"
#include "k3kit/lattice/overlattice.hpp"

using namespace k3kit;
using Catch::Matchers::ContainsSubstring;

namespace {

// Same double glue as in the lattice suite: U + D4^4 extended by the two
// diagonal order-2 weight classes, the rank-18 lattice of a Kummer surface.
Lattice kummer_lattice() {
  std::vector<BigRat> w0{BigRat(1), BigRat(1), BigRat(1, 2), BigRat(1, 2)};
  std::vector<BigRat> w2{BigRat(1, 2), BigRat(1), BigRat(1), BigRat(1, 2)};
  Lattice base = standard_lattice("U+D4+D4+D4+D4");
  std::vector<BigRat> gx(18, BigRat(0)), gy(18, BigRat(0));
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 4; ++i) {
      gx[static_cast<size_t>(2 + 4 * b + i)] = w0[static_cast<size_t>(i)];
      gy[static_cast<size_t>(2 + 4 * b + i)] = w2[static_cast<size_t>(i)];
    }
  Overlattice s1 = overlattice(base, gx);
  Overlattice s2 = overlattice(s1.lattice, in_overlattice_coords(s1, gy));
  return s2.lattice;
}

bool same_row(const ExtremalRow& a, const ExtremalRow& b) {
  return a.fibers == b.fibers && a.mw_group == b.mw_group &&
         a.mw_order == b.mw_order && a.char_not == b.char_not &&
         a.char_only == b.char_only && a.isogeny_class == b.isogeny_class &&
         a.semistable == b.semistable && a.locations == b.locations &&
         a.note == b.note;
}

} // namespace

TEST_CASE("kodaira fiber symbols") {
  struct Row {
    const char* symbol;
    long m, e;
    const char* root;
    bool additive;
  };
  const Row rows[] = {
      {"I1", 1, 1, "", false},     {"I2", 2, 2, "A1", false},
      {"I9", 9, 9, "A8", false},   {"I0*", 5, 6, "D4", true},
      {"I2*", 7, 8, "D6", true},   {"I5*", 10, 11, "D9", true},
      {"II", 1, 2, "", true},      {"III", 2, 3, "A1", true},
      {"IV", 3, 4, "A2", true},    {"IV*", 7, 8, "E6", true},
      {"III*", 8, 9, "E7", true},  {"II*", 9, 10, "E8", true},
  };
  for (const Row& r : rows) {
    INFO(r.symbol);
    KodairaFiber f = kodaira_fiber(r.symbol);
    REQUIRE(f.symbol == r.symbol);
    REQUIRE(f.m_v == r.m);
    REQUIRE(f.euler == r.e);
    REQUIRE(f.root_type == r.root);
    REQUIRE(f.additive == r.additive);
    REQUIRE(f.wild_delta == 0);
    // The attached root lattice accounts for all components but one.
    long root_rank =
        f.root_type.empty() ? 0 : standard_lattice(f.root_type).rank;
    REQUIRE(root_rank == f.m_v - 1);
    if (!f.root_type.empty()) {
      Lattice rl = standard_lattice(f.root_type);
      REQUIRE(rl.sig_pos == 0);
      REQUIRE(rl.even);
    }
  }

  REQUIRE_THROWS_WITH(kodaira_fiber("I0"), ContainsSubstring("unknown"));
  REQUIRE_THROWS_WITH(kodaira_fiber("V"), ContainsSubstring("unknown"));
  REQUIRE_THROWS_WITH(kodaira_fiber("I-3"), ContainsSubstring("unknown"));
  REQUIRE_THROWS_WITH(kodaira_fiber("I3**"), ContainsSubstring("unknown"));
  REQUIRE_THROWS_WITH(kodaira_fiber(""), ContainsSubstring("unknown"));
}

TEST_CASE("kodaira from valuations") {
  struct Row {
    long c4, c6, d;
    const char* symbol;
  };
  const Row rows[] = {
      {0, 0, 1, "I1"},  {0, 0, 2, "I2"},   {0, 0, 11, "I11"},
      {1, 1, 2, "II"},  {2, 1, 2, "II"},   {1, 2, 3, "III"},
      {1, 5, 3, "III"}, {2, 2, 4, "IV"},   {3, 2, 4, "IV"},
      {2, 3, 6, "I0*"}, {3, 3, 6, "I0*"},  {2, 4, 6, "I0*"},
      {2, 3, 7, "I1*"}, {2, 3, 8, "I2*"},  {2, 3, 14, "I8*"},
      {3, 4, 8, "IV*"}, {4, 4, 8, "IV*"},  {3, 5, 9, "III*"},
      {3, 7, 9, "III*"}, {4, 5, 10, "II*"}, {5, 5, 10, "II*"},
  };
  for (const Row& r : rows) {
    INFO(r.c4 << " " << r.c6 << " " << r.d);
    REQUIRE(kodaira_from_valuations(r.c4, r.c6, r.d).symbol == r.symbol);
  }

  REQUIRE_THROWS_WITH(kodaira_from_valuations(0, 0, 0),
                      ContainsSubstring("at least 1"));
  REQUIRE_THROWS_WITH(kodaira_from_valuations(-1, 0, 3),
                      ContainsSubstring("negative"));
  REQUIRE_THROWS_WITH(kodaira_from_valuations(4, 6, 12),
                      ContainsSubstring("non-minimal"));
  REQUIRE_THROWS_WITH(kodaira_from_valuations(6, 7, 14),
                      ContainsSubstring("non-minimal"));
  REQUIRE_THROWS_WITH(kodaira_from_valuations(0, 1, 5),
                      ContainsSubstring("inconsistent"));
  REQUIRE_THROWS_WITH(kodaira_from_valuations(1, 1, 3),
                      ContainsSubstring("inconsistent"));
  REQUIRE_THROWS_WITH(kodaira_from_valuations(2, 3, 5),
                      ContainsSubstring("inconsistent"));
}

TEST_CASE("shioda tate rho") {
  // Extremal rational shape: one fiber eats all eight non-section components.
  FiberConfig extremal = config_from_symbols({"II*", "I1", "I1"});
  REQUIRE(shioda_tate_rho(extremal) == 10);

  FiberConfig km = config_from_symbols({"I0*", "I0*", "I0*", "I0*"});
  REQUIRE(shioda_tate_rho(km) == 18);

  FiberConfig empty;
  REQUIRE(shioda_tate_rho(empty) == 2);

  FiberConfig positive_rank = config_from_symbols({"I2", "I2"}, 3);
  REQUIRE(shioda_tate_rho(positive_rank) == 7);

  FiberConfig bad = config_from_symbols({"I1"}, -1);
  REQUIRE_THROWS_WITH(shioda_tate_rho(bad), ContainsSubstring("negative"));
}

TEST_CASE("euler totals") {
  FiberConfig z2 =
      config_from_symbols({"I2*", "I2*", "I2", "I2", "I2", "I2"});
  EulerTotal e = euler_total(z2);
  REQUIRE(e.e == 24);
  REQUIRE(e.chi_integral);
  REQUIRE(e.chi == 2);

  FiberConfig legendre = config_from_symbols({"I2*", "I2", "I2"});
  e = euler_total(legendre);
  REQUIRE(e.e == 12);
  REQUIRE(e.chi == 1);

  e = euler_total(FiberConfig{});
  REQUIRE(e.e == 0);
  REQUIRE(e.chi_integral);
  REQUIRE(e.chi == 0);

  FiberConfig lone = config_from_symbols({"I1"});
  e = euler_total(lone);
  REQUIRE(e.e == 1);
  REQUIRE_FALSE(e.chi_integral);

  // Wild contributions are explicit input, never inferred.
  FiberConfig wild = config_from_symbols({"I2*", "I2", "I2"});
  wild.fibers[0].fiber.wild_delta = 2;
  e = euler_total(wild);
  REQUIRE(e.e == 14);
  REQUIRE_FALSE(e.chi_integral);
}

TEST_CASE("ns discriminants") {
  FiberConfig km = config_from_symbols({"I0*", "I0*", "I0*", "I0*"});
  km.mw_torsion = 4;
  REQUIRE((ns_discriminant(km, BigRat(1)) == BigRat(-16)));
  // The lattice module reaches the same number by explicit gluing.
  REQUIRE((BigRat(kummer_lattice().disc) == ns_discriminant(km, BigRat(1))));

  FiberConfig z2 =
      config_from_symbols({"I2*", "I2*", "I2", "I2", "I2", "I2"});
  z2.mw_torsion = 4;
  REQUIRE(shioda_tate_rho(z2) == 18);
  REQUIRE((ns_discriminant(z2, BigRat(1)) == BigRat(-16)));

  // D9 + E7 carried by I5* + III*, no torsion: the disc -8 lattice.
  FiberConfig d9e7 = config_from_symbols({"I5*", "III*"});
  REQUIRE(shioda_tate_rho(d9e7) == 18);
  REQUIRE((ns_discriminant(d9e7, BigRat(1)) == BigRat(-8)));
  REQUIRE((standard_lattice("D9+E7+U").disc == BigInt(-8)));

  // Rational elliptic surfaces have unimodular Neron-Severi lattice; spot
  // checks on configurations where the torsion order settles it.
  FiberConfig h33 = config_from_symbols({"I3", "I3", "I3", "I3"});
  h33.mw_torsion = 9;
  REQUIRE((ns_discriminant(h33, BigRat(1)) == BigRat(-1)));
  FiberConfig h6 = config_from_symbols({"I1", "I2", "I3", "I6"});
  h6.mw_torsion = 6;
  REQUIRE((ns_discriminant(h6, BigRat(1)) == BigRat(-1)));
  FiberConfig leg = config_from_symbols({"I2*", "I2", "I2"});
  leg.mw_torsion = 4;
  REQUIRE((ns_discriminant(leg, BigRat(1)) == BigRat(-1)));

  // Nonzero rank feeds the Mordell-Weil lattice discriminant through.
  FiberConfig r1 = config_from_symbols({"I1"}, 1);
  REQUIRE((ns_discriminant(r1, BigRat(3, 2)) == BigRat(3, 2)));

  REQUIRE_THROWS_WITH(ns_discriminant(km, BigRat(2)),
                      ContainsSubstring("mwl_disc must be 1"));
}

TEST_CASE("classification table batch audit") {
  const std::vector<ExtremalRow>& table = extremal_table();
  REQUIRE(table.size() == 16);

  size_t semistable = 0;
  for (const ExtremalRow& row : table) {
    INFO(row.fibers[0] << " class " << row.isogeny_class);
    FiberConfig cfg = config_from_symbols(row.fibers, 0, row.mw_order);
    REQUIRE(shioda_tate_rho(cfg) == 10);
    EulerTotal e = euler_total(cfg);
    REQUIRE(e.e == 12);
    REQUIRE(e.chi == 1);

    size_t additive = 0;
    for (const PlacedFiber& pf : cfg.fibers) {
      if (pf.fiber.additive) ++additive;
      long root_rank = pf.fiber.root_type.empty()
                           ? 0
                           : standard_lattice(pf.fiber.root_type).rank;
      REQUIRE(root_rank == pf.fiber.m_v - 1);
    }
    if (row.semistable) {
      ++semistable;
      REQUIRE(row.fibers.size() == 4);
      REQUIRE(additive == 0);
      REQUIRE_FALSE(row.locations.empty());
    } else {
      REQUIRE(row.fibers.size() == 3);
      REQUIRE(additive == 1);
      REQUIRE(row.locations.empty());
    }
    REQUIRE(row.mw_order >= 1);
    REQUIRE((row.char_only == 0 || row.char_not.empty()));
  }
  REQUIRE(semistable == 6);
}

TEST_CASE("extremal lookup") {
  std::vector<ExtremalRow> hits = lookup_extremal({"I1", "I2", "I3", "I6"});
  REQUIRE(hits.size() == 1);
  REQUIRE(hits[0].mw_group == "Z/6");
  REQUIRE(hits[0].mw_order == 6);
  REQUIRE(hits[0].locations == "(4, -1/2, 0, oo)");
  REQUIRE(hits[0].char_not == std::vector<long>{2, 3});

  // Multiset match is order-insensitive.
  std::vector<ExtremalRow> shuffled =
      lookup_extremal({"I6", "I3", "I2", "I1"});
  REQUIRE(shuffled.size() == 1);
  REQUIRE(same_row(shuffled[0], hits[0]));

  hits = lookup_extremal({"II*", "I1", "I1"});
  REQUIRE(hits.size() == 1);
  REQUIRE(hits[0].mw_group == "0");
  REQUIRE(hits[0].char_not == std::vector<long>{2, 3});

  hits = lookup_extremal({"I3", "I3", "I3", "I3"});
  REQUIRE(hits.size() == 1);
  REQUIRE(hits[0].mw_group == "(Z/3)^2");

  // The IV* I1 I3 configuration appears once per isogeny class.
  hits = lookup_extremal({"IV*", "I1", "I3"});
  REQUIRE(hits.size() == 2);
  REQUIRE(hits[0].mw_order * hits[1].mw_order == 3);

  // Characteristic filtering.
  hits = lookup_extremal({"III", "I3", "I6"}, 3);
  REQUIRE(hits.size() == 1);
  REQUIRE(hits[0].mw_group == "Z/6");
  REQUIRE_THROWS_WITH(lookup_extremal({"III", "I3", "I6"}, 5),
                      ContainsSubstring("no matching"));
  REQUIRE_THROWS_WITH(lookup_extremal({"I3", "I3", "I3", "I3"}, 3),
                      ContainsSubstring("no matching"));
  hits = lookup_extremal({"II", "I5", "I5"}, 5);
  REQUIRE(hits.size() == 1);
  REQUIRE(hits[0].mw_group == "Z/5");

  REQUIRE_THROWS_WITH(lookup_extremal({"I1", "I1", "I1", "I1"}),
                      ContainsSubstring("no matching"));
  REQUIRE_THROWS_WITH(lookup_extremal({"Ix"}), ContainsSubstring("unknown"));
}

TEST_CASE("extremal table json round trip") {
  nlohmann::ordered_json j = extremal_table_to_json();
  REQUIRE(j.at("table_version").get<int>() == extremal_table_version);

  nlohmann::ordered_json reparsed = nlohmann::ordered_json::parse(j.dump(2));
  std::vector<ExtremalRow> rows = extremal_table_from_json(reparsed);
  REQUIRE(rows.size() == extremal_table().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    INFO(i);
    REQUIRE(same_row(rows[i], extremal_table()[i]));
  }

  nlohmann::ordered_json stale = j;
  stale["table_version"] = extremal_table_version + 1;
  REQUIRE_THROWS_WITH(extremal_table_from_json(stale),
                      ContainsSubstring("table_version"));
}
