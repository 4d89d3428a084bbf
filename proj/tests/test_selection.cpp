#include <doctest.h>

#include <algorithm>

#include "amodes/distance_system.hpp"
#include "amodes/mixed_volume.hpp"

using namespace amodes;

TEST_CASE("V17 enumeration has minimum mixed volume 56 and contains the canonical system") {
  const auto ranked = select_minor_system(builtin_topology(TopologyId::V17), 5);
  REQUIRE_FALSE(ranked.empty());
  CHECK(ranked.front().mixed_volume == 56);
  const auto canonical = canonical_system_v17();
  bool found = false;
  for (const auto& r : ranked) {
    auto vars = r.system.variables, want = canonical.variables;
    std::sort(vars.begin(), vars.end());
    std::sort(want.begin(), want.end());
    auto minors = r.system.minors, want_minors = canonical.minors;
    std::sort(minors.begin(), minors.end());
    std::sort(want_minors.begin(), want_minors.end());
    if (vars == want && minors == want_minors) {
      found = true;
      CHECK(r.mixed_volume == 56);
    }
    CHECK(r.mixed_volume >= ranked.front().mixed_volume);
    CHECK_FALSE(r.system.placement_order.empty());
  }
  CHECK(found);
}

TEST_CASE("enumeration rejects impossible requests") {
  CHECK_THROWS_AS(select_minor_system(triangle(), 1), std::runtime_error);
  CHECK_THROWS_AS(select_minor_system(builtin_topology(TopologyId::V17), 6), std::invalid_argument);
}
