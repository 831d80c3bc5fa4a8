#pragma once

// Ownership structures shared by the graph tests and the acceptance binary.
// Weights are basis points; minority holders are listed one by one.

#include <string>
#include <vector>

#include "votepower/graph.hpp"

namespace fixtures {

using namespace votepower;

struct Stake {
  std::string holder;
  std::int64_t bp;
};

inline void add(OwnershipGraph& g, const std::string& id, Nationality n) {
  if (!g.contains(id)) g.add_entity({id, id, std::move(n)});
}

inline void tier(OwnershipGraph& g, const std::string& corp, const std::vector<Stake>& stakes, int minorities) {
  add(g, corp, Nationality::domestic("PH"));
  for (const auto& s : stakes) g.add_holding(s.holder, corp, Weight::basis_points(s.bp));
  for (int k = 1; k <= minorities; ++k) {
    const std::string id = corp + "-minority-" + std::to_string(k);
    add(g, id, Nationality::domestic("PH"));
    g.add_holding(id, corp, Weight::basis_points(1));
  }
}

// Upper tier MMC (OMDC 66.63, MBMI 33.31, six 0.01 holders); lower tier
// McArthur (MBMI 39.98, MMC 59.97, five 0.01 holders). `middle` renames MMC
// so the same shape serves Tesoro.
inline OwnershipGraph mcarthur(const Quota& q, const std::string& middle = "MMC",
                               const std::string& target = "McArthur") {
  OwnershipGraph g;
  g.set_default_quota(q);
  add(g, "OMDC", Nationality::domestic("PH"));
  add(g, "MBMI", Nationality::foreign("CA"));
  tier(g, middle, {{"OMDC", 6663}, {"MBMI", 3331}}, 6);
  tier(g, target, {{"MBMI", 3998}, {middle, 5997}}, 5);
  g.validate();
  return g;
}

inline OwnershipGraph tesoro(const Quota& q) { return mcarthur(q, "SMMI", "Tesoro"); }

// Upper tier PLMDC (Palawan Alpha 65.96, MBMI 33.96, eight 0.01 holders);
// lower tier Narra Nickel (PLMDC 59.96, MBMI 39.97, seven 0.01 holders).
inline OwnershipGraph narra(const Quota& q) {
  OwnershipGraph g;
  g.set_default_quota(q);
  add(g, "PalawanAlpha", Nationality::domestic("PH"));
  add(g, "MBMI", Nationality::foreign("CA"));
  tier(g, "PLMDC", {{"PalawanAlpha", 6596}, {"MBMI", 3396}}, 8);
  tier(g, "NarraNickel", {{"PLMDC", 5996}, {"MBMI", 3997}}, 7);
  g.validate();
  return g;
}

// A 70% and B 30% of D; C 50% and D 50% of E.
inline OwnershipGraph two_level_chain(const Quota& q) {
  OwnershipGraph g;
  g.set_default_quota(q);
  add(g, "A", Nationality::foreign());
  add(g, "B", Nationality::domestic());
  add(g, "C", Nationality::domestic());
  add(g, "D", Nationality::domestic());
  add(g, "E", Nationality::domestic());
  g.add_holding("A", "D", Weight::percent(70));
  g.add_holding("B", "D", Weight::percent(30));
  g.add_holding("C", "E", Weight::percent(50));
  g.add_holding("D", "E", Weight::percent(50));
  g.validate();
  return g;
}

}  // namespace fixtures
