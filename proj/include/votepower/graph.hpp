#pragma once

// Multi-tier ownership: the fractional Grandfather Rule next to discrete
// control propagation.
//
// Discrete propagation resolves corporations top-down. At each corporation the
// direct holders form a weighted game. When a holder is itself a corporation
// with a dictator, its whole block is cast by that dictator (transitively), so
// the block is imputed to the controller rather than split pro rata. Holders
// that end up cast by the same controller vote as one block. Corporations
// without a dictator upstream keep voting as themselves.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "votepower/core.hpp"
#include "votepower/engine.hpp"
#include "votepower/equity.hpp"

namespace votepower {

struct Holding {
  std::string holder;
  std::string corporation;
  Weight weight;  // bp of the corporation's voting stock
};

class OwnershipGraph {
 public:
  explicit OwnershipGraph(GameOptions options = {}) : options_(options) {}

  void add_entity(Entity e) {
    e.nationality.validate();
    if (e.id.empty()) throw ValidationError("entity id must not be empty");
    if (index_.count(e.id)) throw ValidationError("duplicate entity id '" + e.id + "'");
    index_.emplace(e.id, entities_.size());
    entities_.push_back(std::move(e));
  }

  void add_holding(std::string holder, std::string corporation, Weight weight) {
    require(holder);
    require(corporation);
    if (holder == corporation) throw ValidationError("entity '" + holder + "' cannot hold itself");
    for (const auto& h : holdings_)
      if (h.holder == holder && h.corporation == corporation)
        throw ValidationError("duplicate holding " + holder + " -> " + corporation);
    holdings_.push_back({std::move(holder), std::move(corporation), std::move(weight)});
  }

  void set_quota(const std::string& corporation, Quota q) {
    require(corporation);
    quotas_[corporation] = std::move(q);
  }
  void set_default_quota(Quota q) { default_quota_ = std::move(q); }

  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Holding>& holdings() const { return holdings_; }
  const GameOptions& options() const { return options_; }
  const std::map<std::string, Quota>& quotas() const { return quotas_; }
  const std::optional<Quota>& default_quota() const { return default_quota_; }

  bool contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }

  const Entity& entity(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw ValidationError("unknown entity '" + std::string(id) + "'");
    return entities_[it->second];
  }

  std::vector<Holding> holders_of(std::string_view corporation) const {
    std::vector<Holding> out;
    for (const auto& h : holdings_)
      if (h.corporation == corporation) out.push_back(h);
    return out;
  }

  bool is_corporation(std::string_view id) const {
    return std::any_of(holdings_.begin(), holdings_.end(),
                       [&](const Holding& h) { return h.corporation == id; });
  }

  // Entities nobody holds shares in.
  std::vector<std::string> ultimate_holders() const {
    std::vector<std::string> out;
    for (const auto& e : entities_)
      if (!is_corporation(e.id)) out.push_back(e.id);
    return out;
  }

  Quota quota_of(std::string_view corporation) const {
    if (auto it = quotas_.find(std::string(corporation)); it != quotas_.end()) return it->second;
    if (default_quota_) return *default_quota_;
    throw ValidationError("no quota for corporation '" + std::string(corporation) + "'");
  }

  // Holders sum to at most 100% per corporation, and no ownership cycles.
  void validate() const {
    std::map<std::string, Rational> incoming;
    for (const auto& h : holdings_) incoming[h.corporation] += h.weight.bp();
    for (const auto& [corp, bp] : incoming)
      if (bp > 10000)
        throw ValidationError("holdings in '" + corp + "' sum to " + to_percent(bp / 10000) + "%, above 100%");
    (void)topological_order();
  }

  // Holders before the corporations they hold. Ties keep entity order.
  std::vector<std::string> topological_order() const {
    std::vector<std::size_t> pending(entities_.size(), 0);
    for (const auto& h : holdings_) ++pending[index_.at(h.corporation)];
    std::vector<std::string> order;
    std::vector<bool> done(entities_.size(), false);
    while (order.size() < entities_.size()) {
      bool progressed = false;
      for (std::size_t i = 0; i < entities_.size(); ++i) {
        if (done[i] || pending[i] != 0) continue;
        done[i] = true;
        progressed = true;
        order.push_back(entities_[i].id);
        for (const auto& h : holdings_)
          if (h.holder == entities_[i].id) --pending[index_.at(h.corporation)];
        break;
      }
      if (!progressed) throw ValidationError("ownership cycle detected");
    }
    return order;
  }

  // True if `order` lists every entity once with holders before holdings.
  bool is_topological(const std::vector<std::string>& order) const {
    if (order.size() != entities_.size()) return false;
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i)
      if (!index_.count(order[i]) || !pos.emplace(order[i], i).second) return false;
    return std::all_of(holdings_.begin(), holdings_.end(),
                       [&](const Holding& h) { return pos[h.holder] < pos[h.corporation]; });
  }

 private:
  void require(const std::string& id) const {
    if (!index_.count(id)) throw ValidationError("unknown entity '" + id + "'");
  }

  GameOptions options_;
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Holding> holdings_;
  std::map<std::string, Quota> quotas_;
  std::optional<Quota> default_quota_;
};

// ---------------------------------------------------------------------------
// Grandfather Rule

namespace detail {

inline Rational grandfather(const OwnershipGraph& g, const std::string& holder, const std::string& target,
                            std::map<std::string, Rational>& memo) {
  if (auto it = memo.find(target); it != memo.end()) return it->second;
  Rational total = 0;
  for (const auto& h : g.holders_of(target)) {
    const Rational w = h.weight.as_fraction();
    total += h.holder == holder ? w : grandfather(g, holder, h.holder, memo) * w;
  }
  memo.emplace(target, total);
  return total;
}

}  // namespace detail

// Sum over every ownership path holder -> ... -> target of the product of the
// fractional holdings. Zero when the target is unreachable.
inline Rational grandfather_equity(const OwnershipGraph& graph, std::string_view holder, std::string_view target) {
  graph.entity(holder);
  graph.entity(target);
  if (holder == target) throw ValidationError("holder and target are the same entity");
  graph.validate();
  std::map<std::string, Rational> memo;
  return detail::grandfather(graph, std::string(holder), std::string(target), memo);
}

// ---------------------------------------------------------------------------
// Discrete propagation

enum class TierOutcome { dictator, effective_control, joint_control, none };

inline std::string_view to_string(TierOutcome o) {
  switch (o) {
    case TierOutcome::dictator: return "dictator";
    case TierOutcome::effective_control: return "effective_control";
    case TierOutcome::joint_control: return "joint_control";
    case TierOutcome::none: return "none";
  }
  return "?";
}

struct VotingBlock {
  std::string id;                    // player id in the tier game
  std::string voter;                 // entity that actually casts the block
  std::vector<std::string> holders;  // direct holders pooled into this block
  Weight weight;
  bool imputed() const { return holders.size() != 1 || holders.front() != voter; }
};

struct Imputation {
  std::string holder;
  std::string controller;
};

struct TierVerdict {
  std::string corporation;
  Quota quota;
  std::vector<VotingBlock> blocks;
  PowerReport power;  // one player per block, same order
  TierOutcome outcome = TierOutcome::none;
  std::optional<std::string> controller;  // voter of the dictator block
  std::vector<std::string> leaders;       // voters holding the largest index
  std::vector<Imputation> imputations;

  const VotingBlock& block_of_voter(std::string_view voter) const {
    for (const auto& b : blocks)
      if (b.voter == voter) return b;
    throw ValidationError("no block cast by '" + std::string(voter) + "' in " + corporation);
  }
  std::optional<std::size_t> find_voter(std::string_view voter) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i].voter == voter) return i;
    return std::nullopt;
  }
};

namespace detail {

inline TierVerdict resolve_tier(const OwnershipGraph& graph, const std::string& corp,
                                const std::map<std::string, std::string>& controller_of,
                                const PowerOptions& options) {
  TierVerdict v;
  v.corporation = corp;
  v.quota = graph.quota_of(corp);
  for (const auto& h : graph.holders_of(corp)) {
    auto it = controller_of.find(h.holder);
    const std::string voter = it == controller_of.end() ? h.holder : it->second;
    if (voter != h.holder) v.imputations.push_back({h.holder, voter});
    auto block = std::find_if(v.blocks.begin(), v.blocks.end(), [&](const VotingBlock& b) { return b.voter == voter; });
    if (block == v.blocks.end()) {
      v.blocks.push_back({h.holder, voter, {h.holder}, h.weight});
    } else {
      block->id = voter;
      block->holders.push_back(h.holder);
      block->weight += h.weight;
    }
  }
  std::vector<Player> players;
  for (const auto& b : v.blocks) {
    const Entity& voter = graph.entity(b.voter);
    std::string name = graph.entity(b.id == b.voter ? b.voter : b.id).name;
    if (b.imputed() && b.id != b.voter) name += " (as " + voter.name + ")";
    if (b.imputed() && b.id == b.voter && b.holders.size() > 1) name = voter.name + " (pooled)";
    players.push_back({b.id, name, voter.nationality, b.weight});
  }
  const VotingGame game = make_game(v.quota, std::move(players), graph.options());
  v.power = power_report(game, options);

  Rational best = -1;
  for (const auto& p : v.power.players) best = std::max(best, p.normalized);
  for (std::size_t i = 0; i < v.blocks.size(); ++i) {
    if (v.power.players[i].status.dictator) v.controller = v.blocks[i].voter;
    if (v.power.players[i].normalized == best) v.leaders.push_back(v.blocks[i].voter);
  }
  if (v.controller)
    v.outcome = TierOutcome::dictator;
  else if (v.leaders.size() == 1)
    v.outcome = TierOutcome::effective_control;
  else if (v.leaders.size() > 1)
    v.outcome = TierOutcome::joint_control;
  return v;
}

}  // namespace detail

// Verdicts for every corporation, in the given topological order.
inline std::vector<TierVerdict> discrete_propagate(const OwnershipGraph& graph, const std::vector<std::string>& order,
                                                   const PowerOptions& options = {}) {
  graph.validate();
  if (!graph.is_topological(order)) throw ValidationError("order is not a topological order of the graph");
  std::map<std::string, std::string> controller_of;
  std::vector<TierVerdict> out;
  for (const auto& id : order) {
    if (!graph.is_corporation(id)) continue;
    TierVerdict v = detail::resolve_tier(graph, id, controller_of, options);
    if (v.controller) controller_of[id] = *v.controller;
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<TierVerdict> discrete_propagate(const OwnershipGraph& graph, const PowerOptions& options = {}) {
  graph.validate();
  return discrete_propagate(graph, graph.topological_order(), options);
}

inline TierVerdict tier_verdict(const OwnershipGraph& graph, std::string_view corporation,
                                const PowerOptions& options = {}) {
  for (auto& v : discrete_propagate(graph, options))
    if (v.corporation == corporation) return v;
  throw ValidationError("'" + std::string(corporation) + "' has no holders to analyse");
}

// ---------------------------------------------------------------------------
// Method comparison

struct ActorPower {
  std::string actor;
  Rational grandfather;  // index in the grandfathered game
  Rational discrete;     // index of the block the actor casts
};

struct MethodComparison {
  std::string target;
  VotingGame grandfathered;  // ultimate holders with their fractional equity
  PowerReport grandfather_power;
  TierVerdict discrete;
  std::vector<ActorPower> actors;
  bool divergent = false;
};

// Ultimate holders with positive equity in `target`, largest first.
inline VotingGame grandfathered_game(const OwnershipGraph& graph, std::string_view target) {
  std::vector<Player> players;
  for (const auto& id : graph.ultimate_holders()) {
    if (id == target) continue;
    const Rational eq = grandfather_equity(graph, id, target);
    if (eq <= 0) continue;
    const Entity& e = graph.entity(id);
    players.push_back({e.id, e.name, e.nationality, Weight::fraction(eq)});
  }
  if (players.empty()) throw ValidationError("'" + std::string(target) + "' has no ultimate holders");
  std::stable_sort(players.begin(), players.end(),
                   [](const Player& a, const Player& b) { return a.weight > b.weight; });
  return make_game(graph.quota_of(target), std::move(players), graph.options());
}

inline MethodComparison compare_methods(const OwnershipGraph& graph, std::string_view target,
                                        const PowerOptions& options = {}) {
  VotingGame gf = grandfathered_game(graph, target);
  PowerReport gf_power = power_report(gf, options);
  TierVerdict tier = tier_verdict(graph, target, options);

  std::vector<ActorPower> actors;
  auto slot = [&](const std::string& actor) -> ActorPower& {
    for (auto& a : actors)
      if (a.actor == actor) return a;
    actors.push_back({actor, Rational(0), Rational(0)});
    return actors.back();
  };
  for (const auto& p : gf_power.players) slot(p.id).grandfather = p.normalized;
  for (std::size_t i = 0; i < tier.blocks.size(); ++i) slot(tier.blocks[i].voter).discrete = tier.power.players[i].normalized;
  const bool divergent = std::any_of(actors.begin(), actors.end(),
                                     [](const ActorPower& a) { return a.grandfather != a.discrete; });
  return MethodComparison{std::string(target), std::move(gf), std::move(gf_power), std::move(tier), std::move(actors),
                          divergent};
}

// ---------------------------------------------------------------------------
// Nationality verdicts

struct NationalityVerdict {
  std::string target;
  NationalityTest control_test = NationalityTest::national;  // flat, on direct holders
  Rational grandfather_domestic;                             // share of traced equity
  Rational grandfather_foreign;
  NationalityTest grandfather = NationalityTest::national;
  std::vector<ForeignControl> voting_power;  // per foreign ultimate holder
  NationalityTest voting_power_verdict = NationalityTest::national;
  std::optional<std::string> controller;
  TierVerdict tier;
};

inline NationalityVerdict nationality_verdict(const OwnershipGraph& graph, std::string_view target,
                                              const Rational& domestic_threshold, const PowerOptions& options = {}) {
  NationalityVerdict out;
  out.target = std::string(target);

  std::vector<Player> direct;
  for (const auto& h : graph.holders_of(target)) {
    const Entity& e = graph.entity(h.holder);
    direct.push_back({e.id, e.name, e.nationality, h.weight});
  }
  if (direct.empty()) throw ValidationError("'" + std::string(target) + "' has no holders");
  out.control_test =
      control_test(make_game(graph.quota_of(target), std::move(direct), graph.options()), domestic_threshold);

  Rational traced = 0;
  for (const auto& id : graph.ultimate_holders()) {
    if (id == target) continue;
    const Rational eq = grandfather_equity(graph, id, target);
    traced += eq;
    const auto& n = graph.entity(id).nationality;
    if (n.is_domestic()) out.grandfather_domestic += eq;
    if (n.is_foreign()) out.grandfather_foreign += eq;
  }
  if (traced > 0) {
    out.grandfather_domestic /= traced;
    out.grandfather_foreign /= traced;
  }
  out.grandfather = out.grandfather_domestic >= domestic_threshold ? NationalityTest::national : NationalityTest::foreign;

  out.tier = tier_verdict(graph, target, options);
  out.controller = out.tier.controller;
  std::vector<Rational> domestic;
  for (std::size_t i = 0; i < out.tier.blocks.size(); ++i)
    if (graph.entity(out.tier.blocks[i].voter).nationality.is_domestic())
      domestic.push_back(out.tier.power.players[i].normalized);
  for (const auto& id : graph.ultimate_holders()) {
    if (!graph.entity(id).nationality.is_foreign()) continue;
    ForeignControl fc{id, ControlClassification::no_control, Rational(0)};
    if (auto i = out.tier.find_voter(id)) {
      const auto& pp = out.tier.power.players[*i];
      fc.index = pp.normalized;
      fc.classification = classify_index(pp.status.dictator, pp.normalized, domestic);
    }
    if (fc.classification == ControlClassification::effective_control ||
        fc.classification == ControlClassification::dictator)
      out.voting_power_verdict = NationalityTest::foreign;
    out.voting_power.push_back(std::move(fc));
  }
  return out;
}

}  // namespace votepower
