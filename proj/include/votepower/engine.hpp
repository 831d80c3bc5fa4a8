#pragma once

// Swing counts and Banzhaf-style power indices.
//
// A player is critical (a swing) in a winning coalition when removing them
// makes it lose. beta_i counts such coalitions; the normalized index is
// beta_i / sum(beta) and the absolute index is beta_i / 2^(N-1).
//
// Three backends produce the counts:
//   enumeration  walks all 2^N - 1 coalitions; the reference definition
//   dp           counts subset weights below the quota, O(N * quota)
//   mc           samples coalitions of the other players uniformly

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "votepower/core.hpp"

namespace votepower {

enum class Backend { enumeration, dp, mc, automatic };

inline std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::enumeration: return "enum";
    case Backend::dp: return "dp";
    case Backend::mc: return "mc";
    case Backend::automatic: return "auto";
  }
  return "?";
}

inline Backend parse_backend(std::string_view s) {
  if (s == "enum") return Backend::enumeration;
  if (s == "dp") return Backend::dp;
  if (s == "mc") return Backend::mc;
  if (s == "auto") return Backend::automatic;
  throw ValidationError("unknown backend '" + std::string(s) + "' (expected enum, dp, mc or auto)");
}

// Integer image of a game: weights scaled by a common factor so every weight
// is an integer, and the winning threshold rounded up. A coalition wins iff
// its scaled weight >= threshold, which is exactly the rational rule.
struct IntegerGame {
  std::vector<std::int64_t> weights;
  std::int64_t total = 0;
  std::int64_t threshold = 0;
};

inline IntegerGame to_integer_game(const VotingGame& game) {
  BigInt common = 1;
  for (const auto& p : game.players()) {
    const BigInt d = denominator_of(p.weight.bp());
    common = common / boost::multiprecision::gcd(common, d) * d;
  }
  std::vector<BigInt> scaled;
  scaled.reserve(game.size());
  BigInt divisor = 0;
  for (const auto& p : game.players()) {
    scaled.push_back(numerator_of(p.weight.bp()) * (common / denominator_of(p.weight.bp())));
    divisor = boost::multiprecision::gcd(divisor, scaled.back());
  }
  IntegerGame out;
  BigInt total = 0;
  for (auto& w : scaled) {
    w /= divisor;
    total += w;
    out.weights.push_back(to_int64(w, "scaled weight"));
  }
  out.total = to_int64(total, "scaled total weight");
  const Rational& q = game.quota().threshold();
  out.threshold = to_int64(ceil_div(numerator_of(q) * total, denominator_of(q)), "scaled threshold");
  return out;
}

// ---------------------------------------------------------------------------
// Classification by weight tests

inline bool is_dictator(const VotingGame& game, std::string_view player_id) {
  return game.meets_quota(game.player(game.index_of(player_id)).weight.bp());
}

// Cannot pass a motion alone, but everyone else together cannot pass one either.
inline bool has_veto(const VotingGame& game, std::string_view player_id) {
  const Rational& w = game.player(game.index_of(player_id)).weight.bp();
  return !game.meets_quota(w) && !game.meets_quota(game.total_weight().bp() - w);
}

inline constexpr std::size_t kDefaultBitsetLimit = std::size_t{1} << 28;

// Never critical: no subset S of the others has quota - w_i <= w(S) < quota.
// Decided by subset-sum reachability, independent of any swing count.
inline bool is_dummy(const VotingGame& game, std::string_view player_id,
                     std::size_t bitset_limit = kDefaultBitsetLimit) {
  const std::size_t target = game.index_of(player_id);
  const IntegerGame ig = to_integer_game(game);
  const std::int64_t wi = ig.weights[target];
  if (wi == 0) return true;
  const std::int64_t t = ig.threshold;
  if (static_cast<std::uint64_t>(t) > bitset_limit)
    throw LimitError("quota too large for the dummy reachability table");
  boost::dynamic_bitset<> reach(static_cast<std::size_t>(t));
  reach.set(0);
  for (std::size_t j = 0; j < ig.weights.size(); ++j) {
    if (j == target) continue;
    const std::int64_t w = ig.weights[j];
    if (w == 0 || w >= t) continue;  // heavier subsets are never below the quota
    reach |= (reach << static_cast<std::size_t>(w));
  }
  for (std::int64_t s = std::max<std::int64_t>(0, t - wi); s < t; ++s)
    if (reach.test(static_cast<std::size_t>(s))) return false;
  return true;
}

inline bool is_critical(const VotingGame& game, const Coalition& coalition, std::string_view player_id) {
  const std::size_t i = game.index_of(player_id);
  if (!coalition.contains(i))
    throw ValidationError("player '" + std::string(player_id) + "' is not in the coalition");
  const Weight w = game.weight_of(coalition);
  if (!game.meets_quota(w.bp())) return false;
  return !game.meets_quota(w.bp() - game.player(i).weight.bp());
}

inline bool is_critical(const VotingGame& game, std::initializer_list<std::string_view> coalition,
                        std::string_view player_id) {
  return is_critical(game, game.coalition(coalition), player_id);
}

// ---------------------------------------------------------------------------
// Swing counts

struct SwingCount {
  std::string player_id;
  std::int64_t beta = 0;
  friend bool operator==(const SwingCount&, const SwingCount&) = default;
};

namespace detail {

inline std::vector<SwingCount> label(const VotingGame& game, const std::vector<std::int64_t>& beta) {
  std::vector<SwingCount> out;
  out.reserve(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) out.push_back({game.player(i).id, beta[i]});
  return out;
}

}  // namespace detail

// Walks every nonempty coalition in Gray-code order (one weight update per step).
inline std::vector<SwingCount> swing_counts_enum(const VotingGame& game,
                                                 std::size_t limit = kDefaultEnumerationLimit) {
  const std::size_t n = game.size();
  if (n > limit || n >= 63)
    throw LimitError("enumeration of " + std::to_string(n) + " players exceeds the limit of " +
                     std::to_string(limit) + "; use the dp or mc backend");
  const IntegerGame ig = to_integer_game(game);
  std::vector<std::int64_t> beta(n, 0);
  std::uint64_t gray = 0;
  std::int64_t sum = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int flip = std::countr_zero(k);
    gray ^= std::uint64_t{1} << flip;
    sum += (gray >> flip & 1u) ? ig.weights[flip] : -ig.weights[flip];
    if (sum < ig.threshold) continue;
    for (std::uint64_t m = gray; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m);
      if (sum - ig.weights[i] < ig.threshold) ++beta[i];
    }
  }
  return detail::label(game, beta);
}

inline constexpr std::size_t kDefaultTableLimit = std::size_t{1} << 24;

// For each player i, counts subsets S of the others with
// threshold - w_i <= w(S) < threshold. The table holds the number of subsets
// of all players at every weight below the threshold; player i is divided out
// by inverting the knapsack step. Counts wrap modulo 2^64, which is exact
// because every true count is below 2^63.
inline std::vector<SwingCount> swing_counts_dp(const VotingGame& game,
                                               std::size_t table_limit = kDefaultTableLimit) {
  const std::size_t n = game.size();
  if (n >= 64) throw LimitError("dp backend supports at most 63 players");
  const IntegerGame ig = to_integer_game(game);
  const std::int64_t t = ig.threshold;
  if (static_cast<std::uint64_t>(t) > table_limit)
    throw LimitError("scaled quota " + std::to_string(t) + " exceeds the dp table bound of " +
                     std::to_string(table_limit));
  const auto size = static_cast<std::size_t>(t);
  std::vector<std::uint64_t> all(size, 0);
  all[0] = 1;
  for (const std::int64_t w : ig.weights) {
    if (w >= t) continue;
    const auto step = static_cast<std::size_t>(w);
    if (step == 0) {
      for (auto& c : all) c *= 2;
      continue;
    }
    for (std::size_t s = size; s-- > step;) all[s] += all[s - step];
  }
  std::vector<std::int64_t> beta(n, 0);
  std::vector<std::uint64_t> without(size);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t w = ig.weights[i];
    if (w == 0) continue;  // a zero weight never changes the outcome
    if (w >= t) {
      without = all;
    } else {
      const auto step = static_cast<std::size_t>(w);
      for (std::size_t s = 0; s < size; ++s) without[s] = all[s] - (s >= step ? without[s - step] : 0);
    }
    std::uint64_t swings = 0;
    for (std::int64_t s = std::max<std::int64_t>(0, t - w); s < t; ++s) swings += without[static_cast<std::size_t>(s)];
    beta[i] = static_cast<std::int64_t>(swings);
  }
  return detail::label(game, beta);
}

// ---------------------------------------------------------------------------
// Power report

struct PlayerStatus {
  bool dictator = false;
  bool dummy = false;
  bool veto = false;
  friend bool operator==(const PlayerStatus&, const PlayerStatus&) = default;
};

struct PlayerPower {
  std::string id;
  std::string name;
  std::int64_t beta = 0;  // observed swings for mc
  Rational normalized;    // V_i
  Rational absolute;      // beta_i / 2^(N-1), or swings / samples for mc
  PlayerStatus status;
  std::optional<double> half_width;  // 95% interval on `absolute`, mc only
};

struct PowerReport {
  Backend backend = Backend::enumeration;
  Quota quota;
  std::vector<PlayerPower> players;
  std::int64_t total_swings = 0;
  std::uint64_t samples = 0;  // mc only

  bool exact() const { return backend != Backend::mc; }

  const PlayerPower& at(std::string_view id) const {
    for (const auto& p : players)
      if (p.id == id) return p;
    throw ValidationError("unknown player '" + std::string(id) + "'");
  }
  std::vector<Rational> normalized() const {
    std::vector<Rational> v;
    for (const auto& p : players) v.push_back(p.normalized);
    return v;
  }
  std::vector<std::int64_t> betas() const {
    std::vector<std::int64_t> v;
    for (const auto& p : players) v.push_back(p.beta);
    return v;
  }
};

struct PowerOptions {
  Backend backend = Backend::automatic;
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
  std::size_t table_limit = kDefaultTableLimit;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0x5eed;
};

namespace detail {

inline PlayerStatus status_of(const VotingGame& game, std::size_t i) {
  const auto& id = game.player(i).id;
  return PlayerStatus{is_dictator(game, id), is_dummy(game, id), has_veto(game, id)};
}

inline PowerReport exact_report(const VotingGame& game, const std::vector<SwingCount>& swings, Backend backend) {
  PowerReport r;
  r.backend = backend;
  r.quota = game.quota();
  for (const auto& s : swings) r.total_swings += s.beta;
  const Rational coalitions_per_player = Rational(BigInt(1) << static_cast<unsigned>(game.size() - 1));
  for (std::size_t i = 0; i < swings.size(); ++i) {
    PlayerPower p;
    p.id = game.player(i).id;
    p.name = game.player(i).name;
    p.beta = swings[i].beta;
    p.normalized = r.total_swings > 0 ? Rational(p.beta, r.total_swings) : Rational(0);
    p.absolute = Rational(p.beta) / coalitions_per_player;
    // Exact counts settle dummies directly; no need for the subset-sum scan.
    p.status = PlayerStatus{is_dictator(game, p.id), p.beta == 0, has_veto(game, p.id)};
    r.players.push_back(std::move(p));
  }
  return r;
}

}  // namespace detail

// Samples coalitions with each player present independently with probability
// 1/2. One draw serves every player: S minus {i} is uniform over subsets of
// the others, so each per-player estimate is unbiased. Half-widths are the
// normal-approximation 95% interval 1.96 * sqrt(p(1-p)/n).
inline PowerReport swing_estimate_mc(const VotingGame& game, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("mc backend needs at least one sample");
  const IntegerGame ig = to_integer_game(game);
  const std::size_t n = game.size();
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> swings(n, 0);
  std::vector<std::uint64_t> bits((n + 63) / 64);
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (auto& word : bits) word = rng();
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (bits[i / 64] >> (i % 64) & 1u) sum += ig.weights[i];
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t others = (bits[i / 64] >> (i % 64) & 1u) ? sum - ig.weights[i] : sum;
      if (others < ig.threshold && others + ig.weights[i] >= ig.threshold) ++swings[i];
    }
  }
  PowerReport r;
  r.backend = Backend::mc;
  r.quota = game.quota();
  r.samples = samples;
  for (auto s : swings) r.total_swings += static_cast<std::int64_t>(s);
  for (std::size_t i = 0; i < n; ++i) {
    PlayerPower p;
    p.id = game.player(i).id;
    p.name = game.player(i).name;
    p.beta = static_cast<std::int64_t>(swings[i]);
    p.absolute = Rational(BigInt(swings[i]), BigInt(samples));
    p.normalized = r.total_swings > 0 ? Rational(p.beta, r.total_swings) : Rational(0);
    const double phat = static_cast<double>(swings[i]) / static_cast<double>(samples);
    p.half_width = 1.96 * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    p.status = detail::status_of(game, i);
    r.players.push_back(std::move(p));
  }
  return r;
}

inline Backend resolve_backend(const VotingGame& game, const PowerOptions& options) {
  if (options.backend != Backend::automatic) return options.backend;
  return game.size() <= options.enumeration_limit ? Backend::enumeration : Backend::dp;
}

inline PowerReport power_report(const VotingGame& game, const PowerOptions& options = {}) {
  switch (resolve_backend(game, options)) {
    case Backend::enumeration:
      return detail::exact_report(game, swing_counts_enum(game, options.enumeration_limit), Backend::enumeration);
    case Backend::dp:
      return detail::exact_report(game, swing_counts_dp(game, options.table_limit), Backend::dp);
    case Backend::mc:
      return swing_estimate_mc(game, options.samples, options.seed);
    case Backend::automatic:
      break;
  }
  throw Error("unresolved backend");
}

inline PowerReport power_report(const VotingGame& game, Backend backend) {
  PowerOptions o;
  o.backend = backend;
  return power_report(game, o);
}

// Power of each voter when every voter casts one vote of equal weight.
inline Rational one_person_one_vote_power(std::int64_t n) {
  if (n <= 0) throw ValidationError("one person, one vote needs at least one voter");
  return Rational(1, n);
}

}  // namespace votepower
