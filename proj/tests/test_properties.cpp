// Randomized checks of the engine against the brute-force oracle. Seeds are
// fixed so failures reproduce.

#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "votepower/engine.hpp"

using namespace votepower;

namespace {

struct Case {
  oracle::Game raw;
  VotingGame game;
};

VotingGame to_game(const oracle::Game& raw) {
  std::vector<Player> players;
  for (std::size_t i = 0; i < raw.weights.size(); ++i)
    players.push_back(Player::make("P" + std::to_string(i + 1), Weight::basis_points(raw.weights[i])));
  return make_game(Quota::fraction(raw.quota_num, raw.quota_den), std::move(players));
}

oracle::Game random_raw(std::mt19937_64& rng, std::size_t max_n) {
  static const std::vector<std::pair<std::int64_t, std::int64_t>> quotas{
      {51, 100}, {2, 3}, {67, 100}, {3, 4}, {1, 1}, {55, 100}, {9, 10}};
  std::uniform_int_distribution<std::size_t> size(1, max_n);
  std::uniform_int_distribution<std::int64_t> weight(0, 100);
  oracle::Game g;
  const std::size_t n = size(rng);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    g.weights.push_back(weight(rng));
    total += g.weights.back();
  }
  if (total == 0) g.weights[0] = 1;
  if (rng() % 4 == 0) {
    std::uniform_int_distribution<std::int64_t> den(2, 40);
    g.quota_den = den(rng);
    std::uniform_int_distribution<std::int64_t> num(g.quota_den / 2 + 1, g.quota_den);
    g.quota_num = num(rng);
  } else {
    const auto& q = quotas[rng() % quotas.size()];
    g.quota_num = q.first;
    g.quota_den = q.second;
  }
  return g;
}

std::vector<Case> random_cases(std::uint64_t seed, std::size_t count, std::size_t max_n) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  for (std::size_t k = 0; k < count; ++k) {
    oracle::Game raw = random_raw(rng, max_n);
    VotingGame game = to_game(raw);
    out.push_back({std::move(raw), std::move(game)});
  }
  return out;
}

std::vector<std::int64_t> betas(const std::vector<SwingCount>& s) {
  std::vector<std::int64_t> v;
  for (const auto& x : s) v.push_back(x.beta);
  return v;
}

}  // namespace

TEST(Properties, DpAndEnumerationMatchOracle) {
  std::size_t mismatches = 0;
  for (const auto& c : random_cases(20240601, 1200, 16)) {
    const auto expected = oracle::swings(c.raw);
    const auto en = betas(swing_counts_enum(c.game));
    const auto dp = betas(swing_counts_dp(c.game));
    if (en != expected || dp != expected) ++mismatches;
    EXPECT_EQ(en, expected);
    EXPECT_EQ(dp, expected);
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Properties, NormalizedIndexSumsToOne) {
  for (const auto& c : random_cases(7, 400, 12)) {
    const auto r = power_report(c.game);
    if (r.total_swings == 0) continue;
    Rational sum = 0;
    for (const auto& v : r.normalized()) sum += v;
    EXPECT_EQ(sum, Rational(1));
  }
}

TEST(Properties, StatusesAgreeWithSwings) {
  for (const auto& c : random_cases(11, 400, 12)) {
    const auto r = power_report(c.game);
    const bool has_dictator = std::any_of(r.players.begin(), r.players.end(),
                                          [](const PlayerPower& p) { return p.status.dictator; });
    for (const auto& p : r.players) {
      EXPECT_EQ(is_dummy(c.game, p.id), p.beta == 0) << p.id;  // subset-sum test vs swing count
      EXPECT_EQ(p.status.dummy, p.beta == 0) << p.id;
      if (p.status.veto) {
        EXPECT_FALSE(p.status.dummy);
      }
      if (has_dictator && !p.status.dictator) {
        EXPECT_TRUE(p.status.dummy);
      }
      if (p.status.dictator) {
        EXPECT_EQ(p.normalized, Rational(1));
      }
    }
  }
}

TEST(Properties, ZeroWeightIsDummy) {
  const VotingGame g = make_game(Quota::percent(51), {Player::make("A", Weight::percent(60)),
                                                      Player::make("B", Weight::percent(40)),
                                                      Player::make("Z", Weight::basis_points(0))});
  EXPECT_TRUE(is_dummy(g, "Z"));
  EXPECT_EQ(power_report(g).at("Z").beta, 0);
}

TEST(Properties, SwingCountMonotoneInOwnWeight) {
  std::mt19937_64 rng(99);
  for (const auto& c : random_cases(13, 300, 10)) {
    const std::size_t i = rng() % c.raw.weights.size();
    oracle::Game heavier = c.raw;
    heavier.weights[i] += 1 + static_cast<std::int64_t>(rng() % 30);
    const auto before = swing_counts_dp(c.game)[i].beta;
    const auto after = swing_counts_dp(to_game(heavier))[i].beta;
    EXPECT_GE(after, before);
    EXPECT_EQ(after, oracle::swings(heavier)[i]);
  }
}

TEST(Properties, UnanimityGivesOneOverPositivePlayers) {
  for (auto c : random_cases(17, 200, 10)) {
    c.raw.quota_num = c.raw.quota_den = 1;
    const auto r = power_report(to_game(c.raw));
    const auto positive = std::count_if(c.raw.weights.begin(), c.raw.weights.end(), [](auto w) { return w > 0; });
    for (std::size_t k = 0; k < c.raw.weights.size(); ++k) {
      if (c.raw.weights[k] > 0)
        EXPECT_EQ(r.players[k].normalized, one_person_one_vote_power(positive));
      else
        EXPECT_EQ(r.players[k].normalized, Rational(0));
    }
  }
}

TEST(Properties, TwoPlayerVetoHoldsHalf) {
  std::mt19937_64 rng(23);
  std::size_t vetoes = 0;
  for (int k = 0; k < 300; ++k) {
    const auto raw = random_raw(rng, 2);
    if (raw.weights.size() != 2) continue;
    const auto r = power_report(to_game(raw));
    for (const auto& p : r.players) {
      if (!p.status.veto) continue;
      ++vetoes;
      EXPECT_EQ(p.normalized, make_rational(1, 2));
    }
  }
  EXPECT_GT(vetoes, 0u);
}

TEST(Properties, PowerIsScaleInvariant) {
  for (const auto& c : random_cases(29, 200, 8)) {
    oracle::Game scaled = c.raw;
    for (auto& w : scaled.weights) w *= 7;
    EXPECT_EQ(power_report(c.game).normalized(), power_report(to_game(scaled)).normalized());
  }
}

TEST(Properties, MonteCarloWithinInterval) {
  // Fixed seeds; each per-player check has nominal 95% coverage.
  std::size_t checks = 0, covered = 0;
  for (const auto& c : random_cases(31, 20, 10)) {
    const auto exact = power_report(c.game);
    const auto mc = swing_estimate_mc(c.game, 20000, 1000 + checks);
    for (std::size_t i = 0; i < c.game.size(); ++i) {
      ++checks;
      const double diff = std::abs((mc.players[i].absolute - exact.players[i].absolute).convert_to<double>());
      if (diff <= *mc.players[i].half_width + 1e-12) ++covered;
    }
  }
  EXPECT_GE(static_cast<double>(covered) / static_cast<double>(checks), 0.9) << covered << "/" << checks;
}
