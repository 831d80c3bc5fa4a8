#include <gtest/gtest.h>

#include <set>

#include "votepower/core.hpp"

using namespace votepower;

namespace {

VotingGame game_50_49_1() { return make_percent_game(Quota::percent(51), {50, 49, 1}); }

}  // namespace

TEST(Weight, BasisPointsAreExact) {
  const Weight w = Weight::percent(make_rational(6663, 100));
  EXPECT_EQ(w.bp(), Rational(6663));
  EXPECT_TRUE(w.is_integral());
  EXPECT_EQ(w.as_fraction(), make_rational(6663, 10000));
  EXPECT_EQ(Weight::percent(make_rational(99, 2)).bp(), Rational(4950));
}

TEST(Weight, RejectsNegative) { EXPECT_THROW(Weight::basis_points(-1), ValidationError); }

TEST(Quota, Range) {
  EXPECT_THROW(Quota::fraction(0, 1), ValidationError);
  EXPECT_THROW(Quota::fraction(101, 100), ValidationError);
  EXPECT_NO_THROW(Quota::fraction(1, 1));
  EXPECT_TRUE(Quota::fraction(2, 3).is_majority());
  EXPECT_FALSE(Quota::fraction(1, 2).is_majority());
  EXPECT_NE(Quota::fraction(2, 3), Quota::percent(67));
}

TEST(Nationality, PublicFloatHasNoCountry) {
  Nationality n{NationalityKind::public_float, "PH"};
  EXPECT_THROW(n.validate(), ValidationError);
  std::vector<Player> players{Player::make("A", Weight::percent(60)),
                              Player{"F", "float", n, Weight::percent(40)}};
  EXPECT_THROW(make_game(Quota::percent(51), players), ValidationError);
}

TEST(MakeGame, CachesTotal) {
  const VotingGame g = game_50_49_1();
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.total_weight().bp(), Rational(10000));
  EXPECT_EQ(g.quota().threshold(), make_rational(51, 100));
  EXPECT_EQ(g.player(1).weight.bp(), Rational(4900));
}

TEST(MakeGame, SinglePlayerUnanimity) {
  const VotingGame g = make_game(Quota::unanimity(), {Player::make("A", Weight::percent(100))});
  EXPECT_EQ(g.size(), 1u);
  EXPECT_TRUE(is_winning(g, {"A"}));
}

TEST(MakeGame, Errors) {
  EXPECT_THROW(make_game(Quota::percent(51), {Player::make("A", Weight::percent(50)),
                                              Player::make("A", Weight::percent(50))}),
               ValidationError);
  EXPECT_THROW(make_game(Quota::percent(51), {Player::make("A", Weight::basis_points(0))}), ValidationError);
  EXPECT_THROW(make_game(Quota::percent(51), {}), ValidationError);
  EXPECT_THROW(make_game(Quota::percent(50), {Player::make("A", Weight::percent(100))}), ValidationError);
  GameOptions loose;
  loose.allow_non_majority_quota = true;
  EXPECT_NO_THROW(make_game(Quota::percent(50), {Player::make("A", Weight::percent(100))}, loose));
}

TEST(MakeGame, WeightsNeedNotSumToHundred) {
  // 99.94% in total: winning is judged against quota * actual total.
  const VotingGame g = make_percent_game(Quota::percent(51), {make_rational(5097, 100), make_rational(4897, 100)});
  EXPECT_EQ(g.total_weight().bp(), Rational(9994));
  EXPECT_EQ(g.winning_weight(), make_rational(51 * 9994, 100));
  EXPECT_TRUE(is_winning(g, {"P1"}));  // 5097 >= 5096.94
}

TEST(IsWinning, CoalitionTable) {
  const VotingGame g = game_50_49_1();
  EXPECT_FALSE(is_winning(g, {"P1"}));
  EXPECT_FALSE(is_winning(g, {"P2"}));
  EXPECT_FALSE(is_winning(g, {"P3"}));
  EXPECT_TRUE(is_winning(g, {"P1", "P2"}));
  EXPECT_FALSE(is_winning(g, {"P2", "P3"}));
  EXPECT_TRUE(is_winning(g, {"P1", "P3"}));
  EXPECT_TRUE(is_winning(g, {"P1", "P2", "P3"}));
  EXPECT_FALSE(is_winning(g, Coalition{}));
}

TEST(IsWinning, NonStrictQuota) {
  const VotingGame g = make_percent_game(Quota::percent(51), {51, 49});
  EXPECT_TRUE(is_winning(g, {"P1"}));
}

TEST(IsWinning, UnknownMember) {
  EXPECT_THROW(is_winning(game_50_49_1(), {"P9"}), ValidationError);
  EXPECT_THROW(game_50_49_1().weight_of(Coalition{0b1000}), ValidationError);
}

TEST(EnumerateCoalitions, Counts) {
  const VotingGame three = game_50_49_1();
  const VotingGame two = make_percent_game(Quota::percent(51), {51, 49});
  const VotingGame one = make_game(Quota::unanimity(), {Player::make("A", Weight::percent(100))});
  EXPECT_EQ(enumerate_coalitions(three).count(), 7u);
  EXPECT_EQ(enumerate_coalitions(two).count(), 3u);
  EXPECT_EQ(enumerate_coalitions(one).count(), 1u);
  std::size_t walked = 0;
  for ([[maybe_unused]] const auto& c : enumerate_coalitions(three)) ++walked;
  EXPECT_EQ(walked, 7u);
}

TEST(EnumerateCoalitions, YieldsEachNonemptyCoalitionOnce) {
  const VotingGame g = make_percent_game(Quota::fraction(2, 3), {10, 20, 30, 25, 15});
  std::set<std::uint64_t> seen;
  std::size_t n = 0, winning = 0;
  for (const auto& c : enumerate_coalitions(g)) {
    ++n;
    EXPECT_FALSE(c.coalition.empty());
    EXPECT_TRUE(seen.insert(c.coalition.members).second);
    EXPECT_EQ(c.weight, g.weight_of(c.coalition));
    EXPECT_EQ(c.winning, is_winning(g, c.coalition));
    winning += c.winning;
  }
  EXPECT_EQ(n, 31u);
  EXPECT_GT(winning, 0u);
}

TEST(EnumerateCoalitions, WinningTagsMatchTable) {
  std::vector<std::pair<std::uint64_t, bool>> tags;
  const VotingGame g = game_50_49_1();
  for (const auto& c : enumerate_coalitions(g)) tags.emplace_back(c.coalition.members, c.winning);
  const std::vector<std::pair<std::uint64_t, bool>> expected{
      {0b001, false}, {0b010, false}, {0b011, true}, {0b100, false}, {0b101, true}, {0b110, false}, {0b111, true}};
  EXPECT_EQ(tags, expected);
}

TEST(EnumerateCoalitions, Limit) {
  std::vector<Player> players;
  for (int i = 0; i < 25; ++i) players.push_back(Player::make("P" + std::to_string(i), Weight::percent(4)));
  const VotingGame g = make_game(Quota::percent(51), players);
  EXPECT_THROW(enumerate_coalitions(g), LimitError);
  EXPECT_NO_THROW(enumerate_coalitions(g, 25));
}

TEST(Coalition, MonotoneWinning) {
  const VotingGame g = make_percent_game(Quota::fraction(2, 3), {5, 12, 30, 21, 7, 25});
  for (const auto& c : enumerate_coalitions(g)) {
    if (!c.winning) continue;
    for (std::size_t i = 0; i < g.size(); ++i)
      EXPECT_TRUE(is_winning(g, Coalition{c.coalition.members | (std::uint64_t{1} << i)}));
  }
}
