#pragma once

// Foreign-ownership questions on top of the power engine: the flat Control
// Test, per-player foreign control classification, public float removal and
// board-of-directors transposition.

#include <algorithm>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "votepower/core.hpp"
#include "votepower/engine.hpp"

namespace votepower {

enum class ControlClassification { no_control, joint_control, effective_control, dictator };

inline std::string_view to_string(ControlClassification c) {
  switch (c) {
    case ControlClassification::no_control: return "no_control";
    case ControlClassification::joint_control: return "joint_control";
    case ControlClassification::effective_control: return "effective_control";
    case ControlClassification::dictator: return "dictator";
  }
  return "?";
}

enum class NationalityTest { national, foreign };

inline std::string_view to_string(NationalityTest v) {
  return v == NationalityTest::national ? "national" : "foreign";
}

// Sums domestic weight; national iff its share of the total reaches the threshold.
inline NationalityTest control_test(const VotingGame& game, const Rational& domestic_threshold) {
  Rational domestic = 0;
  for (const auto& p : game.players())
    if (p.nationality.is_domestic()) domestic += p.weight.bp();
  return domestic / game.total_weight().bp() >= domestic_threshold ? NationalityTest::national
                                                                   : NationalityTest::foreign;
}

// Compares one player's index with the best domestic index.
inline ControlClassification classify_index(bool dictator, const Rational& index,
                                            const std::vector<Rational>& domestic_indices) {
  if (dictator) return ControlClassification::dictator;
  if (domestic_indices.empty()) return index > 0 ? ControlClassification::effective_control
                                                 : ControlClassification::no_control;
  const Rational best = *std::max_element(domestic_indices.begin(), domestic_indices.end());
  if (index > best) return ControlClassification::effective_control;
  if (index == best) return ControlClassification::joint_control;
  return ControlClassification::no_control;
}

struct ForeignControl {
  std::string player_id;
  ControlClassification classification = ControlClassification::no_control;
  Rational index;
};

// Each foreign player is classified on their own; the foreign players are
// never pooled into a bloc.
inline std::vector<ForeignControl> classify_foreign_control(const VotingGame& game,
                                                            const PowerOptions& options = {}) {
  bool any_domestic = false;
  bool any_foreign = false;
  for (const auto& p : game.players()) {
    any_domestic = any_domestic || p.nationality.is_domestic();
    any_foreign = any_foreign || p.nationality.is_foreign();
  }
  if (!any_domestic) throw ValidationError("no domestic players to compare against");
  if (!any_foreign) throw ValidationError("no foreign players to classify");

  const PowerReport report = power_report(game, options);
  std::vector<Rational> domestic;
  for (std::size_t i = 0; i < game.size(); ++i)
    if (game.player(i).nationality.is_domestic()) domestic.push_back(report.players[i].normalized);

  std::vector<ForeignControl> out;
  for (std::size_t i = 0; i < game.size(); ++i) {
    if (!game.player(i).nationality.is_foreign()) continue;
    const auto& pp = report.players[i];
    out.push_back({pp.id, classify_index(pp.status.dictator, pp.normalized, domestic), pp.normalized});
  }
  return out;
}

inline std::vector<ForeignControl> classify_foreign_control(const VotingGame& game, const Quota& quota,
                                                            const PowerOptions& options = {}) {
  return classify_foreign_control(game.with_quota(quota), options);
}

// Drops public-float players and rescales the rest by 1 / (1 - float share).
inline VotingGame float_adjust(const VotingGame& game) {
  Rational float_bp = 0;
  for (const auto& p : game.players())
    if (p.nationality.is_public_float()) float_bp += p.weight.bp();
  if (float_bp == 0) return game;
  const Rational total = game.total_weight().bp();
  if (float_bp == total) throw ValidationError("public float holds every vote; nothing left to analyse");
  const Rational share = float_bp / total;
  std::vector<Player> kept;
  for (const auto& p : game.players()) {
    if (p.nationality.is_public_float()) continue;
    Player q = p;
    q.weight = Weight::basis_points(p.weight.bp() / (1 - share));
    kept.push_back(std::move(q));
  }
  return make_game(game.quota(), std::move(kept), game.options());
}

struct SeatAllocation {
  std::vector<std::string> player_ids;
  std::vector<std::int64_t> seats;
  std::int64_t board_size = 0;
};

// Largest-remainder (Hamilton) apportionment. Ties on the remainder go to the
// larger weight, then to the earlier player.
inline SeatAllocation allocate_board_seats(const VotingGame& game, std::int64_t board_size) {
  if (board_size < 1) throw ValidationError("board size must be at least one seat");
  const std::size_t n = game.size();
  SeatAllocation out;
  out.board_size = board_size;
  std::vector<Rational> remainder(n);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational share = game.player(i).weight.bp() * board_size / game.total_weight().bp();
    const BigInt whole = floor_of(share);
    out.player_ids.push_back(game.player(i).id);
    out.seats.push_back(to_int64(whole, "seat count"));
    remainder[i] = share - Rational(whole);
    assigned += out.seats.back();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return game.player(a).weight > game.player(b).weight;
  });
  for (std::size_t k = 0; assigned < board_size; ++k, ++assigned) ++out.seats[order[k % n]];
  return out;
}

// The board viewed as a weighted game: each stockholder's nominees vote as one
// bloc with weight seats / board_size.
inline VotingGame board_game(const VotingGame& game, std::int64_t board_size, const Quota& quota) {
  const SeatAllocation seats = allocate_board_seats(game, board_size);
  std::vector<Player> blocs;
  for (std::size_t i = 0; i < game.size(); ++i) {
    Player p = game.player(i);
    p.weight = Weight::fraction(Rational(seats.seats[i], board_size));
    blocs.push_back(std::move(p));
  }
  return make_game(quota, std::move(blocs), game.options());
}

inline PowerReport board_power(const VotingGame& game, std::int64_t board_size, const Quota& quota,
                               const PowerOptions& options = {}) {
  return power_report(board_game(game, board_size, quota), options);
}

}  // namespace votepower
