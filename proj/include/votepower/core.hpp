#pragma once

// Exact domain model for stockholder meetings viewed as weighted voting games.
//
// Weights are exact rationals counted in basis points of the voting stock
// (1 bp = 0.01%), so a 66.63% holding is the integer 6663 and survives every
// comparison without drift. A coalition wins when its weight reaches
// quota * total_weight; the comparison is non-strict.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "votepower/errors.hpp"
#include "votepower/rational.hpp"

namespace votepower {

enum class NationalityKind { domestic, foreign, public_float };

inline std::string_view to_string(NationalityKind kind) {
  switch (kind) {
    case NationalityKind::domestic: return "domestic";
    case NationalityKind::foreign: return "foreign";
    case NationalityKind::public_float: return "public_float";
  }
  return "?";
}

struct Nationality {
  NationalityKind kind = NationalityKind::domestic;
  std::optional<std::string> country;  // informational only

  static Nationality domestic(std::optional<std::string> country = std::nullopt) {
    return {NationalityKind::domestic, std::move(country)};
  }
  static Nationality foreign(std::optional<std::string> country = std::nullopt) {
    return {NationalityKind::foreign, std::move(country)};
  }
  static Nationality public_float() { return {NationalityKind::public_float, std::nullopt}; }

  bool is_domestic() const { return kind == NationalityKind::domestic; }
  bool is_foreign() const { return kind == NationalityKind::foreign; }
  bool is_public_float() const { return kind == NationalityKind::public_float; }

  void validate() const {
    if (kind == NationalityKind::public_float && country)
      throw ValidationError("public float aggregate cannot carry a country");
  }

  friend bool operator==(const Nationality&, const Nationality&) = default;
};

// Voting weight in basis points of total voting stock.
class Weight {
 public:
  Weight() = default;

  static Weight basis_points(std::int64_t bp) { return Weight(Rational(bp)); }
  static Weight basis_points(const Rational& bp) { return Weight(bp); }
  // 49.5 percent is percent(make_rational(99, 2)).
  static Weight percent(const Rational& pct) { return Weight(pct * 100); }
  static Weight percent(std::int64_t pct) { return Weight(Rational(pct * 100)); }
  static Weight fraction(const Rational& f) { return Weight(f * 10000); }

  const Rational& bp() const { return bp_; }
  Rational as_fraction() const { return bp_ / 10000; }
  Rational as_percent() const { return bp_ / 100; }
  bool is_integral() const { return denominator_of(bp_) == 1; }

  Weight& operator+=(const Weight& o) {
    bp_ += o.bp_;
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(const Weight& a, const Weight& b) { return Weight(a.bp_ - b.bp_); }
  friend bool operator==(const Weight&, const Weight&) = default;
  friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
    return a.bp_ < b.bp_ ? std::strong_ordering::less
           : b.bp_ < a.bp_ ? std::strong_ordering::greater
                           : std::strong_ordering::equal;
  }

 private:
  explicit Weight(Rational bp) : bp_(std::move(bp)) {
    if (bp_ < 0) throw ValidationError("voting weight must be non-negative");
  }
  Rational bp_{0};
};

// Fraction of the total weight a coalition needs to win.
class Quota {
 public:
  Quota() = default;
  explicit Quota(Rational threshold) : threshold_(std::move(threshold)) {
    if (threshold_ <= 0 || threshold_ > 1)
      throw ValidationError("quota must lie in (0, 1], got " + votepower::to_string(threshold_));
  }
  static Quota fraction(std::int64_t num, std::int64_t den) { return Quota(make_rational(num, den)); }
  static Quota percent(std::int64_t pct) { return Quota(make_rational(pct, 100)); }
  static Quota simple_majority() { return percent(51); }
  static Quota unanimity() { return fraction(1, 1); }

  const Rational& threshold() const { return threshold_; }
  bool is_majority() const { return threshold_ > Rational(1, 2); }

  friend bool operator==(const Quota&, const Quota&) = default;

 private:
  Rational threshold_{51, 100};
};

struct Entity {
  std::string id;
  std::string name;
  Nationality nationality;
};

struct Player {
  std::string id;
  std::string name;
  Nationality nationality;
  Weight weight;

  static Player make(std::string id, Weight w, Nationality n = Nationality::domestic()) {
    std::string name = id;
    return Player{std::move(id), std::move(name), std::move(n), std::move(w)};
  }
};

// Members as bit positions by player index. Requires at most 64 players.
struct Coalition {
  std::uint64_t members = 0;

  bool contains(std::size_t index) const { return (members >> index) & 1u; }
  std::size_t size() const { return static_cast<std::size_t>(__builtin_popcountll(members)); }
  bool empty() const { return members == 0; }
  friend bool operator==(const Coalition&, const Coalition&) = default;
};

inline constexpr std::size_t kMaxCoalitionPlayers = 64;

struct GameOptions {
  // Permit quotas at or below one half (two disjoint winning coalitions).
  bool allow_non_majority_quota = false;
};

class VotingGame;
VotingGame make_game(Quota quota, std::vector<Player> players, GameOptions options = {});

// Immutable after construction.
class VotingGame {
 public:
  const Quota& quota() const { return quota_; }
  std::span<const Player> players() const { return players_; }
  std::size_t size() const { return players_.size(); }
  const Player& player(std::size_t i) const { return players_.at(i); }
  const Weight& total_weight() const { return total_; }
  const GameOptions& options() const { return options_; }

  // quota * total, the weight a coalition must reach.
  Rational winning_weight() const { return quota_.threshold() * total_.bp(); }

  bool meets_quota(const Rational& weight_bp) const { return weight_bp >= winning_weight(); }

  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t i = 0; i < players_.size(); ++i)
      if (players_[i].id == id) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw ValidationError("unknown player '" + std::string(id) + "'");
  }

  Coalition coalition(std::initializer_list<std::string_view> ids) const {
    return coalition(std::vector<std::string_view>(ids));
  }
  template <typename Range>
  Coalition coalition(const Range& ids) const {
    require_coalition_capacity();
    Coalition c;
    for (const auto& id : ids) c.members |= std::uint64_t{1} << index_of(id);
    return c;
  }
  Coalition grand_coalition() const {
    require_coalition_capacity();
    return Coalition{players_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << players_.size()) - 1};
  }

  Weight weight_of(const Coalition& c) const {
    require_coalition_capacity();
    if (players_.size() < 64 && (c.members >> players_.size()) != 0)
      throw ValidationError("coalition refers to players outside the game");
    Weight w;
    for (std::size_t i = 0; i < players_.size(); ++i)
      if (c.contains(i)) w += players_[i].weight;
    return w;
  }

  // Same game with a different quota (validated under the same options).
  VotingGame with_quota(Quota q) const { return make_game(std::move(q), players_, options_); }

  void require_coalition_capacity() const {
    if (players_.size() > kMaxCoalitionPlayers)
      throw LimitError("coalition bitmasks support at most 64 players");
  }

 private:
  friend VotingGame make_game(Quota, std::vector<Player>, GameOptions);
  VotingGame(Quota q, std::vector<Player> p, Weight total, GameOptions o)
      : quota_(std::move(q)), players_(std::move(p)), total_(std::move(total)), options_(o) {}

  Quota quota_;
  std::vector<Player> players_;
  Weight total_;
  GameOptions options_;
};

inline VotingGame make_game(Quota quota, std::vector<Player> players, GameOptions options) {
  if (players.empty()) throw ValidationError("a game needs at least one player");
  if (!options.allow_non_majority_quota && !quota.is_majority())
    throw ValidationError("quota " + to_string(quota.threshold()) +
                          " is not above one half; set allow_non_majority_quota to accept it");
  std::unordered_set<std::string> seen;
  Weight total;
  for (const auto& p : players) {
    if (p.id.empty()) throw ValidationError("player id must not be empty");
    if (!seen.insert(p.id).second) throw ValidationError("duplicate player id '" + p.id + "'");
    p.nationality.validate();
    total += p.weight;
  }
  if (total.bp() <= 0) throw ValidationError("total voting weight must be positive");
  return VotingGame(std::move(quota), std::move(players), std::move(total), options);
}

// Shorthand for tests and examples: {q: w1, w2, ...} with weights in percent.
inline VotingGame make_percent_game(Quota quota, std::initializer_list<Rational> percents,
                                    GameOptions options = {}) {
  std::vector<Player> players;
  std::size_t i = 1;
  for (const auto& pct : percents) players.push_back(Player::make("P" + std::to_string(i++), Weight::percent(pct)));
  return make_game(std::move(quota), std::move(players), options);
}

inline bool is_winning(const VotingGame& game, const Coalition& coalition) {
  return game.meets_quota(game.weight_of(coalition).bp());
}

template <typename Range>
bool is_winning(const VotingGame& game, const Range& ids) {
  return is_winning(game, game.coalition(ids));
}
inline bool is_winning(const VotingGame& game, std::initializer_list<std::string_view> ids) {
  return is_winning(game, game.coalition(ids));
}

// Default ceiling on N for anything that walks all 2^N subsets.
inline constexpr std::size_t kDefaultEnumerationLimit = 24;

struct TaggedCoalition {
  Coalition coalition;
  Weight weight;
  bool winning = false;
};

// Lazy range over the 2^N - 1 nonempty coalitions in increasing mask order.
class CoalitionRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = TaggedCoalition;
    using difference_type = std::ptrdiff_t;
    using pointer = const TaggedCoalition*;
    using reference = const TaggedCoalition&;

    iterator() = default;
    iterator(const VotingGame* game, std::uint64_t mask) : game_(game), mask_(mask) { load(); }

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++() {
      ++mask_;
      load();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.mask_ == b.mask_; }

   private:
    void load() {
      if (game_ == nullptr || mask_ >= (std::uint64_t{1} << game_->size())) return;
      current_.coalition = Coalition{mask_};
      current_.weight = game_->weight_of(current_.coalition);
      current_.winning = game_->meets_quota(current_.weight.bp());
    }
    const VotingGame* game_ = nullptr;
    std::uint64_t mask_ = 0;
    TaggedCoalition current_;
  };

  CoalitionRange(const VotingGame& game, std::size_t limit) : game_(&game) {
    if (game.size() > limit || game.size() >= 63)
      throw LimitError("enumeration of " + std::to_string(game.size()) + " players exceeds the limit of " +
                       std::to_string(limit) + "; use the dp or mc backend");
  }

  iterator begin() const { return iterator(game_, 1); }
  iterator end() const { return iterator(nullptr, std::uint64_t{1} << game_->size()); }
  std::uint64_t count() const { return (std::uint64_t{1} << game_->size()) - 1; }

 private:
  const VotingGame* game_;
};

inline CoalitionRange enumerate_coalitions(const VotingGame& game,
                                           std::size_t limit = kDefaultEnumerationLimit) {
  return CoalitionRange(game, limit);
}
// The range borrows the game; a temporary would dangle.
CoalitionRange enumerate_coalitions(VotingGame&&, std::size_t = kDefaultEnumerationLimit) = delete;

}  // namespace votepower
