#pragma once

// Scenario files: versioned JSON documents holding entities, games,
// ownership graphs and the analyses to run over them. Every number in the
// format is an integer. Weights are basis points, quotas and thresholds are
// {"num", "den"} pairs. The quota "two-thirds" is left symbolic and resolved
// at run time as 67/100 (percent reading) or 2/3 (exact-fraction reading).
//
//   {
//     "schema_version": 1,
//     "name": "gamboa_2016",
//     "entities": [{"id": "NTT", "name": "NTT Group", "nationality": "foreign"}],
//     "games": [{"id": "pldt", "quota": {"num": 51, "den": 100},
//                "players": [{"entity": "NTT", "weight_bp": 2035}]}],
//     "graphs": [{"id": "g", "default_quota": "two-thirds",
//                 "quotas": {"D": {"num": 51, "den": 100}},
//                 "holdings": [{"holder": "A", "corporation": "D", "weight_bp": 7000}]}],
//     "analyses": [{"id": "a1", "kind": "power", "game": "pldt", "expect": {...}}]
//   }

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "votepower/core.hpp"
#include "votepower/errors.hpp"
#include "votepower/graph.hpp"

namespace votepower {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class QuotaInterpretation { percent, exact_fraction };

inline std::string_view to_string(QuotaInterpretation q) {
  return q == QuotaInterpretation::percent ? "percent" : "exact-fraction";
}

inline QuotaInterpretation parse_interpretation(std::string_view s) {
  if (s == "percent") return QuotaInterpretation::percent;
  if (s == "exact-fraction") return QuotaInterpretation::exact_fraction;
  throw ValidationError("unknown quota interpretation '" + std::string(s) + "' (expected percent or exact-fraction)");
}

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  Rational value() const { return make_rational(num, den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

struct TwoThirds {
  friend bool operator==(const TwoThirds&, const TwoThirds&) = default;
};

struct QuotaSpec {
  std::variant<Fraction, TwoThirds> value;

  bool symbolic() const { return std::holds_alternative<TwoThirds>(value); }
  Quota resolve(QuotaInterpretation interpretation) const {
    if (symbolic())
      return interpretation == QuotaInterpretation::percent ? Quota::percent(67) : Quota::fraction(2, 3);
    return Quota(std::get<Fraction>(value).value());
  }
  friend bool operator==(const QuotaSpec&, const QuotaSpec&) = default;
};

struct EntitySpec {
  std::string id;
  std::string name;
  NationalityKind nationality = NationalityKind::domestic;
  std::optional<std::string> country;
  friend bool operator==(const EntitySpec&, const EntitySpec&) = default;
};

struct StakeSpec {
  std::string entity;
  std::int64_t weight_bp = 0;
  friend bool operator==(const StakeSpec&, const StakeSpec&) = default;
};

struct GameSpec {
  std::string id;
  QuotaSpec quota;
  std::vector<StakeSpec> players;
  bool allow_non_majority_quota = false;
  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

struct HoldingSpec {
  std::string holder;
  std::string corporation;
  std::int64_t weight_bp = 0;
  friend bool operator==(const HoldingSpec&, const HoldingSpec&) = default;
};

struct GraphSpec {
  std::string id;
  std::optional<QuotaSpec> default_quota;
  std::vector<std::pair<std::string, QuotaSpec>> quotas;
  std::vector<HoldingSpec> holdings;
  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

enum class AnalysisKind { power, classify, float_adjust, board, control_test, grandfather, discrete, compare, nationality };

inline std::string_view to_string(AnalysisKind k) {
  switch (k) {
    case AnalysisKind::power: return "power";
    case AnalysisKind::classify: return "classify";
    case AnalysisKind::float_adjust: return "float_adjust";
    case AnalysisKind::board: return "board";
    case AnalysisKind::control_test: return "control_test";
    case AnalysisKind::grandfather: return "grandfather";
    case AnalysisKind::discrete: return "discrete";
    case AnalysisKind::compare: return "compare";
    case AnalysisKind::nationality: return "nationality";
  }
  return "?";
}

inline std::optional<AnalysisKind> parse_analysis_kind(std::string_view s) {
  for (auto k : {AnalysisKind::power, AnalysisKind::classify, AnalysisKind::float_adjust, AnalysisKind::board,
                 AnalysisKind::control_test, AnalysisKind::grandfather, AnalysisKind::discrete, AnalysisKind::compare,
                 AnalysisKind::nationality})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct AnalysisSpec {
  std::string id;
  AnalysisKind kind = AnalysisKind::power;
  std::string game;   // power, classify, float_adjust, board, control_test
  std::string graph;  // grandfather, discrete, compare, nationality
  std::optional<QuotaSpec> quota;
  std::optional<std::string> backend;
  std::optional<std::int64_t> board_size;
  std::string holder;
  std::string target;
  std::optional<Fraction> domestic_threshold;
  Json expect;  // null when absent
  Json caveat;  // null when absent
  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string description;
  std::vector<EntitySpec> entities;
  std::vector<GameSpec> games;
  std::vector<GraphSpec> graphs;
  std::vector<AnalysisSpec> analyses;
  friend bool operator==(const Scenario&, const Scenario&) = default;

  bool uses_symbolic_quota() const {
    for (const auto& g : games)
      if (g.quota.symbolic()) return true;
    for (const auto& g : graphs) {
      if (g.default_quota && g.default_quota->symbolic()) return true;
      for (const auto& [_, q] : g.quotas)
        if (q.symbolic()) return true;
    }
    for (const auto& a : analyses)
      if (a.quota && a.quota->symbolic()) return true;
    return false;
  }

  const EntitySpec& entity(std::string_view id) const {
    for (const auto& e : entities)
      if (e.id == id) return e;
    throw ValidationError("unknown entity '" + std::string(id) + "'");
  }
  const GameSpec& game(std::string_view id) const {
    for (const auto& g : games)
      if (g.id == id) return g;
    throw ValidationError("unknown game '" + std::string(id) + "'");
  }
  const GraphSpec& graph(std::string_view id) const {
    for (const auto& g : graphs)
      if (g.id == id) return g;
    throw ValidationError("unknown graph '" + std::string(id) + "'");
  }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Reader {
 public:
  explicit Reader(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError(path_ + ": " + msg); }

  Reader at(const std::string& key) const { return Reader(path_ + "." + key); }
  Reader at(std::size_t i) const { return Reader(path_ + "[" + std::to_string(i) + "]"); }

  const Json& object(const Json& j) const {
    if (!j.is_object()) fail("expected an object");
    return j;
  }
  const Json& array(const Json& j) const {
    if (!j.is_array()) fail("expected an array");
    return j;
  }
  const Json& field(const Json& j, const char* key) const {
    object(j);
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
  }
  std::string string(const Json& j) const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }
  std::int64_t integer(const Json& j) const {
    if (!j.is_number_integer()) fail("expected an integer");
    return j.get<std::int64_t>();
  }
  bool boolean(const Json& j) const {
    if (!j.is_boolean()) fail("expected true or false");
    return j.get<bool>();
  }

  void only(const Json& j, std::initializer_list<std::string_view> keys) const {
    object(j);
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (auto k : keys) known = known || it.key() == k;
      if (!known) fail("unknown field '" + it.key() + "'");
    }
  }

  Fraction fraction(const Json& j) const {
    only(j, {"num", "den"});
    Fraction f{at("num").integer(field(j, "num")), at("den").integer(field(j, "den"))};
    if (f.den <= 0) fail("denominator must be positive");
    return f;
  }

  QuotaSpec quota(const Json& j) const {
    if (j.is_string()) {
      if (j.get<std::string>() == "two-thirds") return QuotaSpec{TwoThirds{}};
      fail("unknown symbolic quota '" + j.get<std::string>() + "' (only \"two-thirds\" is symbolic)");
    }
    Fraction f = fraction(j);
    try {
      (void)Quota(f.value());
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    return QuotaSpec{f};
  }

 private:
  std::string path_;
};

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& doc) {
  using detail::Reader;
  const Reader root("$");
  root.only(doc, {"schema_version", "name", "description", "entities", "games", "graphs", "analyses"});
  Scenario s;
  s.schema_version = static_cast<int>(root.at("schema_version").integer(root.field(doc, "schema_version")));
  if (s.schema_version != kSchemaVersion)
    root.at("schema_version").fail("unsupported schema version " + std::to_string(s.schema_version));
  if (doc.contains("name")) s.name = root.at("name").string(doc["name"]);
  if (doc.contains("description")) s.description = root.at("description").string(doc["description"]);

  if (doc.contains("entities")) {
    const Reader r = root.at("entities");
    const Json& arr = r.array(doc["entities"]);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader e = r.at(i);
      e.only(arr[i], {"id", "name", "nationality", "country"});
      EntitySpec spec;
      spec.id = e.at("id").string(e.field(arr[i], "id"));
      spec.name = arr[i].contains("name") ? e.at("name").string(arr[i]["name"]) : spec.id;
      const std::string nat = e.at("nationality").string(e.field(arr[i], "nationality"));
      if (nat == "domestic")
        spec.nationality = NationalityKind::domestic;
      else if (nat == "foreign")
        spec.nationality = NationalityKind::foreign;
      else if (nat == "public_float")
        spec.nationality = NationalityKind::public_float;
      else
        e.at("nationality").fail("expected domestic, foreign or public_float");
      if (arr[i].contains("country")) {
        if (spec.nationality == NationalityKind::public_float) e.at("country").fail("public float carries no country");
        spec.country = e.at("country").string(arr[i]["country"]);
      }
      for (const auto& prev : s.entities)
        if (prev.id == spec.id) e.at("id").fail("duplicate entity id '" + spec.id + "'");
      s.entities.push_back(std::move(spec));
    }
  }

  auto require_entity = [&](const Reader& r, const std::string& id) {
    for (const auto& e : s.entities)
      if (e.id == id) return;
    r.fail("unknown entity '" + id + "'");
  };

  if (doc.contains("games")) {
    const Reader r = root.at("games");
    const Json& arr = r.array(doc["games"]);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader g = r.at(i);
      g.only(arr[i], {"id", "quota", "players", "allow_non_majority_quota"});
      GameSpec spec;
      spec.id = g.at("id").string(g.field(arr[i], "id"));
      spec.quota = g.at("quota").quota(g.field(arr[i], "quota"));
      if (arr[i].contains("allow_non_majority_quota"))
        spec.allow_non_majority_quota = g.at("allow_non_majority_quota").boolean(arr[i]["allow_non_majority_quota"]);
      if (!spec.allow_non_majority_quota && !spec.quota.symbolic() &&
          std::get<Fraction>(spec.quota.value).value() <= make_rational(1, 2))
        g.at("quota").fail("quota must exceed one half unless allow_non_majority_quota is set");
      const Reader pr = g.at("players");
      const Json& players = pr.array(g.field(arr[i], "players"));
      if (players.empty()) pr.fail("a game needs at least one player");
      for (std::size_t k = 0; k < players.size(); ++k) {
        const Reader p = pr.at(k);
        p.only(players[k], {"entity", "weight_bp"});
        StakeSpec st{p.at("entity").string(p.field(players[k], "entity")),
                     p.at("weight_bp").integer(p.field(players[k], "weight_bp"))};
        if (st.weight_bp < 0) p.at("weight_bp").fail("weight must be non-negative");
        require_entity(p.at("entity"), st.entity);
        for (const auto& prev : spec.players)
          if (prev.entity == st.entity) p.at("entity").fail("duplicate player '" + st.entity + "'");
        spec.players.push_back(std::move(st));
      }
      for (const auto& prev : s.games)
        if (prev.id == spec.id) g.at("id").fail("duplicate game id '" + spec.id + "'");
      s.games.push_back(std::move(spec));
    }
  }

  if (doc.contains("graphs")) {
    const Reader r = root.at("graphs");
    const Json& arr = r.array(doc["graphs"]);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader g = r.at(i);
      g.only(arr[i], {"id", "default_quota", "quotas", "holdings"});
      GraphSpec spec;
      spec.id = g.at("id").string(g.field(arr[i], "id"));
      if (arr[i].contains("default_quota")) spec.default_quota = g.at("default_quota").quota(arr[i]["default_quota"]);
      if (arr[i].contains("quotas")) {
        const Reader qr = g.at("quotas");
        const Json& qs = qr.object(arr[i]["quotas"]);
        for (auto it = qs.begin(); it != qs.end(); ++it) {
          require_entity(qr.at(it.key()), it.key());
          spec.quotas.emplace_back(it.key(), qr.at(it.key()).quota(it.value()));
        }
      }
      const Reader hr = g.at("holdings");
      const Json& hs = hr.array(g.field(arr[i], "holdings"));
      for (std::size_t k = 0; k < hs.size(); ++k) {
        const Reader h = hr.at(k);
        h.only(hs[k], {"holder", "corporation", "weight_bp"});
        HoldingSpec hs_spec{h.at("holder").string(h.field(hs[k], "holder")),
                            h.at("corporation").string(h.field(hs[k], "corporation")),
                            h.at("weight_bp").integer(h.field(hs[k], "weight_bp"))};
        if (hs_spec.weight_bp < 0) h.at("weight_bp").fail("weight must be non-negative");
        require_entity(h.at("holder"), hs_spec.holder);
        require_entity(h.at("corporation"), hs_spec.corporation);
        spec.holdings.push_back(std::move(hs_spec));
      }
      for (const auto& prev : s.graphs)
        if (prev.id == spec.id) g.at("id").fail("duplicate graph id '" + spec.id + "'");
      s.graphs.push_back(std::move(spec));
    }
  }

  if (doc.contains("analyses")) {
    const Reader r = root.at("analyses");
    const Json& arr = r.array(doc["analyses"]);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader a = r.at(i);
      const Json& j = arr[i];
      a.only(j, {"id", "kind", "game", "graph", "quota", "backend", "board_size", "holder", "target",
                 "domestic_threshold", "expect", "caveat"});
      AnalysisSpec spec;
      spec.id = j.contains("id") ? a.at("id").string(j["id"]) : "analysis-" + std::to_string(i + 1);
      const std::string kind = a.at("kind").string(a.field(j, "kind"));
      auto k = parse_analysis_kind(kind);
      if (!k) a.at("kind").fail("unknown analysis kind '" + kind + "'");
      spec.kind = *k;
      const bool on_game = spec.kind == AnalysisKind::power || spec.kind == AnalysisKind::classify ||
                           spec.kind == AnalysisKind::float_adjust || spec.kind == AnalysisKind::board ||
                           spec.kind == AnalysisKind::control_test;
      if (on_game) {
        spec.game = a.at("game").string(a.field(j, "game"));
        bool found = false;
        for (const auto& g : s.games) found = found || g.id == spec.game;
        if (!found) a.at("game").fail("unknown game '" + spec.game + "'");
      } else {
        spec.graph = a.at("graph").string(a.field(j, "graph"));
        bool found = false;
        for (const auto& g : s.graphs) found = found || g.id == spec.graph;
        if (!found) a.at("graph").fail("unknown graph '" + spec.graph + "'");
      }
      if (j.contains("quota")) spec.quota = a.at("quota").quota(j["quota"]);
      if (j.contains("backend")) {
        spec.backend = a.at("backend").string(j["backend"]);
        try {
          (void)parse_backend(*spec.backend);
        } catch (const ValidationError& e) {
          a.at("backend").fail(e.what());
        }
      }
      if (j.contains("board_size")) spec.board_size = a.at("board_size").integer(j["board_size"]);
      if (spec.kind == AnalysisKind::board) {
        if (!spec.board_size) a.fail("board analysis needs board_size");
        if (*spec.board_size < 1) a.at("board_size").fail("board size must be positive");
      }
      if (j.contains("holder")) spec.holder = a.at("holder").string(j["holder"]);
      if (j.contains("target")) spec.target = a.at("target").string(j["target"]);
      if (spec.kind == AnalysisKind::grandfather) {
        if (spec.holder.empty()) a.fail("grandfather analysis needs holder");
        require_entity(a.at("holder"), spec.holder);
      }
      if (spec.kind == AnalysisKind::grandfather || spec.kind == AnalysisKind::compare ||
          spec.kind == AnalysisKind::nationality) {
        if (spec.target.empty()) a.fail(kind + " analysis needs target");
        require_entity(a.at("target"), spec.target);
      }
      if (j.contains("domestic_threshold")) spec.domestic_threshold = a.at("domestic_threshold").fraction(j["domestic_threshold"]);
      if ((spec.kind == AnalysisKind::control_test || spec.kind == AnalysisKind::nationality) && !spec.domestic_threshold)
        a.fail(kind + " analysis needs domestic_threshold");
      if (j.contains("expect")) spec.expect = j["expect"];
      if (j.contains("caveat")) spec.caveat = j["caveat"];
      s.analyses.push_back(std::move(spec));
    }
  }
  return s;
}

inline Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>") {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON (" + e.what() + ")");
  }
  try {
    return scenario_from_json(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

// ---------------------------------------------------------------------------
// Serialization (canonical field order, absent optionals omitted)

inline Json to_json(const Fraction& f) { return Json{{"num", f.num}, {"den", f.den}}; }

inline Json to_json(const QuotaSpec& q) {
  if (q.symbolic()) return "two-thirds";
  return to_json(std::get<Fraction>(q.value));
}

inline Json to_json(const Scenario& s) {
  Json doc;
  doc["schema_version"] = s.schema_version;
  if (!s.name.empty()) doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["entities"] = Json::array();
  for (const auto& e : s.entities) {
    Json j{{"id", e.id}, {"name", e.name}, {"nationality", std::string(to_string(e.nationality))}};
    if (e.country) j["country"] = *e.country;
    doc["entities"].push_back(std::move(j));
  }
  doc["games"] = Json::array();
  for (const auto& g : s.games) {
    Json j{{"id", g.id}, {"quota", to_json(g.quota)}};
    if (g.allow_non_majority_quota) j["allow_non_majority_quota"] = true;
    j["players"] = Json::array();
    for (const auto& p : g.players) j["players"].push_back(Json{{"entity", p.entity}, {"weight_bp", p.weight_bp}});
    doc["games"].push_back(std::move(j));
  }
  doc["graphs"] = Json::array();
  for (const auto& g : s.graphs) {
    Json j{{"id", g.id}};
    if (g.default_quota) j["default_quota"] = to_json(*g.default_quota);
    if (!g.quotas.empty()) {
      j["quotas"] = Json::object();
      for (const auto& [corp, q] : g.quotas) j["quotas"][corp] = to_json(q);
    }
    j["holdings"] = Json::array();
    for (const auto& h : g.holdings)
      j["holdings"].push_back(Json{{"holder", h.holder}, {"corporation", h.corporation}, {"weight_bp", h.weight_bp}});
    doc["graphs"].push_back(std::move(j));
  }
  doc["analyses"] = Json::array();
  for (const auto& a : s.analyses) {
    Json j{{"id", a.id}, {"kind", std::string(to_string(a.kind))}};
    if (!a.game.empty()) j["game"] = a.game;
    if (!a.graph.empty()) j["graph"] = a.graph;
    if (a.quota) j["quota"] = to_json(*a.quota);
    if (a.backend) j["backend"] = *a.backend;
    if (a.board_size) j["board_size"] = *a.board_size;
    if (!a.holder.empty()) j["holder"] = a.holder;
    if (!a.target.empty()) j["target"] = a.target;
    if (a.domestic_threshold) j["domestic_threshold"] = to_json(*a.domestic_threshold);
    if (!a.expect.is_null()) j["expect"] = a.expect;
    if (!a.caveat.is_null()) j["caveat"] = a.caveat;
    doc["analyses"].push_back(std::move(j));
  }
  return doc;
}

inline std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Model construction

inline Nationality nationality_of(const EntitySpec& e) { return Nationality{e.nationality, e.country}; }

inline VotingGame build_game(const Scenario& s, const GameSpec& g, QuotaInterpretation qi,
                             const std::optional<QuotaSpec>& quota_override = std::nullopt) {
  std::vector<Player> players;
  for (const auto& st : g.players) {
    const EntitySpec& e = s.entity(st.entity);
    players.push_back({e.id, e.name, nationality_of(e), Weight::basis_points(st.weight_bp)});
  }
  GameOptions options;
  options.allow_non_majority_quota = g.allow_non_majority_quota;
  const QuotaSpec& q = quota_override ? *quota_override : g.quota;
  return make_game(q.resolve(qi), std::move(players), options);
}

inline OwnershipGraph build_graph(const Scenario& s, const GraphSpec& g, QuotaInterpretation qi) {
  OwnershipGraph graph;
  auto referenced = [&](const std::string& id) {
    for (const auto& h : g.holdings)
      if (h.holder == id || h.corporation == id) return true;
    return false;
  };
  for (const auto& e : s.entities)
    if (referenced(e.id)) graph.add_entity({e.id, e.name, nationality_of(e)});
  for (const auto& h : g.holdings) graph.add_holding(h.holder, h.corporation, Weight::basis_points(h.weight_bp));
  if (g.default_quota) graph.set_default_quota(g.default_quota->resolve(qi));
  for (const auto& [corp, q] : g.quotas) graph.set_quota(corp, q.resolve(qi));
  graph.validate();
  return graph;
}

}  // namespace votepower
