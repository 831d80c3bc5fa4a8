#pragma once

// Runs scenario analyses and renders their results, either as aligned text
// tables or as machine documents carrying exact {"num", "den"} rationals.
// Decimal strings in either output are rounded half-up to two places and
// never feed back into a computation.

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "votepower/engine.hpp"
#include "votepower/equity.hpp"
#include "votepower/graph.hpp"
#include "votepower/scenario.hpp"

namespace votepower {

struct RunOptions {
  std::optional<Backend> backend;  // overrides per-analysis backends
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0x5eed;
  QuotaInterpretation interpretation = QuotaInterpretation::percent;
};

struct AnalysisResult {
  std::string id;
  AnalysisKind kind = AnalysisKind::power;
  Json machine;
  std::string table;
};

// ---------------------------------------------------------------------------
// Machine encoding

inline Json rational_json(const Rational& r) {
  const BigInt num = numerator_of(r);
  const BigInt den = denominator_of(r);
  if (num > BigInt(INT64_MAX) || num < BigInt(INT64_MIN) || den > BigInt(INT64_MAX))
    return Json{{"num", num.str()}, {"den", den.str()}};
  return Json{{"num", static_cast<std::int64_t>(num)}, {"den", static_cast<std::int64_t>(den)}};
}

inline Json status_json(const PlayerStatus& s) {
  Json j = Json::array();
  if (s.dictator) j.push_back("dictator");
  if (s.veto) j.push_back("veto");
  if (s.dummy) j.push_back("dummy");
  return j;
}

inline Json weights_json(const VotingGame& game) {
  Json j{{"quota", rational_json(game.quota().threshold())},
         {"quota_display", to_percent(game.quota().threshold())},
         {"players", Json::array()},
         {"weights_bp", Json::array()},
         {"weights_display", Json::array()}};
  for (const auto& p : game.players()) {
    j["players"].push_back(p.id);
    j["weights_bp"].push_back(rational_json(p.weight.bp()));
    j["weights_display"].push_back(to_percent(p.weight.bp() / game.total_weight().bp()));
  }
  return j;
}

inline Json power_json(const PowerReport& r) {
  Json j{{"backend", std::string(to_string(r.backend))},
         {"players", Json::array()},
         {"beta", Json::array()},
         {"total_swings", r.total_swings},
         {"normalized", Json::array()},
         {"normalized_display", Json::array()},
         {"absolute", Json::array()},
         {"absolute_display", Json::array()},
         {"status", Json::array()}};
  for (const auto& p : r.players) {
    j["players"].push_back(p.id);
    j["beta"].push_back(p.beta);
    j["normalized"].push_back(rational_json(p.normalized));
    j["normalized_display"].push_back(to_percent(p.normalized));
    j["absolute"].push_back(rational_json(p.absolute));
    j["absolute_display"].push_back(to_percent(p.absolute));
    j["status"].push_back(status_json(p.status));
  }
  if (r.backend == Backend::mc) {
    j["samples"] = r.samples;
    j["half_width"] = Json::array();
    for (const auto& p : r.players) j["half_width"].push_back(*p.half_width);
  }
  return j;
}

inline Json tier_json(const TierVerdict& v) {
  Json j = power_json(v.power);
  j["quota"] = rational_json(v.quota.threshold());
  j["voters"] = Json::array();
  j["weights_display"] = Json::array();
  for (const auto& b : v.blocks) {
    j["voters"].push_back(b.voter);
    j["weights_display"].push_back(to_percent(b.weight.bp() / 10000));
  }
  j["outcome"] = std::string(to_string(v.outcome));
  j["controller"] = v.controller ? Json(*v.controller) : Json(nullptr);
  j["leaders"] = v.leaders;
  j["imputations"] = Json::array();
  for (const auto& imp : v.imputations) j["imputations"].push_back(Json{{"holder", imp.holder}, {"controller", imp.controller}});
  return j;
}

// ---------------------------------------------------------------------------
// Text tables

namespace detail {

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (width.size() <= c) width.push_back(0);
        width[c] = std::max(width[c], r[c].size());
      }
    std::ostringstream out;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      for (std::size_t c = 0; c < rows_[k].size(); ++c) {
        out << std::left << std::setw(static_cast<int>(width[c])) << rows_[k][c];
        if (c + 1 < rows_[k].size()) out << "  ";
      }
      out << '\n';
      if (k == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        out << std::string(total - 2, '-') << '\n';
      }
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string status_text(const PlayerStatus& s) {
  std::string out;
  auto add = [&](const char* w) { out += out.empty() ? w : std::string(",") + w; };
  if (s.dictator) add("dictator");
  if (s.veto) add("veto");
  if (s.dummy) add("dummy");
  return out.empty() ? "-" : out;
}

// Power vector in the {a%, b%, ...} notation of the source tables.
inline std::string vector_text(const PowerReport& r) {
  std::string out = "{";
  for (std::size_t i = 0; i < r.players.size(); ++i) {
    if (i) out += ", ";
    out += to_percent(r.players[i].normalized) + "%";
  }
  return out + "}";
}

inline std::string power_table(const VotingGame& game, const PowerReport& r) {
  Table t({"player", "name", "weight%", "beta", "V", "V%", "abs%", "status"});
  for (std::size_t i = 0; i < r.players.size(); ++i) {
    const auto& p = r.players[i];
    std::string abs = to_percent(p.absolute);
    if (p.half_width) {
      std::ostringstream hw;
      hw << std::fixed << std::setprecision(2) << *p.half_width * 100;
      abs += " +/- " + hw.str();
    }
    t.add({p.id, p.name, to_percent(game.player(i).weight.bp() / game.total_weight().bp()), std::to_string(p.beta),
           to_string(p.normalized), to_percent(p.normalized), abs, status_text(p.status)});
  }
  std::ostringstream out;
  out << "quota " << to_percent(game.quota().threshold()) << "% (" << to_string(game.quota().threshold())
      << "), backend " << to_string(r.backend) << ", total swings " << r.total_swings;
  if (r.backend == Backend::mc) out << ", samples " << r.samples;
  out << "\n" << t.str() << "V = " << vector_text(r) << "\n";
  return out.str();
}

inline std::string tier_table(const OwnershipGraph& graph, const TierVerdict& v) {
  Table t({"block", "cast by", "weight%", "beta", "V%", "status"});
  for (std::size_t i = 0; i < v.blocks.size(); ++i) {
    const auto& p = v.power.players[i];
    t.add({v.blocks[i].id, graph.entity(v.blocks[i].voter).name, to_percent(v.blocks[i].weight.bp() / 10000),
           std::to_string(p.beta), to_percent(p.normalized), status_text(p.status)});
  }
  std::ostringstream out;
  out << v.corporation << " (quota " << to_percent(v.quota.threshold()) << "%): " << to_string(v.outcome);
  if (v.controller) out << ", controlled by " << *v.controller;
  out << "\n" << t.str();
  for (const auto& imp : v.imputations) out << "  " << imp.holder << " votes as " << imp.controller << "\n";
  return out.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Running

inline PowerOptions power_options(const AnalysisSpec& a, const RunOptions& run) {
  PowerOptions o;
  if (run.backend)
    o.backend = *run.backend;
  else if (a.backend)
    o.backend = parse_backend(*a.backend);
  o.samples = run.samples;
  o.seed = run.seed;
  return o;
}

inline AnalysisResult run_analysis(const Scenario& s, const AnalysisSpec& a, const RunOptions& run) {
  AnalysisResult out;
  out.id = a.id;
  out.kind = a.kind;
  Json& m = out.machine;
  m["analysis"] = a.id;
  m["kind"] = std::string(to_string(a.kind));
  m["quota_interpretation"] = std::string(to_string(run.interpretation));
  const PowerOptions po = power_options(a, run);
  std::ostringstream table;
  table << "== " << a.id << " [" << to_string(a.kind) << "]\n";

  switch (a.kind) {
    case AnalysisKind::power: {
      const VotingGame game = build_game(s, s.game(a.game), run.interpretation, a.quota);
      const PowerReport r = power_report(game, po);
      m["input"] = weights_json(game);
      m.update(power_json(r));
      table << detail::power_table(game, r);
      break;
    }
    case AnalysisKind::classify: {
      const VotingGame game = build_game(s, s.game(a.game), run.interpretation, a.quota);
      const PowerReport r = power_report(game, po);
      const auto classes = classify_foreign_control(game, po);
      m["input"] = weights_json(game);
      m.update(power_json(r));
      m["classification"] = Json::object();
      table << detail::power_table(game, r);
      for (const auto& c : classes) {
        m["classification"][c.player_id] = std::string(to_string(c.classification));
        table << c.player_id << ": " << to_string(c.classification) << "\n";
      }
      break;
    }
    case AnalysisKind::float_adjust: {
      const VotingGame game = build_game(s, s.game(a.game), run.interpretation, a.quota);
      const VotingGame adjusted = float_adjust(game);
      const PowerReport before = power_report(game, po);
      const PowerReport after = power_report(adjusted, po);
      m["input"] = weights_json(game);
      m["adjusted"] = weights_json(adjusted);
      m["before"] = power_json(before);
      m["after"] = power_json(after);
      table << "with public float\n" << detail::power_table(game, before);
      table << "net of public float\n" << detail::power_table(adjusted, after);
      break;
    }
    case AnalysisKind::board: {
      const VotingGame game = build_game(s, s.game(a.game), run.interpretation);
      const Quota quota = a.quota ? a.quota->resolve(run.interpretation) : game.quota();
      const SeatAllocation seats = allocate_board_seats(game, *a.board_size);
      const VotingGame board = board_game(game, *a.board_size, quota);
      const PowerReport r = power_report(board, po);
      m["input"] = weights_json(game);
      m["board_size"] = *a.board_size;
      m["seats"] = seats.seats;
      m["board"] = weights_json(board);
      m.update(power_json(r));
      table << "seats of " << *a.board_size << ": {";
      for (std::size_t i = 0; i < seats.seats.size(); ++i) table << (i ? ", " : "") << seats.seats[i];
      table << "}\n" << detail::power_table(board, r);
      break;
    }
    case AnalysisKind::control_test: {
      const VotingGame game = build_game(s, s.game(a.game), run.interpretation, a.quota);
      const Rational threshold = a.domestic_threshold->value();
      Rational domestic = 0;
      for (const auto& p : game.players())
        if (p.nationality.is_domestic()) domestic += p.weight.bp();
      const Rational share = domestic / game.total_weight().bp();
      const auto verdict = control_test(game, threshold);
      m["input"] = weights_json(game);
      m["domestic_threshold"] = rational_json(threshold);
      m["domestic_share"] = rational_json(share);
      m["domestic_share_display"] = to_percent(share);
      m["verdict"] = std::string(to_string(verdict));
      table << "domestic share " << to_percent(share) << "% vs threshold " << to_percent(threshold) << "%: "
            << to_string(verdict) << "\n";
      break;
    }
    case AnalysisKind::grandfather: {
      const OwnershipGraph graph = build_graph(s, s.graph(a.graph), run.interpretation);
      const Rational eq = grandfather_equity(graph, a.holder, a.target);
      m["holder"] = a.holder;
      m["target"] = a.target;
      m["equity"] = rational_json(eq);
      m["equity_display"] = to_percent(eq);
      table << a.holder << " in " << a.target << ": " << to_percent(eq) << "% (" << to_string(eq) << ")\n";
      break;
    }
    case AnalysisKind::discrete: {
      const OwnershipGraph graph = build_graph(s, s.graph(a.graph), run.interpretation);
      m["tiers"] = Json::object();
      for (const auto& v : discrete_propagate(graph, po)) {
        m["tiers"][v.corporation] = tier_json(v);
        table << detail::tier_table(graph, v);
      }
      break;
    }
    case AnalysisKind::compare: {
      const OwnershipGraph graph = build_graph(s, s.graph(a.graph), run.interpretation);
      const MethodComparison c = compare_methods(graph, a.target, po);
      m["target"] = a.target;
      Json gf = weights_json(c.grandfathered);
      gf.update(power_json(c.grandfather_power));
      m["grandfather"] = std::move(gf);
      m["discrete"] = tier_json(c.discrete);
      m["actors"] = Json::object();
      detail::Table t({"actor", "grandfather V%", "discrete V%"});
      for (const auto& actor : c.actors) {
        m["actors"][actor.actor] = Json{{"grandfather", rational_json(actor.grandfather)},
                                        {"grandfather_display", to_percent(actor.grandfather)},
                                        {"discrete", rational_json(actor.discrete)},
                                        {"discrete_display", to_percent(actor.discrete)}};
        t.add({actor.actor, to_percent(actor.grandfather), to_percent(actor.discrete)});
      }
      m["divergent"] = c.divergent;
      table << "grandfathered game\n" << detail::power_table(c.grandfathered, c.grandfather_power);
      table << "discrete propagation\n" << detail::tier_table(graph, c.discrete);
      table << t.str() << (c.divergent ? "methods DIVERGE\n" : "methods agree\n");
      break;
    }
    case AnalysisKind::nationality: {
      const OwnershipGraph graph = build_graph(s, s.graph(a.graph), run.interpretation);
      const Rational threshold = a.domestic_threshold->value();
      const NationalityVerdict v = nationality_verdict(graph, a.target, threshold, po);
      m["target"] = a.target;
      m["domestic_threshold"] = rational_json(threshold);
      m["control_test"] = std::string(to_string(v.control_test));
      m["grandfather"] = std::string(to_string(v.grandfather));
      m["grandfather_domestic"] = rational_json(v.grandfather_domestic);
      m["grandfather_domestic_display"] = to_percent(v.grandfather_domestic);
      m["grandfather_foreign"] = rational_json(v.grandfather_foreign);
      m["grandfather_foreign_display"] = to_percent(v.grandfather_foreign);
      m["voting_power"] = Json::object();
      for (const auto& fc : v.voting_power) m["voting_power"][fc.player_id] = std::string(to_string(fc.classification));
      m["voting_power_verdict"] = std::string(to_string(v.voting_power_verdict));
      m["controller"] = v.controller ? Json(*v.controller) : Json(nullptr);
      m["tier"] = tier_json(v.tier);
      table << "control test: " << to_string(v.control_test) << "\n"
            << "grandfather: " << to_string(v.grandfather) << " (foreign " << to_percent(v.grandfather_foreign)
            << "%, domestic " << to_percent(v.grandfather_domestic) << "%)\n"
            << "voting power: " << to_string(v.voting_power_verdict);
      if (v.controller) table << ", controlled by " << *v.controller;
      table << "\n";
      for (const auto& fc : v.voting_power) table << "  " << fc.player_id << ": " << to_string(fc.classification) << "\n";
      table << detail::tier_table(graph, v.tier);
      break;
    }
  }
  out.table = table.str();
  return out;
}

inline std::vector<AnalysisResult> run_scenario(const Scenario& s, const RunOptions& run) {
  std::vector<AnalysisResult> out;
  for (const auto& a : s.analyses) out.push_back(run_analysis(s, a, run));
  return out;
}

// ---------------------------------------------------------------------------
// Expectations and corpus verification

struct Mismatch {
  std::string scenario;
  std::string analysis;
  std::string interpretation;
  std::string path;
  std::string expected;
  std::string actual;
};

// Every key of `expected` must be present in `actual` with a matching value;
// arrays must have equal length and match elementwise.
inline void match_subset(const Json& expected, const Json& actual, const std::string& path,
                         std::vector<std::pair<std::string, std::pair<std::string, std::string>>>& diffs) {
  if (expected.is_object()) {
    if (!actual.is_object()) {
      diffs.push_back({path, {expected.dump(), actual.dump()}});
      return;
    }
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      auto found = actual.find(it.key());
      if (found == actual.end())
        diffs.push_back({path + "." + it.key(), {it.value().dump(), "<missing>"}});
      else
        match_subset(it.value(), *found, path + "." + it.key(), diffs);
    }
    return;
  }
  if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) {
      diffs.push_back({path, {expected.dump(), actual.dump()}});
      return;
    }
    for (std::size_t i = 0; i < expected.size(); ++i)
      match_subset(expected[i], actual[i], path + "[" + std::to_string(i) + "]", diffs);
    return;
  }
  if (expected != actual) diffs.push_back({path, {expected.dump(), actual.dump()}});
}

// The expectation that applies under `qi`, or null when there is none.
inline Json expectation_for(const AnalysisSpec& a, QuotaInterpretation qi) {
  if (a.expect.is_null()) return nullptr;
  if (a.expect.contains("by_interpretation")) {
    const Json& by = a.expect["by_interpretation"];
    const std::string key(to_string(qi));
    return by.contains(key) ? by[key] : Json(nullptr);
  }
  return a.expect;
}

struct ScenarioCheck {
  std::string scenario;
  std::size_t checked = 0;
  std::vector<Mismatch> mismatches;
  std::vector<std::string> caveats;
  std::string error;  // set when the scenario could not be run
  bool passed() const { return error.empty() && mismatches.empty(); }
};

inline ScenarioCheck check_scenario(const Scenario& s, const RunOptions& base = {}) {
  ScenarioCheck out;
  out.scenario = s.name;
  std::vector<QuotaInterpretation> readings{QuotaInterpretation::percent};
  if (s.uses_symbolic_quota()) readings.push_back(QuotaInterpretation::exact_fraction);
  try {
    for (auto qi : readings) {
      RunOptions run = base;
      run.interpretation = qi;
      for (const auto& a : s.analyses) {
        const Json expected = expectation_for(a, qi);
        if (expected.is_null()) continue;
        const AnalysisResult r = run_analysis(s, a, run);
        ++out.checked;
        std::vector<std::pair<std::string, std::pair<std::string, std::string>>> diffs;
        match_subset(expected, r.machine, "$", diffs);
        for (auto& [path, ea] : diffs)
          out.mismatches.push_back({s.name, a.id, std::string(to_string(qi)), path, ea.first, ea.second});
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  for (const auto& a : s.analyses)
    if (!a.caveat.is_null())
      out.caveats.push_back(a.id + ": " + (a.caveat.contains("note") ? a.caveat["note"].get<std::string>() : a.caveat.dump()));
  return out;
}

// Scenario files (*.json) under `dir`, sorted by file name.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) throw Error("corpus directory '" + dir.string() + "' not found");
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace votepower
