// votepower: run scenario files and verify the shipped corpus.
//
//   votepower run <file> [--backend enum|dp|mc|auto] [--samples N] [--seed S]
//                        [--quota-interpretation percent|exact-fraction]
//                        [--format table|machine] [--machine-out FILE]
//   votepower verify-corpus [--subset NAME...] [--corpus DIR]
//
// Exit codes: 0 success, 1 corpus mismatch, 2 parse or validation error,
// 3 backend limit exceeded, 4 other failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "votepower/votepower.hpp"

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitLimit = 3;
constexpr int kExitOther = 4;

#ifndef VOTEPOWER_CORPUS_DIR
#define VOTEPOWER_CORPUS_DIR "corpus"
#endif

int run_command(const std::string& path, const std::string& backend, std::uint64_t samples, std::uint64_t seed,
                const std::string& interpretation, const std::string& format, const std::string& machine_out) {
  using namespace votepower;
  RunOptions run;
  if (!backend.empty()) run.backend = parse_backend(backend);
  run.samples = samples;
  run.seed = seed;
  run.interpretation = parse_interpretation(interpretation);

  const Scenario scenario = load_scenario(path);
  const auto results = run_scenario(scenario, run);

  std::ofstream machine_file;
  if (!machine_out.empty()) {
    machine_file.open(machine_out);
    if (!machine_file) throw Error("cannot write '" + machine_out + "'");
  }
  for (const auto& r : results) {
    if (format == "machine")
      std::cout << r.machine.dump() << "\n";
    else
      std::cout << r.table << "\n";
    if (machine_file) machine_file << r.machine.dump() << "\n";
  }
  return 0;
}

int verify_command(const std::string& dir, const std::vector<std::string>& subset) {
  using namespace votepower;
  std::size_t passed = 0, failed = 0, notes = 0;
  std::vector<std::string> unmatched = subset;
  for (const auto& file : corpus_files(dir)) {
    const std::string stem = file.stem().string();
    Scenario s;
    try {
      s = load_scenario(file.string());
    } catch (const Error& e) {
      std::cout << "FAIL " << stem << ": " << e.what() << "\n";
      ++failed;
      continue;
    }
    if (s.name.empty()) s.name = stem;
    if (!subset.empty()) {
      auto named = [&](const std::string& n) { return n == stem || n == s.name; };
      if (std::none_of(subset.begin(), subset.end(), named)) continue;
      std::erase_if(unmatched, named);
    }
    const ScenarioCheck check = check_scenario(s);
    if (check.passed()) {
      ++passed;
      std::cout << "PASS " << s.name << " (" << check.checked << " checks)\n";
    } else {
      ++failed;
      std::cout << "FAIL " << s.name << "\n";
      if (!check.error.empty()) std::cout << "  error: " << check.error << "\n";
      for (const auto& m : check.mismatches)
        std::cout << "  " << m.analysis << " [" << m.interpretation << "] " << m.path << ": expected " << m.expected
                  << ", got " << m.actual << "\n";
    }
    for (const auto& c : check.caveats) {
      ++notes;
      std::cout << "  documented discrepancy: " << c << "\n";
    }
  }
  for (const auto& n : unmatched) {
    ++failed;
    std::cout << "FAIL " << n << ": no such scenario in " << dir << "\n";
  }
  std::cout << passed << " passed, " << failed << " failed, " << notes << " documented discrepancies\n";
  return failed == 0 ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voting power analysis for stockholder meetings and ownership chains"};
  app.require_subcommand(1);

  std::string path, backend, interpretation = "percent", format = "table", machine_out;
  std::uint64_t samples = 100000, seed = 0x5eed;
  auto* run = app.add_subcommand("run", "Run the analyses listed in a scenario file");
  run->add_option("file", path, "Scenario file")->required();
  run->add_option("--backend", backend, "Override the power backend")
      ->check(CLI::IsMember({"enum", "dp", "mc", "auto"}));
  run->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Monte Carlo seed");
  run->add_option("--quota-interpretation", interpretation, "How to read the symbolic two-thirds quota")
      ->check(CLI::IsMember({"percent", "exact-fraction"}));
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "machine"}));
  run->add_option("--machine-out", machine_out, "Also write machine documents to this file");

  std::string corpus = VOTEPOWER_CORPUS_DIR;
  std::vector<std::string> subset;
  auto* verify = app.add_subcommand("verify-corpus", "Recompute every golden table in the corpus");
  verify->add_option("--subset", subset, "Only these scenarios (name or file stem)");
  verify->add_option("--corpus", corpus, "Corpus directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(path, backend, samples, seed, interpretation, format, machine_out);
    if (*verify) return verify_command(corpus, subset);
  } catch (const votepower::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const votepower::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const votepower::LimitError& e) {
    std::cerr << "backend limit: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return 0;
}
