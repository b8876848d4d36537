// Copyright 2026 The ssmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command implementations behind the ssmatch tool. Each one takes plain
// options, does its work and returns or writes its report; argument parsing
// and exit codes live in tools/ssmatch.cpp.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssmatch/adversary.hpp"
#include "ssmatch/bucket_matcher.hpp"
#include "ssmatch/certificate.hpp"
#include "ssmatch/exact_oracle.hpp"
#include "ssmatch/instance_gen.hpp"
#include "ssmatch/preemptive.hpp"
#include "ssmatch/ratio_bounds.hpp"
#include "ssmatch/report.hpp"
#include "ssmatch/sequences.hpp"
#include "ssmatch/stream_io.hpp"

namespace ssmatch {

inline constexpr const char* kSeedEnv = "SSMATCH_SEED";

// SSMATCH_SEED when set and numeric, otherwise `fallback`.
inline std::uint64_t default_seed(std::uint64_t fallback = 1) {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr) return fallback;
  std::uint64_t v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(std::string(kSeedEnv) + " must be an unsigned integer");
  }
  return v;
}

enum class Variant { deterministic, shifted, ensemble };

inline Variant parse_variant(std::string_view s) {
  if (s == "deterministic") return Variant::deterministic;
  if (s == "shifted" || s == "randomized") return Variant::shifted;
  if (s == "ensemble") return Variant::ensemble;
  throw ValidationError("unknown variant '" + std::string(s) + "'");
}

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::deterministic: return "deterministic";
    case Variant::shifted: return "shifted";
    case Variant::ensemble: return "ensemble";
  }
  return "?";
}

struct RunOptions {
  std::string command;  // echo of the invocation
  std::string stream_path;
  Variant variant = Variant::deterministic;
  double gamma = 2.0;
  double epsilon = 0.1;
  std::optional<double> delta;  // shifted: drawn from seed when absent
  std::optional<int> q;         // ensemble: choose_q(gamma, epsilon) when absent
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> permute_seed;
  bool oracle = false;
  bool certificate = false;
  bool parallel = false;
  bool weight_greedy = false;
  OracleLimit oracle_limit{};
};

namespace detail {

// Oracle over the given edges, refusing anything above the limit.
inline OracleResult bounded_oracle(std::span<const Edge> edges, OracleLimit limit) {
  return max_weight_matching_exact(edges, limit);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace detail

inline RunReport cmd_run(const RunOptions& opt) {
  const auto started = std::chrono::steady_clock::now();
  ParsedStream parsed = read_edge_stream_file(opt.stream_path);
  StreamSource stream = opt.permute_seed ? permute_stream(parsed.stream, *opt.permute_seed)
                                         : std::move(parsed.stream);

  RunReport report;
  report.command = opt.command;
  report.variant = to_string(opt.variant);
  report.gamma = opt.gamma;
  report.epsilon = opt.epsilon;
  report.seed = opt.seed;
  report.permute_seed = opt.permute_seed;
  report.parallel = opt.parallel;
  report.stream_path = opt.stream_path;
  report.stream_hash = parsed.content_hash;
  report.num_vertices = stream.num_vertices();
  report.num_edges = stream.size();
  report.file_passes = parsed.file_passes;

  const std::size_t n = std::max<std::size_t>(stream.num_vertices(), 1);
  const GreedyOrder order = opt.weight_greedy ? GreedyOrder::by_weight : GreedyOrder::by_class;
  std::optional<BucketState> chosen;
  EdgeReader reader(stream);
  if (opt.variant == Variant::ensemble) {
    const int q = opt.q ? *opt.q : choose_q(opt.gamma, opt.epsilon);
    if (opt.weight_greedy) throw ValidationError("--exact-weight-greedy is not available for ensemble");
    EnsembleResult ens = run_ensemble(reader, n, opt.gamma, opt.epsilon, q,
                                      opt.parallel ? Execution::parallel : Execution::sequential);
    report.q = q;
    report.best_copy = ens.best_copy;
    report.delta = ens.delta_of(ens.best_copy);
    for (const BucketState& c : ens.copies) {
      report.stored_edge_peak = std::max(report.stored_edge_peak, c.stored_edge_peak());
    }
    chosen.emplace(ens.copies[ens.best_copy]);
  } else {
    double delta = 0.0;
    if (opt.variant == Variant::shifted) {
      if (opt.delta) {
        delta = *opt.delta;
      } else {
        std::mt19937_64 rng(opt.seed);
        delta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      }
    }
    BucketConfig config{opt.gamma, delta, opt.epsilon, n, order};
    chosen.emplace(stream_into(config, reader));
    report.delta = delta;
    report.stored_edge_peak = chosen->stored_edge_peak();
  }
  report.edges_read_per_copy = reader.reads();

  const Matching m = chosen->finalize();
  report.matching = m.edges();
  report.weight = m.weight();

  if (opt.oracle) {
    const OracleResult best = detail::bounded_oracle(stream.edges(), opt.oracle_limit);
    report.opt_weight = best.weight;
    if (m.weight() > 0.0) report.ratio = best.weight / m.weight();
  }
  if (opt.certificate) {
    const auto above = edges_above_threshold(stream.edges(), *chosen);
    const OracleResult best = detail::bounded_oracle(above, opt.oracle_limit);
    report.certificate = to_json(build_certificate(*chosen, best.matching));
  }
  report.wall_time_ms = detail::elapsed_ms(started);
  return report;
}

struct SweepOptions {
  std::string family = "random";  // random | tight
  std::vector<double> gammas{2.0, 2.5, 3.0, 3.513, 4.0};
  std::vector<std::uint64_t> seeds;
  std::vector<Variant> variants{Variant::deterministic, Variant::ensemble};
  std::size_t n = 12;
  std::size_t m = 30;
  WeightLaw law = UniformLaw{1.0, 100.0};
  int k = 3;              // tight family
  double epsilon = 0.01;  // algorithm epsilon
  double q_epsilon = 0.5;
  int jobs = 1;
  OracleLimit oracle_limit{};
};

struct SweepRow {
  std::string family;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  Variant variant = Variant::deterministic;
  double alg_weight = 0.0;
  std::optional<double> opt_weight;  // blank when the oracle refuses
  std::optional<double> ratio;
  double bound = 0.0;
  double randomized_bound = 0.0;
  std::optional<int> q;
};

inline std::vector<SweepRow> sweep_cell(const SweepOptions& opt, double gamma, std::uint64_t seed) {
  StreamSource stream;
  if (opt.family == "random") {
    stream = random_instance(RandomInstanceConfig{opt.n, opt.m, opt.law, seed});
  } else if (opt.family == "tight") {
    stream = permute_stream(tight_instance(TightExampleConfig{gamma, opt.k, 1e-6}), seed);
  } else {
    throw ValidationError("unknown family '" + opt.family + "'");
  }
  std::optional<double> opt_weight;
  try {
    opt_weight = max_weight_matching_exact(stream.edges(), opt.oracle_limit).weight;
  } catch (const InstanceTooLarge&) {
  }
  std::vector<SweepRow> rows;
  for (Variant v : opt.variants) {
    SweepRow row;
    row.family = opt.family;
    row.gamma = gamma;
    row.seed = seed;
    row.variant = v;
    row.randomized_bound = randomized_ratio_bound(gamma);
    if (v == Variant::ensemble) {
      const int q = choose_q(gamma, opt.q_epsilon);
      row.q = q;
      row.alg_weight = run_ensemble(stream, gamma, opt.epsilon, q).best.weight();
      row.bound = ensemble_ratio_bound(gamma, q);
    } else if (v == Variant::deterministic) {
      row.alg_weight = run_deterministic(stream, gamma, opt.epsilon).weight();
      row.bound = deterministic_ratio_bound(gamma);
    } else {
      throw ValidationError("sweep supports the deterministic and ensemble variants");
    }
    row.opt_weight = opt_weight;
    if (opt_weight && row.alg_weight > 0.0) row.ratio = *opt_weight / row.alg_weight;
    rows.push_back(row);
  }
  return rows;
}

inline const char* kSweepHeader =
    "family,gamma,seed,variant,q,alg_weight,opt_weight,ratio,bound,randomized_bound";

inline std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

inline std::string to_csv(const SweepRow& r) {
  std::ostringstream s;
  s << r.family << ',' << format_number(r.gamma) << ',' << r.seed << ',' << to_string(r.variant)
    << ',' << (r.q ? std::to_string(*r.q) : "") << ',' << format_number(r.alg_weight) << ','
    << (r.opt_weight ? format_number(*r.opt_weight) : "") << ','
    << (r.ratio ? format_number(*r.ratio) : "") << ',' << format_number(r.bound) << ','
    << format_number(r.randomized_bound);
  return s.str();
}

inline Json to_json(const SweepRow& r) {
  Json j{{"family", r.family}, {"gamma", r.gamma}, {"seed", r.seed},
         {"variant", to_string(r.variant)}};
  detail::put_optional(j, "q", r.q);
  j["alg_weight"] = r.alg_weight;
  detail::put_optional(j, "opt_weight", r.opt_weight);
  detail::put_optional(j, "ratio", r.ratio);
  j["bound"] = r.bound;
  j["randomized_bound"] = r.randomized_bound;
  return j;
}

// Cells run on up to `jobs` tasks; rows are written in grid order.
inline std::vector<SweepRow> cmd_sweep(const SweepOptions& opt, std::ostream& csv,
                                       std::ostream* jsonl = nullptr) {
  csv << kSweepHeader << '\n';
  std::vector<std::pair<double, std::uint64_t>> cells;
  for (double g : opt.gammas) {
    for (std::uint64_t s : opt.seeds) cells.emplace_back(g, s);
  }
  std::vector<SweepRow> all;
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
  for (std::size_t start = 0; start < cells.size(); start += jobs) {
    const std::size_t end = std::min(cells.size(), start + jobs);
    std::vector<std::future<std::vector<SweepRow>>> pending;
    for (std::size_t i = start; i < end; ++i) {
      pending.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                   [&opt, cell = cells[i]] {
                                     return sweep_cell(opt, cell.first, cell.second);
                                   }));
    }
    for (auto& f : pending) {
      for (const SweepRow& row : f.get()) {
        csv << to_csv(row) << '\n';
        if (jsonl) *jsonl << to_json(row).dump() << '\n';
        all.push_back(row);
      }
    }
  }
  return all;
}

struct AdversaryOptions {
  std::string victim = "threshold:1";
  double C = 4.9;
  std::size_t max_steps = 1'000'000;
  bool stop_on_violation = true;
  std::string transcript_path;  // JSON lines, one per presented edge
};

inline Json cmd_adversary(const AdversaryOptions& opt) {
  auto victim = make_victim(opt.victim);
  AdversaryConfig config{opt.C, opt.max_steps, opt.stop_on_violation};
  const GameResult result = run_adversary(*victim, config);
  if (!opt.transcript_path.empty()) {
    std::ofstream out(opt.transcript_path);
    if (!out) throw IoError("cannot write " + opt.transcript_path);
    for (const EdgeRecord& r : result.edge_log) out << to_json(r).dump() << '\n';
    if (!out) throw IoError("write failed for " + opt.transcript_path);
  }
  return to_json(result);
}

inline Json cmd_oracle(const std::string& path, OracleLimit limit = {}) {
  const ParsedStream parsed = read_edge_stream_file(path);
  const OracleResult r = max_weight_matching_exact(parsed.stream.edges(), limit);
  return {{"stream", path},
          {"fnv1a64", parsed.content_hash},
          {"weight", r.weight},
          {"matching", edges_to_json(r.matching.edges())}};
}

inline Json cmd_verify_sequences(double C) {
  const SequenceTable table = generate_sequences(C);
  const IdentityReport identities = verify_identities(table, C);
  const ClosedFormParams p = make_closed_form(C);
  double max_err = 0.0;
  for (std::size_t j = 0; j <= table.n(); ++j) {
    const double scale = std::max(std::abs(table.S(j)), closed_form_envelope(p, j));
    max_err = std::max(max_err, std::abs(closed_form_S(p, j) - table.S(j)) / scale);
  }
  const std::size_t by_rec = first_nonpositive_S_by_recurrence(C);
  const std::size_t by_closed = first_nonpositive_S_by_closed_form(p);
  Json j = to_json(table);
  j["R"] = solve_R();
  j["identities"] = to_json(identities);
  j["closed_form"] = {{"r", p.r},
                      {"theta", p.theta},
                      {"A", p.A},
                      {"max_relative_error", max_err},
                      {"first_nonpositive_S_recurrence", by_rec},
                      {"first_nonpositive_S_closed_form", by_closed}};
  j["ok"] = identities.ok && max_err <= 1e-9 && by_rec == by_closed;
  return j;
}

inline Json cmd_certificate(const std::string& path, double gamma, double epsilon, double delta,
                            OracleLimit limit = {}) {
  const ParsedStream parsed = read_edge_stream_file(path);
  const StreamSource& stream = parsed.stream;
  BucketConfig config{gamma, delta, epsilon, std::max<std::size_t>(stream.num_vertices(), 1)};
  const BucketState state = stream_into(config, stream);
  const auto above = edges_above_threshold(stream.edges(), state);
  const OracleResult best = max_weight_matching_exact(above, limit);
  Json j = to_json(build_certificate(state, best.matching));
  j["stream"] = path;
  j["fnv1a64"] = parsed.content_hash;
  j["epsilon"] = epsilon;
  j["discard_threshold"] = state.discard_threshold();
  return j;
}

}  // namespace ssmatch
