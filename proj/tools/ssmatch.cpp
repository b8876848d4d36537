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

// ssmatch: run, sweep, adversary, oracle, gen, verify-sequences, certificate.
// Exit codes: 0 success, 2 validation or usage error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssmatch/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kIo = 3;

std::string echo(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

// Writes text to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ssmatch::IoError("cannot write " + path);
  out << text;
  if (!out) throw ssmatch::IoError("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ssmatch;

  CLI::App app{"Semi-streaming weighted matching toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t s) { seed = s, seed_given = true; },
         "Default seed (overrides " + std::string(kSeedEnv) + ")")
      ->expected(1);

  // run
  RunOptions run;
  std::string run_variant = "deterministic";
  std::string run_out;
  double run_delta = -1.0;
  int run_q = 0;
  std::uint64_t run_permute = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a bucket variant over a stream file");
  run_cmd->add_option("stream", run.stream_path, "Edge stream file")->required();
  run_cmd->add_option("variant", run_variant, "deterministic | shifted | ensemble");
  run_cmd->add_option("--gamma", run.gamma, "Class ratio gamma > 1");
  run_cmd->add_option("--epsilon", run.epsilon, "Discard parameter epsilon > 0");
  auto* delta_opt = run_cmd->add_option("--delta", run_delta, "Class shift for shifted runs");
  auto* q_opt = run_cmd->add_option("--q", run_q, "Ensemble size (default choose_q)");
  auto* permute_opt = run_cmd->add_option("--permute", run_permute, "Shuffle the stream first");
  run_cmd->add_flag("--oracle", run.oracle, "Compare against the exact oracle");
  run_cmd->add_flag("--certificate", run.certificate, "Attach the analysis certificate");
  run_cmd->add_flag("--parallel", run.parallel, "Run ensemble copies on separate tasks");
  run_cmd->add_flag("--exact-weight-greedy", run.weight_greedy,
                    "Greedy finalize by exact weight instead of class");
  run_cmd->add_option("--oracle-max-vertices", run.oracle_limit.max_vertices);
  run_cmd->add_option("--oracle-max-edges", run.oracle_limit.max_edges);
  run_cmd->add_option("-o,--out", run_out, "Report path (default stdout)");

  // sweep
  SweepOptions sweep;
  std::vector<std::string> sweep_variants{"deterministic", "ensemble"};
  std::string sweep_law = "uniform:1:100";
  std::string sweep_csv;
  std::string sweep_jsonl;
  auto* sweep_cmd = app.add_subcommand("sweep", "Ratio table over a gamma grid and seeds");
  sweep_cmd->add_option("--family", sweep.family, "random | tight");
  sweep_cmd->add_option("--gammas", sweep.gammas, "Gamma grid")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds (empty gives a header-only table)")
      ->delimiter(',');
  sweep_cmd->add_option("--variants", sweep_variants)->delimiter(',');
  sweep_cmd->add_option("--n", sweep.n);
  sweep_cmd->add_option("--m", sweep.m);
  sweep_cmd->add_option("--law", sweep_law, "uniform:lo:hi | uniform-int:lo:hi | exp-classes:g:d");
  sweep_cmd->add_option("--k", sweep.k, "Tight family size");
  sweep_cmd->add_option("--epsilon", sweep.epsilon);
  sweep_cmd->add_option("--q-epsilon", sweep.q_epsilon, "Epsilon passed to choose_q");
  sweep_cmd->add_option("--jobs", sweep.jobs);
  sweep_cmd->add_option("-o,--out", sweep_csv, "CSV path (default stdout)");
  sweep_cmd->add_option("--jsonl", sweep_jsonl, "Also write one JSON object per row");

  // adversary
  AdversaryOptions adv;
  std::string adv_out;
  bool adv_keep_going = false;
  auto* adv_cmd = app.add_subcommand("adversary", "Play the lower-bound game against a victim");
  adv_cmd->add_option("--victim", adv.victim, "hold-first | threshold:<c>");
  adv_cmd->add_option("--C", adv.C, "Target ratio, 1 < C < R");
  adv_cmd->add_option("--max-steps", adv.max_steps);
  adv_cmd->add_option("--transcript", adv.transcript_path, "JSON-lines edge transcript");
  adv_cmd->add_flag("--no-stop-on-violation", adv_keep_going,
                    "Report a contract breach instead of failing");
  adv_cmd->add_option("-o,--out", adv_out);

  // oracle
  std::string oracle_path;
  OracleLimit oracle_limit;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact maximum-weight matching");
  oracle_cmd->add_option("stream", oracle_path)->required();
  oracle_cmd->add_option("--max-vertices", oracle_limit.max_vertices);
  oracle_cmd->add_option("--max-edges", oracle_limit.max_edges);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated stream");
  gen_cmd->require_subcommand(1);
  TightExampleConfig tight;
  std::string tight_out;
  auto* tight_cmd = gen_cmd->add_subcommand("tight", "Tight family for the deterministic run");
  tight_cmd->add_option("--gamma", tight.gamma);
  tight_cmd->add_option("--k", tight.k);
  tight_cmd->add_option("--eps", tight.eps);
  tight_cmd->add_option("-o,--out", tight_out);
  RandomInstanceConfig rnd;
  std::string rnd_law = "uniform:1:100";
  std::string rnd_out;
  auto* rnd_cmd = gen_cmd->add_subcommand("random", "Seeded random graph");
  rnd_cmd->add_option("--n", rnd.n)->required();
  rnd_cmd->add_option("--m", rnd.m)->required();
  rnd_cmd->add_option("--law", rnd_law);
  auto* rnd_seed_opt = rnd_cmd->add_option("--seed", rnd.seed);
  rnd_cmd->add_option("-o,--out", rnd_out);

  // verify-sequences
  double seq_C = 4.9;
  auto* seq_cmd = app.add_subcommand("verify-sequences", "Check the adversary weight sequences");
  seq_cmd->add_option("--C", seq_C);

  // certificate
  std::string cert_path;
  double cert_gamma = 2.0;
  double cert_epsilon = 0.1;
  double cert_delta = 0.0;
  OracleLimit cert_limit;
  auto* cert_cmd = app.add_subcommand("certificate", "Analysis certificate for one bucket run");
  cert_cmd->add_option("stream", cert_path)->required();
  cert_cmd->add_option("--gamma", cert_gamma);
  cert_cmd->add_option("--epsilon", cert_epsilon);
  cert_cmd->add_option("--delta", cert_delta);
  cert_cmd->add_option("--max-vertices", cert_limit.max_vertices);
  cert_cmd->add_option("--max-edges", cert_limit.max_edges);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (!seed_given) seed = default_seed();

    if (*run_cmd) {
      run.command = echo(argc, argv);
      run.variant = parse_variant(run_variant);
      run.seed = seed;
      if (*delta_opt) run.delta = run_delta;
      if (*q_opt) run.q = run_q;
      if (*permute_opt) run.permute_seed = run_permute;
      const RunReport report = cmd_run(run);
      emit(run_out, to_json(report).dump(2) + "\n");
    } else if (*sweep_cmd) {
      sweep.law = parse_weight_law(sweep_law);
      sweep.variants.clear();
      for (const auto& v : sweep_variants) sweep.variants.push_back(parse_variant(v));
      std::ostringstream csv;
      std::ostringstream jsonl;
      cmd_sweep(sweep, csv, sweep_jsonl.empty() ? nullptr : &jsonl);
      emit(sweep_csv, csv.str());
      if (!sweep_jsonl.empty()) emit(sweep_jsonl, jsonl.str());
    } else if (*adv_cmd) {
      adv.stop_on_violation = !adv_keep_going;
      emit(adv_out, cmd_adversary(adv).dump(2) + "\n");
    } else if (*oracle_cmd) {
      emit("", cmd_oracle(oracle_path, oracle_limit).dump(2) + "\n");
    } else if (*gen_cmd) {
      std::ostringstream text;
      std::string out_path;
      if (*tight_cmd) {
        write_edge_stream(text, tight_instance(tight),
                          "tight gamma=" + format_number(tight.gamma) +
                              " k=" + std::to_string(tight.k) + " eps=" + format_number(tight.eps));
        out_path = tight_out;
      } else {
        rnd.law = parse_weight_law(rnd_law);
        if (!*rnd_seed_opt) rnd.seed = seed;
        write_edge_stream(text, random_instance(rnd),
                          "random n=" + std::to_string(rnd.n) + " m=" + std::to_string(rnd.m) +
                              " law=" + to_string(rnd.law) + " seed=" + std::to_string(rnd.seed));
        out_path = rnd_out;
      }
      emit(out_path, text.str());
    } else if (*seq_cmd) {
      const Json j = cmd_verify_sequences(seq_C);
      emit("", j.dump(2) + "\n");
      if (!j.at("ok").get<bool>()) return kValidation;
    } else if (*cert_cmd) {
      emit("", cmd_certificate(cert_path, cert_gamma, cert_epsilon, cert_delta, cert_limit).dump(2) +
                   "\n");
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
