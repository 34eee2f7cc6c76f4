// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

// Batch driver: random Hermitian 2x2 matrices, both rotation algorithms,
// extremal error statistics per run as CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "acrot/experiment.hpp"

namespace {

using namespace acrot;

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) | rd();
}

/// An output stream that is either stdout or a file.
struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  bool open(const std::string& path) {
    if (path.empty() || path == "-") return true;
    file = std::make_unique<std::ofstream>(path);
    os = file.get();
    return static_cast<bool>(*file);
  }
};

void print_summary(int run, const RunStats& s, const Verdict& v) {
  const double j = max_abs_delta(s, true);
  const double l = max_abs_delta(s, false);
  std::fprintf(stderr,
               "run %d: qualifying %llu/%llu  max|delta_J| %.4f  max|delta_L| %.4f  ratio %.3f  "
               "bound violations %llu  delta violations %llu  beta=1 excess %llu%s\n",
               run, static_cast<unsigned long long>(s.n_qualifying), static_cast<unsigned long long>(s.n_total), j, l,
               j > 0 ? l / j : 0.0, static_cast<unsigned long long>(v.bound_violations),
               static_cast<unsigned long long>(v.delta_violations), static_cast<unsigned long long>(s.n_beta1_excess),
               v.comparison_failures != 0 ? "  COMPARISON FAILED" : "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accuracy experiments for 2x2 Hermitian Jacobi rotations"};

  RunConfig cfg;
  std::string out_path;
  std::string witness_path;
  std::string replay_path;
  bool os_entropy = false;
  bool verbose = false;

  std::string format = "f64";
  std::string kind = "complex";
  std::string mode = "check-bounds";
  app.add_option("--format", format, "Floating-point format")
      ->check(CLI::IsMember({"f32", "f64"}))
      ->capture_default_str();
  app.add_option("--kind", kind, "Complex Hermitian or real symmetric input")
      ->check(CLI::IsMember({"complex", "real"}))
      ->capture_default_str();
  app.add_option("--count", cfg.count, "Matrices per run")->check(CLI::Range(std::uint64_t{1}, ~std::uint64_t{0}));
  app.add_option("--runs", cfg.runs, "Number of runs")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "PRNG seed");
  app.add_option("--mode", mode, "Gating mode")
      ->check(CLI::IsMember({"compare", "check-bounds", "single"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "Statistics CSV (default stdout)");
  app.add_option("--replay", replay_path, "Re-evaluate the inputs of a witness CSV")->check(CLI::ExistingFile);
  app.add_flag("--os-entropy", os_entropy, "Seed from the operating system instead of --seed");
  app.add_flag("--verbose-intermediates", verbose, "Print every intermediate value for witnesses and replays");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores); results do not depend on it");
  app.add_option("--witnesses", witness_path, "Write the input attaining each extreme to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; usage errors share the I/O status.
    return app.exit(e) == 0 ? 0 : 2;
  }
  cfg.format = *parse_format(format);
  cfg.kind = *parse_kind(kind);
  cfg.mode = *parse_mode(mode);

  Output out;
  if (!out.open(out_path)) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return 2;
  }

  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in) {
      std::cerr << "error: cannot read " << replay_path << '\n';
      return 2;
    }
    std::string error;
    const int status = replay(in, std::cout, *out.os, verbose, error);
    if (status == 2) std::cerr << "error: " << replay_path << ": " << error << '\n';
    return status;
  }

  if (os_entropy) {
    cfg.seed = entropy_seed();
    std::cerr << "seed " << cfg.seed << '\n';
  }
  if (cfg.mode == Mode::single) cfg.runs = 1;

  Output witnesses;
  if (!witness_path.empty()) {
    if (!witnesses.open(witness_path)) {
      std::cerr << "error: cannot open " << witness_path << " for writing\n";
      return 2;
    }
    write_witness_header(*witnesses.os);
  }

  write_stats_header(*out.os);
  bool ok = true;
  run_experiment(cfg, [&](int run, const RunStats& s) {
    write_stats_row(*out.os, run, s);
    out.os->flush();
    const Verdict v = judge(s, cfg.mode);
    ok = ok && v.ok();
    print_summary(run, s, v);
    if (!witness_path.empty()) write_witness_rows(*witnesses.os, run, s, cfg.format, cfg.kind);
    if (verbose) {
      for (const Extreme* e : {&s.delta_min_j, &s.delta_max_j, &s.rho_min[kRhoCos], &s.rho_max[kRhoCos],
                               &s.rho_min[kRhoRe], &s.rho_max[kRhoRe], &s.rho_min[kRhoIm], &s.rho_max[kRhoIm]}) {
        if (!e->set) continue;
        std::cerr << "witness index " << e->index << '\n';
        print_trace(std::cerr, e->witness, cfg.format, cfg.kind);
      }
    }
  });

  if (!*out.os || (witnesses.file && !*witnesses.file)) {
    std::cerr << "error: write failed\n";
    return 2;
  }
  return ok ? 0 : 1;
}
