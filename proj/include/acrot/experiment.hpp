// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acrot/errlab.hpp"
#include "acrot/jaev2.hpp"

namespace acrot {

enum class Format { f32, f64 };
enum class Kind { complex, real };
enum class Mode { compare, check_bounds, single };

std::string_view to_string(Format f);
std::string_view to_string(Kind k);
std::string_view to_string(Mode m);
std::optional<Format> parse_format(std::string_view s);
std::optional<Kind> parse_kind(std::string_view s);
std::optional<Mode> parse_mode(std::string_view s);

struct RunConfig {
  Format format = Format::f64;
  Kind kind = Kind::complex;
  std::uint64_t count = std::uint64_t{1} << 20;
  int runs = 33;
  std::uint64_t seed = 0;
  Mode mode = Mode::check_bounds;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 0;
};

/// Random test matrix number `index` of run `run`. Every entry is drawn as a
/// uniformly random bit pattern and redrawn until its magnitude lies in
/// [smallest normal, largest / 4]; the sign is the pattern's sign bit. The
/// real kind has im_a21 = +0. `rejections`, if given, is incremented once
/// per discarded pattern.
template <Binary F>
Herm2<F> gen_matrix(std::uint64_t seed, std::uint64_t run, std::uint64_t index, Kind kind,
                    std::uint64_t* rejections = nullptr) noexcept;

/// Runs both algorithms and the oracle on one input (binary32 inputs are
/// embedded exactly in `input`).
Sample evaluate_sample(const Herm2<double>& input, Format format, Kind kind, std::uint64_t index = 0);

/// Statistics of run `run` alone.
RunStats run_one(const RunConfig& cfg, int run);

/// All runs in order; `on_run` is called after each run completes.
std::vector<RunStats> run_experiment(const RunConfig& cfg,
                                     const std::function<void(int, const RunStats&)>& on_run = {});

struct Verdict {
  std::uint64_t bound_violations = 0;
  std::uint64_t delta_violations = 0;
  /// compare mode: 1 when max|delta_J| >= max|delta_L|.
  std::uint64_t comparison_failures = 0;
  [[nodiscard]] bool ok() const { return bound_violations + delta_violations + comparison_failures == 0; }
};

Verdict judge(const RunStats& stats, Mode mode);

void write_stats_header(std::ostream& os);
void write_stats_row(std::ostream& os, int run, const RunStats& stats);

void write_witness_header(std::ostream& os);
void write_witness_rows(std::ostream& os, int run, const RunStats& stats, Format format, Kind kind);

/// Prints every intermediate of both algorithms and the oracle for one
/// input, with per-stage relative errors in units of eps.
void print_trace(std::ostream& os, const Herm2<double>& input, Format format, Kind kind);

/// Re-evaluates the inputs listed in a witness CSV. Prints a trace per row
/// to `trace` when `verbose`, one summary line otherwise, and a stats row
/// over all rows to `csv`. Returns 0 when no replayed qualifying input
/// violates the bounds, 1 if one does, 2 on a malformed file (with a
/// diagnostic in `error`).
int replay(std::istream& in, std::ostream& trace, std::ostream& csv, bool verbose, std::string& error);

}  // namespace acrot
