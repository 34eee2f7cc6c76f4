// Copyright 2026 The acrot Authors.
// SPDX-License-Identifier: Apache-2.0

#include "acrot/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "acrot/laev2.hpp"
#include "acrot/oracle.hpp"
#include "acrot/philox.hpp"

namespace acrot {

std::string_view to_string(Format f) { return f == Format::f32 ? "f32" : "f64"; }
std::string_view to_string(Kind k) { return k == Kind::complex ? "complex" : "real"; }
std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::compare:
      return "compare";
    case Mode::check_bounds:
      return "check-bounds";
    case Mode::single:
      return "single";
  }
  return "?";
}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "f32") return Format::f32;
  if (s == "f64") return Format::f64;
  return std::nullopt;
}

std::optional<Kind> parse_kind(std::string_view s) {
  if (s == "complex") return Kind::complex;
  if (s == "real") return Kind::real;
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "compare") return Mode::compare;
  if (s == "check-bounds") return Mode::check_bounds;
  if (s == "single") return Mode::single;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Matrix generation.
// ---------------------------------------------------------------------------

namespace {

template <Binary F>
F draw_entry(PhiloxStream& rng, std::uint64_t* rejections) noexcept {
  for (;;) {
    typename FormatTraits<F>::Bits bits;
    if constexpr (sizeof(F) == 4) {
      bits = rng.next32();
    } else {
      bits = rng.next64();
    }
    const F x = from_bits<F>(bits);
    const F ax = abs_value(x);  // false for NaN
    if (ax >= smallest_normal<F> && ax <= largest<F> / 4) return x;
    if (rejections != nullptr) ++*rejections;
  }
}

}  // namespace

template <Binary F>
Herm2<F> gen_matrix(std::uint64_t seed, std::uint64_t run, std::uint64_t index, Kind kind,
                    std::uint64_t* rejections) noexcept {
  PhiloxStream rng(seed, static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                   static_cast<std::uint32_t>(run));
  Herm2<F> a;
  a.a11 = draw_entry<F>(rng, rejections);
  a.a22 = draw_entry<F>(rng, rejections);
  a.re_a21 = draw_entry<F>(rng, rejections);
  a.im_a21 = kind == Kind::complex ? draw_entry<F>(rng, rejections) : F(0);
  return a;
}

template Herm2<float> gen_matrix<float>(std::uint64_t, std::uint64_t, std::uint64_t, Kind, std::uint64_t*) noexcept;
template Herm2<double> gen_matrix<double>(std::uint64_t, std::uint64_t, std::uint64_t, Kind,
                                          std::uint64_t*) noexcept;

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

namespace {

template <Binary F>
Herm2<F> narrow(const Herm2<double>& a) {
  return {static_cast<F>(a.a11), static_cast<F>(a.a22), static_cast<F>(a.re_a21), static_cast<F>(a.im_a21)};
}

template <Binary F>
Herm2<double> widen(const Herm2<F>& a) {
  return {a.a11, a.a22, a.re_a21, a.im_a21};
}

template <Binary F>
struct Computed {
  Evd2Result<F> j;
  Intermediates<F> trace;
  Laev2Out<F> l;
};

template <Binary F>
Computed<F> compute(const Herm2<F>& a, Kind kind) {
  Computed<F> c;
  if (kind == Kind::complex) {
    c.j = jaev2(a, false, &c.trace);
    c.l = laev2(a);
  } else {
    c.j = jasv2(a.a11, a.a22, a.re_a21, false, &c.trace);
    c.l = laev2(a.a11, a.re_a21, a.a22);
  }
  return c;
}

template <Binary F>
Sample evaluate(const Herm2<F>& a, Kind kind, std::uint64_t index) {
  const Computed<F> c = compute(a, kind);
  const OracleEvd o = oracle_evd2(widen(a));
  Sample s;
  s.index = index;
  s.input = widen(a);
  s.qualifies = c.trace.qualifies();
  s.beta = c.trace.beta;
  s.delta_j = delta_det(c.j.rot);
  s.delta_l = delta_det(laev2_to_rot(c.l));
  s.rho[kRhoCos] = rho(o.cos_phi, c.j.rot.cos_phi);
  s.rho[kRhoRe] = rho(o.cos_alpha_sin_phi, c.j.rot.cos_alpha_sin_phi);
  s.rho[kRhoIm] = rho(o.sin_alpha_sin_phi, c.j.rot.sin_alpha_sin_phi);
  return s;
}

template <Binary F>
RunStats run_range(const RunConfig& cfg, int run, std::uint64_t begin, std::uint64_t end) {
  RunStats stats;
  for (std::uint64_t k = begin; k < end; ++k) {
    const Herm2<F> a = gen_matrix<F>(cfg.seed, static_cast<std::uint64_t>(run), k, cfg.kind);
    accumulate(stats, evaluate(a, cfg.kind, k));
  }
  return stats;
}

constexpr std::uint64_t kChunk = std::uint64_t{1} << 14;

}  // namespace

Sample evaluate_sample(const Herm2<double>& input, Format format, Kind kind, std::uint64_t index) {
  if (format == Format::f32) return evaluate(narrow<float>(input), kind, index);
  return evaluate(input, kind, index);
}

RunStats run_one(const RunConfig& cfg, int run) {
  const std::uint64_t n_chunks = (cfg.count + kChunk - 1) / kChunk;
  std::vector<RunStats> partial(n_chunks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t c = next++; c < n_chunks; c = next++) {
      const std::uint64_t begin = c * kChunk;
      const std::uint64_t end = std::min(cfg.count, begin + kChunk);
      partial[c] = cfg.format == Format::f32 ? run_range<float>(cfg, run, begin, end)
                                             : run_range<double>(cfg, run, begin, end);
    }
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  RunStats total;
  for (const RunStats& p : partial) total = merge(total, p);
  return total;
}

std::vector<RunStats> run_experiment(const RunConfig& cfg, const std::function<void(int, const RunStats&)>& on_run) {
  std::vector<RunStats> out;
  out.reserve(static_cast<std::size_t>(std::max(cfg.runs, 0)));
  for (int r = 0; r < cfg.runs; ++r) {
    out.push_back(run_one(cfg, r));
    if (on_run) on_run(r, out.back());
  }
  return out;
}

Verdict judge(const RunStats& stats, Mode mode) {
  Verdict v;
  v.bound_violations = stats.n_bound_violations;
  v.delta_violations = stats.n_delta_violations;
  if (mode == Mode::compare && !(max_abs_delta(stats, true) < max_abs_delta(stats, false))) {
    v.comparison_failures = 1;
  }
  return v;
}

// ---------------------------------------------------------------------------
// CSV.
// ---------------------------------------------------------------------------

namespace {

std::string fmt_value(const Extreme& e) {
  if (!e.set) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", e.value.approx());
  return buf;
}

std::string hex(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

struct NamedExtreme {
  const char* name;
  const Extreme* e;
};

std::vector<NamedExtreme> extremes(const RunStats& s) {
  return {{"delta_min_J", &s.delta_min_j},     {"delta_max_J", &s.delta_max_j},
          {"delta_min_L", &s.delta_min_l},     {"delta_max_L", &s.delta_max_l},
          {"rho_min_cos", &s.rho_min[kRhoCos]}, {"rho_max_cos", &s.rho_max[kRhoCos]},
          {"rho_min_re", &s.rho_min[kRhoRe]},   {"rho_max_re", &s.rho_max[kRhoRe]},
          {"rho_min_im", &s.rho_min[kRhoIm]},   {"rho_max_im", &s.rho_max[kRhoIm]}};
}

}  // namespace

void write_stats_header(std::ostream& os) {
  os << "run_index,delta_min_J,delta_max_J,delta_min_L,delta_max_L,rho_min_cos,rho_max_cos,"
        "rho_min_re,rho_max_re,rho_min_im,rho_max_im,n_total,n_qualifying,n_inf_rho\n";
}

void write_stats_row(std::ostream& os, int run, const RunStats& stats) {
  os << run;
  for (const NamedExtreme& e : extremes(stats)) os << ',' << fmt_value(*e.e);
  os << ',' << stats.n_total << ',' << stats.n_qualifying << ',' << stats.n_inf_rho << '\n';
}

void write_witness_header(std::ostream& os) {
  os << "run_index,statistic,format,kind,index,a11,a22,re_a21,im_a21,value\n";
}

void write_witness_rows(std::ostream& os, int run, const RunStats& stats, Format format, Kind kind) {
  for (const NamedExtreme& e : extremes(stats)) {
    if (!e.e->set) continue;
    const Herm2<double>& w = e.e->witness;
    os << run << ',' << e.name << ',' << to_string(format) << ',' << to_string(kind) << ',' << e.e->index << ','
       << hex(w.a11) << ',' << hex(w.a22) << ',' << hex(w.re_a21) << ',' << hex(w.im_a21) << ','
       << fmt_value(*e.e) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Trace and replay.
// ---------------------------------------------------------------------------

namespace {

std::string fmt_rel(const RelErr& r) {
  switch (r.flavor) {
    case RelErr::Flavor::plus_inf:
      return "+inf";
    case RelErr::Flavor::minus_inf:
      return "-inf";
    case RelErr::Flavor::finite:
      break;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%+.9f", r.approx());
  return buf;
}

template <Binary F>
void trace_line(std::ostream& os, const char* name, F computed, const XD* exact) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-18s %-24s %-24.17g", name, hex(static_cast<double>(computed)).c_str(),
                static_cast<double>(computed));
  os << buf;
  if (exact != nullptr) {
    std::snprintf(buf, sizeof buf, " exact %-24.17g rel %s", exact->approx(),
                  fmt_rel(rho(*exact, computed)).c_str());
    os << buf;
  }
  os << '\n';
}

template <Binary F>
void print_trace_impl(std::ostream& os, const Herm2<F>& a, Kind kind) {
  const Computed<F> c = compute(a, kind);
  const OracleEvd o = oracle_evd2(widen(a));
  const Intermediates<F>& t = c.trace;

  // The oracle runs in the binary64 scaling; intermediates that depend on
  // the scale factor are shown without a reference.
  os << "  zeta " << t.zeta << "  beta " << t.beta << "  qualifies " << (t.qualifies() ? "yes" : "no");
  if (t.scale_inexact_underflow) os << "  [scale underflow]";
  if (t.trace_underflow) os << "  [trace underflow]";
  if (t.polar_danger) os << "  [polar]";
  os << '\n';
  trace_line<F>(os, "a11'", t.a_scaled.a11, nullptr);
  trace_line<F>(os, "a22'", t.a_scaled.a22, nullptr);
  trace_line<F>(os, "re a21'", t.a_scaled.re_a21, nullptr);
  trace_line<F>(os, "im a21'", t.a_scaled.im_a21, nullptr);
  trace_line<F>(os, "|a21'|", t.abs_a21, nullptr);
  trace_line<F>(os, "cos(alpha)", t.cos_alpha, &o.cos_alpha);
  trace_line<F>(os, "sin(alpha)", t.sin_alpha, &o.sin_alpha);
  trace_line<F>(os, "2|a21'|", t.o_twice, nullptr);
  trace_line<F>(os, "a11'-a22'", t.a_diff, nullptr);
  trace_line<F>(os, "quotient", t.quotient, nullptr);
  trace_line<F>(os, "tan(2phi)", t.tan_2phi, &o.tan_2phi);
  trace_line<F>(os, "tan(phi)", t.tan_phi, &o.tan_phi);
  trace_line<F>(os, "sec^2(phi)", t.sec2_phi, &o.sec2_phi);
  trace_line<F>(os, "cos(phi)", t.cos_phi, &o.cos_phi);
  trace_line<F>(os, "sin(phi)", t.sin_phi, &o.sin_phi);
  trace_line<F>(os, "cos(a)sin(phi)", c.j.rot.cos_alpha_sin_phi, &o.cos_alpha_sin_phi);
  trace_line<F>(os, "sin(a)sin(phi)", c.j.rot.sin_alpha_sin_phi, &o.sin_alpha_sin_phi);
  trace_line<F>(os, "lambda1'", c.j.lambda1_scaled, nullptr);
  trace_line<F>(os, "lambda2'", c.j.lambda2_scaled, nullptr);
  os << "  lapack: rt1 " << hex(static_cast<double>(c.l.rt1)) << "  rt2 " << hex(static_cast<double>(c.l.rt2))
     << "  cs1 " << hex(static_cast<double>(c.l.cs1)) << "  sn1 (" << hex(static_cast<double>(c.l.sn1.real()))
     << ", " << hex(static_cast<double>(c.l.sn1.imag())) << ")\n";
  os << "  delta_J " << fmt_rel(delta_det(c.j.rot)) << "  delta_L " << fmt_rel(delta_det(laev2_to_rot(c.l)))
     << '\n';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && is_finite(out);
}

}  // namespace

void print_trace(std::ostream& os, const Herm2<double>& input, Format format, Kind kind) {
  if (format == Format::f32) {
    print_trace_impl(os, narrow<float>(input), kind);
  } else {
    print_trace_impl(os, input, kind);
  }
}

int replay(std::istream& in, std::ostream& trace, std::ostream& csv, bool verbose, std::string& error) {
  std::string line;
  if (!std::getline(in, line)) {
    error = "empty witness file";
    return 2;
  }
  const std::vector<std::string> header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"format", "kind", "a11", "a22", "re_a21", "im_a21"}) {
    if (col.find(required) == col.end()) {
      error = std::string("missing column '") + required + "'";
      return 2;
    }
  }

  RunStats stats;
  std::uint64_t row = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != header.size()) {
      error = "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields, got " +
              std::to_string(f.size());
      return 2;
    }
    const auto format = parse_format(f[col["format"]]);
    const auto kind = parse_kind(f[col["kind"]]);
    if (!format || !kind) {
      error = "line " + std::to_string(line_no) + ": bad format or kind";
      return 2;
    }
    Herm2<double> a;
    if (!parse_double(f[col["a11"]], a.a11) || !parse_double(f[col["a22"]], a.a22) ||
        !parse_double(f[col["re_a21"]], a.re_a21) || !parse_double(f[col["im_a21"]], a.im_a21)) {
      error = "line " + std::to_string(line_no) + ": entries must be finite numbers";
      return 2;
    }
    const Herm2<double> rt = widen(narrow<float>(a));
    if (*format == Format::f32 &&
        (rt.a11 != a.a11 || rt.a22 != a.a22 || rt.re_a21 != a.re_a21 || rt.im_a21 != a.im_a21)) {
      error = "line " + std::to_string(line_no) + ": entry not representable in binary32";
      return 2;
    }
    if (*kind == Kind::real && a.im_a21 != 0.0) {
      error = "line " + std::to_string(line_no) + ": real input with nonzero im_a21";
      return 2;
    }

    const Sample s = evaluate_sample(a, *format, *kind, row);
    accumulate(stats, s);
    trace << "input " << row << " (" << to_string(*format) << ' ' << to_string(*kind) << "): " << hex(a.a11) << ' '
          << hex(a.a22) << ' ' << hex(a.re_a21) << ' ' << hex(a.im_a21) << '\n';
    if (verbose) print_trace(trace, a, *format, *kind);
    trace << "  delta_J " << fmt_rel(s.delta_j) << "  delta_L " << fmt_rel(s.delta_l) << "  rho cos "
          << fmt_rel(s.rho[kRhoCos]) << "  re " << fmt_rel(s.rho[kRhoRe]) << "  im " << fmt_rel(s.rho[kRhoIm])
          << (s.qualifies ? "" : "  (non-qualifying)") << '\n';
    ++row;
  }
  write_stats_header(csv);
  write_stats_row(csv, 0, stats);
  return stats.n_bound_violations + stats.n_delta_violations == 0 ? 0 : 1;
}

}  // namespace acrot
