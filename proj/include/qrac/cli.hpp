// Copyright 2026 The qrac Authors
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

#pragma once

// Command-line front end. parse_args turns argv into a validated
// CommandPlan; execute runs it and writes a CSV or JSON document.
//
// Exit codes: 0 success, 1 usage or file-schema error, 2 numeric or domain
// failure, 3 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qrac/analysis.hpp"
#include "qrac/channels.hpp"
#include "qrac/errors.hpp"
#include "qrac/protocol.hpp"

namespace qrac::cli {

inline constexpr const char *kToolName = "qrac";
inline constexpr const char *kToolVersion = "0.1.0";

enum class ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kIo = 3 };

enum class Subcommand { kWitness, kSweep, kCritical, kMonteCarlo, kIngest, kClassicalBound };

inline const char *to_string(Subcommand s) {
  switch (s) {
    case Subcommand::kWitness: return "witness";
    case Subcommand::kSweep: return "sweep";
    case Subcommand::kCritical: return "critical";
    case Subcommand::kMonteCarlo: return "montecarlo";
    case Subcommand::kIngest: return "ingest";
    case Subcommand::kClassicalBound: return "classical-bound";
  }
  return "?";
}

enum class OutputFormat { kCsv, kJson };

// Fully validated invocation. Angles are stored in radians.
struct CommandPlan {
  Subcommand subcommand = Subcommand::kWitness;
  OutputFormat format = OutputFormat::kCsv;
  std::string output;  // empty = standard output
  std::string help_text;  // non-empty: print and exit 0

  double gamma = 0.0;
  double f_a = 0.0;
  double f_b = 0.0;
  std::vector<double> gammas;  // sweep / montecarlo grid
  double gamma_start = 0.0;
  double gamma_end = 1.0;
  int steps = 5;
  double tol = 1e-6;
  ErrorModelConfig error_model;
  std::string counts_path;
  std::string dump_samples_path;
  unsigned threads = 0;  // 0 = hardware concurrency
};

namespace detail {

inline void require_range(double v, double lo, double hi, const std::string &flag) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << flag << ": value " << v << " outside [" << lo << ", " << hi << "]";
    throw UsageError(os.str());
  }
}

inline std::vector<double> parse_percentiles(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size()) {
      throw UsageError("--percentiles: cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.size() != 2) throw UsageError("--percentiles: expected two values LO,HI");
  require_range(out[0], 0.0, 100.0, "--percentiles");
  require_range(out[1], out[0], 100.0, "--percentiles");
  return out;
}

inline unsigned threads_from_env() {
  const char *env = std::getenv("QRAC_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view s(env);
  unsigned v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v == 0) {
    throw UsageError("QRAC_THREADS: expected a positive integer, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

inline CommandPlan parse_args(const std::vector<std::string> &args) {
  CLI::App app{"Noise-resilient QRAC simulator: witness curves, thresholds, error bands, count ingestion",
               kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string output;
  bool radians = false;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", output, "Write output to a file instead of standard output");
  app.add_flag("--radians", radians, "Interpret angle flags as radians instead of degrees");

  double gamma = 0.0, f_a = 0.0, f_b = 0.0;
  std::optional<double> theta1;
  double gamma_start = 0.0, gamma_end = 1.0;
  int steps = 5;
  double tol = 1e-6;
  std::int64_t samples = 10000;
  std::uint64_t seed = 42;
  std::string percentiles = "5,95";
  double prep_hw = 1.0, meas_hw = 1.0, filter_rel_hw = 0.01;
  std::string counts_path, dump_path;

  auto add_filters = [&](CLI::App *sub) {
    sub->add_option("--fa", f_a, "Alice filter strength f_a in [0, 1]");
    sub->add_option("--fb", f_b, "Bob filter strength f_b in [0, 1]");
  };
  auto add_grid = [&](CLI::App *sub) {
    sub->add_option("--gamma-start", gamma_start, "First damping value");
    sub->add_option("--gamma-end", gamma_end, "Last damping value");
    sub->add_option("--steps", steps, "Number of grid points (inclusive of both ends)");
  };

  CLI::App *witness_cmd = app.add_subcommand("witness", "Witness and success probability at one point");
  auto *gamma_opt = witness_cmd->add_option("--gamma", gamma, "Damping parameter gamma in [0, 1]");
  witness_cmd->add_option("--theta1", theta1, "Sagnac waveplate angle setting gamma = sin^2(2 theta1)")
      ->excludes(gamma_opt);
  add_filters(witness_cmd);

  CLI::App *sweep_cmd = app.add_subcommand("sweep", "Witness curve over a gamma grid");
  add_grid(sweep_cmd);
  add_filters(sweep_cmd);

  CLI::App *critical_cmd = app.add_subcommand("critical", "Solve for the critical damping gamma_c");
  add_filters(critical_cmd);
  critical_cmd->add_option("--tol", tol, "Bisection tolerance on gamma");

  CLI::App *mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo error bands over a gamma grid");
  add_grid(mc_cmd);
  add_filters(mc_cmd);
  mc_cmd->add_option("--samples", samples, "Samples per grid point");
  mc_cmd->add_option("--seed", seed, "Random seed");
  mc_cmd->add_option("--percentiles", percentiles, "Band percentiles LO,HI");
  mc_cmd->add_option("--prep-halfwidth", prep_hw, "Preparation waveplate mismatch halfwidth (deg)");
  mc_cmd->add_option("--meas-halfwidth", meas_hw, "Measurement waveplate mismatch halfwidth (deg)");
  mc_cmd->add_option("--filter-rel-halfwidth", filter_rel_hw, "Relative filter characterization error");
  mc_cmd->add_option("--dump-samples", dump_path, "Also write every sampled witness to this CSV file");

  CLI::App *ingest_cmd = app.add_subcommand("ingest", "Estimate the witness from coincidence counts");
  ingest_cmd->add_option("counts,--counts", counts_path, "Counts CSV: a0,a1,y,cc0,cc1[,labels]")
      ->required();

  CLI::App *classical_cmd =
      app.add_subcommand("classical-bound", "Exhaustive deterministic classical strategy bound");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    CommandPlan plan;
    plan.help_text = app.help();
    return plan;
  } catch (const CLI::CallForVersion &) {
    CommandPlan plan;
    plan.help_text = std::string(kToolName) + " " + kToolVersion + "\n";
    return plan;
  } catch (const CLI::ParseError &e) {
    throw UsageError(e.what());
  }

  CommandPlan plan;
  plan.format = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  plan.output = output;
  plan.threads = detail::threads_from_env();
  const double to_rad = radians ? 1.0 : std::numbers::pi / 180.0;

  detail::require_range(f_a, 0.0, 1.0, "--fa");
  detail::require_range(f_b, 0.0, 1.0, "--fb");
  plan.f_a = f_a;
  plan.f_b = f_b;

  auto grid = [&] {
    detail::require_range(gamma_start, 0.0, 1.0, "--gamma-start");
    detail::require_range(gamma_end, 0.0, 1.0, "--gamma-end");
    if (steps < 1) throw UsageError("--steps: must be >= 1");
    plan.gamma_start = gamma_start;
    plan.gamma_end = gamma_end;
    plan.steps = steps;
    plan.gammas = linear_grid(gamma_start, gamma_end, steps);
  };

  if (*witness_cmd) {
    plan.subcommand = Subcommand::kWitness;
    if (theta1) {
      const double t = *theta1 * to_rad;
      detail::require_range(t, 0.0, std::numbers::pi / 4.0 + tol::kAngleSlack, "--theta1");
      plan.gamma = theta1_to_gamma({t});
    } else {
      detail::require_range(gamma, 0.0, 1.0, "--gamma");
      plan.gamma = gamma;
    }
  } else if (*sweep_cmd) {
    plan.subcommand = Subcommand::kSweep;
    grid();
  } else if (*critical_cmd) {
    plan.subcommand = Subcommand::kCritical;
    if (!(tol > 0.0 && tol < 1.0)) throw UsageError("--tol: must lie in (0, 1)");
    plan.tol = tol;
  } else if (*mc_cmd) {
    plan.subcommand = Subcommand::kMonteCarlo;
    grid();
    if (samples < 1) throw UsageError("--samples: must be >= 1");
    if (!(prep_hw >= 0.0 && std::isfinite(prep_hw))) throw UsageError("--prep-halfwidth: must be >= 0");
    if (!(meas_hw >= 0.0 && std::isfinite(meas_hw))) throw UsageError("--meas-halfwidth: must be >= 0");
    detail::require_range(filter_rel_hw, 0.0, 1.0, "--filter-rel-halfwidth");
    const auto pct = detail::parse_percentiles(percentiles);
    plan.error_model.samples = samples;
    plan.error_model.seed = seed;
    plan.error_model.hwp_prep_halfwidth = prep_hw * to_rad;
    plan.error_model.hwp_meas_halfwidth = meas_hw * to_rad;
    plan.error_model.filter_rel_halfwidth = filter_rel_hw;
    plan.error_model.lo_percentile = pct[0];
    plan.error_model.hi_percentile = pct[1];
    plan.dump_samples_path = dump_path;
  } else if (*ingest_cmd) {
    plan.subcommand = Subcommand::kIngest;
    plan.counts_path = counts_path;
  } else if (*classical_cmd) {
    plan.subcommand = Subcommand::kClassicalBound;
  }
  return plan;
}

// Parses the counts file format. `source` names the input in error messages.
inline std::vector<CoincidenceRecord> parse_counts_csv(std::istream &in, const std::string &source) {
  auto split = [](const std::string &line) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) {
      const auto b = c.find_first_not_of(" \t");
      const auto e = c.find_last_not_of(" \t");
      cols.push_back(b == std::string::npos ? std::string() : c.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    return cols;
  };
  auto fail = [&](int line_no, const std::string &what) -> SchemaError {
    return SchemaError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    header = split(line);
    break;
  }
  const std::vector<std::string> kBase = {"a0", "a1", "y", "cc0", "cc1"};
  const std::vector<std::string> kLabelled = {"a0", "a1", "y", "cc0", "cc1", "gamma_label", "fa_label", "fb_label"};
  if (header.empty()) throw fail(std::max(line_no, 1), "missing header a0,a1,y,cc0,cc1");
  if (header != kBase && header != kLabelled) {
    throw fail(line_no, "header must be a0,a1,y,cc0,cc1[,gamma_label,fa_label,fb_label]");
  }

  std::vector<CoincidenceRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cols = split(line);
    if (cols.size() != header.size()) {
      throw fail(line_no, "expected " + std::to_string(header.size()) + " columns, found " +
                              std::to_string(cols.size()));
    }
    auto parse_uint = [&](const std::string &s, const std::string &name) {
      std::uint64_t v = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
        throw fail(line_no, name + " must be a nonnegative integer, got '" + s + "'");
      }
      return v;
    };
    auto parse_bit = [&](const std::string &s, const std::string &name) {
      const std::uint64_t v = parse_uint(s, name);
      if (v > 1) throw fail(line_no, name + " must be 0 or 1, got '" + s + "'");
      return static_cast<int>(v);
    };
    auto parse_label = [&](const std::string &s, const std::string &name) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      double v = 0.0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw fail(line_no, name + " must be a real number, got '" + s + "'");
      }
      return v;
    };
    CoincidenceRecord r;
    r.a0 = parse_bit(cols[0], "a0");
    r.a1 = parse_bit(cols[1], "a1");
    r.y = parse_bit(cols[2], "y");
    r.cc0 = parse_uint(cols[3], "cc0");
    r.cc1 = parse_uint(cols[4], "cc1");
    if (cols.size() == kLabelled.size()) {
      r.gamma_label = parse_label(cols[5], "gamma_label");
      r.f_a_label = parse_label(cols[6], "fa_label");
      r.f_b_label = parse_label(cols[7], "fb_label");
    }
    records.push_back(r);
  }
  return records;
}

inline std::vector<CoincidenceRecord> read_counts_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open counts file '" + path + "'");
  return parse_counts_csv(in, path);
}

// Fixed-point with nine decimals; values that round to zero print as
// positive zero.
inline std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::abs(v) < 5e-10) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

namespace detail {

using Json = nlohmann::ordered_json;

inline Json metadata(const CommandPlan &plan) {
  Json params = Json::object();
  switch (plan.subcommand) {
    case Subcommand::kWitness:
      params["gamma"] = plan.gamma;
      params["f_a"] = plan.f_a;
      params["f_b"] = plan.f_b;
      break;
    case Subcommand::kSweep:
      params["gamma_start"] = plan.gamma_start;
      params["gamma_end"] = plan.gamma_end;
      params["steps"] = plan.steps;
      params["f_a"] = plan.f_a;
      params["f_b"] = plan.f_b;
      break;
    case Subcommand::kCritical:
      params["f_a"] = plan.f_a;
      params["f_b"] = plan.f_b;
      params["tol"] = plan.tol;
      break;
    case Subcommand::kMonteCarlo:
      params["gamma_start"] = plan.gamma_start;
      params["gamma_end"] = plan.gamma_end;
      params["steps"] = plan.steps;
      params["f_a"] = plan.f_a;
      params["f_b"] = plan.f_b;
      params["samples"] = plan.error_model.samples;
      params["prep_halfwidth_rad"] = plan.error_model.hwp_prep_halfwidth;
      params["meas_halfwidth_rad"] = plan.error_model.hwp_meas_halfwidth;
      params["filter_rel_halfwidth"] = plan.error_model.filter_rel_halfwidth;
      params["percentiles"] = {plan.error_model.lo_percentile, plan.error_model.hi_percentile};
      break;
    case Subcommand::kIngest:
      params["counts"] = plan.counts_path;
      break;
    case Subcommand::kClassicalBound:
      break;
  }
  return Json{{"tool", kToolName},
              {"version", kToolVersion},
              {"subcommand", to_string(plan.subcommand)},
              {"seed", plan.error_model.seed},
              {"parameters", params}};
}

inline Json sweep_json(const SweepRecord &r) {
  Json j{{"gamma", r.gamma}, {"f_a", r.f_a},   {"f_b", r.f_b},
         {"W", r.witness},   {"P_b", r.asp}, {"acceptance_min", r.acceptance_min}};
  if (!r.ok()) j["error"] = r.error;
  return j;
}

inline void sweep_csv(std::ostream &os, const std::vector<SweepRecord> &records) {
  os << "gamma,f_a,f_b,W,P_b,acceptance_min\n";
  for (const auto &r : records) {
    os << csv_real(r.gamma) << ',' << csv_real(r.f_a) << ',' << csv_real(r.f_b) << ',' << csv_real(r.witness)
       << ',' << csv_real(r.asp) << ',' << csv_real(r.acceptance_min) << '\n';
  }
}

inline void write_file(const std::string &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

// Builds the output document for a plan; throws on any failure.
inline std::string render(const CommandPlan &plan, std::ostream &err) {
  std::ostringstream os;
  const bool json = plan.format == OutputFormat::kJson;
  Json doc{{"metadata", metadata(plan)}};

  switch (plan.subcommand) {
    case Subcommand::kWitness: {
      SweepRecord r = sweep_point(plan.gamma, plan.f_a, plan.f_b);
      if (!r.ok()) throw FilterAnnihilatesState(r.error);
      if (json) {
        doc["records"] = Json::array({sweep_json(r)});
      } else {
        sweep_csv(os, {r});
      }
      break;
    }
    case Subcommand::kSweep: {
      const auto records = sweep(plan.gammas, plan.f_a, plan.f_b);
      for (const auto &r : records) {
        if (!r.ok()) err << "warning: gamma=" << r.gamma << ": " << r.error << '\n';
      }
      if (json) {
        doc["records"] = Json::array();
        for (const auto &r : records) doc["records"].push_back(sweep_json(r));
      } else {
        sweep_csv(os, records);
      }
      break;
    }
    case Subcommand::kCritical: {
      const double gc = critical_gamma(plan.f_a, plan.f_b, plan.tol);
      const double w = simulated_witness(gc, plan.f_a, plan.f_b);
      if (json) {
        doc["f_a"] = plan.f_a;
        doc["f_b"] = plan.f_b;
        doc["gamma_c"] = gc;
        doc["W_at_gamma_c"] = w;
      } else {
        os << "f_a,f_b,gamma_c,W_at_gamma_c\n"
           << csv_real(plan.f_a) << ',' << csv_real(plan.f_b) << ',' << csv_real(gc) << ',' << csv_real(w)
           << '\n';
      }
      break;
    }
    case Subcommand::kMonteCarlo: {
      const MonteCarloRun run = monte_carlo_run(plan.gammas, plan.f_a, plan.f_b, plan.error_model, plan.threads);
      if (!plan.dump_samples_path.empty()) {
        std::ostringstream ds;
        ds << "gamma_index,gamma,sample,W\n";
        for (std::size_t gi = 0; gi < run.samples.size(); ++gi) {
          for (std::size_t si = 0; si < run.samples[gi].size(); ++si) {
            ds << gi << ',' << csv_real(plan.gammas[gi]) << ',' << si << ',' << csv_real(run.samples[gi][si])
               << '\n';
          }
        }
        write_file(plan.dump_samples_path, ds.str());
      }
      if (json) {
        doc["bands"] = Json::array();
        for (const auto &b : run.bands) {
          doc["bands"].push_back(Json{{"gamma", b.gamma},
                                      {"nominal", b.nominal},
                                      {"lo", b.lo},
                                      {"hi", b.hi},
                                      {"min", b.min},
                                      {"max", b.max},
                                      {"discards", b.discards}});
        }
      } else {
        os << "gamma,nominal,lo,hi,min,max,discards\n";
        for (const auto &b : run.bands) {
          os << csv_real(b.gamma) << ',' << csv_real(b.nominal) << ',' << csv_real(b.lo) << ','
             << csv_real(b.hi) << ',' << csv_real(b.min) << ',' << csv_real(b.max) << ',' << b.discards
             << '\n';
        }
      }
      break;
    }
    case Subcommand::kIngest: {
      const auto records = read_counts_csv(plan.counts_path);
      const IngestResult res = ingest_counts(records);
      if (json) {
        doc["cells"] = Json::array();
        for (const auto &r : records) {
          doc["cells"].push_back(Json{{"a0", r.a0},
                                      {"a1", r.a1},
                                      {"y", r.y},
                                      {"cc0", r.cc0},
                                      {"cc1", r.cc1},
                                      {"E", res.table.at(r.a0, r.a1, r.y)},
                                      {"sigma_E", *res.table.sigma(r.a0, r.a1, r.y)}});
        }
        doc["witness"] = res.witness;
        doc["witness_sigma"] = res.witness_sigma;
        doc["asp"] = res.asp;
        doc["asp_sigma"] = res.asp_sigma;
      } else {
        os << "quantity,value,sigma\n";
        for (int a0 = 0; a0 < 2; ++a0) {
          for (int a1 = 0; a1 < 2; ++a1) {
            for (int y = 0; y < 2; ++y) {
              os << 'E' << a0 << a1 << '_' << y << ',' << csv_real(res.table.at(a0, a1, y)) << ','
                 << csv_real(*res.table.sigma(a0, a1, y)) << '\n';
            }
          }
        }
        os << "W," << csv_real(res.witness) << ',' << csv_real(res.witness_sigma) << '\n';
        os << "P_b," << csv_real(res.asp) << ',' << csv_real(res.asp_sigma) << '\n';
      }
      break;
    }
    case Subcommand::kClassicalBound: {
      const ClassicalBound cb = classical_bruteforce();
      if (json) {
        doc["max_witness"] = cb.max_witness;
        doc["max_asp"] = cb.max_asp;
        doc["strategies"] = cb.strategy_count;
        doc["maximizers"] = Json::array();
        for (const auto &s : cb.maximizers) {
          doc["maximizers"].push_back(Json{{"encoding", s.encoding}, {"decoding", s.decoding}});
        }
      } else {
        os << "max_witness,max_asp,strategies\n"
           << csv_real(cb.max_witness) << ',' << csv_real(cb.max_asp) << ',' << cb.strategy_count << '\n';
      }
      break;
    }
  }
  if (json) os << doc.dump(2) << '\n';
  return os.str();
}

}  // namespace detail

inline int exit_code_for(const Error &e) {
  if (dynamic_cast<const UsageError *>(&e) || dynamic_cast<const SchemaError *>(&e)) {
    return static_cast<int>(ExitCode::kUsage);
  }
  if (dynamic_cast<const IoError *>(&e)) return static_cast<int>(ExitCode::kIo);
  return static_cast<int>(ExitCode::kNumeric);
}

// Runs a plan, writing the document to plan.output or `out`. Errors are
// reported on `err` as "error: <Kind>: <message>".
inline int execute(const CommandPlan &plan, std::ostream &out, std::ostream &err) {
  if (!plan.help_text.empty()) {
    out << plan.help_text;
    return static_cast<int>(ExitCode::kOk);
  }
  try {
    const std::string doc = detail::render(plan, err);
    if (plan.output.empty()) {
      out << doc;
      out.flush();
      if (!out) throw IoError("failed writing standard output");
    } else {
      detail::write_file(plan.output, doc);
    }
    return static_cast<int>(ExitCode::kOk);
  } catch (const Error &e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kNumeric);
  }
}

// parse_args + execute with usage errors mapped to exit code 1.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CommandPlan plan;
  try {
    plan = parse_args(args);
  } catch (const Error &e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    err << "run '" << kToolName << " --help' for usage\n";
    return exit_code_for(e);
  }
  return execute(plan, out, err);
}

}  // namespace qrac::cli
