#include "gcf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include "gcf/config.hpp"
#include "gcf/error.hpp"

namespace gcf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::InvalidConfig, "cannot create output directory " + dir.string() + ": " + ec.message());
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void finish_meta(CommandResult& r, const Stopwatch& clock) {
  r.artifacts.meta["exit_code"] = r.exit_code;
  r.artifacts.meta["message"] = r.message;
  r.artifacts.meta["wall_time_s"] = clock.seconds();
  r.artifacts.meta_file = r.artifacts.out_dir / "meta.json";
  write_atomic(r.artifacts.meta_file, r.artifacts.meta.dump(2) + "\n");
}


void execute(const FlowConfig& cfg, bool harnack, CommandResult& r);

CommandResult run_command(const json& doc, const fs::path& out_dir, bool harnack, bool enforce) {
  const Stopwatch clock;
  CommandResult r;
  r.artifacts.out_dir = out_dir;
  auto& meta = r.artifacts.meta;
  meta["command"] = harnack ? "harnack" : "run";
  meta["version"] = kVersion;
  meta["config_input"] = doc;
  prepare_dir(out_dir);

  FlowConfig cfg;
  try {
    cfg = parse_config(doc);
    meta["config"] = config_to_json(cfg);
    meta["law"] = law_mapping(cfg.law);
    r.hypotheses_hold = cfg.law.satisfies_harnack_hypotheses(cfg.n);
    if (harnack) meta["hypotheses_hold"] = r.hypotheses_hold;
    if (harnack && enforce && !r.hypotheses_hold) {
      r.exit_code = exit_code::hypothesis;
      std::ostringstream os;
      os << "law " << cfg.law.describe() << " is outside the Harnack hypotheses for n=" << cfg.n
         << " (need a > 0, beta > 0 or a < 0, -1/n < beta < 0)";
      r.message = os.str();
      finish_meta(r, clock);
      return r;
    }
    cfg.validate();
  } catch (const Error& e) {
    r.exit_code = exit_code::config;
    r.message = e.what();
    finish_meta(r, clock);
    return r;
  }

  try {
    execute(cfg, harnack, r);
  } catch (const Error& e) {
    r.exit_code = exit_code::config;
    r.message = e.what();
  }
  finish_meta(r, clock);
  return r;
}

void execute(const FlowConfig& cfg, bool harnack, CommandResult& r) {
  auto& meta = r.artifacts.meta;
  const fs::path& out_dir = r.artifacts.out_dir;
  const FlowTrace trace = run(cfg);
  meta["termination"] = {{"reason", to_string(trace.reason)}, {"message", trace.message}};
  meta["start_time"] = cfg.start_time();
  meta["final_time"] = trace.samples.back().t;
  meta["stored_states"] = trace.samples.size();
  meta["steps"] = trace.steps.size();
  r.artifacts.trace_file = out_dir / "trace.csv";
  write_atomic(r.artifacts.trace_file, trace_csv(trace));
  if (trace.reason != Termination::Completed) {
    r.exit_code = exit_code::non_convex;
    r.message = trace.message;
  }

  if (harnack) {
    try {
      const auto samples = monitor(trace, cfg.law, cfg.t0);
      r.artifacts.harnack_file = out_dir / "harnack.csv";
      write_atomic(r.artifacts.harnack_file, harnack_csv(samples));
      write_atomic(out_dir / "harnack_extra.csv", harnack_extra_csv(samples));
      double min_margin = std::numeric_limits<double>::infinity();
      double max_lhs = -std::numeric_limits<double>::infinity();
      double max_p = 0.0;
      for (const auto& s : samples) {
        min_margin = std::min(min_margin, s.min_margin);
        max_lhs = std::max(max_lhs, s.max_lhs);
        max_p = std::max(max_p, s.max_abs_P);
      }
      if (!samples.empty()) {
        r.min_margin = min_margin;
        r.max_lhs = max_lhs;
        r.max_abs_P = max_p;
      }
      meta["harnack"] = {{"samples", samples.size()},
                         {"t0", cfg.t0},
                         {"min_margin", finite_or_null(r.min_margin)},
                         {"max_lhs", finite_or_null(r.max_lhs)},
                         {"max_abs_P", finite_or_null(r.max_abs_P)}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientTrace) throw;
      if (r.exit_code == exit_code::ok) {
        r.exit_code = exit_code::config;
        r.message = std::string(e.what()) + "; store more states (output.stride or output.interval)";
      }
    }
  }
}

int report_failure(const CommandResult& r, std::ostream& err) {
  if (r.exit_code != exit_code::ok) err << "error: " << r.message << "\n";
  return r.exit_code;
}

unsigned sweep_threads(std::size_t tuples) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GCF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) threads = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(threads, tuples));
}

struct SweepRow {
  json tuple;
  std::string shape;
  CommandResult result;
};

json tuple_config(const json& base, const json& tuple, std::string& shape) {
  if (!tuple.is_object()) throw Error(ErrorKind::InvalidConfig, "each tuple must be an object");
  json cfg = base;
  for (const auto& [key, value] : tuple.items()) {
    if (key != "n" && key != "b" && key != "shape" && key != "initial") {
      throw Error(ErrorKind::InvalidConfig, "unknown tuple key '" + key + "'");
    }
  }
  if (tuple.contains("n")) cfg["n"] = tuple.at("n");
  if (tuple.contains("b")) {
    if (!tuple.at("b").is_number()) throw Error(ErrorKind::InvalidConfig, "tuple b must be a number");
    cfg["speed"] = {{"a", -1.0}, {"beta", -tuple.at("b").get<double>()}};
  }
  const json* shape_value = tuple.contains("shape") ? &tuple.at("shape") : tuple.contains("initial") ? &tuple.at("initial") : nullptr;
  if (shape_value) {
    if (shape_value->is_string()) {
      if (!cfg.contains("initial")) cfg["initial"] = json::object();
      cfg["initial"]["type"] = *shape_value;
      // Modes only make sense for Fourier data.
      if (shape_value->get<std::string>() != "fourier") cfg["initial"].erase("modes");
    } else if (shape_value->is_object()) {
      cfg["initial"] = *shape_value;
    } else {
      throw Error(ErrorKind::InvalidConfig, "tuple shape must be a string or an initial object");
    }
  }
  shape = cfg.contains("initial") && cfg["initial"].contains("type") ? cfg["initial"]["type"].dump() : "\"circle\"";
  shape.erase(std::remove(shape.begin(), shape.end(), '"'), shape.end());
  return cfg;
}

}  // namespace

CommandResult run_flow(const json& config, const fs::path& out_dir) {
  return run_command(config, out_dir, false, false);
}

CommandResult run_harnack(const json& config, const fs::path& out_dir, bool enforce_hypotheses) {
  return run_command(config, out_dir, true, enforce_hypotheses);
}

int cmd_run(const fs::path& config, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const CommandResult r = run_flow(read_json_file(config), out_dir);
    if (r.exit_code == exit_code::ok || r.exit_code == exit_code::non_convex) {
      out << "trace=" << r.artifacts.trace_file.string() << "\n";
    }
    return report_failure(r, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::config;
  }
}

int cmd_harnack(const fs::path& config, const fs::path& out_dir, bool enforce_hypotheses, std::ostream& out,
                std::ostream& err) {
  try {
    const CommandResult r = run_harnack(read_json_file(config), out_dir, enforce_hypotheses);
    if (!r.artifacts.harnack_file.empty()) {
      out << "min_margin=" << format_number(r.min_margin) << "\n";
      out << "max_lhs=" << format_number(r.max_lhs) << "\n";
      out << "max_abs_P=" << format_number(r.max_abs_P) << "\n";
      if (!r.hypotheses_hold) out << "note: law outside the Harnack hypotheses; bound not claimed\n";
    }
    return report_failure(r, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::config;
  }
}

int cmd_verify(const std::string& suite, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) {
    names = {suite};
  } else {
    err << "error: unknown suite '" << suite << "' (oracle, evolution, identity, pexpand, pevol, speedlaw, all)\n";
    return exit_code::config;
  }
  std::vector<IdentityReport> reports;
  for (const auto& name : names) {
    auto part = run_suite(name);
    reports.insert(reports.end(), part.begin(), part.end());
  }
  try {
    prepare_dir(out_dir);
    write_atomic(out_dir / "report.csv", report_csv(reports));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::config;
  }
  const IdentityReport* first_fail = nullptr;
  for (const auto& r : reports) {
    out << (r.pass ? "PASS " : "FAIL ") << r.id << " residual=" << format_number(r.finest_residual())
        << " order=" << format_number(r.order) << (r.degenerate ? " (degenerate)" : "") << "\n";
    if (!r.pass && !first_fail) first_fail = &r;
  }
  if (first_fail) {
    err << "verify failed: " << first_fail->id << (first_fail->note.empty() ? "" : ": " + first_fail->note) << "\n";
    return exit_code::verify_failed;
  }
  return exit_code::ok;
}

int cmd_sweep(const fs::path& config, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = read_json_file(config);
    if (!doc.is_object() || !doc.contains("tuples") || !doc.at("tuples").is_array()) {
      throw Error(ErrorKind::InvalidConfig, "sweep config needs a 'tuples' array");
    }
    if (doc.at("tuples").empty()) throw Error(ErrorKind::InvalidConfig, "sweep has no tuples");
    if (doc.contains("base") && !doc.at("base").is_object()) {
      throw Error(ErrorKind::InvalidConfig, "sweep 'base' must be an object");
    }
    prepare_dir(out_dir);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::config;
  }
  const json base = doc.contains("base") ? doc.at("base") : json::object();
  const json& tuples = doc.at("tuples");
  std::vector<SweepRow> rows(tuples.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.tuple = tuples[i];
      const fs::path dir = out_dir / ("tuple_" + std::to_string(i));
      try {
        row.result = run_harnack(tuple_config(base, tuples[i], row.shape), dir, false);
      } catch (const std::exception& e) {
        row.result.exit_code = exit_code::config;
        row.result.message = e.what();
      }
    }
  };
  const unsigned threads = sweep_threads(rows.size());
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "index,n,b,shape,status,exit_code,min_margin,max_lhs,max_abs_P,message\n";
  int status = exit_code::ok;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    const auto& r = row.result;
    const bool ok = r.exit_code == exit_code::ok;
    if (!ok && status == exit_code::ok) status = r.exit_code;
    csv += std::to_string(i);
    csv += ',' + (row.tuple.is_object() && row.tuple.contains("n") ? row.tuple.at("n").dump() : std::string(""));
    csv += ',' + (row.tuple.is_object() && row.tuple.contains("b") ? row.tuple.at("b").dump() : std::string(""));
    csv += ',' + csv_field(row.shape);
    csv += ok ? ",ok" : ",failed";
    csv += ',' + std::to_string(r.exit_code);
    csv += ',' + format_number(r.min_margin);
    csv += ',' + format_number(r.max_lhs);
    csv += ',' + format_number(r.max_abs_P);
    csv += ',' + csv_field(r.message);
    csv += '\n';
    out << "tuple " << i << (ok ? " ok" : " failed") << " min_margin=" << format_number(r.min_margin) << "\n";
  }
  write_atomic(out_dir / "sweep.csv", csv);
  return status;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Power-of-Gauss-curvature flows of convex curves and surfaces, with Harnack monitors"};
  app.require_subcommand(1);
  std::string config;
  std::string out_dir = ".";
  std::string suite;
  bool enforce = false;

  auto* run_cmd = app.add_subcommand("run", "Integrate a flow and write trace.csv");
  run_cmd->add_option("--config", config, "JSON config")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");

  auto* harnack_cmd = app.add_subcommand("harnack", "Integrate a flow and monitor the Harnack quantities");
  harnack_cmd->add_option("--config", config, "JSON config")->required();
  harnack_cmd->add_option("--out", out_dir, "Output directory");
  harnack_cmd->add_flag("--enforce-hypotheses", enforce, "Exit 4 if the law is outside the theorem's hypotheses");

  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite and write report.csv");
  verify_cmd->add_option("--suite", suite, "oracle, evolution, identity, pexpand, pevol, speedlaw or all")->required();
  verify_cmd->add_option("--out", out_dir, "Output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the Harnack monitor over (n, b, shape) tuples");
  sweep_cmd->add_option("--config", config, "JSON sweep config")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::config;
  }

  if (*run_cmd) return cmd_run(config, out_dir, out, err);
  if (*harnack_cmd) return cmd_harnack(config, out_dir, enforce, out, err);
  if (*verify_cmd) return cmd_verify(suite, out_dir, out, err);
  return cmd_sweep(config, out_dir, out, err);
}

}  // namespace gcf
