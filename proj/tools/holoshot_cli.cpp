// SPDX-License-Identifier: Apache-2.0
//
// holoshot: run, validate, replay and admissibility sweeps from a JSON config.
//
// Exit codes: 0 success, 1 invalid configuration or violated hypothesis,
// 2 runtime failure (inadmissible level, degenerate data), 3 I/O or parse error.
// Failures print one JSON object to stderr with a machine-readable "reason".
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "holoshot/experiment.hpp"

namespace {

using holoshot::json;

struct Options {
  std::string config;
  std::string out = "holoshot-out";
  std::string levels;
  std::optional<std::uint64_t> seed;
  std::string intensities;
};

void apply_overrides(holoshot::ExperimentConfig& c, const Options& o) {
  if (!o.levels.empty()) {
    const auto dots = o.levels.find("..");
    try {
      if (dots == std::string::npos) {
        c.level_min = c.level_max = std::stoi(o.levels);
      } else {
        c.level_min = std::stoi(o.levels.substr(0, dots));
        c.level_max = std::stoi(o.levels.substr(dots + 2));
      }
    } catch (const std::exception&) {
      throw holoshot::Error(holoshot::ErrorCode::kParse, "--levels expects A..B");
    }
  }
  if (o.seed) c.seed = *o.seed;
}

holoshot::ExperimentConfig load(const Options& o) {
  auto c = holoshot::load_config(o.config);
  apply_overrides(c, o);
  return c;
}

int fail(const std::string& reason, const std::string& message, int code,
         const json& extra = json::object()) {
  json j = {{"status", "error"}, {"reason", reason}, {"message", message}};
  j.update(extra);
  std::cerr << j.dump() << '\n';
  return code;
}

json violations_json(const std::vector<holoshot::Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back({{"code", x.code}, {"message", x.message}});
  return arr;
}

int exit_code(holoshot::ErrorCode code) {
  switch (code) {
    case holoshot::ErrorCode::kParse:
    case holoshot::ErrorCode::kIo:
      return 3;
    case holoshot::ErrorCode::kInadmissible:
    case holoshot::ErrorCode::kDegeneratePoint:
    case holoshot::ErrorCode::kInconsistentRecords:
      return 2;
    default:
      return 1;
  }
}

void print_rows(const holoshot::ReconstructionReport& r) {
  std::cout << "level  lattice      l2_error      baseline   recovery_err  gamma      bound\n";
  for (const auto& row : r.rows) {
    std::cout << std::setw(5) << row.level << std::setw(9) << row.lattice_size << std::setw(14)
              << std::setprecision(4) << std::scientific << row.l2_error << std::setw(14)
              << row.baseline_l2_error << std::setw(14) << row.recovery_max_error
              << std::defaultfloat << std::setw(9) << std::setprecision(4) << row.gamma << "  "
              << (row.bound_ok() && row.triangle_ok() ? "ok" : "VIOLATED") << '\n';
  }
  auto fit = [](const char* name, const holoshot::DecayFit& f) {
    std::cout << name << ": ";
    if (f.valid()) {
      std::cout << "beta = " << std::setprecision(4) << f.slope << " over " << f.points
                << " levels\n";
    } else {
      std::cout << "not enough levels above the error floor\n";
    }
  };
  fit("pipeline fit", r.fit);
  fit("baseline fit", r.baseline_fit);
}

int cmd_validate(const Options& o) {
  const auto c = load(o);
  const auto v = holoshot::validate(c);
  if (!v.empty()) {
    return fail(v[0].code, "configuration violates hypotheses", 1,
                {{"violations", violations_json(v)}});
  }
  std::cout << json({{"status", "ok"}, {"config", holoshot::to_json(c)}}).dump(2) << '\n';
  return 0;
}

int cmd_run(const Options& o) {
  const auto c = load(o);
  const auto result = holoshot::run(c, o.out);
  print_rows(result.report);
  for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
  return 0;
}

int cmd_replay(const Options& o) {
  const auto c = load(o);
  const auto levels = holoshot::replay(c, o.intensities, o.out);
  std::size_t skipped = 0;
  for (const auto& s : levels) skipped += s.skipped();
  std::cout << "recovered " << levels.size() << " level(s), " << skipped << " skipped\n";
  std::cout << "wrote " << (std::filesystem::path(o.out) / "recovered.csv").string() << '\n';
  return 0;
}

int cmd_admissibility(const Options& o) {
  const auto c = load(o);
  const auto rows = holoshot::admissibility_sweep(c);
  std::filesystem::create_directories(o.out);
  const auto path = (std::filesystem::path(o.out) / "admissibility.csv").string();
  auto out = holoshot::io::open_output(path);
  holoshot::write_admissibility_csv(out, rows);
  std::cout << "level  lattice       ratio   certificate   sup|g|\n";
  for (const auto& r : rows) {
    std::cout << std::setw(5) << r.level << std::setw(9) << r.lattice_size << std::setw(12)
              << std::setprecision(6) << r.report.ratio << std::setw(14)
              << (r.cert.bound ? std::to_string(*r.cert.bound) : std::string("none"))
              << std::setw(9) << r.report.sup_abs_g << '\n';
  }
  std::cout << "wrote " << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-shot holographic recovery and multiscale reconstruction"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub, bool with_out) {
    sub->add_option("--config", o.config, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--levels", o.levels, "level range A..B (overrides config)");
    sub->add_option("--seed", o.seed, "noise seed (overrides config)");
    if (with_out) sub->add_option("--out", o.out, "output directory");
  };
  auto* run = app.add_subcommand("run", "full pipeline with reports");
  add_common(run, true);
  auto* validate = app.add_subcommand("validate", "check hypotheses only");
  add_common(validate, false);
  auto* replay = app.add_subcommand("replay", "recover from a saved intensity set");
  add_common(replay, true);
  replay->add_option("--intensities", o.intensities, "intensities.csv")
      ->required()
      ->check(CLI::ExistingFile);
  auto* adm = app.add_subcommand("admissibility", "exact ratio versus certificate per level");
  add_common(adm, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 3);
  }

  try {
    if (*run) return cmd_run(o);
    if (*validate) return cmd_validate(o);
    if (*replay) return cmd_replay(o);
    return cmd_admissibility(o);
  } catch (const holoshot::ConfigError& e) {
    return fail(e.reason(), e.what(), 1, {{"violations", violations_json(e.violations())}});
  } catch (const holoshot::Error& e) {
    return fail(std::string(holoshot::reason(e.code())), e.what(), exit_code(e.code()));
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what(), 3);
  }
}
