// negdim: command-line front end. Each subcommand writes CSV/JSON/TSV to
// --out (with a reproducibility manifest) or to stdout.
//
// Exit codes: 0 success, 2 domain/validation error, 3 non-convergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "negdim/negdim.hpp"

namespace fs = std::filesystem;
using namespace negdim;
using nlohmann::ordered_json;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;

void emit(const std::string& out, const std::string& content, cli::RunManifest manifest) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  manifest.outputs = {out};
  cli::write_with_manifest(out, content, manifest);
}

RankMode parse_mode(const std::string& mode, double beta) {
  if (mode == "auto") return default_mode(beta);
  if (mode == "discrete") return RankMode::Discrete;
  if (mode == "quadrature") return RankMode::Quadrature;
  if (mode == "closed-beta0") return RankMode::ClosedBeta0;
  throw DomainError("unknown mode '" + mode + "'");
}

const char* mode_name(RankMode m) {
  switch (m) {
    case RankMode::Discrete: return "discrete";
    case RankMode::Quadrature: return "quadrature";
    case RankMode::ClosedBeta0: return "closed-beta0";
  }
  return "?";
}

LevelSpectrum read_levels(const std::string& path) {
  const std::string text = read_file(path);
  const auto ls = lines(text);
  if (ls.empty() || ls.front() != "x,q") throw DomainError(path + ": expected header 'x,q'");
  std::vector<Level> levels;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    if (ls[k].empty()) continue;
    const auto f = split(ls[k], ',');
    if (f.size() != 2) throw DomainError(path + ": line " + std::to_string(k + 1) + " needs 2 fields");
    levels.push_back({parse_double(f[0]), parse_double(f[1])});
  }
  return LevelSpectrum(std::move(levels));
}

// A rank curve from either a spectrum CSV (omega,count) or a curve CSV
// (omega,inverted_rank), with distinct-frequency cuts applied.
RankCurve read_curve(const std::string& path, std::size_t cut_low, std::size_t cut_high) {
  const std::string text = read_file(path);
  const auto first = lines(text);
  if (!first.empty() && first.front() == "omega,count")
    return inverted_rank_curve(parse_spectrum_csv(text), cut_low, cut_high);
  RankCurve full = parse_curve_csv(text);
  if (cut_low + cut_high >= full.points.size())
    throw DomainError("cuts must leave at least one of " + std::to_string(full.points.size()) +
                      " distinct frequencies");
  RankCurve out{{}, cut_low, cut_high};
  const double base = cut_low > 0 ? full.points[cut_low - 1].inverted_rank : 0.0;
  for (std::size_t k = cut_low; k + cut_high < full.points.size(); ++k)
    out.points.push_back({full.points[k].omega, full.points[k].inverted_rank - base});
  return out;
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct FitFlags {
  std::string input;
  std::int64_t omega1 = 0;
  std::int64_t omega2 = 0;
  double beta = 0.0;
  std::string mode = "auto";
  std::size_t cut_low = 0;
  std::size_t cut_high = 0;
  std::string out;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  cmd->add_option("--input,--curve,--spectrum", f.input,
                  "rank curve CSV (omega,inverted_rank) or spectrum CSV (omega,count)")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--omega1", f.omega1, "first calibration frequency")->required();
  cmd->add_option("--omega2", f.omega2, "second calibration frequency")->required();
  cmd->add_option("--beta", f.beta, "inverse temperature")->capture_default_str();
  cmd->add_option("--mode", f.mode, "auto | discrete | quadrature | closed-beta0")->capture_default_str();
  cmd->add_option("--cut-low", f.cut_low, "distinct frequencies dropped at the low end")->capture_default_str();
  cmd->add_option("--cut-high", f.cut_high, "distinct frequencies dropped at the high end")->capture_default_str();
  cmd->add_option("--out,-o", f.out, "output file (default stdout)");
}

ordered_json fit_params(const FitFlags& f, RankMode mode) {
  return {{"input", f.input}, {"omega1", f.omega1}, {"omega2", f.omega2}, {"beta", f.beta},
          {"mode", mode_name(mode)}, {"cut_low", f.cut_low}, {"cut_high", f.cut_high}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative-dimension Bose-Einstein occupancy tools"};
  app.set_version_flag("--version", std::string(NEGDIM_VERSION));
  app.require_subcommand(1);

  // weights
  double w_dim = 1.0;
  std::int64_t w_imax = 0;
  bool w_raw = false;
  std::string w_out;
  auto* weights_cmd = app.add_subcommand("weights", "multiplicity weights q_i(D), i = 0..imax");
  weights_cmd->add_option("--dim", w_dim, "dimension D")->required();
  weights_cmd->add_option("--imax", w_imax, "largest index")->required();
  weights_cmd->add_flag("--raw-gamma", w_raw, "drop the 1/Gamma(D) factor");
  weights_cmd->add_option("--out,-o", w_out, "output file (default stdout)");

  // solve
  std::string s_levels;
  double s_n = 0.0;
  std::optional<double> s_energy;
  double s_beta = 0.0;
  std::string s_out;
  auto* solve_cmd = app.add_subcommand("solve", "solve (beta, nu) for a level spectrum");
  solve_cmd->add_option("--levels,--spectrum", s_levels, "CSV with header x,q")
      ->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--n", s_n, "total count N")->required();
  auto* s_energy_opt = solve_cmd->add_option("--energy,-E", s_energy, "energy budget E");
  solve_cmd->add_option("--beta", s_beta, "beta, used when --energy is absent")
      ->excludes(s_energy_opt)->capture_default_str();
  solve_cmd->add_option("--out,-o", s_out, "output file (default stdout)");

  // concentrate
  std::vector<std::int64_t> c_grid{50, 100, 200, 400};
  InstanceFamily c_family;
  ConcentrationConfig c_cfg;
  std::size_t c_max_bytes = CountOptions{}.max_bytes;
  std::string c_out;
  auto* conc_cmd = app.add_subcommand("concentrate", "concentration report over a family of instances");
  conc_cmd->add_option("--n-grid", c_grid, "N values")->delimiter(',')->capture_default_str();
  conc_cmd->add_option("--s-ratio", c_family.s_ratio, "s = round(s_ratio * N)")->capture_default_str();
  conc_cmd->add_option("--energy-fraction", c_family.energy_fraction, "E = fraction * N * xbar")->capture_default_str();
  conc_cmd->add_option("--dim", c_family.dim, "weights q_i = weight(i, dim)")->capture_default_str();
  conc_cmd->add_option("--epsilon", c_cfg.epsilon, "threshold exponent margin")->capture_default_str();
  conc_cmd->add_option("--samples", c_cfg.n_samples, "samples per N")->capture_default_str();
  conc_cmd->add_option("--seed", c_cfg.seed, "RNG seed")->capture_default_str();
  conc_cmd->add_option("--l-grid", c_cfg.l_grid, "cut indices (default: mass deciles)")->delimiter(',');
  conc_cmd->add_option("--max-bytes", c_max_bytes, "memory budget for stored count layers")->capture_default_str();
  conc_cmd->add_option("--out,-o", c_out, "output file (default stdout)");

  // dict
  std::vector<std::string> d_inputs;
  TokenizerConfig d_tok;
  std::string d_out_dict, d_out_spec, d_out_curve;
  std::size_t d_cut_low = 0, d_cut_high = 0;
  auto* dict_cmd = app.add_subcommand("dict", "frequency dictionary and spectrum of UTF-8 texts");
  dict_cmd->add_option("texts", d_inputs, "input text files")->required()->check(CLI::ExistingFile);
  dict_cmd->add_flag("--keep-hyphens", d_tok.keep_hyphens, "keep hyphens between letters");
  dict_cmd->add_option("--min-length", d_tok.min_length, "minimum word length in code points")->capture_default_str();
  dict_cmd->add_option("--out-dict", d_out_dict, "dictionary TSV (default stdout)");
  dict_cmd->add_option("--out-spectrum", d_out_spec, "spectrum CSV");
  dict_cmd->add_option("--out-curve", d_out_curve, "inverted-rank curve CSV");
  dict_cmd->add_option("--cut-low", d_cut_low, "curve: distinct frequencies dropped at the low end")->capture_default_str();
  dict_cmd->add_option("--cut-high", d_cut_high, "curve: distinct frequencies dropped at the high end")->capture_default_str();

  // fit
  FitFlags f_flags;
  double f_alpha = 1.0;
  auto* fit_cmd = app.add_subcommand("fit", "two-point calibration of the D = -1 rank model");
  add_fit_flags(fit_cmd, f_flags);
  fit_cmd->add_option("--alpha", f_alpha, "scale constant")->capture_default_str();

  // sweep
  FitFlags sw_flags;
  double sw_from = 0.1, sw_to = 1.5, sw_step = 0.05;
  auto* sweep_cmd = app.add_subcommand("sweep", "sigma over a grid of alpha");
  add_fit_flags(sweep_cmd, sw_flags);
  sweep_cmd->add_option("--from", sw_from, "first alpha")->capture_default_str();
  sweep_cmd->add_option("--to", sw_to, "last alpha (inclusive)")->capture_default_str();
  sweep_cmd->add_option("--step", sw_step, "grid step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitDomain;
  }

  try {
    cli::RunManifest m;
    if (*weights_cmd) {
      const Normalization norm = w_raw ? Normalization::RawGamma : Normalization::UnitAtZero;
      const auto seq = weight_sequence(Dimension(w_dim), w_imax, norm);
      std::ostringstream csv;
      csv << "i,weight\n";
      for (std::size_t i = 0; i < seq.values.size(); ++i)
        csv << i << ',' << (seq.values[i].is_pole() ? "pole" : format_double(seq.values[i].value())) << '\n';
      m.command = "weights";
      m.parameters = {{"dim", w_dim}, {"imax", w_imax},
                      {"normalization", seq.normalization == Normalization::RawGamma ? "raw-gamma" : "unit-at-zero"}};
      emit(w_out, csv.str(), m);
    } else if (*solve_cmd) {
      const LevelSpectrum spec = read_levels(s_levels);
      ordered_json j;
      if (s_energy) {
        if (s_n != std::floor(s_n) || s_n < 1) throw DomainError("--n must be a positive integer with --energy");
        const auto r = solve_beta_nu(spec, {static_cast<std::int64_t>(s_n), *s_energy});
        j = {{"beta", r.params.beta}, {"nu", r.params.nu}, {"count_residual", r.count_residual},
             {"energy_residual", r.energy_residual}};
      } else {
        const double nu = solve_nu(spec, s_beta, s_n);
        j = {{"beta", s_beta}, {"nu", nu},
             {"count_residual", std::abs(log_zeta_d1(spec, {s_beta, nu}) - s_n) / s_n},
             {"energy_residual", nullptr}};
      }
      m.command = "solve";
      m.parameters = {{"levels", s_levels}, {"n", s_n}, {"energy", s_energy ? ordered_json(*s_energy) : ordered_json()},
                      {"beta", s_energy ? ordered_json() : ordered_json(s_beta)}};
      m.inputs = {s_levels};
      emit(s_out, j.dump(2) + "\n", m);
    } else if (*conc_cmd) {
      c_family.n_grid = c_grid;
      CountOptions opts;
      opts.max_bytes = c_max_bytes;
      const auto rows = concentration_report(c_family, c_cfg, opts);
      m.command = "concentrate";
      std::vector<std::int64_t> lg(c_cfg.l_grid.begin(), c_cfg.l_grid.end());
      m.parameters = {{"n_grid", join_ints(c_grid)}, {"s_ratio", c_family.s_ratio},
                      {"energy_fraction", c_family.energy_fraction}, {"dim", c_family.dim},
                      {"epsilon", c_cfg.epsilon}, {"samples", c_cfg.n_samples},
                      {"l_grid", lg.empty() ? "deciles" : join_ints(lg)}, {"max_bytes", c_max_bytes}};
      m.seed = c_cfg.seed;
      emit(c_out, report_csv(rows), m);
    } else if (*dict_cmd) {
      FrequencyDictionary dict;
      for (const auto& path : d_inputs) {
        try {
          dict.merge(frequency_dictionary(tokenize(read_file(path), d_tok)));
        } catch (const EncodingError& e) {
          throw EncodingError(path + ": " + e.what(), e.offset());
        }
      }
      const auto spec = frequency_spectrum(dict);
      m.command = "dict";
      m.parameters = {{"keep_hyphens", d_tok.keep_hyphens}, {"min_length", d_tok.min_length},
                      {"cut_low", d_cut_low}, {"cut_high", d_cut_high}};
      m.inputs.assign(d_inputs.begin(), d_inputs.end());
      std::vector<std::pair<std::string, std::string>> outputs{{d_out_dict, dictionary_tsv(dict)}};
      if (!d_out_spec.empty()) outputs.emplace_back(d_out_spec, spectrum_csv(spec));
      if (!d_out_curve.empty())
        outputs.emplace_back(d_out_curve, curve_csv(inverted_rank_curve(spec, d_cut_low, d_cut_high)));
      for (const auto& [path, _] : outputs)
        if (!path.empty() && path != "-") m.outputs.emplace_back(path);
      for (const auto& [path, content] : outputs) {
        if (path.empty() || path == "-") std::cout << content;
        else cli::write_with_manifest(path, content, m);
      }
      std::cerr << "tokens " << dict.total_tokens() << ", words " << dict.dict_size()
                << ", condensate fraction " << format_double(condensate_fraction(spec)) << '\n';
    } else if (*fit_cmd) {
      const RankMode mode = parse_mode(f_flags.mode, f_flags.beta);
      const RankCurve curve = read_curve(f_flags.input, f_flags.cut_low, f_flags.cut_high);
      const auto fit = fit_curve(curve, {f_flags.omega1, f_flags.omega2, f_alpha, f_flags.beta, mode});
      m.command = "fit";
      m.parameters = fit_params(f_flags, mode);
      m.parameters["alpha"] = f_alpha;
      m.inputs = {f_flags.input};
      emit(f_flags.out, fit_json(fit), m);
    } else if (*sweep_cmd) {
      const RankMode mode = parse_mode(sw_flags.mode, sw_flags.beta);
      const RankCurve curve = read_curve(sw_flags.input, sw_flags.cut_low, sw_flags.cut_high);
      const auto sweep = alpha_sweep(curve, sw_from, sw_to, sw_step,
                                     {sw_flags.omega1, sw_flags.omega2, 1.0, sw_flags.beta, mode});
      for (const auto& pt : sweep.grid)
        if (!pt.sigma) std::cerr << "skipped alpha " << format_double(pt.alpha) << ": " << pt.skipped << '\n';
      std::cerr << "best alpha " << format_double(sweep.best_alpha) << ", sigma "
                << format_double(sweep.best_sigma) << '\n';
      m.command = "sweep";
      m.parameters = fit_params(sw_flags, mode);
      m.parameters["from"] = sw_from;
      m.parameters["to"] = sw_to;
      m.parameters["step"] = sw_step;
      m.inputs = {sw_flags.input};
      emit(sw_flags.out, sweep_csv(sweep), m);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "negdim: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const DomainError& e) {
    std::cerr << "negdim: " << e.what() << '\n';
    return kExitDomain;
  } catch (const EncodingError& e) {
    std::cerr << "negdim: " << e.what() << '\n';
    return kExitDomain;
  } catch (const BudgetError& e) {
    std::cerr << "negdim: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "negdim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
