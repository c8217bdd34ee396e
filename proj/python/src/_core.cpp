#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "negdim/negdim.hpp"

namespace py = pybind11;
using namespace negdim;

namespace {

using LevelList = std::vector<std::pair<double, double>>;

LevelSpectrum to_spectrum(const LevelList& levels) {
  std::vector<Level> out;
  out.reserve(levels.size());
  for (const auto& [x, q] : levels) out.push_back({x, q});
  return LevelSpectrum(std::move(out));
}

RankMode to_mode(const std::string& mode, double beta) {
  if (mode == "auto") return default_mode(beta);
  if (mode == "discrete") return RankMode::Discrete;
  if (mode == "quadrature") return RankMode::Quadrature;
  if (mode == "closed-beta0") return RankMode::ClosedBeta0;
  throw DomainError("unknown mode '" + mode + "'");
}

RankCurve to_curve(const std::vector<std::pair<std::int64_t, double>>& points) {
  RankCurve c;
  for (const auto& [w, r] : points) c.points.push_back({w, r});
  return c;
}

py::object weight_value(const Weight& w) {
  return w.is_pole() ? py::none() : py::object(py::float_(w.value()));
}

py::int_ to_pyint(const BigCount& v) {
  return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(v.str().c_str(), nullptr, 10)));
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["alpha"] = f.config.alpha;
  d["beta"] = f.config.beta;
  d["nu"] = f.nu;
  d["C"] = f.scale;
  d["sigma"] = f.sigma;
  d["omega1"] = f.config.omega1;
  d["omega2"] = f.config.omega2;
  d["n_points"] = f.n_points;
  d["offset"] = f.offset;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the negdim package";
  m.attr("__version__") = NEGDIM_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_MemoryError);
  py::register_exception<EncodingError>(m, "EncodingError", PyExc_UnicodeError);

  m.def("weight", [](std::int64_t i, double dim, bool raw_gamma) {
        return weight_value(weight(i, Dimension(dim), raw_gamma ? Normalization::RawGamma : Normalization::UnitAtZero));
      }, py::arg("i"), py::arg("dim"), py::arg("raw_gamma") = false,
      "q_i(D); None marks a pole.");
  m.def("weight_sequence", [](double dim, std::int64_t i_max, bool raw_gamma) {
        const auto seq = weight_sequence(Dimension(dim), i_max,
                                         raw_gamma ? Normalization::RawGamma : Normalization::UnitAtZero);
        py::list out;
        for (const auto& w : seq.values) out.append(weight_value(w));
        return out;
      }, py::arg("dim"), py::arg("i_max"), py::arg("raw_gamma") = false);
  m.def("pole_indices", [](double dim) { return pole_indices(Dimension(dim)); }, py::arg("dim"));

  m.def("occupation", [](double x, double q, double beta, double nu) {
        return occupation({x, q}, {beta, nu});
      }, py::arg("x"), py::arg("q"), py::arg("beta"), py::arg("nu"));
  m.def("cumulative", [](const LevelList& levels, double beta, double nu, std::size_t l) {
        return cumulative(to_spectrum(levels), {beta, nu}, l);
      }, py::arg("levels"), py::arg("beta"), py::arg("nu"), py::arg("l"));
  m.def("solve_nu", [](const LevelList& levels, double beta, double n) {
        return solve_nu(to_spectrum(levels), beta, n);
      }, py::arg("levels"), py::arg("beta"), py::arg("n"));
  m.def("solve_beta_nu", [](const LevelList& levels, std::int64_t n, double energy) {
        const auto r = solve_beta_nu(to_spectrum(levels), {n, energy});
        py::dict d;
        d["beta"] = r.params.beta;
        d["nu"] = r.params.nu;
        d["count_residual"] = r.count_residual;
        d["energy_residual"] = r.energy_residual;
        return d;
      }, py::arg("levels"), py::arg("n"), py::arg("energy"));
  m.def("log_zeta", [](const LevelList& levels, double beta, double nu) {
        return log_zeta(to_spectrum(levels), {beta, nu});
      }, py::arg("levels"), py::arg("beta"), py::arg("nu"));
  m.def("log_zeta_d2", [](const LevelList& levels, double beta, double nu) {
        return log_zeta_d2(to_spectrum(levels), {beta, nu});
      }, py::arg("levels"), py::arg("beta"), py::arg("nu"));
  m.def("partition_saddle", [](const LevelList& levels, double beta, std::int64_t n) {
        return partition_saddle(to_spectrum(levels), beta, n);
      }, py::arg("levels"), py::arg("beta"), py::arg("n"));
  m.def("exact_log_partition", [](const LevelList& levels, double beta, std::int64_t n) {
        return exact_log_partition(to_spectrum(levels), beta, n);
      }, py::arg("levels"), py::arg("beta"), py::arg("n"));
  m.def("planck_density", [](double omega, double beta, double dim) {
        return planck_density(omega, beta, Dimension(dim));
      }, py::arg("omega"), py::arg("beta"), py::arg("dim"));
  m.def("rank_model_neg1", [](double omega, double alpha, double beta, double nu, double c, const std::string& mode) {
        return rank_model_neg1(omega, alpha, {beta, nu}, c, to_mode(mode, beta));
      }, py::arg("omega"), py::arg("alpha"), py::arg("beta"), py::arg("nu"), py::arg("C"),
      py::arg("mode") = "auto");

  m.def("count_variants", [](const LevelList& levels, std::int64_t n, double energy) {
        return to_pyint(count_variants(to_spectrum(levels), {n, energy}).count());
      }, py::arg("levels"), py::arg("n"), py::arg("energy"), "Exact number of admissible variants.");
  m.def("sample_variants", [](const LevelList& levels, std::int64_t n, double energy, std::size_t n_samples,
                              std::uint64_t seed) {
        const auto table = count_variants(to_spectrum(levels), {n, energy});
        std::vector<std::vector<std::int64_t>> out;
        {
          py::gil_scoped_release release;
          for (auto& s : sample_variants_seeded(table, n_samples, seed)) out.push_back(std::move(s.counts));
        }
        return out;
      }, py::arg("levels"), py::arg("n"), py::arg("energy"), py::arg("n_samples"), py::arg("seed") = 0);
  m.def("concentration_report", [](std::vector<std::int64_t> n_grid, double s_ratio, double energy_fraction,
                                   double dim, double epsilon, std::size_t n_samples, std::uint64_t seed) {
        InstanceFamily fam{std::move(n_grid), s_ratio, energy_fraction, dim};
        ConcentrationConfig cfg{epsilon, n_samples, seed, {}};
        std::vector<ReportRow> rows;
        {
          py::gil_scoped_release release;
          rows = concentration_report(fam, cfg);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["N"] = r.n;
          d["s"] = r.s;
          d["epsilon"] = r.epsilon;
          d["threshold"] = r.threshold;
          d["exceed_fraction"] = r.exceed_fraction;
          d["wilson_lo"] = r.wilson_lo;
          d["wilson_hi"] = r.wilson_hi;
          d["q50"] = r.q50;
          d["q95"] = r.q95;
          d["beta"] = r.params.beta;
          d["nu"] = r.params.nu;
          out.append(d);
        }
        return out;
      }, py::arg("n_grid") = std::vector<std::int64_t>{50, 100, 200, 400}, py::arg("s_ratio") = 0.25,
      py::arg("energy_fraction") = 0.6, py::arg("dim") = 1.0, py::arg("epsilon") = 0.05,
      py::arg("n_samples") = 2000, py::arg("seed") = 0);
  m.def("boltzmann_shell_ratio", [](const LevelList& levels, std::int64_t n, double energy, double beta,
                                    double margin_exponent) {
        return boltzmann_shell_ratio(to_spectrum(levels), {n, energy}, beta, margin_exponent).ratio;
      }, py::arg("levels"), py::arg("n"), py::arg("energy"), py::arg("beta"), py::arg("margin_exponent"));

  m.def("tokenize", [](const std::string& text, bool keep_hyphens, std::size_t min_length) {
        return tokenize(text, {keep_hyphens, min_length});
      }, py::arg("text"), py::arg("keep_hyphens") = false, py::arg("min_length") = 1);
  m.def("frequency_dictionary", [](const std::vector<std::string>& tokens) {
        const FrequencyDictionary dict = frequency_dictionary(tokens);
        std::map<std::string, std::int64_t> out;
        for (const auto& [w, c] : dict.entries()) out.emplace(w, c);
        return out;
      }, py::arg("tokens"));
  m.def("frequency_spectrum", [](const std::map<std::string, std::int64_t>& dict) {
        FrequencyDictionary d;
        for (const auto& [w, c] : dict) d.add(w, c);
        return frequency_spectrum(d).counts;
      }, py::arg("dictionary"), "omega -> number of words occurring omega times");
  m.def("inverted_rank_curve", [](const std::map<std::int64_t, std::int64_t>& spectrum, std::size_t cut_low,
                                  std::size_t cut_high) {
        std::vector<std::pair<std::int64_t, double>> out;
        for (const auto& p : inverted_rank_curve(FrequencySpectrum{spectrum}, cut_low, cut_high).points)
          out.emplace_back(p.omega, p.inverted_rank);
        return out;
      }, py::arg("spectrum"), py::arg("cut_low") = 0, py::arg("cut_high") = 0);
  m.def("condensate_fraction", [](const std::map<std::int64_t, std::int64_t>& spectrum) {
        return condensate_fraction(FrequencySpectrum{spectrum});
      }, py::arg("spectrum"));

  m.def("fit_curve", [](const std::vector<std::pair<std::int64_t, double>>& points, std::int64_t omega1,
                        std::int64_t omega2, double alpha, double beta, const std::string& mode) {
        return fit_dict(fit_curve(to_curve(points), {omega1, omega2, alpha, beta, to_mode(mode, beta)}));
      }, py::arg("curve"), py::arg("omega1"), py::arg("omega2"), py::arg("alpha") = 1.0,
      py::arg("beta") = 0.0, py::arg("mode") = "auto");
  m.def("alpha_grid", &alpha_grid, py::arg("lo"), py::arg("hi"), py::arg("step"));
  m.def("alpha_sweep", [](const std::vector<std::pair<std::int64_t, double>>& points, double lo, double hi,
                          double step, std::int64_t omega1, std::int64_t omega2, double beta,
                          const std::string& mode) {
        SweepResult r;
        const RankCurve curve = to_curve(points);
        const FitConfig tmpl{omega1, omega2, 1.0, beta, to_mode(mode, beta)};
        {
          py::gil_scoped_release release;
          r = alpha_sweep(curve, lo, hi, step, tmpl);
        }
        py::list grid;
        for (const auto& pt : r.grid)
          grid.append(py::make_tuple(pt.alpha, pt.sigma ? py::object(py::float_(*pt.sigma)) : py::none()));
        py::dict d;
        d["grid"] = grid;
        d["best_alpha"] = r.best_alpha;
        d["best_sigma"] = r.best_sigma;
        return d;
      }, py::arg("curve"), py::arg("lo"), py::arg("hi"), py::arg("step"), py::arg("omega1"),
      py::arg("omega2"), py::arg("beta") = 0.0, py::arg("mode") = "auto");
}
