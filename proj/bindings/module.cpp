#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "bernwf/analysis.hpp"
#include "bernwf/config_io.hpp"
#include "bernwf/distributions.hpp"
#include "bernwf/dual.hpp"
#include "bernwf/forward.hpp"
#include "bernwf/moran.hpp"
#include "bernwf/operators.hpp"
#include "bernwf/version.hpp"

namespace py = pybind11;
using namespace bernwf;

namespace {

Allele allele_from(const std::string& s) {
    if (s == "a") return Allele::a;
    if (s == "A") return Allele::A;
    throw std::invalid_argument("allele must be 'a' or 'A'");
}

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["se"] = e.se;
    d["ci_lo"] = e.lo();
    d["ci_hi"] = e.hi();
    d["n"] = e.n;
    return d;
}

MomentTable table_from(const std::vector<std::pair<double, double>>& rho) {
    MomentTable t;
    for (const auto& [mean, se] : rho) {
        Estimate e;
        e.mean = mean;
        e.se = se;
        e.half = 1.96 * se;
        t.rho.push_back(e);
    }
    return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lambda-Wright-Fisher processes and their Bernstein coefficient duals";
    m.attr("__version__") = kVersion;

    py::class_<ModelParams>(m, "ModelParams")
        .def_static("from_json",
                    [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); },
                    py::arg("text"), "Parse a model from a JSON config string.")
        .def_static("from_file", &model_from_file, py::arg("path"))
        .def_property_readonly("theta", &ModelParams::theta)
        .def_property_readonly("has_mutations", &ModelParams::has_mutations)
        .def("to_json", [](const ModelParams& p) { return model_to_json(p).dump(); })
        .def("d_poly", [](const ModelParams& p, double x) { return p.sel.d_poly(x); },
             py::arg("x"), "Selection polynomial at x.");

    m.def("lambda_rate", &lambda_rate, py::arg("params"), py::arg("n"), py::arg("ell"));
    m.def("mut_rate",
          [](const ModelParams& p, int n, int ell, const std::string& c) {
              return mut_rate(p, n, ell, allele_from(c));
          },
          py::arg("params"), py::arg("n"), py::arg("ell"), py::arg("type"));
    m.def("env_rate",
          [](const ModelParams& p, int n, int ell, const std::string& c) {
              return env_rate(p, n, ell, allele_from(c));
          },
          py::arg("params"), py::arg("n"), py::arg("ell"), py::arg("type"));
    m.def("total_dual_rate", &total_dual_rate, py::arg("params"), py::arg("n"));
    m.def("check_assumption",
          [](const ModelParams& p) {
              AssumptionReport r = check_assumption(p);
              py::dict d;
              d["b"] = r.branch_intensity;
              d["c"] = r.coalescence_strength;
              d["mu_mass"] = r.mu_mass;
              d["nu_mass"] = r.nu_mass;
              d["theta"] = r.theta;
              d["verdict"] = r.holds;
              return d;
          },
          py::arg("params"), "Rate-balance condition report.");

    m.def("binom_pmf", &binom_pmf, py::arg("n"), py::arg("x"));
    m.def("hyp_pmf", &hyp_pmf, py::arg("n"), py::arg("k"), py::arg("j"));
    m.def("hp_pmf",
          [](int total, int pairs, int red) { return hp_pmf({total, pairs, red}); },
          py::arg("total"), py::arg("pairs"), py::arg("red"),
          "Exact pmf of the hypergeometric pairing (total <= 12).");
    m.def("hp_sample",
          [](int total, int pairs, int red, std::uint64_t seed) {
              Rng rng = make_rng(seed);
              return hp_sample({total, pairs, red}, rng);
          },
          py::arg("total"), py::arg("pairs"), py::arg("red"), py::arg("seed"));

    m.def("coalesce", &coalesce, py::arg("v"), py::arg("k"));
    m.def("select_branch",
          [](const CoefficientVector& v, int ell, const ModelParams& p) {
              return select_branch(v, ell, p.sel);
          },
          py::arg("v"), py::arg("ell"), py::arg("params"));
    m.def("mut_a", &mut_a, py::arg("v"), py::arg("k"));
    m.def("mut_A", &mut_A, py::arg("v"), py::arg("k"));
    m.def("env_a", [](const CoefficientVector& v, int ell) { return env_a(v, ell); },
          py::arg("v"), py::arg("ell"));
    m.def("env_A", [](const CoefficientVector& v, int ell) { return env_A(v, ell); },
          py::arg("v"), py::arg("ell"));
    m.def("bernstein_eval", &bernstein_eval, py::arg("x"), py::arg("w"),
          "Duality functional H(x, w).");

    m.def("simulate_dual",
          [](const ModelParams& p, const CoefficientVector& v0, double t, std::uint64_t seed,
             int l_max) {
              DualSimOptions opts;
              opts.l_max = l_max;
              opts.env_mc_se_budget = 0.01;
              Rng rng = make_rng(seed);
              DualPathSummary s = simulate_until(p, v0, t, opts, rng);
              py::dict d;
              d["absorbed"] = s.absorbed;
              d["final_v"] = s.final_state.v;
              d["clock"] = s.final_state.clock;
              if (s.absorbed) {
                  d["absorb_time"] = s.absorb_time;
                  d["value"] = s.final_value;
              }
              d["events"] = s.counts.total();
              return d;
          },
          py::arg("params"), py::arg("v0"), py::arg("t"), py::arg("seed") = 1,
          py::arg("l_max") = 10000);

    m.def("forward_values",
          [](const ModelParams& p, double x0, const std::vector<double>& times, double dt,
             std::uint64_t seed) {
              ForwardConfig cfg;
              cfg.x0 = x0;
              cfg.t_end = times.empty() ? 0.0 : times.back();
              cfg.dt = dt;
              Rng rng = make_rng(seed);
              return simulate_values(cfg, p, times, rng);
          },
          py::arg("params"), py::arg("x0"), py::arg("times"), py::arg("dt") = 1e-3,
          py::arg("seed") = 1);
    m.def("forward_moment",
          [](const ModelParams& p, double x0, double t, int k, std::size_t reps,
             std::uint64_t seed, double dt) {
              ForwardConfig cfg;
              cfg.x0 = x0;
              cfg.t_end = t;
              cfg.dt = dt;
              return estimate_dict(moment_estimate(cfg, p, k, reps, seed));
          },
          py::arg("params"), py::arg("x0"), py::arg("t"), py::arg("k"), py::arg("reps") = 10000,
          py::arg("seed") = 1, py::arg("dt") = 1e-3);

    m.def("duality_gap",
          [](const ModelParams& p, double x, const CoefficientVector& v, double t,
             std::size_t reps, std::uint64_t seed) {
              DualityGap g = duality_gap(p, x, v, t, reps, seed);
              py::dict d;
              d["lhs"] = estimate_dict(g.lhs);
              d["rhs"] = estimate_dict(g.rhs);
              d["z"] = g.z;
              return d;
          },
          py::arg("params"), py::arg("x"), py::arg("v"), py::arg("t"), py::arg("reps") = 10000,
          py::arg("seed") = 1);
    m.def("generator_residual", &generator_residual, py::arg("params"), py::arg("x"),
          py::arg("w"));
    m.def("fixation_probability",
          [](const ModelParams& p, double x, double horizon, std::size_t forward_reps,
             std::uint64_t seed) {
              FixationOptions opts;
              opts.horizon = horizon;
              opts.forward_reps = forward_reps;
              opts.seed = seed;
              FixationResult r = fixation_probability(p, x, opts);
              py::dict d;
              d["dual"] = estimate_dict(r.dual_estimate);
              if (r.forward) {
                  d["forward"] = estimate_dict(r.forward->fixed_at_one);
                  d["forward_unresolved"] = r.forward->unresolved;
              }
              return d;
          },
          py::arg("params"), py::arg("x"), py::arg("horizon") = 2000.0,
          py::arg("forward_reps") = 10000, py::arg("seed") = 1);
    m.def("stationary_moments",
          [](const ModelParams& p, int n_max, std::size_t reps, std::uint64_t seed) {
              MomentTable t = stationary_moments(p, n_max, reps, seed);
              std::vector<std::pair<double, double>> out;
              for (const Estimate& e : t.rho) out.emplace_back(e.mean, e.se);
              return out;
          },
          py::arg("params"), py::arg("n_max"), py::arg("reps") = 10000, py::arg("seed") = 1,
          "List of (mean, se) for rho_0..rho_n_max.");
    m.def("expected_absorbed_value",
          [](const CoefficientVector& v, const std::vector<std::pair<double, double>>& rho) {
              return estimate_dict(expected_absorbed_value(v, table_from(rho)));
          },
          py::arg("v"), py::arg("rho"));
    m.def("recursion_residual",
          [](const ModelParams& p, int n, const std::vector<std::pair<double, double>>& rho) {
              RecursionResidual r = recursion_residual(p, n, table_from(rho));
              py::dict d;
              d["residual"] = r.residual;
              d["se"] = r.se;
              d["ci_scaled"] = r.ci_scaled;
              return d;
          },
          py::arg("params"), py::arg("n"), py::arg("rho"));
    m.def("lyapunov_report",
          [](const ModelParams& p, int n_lo, int n_hi) {
              LyapunovReport r = lyapunov_report(p, n_lo, n_hi);
              py::dict d;
              std::vector<std::tuple<int, double, double, double>> rows;
              for (const auto& row : r.rows) rows.emplace_back(row.n, row.delta, row.f, row.drift);
              d["rows"] = rows;
              d["onset"] = r.onset ? py::cast(*r.onset) : py::none();
              return d;
          },
          py::arg("params"), py::arg("n_lo") = 1, py::arg("n_hi") = 100);
    m.def("moran_fixation",
          [](const ModelParams& p, int K, int i0, std::size_t reps, std::uint64_t seed) {
              return estimate_dict(moran_fixation(p, K, i0, reps, seed).fixed_at_K);
          },
          py::arg("params"), py::arg("K"), py::arg("i0"), py::arg("reps") = 2000,
          py::arg("seed") = 1);
}
