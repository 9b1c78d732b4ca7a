// SPDX-License-Identifier: Apache-2.0
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gfpl/errors.hpp"
#include "gfpl/kernel.hpp"
#include "gfpl/pde.hpp"
#include "gfpl/pdmp.hpp"
#include "gfpl/profile.hpp"
#include "gfpl/spectral.hpp"

namespace py = pybind11;
using namespace gfpl;

namespace {

py::dict regime_dict(const RegimeReport& r) {
  py::dict d;
  d["lambda_star"] = r.lambda_star;
  d["condition_low"] = r.condition_low;
  d["regime"] = to_string(r.regime);
  d["beta_plus"] = r.beta_plus ? py::object(py::float_(*r.beta_plus))
                               : py::object(py::none());
  d["beta_minus"] = r.beta_minus ? py::object(py::float_(*r.beta_minus))
                                 : py::object(py::none());
  d["L_prime_at_lambda"] =
      r.L_prime_at_lambda ? py::object(py::float_(*r.L_prime_at_lambda))
                          : py::object(py::none());
  d["recurrence_class"] = to_string(r.recurrence_class);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Long-time asymptotics of the critical growth-fragmentation "
            "equation with piecewise-linear growth";

  py::register_exception<Error>(m, "GfplError");

  py::class_<FragmentationKernel>(m, "FragmentationKernel")
      .def_static("monomial", &FragmentationKernel::monomial, py::arg("gamma"),
                  py::arg("epsilon") = 0.5)
      .def_static("tabulated", &FragmentationKernel::tabulated, py::arg("s"),
                  py::arg("rho"), py::arg("epsilon"))
      .def_property_readonly("is_monomial", &FragmentationKernel::is_monomial)
      .def_property_readonly("epsilon", &FragmentationKernel::epsilon)
      .def("density", &FragmentationKernel::density)
      .def("moment", py::overload_cast<double>(&FragmentationKernel::moment,
                                               py::const_))
      .def("log_moment", py::overload_cast<double>(
                             &FragmentationKernel::log_moment, py::const_),
           py::arg("q") = 0.0)
      .def("partial_moment", &FragmentationKernel::partial_moment)
      .def("total_rates", &FragmentationKernel::total_rates)
      .def("lambda_star", &FragmentationKernel::lambda_star)
      .def("sample_jump", &FragmentationKernel::sample_jump);

  py::enum_<JumpKind>(m, "JumpKind")
      .value("XType", JumpKind::XType)
      .value("YType", JumpKind::YType);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double>(), py::arg("a_minus"), py::arg("a_plus"))
      .def_readonly("a_minus", &ModelParams::a_minus)
      .def_readonly("a_plus", &ModelParams::a_plus);

  py::enum_<Family>(m, "Family")
      .value("Xi", Family::Xi)
      .value("Eta", Family::Eta);

  py::class_<LaplaceExponent>(m, "LaplaceExponent")
      .def(py::init<Family, double, FragmentationKernel>(), py::arg("family"),
           py::arg("drift"), py::arg("kernel"))
      .def("value",
           py::overload_cast<double>(&LaplaceExponent::value, py::const_))
      .def("derivative", &LaplaceExponent::derivative)
      .def("right_inverse", &LaplaceExponent::right_inverse)
      .def("domain_min", &LaplaceExponent::domain_min)
      .def("infimum", [](const LaplaceExponent& e) {
        const auto inf = e.infimum();
        return py::make_tuple(inf.attained, inf.q_min, inf.value);
      });

  m.def("classify",
        [](const ModelParams& p, const FragmentationKernel& k) {
          return regime_dict(malthus(p, k));
        },
        py::arg("params"), py::arg("kernel"));
  m.def("q_star", &q_star);
  m.def("L", &L, py::arg("params"), py::arg("kernel"), py::arg("q"));
  m.def("L_prime_at_lambda", &L_prime_at_lambda);
  m.def("cramer_root", [](const ModelParams& p, const FragmentationKernel& k) {
    const auto root = cramer_root(p, k);
    return root ? py::object(py::float_(*root)) : py::object(py::none());
  });
  m.def("total_mass", &total_mass);
  m.def("cramer_constant", &cramer_constant);
  m.def("mtilde_numeric", &mtilde_numeric);
  m.def("scale_function",
        [](const LaplaceExponent& e, double x) { return scale_function(e, x); });
  m.def("two_sided_exit", &two_sided_exit);

  py::class_<ProfileDensity>(m, "ProfileDensity")
      .def_static(
          "build",
          [](const ModelParams& p, const FragmentationKernel& k,
             bool force_numeric_body) {
            ProfileOptions opts;
            opts.force_numeric_body = force_numeric_body;
            return ProfileDensity::build(p, k, opts);
          },
          py::arg("params"), py::arg("kernel"),
          py::arg("force_numeric_body") = false)
      .def_property_readonly("beta_plus", &ProfileDensity::beta_plus)
      .def_property_readonly("beta_minus",
                             [](const ProfileDensity& p) {
                               return p.beta_minus()
                                          ? py::object(py::float_(*p.beta_minus()))
                                          : py::object(py::none());
                             })
      .def_property_readonly("total_mass", &ProfileDensity::total_mass)
      .def_property_readonly("c1", &ProfileDensity::c1)
      .def("nu", &ProfileDensity::nu)
      .def("cdf", &ProfileDensity::cdf)
      .def("mtilde", &ProfileDensity::mtilde)
      .def("mbar", &ProfileDensity::mbar);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("std_error", &Estimate::std_error)
      .def_readonly("n", &Estimate::n)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(mean=" + std::to_string(e.mean) +
               ", std_error=" + std::to_string(e.std_error) + ")";
      });

  py::class_<LEstimate>(m, "LEstimate")
      .def_readonly("mean", &LEstimate::mean)
      .def_readonly("std_error", &LEstimate::std_error)
      .def_readonly("censored_fraction", &LEstimate::censored_fraction)
      .def_readonly("censor_tail_rate", &LEstimate::censor_tail_rate)
      .def_readonly("n", &LEstimate::n);

  m.def("estimate_L", &estimate_L, py::arg("params"), py::arg("kernel"),
        py::arg("q"), py::arg("n_paths"), py::arg("t_max"), py::arg("seed"),
        py::arg("threads") = 1);

  m.def(
      "feynman_kac_indicator",
      [](const ModelParams& p, const FragmentationKernel& k, double lo,
         double hi, double t, double x, std::int64_t n_paths,
         std::uint64_t seed, int threads) {
        return feynman_kac(
            p, k, [lo, hi](double v) { return (v >= lo && v < hi) ? 1.0 : 0.0; },
            t, x, n_paths, seed, threads);
      },
      py::arg("params"), py::arg("kernel"), py::arg("lo"), py::arg("hi"),
      py::arg("t"), py::arg("x"), py::arg("n_paths"), py::arg("seed"),
      py::arg("threads") = 1);

  m.def(
      "semigroup_growth",
      [](const ModelParams& p, const FragmentationKernel& k, double t,
         double x, std::int64_t n_paths, std::uint64_t seed, int threads) {
        return feynman_kac(p, k, [](double) { return 1.0; }, t, x, n_paths,
                           seed, threads);
      },
      py::arg("params"), py::arg("kernel"), py::arg("t"), py::arg("x"),
      py::arg("n_paths"), py::arg("seed"), py::arg("threads") = 1);

  m.def(
      "occupation_masses",
      [](const ModelParams& p, const FragmentationKernel& k, double t_total,
         std::uint64_t seed) {
        const auto h = occupation_histogram(p, k, t_total, 1e-4, 1e4, 64, seed);
        return py::make_tuple(h.time_below_one / h.t_total,
                              h.time_above_one / h.t_total);
      },
      py::arg("params"), py::arg("kernel"), py::arg("t_total"),
      py::arg("seed"));

  m.def(
      "pde_profile",
      [](const ModelParams& p, const FragmentationKernel& k, double x_min,
         double x_max, int n_cells, double t_final) {
        const Grid grid = Grid::log_uniform(x_min, x_max, n_cells);
        GrowthFragOperator op(grid, p, k);
        PdeState state;
        state.u.resize(grid.n());
        for (int i = 0; i < grid.n(); ++i) {
          const double y = std::log(grid.center(i));
          state.u[i] = std::exp(-0.5 * y * y / (0.25 * 0.25));
        }
        double total = 0.0;
        for (int i = 0; i < grid.n(); ++i) total += state.u[i] * grid.dx(i);
        for (auto& v : state.u) v /= total;
        evolve_and_observe(op, state, t_final, {}, 1.0);
        std::vector<double> x(grid.n()), dens(grid.n());
        const double count = op.count(state.u);
        for (int i = 0; i < grid.n(); ++i) {
          x[i] = grid.center(i);
          dens[i] = state.u[i] / count;
        }
        return py::make_tuple(x, dens);
      },
      py::arg("params"), py::arg("kernel"), py::arg("x_min") = 1e-3,
      py::arg("x_max") = 1e3, py::arg("n_cells") = 512,
      py::arg("t_final") = 10.0);
}
