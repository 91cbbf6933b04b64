#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "susy_graphene/app.hpp"
#include "susy_graphene/chain.hpp"
#include "susy_graphene/config.hpp"
#include "susy_graphene/errors.hpp"
#include "susy_graphene/model.hpp"
#include "susy_graphene/observables.hpp"
#include "susy_graphene/oracle.hpp"
#include "susy_graphene/specfun.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace susy;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Applies f to every element of xs, releasing the GIL while the chain is evaluated.
template <typename F>
py::array_t<double> map_array(const Array& xs, F f) {
  const auto in = xs.unchecked<1>();
  py::array_t<double> out(in.shape(0));
  auto o = out.mutable_unchecked<1>();
  std::vector<double> x(in.shape(0));
  for (py::ssize_t i = 0; i < in.shape(0); ++i) x[i] = in(i);
  std::vector<double> y;
  {
    py::gil_scoped_release release;
    y = sample_points(x, f);
  }
  for (py::ssize_t i = 0; i < in.shape(0); ++i) o(i) = y[i];
  return out;
}

std::vector<double> to_vector(const Array& a) {
  const auto in = a.unchecked<1>();
  std::vector<double> v(in.shape(0));
  for (py::ssize_t i = 0; i < in.shape(0); ++i) v[i] = in(i);
  return v;
}

py::dict spectrum_dict(const SpectrumEntry& e) {
  return py::dict("n"_a = e.n, "schrodinger_energy"_a = e.schrodinger_energy, "dirac_energy"_a = e.dirac_energy);
}

}  // namespace

PYBIND11_MODULE(_susy_graphene, m) {
  m.doc() = "Darboux chains of the oscillator and Morse wells and graphene observables";

  auto base = py::register_exception<Error>(m, "SusyError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<ChainError>(m, "ChainError", base.ptr());
  py::register_exception<InconclusiveError>(m, "InconclusiveError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
  py::register_exception<NonNormalizableError>(m, "NonNormalizableError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<GridMismatchError>(m, "GridMismatchError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  // Special functions, collapsed to plain floats (inf on overflow).
  m.def("kummer_m", [](double a, double b, double z) { return specfun::kummer_m(a, b, z).to_double(); }, "a"_a,
        "b"_a, "z"_a);
  m.def("log_kummer_m", [](double a, double b, double z) {
    const auto v = specfun::kummer_m(a, b, z);
    return py::make_tuple(v.sign(), v.log_abs());
  }, "a"_a, "b"_a, "z"_a, "(sign, ln|M|) of 1F1(a; b; z).");
  m.def("tricomi_u", [](double a, double b, double z) { return specfun::tricomi_u(a, b, z).to_double(); }, "a"_a,
        "b"_a, "z"_a);
  m.def("log_gamma", &specfun::log_gamma, "x"_a);
  m.def("hermite", &specfun::hermite, "n"_a, "x"_a);
  m.def("laguerre", &specfun::laguerre, "n"_a, "alpha"_a, "x"_a);

  py::class_<UnitSystem>(m, "UnitSystem")
      .def(py::init([](double hbar, double c, double e_charge, double v_fermi) {
             UnitSystem u{hbar, c, e_charge, v_fermi};
             u.validate();
             return u;
           }),
           "hbar"_a = 1.0, "c"_a = 1.0, "e_charge"_a = 1.0, "v_fermi"_a = 1.0)
      .def_readonly("hbar", &UnitSystem::hbar)
      .def_readonly("c", &UnitSystem::c)
      .def_readonly("e_charge", &UnitSystem::e_charge)
      .def_readonly("v_fermi", &UnitSystem::v_fermi);

  py::class_<ModelSpec>(m, "Model")
      .def_static("oscillator", &ModelSpec::oscillator, "omega"_a, "k_wave"_a, "units"_a = UnitSystem{})
      .def_static("morse", &ModelSpec::morse, "alpha"_a, "d_strength"_a, "k_wave"_a, "units"_a = UnitSystem{})
      .def_property_readonly("kind",
                             [](const ModelSpec& s) { return s.kind == ModelKind::Oscillator ? "oscillator" : "morse"; })
      .def_readonly("k_wave", &ModelSpec::k_wave)
      .def_readonly("omega", &ModelSpec::omega)
      .def_readonly("alpha", &ModelSpec::alpha)
      .def_readonly("d_strength", &ModelSpec::d_strength)
      .def("potential", [](const ModelSpec& s, const Array& xs) {
        return map_array(xs, [s](double x) { return base_potential(s, Partner::Minus, x); });
      }, "xs"_a, "V^- on xs.")
      .def("partner_potential", [](const ModelSpec& s, const Array& xs) {
        return map_array(xs, [s](double x) { return base_potential(s, Partner::Plus, x); });
      }, "xs"_a)
      .def("field", [](const ModelSpec& s, const Array& xs) {
        return map_array(xs, [s](double x) { return base_field(s, x); });
      }, "xs"_a)
      .def("energy", &base_energy, "n"_a)
      .def("eigenfunction", [](const ModelSpec& s, std::size_t n, const Array& xs) {
        if (n >= bound_state_count(s)) throw ModelError("no bound state " + std::to_string(n));
        return map_array(xs, [s, n](double x) { return base_eigenfunction(s, n, x).value; });
      }, "n"_a, "xs"_a)
      .def("default_grid", [](const ModelSpec& s, std::size_t n) {
        const Grid g = default_grid(s, n);
        return py::make_tuple(g.x_min, g.x_max, g.n_points);
      }, "n_points"_a = 4001, "(x_min, x_max, n_points) covering the well.");

  py::class_<ChainState>(m, "Chain")
      .def(py::init([](const ModelSpec& model, const std::vector<std::pair<double, double>>& steps) {
             return build_chain(model, steps);
           }),
           "model"_a, "steps"_a, "Builds the chain from (epsilon, nu) pairs.")
      .def_property_readonly("depth", &ChainState::depth)
      .def_property_readonly("cumulative_shift", &ChainState::cumulative_shift)
      .def("extend", &extend_chain, "epsilon"_a, "nu"_a)
      .def("potential", [](const ChainState& c, const Array& xs) {
        return map_array(xs, [c](double x) { return potential_k(c, x); });
      }, "xs"_a)
      .def("potential_wronskian", [](const ChainState& c, const Array& xs) {
        return map_array(xs, [c](double x) { return potential_k_wronskian(c, x); });
      }, "xs"_a)
      .def("superpotential", [](const ChainState& c, const Array& xs) {
        return map_array(xs, [c](double x) { return superpotential_k(c, x); });
      }, "xs"_a)
      .def("field", [](const ChainState& c, const Array& xs) {
        return map_array(xs, [c](double x) { return field_k(c, x); });
      }, "xs"_a)
      .def("spectrum", [](const ChainState& c, std::size_t n_max) {
        py::list out;
        for (const auto& e : spectrum_k(c, n_max)) out.append(spectrum_dict(e));
        return out;
      }, "n_max"_a)
      .def("eigenfunction", [](const ChainState& c, std::size_t n, const Array& xs) {
        return map_array(xs, eigenfunction_k(c, n));
      }, "n"_a, "xs"_a)
      .def("ground_state", [](const ChainState& c, const Array& xs) {
        return map_array(xs, ground_state_k(c));
      }, "xs"_a, "Normalized 1/u of the last level; raises NonNormalizableError when it is not square integrable.")
      .def("density", [](const ChainState& c, std::size_t n, const Array& xs) {
        assemble_spinor(c, n);  // range check
        return map_array(xs, [c, n](double x) { return probability_density(spinor_at(c, n, c.sample(x))); });
      }, "n"_a, "xs"_a)
      .def("current", [](const ChainState& c, std::size_t n, const Array& xs) {
        const SpinorState s = assemble_spinor(c, n);
        if (s.upper_vanishes) return map_array(xs, [](double) { return 0.0; });
        const UnitSystem u = c.model().units;
        return map_array(xs, [c, n, u](double x) { return probability_current(spinor_at(c, n, c.sample(x)), u); });
      }, "n"_a, "xs"_a)
      .def("dirac_energy", [](const ChainState& c, std::size_t n) { return assemble_spinor(c, n).dirac_energy; },
           "n"_a);

  m.def("diagonalize", [](const Array& xs, const Array& v, std::size_t count) {
    const DiagonalizationResult r = diagonalize(ScalarField(to_vector(xs), to_vector(v)), count);
    py::array_t<double> vecs({r.eigenvectors.size(), static_cast<std::size_t>(r.grid.n_points)});
    auto w = vecs.mutable_unchecked<2>();
    for (std::size_t i = 0; i < r.eigenvectors.size(); ++i) {
      for (std::size_t j = 0; j < r.grid.n_points; ++j) w(i, j) = r.eigenvectors[i][j];
    }
    return py::make_tuple(py::array_t<double>(r.eigenvalues.size(), r.eigenvalues.data()), vecs, r.warnings);
  }, "xs"_a, "v"_a, "count"_a, "Lowest eigenpairs of the Dirichlet finite-difference Hamiltonian.");
  m.def("residual", [](const Array& xs, const Array& v, const Array& psi, double energy) {
    const auto x = to_vector(xs);
    return residual(ScalarField(x, to_vector(v)), ScalarField(x, to_vector(psi)), energy);
  }, "xs"_a, "v"_a, "psi"_a, "energy"_a);
  m.def("inner_product", [](const Array& xs, const Array& f, const Array& g) {
    const auto x = to_vector(xs);
    return inner_product(ScalarField(x, to_vector(f)), ScalarField(x, to_vector(g)));
  }, "xs"_a, "f"_a, "g"_a);

  m.def("verify", [](const std::string& config, const std::vector<std::string>& tolerances) {
    std::ostringstream out, err;
    const int code = cmd_verify(config, tolerances, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "config"_a, "tolerances"_a = std::vector<std::string>{},
        "Runs the verify command; returns (exit_code, json_report, diagnostics).");
  m.def("run", [](const std::string& config, const std::string& out_dir) {
    std::ostringstream out, err;
    const int code = cmd_run(config, std::filesystem::path(out_dir), std::nullopt, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "config"_a, "out_dir"_a);
}
