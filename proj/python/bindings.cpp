#include "cavlat/config.hpp"
#include "cavlat/experiments.hpp"
#include "cavlat/params.hpp"
#include "cavlat/scan.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cavlat;

namespace {

RunConfig load(const std::string& text) { return run_config_from(Config::from_string(text)); }

py::array_t<double> axis_values(const ScanAxis& a) {
  std::vector<double> v(a.points);
  for (int i = 0; i < a.points; ++i) v[i] = a.at(i);
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

// Channels come back as (ny, nx) arrays; axis values stay in rad/s.
py::dict grid_to_dict(const SpectrumGrid& g) {
  py::dict out;
  out["x_axis"] = g.x.name;
  out["x"] = axis_values(g.x);
  if (g.y) {
    out["y_axis"] = g.y->name;
    out["y"] = axis_values(*g.y);
  }
  py::dict channels;
  for (std::size_t c = 0; c < g.channels.size(); ++c) {
    py::array_t<double> arr({g.ny(), g.nx()});
    std::copy(g.values[c].begin(), g.values[c].end(), arr.mutable_data());
    channels[py::str(g.channels[c])] = arr;
  }
  out["channels"] = channels;
  out["provenance"] = g.provenance;
  return out;
}

py::dict report(const std::string& text) {
  const RunConfig rc = load(text);
  const DerivedParams d = derive(rc.phys);
  const ResonanceShift rs = resonance_shift(d);
  py::dict j;
  j["geometry"] = to_string(rc.geometry());
  j["gamma"] = d.gamma;
  j["kappa"] = d.kappa;
  j["fsr_hz"] = d.fsr;
  j["finesse"] = rc.phys.finesse;
  j["r_mir"] = rc.phys.r_mir;
  j["g"] = d.g;
  j["cooperativity"] = d.upsilon;
  j["beta0"] = std::abs(d.beta0);
  j["atoms_per_layer"] = d.n1;
  j["optical_density"] = d.od;
  j["eta"] = d.eta;
  j["resonance_shift"] = rs.shift;
  j["resonance_shift_over_kappa"] = rs.ratio_to_kappa;
  return j;
}

py::dict scan(const std::string& text, const std::optional<std::string>& model, int threads) {
  const RunConfig rc = load(text);
  const Model m = model ? parse_model(*model) : rc.model;
  SpectrumGrid g;
  {
    py::gil_scoped_release release;
    g = run_scan(rc, m, threads);
  }
  return grid_to_dict(g);
}

py::dict compare(const std::string& text, int threads) {
  const RunConfig rc = load(text);
  ModelComparison cmp;
  {
    py::gil_scoped_release release;
    cmp = compare_models(rc, threads);
  }
  py::dict diffs;
  for (const auto& d : cmp.diffs) {
    py::dict e;
    e["max_abs"] = d.max_abs;
    e["mean_abs"] = d.mean_abs;
    e["x_at_max"] = d.x_at_max;
    e["y_at_max"] = d.y_at_max;
    diffs[py::str(d.channel)] = e;
  }
  py::dict out;
  out["odm"] = grid_to_dict(cmp.odm);
  out["tmm"] = grid_to_dict(cmp.tmm);
  out["diffs"] = diffs;
  return out;
}

py::dict free_space(const std::string& text) {
  const RunConfig rc = load(text);
  const auto rows = free_space_intensity(free_space_spec(rc));
  const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
  py::array_t<int> layer(n);
  py::array_t<double> intensity(n), flux(n), transmission(n), beer(n), ohm(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    layer.mutable_at(i) = rows[i].layer;
    intensity.mutable_at(i) = rows[i].intensity;
    flux.mutable_at(i) = rows[i].flux;
    transmission.mutable_at(i) = rows[i].transmission;
    beer.mutable_at(i) = rows[i].beer;
    ohm.mutable_at(i) = rows[i].ohm;
  }
  py::dict out;
  out["layer"] = layer;
  out["intensity"] = intensity;
  out["flux"] = flux;
  out["transmission"] = transmission;
  out["beer"] = beer;
  out["ohm"] = ohm;
  return out;
}

}  // namespace

PYBIND11_MODULE(_cavlat, m) {
  m.doc() = "Cold-atom lattices in linear and ring cavities";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("report", &report, py::arg("config"),
        "Derived parameters for a configuration given as key = value text.");
  m.def("scan", &scan, py::arg("config"), py::arg("model") = py::none(), py::arg("threads") = 1,
        "Spectrum scan; channels are (ny, nx) arrays.");
  m.def("compare", &compare, py::arg("config"), py::arg("threads") = 1,
        "Runs both models on the same grid and reports per-channel differences.");
  m.def("free_space", &free_space, py::arg("config"),
        "Layer-resolved intensity and transmission of the lattice without mirrors.");
  m.def("lattice_site_phase", &lattice_site_phase, py::arg("delta_lat"), py::arg("lambda_lat"),
        py::arg("lambda_a"));
  m.attr("gamma_default") = PhysParams{}.gamma;
}
