#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavbc/asymptotic.hpp"
#include "uavbc/core_model.hpp"
#include "uavbc/fixed_region.hpp"
#include "uavbc/hfh_solver.hpp"
#include "uavbc/oracle.hpp"
#include "uavbc/tdma_solver.hpp"

namespace py = pybind11;
using namespace uavbc;

namespace {

py::tuple pair(const RatePair& r) { return py::make_tuple(r.r1, r.r2); }

py::dict trajectory(const HfhTrajectory& t) {
  py::dict d;
  d["x_I"] = t.x_I;
  d["x_F"] = t.x_F;
  d["t_I"] = t.t_I;
  d["t_F"] = t.t_F;
  return d;
}

py::list boundary_rows(const RegionBoundary& b) {
  py::list rows;
  for (const RegionPoint& pt : b.points) {
    py::dict row;
    row["alpha1"] = pt.profile.alpha1;
    row["alpha2"] = pt.profile.alpha2;
    row["r1"] = pt.rate_pair.r1;
    row["r2"] = pt.rate_pair.r2;
    row["trajectory"] = pt.trajectory ? py::object(trajectory(*pt.trajectory)) : py::object(py::none());
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capacity regions of a UAV-served two-user broadcast channel";

  py::register_exception<Error>(m, "UavbcError");

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](double gamma0, double sigma2, double H, double D, double Pbar, double V,
                       double T) {
             SystemParams p;
             p.gamma0 = gamma0;
             p.sigma2 = sigma2;
             p.H = H;
             p.D = D;
             p.Pbar = Pbar;
             p.V = V;
             p.T = T;
             return validate_params(p);
           }),
           py::arg("gamma0"), py::arg("sigma2"), py::arg("H"), py::arg("D"), py::arg("Pbar"),
           py::arg("V"), py::arg("T"))
      .def_readonly("gamma0", &SystemParams::gamma0)
      .def_readonly("sigma2", &SystemParams::sigma2)
      .def_readonly("H", &SystemParams::H)
      .def_readonly("D", &SystemParams::D)
      .def_readonly("Pbar", &SystemParams::Pbar)
      .def_readonly("V", &SystemParams::V)
      .def_readonly("T", &SystemParams::T)
      .def_readonly("beta0", &SystemParams::beta0)
      .def("with_motion", [](SystemParams p, double V, double T) {
        p.V = V;
        p.T = T;
        return validate_params(p);
      }, py::arg("V"), py::arg("T"))
      .def("with_power", [](SystemParams p, double Pbar) {
        p.Pbar = Pbar;
        return validate_params(p);
      }, py::arg("Pbar"));

  m.def("reference_params", &reference_params);
  m.def("dbm_to_watts", &dbm_to_watts);
  m.def("db_to_linear", &db_to_linear);

  m.def("sc_rate_pair", [](const SystemParams& p, double x, double p1, double p2) {
    return pair(sc_rate_pair(p, x, p1, p2));
  }, py::arg("params"), py::arg("x"), py::arg("p1"), py::arg("p2"));

  m.def("fixed_boundary", [](const SystemParams& p, double x, double alpha1, double alpha2) {
    const FixedBoundaryPoint b = fixed_boundary(p, x, make_profile(alpha1, alpha2));
    return py::make_tuple(b.p1, b.p2, b.rate_pair.r1, b.rate_pair.r2);
  }, py::arg("params"), py::arg("x"), py::arg("alpha1"), py::arg("alpha2"),
     "(p1, p2, r1, r2) on the boundary of the fixed-position region");

  m.def("intersection_point", [](const SystemParams& p, double xB, double xC) {
    return pair(intersection_point(p, xB, xC));
  }, py::arg("params"), py::arg("xB"), py::arg("xC"));

  m.def("region_tinf", [](const SystemParams& p, int n) {
    return boundary_rows(region_tinf(p, uniform_profiles(n)));
  }, py::arg("params"), py::arg("n_profiles"));

  m.def("region_high_snr", [](const SystemParams& p, int n) {
    return boundary_rows(region_high_snr(p, uniform_profiles(n)));
  }, py::arg("params"), py::arg("n_profiles"));

  m.def("solve_v0", [](const SystemParams& p, double alpha1, double alpha2) {
    const HoverSolution h = solve_v0(p, make_profile(alpha1, alpha2));
    py::dict d;
    d["x"] = h.x_star;
    d["p1"] = h.p1;
    d["p2"] = h.p2;
    d["r1"] = h.rate_pair.r1;
    d["r2"] = h.rate_pair.r2;
    return d;
  }, py::arg("params"), py::arg("alpha1"), py::arg("alpha2"));

  m.def("solve_profile", [](const SystemParams& p, double alpha1, double alpha2, int threads) {
    SearchConfig cfg;
    cfg.threads = threads;
    BoundarySolution s;
    {
      py::gil_scoped_release release;
      s = solve_profile(p, make_profile(alpha1, alpha2), cfg);
    }
    py::dict d;
    d["r"] = s.r;
    d["r1"] = s.rate_pair.r1;
    d["r2"] = s.rate_pair.r2;
    d["mu"] = s.mu;
    d["trajectory"] = trajectory(s.trajectory);
    d["slots"] = s.schedule.slots.size();
    return d;
  }, py::arg("params"), py::arg("alpha1"), py::arg("alpha2"), py::arg("threads") = 1);

  m.def("tdma_solve_profile", [](const SystemParams& p, double alpha1, double alpha2) {
    const TdmaSolution s = tdma_solve_profile(p, make_profile(alpha1, alpha2));
    py::dict d;
    d["r"] = s.r;
    d["r1"] = s.rate_pair.r1;
    d["r2"] = s.rate_pair.r2;
    d["t1"] = s.t1;
    d["family"] = to_string(s.diagnostics.family);
    d["trajectory"] = trajectory(s.trajectory);
    return d;
  }, py::arg("params"), py::arg("alpha1"), py::arg("alpha2"));

  m.def("dp_trajectory_oracle", [](const SystemParams& p, double alpha1, double alpha2,
                                   int n_slots, int n_positions) {
    DpConfig cfg;
    cfg.n_slots = n_slots;
    cfg.n_positions = n_positions;
    DpResult r;
    {
      py::gil_scoped_release release;
      r = dp_trajectory_oracle(p, make_profile(alpha1, alpha2), cfg);
    }
    py::dict d;
    d["r"] = r.r;
    d["r1"] = r.rate_pair.r1;
    d["r2"] = r.rate_pair.r2;
    d["path"] = r.path;
    return d;
  }, py::arg("params"), py::arg("alpha1"), py::arg("alpha2"), py::arg("n_slots") = 64,
     py::arg("n_positions") = 51);
}
