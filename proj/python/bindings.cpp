#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flywheel/approx.hpp"
#include "flywheel/exact.hpp"
#include "flywheel/io.hpp"
#include "flywheel/oracle.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Flywheel state-of-charge evolution engine";

    py::register_exception<flywheel::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<flywheel::IoError>(m, "IoError", PyExc_IOError);
    py::register_exception<flywheel::NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<flywheel::TransitionCase>(m, "TransitionCase")
        .value("ZeroIn", flywheel::TransitionCase::ZeroIn)
        .value("ZeroPrev", flywheel::TransitionCase::ZeroPrev)
        .value("SameSign", flywheel::TransitionCase::SameSign)
        .value("OppositeNoSwitch", flywheel::TransitionCase::OppositeNoSwitch)
        .value("OppositeSwitch", flywheel::TransitionCase::OppositeSwitch);

    py::enum_<flywheel::SimMode>(m, "SimMode")
        .value("Unconstrained", flywheel::SimMode::Unconstrained)
        .value("Clamp", flywheel::SimMode::Clamp);

    py::enum_<flywheel::ApproxMode>(m, "ApproxMode")
        .value("Full", flywheel::ApproxMode::Full)
        .value("Truncated", flywheel::ApproxMode::Truncated);

    py::enum_<flywheel::SlotFormula>(m, "SlotFormula")
        .value("SplitEfficiency", flywheel::SlotFormula::SplitEfficiency)
        .value("SingleEfficiency", flywheel::SlotFormula::SingleEfficiency);

    py::class_<flywheel::FlywheelParams>(m, "FlywheelParams")
        .def(py::init([](double t_loss_s, double t_cont_s, double e_c, double e_d,
                         double e_init_j, double e_cap_j, double p_rated_w, double delta_s,
                         double p_prev_init_w) {
                 flywheel::FlywheelParams p{t_loss_s, t_cont_s, e_c,     e_d,          e_init_j,
                                            e_cap_j,  p_rated_w, delta_s, p_prev_init_w};
                 flywheel::validate_params(p);
                 return p;
             }),
             py::arg("t_loss_s"), py::arg("t_cont_s"), py::arg("e_c"), py::arg("e_d"),
             py::arg("e_init_j"), py::arg("e_cap_j"), py::arg("p_rated_w"), py::arg("delta_s"),
             py::arg("p_prev_init_w") = 0.0)
        .def_readwrite("t_loss_s", &flywheel::FlywheelParams::t_loss_s)
        .def_readwrite("t_cont_s", &flywheel::FlywheelParams::t_cont_s)
        .def_readwrite("e_c", &flywheel::FlywheelParams::e_c)
        .def_readwrite("e_d", &flywheel::FlywheelParams::e_d)
        .def_readwrite("e_init_j", &flywheel::FlywheelParams::e_init_j)
        .def_readwrite("e_cap_j", &flywheel::FlywheelParams::e_cap_j)
        .def_readwrite("p_rated_w", &flywheel::FlywheelParams::p_rated_w)
        .def_readwrite("delta_s", &flywheel::FlywheelParams::delta_s)
        .def_readwrite("p_prev_init_w", &flywheel::FlywheelParams::p_prev_init_w);

    py::class_<flywheel::PowerProfile>(m, "PowerProfile")
        .def(py::init<double, std::vector<double>>(), py::arg("delta_s"), py::arg("powers_w"))
        .def_readwrite("delta_s", &flywheel::PowerProfile::delta_s)
        .def_readwrite("powers_w", &flywheel::PowerProfile::powers_w);

    py::class_<flywheel::SlotTransition>(m, "SlotTransition")
        .def_readonly("case_tag", &flywheel::SlotTransition::case_tag)
        .def_readonly("eta_in", &flywheel::SlotTransition::eta_in)
        .def_readonly("eta_prev", &flywheel::SlotTransition::eta_prev)
        .def_readonly("eta_eff", &flywheel::SlotTransition::eta_eff)
        .def_readonly("t_change_s", &flywheel::SlotTransition::t_change_s);

    py::class_<flywheel::ModelCoefficients>(m, "ModelCoefficients")
        .def_readonly("gamma", &flywheel::ModelCoefficients::gamma)
        .def_readonly("p_coef_s", &flywheel::ModelCoefficients::p_coef_s)
        .def_readonly("q_coef_inv_s", &flywheel::ModelCoefficients::q_coef_inv_s);

    py::class_<flywheel::TraceEntry>(m, "TraceEntry")
        .def_readonly("slot", &flywheel::TraceEntry::slot)
        .def_readonly("t_s", &flywheel::TraceEntry::t_s)
        .def_readonly("e_j", &flywheel::TraceEntry::e_j);

    py::class_<flywheel::EnergyTrace>(m, "EnergyTrace")
        .def_readonly("entries", &flywheel::EnergyTrace::entries)
        .def_readonly("transitions", &flywheel::EnergyTrace::transitions)
        .def_readonly("saturated", &flywheel::EnergyTrace::saturated)
        .def("energies", &flywheel::EnergyTrace::energies);

    py::class_<flywheel::SlotEnergy>(m, "SlotEnergy")
        .def_readonly("value_j", &flywheel::SlotEnergy::value_j)
        .def_readonly("case_tag", &flywheel::SlotEnergy::case_tag)
        .def_readonly("branch", &flywheel::SlotEnergy::branch);

    py::class_<flywheel::BoundEntry>(m, "BoundEntry")
        .def_readonly("slot", &flywheel::BoundEntry::slot)
        .def_readonly("gap_j", &flywheel::BoundEntry::gap_j)
        .def_readonly("bound_j", &flywheel::BoundEntry::bound_j)
        .def_readonly("satisfied", &flywheel::BoundEntry::satisfied);

    py::class_<flywheel::BoundReport>(m, "BoundReport")
        .def_readonly("entries", &flywheel::BoundReport::entries)
        .def_readonly("r_max_w", &flywheel::BoundReport::r_max_w)
        .def_readonly("asymptotic_bound_j", &flywheel::BoundReport::asymptotic_bound_j)
        .def("all_satisfied", &flywheel::BoundReport::all_satisfied);

    py::class_<flywheel::OracleConfig>(m, "OracleConfig")
        .def(py::init<>())
        .def(py::init([](double quad_tol, int substeps_per_slot, bool split_at_t_change) {
                 return flywheel::OracleConfig{quad_tol, substeps_per_slot, split_at_t_change};
             }),
             py::arg("quad_tol") = 1e-12, py::arg("substeps_per_slot") = 1000,
             py::arg("split_at_t_change") = true)
        .def_readwrite("quad_tol", &flywheel::OracleConfig::quad_tol)
        .def_readwrite("substeps_per_slot", &flywheel::OracleConfig::substeps_per_slot)
        .def_readwrite("split_at_t_change", &flywheel::OracleConfig::split_at_t_change);

    m.def("validate_params", &flywheel::validate_params, py::arg("params"));
    m.def("validate_profile", &flywheel::validate_profile, py::arg("profile"), py::arg("params"));
    m.def("loss_time_constant", &flywheel::loss_time_constant, py::arg("inertia_kg_m2"),
          py::arg("loss_factor"));
    m.def("energy_of_speed", &flywheel::energy_of_speed, py::arg("inertia_kg_m2"),
          py::arg("omega_rad_s"));
    m.def("speed_of_energy", &flywheel::speed_of_energy, py::arg("inertia_kg_m2"),
          py::arg("energy_j"));
    m.def("self_discharge_factor", &flywheel::self_discharge_factor, py::arg("delta_s"),
          py::arg("t_loss_s"));
    m.def("coefficients", &flywheel::coefficients, py::arg("t_loss_s"), py::arg("t_cont_s"),
          py::arg("delta_s"));
    m.def("classify_transition", &flywheel::classify_transition, py::arg("p_in_w"),
          py::arg("p_prev_w"), py::arg("delta_s"), py::arg("t_cont_s"), py::arg("e_c"),
          py::arg("e_d"));
    m.def("case_efficiency", &flywheel::case_efficiency, py::arg("transition"));
    m.def("filtered_mech_power", &flywheel::filtered_mech_power, py::arg("t_s"),
          py::arg("p_in_w"), py::arg("p_prev_w"), py::arg("t_cont_s"), py::arg("e_c"),
          py::arg("e_d"));

    m.def("slot_energy_exact", &flywheel::slot_energy_exact, py::arg("p_in_w"),
          py::arg("p_prev_w"), py::arg("params"));
    m.def("step_exact", &flywheel::step_exact, py::arg("e_prev_j"), py::arg("p_in_w"),
          py::arg("p_prev_w"), py::arg("params"));
    m.def("simulate_exact", &flywheel::simulate_exact, py::arg("profile"), py::arg("params"),
          py::arg("mode") = flywheel::SimMode::Unconstrained);

    m.def("slot_energy_approx", &flywheel::slot_energy_approx, py::arg("p_in_w"),
          py::arg("p_prev_w"), py::arg("params"), py::arg("mode"));
    m.def("simulate_approx", &flywheel::simulate_approx, py::arg("profile"), py::arg("params"),
          py::arg("mode"), py::arg("sim_mode") = flywheel::SimMode::Unconstrained);
    m.def("error_bound", &flywheel::error_bound, py::arg("k"), py::arg("delta_s"),
          py::arg("t_loss_s"), py::arg("profile"), py::arg("e_d"));
    m.def("check_bound", &flywheel::check_bound, py::arg("profile"), py::arg("params"),
          py::arg("mode"));

    m.def("quadrature_slot_energy", &flywheel::quadrature_slot_energy, py::arg("p_in_w"),
          py::arg("p_prev_w"), py::arg("params"), py::arg("weighted"),
          py::arg("config") = flywheel::OracleConfig{});
    m.def("integrate_ode", &flywheel::integrate_ode, py::arg("profile"), py::arg("params"),
          py::arg("config") = flywheel::OracleConfig{});
    m.def("integrate_physical", &flywheel::integrate_physical, py::arg("profile"),
          py::arg("params"), py::arg("config") = flywheel::OracleConfig{});
    m.def("simulate_baseline", &flywheel::simulate_baseline, py::arg("profile"),
          py::arg("params"));

    m.def("load_params", &flywheel::load_params, py::arg("path"));
    m.def("load_profile", &flywheel::load_profile, py::arg("path"), py::arg("delta_s"));

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
