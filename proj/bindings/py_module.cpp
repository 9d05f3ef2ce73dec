/*
 * Copyright 2026 the dieselnet authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dieselnet/pipeline.hpp"

namespace py = pybind11;
using namespace dieselnet;

PYBIND11_MODULE(_dieselnet, m) {
    m.doc() = "Neural modelling and emission-constrained speed control of a "
              "turbocharged diesel engine";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalFault>(m, "NumericalFault", PyExc_ArithmeticError);

    // ---- neural core -------------------------------------------------------
    py::class_<Mlp>(m, "Mlp")
        .def(py::init<int, int>(), py::arg("n_in"), py::arg("n_hidden"))
        .def(py::init<int, int, const Eigen::VectorXd&>(), py::arg("n_in"),
             py::arg("n_hidden"), py::arg("theta"))
        .def_static(
            "random",
            [](int n_in, int n_hidden, std::uint64_t seed) {
                Rng rng(seed);
                return Mlp::random(n_in, n_hidden, rng);
            },
            py::arg("n_in"), py::arg("n_hidden"), py::arg("seed"))
        .def_property_readonly("n_in", &Mlp::n_in)
        .def_property_readonly("n_hidden", &Mlp::n_hidden)
        .def_property_readonly("param_count", &Mlp::param_count)
        .def_property("params", &Mlp::params, &Mlp::set_params)
        .def("forward", &Mlp::forward, py::arg("x"))
        .def("input_jacobian", &Mlp::input_jacobian, py::arg("x"))
        .def("weight_jacobian", &Mlp::weight_jacobian, py::arg("x"));

    py::class_<LmConfig>(m, "LmConfig")
        .def(py::init<>())
        .def_readwrite("lambda0", &LmConfig::lambda0)
        .def_readwrite("lambda_up", &LmConfig::lambda_up)
        .def_readwrite("lambda_down", &LmConfig::lambda_down)
        .def_readwrite("max_iterations", &LmConfig::max_iterations)
        .def_readwrite("tolerance", &LmConfig::tolerance)
        .def_readwrite("seed", &LmConfig::seed);

    m.def(
        "lm_train",
        [](const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
           const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
           const Eigen::VectorXd& theta0, const LmConfig& cfg) {
            const LmResult result = lm_train(residual, jacobian, theta0, cfg);
            return py::make_tuple(result.theta, result.sse, result.converged);
        },
        py::arg("residual"), py::arg("jacobian"), py::arg("theta0"),
        py::arg("config") = LmConfig{},
        "Batch Levenberg-Marquardt; returns (theta, sse, converged)");

    // ---- surrogate plant ----------------------------------------------------
    py::class_<PlantParams>(m, "PlantParams")
        .def(py::init<>())
        .def_readwrite("ts", &PlantParams::ts)
        .def_readwrite("fuel_gain", &PlantParams::fuel_gain)
        .def_readwrite("boost_tau", &PlantParams::boost_tau)
        .def_readwrite("air_gain", &PlantParams::air_gain)
        .def_readwrite("torque_gain", &PlantParams::torque_gain)
        .def_readwrite("friction", &PlantParams::friction)
        .def_readwrite("drag", &PlantParams::drag)
        .def_readwrite("opacity_tau", &PlantParams::opacity_tau)
        .def_readwrite("sigma_R", &PlantParams::sigma_R)
        .def_readwrite("sigma_P", &PlantParams::sigma_P)
        .def_readwrite("sigma_Op", &PlantParams::sigma_Op)
        .def_readwrite("sigma_mdot", &PlantParams::sigma_mdot)
        .def_readwrite("noise_seed", &PlantParams::noise_seed);

    py::class_<PlantState>(m, "PlantState")
        .def(py::init<>())
        .def_readwrite("R", &PlantState::R)
        .def_readwrite("P", &PlantState::P)
        .def_readwrite("Op", &PlantState::Op);

    py::class_<SignalRecord>(m, "SignalRecord")
        .def_readonly("k", &SignalRecord::k)
        .def_readonly("t", &SignalRecord::t)
        .def_readonly("T", &SignalRecord::T)
        .def_readonly("R", &SignalRecord::R)
        .def_readonly("P", &SignalRecord::P)
        .def_readonly("mdot", &SignalRecord::mdot)
        .def_readonly("mdot_f", &SignalRecord::mdot_f)
        .def_readonly("Op", &SignalRecord::Op);

    py::class_<SignalLog>(m, "SignalLog")
        .def_property_readonly("ts", &SignalLog::ts)
        .def("__len__", &SignalLog::size)
        .def("__getitem__",
             [](const SignalLog& log, std::size_t i) {
                 if (i >= log.size()) throw py::index_error();
                 return log[i];
             })
        .def("channel", &SignalLog::channel, py::arg("name"));

    m.def("simulate_plant", &simulate_plant, py::arg("params"), py::arg("pump"),
          py::arg("initial") = PlantState{});
    m.def("settle_plant", &settle_plant, py::arg("params"), py::arg("pump"),
          py::arg("max_steps") = 20000, py::arg("start") = PlantState{});
    m.def("save_log", &save_log, py::arg("log"), py::arg("path"), py::arg("digest") = "");
    m.def("load_log", &load_log, py::arg("path"));

    py::class_<ExcitationConfig>(m, "ExcitationConfig")
        .def(py::init<>())
        .def_readwrite("lo", &ExcitationConfig::lo)
        .def_readwrite("hi", &ExcitationConfig::hi)
        .def_readwrite("n_levels", &ExcitationConfig::n_levels)
        .def_readwrite("hold_min", &ExcitationConfig::hold_min)
        .def_readwrite("hold_max", &ExcitationConfig::hold_max)
        .def_readwrite("amplitude_modulated", &ExcitationConfig::amplitude_modulated)
        .def_property(
            "kind",
            [](const ExcitationConfig& cfg) {
                return cfg.kind == ExcitationKind::kStaircase ? "staircase" : "prbs";
            },
            [](ExcitationConfig& cfg, const std::string& kind) {
                cfg.kind = excitation_kind_from_string(kind);
            });
    m.def("generate_excitation", &generate_excitation, py::arg("config"),
          py::arg("duration"), py::arg("seed"));

    // ---- identification -----------------------------------------------------
    py::class_<InputTerm>(m, "InputTerm")
        .def(py::init([](const std::string& channel, int lags, int delay) {
                 return InputTerm{channel, lags, delay};
             }),
             py::arg("channel"), py::arg("lags") = 1, py::arg("delay") = 1)
        .def_readwrite("channel", &InputTerm::channel)
        .def_readwrite("lags", &InputTerm::lags)
        .def_readwrite("delay", &InputTerm::delay);

    py::class_<RegressorSpec>(m, "RegressorSpec")
        .def(py::init([](const std::string& output, int output_lags,
                         const std::vector<InputTerm>& inputs) {
                 return RegressorSpec{output, output_lags, inputs};
             }),
             py::arg("output"), py::arg("output_lags"), py::arg("inputs"))
        .def_readwrite("output", &RegressorSpec::output)
        .def_readwrite("output_lags", &RegressorSpec::output_lags)
        .def_readwrite("inputs", &RegressorSpec::inputs)
        .def("__str__", &RegressorSpec::to_string);

    py::class_<SubModel>(m, "SubModel")
        .def_readonly("net", &SubModel::net)
        .def_readonly("spec", &SubModel::spec)
        .def("simulate",
             [](const SubModel& sub, const ChannelData& channels,
                const std::vector<double>& init) {
                 return simulate_submodel(sub, channels, init);
             },
             py::arg("channels"), py::arg("init"));

    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init<>())
        .def_readwrite("lm", &FitConfig::lm)
        .def_readwrite("max_restarts", &FitConfig::max_restarts)
        .def_readwrite("seed", &FitConfig::seed);

    m.def(
        "fit_oe_model",
        [](const SignalLog& log, const RegressorSpec& spec, int n_hidden,
           const FitConfig& cfg) {
            const FitResult result = fit_oe_model(log, spec, n_hidden, cfg);
            return py::make_tuple(result.model, result.sse);
        },
        py::arg("log"), py::arg("spec"), py::arg("n_hidden"),
        py::arg("config") = FitConfig{});
    m.def("fpe", &fpe, py::arg("sse"), py::arg("n_samples"), py::arg("n_params"));

    py::class_<EngineModel>(m, "EngineModel")
        .def_readonly("speed", &EngineModel::speed)
        .def_readonly("pressure", &EngineModel::pressure)
        .def_readonly("airflow", &EngineModel::airflow)
        .def_readonly("opacity", &EngineModel::opacity)
        .def_readonly("delay", &EngineModel::delay)
        .def_property_readonly("min_history", &EngineModel::min_history);

    m.def("assemble_engine_model", &assemble_engine_model, py::arg("speed"),
          py::arg("pressure"), py::arg("airflow"), py::arg("opacity"));
    m.def("save_engine_model", &save_engine_model, py::arg("model"), py::arg("dir"),
          py::arg("digest") = "");
    m.def("load_engine_model", &load_engine_model, py::arg("dir"));

    py::class_<EngineInit>(m, "EngineInit")
        .def_static("from_log", &EngineInit::from_log, py::arg("log"), py::arg("length"))
        .def_static("constant", &EngineInit::constant, py::arg("R"), py::arg("P"),
                    py::arg("mdot"), py::arg("Op"), py::arg("length"));

    m.def(
        "simulate_engine_model",
        [](const EngineModel& model, const std::vector<double>& pump,
           const EngineInit& init) {
            const EngineTrajectories traj = simulate_engine_model(model, pump, init);
            py::dict out;
            out["R"] = traj.R;
            out["P"] = traj.P;
            out["mdot"] = traj.mdot;
            out["Op"] = traj.Op;
            return out;
        },
        py::arg("model"), py::arg("pump"), py::arg("init"));

    // ---- control -------------------------------------------------------------
    py::class_<RlsState>(m, "RlsState")
        .def_static("initial", &RlsState::initial, py::arg("w0"),
                    py::arg("delta") = 1000.0)
        .def_readwrite("W", &RlsState::W)
        .def_readwrite("P", &RlsState::P);

    py::class_<CriterionWeights>(m, "CriterionWeights")
        .def(py::init([](double eta_y, double eta_z) {
                 return CriterionWeights{eta_y, eta_z};
             }),
             py::arg("eta_y") = 1.0, py::arg("eta_z") = 0.0)
        .def_readwrite("eta_y", &CriterionWeights::eta_y)
        .def_readwrite("eta_z", &CriterionWeights::eta_z);

    py::class_<SensitivityPair>(m, "SensitivityPair")
        .def(py::init([](const Eigen::VectorXd& psi_y, const Eigen::VectorXd& psi_z,
                         double e_y, double e_z) {
                 return SensitivityPair{psi_y, psi_z, e_y, e_z};
             }),
             py::arg("psi_y"), py::arg("psi_z"), py::arg("e_y"), py::arg("e_z"))
        .def_readwrite("psi_y", &SensitivityPair::psi_y)
        .def_readwrite("psi_z", &SensitivityPair::psi_z)
        .def_readwrite("e_y", &SensitivityPair::e_y)
        .def_readwrite("e_z", &SensitivityPair::e_z);

    m.def("rls_update_single", &rls_update_single, py::arg("state"), py::arg("e_y"),
          py::arg("psi_y"));
    m.def("rls_update_multi", &rls_update_multi, py::arg("state"), py::arg("pair"),
          py::arg("weights"));

    py::class_<Controller>(m, "Controller")
        .def_static(
            "random",
            [](const EngineModel& model, int n_hidden, std::uint64_t seed) {
                Rng rng(seed);
                return Controller::random(model, n_hidden, rng);
            },
            py::arg("model"), py::arg("n_hidden"), py::arg("seed"))
        .def_static("load", &Controller::load, py::arg("path"))
        .def("save", &Controller::save, py::arg("path"), py::arg("digest") = "")
        .def_property_readonly("delay", &Controller::delay)
        .def_property("weights", &Controller::weights, &Controller::set_weights)
        .def("forward",
             [](const Controller& ctrl, double r_ref_next, double r_current,
                double r_previous, double op_ref_ahead, double op_ahead) {
                 return ctrl.forward(
                     {r_ref_next, r_current, r_previous, op_ref_ahead, op_ahead});
             },
             py::arg("r_ref_next"), py::arg("r_current"), py::arg("r_previous"),
             py::arg("op_ref_ahead"), py::arg("op_ahead"));

    py::class_<ControllerTrainConfig>(m, "ControllerTrainConfig")
        .def(py::init<>())
        .def_readwrite("epochs", &ControllerTrainConfig::epochs)
        .def_readwrite("n_hidden", &ControllerTrainConfig::n_hidden)
        .def_readwrite("delta", &ControllerTrainConfig::delta)
        .def_readwrite("seed", &ControllerTrainConfig::seed);

    py::class_<EpochMetrics>(m, "EpochMetrics")
        .def_readonly("epoch", &EpochMetrics::epoch)
        .def_readonly("J", &EpochMetrics::J)
        .def_readonly("rmse_speed", &EpochMetrics::rmse_speed)
        .def_readonly("max_opacity", &EpochMetrics::max_opacity)
        .def_readonly("eta_op", &EpochMetrics::eta_op);

    m.def(
        "train_controller",
        [](const EngineModel& model, const ReferenceProfile& profile,
           const CriterionWeights& weights, const ControllerTrainConfig& cfg) {
            ControllerTrainResult result = train_controller(model, profile, weights, cfg);
            return py::make_tuple(result.controller, result.metrics);
        },
        py::arg("model"), py::arg("profile"), py::arg("weights"), py::arg("config"));

    // ---- closed loop -----------------------------------------------------------
    py::class_<ReferenceProfile>(m, "ReferenceProfile")
        .def_readwrite("ts", &ReferenceProfile::ts)
        .def_readwrite("r_ref", &ReferenceProfile::r_ref)
        .def_readwrite("op_ref", &ReferenceProfile::op_ref)
        .def("__len__", &ReferenceProfile::size);

    m.def(
        "build_profile",
        [](const std::vector<std::pair<double, double>>& steps, const std::string& mode,
           double ts, double duration, double ceiling,
           const std::function<double(double)>& steady_map) {
            std::vector<ProfileStep> parsed;
            for (const auto& [time, rpm] : steps) parsed.push_back({time, rpm});
            const OpRefMode op_mode =
                mode == "steady-map" ? OpRefMode::kSteadyMap : OpRefMode::kCeiling;
            return build_profile(parsed, op_mode, ts, duration, ceiling, steady_map);
        },
        py::arg("steps"), py::arg("mode") = "ceiling", py::arg("ts") = 0.1,
        py::arg("duration") = 60.0, py::arg("ceiling") = 15.0,
        py::arg("steady_map") = nullptr);
    m.def("default_experiment_profile", &default_experiment_profile);

    py::class_<RunMetrics>(m, "RunMetrics")
        .def_readonly("rmse_speed", &RunMetrics::rmse_speed)
        .def_readonly("rmse_transient", &RunMetrics::rmse_transient)
        .def_readonly("max_opacity", &RunMetrics::max_opacity)
        .def_readonly("opacity_excess", &RunMetrics::opacity_excess);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("U", &RunResult::U)
        .def_readonly("R", &RunResult::R)
        .def_readonly("P", &RunResult::P)
        .def_readonly("mdot", &RunResult::mdot)
        .def_readonly("Op", &RunResult::Op)
        .def_readonly("profile", &RunResult::profile)
        .def_readonly("start", &RunResult::start)
        .def_readonly("metrics", &RunResult::metrics);

    m.def("run_closed_loop",
          py::overload_cast<const EngineModel&, const Controller&,
                            const ReferenceProfile&>(&run_closed_loop),
          py::arg("model"), py::arg("controller"), py::arg("profile"));
    m.def("run_closed_loop_plant",
          py::overload_cast<const PlantParams&, const Controller&,
                            const ReferenceProfile&>(&run_closed_loop),
          py::arg("plant"), py::arg("controller"), py::arg("profile"));
    m.def("save_run_csv", &save_run_csv, py::arg("result"), py::arg("path"),
          py::arg("eta_op") = std::optional<double>{}, py::arg("digest") = "");
    m.def("compute_metrics", &compute_metrics, py::arg("speed"), py::arg("opacity"),
          py::arg("profile"), py::arg("start"), py::arg("transient_window_s") = 2.0);
}
