#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <span>
#include <stdexcept>

#include "qarch/agent.hpp"
#include "qarch/circuit.hpp"
#include "qarch/classifier.hpp"
#include "qarch/config.hpp"
#include "qarch/datasets.hpp"
#include "qarch/embedding.hpp"
#include "qarch/env.hpp"
#include "qarch/experiment.hpp"
#include "qarch/statevector.hpp"
#include "qarch/svg.hpp"

namespace py = pybind11;
using namespace qarch;

PYBIND11_MODULE(_qarch, m) {
    m.doc() = "quantum circuit architecture search core";

    // ---- statevector simulation ----
    py::module_ qs = m.def_submodule("qsim", "dense statevector simulator");

    py::enum_<qsim::GateKind>(qs, "GateKind")
        .value("RotX", qsim::GateKind::RotX)
        .value("RotY", qsim::GateKind::RotY)
        .value("RotZ", qsim::GateKind::RotZ)
        .value("Cnot", qsim::GateKind::Cnot);

    py::class_<qsim::GateOp>(qs, "GateOp")
        .def_static("rot_x", &qsim::GateOp::rot_x, py::arg("qubit"), py::arg("angle"))
        .def_static("rot_y", &qsim::GateOp::rot_y, py::arg("qubit"), py::arg("angle"))
        .def_static("rot_z", &qsim::GateOp::rot_z, py::arg("qubit"), py::arg("angle"))
        .def_static("cnot", &qsim::GateOp::cnot, py::arg("control"), py::arg("target"))
        .def_readwrite("kind", &qsim::GateOp::kind)
        .def_readwrite("target", &qsim::GateOp::target)
        .def_readwrite("control", &qsim::GateOp::control)
        .def_readwrite("angle", &qsim::GateOp::angle)
        .def("is_rotation", &qsim::GateOp::is_rotation);

    py::class_<qsim::Statevector>(qs, "Statevector")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def_property_readonly("n_qubits", &qsim::Statevector::n_qubits)
        .def_property_readonly("dim", &qsim::Statevector::dim)
        .def("amplitudes",
             [](const qsim::Statevector& s) {
                 const auto a = s.amplitudes();
                 return std::vector<std::complex<double>>(a.begin(), a.end());
             })
        .def("apply", [](qsim::Statevector& s, const qsim::GateOp& g) { s.apply(g); },
             py::arg("gate"))
        .def("apply_all",
             [](qsim::Statevector& s, const std::vector<qsim::GateOp>& gates) {
                 s.apply(std::span<const qsim::GateOp>(gates));
             },
             py::arg("gates"))
        .def("expectation_z", &qsim::Statevector::expectation_z, py::arg("qubit"))
        .def("norm_sq", &qsim::Statevector::norm_sq)
        .def("reset_to_zero_state", &qsim::Statevector::reset_to_zero_state);

    qs.attr("MAX_QUBITS") = qsim::kMaxQubits;
    qs.def("embed_features",
           [](const std::vector<double>& features) {
               return embedding::embed_features(std::span<const double>(features));
           },
           py::arg("features"), "arctan angle embedding gates, one qubit per feature");

    // ---- datasets ----
    py::module_ ds = m.def_submodule("datasets", "synthetic binary classification data");

    py::class_<datasets::Dataset>(ds, "Dataset")
        .def(py::init<>())
        .def_readwrite("n_features", &datasets::Dataset::n_features)
        .def_readwrite("features", &datasets::Dataset::features)
        .def_readwrite("labels", &datasets::Dataset::labels)
        .def_readwrite("seed", &datasets::Dataset::seed)
        .def("__len__", &datasets::Dataset::size)
        .def("row", [](const datasets::Dataset& d, std::size_t i) {
            if (i >= d.size()) throw std::out_of_range("row index out of range");
            const auto r = d.row(i);
            return std::vector<double>(r.begin(), r.end());
        });

    ds.def("make_classification", &datasets::make_classification, py::arg("n_samples"),
           py::arg("n_features"), py::arg("n_informative"), py::arg("class_sep"), py::arg("seed"));
    ds.def("make_moons", &datasets::make_moons, py::arg("n_samples"), py::arg("noise_std"),
           py::arg("seed"));
    ds.def("train_test_split", &datasets::train_test_split, py::arg("dataset"),
           py::arg("test_fraction"), py::arg("seed"));
    ds.def("write_csv", &datasets::write_csv, py::arg("dataset"), py::arg("path"));
    ds.def("read_csv", &datasets::read_csv, py::arg("path"));

    // ---- variational classifier ----
    py::module_ vq = m.def_submodule("vqc", "variational quantum classifier");

    py::class_<vqc::CircuitSpec>(vq, "CircuitSpec")
        .def(py::init<>())
        .def_readwrite("n_qubits", &vqc::CircuitSpec::n_qubits)
        .def_readwrite("readout_qubit", &vqc::CircuitSpec::readout_qubit)
        .def_readwrite("gates", &vqc::CircuitSpec::gates)
        .def_readwrite("params", &vqc::CircuitSpec::params)
        .def("add_rotation", &vqc::CircuitSpec::add_rotation, py::arg("kind"), py::arg("qubit"),
             py::arg("initial_angle") = 0.0)
        .def("add_cnot", &vqc::CircuitSpec::add_cnot, py::arg("control"), py::arg("target"))
        .def("n_params", &vqc::CircuitSpec::n_params)
        .def("resolved_gates", &vqc::CircuitSpec::resolved_gates);

    py::class_<vqc::TrainOutcome>(vq, "TrainOutcome")
        .def_readonly("trained_params", &vqc::TrainOutcome::trained_params)
        .def_readonly("train_accuracy", &vqc::TrainOutcome::train_accuracy)
        .def_readonly("test_accuracy", &vqc::TrainOutcome::test_accuracy)
        .def_readonly("epochs_run", &vqc::TrainOutcome::epochs_run)
        .def_readonly("final_loss", &vqc::TrainOutcome::final_loss);

    vq.def("same_structure", &vqc::same_structure, py::arg("a"), py::arg("b"));
    vq.def("write_circuit", &vqc::write_circuit, py::arg("circuit"), py::arg("path"));
    vq.def("read_circuit", &vqc::read_circuit, py::arg("path"));
    vq.def("predict_prob",
           [](const vqc::CircuitSpec& c, const std::vector<double>& x) {
               return vqc::predict_prob(c, std::span<const double>(x));
           },
           py::arg("circuit"), py::arg("features"));
    vq.def("bce_loss", py::overload_cast<int, double>(&vqc::bce_loss), py::arg("y_true"),
           py::arg("y_pred"));
    vq.def("param_shift_grad",
           py::overload_cast<const vqc::CircuitSpec&, const datasets::Dataset&>(
               &vqc::param_shift_grad),
           py::arg("circuit"), py::arg("batch"));
    vq.def("train_classifier",
           py::overload_cast<vqc::CircuitSpec&, const datasets::Dataset&, const datasets::Dataset&,
                             int, double, double>(&vqc::train_classifier),
           py::arg("circuit"), py::arg("train"), py::arg("test"), py::arg("max_epochs"),
           py::arg("target_acc"), py::arg("lr") = vqc::kDefaultClassifierLr);
    vq.def("evaluate_accuracy",
           py::overload_cast<const vqc::CircuitSpec&, const datasets::Dataset&>(
               &vqc::evaluate_accuracy),
           py::arg("circuit"), py::arg("dataset"));

    // ---- gate placement environment ----
    py::module_ ev = m.def_submodule("env", "gate placement environment");

    ev.attr("AXIS_X") = env::kAxisX;
    ev.attr("AXIS_Y") = env::kAxisY;
    ev.attr("AXIS_Z") = env::kAxisZ;

    py::class_<env::Action>(ev, "Action")
        .def_readonly("is_rotation", &env::Action::is_rotation)
        .def_readonly("qubit", &env::Action::qubit)
        .def_readonly("axis", &env::Action::axis)
        .def_readonly("control", &env::Action::control)
        .def_readonly("target", &env::Action::target);

    py::class_<env::ActionTable>(ev, "ActionTable")
        .def_static("build", &env::ActionTable::build, py::arg("n_qubits"))
        .def("__len__", &env::ActionTable::size)
        .def("at", &env::ActionTable::at, py::arg("index"))
        .def_property_readonly("n_qubits", &env::ActionTable::n_qubits);

    ev.def("encode_gate_row", &env::encode_gate_row, py::arg("action"), py::arg("n_qubits"));
    ev.def("decode_gate_row", &env::decode_gate_row, py::arg("row"), py::arg("n_qubits"));
    ev.def("compute_reward", &env::compute_reward, py::arg("y_l"), py::arg("y_prev"),
           py::arg("y_target"), py::arg("l"), py::arg("L"));

    py::class_<env::EnvConfig>(ev, "EnvConfig")
        .def(py::init<>())
        .def_readwrite("n_qubits", &env::EnvConfig::n_qubits)
        .def_readwrite("max_gates", &env::EnvConfig::max_gates)
        .def_readwrite("y_target", &env::EnvConfig::y_target)
        .def_readwrite("max_epochs", &env::EnvConfig::max_epochs)
        .def_readwrite("classifier_lr", &env::EnvConfig::classifier_lr);

    py::class_<env::StepResult>(ev, "StepResult")
        .def_readonly("observation", &env::StepResult::observation)
        .def_readonly("reward", &env::StepResult::reward)
        .def_readonly("done", &env::StepResult::done)
        .def_readonly("accuracy", &env::StepResult::accuracy)
        .def_readonly("gate_count", &env::StepResult::gate_count)
        .def_readonly("y_target", &env::StepResult::y_target);

    py::class_<env::QasEnv>(ev, "QasEnv")
        .def(py::init<env::EnvConfig, const datasets::Dataset&, const datasets::Dataset&>(),
             py::arg("config"), py::arg("train"), py::arg("test"))
        .def("reset", &env::QasEnv::reset)
        .def("step", &env::QasEnv::step, py::arg("action_index"))
        .def("actions", &env::QasEnv::actions, py::return_value_policy::reference_internal)
        .def("circuit", &env::QasEnv::circuit, py::return_value_policy::copy)
        .def("state_matrix", &env::QasEnv::state_matrix, py::return_value_policy::copy)
        .def_property_readonly("observation_size", &env::QasEnv::observation_size)
        .def_property_readonly("gate_count", &env::QasEnv::gate_count)
        .def_property_readonly("done", &env::QasEnv::done)
        .def_property_readonly("last_accuracy", &env::QasEnv::last_accuracy)
        .def_property_readonly("baseline_accuracy", &env::QasEnv::baseline_accuracy)
        .def_property_readonly("y_target", &env::QasEnv::y_target)
        .def("set_y_target", &env::QasEnv::set_y_target, py::arg("target"));

    // ---- learning agent ----
    py::module_ ag = m.def_submodule("agent", "n-step double dqn");

    py::class_<agent::Transition>(ag, "Transition")
        .def(py::init<>())
        .def_readwrite("state", &agent::Transition::state)
        .def_readwrite("action", &agent::Transition::action)
        .def_readwrite("reward", &agent::Transition::reward)
        .def_readwrite("next_state", &agent::Transition::next_state)
        .def_readwrite("done", &agent::Transition::done)
        .def_readwrite("episode_id", &agent::Transition::episode_id);

    py::class_<agent::AgentConfig>(ag, "AgentConfig")
        .def(py::init<>())
        .def_readwrite("obs_dim", &agent::AgentConfig::obs_dim)
        .def_readwrite("n_actions", &agent::AgentConfig::n_actions)
        .def_readwrite("hidden_sizes", &agent::AgentConfig::hidden_sizes)
        .def_readwrite("leaky_slope", &agent::AgentConfig::leaky_slope)
        .def_readwrite("dropout_p", &agent::AgentConfig::dropout_p)
        .def_readwrite("q_lr", &agent::AgentConfig::q_lr)
        .def_readwrite("gamma", &agent::AgentConfig::gamma)
        .def_readwrite("n_step", &agent::AgentConfig::n_step)
        .def_readwrite("batch_size", &agent::AgentConfig::batch_size)
        .def_readwrite("sync_interval", &agent::AgentConfig::sync_interval)
        .def_readwrite("buffer_capacity", &agent::AgentConfig::buffer_capacity)
        .def_readwrite("epsilon_start", &agent::AgentConfig::epsilon_start)
        .def_readwrite("epsilon_end", &agent::AgentConfig::epsilon_end)
        .def_readwrite("epsilon_decay_steps", &agent::AgentConfig::epsilon_decay_steps);

    ag.def("epsilon_schedule", &agent::epsilon_schedule, py::arg("step"), py::arg("start") = 1.0,
           py::arg("end") = 0.1, py::arg("decay_steps") = 10000);

    py::class_<agent::DqnAgent>(ag, "DqnAgent")
        .def(py::init<agent::AgentConfig, std::uint64_t>(), py::arg("config"), py::arg("seed"))
        .def("act",
             [](agent::DqnAgent& a, const std::vector<double>& obs, double epsilon) {
                 return a.act(std::span<const double>(obs), epsilon);
             },
             py::arg("observation"), py::arg("epsilon"))
        .def("act_greedy",
             [](const agent::DqnAgent& a, const std::vector<double>& obs) {
                 return a.act_greedy(std::span<const double>(obs));
             },
             py::arg("observation"))
        .def("observe", &agent::DqnAgent::observe, py::arg("transition"))
        .def("learn", &agent::DqnAgent::learn)
        .def_property_readonly("epsilon", &agent::DqnAgent::epsilon)
        .def("set_epsilon_scale", &agent::DqnAgent::set_epsilon_scale, py::arg("scale"))
        .def_property_readonly("epsilon_scale", &agent::DqnAgent::epsilon_scale)
        .def_property_readonly("env_steps", &agent::DqnAgent::env_steps)
        .def_property_readonly("learn_steps", &agent::DqnAgent::learn_steps)
        .def_property_readonly("buffer_size",
                               [](const agent::DqnAgent& a) { return a.buffer().size(); })
        .def("save",
             [](const agent::DqnAgent& a, const std::filesystem::path& path) {
                 std::ofstream os(path);
                 if (!os) throw std::runtime_error("cannot open " + path.string());
                 a.save(os);
             },
             py::arg("path"))
        .def("load",
             [](agent::DqnAgent& a, const std::filesystem::path& path) {
                 std::ifstream is(path);
                 if (!is) throw std::runtime_error("cannot open " + path.string());
                 a.load(is);
             },
             py::arg("path"));

    py::enum_<agent::Phase>(ag, "Phase")
        .value("Train", agent::Phase::Train)
        .value("Test", agent::Phase::Test);

    py::class_<agent::EpisodeOutcome>(ag, "EpisodeOutcome")
        .def(py::init<>())
        .def_readwrite("accuracy", &agent::EpisodeOutcome::accuracy)
        .def_readwrite("success", &agent::EpisodeOutcome::success);

    py::class_<agent::AdaptiveConfig>(ag, "AdaptiveConfig")
        .def(py::init<>())
        .def_readwrite("window", &agent::AdaptiveConfig::window)
        .def_readwrite("needed", &agent::AdaptiveConfig::needed)
        .def_readwrite("test_streak", &agent::AdaptiveConfig::test_streak)
        .def_readwrite("increment", &agent::AdaptiveConfig::increment)
        .def_readwrite("y_target_cap", &agent::AdaptiveConfig::y_target_cap)
        .def_readwrite("epsilon_cut", &agent::AdaptiveConfig::epsilon_cut);

    py::class_<agent::AdaptiveState>(ag, "AdaptiveState")
        .def(py::init<>())
        .def_readwrite("y_target", &agent::AdaptiveState::y_target)
        .def_readwrite("epsilon", &agent::AdaptiveState::epsilon)
        .def_readwrite("epsilon_scale", &agent::AdaptiveState::epsilon_scale)
        .def_readwrite("train_window", &agent::AdaptiveState::train_window)
        .def_readwrite("test_streak", &agent::AdaptiveState::test_streak);

    ag.def("adaptive_update", &agent::adaptive_update, py::arg("state"), py::arg("phase"),
           py::arg("outcome"), py::arg("config") = agent::AdaptiveConfig{});

    // ---- experiment driver ----
    py::module_ cl = m.def_submodule("cli", "experiment configuration and runs");

    py::class_<cli::ExperimentConfig>(cl, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("dataset", &cli::ExperimentConfig::dataset)
        .def_readwrite("n_samples", &cli::ExperimentConfig::n_samples)
        .def_readwrite("n_features", &cli::ExperimentConfig::n_features)
        .def_readwrite("n_informative", &cli::ExperimentConfig::n_informative)
        .def_readwrite("class_sep", &cli::ExperimentConfig::class_sep)
        .def_readwrite("noise_std", &cli::ExperimentConfig::noise_std)
        .def_readwrite("test_fraction", &cli::ExperimentConfig::test_fraction)
        .def_readwrite("n_qubits", &cli::ExperimentConfig::n_qubits)
        .def_readwrite("max_gates", &cli::ExperimentConfig::max_gates)
        .def_readwrite("y_target", &cli::ExperimentConfig::y_target)
        .def_readwrite("adaptive", &cli::ExperimentConfig::adaptive)
        .def_readwrite("max_epochs_per_step", &cli::ExperimentConfig::max_epochs_per_step)
        .def_readwrite("classifier_lr", &cli::ExperimentConfig::classifier_lr)
        .def_readwrite("episodes", &cli::ExperimentConfig::episodes)
        .def_readwrite("test_interval", &cli::ExperimentConfig::test_interval)
        .def_readwrite("n_step", &cli::ExperimentConfig::n_step)
        .def_readwrite("gamma", &cli::ExperimentConfig::gamma)
        .def_readwrite("batch_size", &cli::ExperimentConfig::batch_size)
        .def_readwrite("sync_interval", &cli::ExperimentConfig::sync_interval)
        .def_readwrite("buffer_capacity", &cli::ExperimentConfig::buffer_capacity)
        .def_readwrite("learn_start", &cli::ExperimentConfig::learn_start)
        .def_readwrite("epsilon_start", &cli::ExperimentConfig::epsilon_start)
        .def_readwrite("epsilon_end", &cli::ExperimentConfig::epsilon_end)
        .def_readwrite("epsilon_decay_steps", &cli::ExperimentConfig::epsilon_decay_steps)
        .def_readwrite("hidden_sizes", &cli::ExperimentConfig::hidden_sizes)
        .def_readwrite("leaky_slope", &cli::ExperimentConfig::leaky_slope)
        .def_readwrite("dropout", &cli::ExperimentConfig::dropout)
        .def_readwrite("q_lr", &cli::ExperimentConfig::q_lr)
        .def_readwrite("adaptive_window", &cli::ExperimentConfig::adaptive_window)
        .def_readwrite("adaptive_needed", &cli::ExperimentConfig::adaptive_needed)
        .def_readwrite("adaptive_test_streak", &cli::ExperimentConfig::adaptive_test_streak)
        .def_readwrite("adaptive_increment", &cli::ExperimentConfig::adaptive_increment)
        .def_readwrite("y_target_cap", &cli::ExperimentConfig::y_target_cap)
        .def_readwrite("epsilon_cut", &cli::ExperimentConfig::epsilon_cut)
        .def_readwrite("smooth_train", &cli::ExperimentConfig::smooth_train)
        .def_readwrite("smooth_test", &cli::ExperimentConfig::smooth_test)
        .def_readwrite("seeds", &cli::ExperimentConfig::seeds)
        .def_readwrite("write_traces", &cli::ExperimentConfig::write_traces)
        .def_readwrite("out_dir", &cli::ExperimentConfig::out_dir)
        .def("effective_gamma", &cli::ExperimentConfig::effective_gamma)
        .def("validate", &cli::ExperimentConfig::validate)
        .def(py::self == py::self);

    cl.def("parse_config_text", &cli::parse_config_text, py::arg("text"));
    cl.def("parse_config_file", &cli::parse_config_file, py::arg("path"));
    cl.def("serialize_config", &cli::serialize_config, py::arg("config"));

    py::class_<cli::RunSeeds>(cl, "RunSeeds")
        .def_readonly("dataset", &cli::RunSeeds::dataset)
        .def_readonly("split", &cli::RunSeeds::split)
        .def_readonly("agent", &cli::RunSeeds::agent);

    cl.def("derive_seeds", &cli::derive_seeds, py::arg("run_seed"));
    cl.def("build_dataset", &cli::build_dataset, py::arg("config"), py::arg("run_seed"));
    cl.def("moving_average",
           [](const std::vector<double>& series, int window) {
               return cli::moving_average(std::span<const double>(series), window);
           },
           py::arg("series"), py::arg("window"));
    cl.def("run_experiment", &cli::run_experiment, py::arg("config"), py::arg("seed"),
           py::arg("out_root"));
    cl.def("run_baseline", &cli::run_baseline, py::arg("config"), py::arg("seed"),
           py::arg("out_root"));
    cl.def("emit_plots", &cli::emit_plots, py::arg("run_dir"));

    py::class_<cli::EpisodeRecord>(cl, "EpisodeRecord")
        .def(py::init<>())
        .def_readwrite("episode", &cli::EpisodeRecord::episode)
        .def_readwrite("phase", &cli::EpisodeRecord::phase)
        .def_readwrite("accuracy", &cli::EpisodeRecord::accuracy)
        .def_readwrite("gates", &cli::EpisodeRecord::gates)
        .def_readwrite("reward", &cli::EpisodeRecord::reward)
        .def_readwrite("y_target", &cli::EpisodeRecord::y_target)
        .def_readwrite("epsilon", &cli::EpisodeRecord::epsilon);

    cl.def("read_episode_csv", &cli::read_episode_csv, py::arg("path"));
}
