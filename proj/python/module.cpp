// Python bindings for the protocol pipeline, noise sampling, tomography and
// the .qec executor. Matrices cross as numpy arrays, deep structures as JSON.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "nlm/circuit.hpp"
#include "nlm/errors.hpp"
#include "nlm/io.hpp"
#include "nlm/noise.hpp"
#include "nlm/protocol.hpp"
#include "nlm/tomography.hpp"

namespace py = pybind11;
using namespace nlm;

namespace {

SystemAmplitudes to_system(const Complex& a, const Complex& b, const Complex& g,
                           const Complex& e) {
  return SystemAmplitudes{a, b, g, e};
}

py::dict branch_dict(const Branch& branch) {
  py::dict out;
  out["p"] = branch.probability;
  out["rho"] = Eigen::Matrix4cd(branch.rho.matrix());
  return out;
}

py::dict outcome_dict(const ProtocolOutcome& outcome) {
  py::dict out;
  out["p_success"] = outcome.success_probability;
  out["even"] = branch_dict(outcome.even);
  out["odd"] = branch_dict(outcome.odd);
  std::vector<Complex> amps(outcome.final_state.amplitudes().begin(),
                            outcome.final_state.amplitudes().end());
  out["final_state"] = amps;
  return out;
}

TomographyRecord record_from_python(
    const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& entries,
    std::uint64_t shots) {
  TomographyRecord record;
  record.shots_per_setting = shots;
  for (const auto& [a, b, count] : entries) {
    TomographySetting setting;
    if (!analyzer_from_name(a, setting.a) || !analyzer_from_name(b, setting.b)) {
      throw Error("unknown analyzer state '" + a + "'/'" + b + "'");
    }
    record.entries.push_back({setting, count});
  }
  return record;
}

std::vector<std::tuple<std::string, std::string, std::uint64_t>> record_to_python(
    const TomographyRecord& record) {
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> out;
  for (const auto& entry : record.entries) {
    out.emplace_back(std::string(analyzer_name(entry.setting.a)),
                     std::string(analyzer_name(entry.setting.b)), entry.count);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(nlm, m) {
  m.doc() =
      "Erasure-based nonlocal parity and Bell measurement simulator: exact "
      "pipeline amplitudes, calibrated coincidence sampling, and two-qubit "
      "tomography with maximum-likelihood reconstruction.";

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init([](double visibility, double extinction, double background) {
             NoiseModel model{visibility, extinction, background};
             model.validate();
             return model;
           }),
           py::arg("eraser_visibility") = 1.0, py::arg("extinction") = 0.0,
           py::arg("background") = 0.0)
      .def_readonly("eraser_visibility", &NoiseModel::eraser_visibility)
      .def_readonly("extinction", &NoiseModel::extinction)
      .def_readonly("background", &NoiseModel::background)
      .def_static("ideal", &NoiseModel::ideal)
      .def_static("calibrated_default", &NoiseModel::calibrated_default)
      .def("__repr__", [](const NoiseModel& model) {
        return "NoiseModel(eraser_visibility=" + format_double(model.eraser_visibility) +
               ", extinction=" + format_double(model.extinction) +
               ", background=" + format_double(model.background) + ")";
      });

  m.def(
      "run_protocol",
      [](const Complex& a, const Complex& b, const Complex& g, const Complex& e) {
        return outcome_dict(run_protocol(to_system(a, b, g, e)));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("eta"),
      "Full pipeline: Alice's coupling + post-selection, Bob's couplings, "
      "erasure; returns p_success, both parity branches and the final state.");

  m.def(
      "parity_probabilities",
      [](const Complex& a, const Complex& b, const Complex& g, const Complex& e) {
        const ParityDistribution parity = parity_readout(run_protocol(to_system(a, b, g, e)));
        return py::make_tuple(parity.p_even, parity.p_odd);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("eta"));

  m.def(
      "bell_probabilities",
      [](const Complex& a, const Complex& b, const Complex& g, const Complex& e) {
        const BellDistribution dist = bell_measure(to_system(a, b, g, e));
        py::dict out;
        for (BellLabel label : kBellLabels) {
          out[py::str(std::string(bell_label_name(label)))] = dist[static_cast<int>(label)];
        }
        return out;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("eta"));

  m.def("bell_state", [](const std::string& name) {
    for (BellLabel label : kBellLabels) {
      if (bell_label_name(label) == name) {
        const SystemAmplitudes s = bell_state(label);
        return py::make_tuple(s.alpha, s.beta, s.gamma, s.eta);
      }
    }
    throw Error("unknown Bell label '" + name + "'");
  });

  m.def(
      "pre_erasure_cells",
      [](const Complex& a, const Complex& b, const Complex& g, const Complex& e) {
        const SnapshotDistribution snap = pre_erasure_snapshot(to_system(a, b, g, e));
        std::vector<std::tuple<std::string, std::string, std::string, double>> cells;
        for (int aux : {kAuxRight, kAuxLeft}) {
          for (int path : {kPathUp, kPathDown}) {
            for (int basis = 0; basis < 4; ++basis) {
              cells.emplace_back(std::string(kChannelNames[aux == kAuxRight ? 0 : 1]),
                                 path == kPathUp ? "u" : "d",
                                 std::string(kPolarizationBasisNames[basis]),
                                 snap.at(aux, path, basis));
            }
          }
        }
        return cells;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("eta"),
      "(channel, path, basis, probability) cells of the which-path record.");

  m.def(
      "noisy_cells",
      [](const Complex& a, const Complex& b, const Complex& g, const Complex& e,
         const NoiseModel& model) {
        const CellProbabilities cells =
            apply_noise(run_protocol(to_system(a, b, g, e)), model);
        return std::vector<std::vector<double>>{
            {cells.p[0].begin(), cells.p[0].end()},
            {cells.p[1].begin(), cells.p[1].end()}};
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("eta"),
      py::arg("noise"),
      "Perturbed (channel x basis) probabilities, rows l then r, HH..VV.");

  m.def(
      "sample_parity_counts",
      [](const std::vector<std::tuple<Complex, Complex, Complex, Complex>>& inputs,
         const std::vector<std::string>& labels, std::uint64_t shots,
         const NoiseModel& model, std::uint64_t seed) {
        std::vector<SystemAmplitudes> systems;
        for (const auto& [a, b, g, e] : inputs) systems.push_back(to_system(a, b, g, e));
        const CountsTable table = parity_table(systems, labels, shots, model, seed);
        std::vector<std::tuple<std::string, std::vector<std::vector<std::uint64_t>>>> rows;
        for (const auto& row : table.rows) {
          rows.emplace_back(row.input, std::vector<std::vector<std::uint64_t>>{
                                           {row.counts[0].begin(), row.counts[0].end()},
                                           {row.counts[1].begin(), row.counts[1].end()}});
        }
        return rows;
      },
      py::arg("inputs"), py::arg("labels"), py::arg("shots"), py::arg("noise"),
      py::arg("seed"));

  m.def(
      "simulate_tomography",
      [](const Eigen::Matrix4cd& rho, std::uint64_t shots, std::uint64_t seed) {
        const TomographyRecord record =
            simulate_tomography(DensityMatrix::from_matrix(rho), shots, seed);
        return py::make_tuple(record_to_python(record), record.shots_per_setting);
      },
      py::arg("rho"), py::arg("shots"), py::arg("seed"));

  m.def(
      "mle_reconstruct",
      [](const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& entries,
         std::uint64_t shots, double tol, int max_iter) {
        MleOptions options;
        options.tol = tol;
        options.max_iter = max_iter;
        const MleResult result = mle_reconstruct(record_from_python(entries, shots), options);
        py::dict out;
        out["rho"] = Eigen::Matrix4cd(result.rho.matrix());
        out["converged"] = result.converged;
        out["iterations"] = result.iterations;
        out["log_likelihood"] = result.log_likelihood;
        return out;
      },
      py::arg("entries"), py::arg("shots"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 5000);

  m.def(
      "linear_inversion",
      [](const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& entries,
         std::uint64_t shots) {
        return Eigen::Matrix4cd(linear_inversion(record_from_python(entries, shots)));
      },
      py::arg("entries"), py::arg("shots"));

  m.def(
      "fidelity",
      [](const Eigen::Matrix4cd& rho, const Eigen::Matrix4cd& sigma) {
        return fidelity(DensityMatrix::from_matrix(rho), DensityMatrix::from_matrix(sigma));
      },
      py::arg("rho"), py::arg("sigma"), "Uhlmann fidelity of two density matrices.");

  m.def(
      "execute_qec",
      [](const std::string& text) { return trace_to_json(execute(parse(text))).dump(); },
      py::arg("text"),
      "Parse and execute a .qec program; returns the execution trace as JSON.");

  m.def(
      "format_qec", [](const std::string& text) { return format(parse(text)); },
      py::arg("text"), "Canonical pretty-print of a .qec program.");

  py::register_exception<Error>(m, "NlmError");
}
