#include "nlm/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <istream>
#include <sstream>

#include "nlm/errors.hpp"

namespace nlm {

namespace {

nlohmann::json complex_pair(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_pair(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error("expected a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    double parsed = 0.0;
    const auto result = std::from_chars(buffer, buffer + std::strlen(buffer), parsed);
    if (result.ec == std::errc() && parsed == value) {
      return buffer;
    }
  }
  return buffer;
}

nlohmann::json state_to_json(const StateVector& state) {
  nlohmann::json registers = nlohmann::json::array();
  for (Register reg : kAllRegisters) {
    registers.push_back(std::string(register_name(reg)));
  }
  nlohmann::json amplitudes = nlohmann::json::array();
  for (const Complex& a : state.amplitudes()) {
    amplitudes.push_back(complex_pair(a));
  }
  return nlohmann::json{{"registers", registers}, {"amplitudes", amplitudes}};
}

StateVector state_from_json(const nlohmann::json& j) {
  const auto& amplitudes = j.at("amplitudes");
  if (!amplitudes.is_array() || amplitudes.size() != kDim) {
    throw Error("state JSON must carry 32 amplitudes");
  }
  Amplitudes amps{};
  for (std::size_t i = 0; i < kDim; ++i) {
    amps[i] = complex_from_pair(amplitudes[i]);
  }
  return StateVector::from_amplitudes(amps);
}

nlohmann::json density_to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      row.push_back(complex_pair(rho.matrix()(r, c)));
    }
    rows.push_back(row);
  }
  return rows;
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw Error("density JSON must be a 4x4 array");
  }
  Eigen::Matrix4cd m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) {
      throw Error("density JSON must be a 4x4 array");
    }
    for (int c = 0; c < 4; ++c) {
      m(r, c) = complex_from_pair(j[r][c]);
    }
  }
  return DensityMatrix::from_matrix(m);
}

nlohmann::json outcome_to_json(const ProtocolOutcome& outcome) {
  return nlohmann::json{
      {"p_success", outcome.success_probability},
      {"even", {{"p", outcome.even.probability}, {"rho", density_to_json(outcome.even.rho)}}},
      {"odd", {{"p", outcome.odd.probability}, {"rho", density_to_json(outcome.odd.rho)}}}};
}

nlohmann::json noise_to_json(const NoiseModel& model) {
  return nlohmann::json{{"eraser_visibility", model.eraser_visibility},
                        {"extinction", model.extinction},
                        {"background", model.background}};
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  NoiseModel model;
  if (j.contains("eraser_visibility")) model.eraser_visibility = j["eraser_visibility"];
  if (j.contains("extinction")) model.extinction = j["extinction"];
  if (j.contains("background")) model.background = j["background"];
  model.validate();
  return model;
}

nlohmann::json snapshot_to_json(const SnapshotDistribution& snapshot) {
  nlohmann::json cells = nlohmann::json::array();
  for (int aux : {kAuxRight, kAuxLeft}) {
    for (int path : {kPathUp, kPathDown}) {
      for (int b = 0; b < 4; ++b) {
        cells.push_back(nlohmann::json{
            {"channel", std::string(kChannelNames[aux == kAuxRight ? 0 : 1])},
            {"path", path == kPathUp ? "u" : "d"},
            {"basis", std::string(kPolarizationBasisNames[b])},
            {"p", snapshot.at(aux, path, b)}});
      }
    }
  }
  return cells;
}

nlohmann::json trace_to_json(const ExecutionTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TraceStep& step : trace.steps) {
    nlohmann::json marginals;
    for (Register reg : kAllRegisters) {
      const auto index = static_cast<std::size_t>(reg);
      marginals[std::string(register_name(reg))] =
          nlohmann::json::array({step.marginals[index][0], step.marginals[index][1]});
    }
    steps.push_back(nlohmann::json{{"instruction", step.text},
                                   {"line", step.span.line},
                                   {"norm", step.norm},
                                   {"marginals", marginals},
                                   {"cumulative_probability", step.cumulative_probability}});
  }
  nlohmann::json out{{"steps", steps},
                     {"cumulative_probability", trace.cumulative_probability}};
  if (trace.readout) {
    const ReadoutPayload& payload = *trace.readout;
    switch (payload.kind) {
      case ReadoutKind::Parity:
        out["readout"] = {{"kind", "parity"},
                          {"p_even", payload.parity.p_even},
                          {"p_odd", payload.parity.p_odd}};
        break;
      case ReadoutKind::Bell: {
        nlohmann::json labels;
        for (BellLabel label : kBellLabels) {
          labels[std::string(bell_label_name(label))] =
              payload.bell[static_cast<int>(label)];
        }
        out["readout"] = {{"kind", "bell"}, {"labels", labels}};
        break;
      }
      case ReadoutKind::Snapshot:
        out["readout"] = {{"kind", "snapshot"}, {"cells", snapshot_to_json(payload.snapshot)}};
        break;
      case ReadoutKind::State:
        out["readout"] = {{"kind", "state"}, {"state", state_to_json(payload.state)}};
        break;
    }
  }
  return out;
}

std::string counts_table_to_csv(const CountsTable& table,
                                const std::array<std::string_view, 4>& basis_names) {
  std::ostringstream out;
  out << "input,channel,basis,count\n";
  for (const auto& row : table.rows) {
    for (int c = 0; c < 2; ++c) {
      for (int b = 0; b < 4; ++b) {
        out << row.input << "," << kChannelNames[c] << "," << basis_names[b] << ","
            << row.counts[c][b] << "\n";
      }
    }
  }
  return out.str();
}

nlohmann::json counts_table_to_json(const CountsTable& table,
                                    const std::array<std::string_view, 4>& basis_names) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (int c = 0; c < 2; ++c) {
      for (int b = 0; b < 4; ++b) {
        cells.push_back(nlohmann::json{{"channel", std::string(kChannelNames[c])},
                                       {"basis", std::string(basis_names[b])},
                                       {"count", row.counts[c][b]}});
      }
    }
    rows.push_back(
        nlohmann::json{{"input", row.input}, {"shots", row.shots}, {"cells", cells}});
  }
  return nlohmann::json{{"rows", rows}};
}

std::string tomography_record_to_csv(const TomographyRecord& record) {
  std::ostringstream out;
  out << "setting_a,setting_b,count,shots\n";
  for (const auto& entry : record.entries) {
    out << analyzer_name(entry.setting.a) << "," << analyzer_name(entry.setting.b) << ","
        << entry.count << "," << record.shots_per_setting << "\n";
  }
  return out.str();
}

TomographyRecord tomography_record_from_csv(std::istream& in) {
  TomographyRecord record;
  std::string line;
  bool saw_header = false;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::ostringstream context;
    context << "tomography CSV line " << line_number;
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) {
      fields.push_back(field);
    }
    if (!saw_header) {
      saw_header = true;
      if (!fields.empty() && fields[0] == "setting_a") continue;  // skip header row
    }
    if (fields.size() != 4) {
      throw Error(context.str() + ": expected setting_a,setting_b,count,shots");
    }
    TomographyRecord::Entry entry;
    if (!analyzer_from_name(fields[0], entry.setting.a) ||
        !analyzer_from_name(fields[1], entry.setting.b)) {
      throw Error(context.str() + ": unknown analyzer state");
    }
    entry.count = std::stoull(fields[2]);
    const std::uint64_t shots = std::stoull(fields[3]);
    if (record.shots_per_setting == 0) {
      record.shots_per_setting = shots;
    } else if (record.shots_per_setting != shots) {
      throw Error(context.str() + ": shots differ between settings");
    }
    if (entry.count > shots) {
      throw Error(context.str() + ": count exceeds shots");
    }
    record.entries.push_back(entry);
  }
  if (record.entries.empty()) {
    throw EmptyTableError("tomography CSV carries no settings");
  }
  return record;
}

std::string snapshot_counts_to_csv(std::string_view input_label,
                                   const std::array<std::uint64_t, 16>& counts) {
  std::ostringstream out;
  out << "input,channel,path,basis,count\n";
  std::size_t k = 0;
  for (std::string_view channel : kChannelNames) {
    for (const char* path : {"u", "d"}) {
      for (std::string_view basis : kPolarizationBasisNames) {
        out << input_label << "," << channel << "," << path << "," << basis << ","
            << counts[k++] << "\n";
      }
    }
  }
  return out.str();
}

nlohmann::json snapshot_counts_to_json(std::string_view input_label,
                                       const std::array<std::uint64_t, 16>& counts) {
  nlohmann::json cells = nlohmann::json::array();
  std::size_t k = 0;
  for (std::string_view channel : kChannelNames) {
    for (const char* path : {"u", "d"}) {
      for (std::string_view basis : kPolarizationBasisNames) {
        cells.push_back(nlohmann::json{{"channel", std::string(channel)},
                                       {"path", path},
                                       {"basis", std::string(basis)},
                                       {"count", counts[k++]}});
      }
    }
  }
  return nlohmann::json{{"input", std::string(input_label)}, {"cells", cells}};
}

}  // namespace nlm
