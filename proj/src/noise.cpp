#include "nlm/noise.hpp"

#include <cmath>
#include <numbers>

#include "nlm/circuit.hpp"
#include "nlm/errors.hpp"
#include "nlm/sampling.hpp"

namespace nlm {

namespace {

// Diagonal of a branch density matrix in the analyzer basis: the polarization
// basis itself, or the sigma_x strings {++, +-, -+, --}.
std::array<double, 4> branch_diagonal(const Branch& branch, bool diagonal_basis) {
  std::array<double, 4> out{};
  if (branch.probability <= 0.0) {
    return out;
  }
  Eigen::Matrix4cd rho = branch.rho.matrix();
  if (diagonal_basis) {
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix2cd h;
    h << s, s, s, -s;
    Eigen::Matrix4cd w = Eigen::Matrix4cd::Zero();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        for (int r2 = 0; r2 < 2; ++r2)
          for (int c2 = 0; c2 < 2; ++c2) w(r * 2 + r2, c * 2 + c2) = h(r, c) * h(r2, c2);
    rho = w * rho * w.adjoint();
  }
  for (int b = 0; b < 4; ++b) {
    out[b] = branch.probability * rho(b, b).real();
  }
  return out;
}

CellProbabilities perturb(CellProbabilities cells, const NoiseModel& model) {
  model.validate();

  // Visibility: a fraction (1-v)/2 of every cell's weight crosses channels.
  const double cross = (1.0 - model.eraser_visibility) / 2.0;
  CellProbabilities mixed;
  for (int b = 0; b < 4; ++b) {
    const double l = cells.p[kChannelL][b];
    const double r = cells.p[kChannelR][b];
    mixed.p[kChannelL][b] = l * (1.0 - cross) + r * cross;
    mixed.p[kChannelR][b] = r * (1.0 - cross) + l * cross;
  }

  // Extinction: each cell leaks eps, eps/2 per single-photon analyzer flip
  // (basis index = photonA*2 + photonB), staying in its channel.
  const double eps = model.extinction;
  CellProbabilities leaked;
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < 4; ++b) {
      leaked.p[c][b] = (1.0 - eps) * mixed.p[c][b] +
                       (eps / 2.0) * (mixed.p[c][b ^ 2] + mixed.p[c][b ^ 1]);
    }
  }

  // Uniform accidental floor, then renormalize.
  const double denom = 1.0 + 8.0 * model.background;
  CellProbabilities out;
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < 4; ++b) {
      out.p[c][b] = (leaked.p[c][b] + model.background) / denom;
    }
  }
  return out;
}

CellProbabilities ideal_cells(const ProtocolOutcome& outcome, bool diagonal_basis) {
  CellProbabilities cells;
  cells.p[kChannelL] = branch_diagonal(outcome.even, diagonal_basis);
  cells.p[kChannelR] = branch_diagonal(outcome.odd, diagonal_basis);
  return cells;
}

}  // namespace

bool NoiseModel::is_ideal() const {
  return eraser_visibility == 1.0 && extinction == 0.0 && background == 0.0;
}

void NoiseModel::validate() const {
  if (!(eraser_visibility >= 0.0 && eraser_visibility <= 1.0)) {
    throw ParameterOutOfRangeError("eraser_visibility must lie in [0, 1]");
  }
  if (!(extinction >= 0.0 && extinction <= 1.0)) {
    throw ParameterOutOfRangeError("extinction must lie in [0, 1]");
  }
  if (!(background >= 0.0)) {
    throw ParameterOutOfRangeError("background must be non-negative");
  }
}

double CellProbabilities::sum() const {
  double total = 0.0;
  for (const auto& channel : p) {
    for (double v : channel) {
      total += v;
    }
  }
  return total;
}

CellProbabilities apply_noise(const ProtocolOutcome& outcome, const NoiseModel& model) {
  return perturb(ideal_cells(outcome, /*diagonal_basis=*/false), model);
}

CellProbabilities bell_cells(const ProtocolOutcome& outcome, const NoiseModel& model) {
  return perturb(ideal_cells(outcome, /*diagonal_basis=*/true), model);
}

SnapshotDistribution apply_noise_snapshot(const SnapshotDistribution& ideal,
                                          const NoiseModel& model) {
  model.validate();
  const double eps = model.extinction;
  SnapshotDistribution leaked;
  for (int aux = 0; aux < 2; ++aux) {
    for (int path = 0; path < 2; ++path) {
      for (int b = 0; b < 4; ++b) {
        leaked.at(aux, path, b) = (1.0 - eps) * ideal.at(aux, path, b) +
                                  (eps / 2.0) * (ideal.at(aux, path, b ^ 2) +
                                                 ideal.at(aux, path, b ^ 1));
      }
    }
  }
  const double denom = 1.0 + 16.0 * model.background;
  SnapshotDistribution out;
  for (int aux = 0; aux < 2; ++aux) {
    for (int path = 0; path < 2; ++path) {
      for (int b = 0; b < 4; ++b) {
        out.at(aux, path, b) = (leaked.at(aux, path, b) + model.background) / denom;
      }
    }
  }
  return out;
}

CellCounts sample_counts(const CellProbabilities& cells, std::uint64_t shots,
                         std::uint64_t seed) {
  std::array<double, 8> flat{};
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < 4; ++b) {
      flat[c * 4 + b] = cells.p[c][b];
    }
  }
  std::mt19937_64 rng(seed);
  const std::vector<std::uint64_t> drawn = multinomial_draw(rng, shots, flat);
  CellCounts counts{};
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < 4; ++b) {
      counts[c][b] = drawn[c * 4 + b];
    }
  }
  return counts;
}

std::array<std::uint64_t, 16> sample_snapshot_counts(const SnapshotDistribution& cells,
                                                     std::uint64_t shots,
                                                     std::uint64_t seed) {
  // Flat order: channel-major (l = aux 1 first), path u then d, basis HH..VV.
  std::array<double, 16> flat{};
  std::size_t k = 0;
  for (int aux : {kAuxRight, kAuxLeft}) {
    for (int path : {kPathUp, kPathDown}) {
      for (int b = 0; b < 4; ++b) {
        flat[k++] = cells.at(aux, path, b);
      }
    }
  }
  std::mt19937_64 rng(seed);
  const std::vector<std::uint64_t> drawn = multinomial_draw(rng, shots, flat);
  std::array<std::uint64_t, 16> out{};
  for (std::size_t i = 0; i < 16; ++i) {
    out[i] = drawn[i];
  }
  return out;
}

std::uint64_t CountsTable::total_counts() const {
  std::uint64_t total = 0;
  for (const auto& row : rows) {
    for (const auto& channel : row.counts) {
      for (std::uint64_t c : channel) {
        total += c;
      }
    }
  }
  return total;
}

CountsTable parity_table(const std::vector<SystemAmplitudes>& inputs,
                         const std::vector<std::string>& labels, std::uint64_t shots,
                         const NoiseModel& model, std::uint64_t seed) {
  if (inputs.size() != labels.size()) {
    throw Error("parity_table: inputs and labels differ in length");
  }
  CountsTable table;
  table.rows.reserve(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const ProtocolOutcome outcome = run_protocol(inputs[k]);
    const CellProbabilities cells = apply_noise(outcome, model);
    const std::uint64_t row_seed = seed ^ static_cast<std::uint64_t>(k);
    table.rows.push_back(CountsTable::Row{labels[k], sample_counts(cells, shots, row_seed),
                                          shots});
  }
  return table;
}

std::string state_label(const SystemAmplitudes& sys) {
  const Complex coeffs[4] = {sys.alpha, sys.beta, sys.gamma, sys.eta};
  for (int k = 0; k < 4; ++k) {
    bool exact = true;
    for (int j = 0; j < 4; ++j) {
      if (coeffs[j] != (j == k ? Complex(1.0, 0.0) : Complex(0.0, 0.0))) exact = false;
    }
    if (exact) {
      return std::string(kPolarizationBasisNames[k]);
    }
  }
  return format_complex(sys.alpha) + " " + format_complex(sys.beta) + " " +
         format_complex(sys.gamma) + " " + format_complex(sys.eta);
}

CountsTable parity_table(const std::vector<SystemAmplitudes>& inputs, std::uint64_t shots,
                         const NoiseModel& model, std::uint64_t seed) {
  std::vector<std::string> labels;
  labels.reserve(inputs.size());
  for (const SystemAmplitudes& sys : inputs) {
    labels.push_back(state_label(sys));
  }
  return parity_table(inputs, labels, shots, model, seed);
}

double error_rate(const CountsTable& table, const ExpectedCellMap& expected) {
  if (table.rows.empty()) {
    throw EmptyTableError("counts table has no rows");
  }
  std::uint64_t total = 0;
  std::uint64_t good = 0;
  for (const auto& row : table.rows) {
    const auto it = expected.find(row.input);
    if (it == expected.end()) {
      throw Error("error_rate: no expected cells for row '" + row.input + "'");
    }
    for (int c = 0; c < 2; ++c) {
      for (int b = 0; b < 4; ++b) {
        total += row.counts[c][b];
      }
    }
    for (const Cell& cell : it->second) {
      good += row.counts[cell.channel][cell.basis];
    }
  }
  if (total == 0) {
    throw EmptyTableError("counts table has no counts");
  }
  return 1.0 - static_cast<double>(good) / static_cast<double>(total);
}

ExpectedCellMap basis_cell_map() {
  return ExpectedCellMap{
      {"HH", {Cell{kChannelL, 0}}},
      {"HV", {Cell{kChannelR, 1}}},
      {"VH", {Cell{kChannelR, 2}}},
      {"VV", {Cell{kChannelL, 3}}},
  };
}

ExpectedCellMap basis_channel_map() {
  const std::vector<Cell> l = {Cell{kChannelL, 0}, Cell{kChannelL, 1}, Cell{kChannelL, 2},
                               Cell{kChannelL, 3}};
  const std::vector<Cell> r = {Cell{kChannelR, 0}, Cell{kChannelR, 1}, Cell{kChannelR, 2},
                               Cell{kChannelR, 3}};
  return ExpectedCellMap{{"HH", l}, {"VV", l}, {"HV", r}, {"VH", r}};
}

}  // namespace nlm
