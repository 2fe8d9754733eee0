#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nlm/protocol.hpp"

namespace nlm {

/// Phenomenological channel-level noise. Acts on classical cell probabilities,
/// not on amplitudes: the experiment only constrains channel-level rates.
struct NoiseModel {
  double eraser_visibility = 1.0;  // interference visibility of the eraser stage, in [0,1]
  double extinction = 0.0;         // polarizer leakage fraction per analyzed pair, in [0,1]
  double background = 0.0;         // uniform accidental probability per cell, >= 0

  static NoiseModel ideal() { return {1.0, 0.0, 0.0}; }
  /// Calibrated so the parity-channel error is ~0.2% and the post-eraser
  /// cell error ~0.4-0.6% at default settings.
  static NoiseModel calibrated_default() { return {0.996, 0.002, 1e-4}; }

  bool is_ideal() const;
  /// Throws ParameterOutOfRangeError when any field leaves its range.
  void validate() const;
};

/// Channel letters: l carries the even branch (BAux = 1), r the odd branch
/// (BAux = 0). Cell basis order is HH, HV, VH, VV.
inline constexpr int kChannelL = 0;
inline constexpr int kChannelR = 1;
inline constexpr std::array<std::string_view, 2> kChannelNames = {"l", "r"};
inline constexpr std::array<std::string_view, 4> kPolarizationBasisNames = {"HH", "HV", "VH",
                                                                            "VV"};
/// sigma_x (x) sigma_x analyzer strings used by the Bell readout table.
inline constexpr std::array<std::string_view, 4> kDiagonalBasisNames = {"++", "+-", "-+", "--"};

/// Probabilities over the 8 (channel, basis) cells; p[channel][basis].
struct CellProbabilities {
  std::array<std::array<double, 4>, 2> p{};
  double sum() const;
};

/// Ideal perturbed-cell map for a protocol outcome: visibility mixes a
/// fraction (1-v)/2 of each channel's weight into the opposite channel;
/// extinction leaks fraction eps of each cell, eps/2 per single-photon
/// analyzer flip; background adds a uniform floor, then everything
/// renormalizes to 1.
CellProbabilities apply_noise(const ProtocolOutcome& outcome, const NoiseModel& model);

/// Bell-readout variant: same noise algebra with the analyzers rotated to the
/// sigma_x basis {++, +-, -+, --}.
CellProbabilities bell_cells(const ProtocolOutcome& outcome, const NoiseModel& model);

/// Pre-erasure variant over the 16 (aux, path, basis) cells. The eraser has
/// not acted yet, so visibility does not enter; extinction and background do.
SnapshotDistribution apply_noise_snapshot(const SnapshotDistribution& ideal,
                                          const NoiseModel& model);

using CellCounts = std::array<std::array<std::uint64_t, 4>, 2>;

/// One multinomial row at the given seed. Identical (probabilities, shots,
/// seed) give identical counts.
CellCounts sample_counts(const CellProbabilities& cells, std::uint64_t shots,
                         std::uint64_t seed);

/// Multinomial draw over the 16 pre-erasure cells, ordered channel-major
/// (l then r), path u then d, basis HH..VV.
std::array<std::uint64_t, 16> sample_snapshot_counts(const SnapshotDistribution& cells,
                                                     std::uint64_t shots, std::uint64_t seed);

struct CountsTable {
  struct Row {
    std::string input;  // row label, e.g. "HH" or a formatted amplitude string
    CellCounts counts{};
    std::uint64_t shots = 0;
  };
  std::vector<Row> rows;

  std::uint64_t total_counts() const;
};

/// Runs run_protocol + apply_noise + sample_counts per input. Row k samples
/// with derived seed (seed XOR k). `labels` must match `inputs` in length.
CountsTable parity_table(const std::vector<SystemAmplitudes>& inputs,
                         const std::vector<std::string>& labels, std::uint64_t shots,
                         const NoiseModel& model, std::uint64_t seed);

/// Same, with labels derived from the inputs: "HH".."VV" for exact basis
/// states, otherwise the four amplitudes formatted as complex literals.
CountsTable parity_table(const std::vector<SystemAmplitudes>& inputs, std::uint64_t shots,
                         const NoiseModel& model, std::uint64_t seed);

std::string state_label(const SystemAmplitudes& sys);

struct Cell {
  int channel = 0;
  int basis = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Row label -> cells whose counts are "correct" for that row.
using ExpectedCellMap = std::map<std::string, std::vector<Cell>>;

/// 1 - (counts in expected cells) / (total counts). Throws EmptyTableError
/// when the table has no rows or no counts.
double error_rate(const CountsTable& table, const ExpectedCellMap& expected);

/// Expected-cell helpers for the two standard readouts: the single populated
/// cell per basis input, and the whole correct-parity channel per basis input.
ExpectedCellMap basis_cell_map();
ExpectedCellMap basis_channel_map();

}  // namespace nlm
