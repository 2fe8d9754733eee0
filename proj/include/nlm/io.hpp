#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nlm/circuit.hpp"
#include "nlm/noise.hpp"
#include "nlm/tomography.hpp"

namespace nlm {

/// { "registers": [...canonical names...], "amplitudes": [[re, im] x 32] }
nlohmann::json state_to_json(const StateVector& state);
StateVector state_from_json(const nlohmann::json& j);

/// 4x4 nested array of [re, im] pairs.
nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

/// { "p_success": ..., "even": {"p": ..., "rho": ...}, "odd": {...} }
nlohmann::json outcome_to_json(const ProtocolOutcome& outcome);

nlohmann::json noise_to_json(const NoiseModel& model);
NoiseModel noise_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const ExecutionTrace& trace);

/// CSV with header `input,channel,basis,count`. `basis_names` selects the
/// column alphabet (polarization HH..VV or the Bell readout's ++..--).
std::string counts_table_to_csv(
    const CountsTable& table,
    const std::array<std::string_view, 4>& basis_names = kPolarizationBasisNames);
nlohmann::json counts_table_to_json(
    const CountsTable& table,
    const std::array<std::string_view, 4>& basis_names = kPolarizationBasisNames);

/// CSV with header `setting_a,setting_b,count,shots`.
std::string tomography_record_to_csv(const TomographyRecord& record);
TomographyRecord tomography_record_from_csv(std::istream& in);

/// CSV with header `input,channel,path,basis,count` over the 16 pre-erasure
/// cells, channel-major (l then r), path u then d.
std::string snapshot_counts_to_csv(std::string_view input_label,
                                   const std::array<std::uint64_t, 16>& counts);
nlohmann::json snapshot_counts_to_json(std::string_view input_label,
                                       const std::array<std::uint64_t, 16>& counts);
nlohmann::json snapshot_to_json(const SnapshotDistribution& snapshot);

/// Fixed shortest-round-trip formatting used by every writer, so identical
/// runs produce identical bytes.
std::string format_double(double value);

}  // namespace nlm
