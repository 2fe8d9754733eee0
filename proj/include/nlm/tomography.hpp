#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nlm/state.hpp"

namespace nlm {

/// Single-qubit analyzer states of a QWP-HWP-PBS stack: computational,
/// diagonal and circular bases.
enum class Analyzer { H = 0, V, D, A, R, L };

inline constexpr std::array<Analyzer, 6> kAnalyzers = {Analyzer::H, Analyzer::V, Analyzer::D,
                                                       Analyzer::A, Analyzer::R, Analyzer::L};

Eigen::Vector2cd analyzer_ket(Analyzer a);
std::string_view analyzer_name(Analyzer a);
bool analyzer_from_name(std::string_view name, Analyzer& out);

struct TomographySetting {
  Analyzer a = Analyzer::H;  // photon-a analyzer
  Analyzer b = Analyzer::H;  // photon-b analyzer
};

/// All 36 joint settings in row-major (a, b) order; informationally complete.
std::vector<TomographySetting> all_settings();

/// Rank-one projector |s_a s_b><s_a s_b|.
Eigen::Matrix4cd setting_projector(const TomographySetting& s);

struct TomographyRecord {
  struct Entry {
    TomographySetting setting;
    std::uint64_t count = 0;
  };
  std::vector<Entry> entries;
  std::uint64_t shots_per_setting = 0;
};

/// Binomial count per setting with success probability Tr(Pi rho); seeded and
/// deterministic. Throws InvalidDensityMatrixError for an invalid rho.
TomographyRecord simulate_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                     std::uint64_t seed);

/// Least-squares solve of Tr(Pi_i X) = f_i over Hermitian unit-trace X; the
/// result may have negative eigenvalues (that is what the MLE step is for).
/// Throws RankDeficientRecordError when the settings do not span all 16
/// Hermitian degrees of freedom.
Eigen::Matrix4cd linear_inversion(const TomographyRecord& record);
Eigen::Matrix4cd linear_inversion(const std::vector<TomographySetting>& settings,
                                  const std::vector<double>& frequencies);

struct MleOptions {
  double tol = 1e-10;   // stop when the log-likelihood gain drops below this
  int max_iter = 5000;
};

struct MleResult {
  DensityMatrix rho;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  /// Log-likelihood after every iteration (ascent is asserted in tests).
  std::vector<double> likelihood_trace;
};

/// Iterative R rho R fixed-point ascent of the binomial-per-setting
/// log-likelihood, starting from the maximally mixed state, trace-renormalized
/// each step. Output is PSD by construction. A hit iteration cap with gain
/// still above tol is reported via converged = false, with the best iterate.
MleResult mle_reconstruct(const TomographyRecord& record, const MleOptions& options = {});

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Parametric bootstrap: resample counts from the record's own MLE estimate,
/// re-reconstruct, and return the standard deviation of the fidelity against
/// `target` over `resamples` rounds.
double bootstrap_fidelity_std(const TomographyRecord& record, const DensityMatrix& target,
                              int resamples, std::uint64_t seed,
                              const MleOptions& options = {});

}  // namespace nlm
