#include "nlm/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlm/errors.hpp"
#include "nlm/sampling.hpp"

namespace nlm {

namespace {

constexpr double kProbabilityClamp = 1e-12;

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(r * 2, c * 2) = a(r, c) * b;
  return out;
}

// Orthonormal Hermitian basis (sigma_i (x) sigma_j)/2 under the
// Hilbert-Schmidt inner product; element 0 is (I (x) I)/2.
const std::array<Eigen::Matrix4cd, 16>& pauli_basis() {
  static const std::array<Eigen::Matrix4cd, 16> basis = [] {
    const Complex i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 4> sigma;
    sigma[0] = Eigen::Matrix2cd::Identity();
    sigma[1] << 0, 1, 1, 0;
    sigma[2] << 0, -i, i, 0;
    sigma[3] << 1, 0, 0, -1;
    std::array<Eigen::Matrix4cd, 16> out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) out[a * 4 + b] = 0.5 * kron2(sigma[a], sigma[b]);
    return out;
  }();
  return basis;
}

// Design matrix M(i, k) = Tr(Pi_i B_k); real because both factors are Hermitian.
Eigen::MatrixXd design_matrix(const std::vector<TomographySetting>& settings) {
  const auto& basis = pauli_basis();
  Eigen::MatrixXd m(static_cast<int>(settings.size()), 16);
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const Eigen::Matrix4cd projector = setting_projector(settings[i]);
    for (int k = 0; k < 16; ++k) {
      m(static_cast<int>(i), k) = (projector * basis[k]).trace().real();
    }
  }
  return m;
}

void require_informationally_complete(const Eigen::MatrixXd& design) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  const double threshold = sv.size() > 0 ? sv(0) * 1e-10 : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  if (rank < 16) {
    throw RankDeficientRecordError(
        "tomography settings span only " + std::to_string(rank) +
        " of 16 Hermitian degrees of freedom");
  }
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

double log_likelihood(const std::vector<Eigen::Matrix4cd>& projectors,
                      const std::vector<std::uint64_t>& counts, std::uint64_t shots,
                      const Eigen::Matrix4cd& rho) {
  double total = 0.0;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const double p = clamp_probability((projectors[i] * rho).trace().real());
    const double n = static_cast<double>(counts[i]);
    const double miss = static_cast<double>(shots) - n;
    total += n * std::log(p) + miss * std::log1p(-p);
  }
  return total;
}

Eigen::Matrix4cd matrix_sqrt_psd(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m);
  Eigen::Vector4d values = solver.eigenvalues().cwiseMax(0.0);
  return solver.eigenvectors() * values.cwiseSqrt().asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

Eigen::Vector2cd analyzer_ket(Analyzer a) {
  const double s = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  switch (a) {
    case Analyzer::H:
      return Eigen::Vector2cd(1.0, 0.0);
    case Analyzer::V:
      return Eigen::Vector2cd(0.0, 1.0);
    case Analyzer::D:
      return Eigen::Vector2cd(s, s);
    case Analyzer::A:
      return Eigen::Vector2cd(s, -s);
    case Analyzer::R:
      return Eigen::Vector2cd(s, -i * s);
    case Analyzer::L:
      return Eigen::Vector2cd(s, i * s);
  }
  return Eigen::Vector2cd::Zero();
}

std::string_view analyzer_name(Analyzer a) {
  constexpr std::array<std::string_view, 6> names = {"H", "V", "D", "A", "R", "L"};
  return names[static_cast<std::size_t>(a)];
}

bool analyzer_from_name(std::string_view name, Analyzer& out) {
  for (Analyzer a : kAnalyzers) {
    if (analyzer_name(a) == name) {
      out = a;
      return true;
    }
  }
  return false;
}

std::vector<TomographySetting> all_settings() {
  std::vector<TomographySetting> settings;
  settings.reserve(36);
  for (Analyzer a : kAnalyzers) {
    for (Analyzer b : kAnalyzers) {
      settings.push_back(TomographySetting{a, b});
    }
  }
  return settings;
}

Eigen::Matrix4cd setting_projector(const TomographySetting& s) {
  const Eigen::Vector2cd ka = analyzer_ket(s.a);
  const Eigen::Vector2cd kb = analyzer_ket(s.b);
  Eigen::Vector4cd joint;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) joint(i * 2 + j) = ka(i) * kb(j);
  return joint * joint.adjoint();
}

TomographyRecord simulate_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                     std::uint64_t seed) {
  rho.validate();
  if (shots < 1) {
    throw ParameterOutOfRangeError("simulate_tomography needs shots >= 1");
  }
  TomographyRecord record;
  record.shots_per_setting = shots;
  std::mt19937_64 rng(seed);
  for (const TomographySetting& setting : all_settings()) {
    const double p =
        std::clamp((setting_projector(setting) * rho.matrix()).trace().real(), 0.0, 1.0);
    record.entries.push_back({setting, binomial_draw(rng, shots, p)});
  }
  return record;
}

Eigen::Matrix4cd linear_inversion(const std::vector<TomographySetting>& settings,
                                  const std::vector<double>& frequencies) {
  if (settings.size() != frequencies.size()) {
    throw Error("linear_inversion: settings and frequencies differ in length");
  }
  const Eigen::MatrixXd design = design_matrix(settings);
  require_informationally_complete(design);

  // Unit trace pins the (I (x) I)/2 coefficient to 0.5; solve the remaining 15.
  Eigen::VectorXd rhs(static_cast<int>(frequencies.size()));
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    rhs(static_cast<int>(i)) = frequencies[i];
  }
  rhs -= 0.5 * design.col(0);
  const Eigen::MatrixXd reduced = design.rightCols(15);
  const Eigen::VectorXd x =
      reduced.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);

  const auto& basis = pauli_basis();
  Eigen::Matrix4cd out = 0.5 * basis[0];
  for (int k = 0; k < 15; ++k) {
    out += x(k) * basis[k + 1];
  }
  return out;
}

Eigen::Matrix4cd linear_inversion(const TomographyRecord& record) {
  if (record.shots_per_setting == 0) {
    throw EmptyTableError("tomography record has zero shots per setting");
  }
  std::vector<TomographySetting> settings;
  std::vector<double> frequencies;
  settings.reserve(record.entries.size());
  frequencies.reserve(record.entries.size());
  for (const auto& entry : record.entries) {
    settings.push_back(entry.setting);
    frequencies.push_back(static_cast<double>(entry.count) /
                          static_cast<double>(record.shots_per_setting));
  }
  return linear_inversion(settings, frequencies);
}

MleResult mle_reconstruct(const TomographyRecord& record, const MleOptions& options) {
  if (options.tol <= 0.0) {
    throw ParameterOutOfRangeError("mle tol must be positive");
  }
  if (record.entries.empty() || record.shots_per_setting == 0) {
    throw EmptyTableError("tomography record is empty");
  }

  std::vector<TomographySetting> settings;
  std::vector<Eigen::Matrix4cd> projectors;
  std::vector<std::uint64_t> counts;
  for (const auto& entry : record.entries) {
    settings.push_back(entry.setting);
    projectors.push_back(setting_projector(entry.setting));
    counts.push_back(entry.count);
  }
  require_informationally_complete(design_matrix(settings));

  const double shots = static_cast<double>(record.shots_per_setting);
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();

  Eigen::Matrix4cd rho = id * 0.25;
  MleResult result;
  double best = log_likelihood(projectors, counts, record.shots_per_setting, rho);
  Eigen::Matrix4cd best_rho = rho;
  result.likelihood_trace.push_back(best);

  double previous = best;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    for (std::size_t i = 0; i < projectors.size(); ++i) {
      const double p = clamp_probability((projectors[i] * rho).trace().real());
      const double n = static_cast<double>(counts[i]);
      r += (n / p) * projectors[i] + ((shots - n) / (1.0 - p)) * (id - projectors[i]);
    }
    Eigen::Matrix4cd next = r * rho * r;
    next = 0.5 * (next + next.adjoint().eval());
    next /= next.trace().real();

    const double current =
        log_likelihood(projectors, counts, record.shots_per_setting, next);
    result.likelihood_trace.push_back(current);
    rho = next;
    if (current > best) {
      best = current;
      best_rho = rho;
    }
    const double gain = current - previous;
    previous = current;
    if (gain < options.tol) {
      result.converged = true;
      ++iter;
      break;
    }
  }

  result.iterations = iter;
  result.log_likelihood = best;
  result.rho = DensityMatrix::from_matrix(best_rho);
  return result;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  rho.validate();
  sigma.validate();
  const Eigen::Matrix4cd root = matrix_sqrt_psd(rho.matrix());
  const Eigen::Matrix4cd inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(
      0.5 * (inner + inner.adjoint().eval()), Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    sum += std::sqrt(std::max(0.0, solver.eigenvalues()(i)));
  }
  return std::clamp(sum * sum, 0.0, 1.0);
}

double bootstrap_fidelity_std(const TomographyRecord& record, const DensityMatrix& target,
                              int resamples, std::uint64_t seed, const MleOptions& options) {
  if (resamples < 2) {
    throw ParameterOutOfRangeError("bootstrap needs at least 2 resamples");
  }
  const DensityMatrix estimate = mle_reconstruct(record, options).rho;
  std::vector<double> fidelities;
  fidelities.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    // Golden-ratio seed stride keeps resample streams disjoint.
    const std::uint64_t derived =
        seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(r + 1);
    const TomographyRecord resampled =
        simulate_tomography(estimate, record.shots_per_setting, derived);
    fidelities.push_back(fidelity(mle_reconstruct(resampled, options).rho, target));
  }
  double mean = 0.0;
  for (double f : fidelities) mean += f;
  mean /= fidelities.size();
  double variance = 0.0;
  for (double f : fidelities) variance += (f - mean) * (f - mean);
  variance /= (fidelities.size() - 1);
  return std::sqrt(variance);
}

}  // namespace nlm
