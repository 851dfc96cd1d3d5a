#include "mdb/core.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdb {

namespace {
constexpr double kSymmetryTolerance = 1e-12;
}

double closed_form_win_prob(double u_i, double u_j) {
  // Phi(d / sqrt(2)) = erfc(-d / 2) / 2
  return 0.5 * std::erfc(-(u_i - u_j) / 2.0);
}

PreferenceMatrix::PreferenceMatrix(std::size_t arms, std::vector<double> row_major)
    : arms_(arms), p_(std::move(row_major)) {
  if (p_.size() != arms_ * arms_) {
    throw std::invalid_argument("preference matrix: expected " +
                                std::to_string(arms_ * arms_) + " entries, got " +
                                std::to_string(p_.size()));
  }
  for (std::size_t i = 0; i < arms_; ++i) {
    if (p_[i * arms_ + i] != 0.5) {
      throw std::invalid_argument("preference matrix: diagonal entry " +
                                  std::to_string(i) + " is not 1/2");
    }
    for (std::size_t j = 0; j < arms_; ++j) {
      const double pij = p_[i * arms_ + j];
      if (!(pij >= 0.0 && pij <= 1.0)) {
        throw std::invalid_argument("preference matrix: entry out of [0,1]");
      }
      if (std::abs(pij + p_[j * arms_ + i] - 1.0) > kSymmetryTolerance) {
        throw std::invalid_argument("preference matrix: p(i,j) + p(j,i) != 1 at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

PreferenceMatrix PreferenceMatrix::from_utilities(std::span<const double> utilities) {
  const std::size_t k = utilities.size();
  std::vector<double> p(k * k, 0.5);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double pij = closed_form_win_prob(utilities[i], utilities[j]);
      p[i * k + j] = pij;
      p[j * k + i] = 1.0 - pij;
    }
  }
  return PreferenceMatrix(k, std::move(p));
}

PreferenceMatrix PreferenceMatrix::from_upper(std::size_t arms,
                                              const std::vector<std::vector<double>>& rows) {
  if (rows.size() != arms) throw std::invalid_argument("preference matrix: row count mismatch");
  std::vector<double> p(arms * arms, 0.5);
  for (std::size_t i = 0; i < arms; ++i) {
    if (rows[i].size() != arms) {
      throw std::invalid_argument("preference matrix: row " + std::to_string(i) +
                                  " has wrong length");
    }
    for (std::size_t j = i + 1; j < arms; ++j) {
      p[i * arms + j] = rows[i][j];
      p[j * arms + i] = 1.0 - rows[i][j];
    }
  }
  return PreferenceMatrix(arms, std::move(p));
}

PreferenceMatrix PreferenceMatrix::restricted_to(std::span<const ArmId> arms) const {
  const std::size_t k = arms.size();
  std::vector<double> p(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) p[a * k + b] = (*this)(arms[a], arms[b]);
  }
  return PreferenceMatrix(k, std::move(p));
}

std::vector<std::vector<double>> PreferenceMatrix::rows() const {
  std::vector<std::vector<double>> out(arms_);
  for (std::size_t i = 0; i < arms_; ++i) {
    out[i].assign(p_.begin() + static_cast<std::ptrdiff_t>(i * arms_),
                  p_.begin() + static_cast<std::ptrdiff_t>((i + 1) * arms_));
  }
  return out;
}

std::optional<ArmId> condorcet_winner(const PreferenceMatrix& p) {
  for (ArmId i = 0; i < p.size(); ++i) {
    bool beats_all = true;
    for (ArmId j = 0; j < p.size() && beats_all; ++j) {
      if (j != i && !(p(i, j) > 0.5)) beats_all = false;
    }
    if (beats_all) return i;
  }
  return std::nullopt;
}

double set_regret(const PreferenceMatrix& p, ArmId star, std::span<const ArmId> set) {
  if (set.empty()) throw std::invalid_argument("set_regret: empty arm set");
  double sum = 0.0;
  for (ArmId j : set) sum += p(star, j);
  return sum / static_cast<double>(set.size()) - 0.5;
}

double ndcg_set_regret(std::span<const double> ndcg, std::span<const ArmId> set) {
  if (set.empty()) throw std::invalid_argument("ndcg_set_regret: empty arm set");
  if (ndcg.empty()) throw std::invalid_argument("ndcg_set_regret: empty NDCG table");
  double best = ndcg[0];
  for (double v : ndcg) best = std::max(best, v);
  double sum = 0.0;
  for (ArmId j : set) sum += best - ndcg[j];
  return sum / static_cast<double>(set.size());
}

WinCountMatrix WinCountMatrix::from_counts(std::size_t arms, std::vector<std::uint64_t> row_major) {
  if (row_major.size() != arms * arms) throw std::invalid_argument("win counts: expected K*K entries");
  WinCountMatrix w;
  w.arms_ = arms;
  for (std::size_t i = 0; i < arms; ++i) {
    if (row_major[i * arms + i] != 0) throw std::invalid_argument("win counts: non-zero diagonal");
  }
  for (auto v : row_major) w.total_ += v;
  w.w_ = std::move(row_major);
  return w;
}

double WinCountMatrix::mean(ArmId i, ArmId j) const {
  const auto n = comparisons(i, j);
  if (i == j || n == 0) return 0.5;
  return static_cast<double>(wins(i, j)) / static_cast<double>(n);
}

void WinCountMatrix::record(const DuelOutcome& outcome) {
  if (outcome.winner >= arms_ || outcome.loser >= arms_) {
    throw std::out_of_range("duel outcome references arm outside [0, " +
                            std::to_string(arms_) + ")");
  }
  if (outcome.winner == outcome.loser) {
    throw std::out_of_range("duel outcome has winner == loser");
  }
  ++w_[outcome.winner * arms_ + outcome.loser];
  ++total_;
}

void WinCountMatrix::record_duels(std::span<const DuelOutcome> outcomes) {
  // All-or-nothing: validate the whole batch before counting.
  for (const auto& o : outcomes) {
    if (o.winner >= arms_ || o.loser >= arms_ || o.winner == o.loser) {
      throw std::out_of_range("record_duels: invalid outcome (" + std::to_string(o.winner) +
                              " beats " + std::to_string(o.loser) + ") for K=" +
                              std::to_string(arms_));
    }
  }
  for (const auto& o : outcomes) {
    ++w_[o.winner * arms_ + o.loser];
  }
  total_ += outcomes.size();
}

void RegretTrace::add(std::uint64_t t, double instantaneous, bool keep) {
  cumulative_ += instantaneous;
  if (keep) points_.push_back({t, instantaneous, cumulative_});
}

}  // namespace mdb
