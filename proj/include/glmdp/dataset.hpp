#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glmdp/linalg.hpp"

namespace glmdp {

struct TrajectoryStep {
  Vector state;
  int action = 0;
  std::optional<double> reward;  // absent for reward-free (unlabeled) steps
  Vector next_state;

  bool reward_observed() const { return reward.has_value(); }

  friend bool operator==(const TrajectoryStep&, const TrajectoryStep&) = default;
};

using Episode = std::vector<TrajectoryStep>;

// Episodic offline data. Every episode has exactly `horizon` steps and is
// either fully labeled or fully reward-free. Step indices are 0-based.
class TrajectoryDataset {
 public:
  TrajectoryDataset(int horizon, int n_actions, std::size_t state_dim);

  int horizon() const { return horizon_; }
  int n_actions() const { return n_actions_; }
  std::size_t state_dim() const { return state_dim_; }

  // Validates the episode against the dataset shape; throws DataError.
  void add(Episode episode);

  const std::vector<Episode>& episodes() const { return episodes_; }
  std::size_t size() const { return episodes_.size(); }
  bool empty() const { return episodes_.empty(); }
  const Episode& operator[](std::size_t i) const { return episodes_[i]; }

  std::size_t n_labeled() const { return n_labeled_; }
  std::size_t n_unlabeled() const { return episodes_.size() - n_labeled_; }

  static bool is_labeled(const Episode& e);

  // Same shape, no episodes.
  TrajectoryDataset empty_like() const { return TrajectoryDataset(horizon_, n_actions_, state_dim_); }

  // Subset by episode index, preserving order of `indices`.
  TrajectoryDataset select(const std::vector<std::size_t>& indices) const;

  TrajectoryDataset labeled_part() const;
  TrajectoryDataset unlabeled_part() const;

  // Copy with every reward removed.
  TrajectoryDataset without_rewards() const;

  friend bool operator==(const TrajectoryDataset&, const TrajectoryDataset&) = default;

 private:
  int horizon_;
  int n_actions_;
  std::size_t state_dim_;
  std::size_t n_labeled_ = 0;
  std::vector<Episode> episodes_;
};

// CSV: episode,h,action,reward,reward_observed,state_0..,next_state_0..
// Reals use 17 significant digits; unlabeled rows leave `reward` empty.
void write_dataset_csv(std::ostream& out, const TrajectoryDataset& data);
std::string dataset_to_csv(const TrajectoryDataset& data);

// Reads the CSV format. Horizon and action count are not encoded in the file
// and must be supplied; the state dimension comes from the header.
TrajectoryDataset read_dataset_csv(std::istream& in, int horizon, int n_actions);
TrajectoryDataset dataset_from_csv(const std::string& text, int horizon, int n_actions);

void save_dataset(const std::string& path, const TrajectoryDataset& data);
TrajectoryDataset load_dataset(const std::string& path, int horizon, int n_actions);

std::string format_real(double v);

}  // namespace glmdp
