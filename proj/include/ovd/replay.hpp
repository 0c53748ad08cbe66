#pragma once

#include <Eigen/Core>
#include <vector>

#include "ovd/rng.hpp"

namespace ovd {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;      // executed (squashed) action
  Eigen::VectorXd pre_squash;  // Gaussian sample before squashing
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;
};

/// Fixed-capacity ring buffer with FIFO eviction and uniform sampling with
/// replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// i = 0 is the oldest transition still stored.
  const Transition& oldest_first(std::size_t i) const;

  std::vector<std::size_t> sample_indices(std::size_t count, RngStream& rng) const;
  const Transition& operator[](std::size_t raw_index) const { return data_[raw_index]; }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next write slot once full
  std::vector<Transition> data_;
};

}  // namespace ovd
