#include "ovd/replay.hpp"

#include <stdexcept>

namespace ovd {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay: capacity must be positive");
  data_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
    return;
  }
  data_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::oldest_first(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("replay: index out of range");
  if (data_.size() < capacity_) return data_[i];
  return data_[(head_ + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count, RngStream& rng) const {
  if (data_.empty()) throw std::invalid_argument("replay: cannot sample from an empty buffer");
  std::vector<std::size_t> indices(count);
  for (std::size_t i = 0; i < count; ++i) indices[i] = rng.uniform_index(data_.size());
  return indices;
}

}  // namespace ovd
