#include "doctest.h"
#include "ovd/replay.hpp"

using namespace ovd;

namespace {

Transition numbered(double tag) {
  Transition t;
  t.state = Eigen::VectorXd::Constant(1, tag);
  t.action = Eigen::VectorXd::Zero(1);
  t.pre_squash = Eigen::VectorXd::Zero(1);
  t.next_state = Eigen::VectorXd::Zero(1);
  t.reward = tag;
  return t;
}

}  // namespace

TEST_CASE("buffer never exceeds capacity and evicts oldest first") {
  ReplayBuffer buffer(5);
  for (int i = 0; i < 8; ++i) buffer.push(numbered(i));
  CHECK(buffer.size() == 5);
  // after capacity + 3 inserts the oldest 3 are gone
  for (int i = 0; i < 5; ++i) CHECK(buffer.oldest_first(i).reward == doctest::Approx(3.0 + i));
}

TEST_CASE("partial fill keeps insertion order") {
  ReplayBuffer buffer(10);
  for (int i = 0; i < 4; ++i) buffer.push(numbered(i));
  CHECK(buffer.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(buffer.oldest_first(i).reward == doctest::Approx(i));
  CHECK_THROWS_AS((void)buffer.oldest_first(4), std::out_of_range);
}

TEST_CASE("sampling is uniform with replacement over current contents") {
  ReplayBuffer buffer(4);
  for (int i = 0; i < 4; ++i) buffer.push(numbered(i));
  RngStream rng(7);
  std::array<int, 4> hits{0, 0, 0, 0};
  const auto indices = buffer.sample_indices(40000, rng);
  for (std::size_t idx : indices) {
    REQUIRE(idx < 4);
    ++hits[idx];
  }
  for (int h : hits) CHECK(h > 9000);  // ~10000 each
}

TEST_CASE("empty buffer cannot be sampled") {
  ReplayBuffer buffer(3);
  RngStream rng(1);
  CHECK_THROWS_AS((void)buffer.sample_indices(1, rng), std::invalid_argument);
  CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}
