#include <sstream>

#include "doctest.h"
#include "glmdp/dataset.hpp"
#include "glmdp/errors.hpp"
#include "test_util.hpp"

using namespace glmdp;

namespace {

Episode random_episode(int horizon, int n_actions, std::size_t d, bool labeled, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 10.0);
  std::uniform_int_distribution<int> act(0, n_actions - 1);
  Episode e;
  Vector x(d);
  for (double& v : x) v = z(rng);
  for (int h = 0; h < horizon; ++h) {
    TrajectoryStep s;
    s.state = x;
    s.action = act(rng);
    if (labeled) s.reward = z(rng) * 1e-3;
    s.next_state.resize(d);
    for (double& v : s.next_state) v = z(rng) * 1e5;
    x = s.next_state;
    e.push_back(s);
  }
  return e;
}

TrajectoryDataset random_dataset(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(1, 5);
  const int horizon = small(rng);
  const int actions = small(rng);
  const std::size_t d = static_cast<std::size_t>(small(rng));
  TrajectoryDataset data(horizon, actions, d);
  const int episodes = small(rng) * 3 - 3;
  for (int i = 0; i < episodes; ++i) data.add(random_episode(horizon, actions, d, rng() % 3 != 0, rng));
  return data;
}

}  // namespace

TEST_CASE("CSV round trip is byte-identical (property)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const TrajectoryDataset data = random_dataset(rng);
    const std::string text = dataset_to_csv(data);
    const TrajectoryDataset back = dataset_from_csv(text, data.horizon(), data.n_actions());
    CHECK(back == data);
    CHECK(dataset_to_csv(back) == text);
  }
}

TEST_CASE("CSV layout") {
  TrajectoryDataset data(2, 2, 1);
  Episode labeled{{{0.5}, 1, 1.0, {0.25}}, {{0.25}, 0, 0.0, {0.125}}};
  Episode unlabeled{{{0.1}, 0, std::nullopt, {0.2}}, {{0.2}, 1, std::nullopt, {0.3}}};
  data.add(labeled);
  data.add(unlabeled);
  const std::string text = dataset_to_csv(data);
  std::istringstream in(text);
  std::string header, first, unl;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, unl);
  std::getline(in, unl);
  CHECK(header == "episode,h,action,reward,reward_observed,state_0,next_state_0");
  CHECK(first == "0,0,1,1,true,0.5,0.25");
  CHECK(unl == "1,0,0,,false,0.10000000000000001,0.20000000000000001");
  CHECK(data.n_labeled() == 1);
  CHECK(data.n_unlabeled() == 1);
}

TEST_CASE("empty dataset round-trips through a header-only file") {
  const TrajectoryDataset empty(3, 2, 4);
  const std::string text = dataset_to_csv(empty);
  const TrajectoryDataset back = dataset_from_csv(text, 3, 2);
  CHECK(back.empty());
  CHECK(back.state_dim() == 4);
}

TEST_CASE("dataset invariants are enforced") {
  std::mt19937_64 rng(5);
  TrajectoryDataset data(3, 2, 2);
  CHECK_THROWS_AS(data.add(random_episode(2, 2, 2, true, rng)), DataError);
  Episode bad_action = random_episode(3, 2, 2, true, rng);
  bad_action[1].action = 2;
  CHECK_THROWS_AS(data.add(bad_action), DataError);
  Episode mixed = random_episode(3, 2, 2, true, rng);
  mixed[2].reward.reset();
  CHECK_THROWS_AS(data.add(mixed), DataError);
  Episode wrong_dim = random_episode(3, 2, 3, true, rng);
  CHECK_THROWS_AS(data.add(wrong_dim), DataError);
  Episode nan_state = random_episode(3, 2, 2, true, rng);
  nan_state[0].state[0] = std::nan("");
  CHECK_THROWS_AS(data.add(nan_state), DataError);
  CHECK(data.empty());
}

TEST_CASE("mixed labeling and malformed rows are rejected on load") {
  const std::string header = "episode,h,action,reward,reward_observed,state_0,next_state_0\n";
  CHECK_THROWS_AS(dataset_from_csv(header + "0,0,0,1,true,0,0\n0,1,0,,false,0,0\n", 2, 2), DataError);
  CHECK_THROWS_AS(dataset_from_csv(header + "0,0,0,abc,true,0,0\n0,1,0,1,true,0,0\n", 2, 2), DataError);
  CHECK_THROWS_AS(dataset_from_csv(header + "0,0,0,1,true,0,0\n", 2, 2), DataError);
  CHECK_THROWS_AS(dataset_from_csv(header + "0,0,5,1,true,0,0\n0,1,0,1,true,0,0\n", 2, 2), DataError);
  CHECK_THROWS_AS(dataset_from_csv("bogus,header\n", 2, 2), DataError);
}

TEST_CASE("labeled/unlabeled splits and reward stripping") {
  std::mt19937_64 rng(9);
  TrajectoryDataset data(2, 3, 2);
  for (int i = 0; i < 6; ++i) data.add(random_episode(2, 3, 2, i % 2 == 0, rng));
  CHECK(data.labeled_part().size() == 3);
  CHECK(data.unlabeled_part().size() == 3);
  const TrajectoryDataset stripped = data.without_rewards();
  CHECK(stripped.n_labeled() == 0);
  CHECK(stripped.size() == 6);
  CHECK(data.n_labeled() + data.n_unlabeled() == data.size());
}
