#include "glmdp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glmdp/errors.hpp"

namespace glmdp {

TrajectoryDataset::TrajectoryDataset(int horizon, int n_actions, std::size_t state_dim)
    : horizon_(horizon), n_actions_(n_actions), state_dim_(state_dim) {
  if (horizon <= 0) throw DataError("dataset horizon must be positive");
  if (n_actions <= 0) throw DataError("dataset needs at least one action");
}

bool TrajectoryDataset::is_labeled(const Episode& e) {
  for (const auto& s : e)
    if (!s.reward_observed()) return false;
  return true;
}

void TrajectoryDataset::add(Episode episode) {
  const std::string where = "episode " + std::to_string(episodes_.size());
  if (episode.size() != static_cast<std::size_t>(horizon_)) {
    throw DataError(where + ": expected " + std::to_string(horizon_) + " steps, got " +
                    std::to_string(episode.size()));
  }
  std::size_t observed = 0;
  for (const auto& s : episode) {
    if (s.state.size() != state_dim_ || s.next_state.size() != state_dim_) {
      throw DataError(where + ": state dimension mismatch");
    }
    if (s.action < 0 || s.action >= n_actions_) throw DataError(where + ": action index out of range");
    if (s.reward) {
      if (!std::isfinite(*s.reward)) throw DataError(where + ": non-finite reward");
      ++observed;
    }
    for (double v : s.state)
      if (!std::isfinite(v)) throw DataError(where + ": non-finite state");
    for (double v : s.next_state)
      if (!std::isfinite(v)) throw DataError(where + ": non-finite next state");
  }
  if (observed != 0 && observed != episode.size()) {
    throw DataError(where + ": mixed labeled and reward-free steps");
  }
  if (observed != 0) ++n_labeled_;
  episodes_.push_back(std::move(episode));
}

TrajectoryDataset TrajectoryDataset::select(const std::vector<std::size_t>& indices) const {
  TrajectoryDataset out = empty_like();
  out.episodes_.reserve(indices.size());
  for (std::size_t i : indices) {
    out.episodes_.push_back(episodes_.at(i));
    if (is_labeled(episodes_[i])) ++out.n_labeled_;
  }
  return out;
}

TrajectoryDataset TrajectoryDataset::labeled_part() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < episodes_.size(); ++i)
    if (is_labeled(episodes_[i])) idx.push_back(i);
  return select(idx);
}

TrajectoryDataset TrajectoryDataset::unlabeled_part() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < episodes_.size(); ++i)
    if (!is_labeled(episodes_[i])) idx.push_back(i);
  return select(idx);
}

TrajectoryDataset TrajectoryDataset::without_rewards() const {
  TrajectoryDataset out = *this;
  for (auto& e : out.episodes_)
    for (auto& s : e) s.reward.reset();
  out.n_labeled_ = 0;
  return out;
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_dataset_csv(std::ostream& out, const TrajectoryDataset& data) {
  const std::size_t d = data.state_dim();
  out << "episode,h,action,reward,reward_observed";
  for (std::size_t i = 0; i < d; ++i) out << ",state_" << i;
  for (std::size_t i = 0; i < d; ++i) out << ",next_state_" << i;
  out << '\n';
  for (std::size_t e = 0; e < data.size(); ++e) {
    const Episode& ep = data[e];
    for (std::size_t h = 0; h < ep.size(); ++h) {
      const TrajectoryStep& s = ep[h];
      out << e << ',' << h << ',' << s.action << ',';
      if (s.reward) out << format_real(*s.reward);
      out << ',' << (s.reward ? "true" : "false");
      for (double v : s.state) out << ',' << format_real(v);
      for (double v : s.next_state) out << ',' << format_real(v);
      out << '\n';
    }
  }
}

std::string dataset_to_csv(const TrajectoryDataset& data) {
  std::ostringstream os;
  write_dataset_csv(os, data);
  return os.str();
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

long long parse_int(std::string_view s, std::size_t line_no) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s, std::size_t line_no) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw DataError("line " + std::to_string(line_no) + ": bad boolean '" + std::string(s) + "'");
}

}  // namespace

TrajectoryDataset read_dataset_csv(std::istream& in, int horizon, int n_actions) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 5 || header[0] != "episode" || header[1] != "h" || header[2] != "action" ||
      header[3] != "reward" || header[4] != "reward_observed" || (header.size() - 5) % 2 != 0) {
    throw DataError("dataset CSV: unexpected header");
  }
  const std::size_t d = (header.size() - 5) / 2;
  for (std::size_t i = 0; i < d; ++i) {
    if (header[5 + i] != "state_" + std::to_string(i) || header[5 + d + i] != "next_state_" + std::to_string(i)) {
      throw DataError("dataset CSV: unexpected state column names");
    }
  }

  TrajectoryDataset data(horizon, n_actions, d);
  Episode current;
  long long current_id = -1;
  std::size_t line_no = 1;
  auto flush = [&] {
    if (current.empty()) return;
    data.add(std::move(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != header.size()) throw DataError("line " + std::to_string(line_no) + ": wrong field count");
    const long long id = parse_int(f[0], line_no);
    const long long h = parse_int(f[1], line_no);
    if (id != current_id) {
      flush();
      current_id = id;
    }
    if (h != static_cast<long long>(current.size())) {
      throw DataError("line " + std::to_string(line_no) + ": step index out of sequence");
    }
    TrajectoryStep step;
    step.action = static_cast<int>(parse_int(f[2], line_no));
    const bool observed = parse_bool(f[4], line_no);
    if (observed != !f[3].empty()) {
      throw DataError("line " + std::to_string(line_no) + ": reward presence disagrees with reward_observed");
    }
    if (observed) step.reward = parse_real(f[3], line_no);
    step.state.resize(d);
    step.next_state.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      step.state[i] = parse_real(f[5 + i], line_no);
      step.next_state[i] = parse_real(f[5 + d + i], line_no);
    }
    current.push_back(std::move(step));
  }
  flush();
  return data;
}

TrajectoryDataset dataset_from_csv(const std::string& text, int horizon, int n_actions) {
  std::istringstream is(text);
  return read_dataset_csv(is, horizon, n_actions);
}

void save_dataset(const std::string& path, const TrajectoryDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_dataset_csv(out, data);
  if (!out) throw Error("write failed: " + path);
}

TrajectoryDataset load_dataset(const std::string& path, int horizon, int n_actions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path);
  return read_dataset_csv(in, horizon, n_actions);
}

}  // namespace glmdp
