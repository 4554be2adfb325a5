#include "lgpkit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lgpkit/errors.hpp"
#include "lgpkit/introns.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

void Dataset::validate() const {
  if (num_features < 1) throw InputError("dataset needs at least one feature");
  if (targets.size() < 2) throw InputError("dataset needs at least two rows");
  if (features.size() != targets.size() * num_features) {
    throw InputError("dataset feature matrix does not match row count");
  }
  const double mean = std::accumulate(targets.begin(), targets.end(), 0.0) /
                      static_cast<double>(targets.size());
  double ss = 0.0;
  for (double y : targets) ss += (y - mean) * (y - mean);
  if (!(ss > 0.0)) throw InputError("zero target variance");
}

const std::vector<SyntheticSpec>& synthetic_problems() {
  static const std::vector<SyntheticSpec> specs = {
      {"Nguyen4", 1, 20, -1.0, 1.0},   {"Nguyen5", 1, 20, -1.0, 1.0},
      {"Nguyen7", 1, 20, 0.0, 2.0},    {"Keijzer11", 2, 100, -3.0, 3.0},
      {"R1", 1, 20, -1.0, 1.0},
  };
  return specs;
}

const SyntheticSpec& synthetic_spec(std::string_view name) {
  for (const auto& s : synthetic_problems()) {
    if (s.name == name) return s;
  }
  throw InputError("unknown problem '" + std::string(name) + "'");
}

double synthetic_target(std::string_view name, std::span<const double> x) {
  const double a = x[0];
  if (name == "Nguyen4") {
    return a * (1 + a * (1 + a * (1 + a * (1 + a * (1 + a)))));
  }
  if (name == "Nguyen5") return std::sin(a * a) * std::cos(a) - 1.0;
  if (name == "Nguyen7") return std::log(a + 1.0) + std::log(a * a + 1.0);
  if (name == "Keijzer11") {
    const double b = x[1];
    return a * b + std::sin((a - 1.0) * (b - 1.0));
  }
  if (name == "R1") return (a + 1.0) * (a + 1.0) * (a + 1.0) / (a * a - a + 1.0);
  throw InputError("unknown problem '" + std::string(name) + "'");
}

Dataset gen_synthetic(std::string_view name, std::size_t n_points, double lo, double hi,
                      std::mt19937_64& rng) {
  const auto& spec = synthetic_spec(name);
  if (n_points < 2) throw InputError("need at least two points");
  if (!(lo < hi)) throw InputError("empty sampling domain");
  std::uniform_real_distribution<double> u(lo, hi);
  Dataset d;
  d.name = spec.name;
  d.num_features = spec.num_features;
  d.features.resize(n_points * spec.num_features);
  d.targets.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t j = 0; j < spec.num_features; ++j) {
      d.features[i * spec.num_features + j] = u(rng);
    }
    d.targets[i] = synthetic_target(name, d.row(i));
  }
  d.validate();
  return d;
}

Dataset gen_synthetic(std::string_view name, std::mt19937_64& rng, std::size_t n_points) {
  const auto& spec = synthetic_spec(name);
  return gen_synthetic(name, n_points == 0 ? spec.default_points : n_points, spec.lo, spec.hi,
                       rng);
}

Dataset parse_csv(std::string_view text, std::string name) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool header = true;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = detail::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(detail::trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (header) {
      width = cells.size();
      if (width < 2) throw InputError("CSV needs at least one feature and one target column");
      header = false;
      continue;
    }
    if (cells.size() != width) {
      throw InputError("CSV parse failure at line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(width);
    for (auto cell : cells) {
      double v = 0;
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || p != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw InputError("non-numeric cell '" + std::string(cell) + "' at line " +
                         std::to_string(line_no));
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (header) throw InputError("CSV parse failure: missing header");

  Dataset d;
  d.name = std::move(name);
  d.num_features = width - 1;
  for (const auto& r : rows) {
    d.features.insert(d.features.end(), r.begin(), r.end() - 1);
    d.targets.push_back(r.back());
  }
  d.validate();
  return d;
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto slash = path.find_last_of('/');
  return parse_csv(ss.str(), slash == std::string::npos ? path : path.substr(slash + 1));
}

std::string to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.num_features; ++j) out += "x" + std::to_string(j) + ",";
  out += "y\n";
  for (std::size_t i = 0; i < data.num_cases(); ++i) {
    for (double v : data.row(i)) out += detail::format_double(v) + ",";
    out += detail::format_double(data.targets[i]) + "\n";
  }
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::uint64_t split_seed,
                                          double train_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw InputError("train_frac must be in (0, 1)");
  std::vector<std::size_t> order(data.num_cases());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(split_seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_frac * static_cast<double>(data.num_cases())));

  auto take = [&](std::size_t first, std::size_t last, const char* suffix) {
    Dataset d;
    d.name = data.name + suffix;
    d.num_features = data.num_features;
    for (std::size_t k = first; k < last; ++k) {
      const auto r = data.row(order[k]);
      d.features.insert(d.features.end(), r.begin(), r.end());
      d.targets.push_back(data.targets[order[k]]);
    }
    return d;
  };
  return {take(0, n_train, ":train"), take(n_train, order.size(), ":test")};
}

std::pair<Dataset, Dataset> load_csv(const std::string& path, std::uint64_t split_seed,
                                     double train_frac) {
  return split_dataset(read_csv(path), split_seed, train_frac);
}

std::uint64_t test_seed_for(std::uint64_t seed) noexcept {
  return seed ^ 0x9E3779B97F4A7C15ULL;
}

Problem make_problem(std::string_view name_or_path, std::uint64_t seed) {
  for (const auto& spec : synthetic_problems()) {
    if (spec.name == name_or_path) {
      std::mt19937_64 train_rng(seed);
      std::mt19937_64 test_rng(test_seed_for(seed));
      return {gen_synthetic(spec.name, train_rng), gen_synthetic(spec.name, test_rng)};
    }
  }
  const std::string path(name_or_path);
  if (path.find(".csv") == std::string::npos) {
    throw InputError("unknown problem '" + path + "'");
  }
  auto [train, test] = load_csv(path, seed);
  return {std::move(train), std::move(test)};
}

double rse(std::span<const double> predictions, std::span<const double> targets) {
  const double mean = std::accumulate(targets.begin(), targets.end(), 0.0) /
                      static_cast<double>(targets.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    num += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
    den += (targets[i] - mean) * (targets[i] - mean);
  }
  return num / den;
}

Fitness::Fitness(Dataset data, RegisterConfig config)
    : data_(std::move(data)), config_(std::move(config)) {
  data_.validate();
  if (config_.num_features != data_.num_features) {
    throw InputError("register config expects " + std::to_string(config_.num_features) +
                     " features, dataset has " + std::to_string(data_.num_features));
  }
  input_ = init_registers(config_, data_.features, data_.num_cases());
  mean_ = std::accumulate(data_.targets.begin(), data_.targets.end(), 0.0) /
          static_cast<double>(data_.num_cases());
  for (double y : data_.targets) denom_ += (y - mean_) * (y - mean_);
}

std::vector<double> Fitness::predict(std::span<const Instruction> instructions) const {
  const auto exons = effective_instructions(instructions, config_);
  const std::size_t out_reg = config_.output_registers.front();
  const std::size_t gamma = config_.gamma;
  std::vector<double> block(config_.block_size());
  std::vector<double> pred(data_.num_cases());
  const auto in = input_.values();
  for (std::size_t c = 0; c < pred.size(); ++c) {
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(c * block.size()), block.size(),
                block.begin());
    for (const auto& ins : exons) apply_block(ins, block, gamma);
    pred[c] = block[out_reg];
  }
  return pred;
}

double Fitness::rse(std::span<const Instruction> instructions) const {
  const auto pred = predict(instructions);
  double num = 0.0;
  for (std::size_t c = 0; c < pred.size(); ++c) {
    const double e = pred[c] - data_.targets[c];
    num += e * e;
  }
  return num / denom_;
}

} // namespace lgpkit
