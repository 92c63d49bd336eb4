#include "setpredict/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "setpredict/rng.hpp"

namespace setpredict {

void SynthConfig::validate() const {
  if (feature_dim < 1) throw std::invalid_argument("SynthConfig: feature_dim >= 1 required");
  if (num_labels < 1) throw std::invalid_argument("SynthConfig: num_labels >= 1 required");
  if (num_samples < 1) throw std::invalid_argument("SynthConfig: num_samples >= 1 required");
  if (max_cardinality < 0 || max_cardinality > num_labels) {
    throw std::invalid_argument(
        "SynthConfig: max_cardinality must satisfy 0 <= max_cardinality <= num_labels");
  }
  if (noise_scale < 0.0) throw std::invalid_argument("SynthConfig: noise_scale >= 0 required");
}

std::vector<double> SynthConfig::cardinality_pmf() const {
  // Skewed toward one to three labels; geometric tail beyond three.
  std::vector<double> weights(static_cast<std::size_t>(max_cardinality) + 1);
  const double base[] = {0.05, 0.30, 0.30, 0.20};
  for (int m = 0; m <= max_cardinality; ++m) {
    weights[static_cast<std::size_t>(m)] =
        m < 4 ? base[m] : base[3] * std::pow(0.4, m - 3);
  }
  double sum = 0.0;
  for (double w : weights) sum += w;
  for (double& w : weights) w /= sum;
  return weights;
}

namespace {

int sample_categorical(const std::vector<double>& pmf, Rng& rng) {
  const double x = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    cum += pmf[i];
    if (x < cum) return static_cast<int>(i);
  }
  return static_cast<int>(pmf.size()) - 1;
}

std::vector<int> sample_distinct_labels(int m, int num_labels, Rng& rng) {
  // Partial Fisher-Yates over 0..M-1.
  std::vector<int> pool(static_cast<std::size_t>(num_labels));
  for (int i = 0; i < num_labels; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_int(
                           static_cast<std::uint64_t>(num_labels - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  return pool;
}

}  // namespace

Dataset generate(const SynthConfig& cfg) {
  cfg.validate();
  const Rng root(cfg.seed);

  Rng proto_rng = root.split("prototypes");
  std::vector<std::vector<double>> prototypes(static_cast<std::size_t>(cfg.num_labels));
  for (auto& p : prototypes) {
    p.resize(static_cast<std::size_t>(cfg.feature_dim));
    for (double& v : p) v = cfg.prototype_scale * proto_rng.normal();
  }

  const std::vector<double> pmf = cfg.cardinality_pmf();
  Rng sample_rng = root.split("samples");

  Dataset dataset;
  dataset.feature_dim = cfg.feature_dim;
  dataset.num_labels = cfg.num_labels;
  dataset.samples.reserve(static_cast<std::size_t>(cfg.num_samples));
  for (int i = 0; i < cfg.num_samples; ++i) {
    const int m = sample_categorical(pmf, sample_rng);

    Sample sample;
    sample.labels = LabelSet(sample_distinct_labels(m, cfg.num_labels, sample_rng));
    sample.features.assign(static_cast<std::size_t>(cfg.feature_dim), 0.0);
    // Summed in sorted label order so the features are a function of the
    // label set, not of the draw order.
    for (int label : sample.labels.indices()) {
      const auto& p = prototypes[static_cast<std::size_t>(label)];
      for (std::size_t k = 0; k < sample.features.size(); ++k) sample.features[k] += p[k];
    }
    for (double& v : sample.features) v += cfg.noise_scale * sample_rng.normal();
    dataset.samples.push_back(std::move(sample));
  }
  return dataset;
}

CardinalityStats cardinality_stats(const Dataset& dataset) {
  if (dataset.samples.empty()) {
    throw std::invalid_argument("cardinality_stats: empty dataset");
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(dataset.num_labels) + 1, 0);
  for (const auto& sample : dataset.samples) {
    counts[static_cast<std::size_t>(sample.labels.cardinality())]++;
  }
  return CardinalityStats(std::move(counts), dataset.samples.size());
}

std::vector<Dataset> split(const Dataset& dataset, const std::vector<double>& fractions,
                           std::uint64_t seed) {
  if (fractions.empty()) throw std::invalid_argument("split: no fractions given");
  double sum = 0.0;
  for (double f : fractions) {
    if (f <= 0.0) throw std::invalid_argument("split: fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split: fractions must sum to 1");

  const std::size_t n = dataset.samples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng(seed).split("split");
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.uniform_int(i);
    std::swap(order[i - 1], order[j]);
  }

  std::vector<Dataset> parts;
  parts.reserve(fractions.size());
  double cum = 0.0;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < fractions.size(); ++p) {
    cum += fractions[p];
    const std::size_t end = p + 1 == fractions.size()
                                ? n
                                : static_cast<std::size_t>(std::llround(cum * static_cast<double>(n)));
    Dataset part;
    part.feature_dim = dataset.feature_dim;
    part.num_labels = dataset.num_labels;
    for (std::size_t i = begin; i < end; ++i) {
      part.samples.push_back(dataset.samples[order[i]]);
    }
    parts.push_back(std::move(part));
    begin = end;
  }
  return parts;
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_dataset: cannot open " + path);
  nlohmann::ordered_json header;
  header["l"] = dataset.feature_dim;
  header["M"] = dataset.num_labels;
  out << header.dump() << '\n';
  for (const auto& sample : dataset.samples) {
    nlohmann::ordered_json line;
    line["x"] = sample.features;
    line["labels"] = sample.labels.indices();
    out << line.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write_dataset: write failed for " + path);
}

namespace {

[[noreturn]] void read_fail(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_dataset: cannot open " + path);

  std::string line;
  std::size_t line_no = 0;
  Dataset dataset;

  if (!std::getline(in, line)) read_fail(path, 1, "missing header line");
  ++line_no;
  try {
    const auto header = nlohmann::json::parse(line);
    dataset.feature_dim = header.at("l").get<int>();
    dataset.num_labels = header.at("M").get<int>();
  } catch (const nlohmann::json::exception& e) {
    read_fail(path, line_no, std::string("bad header: ") + e.what());
  }
  if (dataset.feature_dim < 1 || dataset.num_labels < 1) {
    read_fail(path, line_no, "header dimensions must be >= 1");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Sample sample;
    try {
      const auto obj = nlohmann::json::parse(line);
      sample.features = obj.at("x").get<std::vector<double>>();
      sample.labels = LabelSet(obj.at("labels").get<std::vector<int>>());
    } catch (const std::exception& e) {
      read_fail(path, line_no, std::string("bad sample: ") + e.what());
    }
    if (static_cast<int>(sample.features.size()) != dataset.feature_dim) {
      read_fail(path, line_no, "feature dimension disagrees with header");
    }
    if (sample.labels.max_index() >= dataset.num_labels) {
      read_fail(path, line_no, "label index out of range for header M");
    }
    dataset.samples.push_back(std::move(sample));
  }
  return dataset;
}

}  // namespace setpredict
