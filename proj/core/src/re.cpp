#include "rfdeauth/re.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

namespace {

double mean_of(std::span<const double> w) {
  return std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
}

}  // namespace

double window_variance(std::span<const double> w) {
  if (w.empty()) throw ValidationError("empty feature window");
  const double mu = mean_of(w);
  double ss = 0.0;
  for (double x : w) ss += (x - mu) * (x - mu);
  return ss / static_cast<double>(w.size());
}

double window_entropy(std::span<const double> w, double bin_width) {
  if (w.empty()) throw ValidationError("empty feature window");
  const double lo = *std::min_element(w.begin(), w.end());
  std::map<long long, std::size_t> bins;
  for (double x : w) ++bins[static_cast<long long>(std::floor((x - lo) / bin_width))];
  const auto n = static_cast<double>(w.size());
  double h = 0.0;
  for (const auto& [bin, count] : bins) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

double window_autocorrelation(std::span<const double> w, int lag) {
  const auto n = static_cast<std::ptrdiff_t>(w.size());
  if (lag < 1 || lag >= n) throw ValidationError("autocorrelation lag must lie in [1, n)");
  const double var = window_variance(w);
  if (var == 0.0) return 0.0;
  const double mu = mean_of(w);
  double acc = 0.0;
  for (std::ptrdiff_t j = 0; j + lag < n; ++j) acc += (w[j] - mu) * (w[j + lag] - mu);
  return std::clamp(acc / (static_cast<double>(n - lag) * var), -1.0, 1.0);
}

Sample extract_features(const RssiTrace& trace, std::span<const std::size_t> streams, Tick t1,
                        const Config& config) {
  const Tick n = config.ticks(config.t_delta);
  if (t1 < 0 || t1 + n > trace.length()) throw ValidationError("feature window lies outside the trace");
  if (n <= config.ac_lag) throw ValidationError("feature window shorter than the autocorrelation lag");
  Sample s;
  s.t1 = t1;
  s.features.reserve(streams.size() * kFeaturesPerStream);
  for (auto i : streams) {
    const auto w = trace.stream(i).subspan(static_cast<std::size_t>(t1), static_cast<std::size_t>(n));
    s.features.push_back(window_variance(w));
    s.features.push_back(window_entropy(w, config.entropy_bin_width));
    s.features.push_back(window_autocorrelation(w, config.ac_lag));
  }
  return s;
}

Sample extract_features(const RssiTrace& trace, Tick t1, const Config& config) {
  const auto streams = all_streams(trace);
  return extract_features(trace, streams, t1, config);
}

std::vector<std::string> feature_names(const RssiTrace& trace, std::span<const std::size_t> streams) {
  std::vector<std::string> names;
  for (auto i : streams) {
    const auto& id = trace.streams()[i];
    const auto stem = "d" + std::to_string(id.tx) + "-d" + std::to_string(id.rx) + "-";
    names.push_back(stem + "var");
    names.push_back(stem + "ent");
    names.push_back(stem + "ac");
  }
  return names;
}

std::optional<Label> label_from_idle(const std::set<int>& idle) {
  if (idle.empty()) return Label::entry();
  if (idle.size() == 1) return Label{*idle.begin()};
  return std::nullopt;
}

std::optional<Label> auto_label(const VariationWindow& window, const InputTrace& inputs,
                                std::span<const int> workstations, const Config& config) {
  const Tick n = config.ticks(config.t_delta);
  return label_from_idle(idle_set(inputs, workstations, window.t1 + n, n));
}

std::optional<Label> auto_label(const VariationWindow& window, const IdleTracker& tracker, const Config& config) {
  const Tick n = config.ticks(config.t_delta);
  return label_from_idle(tracker.idle_set(window.t1 + n, n));
}

// ---------------------------------------------------------------------------
// Classifier

namespace {

std::vector<double> standardize(const ClassifierModel& m, std::span<const double> x) {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - m.mean[j]) / m.scale[j];
  return z;
}

}  // namespace

ClassifierModel train(std::span<const Sample> samples, const TrainOptions& options) {
  if (samples.empty()) throw ValidationError("no training samples");
  const std::size_t dim = samples.front().features.size();
  if (dim == 0) throw ValidationError("training samples have no features");
  std::map<Label, std::size_t> per_class;
  for (const auto& s : samples) {
    if (!s.label) throw ValidationError("training sample without label");
    if (s.features.size() != dim) throw ValidationError("training samples have differing feature lengths");
    ++per_class[*s.label];
  }
  if (per_class.size() < 2) throw ValidationError("training needs at least two classes");
  for (const auto& [label, count] : per_class) {
    if (count < 2) throw ValidationError("class " + label.str() + " has fewer than two samples");
  }

  ClassifierModel m;
  for (const auto& [label, count] : per_class) m.classes.push_back(label);
  const auto n = static_cast<double>(samples.size());
  m.mean.assign(dim, 0.0);
  m.scale.assign(dim, 0.0);
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < dim; ++j) m.mean[j] += s.features[j];
  }
  for (auto& v : m.mean) v /= n;
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < dim; ++j) m.scale[j] += (s.features[j] - m.mean[j]) * (s.features[j] - m.mean[j]);
  }
  bool informative = false;
  for (auto& v : m.scale) {
    v = std::sqrt(v / n);
    if (v > 0.0) {
      informative = true;
    } else {
      v = 1.0;
    }
  }
  if (!informative) throw ValidationError("degenerate training set: every feature is constant");

  // Standardized design matrix with a constant 1 appended for the bias.
  const std::size_t aug = dim + 1;
  std::vector<double> x(samples.size() * aug);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto z = standardize(m, samples[i].features);
    std::copy(z.begin(), z.end(), x.begin() + static_cast<std::ptrdiff_t>(i * aug));
    x[i * aug + dim] = 1.0;
  }

  const double lambda = options.lambda;
  const double radius = 1.0 / std::sqrt(lambda);
  const int average_from = options.epochs / 2 + 1;
  std::vector<double> w(aug), avg(aug), grad(aug);
  for (const auto& cls : m.classes) {
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(avg.begin(), avg.end(), 0.0);
    int averaged = 0;
    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const double* xi = x.data() + i * aug;
        const double y = *samples[i].label == cls ? 1.0 : -1.0;
        const double margin = y * std::inner_product(xi, xi + aug, w.begin(), 0.0);
        if (margin < 1.0) {
          for (std::size_t j = 0; j < aug; ++j) grad[j] += y * xi[j];
        }
      }
      const double eta = 1.0 / (lambda * epoch);
      double norm2 = 0.0;
      for (std::size_t j = 0; j < aug; ++j) {
        w[j] = (1.0 - eta * lambda) * w[j] + eta * grad[j] / n;
        norm2 += w[j] * w[j];
      }
      if (norm2 > radius * radius) {
        const double shrink = radius / std::sqrt(norm2);
        for (auto& v : w) v *= shrink;
      }
      if (epoch >= average_from) {
        for (std::size_t j = 0; j < aug; ++j) avg[j] += w[j];
        ++averaged;
      }
    }
    for (auto& v : avg) v /= averaged;
    m.weights.emplace_back(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(dim));
    m.bias.push_back(avg[dim]);
  }
  m.training_accuracy = accuracy(m, samples);
  return m;
}

std::vector<double> decision_scores(const ClassifierModel& model, std::span<const double> features) {
  if (features.size() != model.dimension()) {
    throw ValidationError("feature dimension " + std::to_string(features.size()) + " does not match model dimension " +
                          std::to_string(model.dimension()));
  }
  const auto z = standardize(model, features);
  std::vector<double> scores;
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    scores.push_back(std::inner_product(z.begin(), z.end(), model.weights[c].begin(), 0.0) + model.bias[c]);
  }
  return scores;
}

Label classify(const ClassifierModel& model, std::span<const double> features) {
  const auto scores = decision_scores(model, features);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return model.classes[best];
}

double accuracy(const ClassifierModel& model, std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (s.label && classify(model, s.features) == *s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

// ---------------------------------------------------------------------------
// Model file: `format = rfdeauth-model/1` followed by flat key = value lines.

namespace {

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> doubles(const std::string& text, std::size_t expected, const std::string& what) {
  const auto parts = split_list(text);
  if (parts.size() != expected) {
    throw ValidationError(what + ": expected " + std::to_string(expected) + " values, got " +
                          std::to_string(parts.size()));
  }
  std::vector<double> out;
  for (const auto& p : parts) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc{} || ptr != p.data() + p.size() || !std::isfinite(v)) {
      throw ValidationError(what + ": bad number '" + p + "'");
    }
    out.push_back(v);
  }
  return out;
}

constexpr const char* kModelFormat = "rfdeauth-model/1";

}  // namespace

void save_model(std::ostream& out, const ClassifierModel& m) {
  out << "format = " << kModelFormat << '\n';
  out << "dimension = " << m.dimension() << '\n';
  out << "classes = ";
  for (std::size_t c = 0; c < m.classes.size(); ++c) out << (c ? ", " : "") << m.classes[c].str();
  out << '\n';
  out << "training_accuracy = " << format_double(m.training_accuracy) << '\n';
  out << "mean = " << join(m.mean) << '\n';
  out << "scale = " << join(m.scale) << '\n';
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    out << "bias." << m.classes[c].str() << " = " << format_double(m.bias[c]) << '\n';
    out << "weights." << m.classes[c].str() << " = " << join(m.weights[c]) << '\n';
  }
}

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  save_model(out, model);
}

ClassifierModel load_model(std::istream& in, const std::string& source) {
  std::stringstream buf;
  buf << in.rdbuf();
  TextDocument doc;
  try {
    doc = parse_structured_text(buf.str(), source);
  } catch (const InputError& e) {
    throw ValidationError(std::string("corrupt model: ") + e.what());
  }
  const auto bad = [&](const std::string& why) { return ValidationError(source + ": corrupt model: " + why); };
  if (doc.sections.size() != 1) throw bad("unexpected section");
  const auto& root = doc.root();
  const auto get = [&](const std::string& key) -> const std::string& {
    const auto* e = root.find(key);
    if (!e) throw bad("missing key '" + key + "'");
    return e->value;
  };
  if (get("format") != kModelFormat) throw bad("unsupported format '" + get("format") + "'");

  ClassifierModel m;
  try {
    long long dim = 0;
    const auto& dtext = get("dimension");
    auto [ptr, ec] = std::from_chars(dtext.data(), dtext.data() + dtext.size(), dim);
    if (ec != std::errc{} || ptr != dtext.data() + dtext.size() || dim < 1) throw bad("bad dimension");
    const auto d = static_cast<std::size_t>(dim);
    for (const auto& c : split_list(get("classes"))) m.classes.push_back(parse_label(c));
    if (m.classes.size() < 2 || !std::is_sorted(m.classes.begin(), m.classes.end()) ||
        std::adjacent_find(m.classes.begin(), m.classes.end()) != m.classes.end()) {
      throw bad("classes must be at least two ascending distinct labels");
    }
    m.training_accuracy = doubles(get("training_accuracy"), 1, "training_accuracy").front();
    m.mean = doubles(get("mean"), d, "mean");
    m.scale = doubles(get("scale"), d, "scale");
    for (double s : m.scale) {
      if (!(s > 0.0)) throw bad("non-positive scale");
    }
    for (const auto& c : m.classes) {
      m.bias.push_back(doubles(get("bias." + c.str()), 1, "bias").front());
      m.weights.push_back(doubles(get("weights." + c.str()), d, "weights." + c.str()));
    }
    const std::size_t expected_keys = 6 + 2 * m.classes.size();
    if (root.entries.size() != expected_keys) throw bad("unexpected or duplicate keys");
  } catch (const InputError& e) {
    throw bad(e.what());
  }
  return m;
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model '" + path.string() + "'");
  return load_model(in, path.string());
}

void write_samples(std::ostream& out, std::span<const Sample> samples) {
  const std::size_t dim = samples.empty() ? 0 : samples.front().features.size();
  out << "label";
  for (std::size_t j = 0; j < dim; ++j) out << ",f_" << j;
  out << '\n';
  for (const auto& s : samples) {
    if (s.features.size() != dim) throw ValidationError("samples have differing feature lengths");
    out << (s.label ? s.label->str() : "");
    for (double v : s.features) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<Sample> read_samples(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ":1: missing header");
  const auto header = split_list(line);
  if (header.empty() || header.front() != "label") throw InputError(source + ":1: expected header 'label,f_0,...'");
  const std::size_t dim = header.size() - 1;
  std::vector<Sample> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_list(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (f.size() != dim + 1) throw InputError(where + ": expected " + std::to_string(dim + 1) + " fields");
    Sample s;
    try {
      if (!f[0].empty()) s.label = parse_label(f[0]);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    for (std::size_t j = 1; j < f.size(); ++j) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f[j].data(), f[j].data() + f[j].size(), v);
      if (ec != std::errc{} || ptr != f[j].data() + f[j].size()) {
        throw InputError(where + ": non-numeric feature '" + f[j] + "'");
      }
      s.features.push_back(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace rfdeauth
