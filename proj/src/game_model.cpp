#include "sbg/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sbg/errors.hpp"

namespace sbg {

namespace {

using nlohmann::json;

std::string index_str(std::initializer_list<int> idx) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (int i : idx) {
    if (!first) os << ',';
    os << i + 1;
    first = false;
  }
  os << ')';
  return os.str();
}

void check_stochastic(const GameSpec& s, bool for_p) {
  const int n = for_p ? s.num_k : s.num_l;
  const char* name = for_p ? "trans_p" : "trans_q";
  for (int a = 0; a < s.num_a; ++a) {
    for (int b = 0; b < s.num_b; ++b) {
      for (int x = 0; x < n; ++x) {
        double sum = 0.0;
        for (int y = 0; y < n; ++y) {
          const double v = for_p ? s.p_trans(a, b, x, y) : s.q_trans(a, b, x, y);
          if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError(std::string("stochastic row: negative or non-finite entry in ") + name +
                                  " at " + index_str({a, b, x, y}));
          }
          sum += v;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance) {
          throw ValidationError(std::string("stochastic row: ") + name + " row " + index_str({a, b, x}) +
                                " sums to " + std::to_string(sum));
        }
      }
    }
  }
}

// Reads a nested array of the given shape into `out` (row-major).
void read_tensor(const json& node, std::span<const int> shape, std::vector<double>& out, const std::string& key) {
  if (shape.empty()) {
    if (!node.is_number()) throw ParseError("'" + key + "': expected a number");
    out.push_back(node.get<double>());
    return;
  }
  if (!node.is_array() || node.size() != static_cast<std::size_t>(shape[0])) {
    throw ParseError("'" + key + "': expected an array of length " + std::to_string(shape[0]));
  }
  for (const auto& child : node) read_tensor(child, shape.subspan(1), out, key);
}

json write_tensor(std::span<const double> flat, std::span<const int> shape) {
  if (shape.size() == 1) return json(std::vector<double>(flat.begin(), flat.end()));
  json arr = json::array();
  std::size_t stride = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) stride *= static_cast<std::size_t>(shape[i]);
  for (int i = 0; i < shape[0]; ++i) arr.push_back(write_tensor(flat.subspan(i * stride, stride), shape.subspan(1)));
  return arr;
}

int read_positive(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < 1 || x > 1'000'000) throw ValidationError(std::string("'") + key + "' must be a positive integer");
  return static_cast<int>(x);
}

}  // namespace

GameSpec GameSpec::zeros(int num_k, int num_l, int num_a, int num_b, double lambda, int horizon) {
  GameSpec s;
  s.num_k = num_k;
  s.num_l = num_l;
  s.num_a = num_a;
  s.num_b = num_b;
  s.lambda = lambda;
  s.horizon = horizon;
  s.p0.assign(num_k, 0.0);
  s.q0.assign(num_l, 0.0);
  s.payoff.assign(static_cast<std::size_t>(num_k) * num_l * num_a * num_b, 0.0);
  s.trans_p.assign(static_cast<std::size_t>(num_a) * num_b * num_k * num_k, 0.0);
  s.trans_q.assign(static_cast<std::size_t>(num_a) * num_b * num_l * num_l, 0.0);
  return s;
}

void validate_distribution(std::span<const double> probs, std::size_t size, const std::string& what) {
  if (probs.size() != size) {
    throw ValidationError(what + ": expected length " + std::to_string(size) + ", got " +
                          std::to_string(probs.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw ValidationError(what + ": entry " + std::to_string(i + 1) + " is negative or non-finite");
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw ValidationError(what + ": sums to " + std::to_string(sum) + ", not 1");
  }
}

void validate(const GameSpec& s) {
  if (s.num_k < 1 || s.num_l < 1 || s.num_a < 1 || s.num_b < 1) {
    throw ValidationError("dimensions: state and action sets must be non-empty");
  }
  if (s.horizon < 1) throw ValidationError("horizon: must be a positive integer");
  if (!(s.lambda > 0.0 && s.lambda <= 1.0)) throw ValidationError("lambda: must lie in (0, 1]");

  const std::size_t payoff_size = static_cast<std::size_t>(s.num_k) * s.num_l * s.num_a * s.num_b;
  if (s.payoff.size() != payoff_size) throw ValidationError("payoff: wrong tensor size");
  if (s.trans_p.size() != static_cast<std::size_t>(s.num_a) * s.num_b * s.num_k * s.num_k) {
    throw ValidationError("trans_p: wrong tensor size");
  }
  if (s.trans_q.size() != static_cast<std::size_t>(s.num_a) * s.num_b * s.num_l * s.num_l) {
    throw ValidationError("trans_q: wrong tensor size");
  }
  validate_distribution(s.p0, s.num_k, "p0");
  validate_distribution(s.q0, s.num_l, "q0");

  for (int k = 0; k < s.num_k; ++k)
    for (int l = 0; l < s.num_l; ++l)
      for (int a = 0; a < s.num_a; ++a)
        for (int b = 0; b < s.num_b; ++b) {
          const double v = s.g(k, l, a, b);
          if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("nonneg payoff: entry " + index_str({k, l, a, b}) + " = " + std::to_string(v));
          }
        }
  check_stochastic(s, true);
  check_stochastic(s, false);
}

double g_bar(const GameSpec& spec) {
  if (spec.payoff.empty()) return 0.0;
  return *std::max_element(spec.payoff.begin(), spec.payoff.end());
}

GameSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("game spec must be a JSON object");

  GameSpec s;
  s.num_k = read_positive(doc, "num_k");
  s.num_l = read_positive(doc, "num_l");
  s.num_a = read_positive(doc, "num_a");
  s.num_b = read_positive(doc, "num_b");
  s.horizon = read_positive(doc, "horizon");
  if (!doc.contains("lambda") || !doc.at("lambda").is_number()) throw ParseError("'lambda' must be a number");
  s.lambda = doc.at("lambda").get<double>();

  auto read = [&](const char* key, std::initializer_list<int> shape, std::vector<double>& out) {
    if (!doc.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
    std::vector<int> dims(shape);
    read_tensor(doc.at(key), dims, out, key);
  };
  read("p0", {s.num_k}, s.p0);
  read("q0", {s.num_l}, s.q0);
  read("payoff", {s.num_k, s.num_l, s.num_a, s.num_b}, s.payoff);
  read("trans_p", {s.num_a, s.num_b, s.num_k, s.num_k}, s.trans_p);
  read("trans_q", {s.num_a, s.num_b, s.num_l, s.num_l}, s.trans_q);
  validate(s);
  return s;
}

std::string serialize_spec(const GameSpec& s) {
  json doc;
  doc["num_k"] = s.num_k;
  doc["num_l"] = s.num_l;
  doc["num_a"] = s.num_a;
  doc["num_b"] = s.num_b;
  doc["lambda"] = s.lambda;
  doc["horizon"] = s.horizon;
  doc["p0"] = s.p0;
  doc["q0"] = s.q0;
  const int payoff_shape[] = {s.num_k, s.num_l, s.num_a, s.num_b};
  const int p_shape[] = {s.num_a, s.num_b, s.num_k, s.num_k};
  const int q_shape[] = {s.num_a, s.num_b, s.num_l, s.num_l};
  doc["payoff"] = write_tensor(s.payoff, payoff_shape);
  doc["trans_p"] = write_tensor(s.trans_p, p_shape);
  doc["trans_q"] = write_tensor(s.trans_q, q_shape);
  return doc.dump(2) + "\n";
}

GameSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

void save_spec(const GameSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize_spec(spec);
  if (!out) throw IoError("write failed: " + path.string());
}

GameSpec case_study_spec() {
  GameSpec s = GameSpec::zeros(3, 2, 2, 2, 0.3, 4);
  s.p0 = {0.5, 0.3, 0.2};
  s.q0 = {0.5, 0.5};

  // Channel capacity, rows (k, a), columns (l, b).
  const double g[3][2][2][2] = {
      {{{108.89, 113.78}, {122.30, 154.40}}, {{108.89, 113.78}, {122.30, 154.40}}},
      {{{11.48, 107.38}, {24.89, 107.42}}, {{99.04, 20.15}, {100.26, 60.77}}},
      {{{1.64, 13.75}, {2.85, 13.79}}, {{1.64, 13.75}, {2.85, 13.79}}},
  };
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 2; ++a)
      for (int l = 0; l < 2; ++l)
        for (int b = 0; b < 2; ++b) s.g(k, l, a, b) = g[k][a][l][b];

  const double p[2][2][3][3] = {
      {{{0.8, 0.1, 0.1}, {0.1, 0.4, 0.5}, {0.2, 0.7, 0.1}}, {{0.4, 0.5, 0.1}, {0.2, 0.3, 0.5}, {0.4, 0.4, 0.2}}},
      {{{0.2, 0.2, 0.6}, {0.5, 0.2, 0.3}, {0.2, 0.2, 0.6}}, {{0.3, 0.3, 0.4}, {0.1, 0.8, 0.1}, {0.1, 0.1, 0.8}}},
  };
  const double q[2][2][2][2] = {
      {{{0.8, 0.2}, {0.5, 0.5}}, {{0.2, 0.8}, {0.1, 0.9}}},
      {{{0.6, 0.4}, {0.5, 0.5}}, {{0.7, 0.3}, {0.1, 0.9}}},
  };
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      for (int k = 0; k < 3; ++k)
        for (int k2 = 0; k2 < 3; ++k2) s.p_trans(a, b, k, k2) = p[a][b][k][k2];
      for (int l = 0; l < 2; ++l)
        for (int l2 = 0; l2 < 2; ++l2) s.q_trans(a, b, l, l2) = q[a][b][l][l2];
    }
  return s;
}

}  // namespace sbg
