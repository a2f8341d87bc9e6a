#include "cmklr/data_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "cmklr/error.hpp"

namespace cmklr {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ifstream open_input(const fs::path& path) {
  if (!fs::exists(path)) throw Error("file not found: '" + path.string() + "'");
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

double parse_double(std::string_view cell, const fs::path& path, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error(path.string() + ":" + std::to_string(line) + ": non-numeric cell '" +
                std::string(cell) + "'");
  if (!std::isfinite(value))
    throw Error(path.string() + ":" + std::to_string(line) + ": non-finite value '" +
                std::string(cell) + "'");
  return value;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

json params_to_json(KernelKind kind, const KernelParams& p) {
  switch (kind) {
    case KernelKind::gaussian:
      return {{"delta", p.delta}, {"d0", p.d0}};
    case KernelKind::polynomial:
      return {{"a", p.a}, {"b", p.b}};
    case KernelKind::cosine:
      break;
  }
  return json::object();
}

KernelParams params_from_json(const json& j) {
  KernelParams p;
  if (!j.is_object()) return p;
  p.delta = j.value("delta", 0.0);
  p.d0 = j.value("d0", 0.0);
  p.a = j.value("a", 0.0);
  p.b = j.value("b", 0);
  return p;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    Eigen::Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view cell =
          text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                             : comma - start);
      values.push_back(parse_double(cell, path, lineno));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) cols = count;
    if (count != cols)
      throw Error(path.string() + ":" + std::to_string(lineno) + ": ragged row with " +
                  std::to_string(count) + " cells, expected " + std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw Error("'" + path.string() + "' contains no data");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, cols);
}

void write_csv_matrix(const Eigen::MatrixXd& M, const fs::path& path) {
  std::ofstream out = open_output(path);
  std::string line;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) line += ',';
      line += format_double(M(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Eigen::MatrixXd load_feature_matrix(const fs::path& path) {
  Eigen::MatrixXd X = read_csv_matrix(path);
  if (X.rows() < 2)
    throw Error("'" + path.string() + "' has " + std::to_string(X.rows()) +
                " sample(s); at least 2 are required");
  return X;
}

LabelVector load_labels(const fs::path& path) {
  std::ifstream in = open_input(path);
  LabelVector labels;
  std::unordered_map<long long, int> codes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view token = trim(line);
    if (token.empty()) continue;
    if (token.front() == '+') token.remove_prefix(1);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw Error(path.string() + ":" + std::to_string(lineno) + ": not an integer label '" +
                  std::string(token) + "'");
    auto [it, inserted] = codes.try_emplace(value, labels.classes());
    if (inserted) labels.original.push_back(value);
    labels.codes.push_back(it->second);
  }
  if (labels.codes.empty()) throw Error("label file '" + path.string() + "' is empty");
  return labels;
}

LoadedBank load_kernel_bank(const fs::path& manifest_path, double symmetry_tol) {
  std::ifstream in = open_input(manifest_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error("malformed manifest '" + manifest_path.string() + "': " + e.what());
  }
  if (!doc.contains("kernels") || !doc["kernels"].is_array() || doc["kernels"].empty())
    throw Error("manifest '" + manifest_path.string() + "' lists no kernels");

  LoadedBank bank;
  bank.manifest.n = doc.value("n", Eigen::Index{0});
  const fs::path base = manifest_path.parent_path();
  for (const auto& entry : doc["kernels"]) {
    ManifestEntry e;
    e.file = entry.at("file").get<std::string>();
    e.kind = parse_kernel_kind(entry.value("kind", std::string("gaussian")));
    e.params = params_from_json(entry.value("params", json::object()));

    const fs::path file = fs::path(e.file).is_absolute() ? fs::path(e.file) : base / e.file;
    Eigen::MatrixXd K = read_csv_matrix(file);
    if (K.rows() != K.cols())
      throw Error("kernel '" + file.string() + "' is " + std::to_string(K.rows()) + "x" +
                  std::to_string(K.cols()) + ", not square");
    if (bank.manifest.n == 0) bank.manifest.n = K.rows();
    if (K.rows() != bank.manifest.n)
      throw Error("kernel '" + file.string() + "' has dimension " + std::to_string(K.rows()) +
                  ", expected " + std::to_string(bank.manifest.n));
    const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
    if (asym > symmetry_tol)
      throw Error("kernel '" + file.string() + "' is asymmetric (max |K - K'| = " +
                  std::to_string(asym) + ")");
    K = 0.5 * (K + K.transpose()).eval();

    bank.kernels.push_back({std::move(K), e.kind, e.params});
    bank.manifest.entries.push_back(std::move(e));
  }
  return bank;
}

KernelBankManifest save_kernel_bank(const KernelBank& bank, const fs::path& manifest_path) {
  if (bank.empty()) throw Error("refusing to save an empty kernel bank");
  KernelBankManifest manifest;
  manifest.n = bank.front().size();
  const fs::path base = manifest_path.parent_path();
  if (!base.empty()) fs::create_directories(base);
  const std::string stem = manifest_path.stem().string();

  json kernels = json::array();
  for (std::size_t r = 0; r < bank.size(); ++r) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_kernel_%02zu.csv", stem.c_str(), r + 1);
    write_csv_matrix(bank[r].values, base / name);
    ManifestEntry e{name, bank[r].kind, bank[r].params};
    kernels.push_back({{"file", e.file},
                       {"kind", to_string(e.kind)},
                       {"params", params_to_json(e.kind, e.params)}});
    manifest.entries.push_back(std::move(e));
  }
  std::ofstream out = open_output(manifest_path);
  out << json{{"n", manifest.n}, {"kernels", kernels}}.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + manifest_path.string() + "'");
  return manifest;
}

void save_result(const ResultDocument& result, const fs::path& path) {
  json doc{{"method", result.method},
           {"assignments", result.assignments},
           {"weights", result.weights},
           {"objective_trace", result.objective_trace},
           {"iterations", result.iterations},
           {"tau", result.tau},
           {"num_clusters", result.num_clusters}};
  if (result.kernel_index) doc["kernel_index"] = *result.kernel_index;
  if (result.metrics)
    doc["metrics"] = {{"acc", result.metrics->acc},
                      {"nmi", result.metrics->nmi},
                      {"purity", result.metrics->purity}};
  std::ofstream out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

ResultDocument load_result(const fs::path& path) {
  std::ifstream in = open_input(path);
  try {
    json doc;
    in >> doc;
    ResultDocument r;
    r.method = doc.value("method", std::string("cmklr"));
    r.assignments = doc.at("assignments").get<std::vector<int>>();
    r.weights = doc.value("weights", std::vector<double>{});
    r.objective_trace = doc.value("objective_trace", std::vector<double>{});
    r.iterations = doc.value("iterations", 0);
    r.tau = doc.value("tau", 0);
    r.num_clusters = doc.value("num_clusters", 0);
    if (doc.contains("kernel_index")) r.kernel_index = doc["kernel_index"].get<int>();
    if (doc.contains("metrics")) {
      const auto& m = doc["metrics"];
      r.metrics = Metrics{m.at("acc").get<double>(), m.at("nmi").get<double>(),
                          m.at("purity").get<double>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw Error("malformed result document '" + path.string() + "': " + e.what());
  }
}

void write_trace_csv(const std::vector<double>& trace, const fs::path& path) {
  std::ofstream out = open_output(path);
  out << "iteration,objective\n";
  for (std::size_t t = 0; t < trace.size(); ++t)
    out << (t + 1) << ',' << format_double(trace[t]) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<int> load_assignments(const fs::path& path) {
  if (path.extension() == ".json") return load_result(path).assignments;
  std::ifstream in = open_input(path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view token = trim(line);
    if (token.empty()) continue;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw Error(path.string() + ":" + std::to_string(lineno) + ": not an integer label '" +
                  std::string(token) + "'");
    labels.push_back(value);
  }
  if (labels.empty()) throw Error("assignment file '" + path.string() + "' is empty");
  return labels;
}

}  // namespace cmklr
