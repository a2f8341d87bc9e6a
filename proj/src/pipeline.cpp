#include "cmklr/pipeline.hpp"

#include <cstdio>

#include "cmklr/error.hpp"

namespace cmklr {

std::string to_string(Method method) { return method == Method::cklr ? "cklr" : "cmklr"; }

Method parse_method(const std::string& text) {
  if (text == "cmklr") return Method::cmklr;
  if (text == "cklr") return Method::cklr;
  throw Error("unknown method '" + text + "' (expected cmklr or cklr)");
}

void RunConfig::validate() const {
  if (tau < 1) throw Error("--tau must be at least 1");
  if (clusters < 2) throw Error("--clusters must be at least 2");
  if (max_iter < 1) throw Error("--max-iter must be at least 1");
  if (!(tol > 0.0)) throw Error("--tol must be positive");
  if (kmeans_restarts < 1) throw Error("--kmeans-restarts must be at least 1");
}

KernelBank build_bank(const std::vector<Eigen::MatrixXd>& views, bool zscore) {
  if (views.empty()) throw Error("no feature input given");
  std::vector<Eigen::MatrixXd> prepared;
  prepared.reserve(views.size());
  for (const auto& X : views) prepared.push_back(zscore ? cmklr::zscore(X) : X);
  if (prepared.size() == 1) return build_single_view_bank(prepared.front());
  return build_multi_view_bank(prepared);
}

ClusterOutcome cluster(const KernelBank& bank, const RunConfig& config, Method method,
                       std::optional<int> kernel_index) {
  config.validate();
  if (bank.empty()) throw Error("kernel bank is empty");

  ClusterOutcome out;
  if (method == Method::cklr) {
    const int r = kernel_index.value_or(1);
    if (r < 1 || r > static_cast<int>(bank.size()))
      throw Error("--kernel-index " + std::to_string(r) + " out of range [1, " +
                  std::to_string(bank.size()) + "]");
    out.solver = run_cklr(bank[static_cast<std::size_t>(r - 1)], config.tau, config.clusters);
  } else {
    out.solver = run_cmklr(bank, config.tau, config.clusters,
                           SolverOptions{config.max_iter, config.tol});
  }

  KMeansOptions km;
  km.restarts = config.kmeans_restarts;
  km.seed = config.seed;
  km.init = config.kmeans_init;
  out.assignment = kmeans(row_normalize(out.solver.embedding), config.clusters, km);
  return out;
}

ResultDocument make_result_document(const ClusterOutcome& outcome, Method method,
                                    std::optional<int> kernel_index) {
  ResultDocument doc;
  doc.method = to_string(method);
  doc.assignments = outcome.assignment.labels;
  const auto& w = outcome.solver.weights;
  doc.weights.assign(w.data(), w.data() + w.size());
  doc.objective_trace = outcome.solver.objective_trace;
  doc.iterations = outcome.solver.iterations;
  doc.tau = outcome.solver.tau;
  doc.num_clusters = outcome.solver.num_clusters;
  if (method == Method::cklr) doc.kernel_index = kernel_index.value_or(1);
  return doc;
}

GridReport grid_search(const KernelBank& bank, std::span<const int> truth,
                       const std::vector<int>& taus, const RunConfig& config) {
  if (taus.empty()) throw Error("empty tau grid");
  if (!bank.empty() && static_cast<std::size_t>(bank.front().size()) != truth.size())
    throw Error("label count " + std::to_string(truth.size()) + " does not match " +
                std::to_string(bank.front().size()) + " samples");

  GridReport report;
  for (int tau : taus) {
    RunConfig cell = config;
    cell.tau = tau;
    const ClusterOutcome outcome = cluster(bank, cell, Method::cmklr);
    report.rows.push_back({tau, evaluate(outcome.assignment.labels, truth)});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const Metrics& m = report.rows[i].metrics;
    if (m.acc > report.rows[report.best_acc].metrics.acc) report.best_acc = i;
    if (m.nmi > report.rows[report.best_nmi].metrics.nmi) report.best_nmi = i;
    if (m.purity > report.rows[report.best_purity].metrics.purity) report.best_purity = i;
  }
  return report;
}

std::string format_grid(const GridReport& report) {
  std::string out = "tau,acc,nmi,purity\n";
  char line[128];
  for (const GridRow& row : report.rows) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f\n", row.tau, row.metrics.acc,
                  row.metrics.nmi, row.metrics.purity);
    out += line;
  }
  auto best = [&](const char* name, std::size_t i, double value) {
    std::snprintf(line, sizeof line, "best_%s,tau=%d,%.6f\n", name, report.rows[i].tau, value);
    out += line;
  };
  if (!report.rows.empty()) {
    best("acc", report.best_acc, report.rows[report.best_acc].metrics.acc);
    best("nmi", report.best_nmi, report.rows[report.best_nmi].metrics.nmi);
    best("purity", report.best_purity, report.rows[report.best_purity].metrics.purity);
  }
  return out;
}

std::string format_metrics(const Metrics& m) {
  char line[128];
  std::snprintf(line, sizeof line, "{\"acc\": %.6f, \"nmi\": %.6f, \"purity\": %.6f}", m.acc,
                m.nmi, m.purity);
  return line;
}

}  // namespace cmklr
