#include "tradelab/econ.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "tradelab/csv.hpp"
#include "tradelab/errors.hpp"
#include "tradelab/util.hpp"

namespace tradelab::econ {

Outcome outcome_from_name(const std::string& name) {
  if (name == "imports") return Outcome::log_imports;
  if (name == "exports") return Outcome::log_exports;
  if (name == "survival") return Outcome::survival;
  throw ConfigError("unknown outcome: " + name);
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::log_imports: return "imports";
    case Outcome::log_exports: return "exports";
    case Outcome::survival: return "survival";
  }
  return "exports";
}

namespace {

// (year, sector) mean-employment split; labels (firm, year) pairs.
std::map<std::pair<std::string, int>, bool> size_labels(const std::string& employment_csv) {
  if (employment_csv.empty())
    throw MissingLookup("size partition requires an employment file");
  const csv::Table table = csv::read_csv(employment_csv);
  const int c_firm = table.require("firm_id");
  const int c_year = table.require("year");
  const int c_sector = table.require("sector");
  const int c_emp = table.require("employment");

  struct CellAgg {
    double sum = 0.0;
    long n = 0;
  };
  std::map<std::pair<std::string, int>, CellAgg> cell;  // (sector, year)
  struct Row {
    std::string firm;
    int year;
    std::string sector;
    double employment;
  };
  std::vector<Row> rows;
  for (const auto& r : table.rows) {
    Row row{r[c_firm], static_cast<int>(csv::parse_int(r[c_year])), r[c_sector],
            csv::parse_double(r[c_emp])};
    auto& agg = cell[{row.sector, row.year}];
    agg.sum += row.employment;
    agg.n += 1;
    rows.push_back(std::move(row));
  }
  std::map<std::pair<std::string, int>, bool> above;
  for (const auto& row : rows) {
    const auto& agg = cell.at({row.sector, row.year});
    above[{row.firm, row.year}] = row.employment >= agg.sum / static_cast<double>(agg.n);
  }
  return above;
}

}  // namespace

PartitionResult partition(const records::Corpus& corpus, const PartitionRule& rule) {
  if (!rule.scheme.empty() != !rule.cls.empty())
    throw ConfigError("classification partition needs both scheme and class");
  if (!rule.size_side.empty() && rule.size_side != "above" && rule.size_side != "below")
    throw ConfigError("size partition side must be above or below");

  std::map<std::pair<std::string, int>, bool> above;
  if (!rule.size_side.empty()) above = size_labels(rule.employment_csv);

  PartitionResult out;
  out.corpus.country_income = corpus.country_income;
  out.corpus.classifications = corpus.classifications;

  auto keep = [&](const records::TradeRecord& rec) -> int {
    // 1 keep, 0 drop, -1 drop-and-count-unknown-product
    if (!rule.scheme.empty()) {
      const auto it = corpus.classifications.find({rule.scheme, rec.product});
      if (it == corpus.classifications.end()) return -1;
      if (it->second != rule.cls) return 0;
    }
    if (!rule.income_group.empty()) {
      const auto it = corpus.country_income.find(rec.country);
      if (it == corpus.country_income.end() || it->second != rule.income_group) return 0;
    }
    if (!rule.size_side.empty()) {
      const auto it = above.find({rec.firm_id, rec.year});
      if (it == above.end()) return 0;
      if (it->second != (rule.size_side == "above")) return 0;
    }
    return 1;
  };

  for (const auto* list : {&corpus.imports, &corpus.exports}) {
    auto& dest = list == &corpus.imports ? out.corpus.imports : out.corpus.exports;
    for (const auto& rec : *list) {
      const int verdict = keep(rec);
      if (verdict == 1) dest.push_back(rec);
      if (verdict == -1) ++out.unknown_products;
    }
  }
  return out;
}

namespace {

struct CellSeries {
  std::string firm;
  std::string country;
  std::map<int, double> quantity;  // year -> total quantity
};

template <typename T>
int dense_label(std::map<T, int>& table, const T& key) {
  const auto [it, inserted] = table.try_emplace(key, static_cast<int>(table.size()));
  return it->second;
}

}  // namespace

Panel build_panel(const records::Corpus& corpus,
                  const std::vector<shocks::FirmShock>& shock_table,
                  const RegressionSpec& spec) {
  if (spec.horizon < 0) throw SpecError("horizon must be nonnegative");
  if (spec.outcome_lags < 0 || spec.shock_lags < 0)
    throw SpecError("lag counts must be nonnegative");
  if (spec.outcome == Outcome::survival && spec.differenced)
    throw SpecError("survival outcome cannot be differenced");

  const bool imports = spec.outcome == Outcome::log_imports;
  const auto& flows = imports ? corpus.imports : corpus.exports;

  std::map<std::string, CellSeries> cells;
  int min_year = std::numeric_limits<int>::max();
  int max_year = std::numeric_limits<int>::min();
  for (const auto& rec : flows) {
    const std::string key = rec.firm_id + "|" + rec.product + "|" + rec.country;
    auto& cell = cells[key];
    cell.firm = rec.firm_id;
    cell.country = rec.country;
    cell.quantity[rec.year] += rec.quantity;
    min_year = std::min(min_year, rec.year);
    max_year = std::max(max_year, rec.year);
  }
  if (cells.empty()) throw SpecError("panel has no rows for the requested outcome");

  std::map<std::pair<std::string, int>, double> shock_at;
  for (const auto& s : shock_table)
    if (s.variant == spec.variant) shock_at[{s.firm_id, s.year}] = s.value;

  std::map<std::pair<std::string, int>, double> covariate_at;
  const bool has_covariate = !spec.covariate_csv.empty();
  if (has_covariate) {
    const csv::Table table = csv::read_csv(spec.covariate_csv);
    const int c_country = table.require("country");
    const int c_year = table.require("year");
    const int c_value = table.require("value");
    for (const auto& row : table.rows)
      covariate_at[{row[c_country], static_cast<int>(csv::parse_int(row[c_year]))}] =
          csv::parse_double(row[c_value]);
  }
  const int n_cov = has_covariate ? 1 + spec.covariate_lags : 0;

  const int n_x = 1 + spec.shock_lags + spec.outcome_lags + n_cov;
  std::vector<double> y_rows;
  std::vector<std::vector<double>> x_rows;
  std::vector<int> fe_cell, fe_year, cl_firm, cl_country;
  std::map<std::string, int> cell_ids;
  std::map<int, int> year_ids;
  std::map<std::string, int> firm_ids, country_ids;
  long dropped = 0;

  for (const auto& [key, cell] : cells) {
    for (int t = min_year; t <= max_year; ++t) {
      const auto shock_it = shock_at.find({cell.firm, t});
      if (shock_it == shock_at.end()) continue;

      auto quantity_at = [&](int year) -> const double* {
        const auto it = cell.quantity.find(year);
        return it == cell.quantity.end() ? nullptr : &it->second;
      };

      bool ok = true;
      double y = 0.0;
      if (spec.outcome == Outcome::survival) {
        if (quantity_at(t) == nullptr) continue;  // conditioned on active at t
        if (t + spec.horizon > max_year) continue;  // censored, not dead
        y = quantity_at(t + spec.horizon) != nullptr ? 1.0 : 0.0;
      } else if (spec.differenced) {
        const double* now = quantity_at(t + spec.horizon);
        const double* before = quantity_at(t + spec.horizon - 1);
        if (now == nullptr || before == nullptr) ok = false;
        else y = std::log(*now) - std::log(*before);
      } else {
        const double* now = quantity_at(t + spec.horizon);
        if (now == nullptr) ok = false;
        else y = std::log(*now);
      }

      std::vector<double> x(n_x, 0.0);
      if (ok) {
        x[0] = shock_it->second;
        for (int l = 1; ok && l <= spec.shock_lags; ++l) {
          const auto lag = shock_at.find({cell.firm, t - l});
          if (lag == shock_at.end()) ok = false;
          else x[l] = lag->second;
        }
        for (int l = 1; ok && l <= spec.outcome_lags; ++l) {
          const double* q = quantity_at(t - l);
          if (q == nullptr) ok = false;
          else x[spec.shock_lags + l] = std::log(*q);
        }
        for (int l = 0; ok && l < n_cov; ++l) {
          const auto it = covariate_at.find({cell.country, t - l});
          if (it == covariate_at.end()) ok = false;
          else x[1 + spec.shock_lags + spec.outcome_lags + l] = it->second;
        }
      }
      if (!ok) {
        ++dropped;
        continue;
      }

      y_rows.push_back(y);
      x_rows.push_back(std::move(x));
      fe_cell.push_back(dense_label(cell_ids, key));
      fe_year.push_back(dense_label(year_ids, t));
      cl_firm.push_back(dense_label(firm_ids, cell.firm));
      cl_country.push_back(dense_label(country_ids, cell.country));
    }
  }

  Panel panel;
  const long n = static_cast<long>(y_rows.size());
  panel.y.resize(n);
  panel.X.resize(n, n_x);
  for (long i = 0; i < n; ++i) {
    panel.y(i) = y_rows[i];
    for (int j = 0; j < n_x; ++j) panel.X(i, j) = x_rows[i][j];
  }
  panel.names.push_back("shock");
  for (int l = 1; l <= spec.shock_lags; ++l)
    panel.names.push_back("shock_lag" + std::to_string(l));
  for (int l = 1; l <= spec.outcome_lags; ++l)
    panel.names.push_back("outcome_lag" + std::to_string(l));
  for (int l = 0; l < n_cov; ++l)
    panel.names.push_back(l == 0 ? "covariate" : "covariate_lag" + std::to_string(l));
  panel.fe_cell = std::move(fe_cell);
  panel.fe_year = std::move(fe_year);
  panel.cluster_firm = std::move(cl_firm);
  panel.cluster_country = std::move(cl_country);
  panel.rows_dropped_missing = dropped;
  return panel;
}

DemeanDiagnostics demean_hdfe(Eigen::MatrixXd& data,
                              const std::vector<std::vector<int>>& fe_groups,
                              double tol, int max_iter) {
  DemeanDiagnostics diag;
  if (fe_groups.empty()) {
    diag.converged = true;
    return diag;
  }
  const long n = data.rows();
  const long k = data.cols();
  std::vector<int> group_counts;

  for (int it = 0; it < max_iter; ++it) {
    double max_change = 0.0;
    for (const auto& groups : fe_groups) {
      int n_groups = 0;
      for (const int g : groups) n_groups = std::max(n_groups, g + 1);
      Eigen::MatrixXd means = Eigen::MatrixXd::Zero(n_groups, k);
      Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_groups);
      for (long i = 0; i < n; ++i) {
        means.row(groups[i]) += data.row(i);
        counts(groups[i]) += 1.0;
      }
      for (int g = 0; g < n_groups; ++g)
        if (counts(g) > 0.0) means.row(g) /= counts(g);
      max_change = std::max(max_change, means.cwiseAbs().maxCoeff());
      for (long i = 0; i < n; ++i) data.row(i) -= means.row(groups[i]);
    }
    diag.iterations = it + 1;
    if (max_change <= tol) {
      diag.converged = true;
      return diag;
    }
  }
  throw NoConvergence("fixed-effect demeaning did not converge after " +
                          std::to_string(max_iter) + " sweeps",
                      diag.iterations, 0.0);
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  if (rank < X.cols()) {
    std::vector<int> offenders;
    const auto& perm = qr.colsPermutation().indices();
    for (int i = rank; i < X.cols(); ++i) offenders.push_back(perm(i));
    std::sort(offenders.begin(), offenders.end());
    std::string msg = "rank-deficient design; offending columns:";
    for (const int c : offenders) msg += " " + std::to_string(c);
    throw RankDeficient(msg, offenders);
  }
  OlsFit fit;
  fit.rank = rank;
  fit.coef = qr.solve(y);
  fit.residuals = y - X * fit.coef;
  return fit;
}

ClusteredVcov cluster2_vcov(const Eigen::VectorXd& residuals, const Eigen::MatrixXd& X,
                            const std::vector<int>& cluster_a,
                            const std::vector<int>& cluster_b) {
  const long n = X.rows();
  const long k = X.cols();
  if (static_cast<long>(cluster_a.size()) != n || static_cast<long>(cluster_b.size()) != n)
    throw SpecError("cluster label length mismatch");

  const Eigen::MatrixXd bread = (X.transpose() * X).inverse();

  auto one_way = [&](const std::vector<int>& labels, int& n_groups_out) {
    std::map<int, Eigen::VectorXd> scores;
    for (long i = 0; i < n; ++i) {
      auto [it, inserted] = scores.try_emplace(labels[i], Eigen::VectorXd::Zero(k));
      it->second += residuals(i) * X.row(i).transpose();
    }
    const int g = static_cast<int>(scores.size());
    n_groups_out = g;
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [label, s] : scores) meat += s * s.transpose();
    const double correction = static_cast<double>(g) / std::max(1.0, g - 1.0) *
                              static_cast<double>(n - 1) /
                              static_cast<double>(std::max<long>(1, n - k));
    return Eigen::MatrixXd(correction * bread * meat * bread);
  };

  std::vector<int> inter(n);
  {
    std::map<std::pair<int, int>, int> pair_ids;
    for (long i = 0; i < n; ++i)
      inter[i] = dense_label(pair_ids, std::make_pair(cluster_a[i], cluster_b[i]));
  }

  ClusteredVcov out;
  const Eigen::MatrixXd va = one_way(cluster_a, out.clusters_a);
  const Eigen::MatrixXd vb = one_way(cluster_b, out.clusters_b);
  const Eigen::MatrixXd vab = one_way(inter, out.clusters_ab);
  if (out.clusters_a < 2 || out.clusters_b < 2)
    throw DegenerateClusters("need at least 2 clusters per dimension (got " +
                             std::to_string(out.clusters_a) + " and " +
                             std::to_string(out.clusters_b) + ")");
  Eigen::MatrixXd v = va + vb - vab;
  v = 0.5 * (v + v.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
  const Eigen::VectorXd values = eig.eigenvalues();
  if (values.minCoeff() < 0.0) {
    const double scale = std::max(1.0, std::abs(values.maxCoeff()));
    if (values.minCoeff() < -1e-12 * scale) out.repaired = true;
    const Eigen::VectorXd clipped = values.cwiseMax(0.0);
    v = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  }
  out.vcov = v;
  return out;
}

RegressionResult run_spec(const records::Corpus& corpus,
                          const std::vector<shocks::FirmShock>& shock_table,
                          const RegressionSpec& spec) {
  const records::Corpus* working = &corpus;
  records::Corpus filtered;
  if (!spec.partition.empty()) {
    filtered = partition(corpus, spec.partition).corpus;
    working = &filtered;
  }

  Panel panel = build_panel(*working, shock_table, spec);

  // Singleton FE groups are perfectly absorbed; drop them up front (dropping
  // can create new singletons, so iterate to a fixed point).
  long singletons = 0;
  for (;;) {
    const long n = panel.y.size();
    std::map<int, long> cell_count, year_count;
    for (long i = 0; i < n; ++i) {
      ++cell_count[panel.fe_cell[i]];
      ++year_count[panel.fe_year[i]];
    }
    std::vector<long> keep;
    keep.reserve(n);
    for (long i = 0; i < n; ++i)
      if (cell_count[panel.fe_cell[i]] > 1 && year_count[panel.fe_year[i]] > 1)
        keep.push_back(i);
    if (static_cast<long>(keep.size()) == n) break;
    singletons += n - static_cast<long>(keep.size());
    Eigen::VectorXd y2(keep.size());
    Eigen::MatrixXd X2(keep.size(), panel.X.cols());
    std::vector<int> fc, fy, cf, cc;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      y2(j) = panel.y(keep[j]);
      X2.row(j) = panel.X.row(keep[j]);
      fc.push_back(panel.fe_cell[keep[j]]);
      fy.push_back(panel.fe_year[keep[j]]);
      cf.push_back(panel.cluster_firm[keep[j]]);
      cc.push_back(panel.cluster_country[keep[j]]);
    }
    panel.y = std::move(y2);
    panel.X = std::move(X2);
    panel.fe_cell = std::move(fc);
    panel.fe_year = std::move(fy);
    panel.cluster_firm = std::move(cf);
    panel.cluster_country = std::move(cc);
    if (panel.y.size() == 0) throw SpecError("all rows absorbed by singleton groups");
  }

  const long n = panel.y.size();
  if (n <= panel.X.cols()) throw SpecError("panel too small after pruning");

  // Relabel groups densely after pruning.
  auto relabel = [](std::vector<int>& labels) {
    std::map<int, int> ids;
    for (auto& l : labels) l = dense_label(ids, l);
    return static_cast<int>(ids.size());
  };
  const int n_cells = relabel(panel.fe_cell);
  const int n_years = relabel(panel.fe_year);
  relabel(panel.cluster_firm);
  relabel(panel.cluster_country);

  const double mean_outcome = panel.y.mean();

  Eigen::MatrixXd data(n, 1 + panel.X.cols());
  data.col(0) = panel.y;
  data.rightCols(panel.X.cols()) = panel.X;
  const DemeanDiagnostics diag =
      demean_hdfe(data, {panel.fe_cell, panel.fe_year}, spec.demean_tol,
                  spec.demean_max_iter);

  const Eigen::VectorXd y_t = data.col(0);
  const Eigen::MatrixXd X_t = data.rightCols(panel.X.cols());
  const OlsFit fit = ols(y_t, X_t);
  const ClusteredVcov cv =
      cluster2_vcov(fit.residuals, X_t, panel.cluster_firm, panel.cluster_country);

  RegressionResult result;
  result.names = panel.names;
  result.coef = fit.coef;
  result.vcov = cv.vcov;
  result.n_obs = n;
  result.n_cells = n_cells;
  result.n_years = n_years;
  result.singletons_dropped = singletons;
  result.rows_dropped_missing = panel.rows_dropped_missing;
  result.demeaning = diag;
  result.vcov_repaired = cv.repaired;
  result.shock_coef = fit.coef(0);
  result.shock_se = result.se(0);
  if (spec.outcome == Outcome::survival)
    result.lpm_within_band = mean_outcome >= -0.5 && mean_outcome <= 1.5;
  return result;
}

std::vector<std::string> result_lines(const RegressionSpec& spec,
                                      const RegressionResult& result) {
  std::vector<std::string> lines;
  auto add = [&](const std::string& key, const std::string& value) {
    lines.push_back(key + " = " + value);
  };
  add("spec.outcome", outcome_name(spec.outcome));
  add("spec.horizon", std::to_string(spec.horizon));
  add("spec.variant", shocks::variant_name(spec.variant));
  add("spec.outcome_lags", std::to_string(spec.outcome_lags));
  add("spec.shock_lags", std::to_string(spec.shock_lags));
  add("spec.differenced", spec.differenced ? "true" : "false");
  if (!spec.partition.scheme.empty()) {
    add("spec.partition.scheme", spec.partition.scheme);
    add("spec.partition.class", spec.partition.cls);
  }
  if (!spec.partition.income_group.empty())
    add("spec.partition.income_group", spec.partition.income_group);
  if (!spec.partition.size_side.empty())
    add("spec.partition.size", spec.partition.size_side);
  if (!spec.covariate_csv.empty()) {
    add("spec.covariate_csv", spec.covariate_csv);
    add("spec.covariate_lags", std::to_string(spec.covariate_lags));
  }
  add("n_obs", std::to_string(result.n_obs));
  add("fe.cells", std::to_string(result.n_cells));
  add("fe.years", std::to_string(result.n_years));
  add("fe.singletons_dropped", std::to_string(result.singletons_dropped));
  add("rows_dropped_missing", std::to_string(result.rows_dropped_missing));
  add("demeaning.iterations", std::to_string(result.demeaning.iterations));
  add("demeaning.converged", result.demeaning.converged ? "true" : "false");
  add("vcov.repaired", result.vcov_repaired ? "true" : "false");
  add("lpm_within_band", result.lpm_within_band ? "true" : "false");
  for (int i = 0; i < result.coef.size(); ++i) {
    const double se = result.se(i);
    const double t = se > 0.0 ? result.coef(i) / se : std::nan("");
    add("coef." + result.names[i], csv::format_double(result.coef(i)));
    add("se." + result.names[i], csv::format_double(se));
    add("t." + result.names[i], csv::format_double(t));
  }
  return lines;
}

}  // namespace tradelab::econ
