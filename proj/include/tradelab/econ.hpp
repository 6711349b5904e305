#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tradelab/records.hpp"
#include "tradelab/shocks.hpp"

namespace tradelab::econ {

enum class Outcome { log_imports, log_exports, survival };

Outcome outcome_from_name(const std::string& name);
const char* outcome_name(Outcome o);

struct PartitionRule {
  std::string scheme;          // classification partition: scheme + cls
  std::string cls;
  std::string income_group;    // advanced | emerging, on the record's country
  std::string size_side;       // above | below sector-year mean employment
  std::string employment_csv;  // firm_id,year,sector,employment

  bool empty() const {
    return scheme.empty() && cls.empty() && income_group.empty() && size_side.empty();
  }
};

struct PartitionResult {
  records::Corpus corpus;
  int unknown_products = 0;  // records dropped for missing classification
};

// Row filters applied to both trade directions; classification partitions
// need classifications.csv entries, income partitions need countries.csv,
// size partitions need the employment file (MissingLookup otherwise).
PartitionResult partition(const records::Corpus& corpus, const PartitionRule& rule);

struct RegressionSpec {
  Outcome outcome = Outcome::log_exports;
  int horizon = 0;  // outcome measured at t + horizon
  shocks::ShockVariant variant = shocks::ShockVariant::supplier_average;
  int outcome_lags = 2;       // lagged log quantities entering the controls
  int shock_lags = 0;
  bool differenced = false;   // outcome as the one-year change at t + horizon
  PartitionRule partition;
  // Optional country-year control (e.g. a log real exchange rate):
  // CSV country,year,value; current value plus covariate_lags lags.
  std::string covariate_csv;
  int covariate_lags = 0;
  double demean_tol = 1e-10;
  int demean_max_iter = 10000;
};

struct Panel {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> names;      // column names; the shock is "shock"
  std::vector<int> fe_cell, fe_year;   // dense group labels per row
  std::vector<int> cluster_firm, cluster_country;
  long rows_dropped_missing = 0;
};

Panel build_panel(const records::Corpus& corpus,
                  const std::vector<shocks::FirmShock>& shock_table,
                  const RegressionSpec& spec);

struct DemeanDiagnostics {
  int iterations = 0;
  bool converged = false;
};

// Alternating projections across FE dimensions until the largest column
// change falls below tol. Columns of data are transformed in place.
DemeanDiagnostics demean_hdfe(Eigen::MatrixXd& data,
                              const std::vector<std::vector<int>>& fe_groups,
                              double tol = 1e-10, int max_iter = 10000);

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  int rank = 0;
};

// QR least squares; throws RankDeficient with the offending columns.
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

// Cameron-Gelbach-Miller two-way variance: V_A + V_B - V_AB, each one-way
// sandwich scaled by G/(G-1) * (N-1)/(N-K). Negative eigenvalues of the
// result are truncated to zero and flagged.
struct ClusteredVcov {
  Eigen::MatrixXd vcov;
  bool repaired = false;
  int clusters_a = 0, clusters_b = 0, clusters_ab = 0;
};

ClusteredVcov cluster2_vcov(const Eigen::VectorXd& residuals, const Eigen::MatrixXd& X,
                            const std::vector<int>& cluster_a,
                            const std::vector<int>& cluster_b);

struct RegressionResult {
  std::vector<std::string> names;
  Eigen::VectorXd coef;
  Eigen::MatrixXd vcov;
  long n_obs = 0;
  int n_cells = 0;
  int n_years = 0;
  long singletons_dropped = 0;
  long rows_dropped_missing = 0;
  DemeanDiagnostics demeaning;
  bool vcov_repaired = false;
  double shock_coef = 0.0;
  double shock_se = 0.0;
  bool lpm_within_band = true;  // survival sanity band, flagged not fatal

  double se(int i) const { return std::sqrt(std::max(0.0, vcov(i, i))); }
};

// Full pipeline: partition, panel, singleton pruning, demeaning, OLS,
// two-way clustered variance. Headline estimate is the shock coefficient.
RegressionResult run_spec(const records::Corpus& corpus,
                          const std::vector<shocks::FirmShock>& shock_table,
                          const RegressionSpec& spec);

// Flat key=value block plus a coefficient table, for the CLI writers.
std::vector<std::string> result_lines(const RegressionSpec& spec,
                                      const RegressionResult& result);

}  // namespace tradelab::econ
